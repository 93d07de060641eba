//! e-chains up to conjugacy, the cuspidal pairs attached to them and the
//! local character counts of chain stabilisers.
//!
//! A chain is a strictly increasing sequence of flats starting at the flat of
//! `G`. Its stabiliser in `G` is `L(σ)·H_σ`, where `H_σ` is the stabiliser of
//! all flats in `W` and `W_{L(σ)}` (the pointwise stabiliser of the last flat)
//! is the part already inside `L(σ)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::cycpoly::{check_prime, int_valuation, CycProduct};
use crate::error::{Error, Result};
use crate::genre::{levi_factor_names, levi_order, Arrangement, Coord, ESetup, Flat, GroupDescriptor, Model, Series};
use crate::group::DegreeCache;
use crate::uniphc::{core_characters, cuspidal_core_labels, factor_characters, pair_of, BlockId, CountTable, PairClass, UnipLabel};

#[derive(Clone, Debug, Serialize)]
pub struct EChain {
    /// Flat indices, the first being the flat of `G`.
    pub flats: Vec<u32>,
    /// `H_σ` as element indices of `W`.
    #[serde(skip)]
    pub stabilizer: Vec<u32>,
    /// `W_{L(σ)}`.
    #[serde(skip)]
    pub weyl: Vec<u32>,
}

impl EChain {
    pub fn len(&self) -> usize {
        self.flats.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sign(&self) -> i64 {
        if self.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn last(&self) -> u32 {
        *self.flats.last().expect("chains are non-empty")
    }

    /// `|H_σ / W_{L(σ)}|`.
    pub fn relative_order(&self) -> usize {
        self.stabilizer.len() / self.weyl.len()
    }
}

/// A cuspidal pair of `L(σ)` with `M < G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalPair {
    pub class: PairClass,
    /// Flat of `M`.
    pub flat: u32,
    /// `μ(1)`.
    pub degree: CycProduct,
    /// `M = L(σ)`.
    pub terminal: bool,
}

/// `(σ, M, μ)` up to conjugacy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triple {
    pub chain: usize,
    pub pair: PairClass,
}

/// Chain census for `(G, e)`.
pub struct ChainContext {
    pub group: GroupDescriptor,
    pub setup: ESetup,
    pub arr: Arrangement,
    pub chains: Vec<EChain>,
    index: HashMap<Vec<u32>, usize>,
}

impl ChainContext {
    pub fn new(g: &GroupDescriptor, e: u32, max_len: Option<usize>) -> Result<Self> {
        let arr = Arrangement::for_group(g, e)?;
        let setup = arr.setup;
        let mut cx = ChainContext { group: *g, setup, arr, chains: Vec::new(), index: HashMap::new() };
        cx.enumerate(max_len);
        Ok(cx)
    }

    fn enumerate(&mut self, max_len: Option<usize>) {
        let mut level = vec![vec![self.arr.top()]];
        let nf = self.arr.len() as u32;
        let mut depth = 0;
        while !level.is_empty() {
            for seq in &level {
                self.push_chain(seq.clone());
            }
            if max_len.is_some_and(|m| depth >= m) {
                break;
            }
            let mut next = BTreeSet::new();
            for seq in &level {
                let last = *seq.last().unwrap();
                for f in 0..nf {
                    if f != last && self.arr.within(last, f) {
                        let mut s = seq.clone();
                        s.push(f);
                        next.insert(self.canonical(&s).0);
                    }
                }
            }
            level = next.into_iter().collect();
            depth += 1;
        }
    }

    fn push_chain(&mut self, flats: Vec<u32>) {
        let stabilizer: Vec<u32> = (0..self.arr.group.order() as u32)
            .filter(|&g| flats.iter().all(|&f| self.arr.act(g, f) == f))
            .collect();
        let weyl = self.arr.pointwise_stabilizer(*flats.last().unwrap());
        self.index.insert(flats.clone(), self.chains.len());
        self.chains.push(EChain { flats, stabilizer, weyl });
    }

    /// Smallest image of the flag under `W`, with an element realising it.
    pub fn canonical(&self, seq: &[u32]) -> (Vec<u32>, u32) {
        let mut best: Option<(Vec<u32>, u32)> = None;
        for g in 0..self.arr.group.order() as u32 {
            let img: Vec<u32> = seq.iter().map(|&f| self.arr.act(g, f)).collect();
            if best.as_ref().is_none_or(|(b, _)| img < *b) {
                best = Some((img, g));
            }
        }
        best.expect("W is non-empty")
    }

    pub fn chain_index(&self, seq: &[u32]) -> usize {
        self.index[&self.canonical(seq).0]
    }

    pub fn census(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.chains {
            *out.entry(c.len()).or_insert(0) += 1;
        }
        out
    }

    pub fn render_chain(&self, chain: &EChain) -> String {
        let mut parts = vec!["G".to_string()];
        for &f in &chain.flats[1..] {
            parts.push(levi_factor_names(&self.group, &self.arr.levi(f)).join("x"));
        }
        parts.join(" > ")
    }

    fn core_rank(&self, zeros: u32) -> u32 {
        if self.setup.coreless() {
            0
        } else {
            self.setup.min_core + self.setup.step * zeros
        }
    }

    /// The flat of `M` with zero set `zeros` and singletons elsewhere.
    fn pair_flat(&self, zeros: &[usize]) -> u32 {
        let w = self.setup.weight as usize;
        let coords = (0..w)
            .map(|i| if zeros.contains(&i) { Coord::Zero } else { Coord::Free { rep: i as u8, color: 0 } })
            .collect();
        self.arr.index_of(&Flat { coords }).expect("pair flat exists")
    }

    pub fn cp(&self, chain: usize) -> Vec<LocalPair> {
        let c = &self.chains[chain];
        let k_flat = c.last();
        let zk = self.arr.flat(k_flat).zero_coords();
        let mut out = Vec::new();
        let max_zeros = if self.setup.coreless() { 0 } else { zk.len() };
        for k in 0..=max_zeros {
            let flat = self.pair_flat(&zk[..k]);
            if flat == self.arr.top() {
                continue;
            }
            for ch in cuspidal_core_labels(&self.setup, self.group.series, self.core_rank(k as u32)) {
                out.push(LocalPair {
                    class: PairClass { zeros: k as u32, label: ch.label },
                    flat,
                    degree: ch.degree,
                    terminal: flat == k_flat,
                });
            }
        }
        out
    }

    pub fn local_pair(&self, t: &Triple) -> Result<LocalPair> {
        self.cp(t.chain)
            .into_iter()
            .find(|p| p.class == t.pair)
            .ok_or_else(|| Error::InvalidArgument(format!("pair {:?} not in CP of chain {}", t.pair, t.chain)))
    }

    pub fn triples(&self) -> Vec<Triple> {
        (0..self.chains.len())
            .flat_map(|i| self.cp(i).into_iter().map(move |p| Triple { chain: i, pair: p.class }))
            .collect()
    }

    /// Append `M` if `M < L(σ)`, otherwise drop `L(σ) = M`.
    pub fn delta(&self, t: &Triple) -> Result<Triple> {
        let pair = self.local_pair(t)?;
        let mut flats = self.chains[t.chain].flats.clone();
        if pair.terminal {
            flats.pop();
        } else {
            flats.push(pair.flat);
        }
        Ok(Triple { chain: self.chain_index(&flats), pair: t.pair.clone() })
    }

    pub fn render_triple(&self, t: &Triple) -> String {
        format!("({}; {}; {})", self.render_chain(&self.chains[t.chain]), t.pair.zeros, t.pair.label)
    }
}

/// Central characters `Z(L*)^F` of the minimal Levi, written additively.
#[derive(Clone, Debug)]
pub struct ZSpace {
    /// Order of each coordinate factor.
    pub nb: u64,
    u_pows: Vec<u64>,
    /// `|Z(G*)|` for the linear series.
    scalar: Option<u64>,
    /// Slot 0 holds the scalar of a core that the minimal Levi already has.
    core_slot: bool,
    w: usize,
    quotient: bool,
    d_set: Vec<Vec<u64>>,
}

impl ZSpace {
    pub fn new(g: &GroupDescriptor, setup: &ESetup, q: u64) -> Self {
        let c = setup.colors as u64;
        let (nb, u): (u64, i128) = match g.series {
            Series::A => (q.pow(setup.step) - 1, q as i128),
            Series::TwoA => {
                let s = setup.step;
                let nb = if s.is_multiple_of(2) { q.pow(s) - 1 } else { q.pow(s) + 1 };
                (nb, -(q as i128))
            }
            Series::B | Series::C => {
                if setup.e % 2 == 1 {
                    (q.pow(setup.e) - 1, -(q as i128))
                } else {
                    (q.pow(setup.e / 2) + 1, q as i128)
                }
            }
        };
        let u = u.rem_euclid(nb as i128) as u64;
        let mut u_pows = vec![1 % nb];
        for i in 1..c as usize {
            u_pows.push(u_pows[i - 1] * u % nb);
        }
        let scalar = g.series.is_linear().then(|| if g.twisted() { q + 1 } else { q - 1 });
        let core_slot = g.series.is_linear() && !setup.coreless() && setup.min_core > 0;
        let w = setup.weight as usize;
        let mut z = ZSpace { nb, u_pows, scalar, core_slot, w, quotient: g.model == Model::Sc, d_set: Vec::new() };
        z.d_set = match scalar {
            Some(s) => (0..s).map(|k| z.scalar_vector(k, &(0..w).collect::<Vec<_>>())).collect(),
            None => vec![vec![0; z.len()]],
        };
        z
    }

    pub fn len(&self) -> usize {
        self.w + usize::from(self.core_slot)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn offset(&self) -> usize {
        usize::from(self.core_slot)
    }

    fn modulus(&self, slot: usize) -> u64 {
        if self.core_slot && slot == 0 {
            self.scalar.unwrap()
        } else {
            self.nb
        }
    }

    /// Core scalar `k` spread over the core slot and the given coordinates.
    fn scalar_vector(&self, k: u64, coords: &[usize]) -> Vec<u64> {
        let mut v = vec![0; self.len()];
        let s = self.scalar.unwrap_or(1);
        if self.core_slot {
            v[0] = k;
        }
        for &i in coords {
            v[self.offset() + i] = k * (self.nb / s) % self.nb;
        }
        v
    }

    /// Image of `z` under `W` element `g`.
    pub fn act(&self, arr: &Arrangement, g: u32, z: &[u64]) -> Vec<u64> {
        let el = arr.group.element(g);
        let off = self.offset();
        let mut out = z.to_vec();
        for i in 0..self.w {
            let dest = el.perm[i] as usize;
            out[off + dest] = z[off + i] * self.u_pows[el.colors[dest] as usize] % self.nb;
        }
        self.reduce(out)
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        (0..a.len()).map(|i| (a[i] + b[i]) % self.modulus(i)).collect()
    }

    /// Representative modulo `Z(G*)` in the sc model.
    pub fn reduce(&self, z: Vec<u64>) -> Vec<u64> {
        if !self.quotient {
            return z;
        }
        self.d_set.iter().map(|d| self.add(&z, d)).min().expect("D is non-empty")
    }

    /// `Z(K*)^F` embedded in the coordinates of the minimal Levi.
    pub fn central_set(&self, setup: &ESetup, flat: &Flat) -> Vec<Vec<u64>> {
        let zeros = flat.zero_coords();
        let blocks = flat.blocks();
        let has_core = self.scalar.is_some() && !setup.coreless() && (setup.min_core > 0 || !zeros.is_empty());
        let scalars = if has_core { self.scalar.unwrap() } else { 1 };
        let mut out = BTreeSet::new();
        let total = (self.nb as usize).pow(blocks.len() as u32);
        for k in 0..scalars {
            let base = self.scalar_vector(k, &zeros);
            for code in 0..total {
                let mut v = base.clone();
                let mut x = code;
                for b in &blocks {
                    let y = (x % self.nb as usize) as u64;
                    x /= self.nb as usize;
                    for &(i, color) in b {
                        v[self.offset() + i] = self.u_pows[color as usize] * y % self.nb;
                    }
                }
                out.insert(self.reduce(v));
            }
        }
        out.into_iter().collect()
    }

    /// Coordinatewise ℓ'-part.
    pub fn ell_prime_part(&self, z: &[u64], ell: u64) -> Vec<u64> {
        (0..z.len())
            .map(|i| {
                let n = self.modulus(i);
                let l_part = ell.pow(int_valuation(&BigInt::from(n), ell));
                let rest = n / l_part;
                if rest == 1 {
                    return 0;
                }
                // idempotent: 0 mod l_part, 1 mod rest
                let inv = (1..rest).find(|a| (l_part % rest) * a % rest == 1).expect("coprime");
                let idem = (l_part as u128 * inv as u128 % n as u128) as u64;
                (z[i] as u128 * idem as u128 % n as u128) as u64
            })
            .collect()
    }

    /// Canonical label of the class of `z` modulo `D` and a subgroup of `W`.
    fn canonical_class(&self, arr: &Arrangement, z: &[u64], sub: &[u32]) -> Vec<u64> {
        sub.iter()
            .flat_map(|&g| {
                let gz = self.act(arr, g, z);
                self.d_set.iter().map(move |d| self.add(&gz, d)).collect::<Vec<_>>()
            })
            .min()
            .expect("non-empty")
    }
}

/// One orbit of central characters under a chain stabiliser.
#[derive(Clone, Debug, Serialize)]
pub struct ZOrbit {
    pub representative: Vec<u64>,
    pub size: usize,
    /// Degrees of `Irr(S/W)` for the stabiliser `S` of the orbit representative.
    pub eta_degrees: Vec<u64>,
    #[serde(skip)]
    stab_valuation: u32,
}

/// Local counts at a fixed `(q, ℓ)`.
pub struct LocalCounter<'a> {
    pub cx: &'a ChainContext,
    pub q: u64,
    pub ell: u64,
    pub z: ZSpace,
    cache: DegreeCache,
    transporter: HashMap<u32, u32>,
    pair_stab: HashMap<u32, Vec<u32>>,
}

impl<'a> LocalCounter<'a> {
    pub fn new(cx: &'a ChainContext, q: u64, ell: u64) -> Result<Self> {
        let e = check_prime(q, ell)?;
        if e != cx.setup.e {
            return Err(Error::InvalidArgument(format!("chain census built for e={} but q={q}, ell={ell} gives e={e}", cx.setup.e)));
        }
        let z = ZSpace::new(&cx.group, &cx.setup, q);
        Ok(LocalCounter { cx, q, ell, z, cache: DegreeCache::default(), transporter: HashMap::new(), pair_stab: HashMap::new() })
    }

    fn v(&self, p: &CycProduct) -> u32 {
        p.ell_valuation(self.q, self.ell).expect("prime checked")
    }

    fn v_int(&self, n: u64) -> u32 {
        int_valuation(&BigInt::from(n), self.ell)
    }

    fn degrees(&mut self, sub: &[u32], normal: &[u32]) -> Vec<u64> {
        self.cache.quotient_degrees(self.cx.arr.group.table(), sub, normal)
    }

    /// Block of `μ·ẑ` restricted to `M`, induced to `G`.
    pub fn block_of_local(&mut self, class: &PairClass, m_flat: u32, z: &[u64]) -> BlockId {
        let arr = &self.cx.arr;
        let zeros: Vec<usize> = (0..class.zeros as usize).collect();
        let canon = self.cx.pair_flat(&zeros);
        let g = *self
            .transporter
            .entry(m_flat)
            .or_insert_with(|| (0..arr.group.order() as u32).find(|&g| arr.act(g, m_flat) == canon).expect("conjugate"));
        let stab = self.pair_stab.entry(canon).or_insert_with(|| arr.setwise_stabilizer(canon)).clone();
        let zl = self.z.ell_prime_part(z, self.ell);
        let moved = self.z.act(arr, g, &zl);
        let label = self.z.canonical_class(arr, &moved, &stab);
        if label.iter().all(|&x| x == 0) {
            BlockId::unipotent(class.clone())
        } else {
            BlockId { pair: class.clone(), central: label }
        }
    }

    fn central_orbits(&mut self, flat: u32, acting: &[u32], normal: &[u32]) -> Vec<ZOrbit> {
        let arr = &self.cx.arr;
        let set = self.z.central_set(&self.cx.setup, arr.flat(flat));
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut raw = Vec::new();
        for z in set {
            if seen.contains(&z) {
                continue;
            }
            let mut stab = Vec::new();
            let mut orbit = BTreeSet::new();
            for &g in acting {
                let gz = self.z.act(arr, g, &z);
                if gz == z {
                    stab.push(g);
                }
                orbit.insert(gz);
            }
            let size = orbit.len();
            seen.extend(orbit);
            raw.push((z, size, stab));
        }
        raw.into_iter()
            .map(|(z, size, stab)| {
                let eta_degrees = self.degrees(&stab, normal);
                let stab_valuation = self.v_int((stab.len() / normal.len()) as u64);
                ZOrbit { representative: z, size, eta_degrees, stab_valuation }
            })
            .collect()
    }

    /// Orbits of the pseudo-unipotent labels `μ·ẑ` under the chain stabiliser.
    pub fn pseudo_set(&mut self, t: &Triple) -> Result<Vec<ZOrbit>> {
        let pair = self.cx.local_pair(t)?;
        let chain = &self.cx.chains[t.chain];
        if pair.terminal {
            let k_flat = chain.flats[chain.flats.len() - 2];
            let weyl_m = chain.weyl.clone();
            Ok(self.central_orbits(k_flat, &chain.stabilizer.clone(), &weyl_m))
        } else {
            Ok(self.central_orbits(chain.last(), &chain.stabilizer.clone(), &chain.weyl.clone()))
        }
    }

    /// `k_u^d(B_σ, (M, μ))`.
    pub fn local_count(&mut self, t: &Triple) -> Result<CountTable> {
        let pair = self.cx.local_pair(t)?;
        if pair.terminal {
            self.count_terminal(t, &pair)
        } else {
            self.count_inner(t, &pair)
        }
    }

    fn count_terminal(&mut self, t: &Triple, pair: &LocalPair) -> Result<CountTable> {
        let cx = self.cx;
        let m_order = levi_order(&cx.group, &cx.arr.levi(pair.flat));
        let base = self.v(&m_order) as i64 - self.v(&pair.degree) as i64;
        let mut table = CountTable::new();
        for orbit in self.pseudo_set(t)? {
            let block = self.block_of_local(&pair.class, pair.flat, &orbit.representative);
            for &eta in &orbit.eta_degrees {
                let d = base + orbit.stab_valuation as i64 - self.v_int(eta) as i64;
                table.add(block.clone(), to_defect(d)?, 1);
            }
        }
        Ok(table)
    }

    fn count_inner(&mut self, t: &Triple, pair: &LocalPair) -> Result<CountTable> {
        let cx = self.cx;
        let arr = &cx.arr;
        let chain = &cx.chains[t.chain];
        let k_flat = chain.last();
        let flat = arr.flat(k_flat).clone();
        let k_levi = arr.levi(k_flat);
        let v_k = self.v(&levi_order(&cx.group, &k_levi)) as i64;

        // core labels of K in the series of (M, μ)
        let lambdas: Vec<u32> = if cx.setup.coreless() {
            vec![0]
        } else {
            core_characters(cx.group.series, k_levi.core_rank)
                .into_iter()
                .filter(|ch| pair_of_core(cx, &ch.label) == t.pair.label)
                .map(|ch| self.v(&ch.degree))
                .collect()
        };

        // torus factor labels, permuted by H_σ together with z
        let blocks = flat.blocks();
        let block_of: HashMap<usize, usize> =
            blocks.iter().enumerate().flat_map(|(bi, b)| b.iter().map(move |&(i, _)| (i, bi))).collect();
        let factor_vals: Vec<Vec<u32>> = blocks
            .iter()
            .map(|b| factor_characters(cx.setup.factor_kind, b.len() as u32).iter().map(|(_, d)| self.v(d)).collect())
            .collect();
        let block_maps: Vec<Vec<usize>> = chain
            .stabilizer
            .iter()
            .map(|&g| {
                let el = arr.group.element(g);
                blocks.iter().map(|b| block_of[&(el.perm[b[0].0] as usize)]).collect()
            })
            .collect();
        let zset = self.z.central_set(&cx.setup, &flat);
        let label_codes: Vec<Vec<usize>> = cartesian(&factor_vals.iter().map(Vec::len).collect::<Vec<_>>());

        let mut table = CountTable::new();
        let mut seen: BTreeSet<(Vec<usize>, Vec<u64>)> = BTreeSet::new();
        let stabilizer = chain.stabilizer.clone();
        let weyl = chain.weyl.clone();
        for labels in &label_codes {
            for z in &zset {
                let key = (labels.clone(), z.clone());
                if seen.contains(&key) {
                    continue;
                }
                let mut stab = Vec::new();
                for (hi, &g) in stabilizer.iter().enumerate() {
                    let mut moved = vec![0usize; labels.len()];
                    for (b, &dest) in block_maps[hi].iter().enumerate() {
                        moved[dest] = labels[b];
                    }
                    let gz = self.z.act(arr, g, z);
                    let img = (moved, gz);
                    if img == key {
                        stab.push(g);
                    }
                    seen.insert(img);
                }
                let etas = self.degrees(&stab, &weyl);
                let v_stab = self.v_int((stab.len() / weyl.len()) as u64) as i64;
                let v_labels: i64 = labels.iter().enumerate().map(|(b, &i)| factor_vals[b][i] as i64).sum();
                let block = self.block_of_local(&pair.class, pair.flat, z);
                for &v_lambda in &lambdas {
                    for &eta in &etas {
                        let d = v_k + v_stab - v_lambda as i64 - v_labels - self.v_int(eta) as i64;
                        table.add(block.clone(), to_defect(d)?, 1);
                    }
                }
            }
        }
        Ok(table)
    }

    /// Counts agree across the Δ pairing.
    pub fn transport_check(&mut self, t: &Triple) -> Result<bool> {
        let other = self.cx.delta(t)?;
        Ok(self.local_count(t)? == self.local_count(&other)?)
    }

    /// Human-readable rows `(σ; M; μ; z-orbit; η)` for one triple.
    pub fn describe(&mut self, t: &Triple) -> Result<Vec<String>> {
        let head = self.cx.render_triple(t);
        let head = head.trim_end_matches(')');
        let mut rows = Vec::new();
        for o in self.pseudo_set(t)? {
            let z: Vec<String> = o.representative.iter().map(u64::to_string).collect();
            for eta in &o.eta_degrees {
                rows.push(format!("{head}; z=[{}]; eta={eta})", z.join(",")));
            }
        }
        Ok(rows)
    }
}

fn pair_of_core(cx: &ChainContext, label: &UnipLabel) -> UnipLabel {
    pair_of(&cx.setup, cx.group.series, label).label
}

fn to_defect(d: i64) -> Result<u32> {
    u32::try_from(d).map_err(|_| Error::NotIntegral(format!("negative defect {d}")))
}

fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}
