//! Unipotent characters, their degrees and defects, e-Harish-Chandra series
//! and unipotent blocks.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cycpoly::{check_prime, CycProduct};
use crate::error::Result;
use crate::genre::{order_polynomial, ESetup, FactorKind, GroupDescriptor, LeviClass, Series, WreathGroup};
use crate::labelcomb::{
    e_core, is_e_core, multipartitions, partitions, standard_tableaux, symbol_core, symbols_of_rank, HookKind,
    Partition, Symbol,
};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnipLabel {
    Partition(Partition),
    Symbol(Symbol),
}

impl fmt::Display for UnipLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnipLabel::Partition(p) => write!(f, "{p}"),
            UnipLabel::Symbol(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for UnipLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnipChar {
    pub label: UnipLabel,
    pub degree: CycProduct,
}

/// Degree of the unipotent character `lambda` of `GL_n(X)`, `X = (+-) q^k`, up to sign.
pub fn partition_degree(lambda: &Partition, negate: bool, k: u32) -> CycProduct {
    let mut num = CycProduct::q_power(k * lambda.n_invariant());
    for i in 1..=lambda.size() {
        num = num.mul(&CycProduct::signed_power_minus_one(negate, k, i));
    }
    let den = lambda
        .hook_lengths()
        .into_iter()
        .fold(CycProduct::one(), |acc, h| acc.mul(&CycProduct::signed_power_minus_one(negate, k, h)));
    num.div_exact(&den).expect("hook formula is a polynomial")
}

fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Degree of the unipotent character of `Sp_2n(q)` / `SO_2n+1(q)` labelled by `sym`.
pub fn symbol_degree(sym: &Symbol) -> CycProduct {
    let n = sym.rank();
    let (s, t) = (sym.top(), sym.bottom());
    let a = (s.len() + t.len()) as i64;
    let mut deg = CycProduct::one();
    let mut q_exp: i64 = 0;
    let mut twos: i64 = 0;
    for i in 1..=n {
        deg = deg.mul(&CycProduct::q_pow_minus_one(2 * i));
    }
    for row in [s, t] {
        for (i, &x) in row.iter().enumerate() {
            for &y in &row[i + 1..] {
                q_exp += x as i64;
                deg = deg.mul(&CycProduct::q_pow_minus_one(y - x));
            }
        }
    }
    for &x in s {
        for &y in t {
            q_exp += x.min(y) as i64;
            if x == y {
                twos += 1;
            } else {
                deg = deg.mul(&CycProduct::q_pow_plus_one(x.abs_diff(y)));
            }
        }
    }
    let mut den = CycProduct::one();
    for &x in s.iter().chain(t) {
        for h in 1..=x {
            den = den.mul(&CycProduct::q_pow_minus_one(2 * h));
        }
    }
    let mut i = 1;
    while a - 2 * i >= 2 {
        q_exp -= binom2(a - 2 * i);
        i += 1;
    }
    let c = (a - 1) / 2 - twos;
    assert!(q_exp >= 0 && c >= 0, "symbol degree out of range for {sym}");
    deg.mul(&CycProduct::q_power(q_exp as u32))
        .mul(&CycProduct::half_pow(c as u32))
        .div_exact(&den)
        .expect("symbol degree is a polynomial")
}

/// Labels and degrees of the unipotent characters of the core factor of rank `m`.
pub fn core_characters(series: Series, m: u32) -> Vec<UnipChar> {
    match series {
        Series::A | Series::TwoA => partitions(m)
            .into_iter()
            .map(|p| {
                let degree = partition_degree(&p, series == Series::TwoA, 1);
                UnipChar { label: UnipLabel::Partition(p), degree }
            })
            .collect(),
        Series::B | Series::C => symbols_of_rank(m, 2 * m + 1)
            .into_iter()
            .map(|s| {
                let degree = symbol_degree(&s);
                UnipChar { label: UnipLabel::Symbol(s), degree }
            })
            .collect(),
    }
}

pub fn unipotent_characters(g: &GroupDescriptor) -> Vec<UnipChar> {
    core_characters(g.series, g.rank)
}

/// Unipotent characters of a torus factor `GL_a(X)`.
pub fn factor_characters(kind: FactorKind, a: u32) -> Vec<(Partition, CycProduct)> {
    let (neg, k) = kind.signed_power();
    partitions(a).into_iter().map(|p| {
        let d = partition_degree(&p, neg, k);
        (p, d)
    }).collect()
}

pub fn defect(order: &CycProduct, degree: &CycProduct, q: u64, ell: u64) -> Result<u32> {
    Ok(order.ell_valuation(q, ell)? - degree.ell_valuation(q, ell)?)
}

fn hook_kind(e: u32) -> HookKind {
    if e % 2 == 1 {
        HookKind::Hook
    } else {
        HookKind::Cohook
    }
}

/// Cuspidal pair class: `zeros` zero coordinates in the flat model, and the
/// e-cuspidal label carried by the core factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairClass {
    pub zeros: u32,
    pub label: UnipLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspidalPair {
    pub class: PairClass,
    pub levi: LeviClass,
    /// Degree of the cuspidal character of the Levi.
    pub degree: CycProduct,
}

/// Core label of `label` and the resulting pair class.
pub fn pair_of(setup: &ESetup, series: Series, label: &UnipLabel) -> PairClass {
    if setup.coreless() {
        return PairClass { zeros: 0, label: UnipLabel::Partition(Partition::empty()) };
    }
    let (core, rank) = match label {
        UnipLabel::Partition(p) => {
            let c = e_core(p, setup.step);
            let r = c.size();
            (UnipLabel::Partition(c), r)
        }
        UnipLabel::Symbol(s) => {
            let (c, _) = symbol_core(s, setup.step, hook_kind(setup.e));
            let r = c.rank();
            (UnipLabel::Symbol(c), r)
        }
    };
    debug_assert!(matches!(series, Series::B | Series::C) == matches!(label, UnipLabel::Symbol(_)));
    PairClass { zeros: (rank - setup.min_core) / setup.step, label: core }
}

/// e-cuspidal labels of the core factor of rank `m`.
pub fn cuspidal_core_labels(setup: &ESetup, series: Series, m: u32) -> Vec<UnipChar> {
    if setup.coreless() {
        return if m == 0 { core_characters(series, 0) } else { Vec::new() };
    }
    core_characters(series, m)
        .into_iter()
        .filter(|c| match &c.label {
            UnipLabel::Partition(p) => is_e_core(p, setup.step),
            UnipLabel::Symbol(s) => crate::labelcomb::is_symbol_core(s, setup.step, hook_kind(setup.e)),
        })
        .collect()
}

pub fn pair_levi(setup: &ESetup, zeros: u32) -> LeviClass {
    let core = if setup.coreless() { 0 } else { setup.min_core + setup.step * zeros };
    LeviClass::new(core, vec![1; (setup.weight - zeros) as usize], setup.factor_kind, setup.e)
}

/// Is `(G, chi)` itself an e-cuspidal pair.
pub fn is_e_cuspidal(g: &GroupDescriptor, label: &UnipLabel, e: u32) -> Result<bool> {
    let setup = ESetup::new(g, e)?;
    let pc = pair_of(&setup, g.series, label);
    Ok(if setup.coreless() { setup.weight <= 1 } else { pc.zeros == setup.weight })
}

#[derive(Clone, Debug, Serialize)]
pub struct HcSeries {
    pub pair: CuspidalPair,
    pub members: Vec<UnipChar>,
}

pub fn ehc_series(g: &GroupDescriptor, e: u32) -> Result<Vec<HcSeries>> {
    let setup = ESetup::new(g, e)?;
    let mut by_pair: BTreeMap<PairClass, Vec<UnipChar>> = BTreeMap::new();
    for ch in unipotent_characters(g) {
        by_pair.entry(pair_of(&setup, g.series, &ch.label)).or_default().push(ch);
    }
    Ok(by_pair
        .into_iter()
        .map(|(class, members)| {
            let levi = pair_levi(&setup, class.zeros);
            let core_rank = levi.core_rank;
            let degree = cuspidal_core_labels(&setup, g.series, core_rank)
                .into_iter()
                .find(|c| c.label == class.label)
                .expect("core label is cuspidal")
                .degree;
            HcSeries { pair: CuspidalPair { class, levi, degree }, members }
        })
        .collect())
}

pub fn relative_weyl_with_lambda(g: &GroupDescriptor, pair: &CuspidalPair) -> Result<WreathGroup> {
    let setup = ESetup::new(g, pair.levi.e)?;
    let free = pair.levi.torus_factors.len() as u32;
    if free == 0 {
        return Ok(WreathGroup::trivial());
    }
    Ok(WreathGroup { factors: vec![(setup.colors, free)] })
}

/// Irreducible character degrees of a wreath group as `(degree, multiplicity)`.
pub fn wreath_irr_degrees(w: &WreathGroup) -> Vec<(u64, u64)> {
    let mut acc: BTreeMap<u64, u64> = BTreeMap::from([(1, 1)]);
    for &(c, m) in &w.factors {
        let mut local: BTreeMap<u64, u64> = BTreeMap::new();
        for mp in multipartitions(c as usize, m) {
            let mut deg: u128 = (1..=m as u128).product();
            for p in &mp {
                deg /= (1..=p.size() as u128).product::<u128>();
            }
            for p in &mp {
                deg *= standard_tableaux(p);
            }
            *local.entry(deg as u64).or_insert(0) += 1;
        }
        let mut next = BTreeMap::new();
        for (&d1, &m1) in &acc {
            for (&d2, &m2) in &local {
                *next.entry(d1 * d2).or_insert(0) += m1 * m2;
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

/// Block label: the G-class of the cuspidal pair and the canonical ℓ'-part of
/// the central datum (empty for unipotent blocks).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockId {
    pub pair: PairClass,
    pub central: Vec<u64>,
}

impl BlockId {
    pub fn unipotent(pair: PairClass) -> Self {
        BlockId { pair, central: Vec::new() }
    }

    pub fn is_unipotent(&self) -> bool {
        self.central.is_empty()
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b({}; {})", self.pair.zeros, self.pair.label)?;
        if !self.central.is_empty() {
            let z: Vec<String> = self.central.iter().map(u64::to_string).collect();
            write!(f, "*z({})", z.join(","))?;
        }
        Ok(())
    }
}

/// Multiplicities indexed by `(block, defect)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CountTable {
    entries: BTreeMap<(BlockId, u32), u64>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, block: BlockId, d: u32, n: u64) {
        if n > 0 {
            *self.entries.entry((block, d)).or_insert(0) += n;
        }
    }

    pub fn merge(&mut self, other: &CountTable) {
        for ((b, d), n) in &other.entries {
            self.add(b.clone(), *d, *n);
        }
    }

    pub fn scaled(&self, k: u64) -> CountTable {
        let mut out = CountTable::new();
        for ((b, d), n) in &self.entries {
            out.add(b.clone(), *d, n * k);
        }
        out
    }

    pub fn get(&self, block: &BlockId, d: u32) -> u64 {
        self.entries.get(&(block.clone(), d)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BlockId, u32, u64)> {
        self.entries.iter().map(|((b, d), n)| (b, *d, *n))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UnipotentBlock {
    pub block: BlockId,
    pub pair: CuspidalPair,
    /// `d -> k_u^d(B)`
    pub k_u: BTreeMap<u32, u64>,
    /// `d -> k_{c,u}^d(B)`
    pub k_cu: BTreeMap<u32, u64>,
}

pub fn unipotent_blocks(g: &GroupDescriptor, q: u64, ell: u64) -> Result<Vec<UnipotentBlock>> {
    let e = check_prime(q, ell)?;
    let order = order_polynomial(g);
    let setup = ESetup::new(g, e)?;
    let mut out = Vec::new();
    for s in ehc_series(g, e)? {
        let mut k_u = BTreeMap::new();
        let mut k_cu = BTreeMap::new();
        let cuspidal = if setup.coreless() { setup.weight <= 1 } else { s.pair.class.zeros == setup.weight };
        for ch in &s.members {
            let d = defect(&order, &ch.degree, q, ell)?;
            *k_u.entry(d).or_insert(0) += 1;
            if cuspidal {
                *k_cu.entry(d).or_insert(0) += 1;
            }
        }
        out.push(UnipotentBlock { block: BlockId::unipotent(s.pair.class.clone()), pair: s.pair, k_u, k_cu });
    }
    Ok(out)
}
