//! Ambient groups, their e-split Levi subgroups and the flat model.
//!
//! An e-split Levi of `G` corresponds to a flat of the reflection
//! arrangement of the relative Weyl group `W = G(c,1,w)` of a minimal e-split
//! Levi. A flat is described coordinate by coordinate: a coordinate is either
//! forced to zero (it then belongs to the "core" of the Levi) or it is tied to
//! the smallest coordinate of its block by a root of unity `zeta^color`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cycpoly::CycProduct;
use crate::error::{Error, Result};
use crate::group::ColoredPermGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "2A")]
    TwoA,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "C")]
    C,
}

impl Series {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Series::A),
            "2A" | "2a" => Ok(Series::TwoA),
            "B" | "b" => Ok(Series::B),
            "C" | "c" => Ok(Series::C),
            other => Err(Error::InvalidArgument(format!("unknown series {other}"))),
        }
    }

    pub fn is_linear(self) -> bool {
        matches!(self, Series::A | Series::TwoA)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::A => "A",
            Series::TwoA => "2A",
            Series::B => "B",
            Series::C => "C",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Sc,
    Gl,
}

impl Model {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sc" => Ok(Model::Sc),
            "gl" => Ok(Model::Gl),
            other => Err(Error::InvalidArgument(format!("unknown model {other}"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Sc => "sc",
            Model::Gl => "gl",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub series: Series,
    pub rank: u32,
    pub model: Model,
}

impl GroupDescriptor {
    pub fn new(series: Series, rank: u32, model: Model) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("rank must be positive".into()));
        }
        if !series.is_linear() && model == Model::Gl {
            return Err(Error::Unsupported(format!("{series} series only has the sc model")));
        }
        Ok(GroupDescriptor { series, rank, model })
    }

    /// `Q = -q` for the unitary series.
    pub fn twisted(&self) -> bool {
        self.series == Series::TwoA
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.series.is_linear() {
            write!(f, "{}{}.{}", self.series, self.rank, self.model)
        } else {
            write!(f, "{}{}", self.series, self.rank)
        }
    }
}

/// Torus factors are `GL_a(q^k)` or `GU_a(q^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Split(u32),
    Unitary(u32),
}

impl FactorKind {
    /// `(negate, k)` such that the factor is `GL_a(X)` with `X = (+-) q^k`.
    pub fn signed_power(self) -> (bool, u32) {
        match self {
            FactorKind::Split(k) => (false, k),
            FactorKind::Unitary(k) => (true, k),
        }
    }

    fn name(self, a: u32) -> String {
        let (head, k) = match self {
            FactorKind::Split(k) => ("GL", k),
            FactorKind::Unitary(k) => ("GU", k),
        };
        if k == 1 {
            format!("{head}{a}(q)")
        } else {
            format!("{head}{a}(q^{k})")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeviClass {
    pub core_rank: u32,
    /// Sorted in decreasing order.
    pub torus_factors: Vec<u32>,
    pub factor_kind: FactorKind,
    pub e: u32,
}

impl LeviClass {
    pub fn new(core_rank: u32, mut torus_factors: Vec<u32>, factor_kind: FactorKind, e: u32) -> Self {
        torus_factors.sort_unstable_by(|a, b| b.cmp(a));
        LeviClass { core_rank, torus_factors, factor_kind, e }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WreathGroup {
    /// Pairs `(c, m)` for `Z_c wr S_m`.
    pub factors: Vec<(u32, u32)>,
}

impl WreathGroup {
    pub fn trivial() -> Self {
        WreathGroup { factors: Vec::new() }
    }

    pub fn order(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(c, m)| (c as u128).pow(m) * (1..=m as u128).product::<u128>())
            .product()
    }
}

impl fmt::Display for WreathGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|(c, m)| format!("Z{c} wr S{m}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralTorus {
    pub factors: Vec<CycProduct>,
    /// Order of the image of `Z(G*)` divided out in the sc model.
    pub quotient: Option<CycProduct>,
}

impl CentralTorus {
    pub fn order(&self) -> Result<CycProduct> {
        let full = self.factors.iter().fold(CycProduct::one(), |acc, f| acc.mul(f));
        match &self.quotient {
            Some(q) => full.div_exact(q),
            None => Ok(full),
        }
    }
}

/// Combinatorial data attached to `(G, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ESetup {
    pub e: u32,
    /// Rank consumed by one torus unit; also the period used on partitions
    /// (type A) or the hook/cohook length (type B/C).
    pub step: u32,
    /// Colors of the relative Weyl group `G(c,1,w)` of the minimal Levi.
    pub colors: u32,
    pub weight: u32,
    /// Core rank of the minimal e-split Levi.
    pub min_core: u32,
    pub factor_kind: FactorKind,
}

impl ESetup {
    pub fn new(g: &GroupDescriptor, e: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidArgument("e must be positive".into()));
        }
        let n = g.rank;
        let (step, colors, factor_kind) = match g.series {
            Series::A => (e, e, FactorKind::Split(e)),
            Series::TwoA => {
                let es = ennola_period(e);
                let kind = if es % 2 == 1 { FactorKind::Unitary(es) } else { FactorKind::Split(es) };
                (es, es, kind)
            }
            Series::B | Series::C => {
                if e % 2 == 1 {
                    (e, 2 * e, FactorKind::Split(e))
                } else {
                    (e / 2, e, FactorKind::Unitary(e / 2))
                }
            }
        };
        let (weight, min_core) = if colors == 1 { (n, 0) } else { (n / step, n % step) };
        Ok(ESetup { e, step, colors, weight, min_core, factor_kind })
    }

    /// Type A with `e* = 1`: every Levi is a product of general linear groups
    /// and there is no distinguished core factor.
    pub fn coreless(&self) -> bool {
        self.colors == 1
    }
}

/// `e*` with `q -> -q`: `2e` for odd `e`, `e/2` for `e = 2 mod 4`, else `e`.
pub fn ennola_period(e: u32) -> u32 {
    if e % 2 == 1 {
        2 * e
    } else if e % 4 == 2 {
        e / 2
    } else {
        e
    }
}

/// `|GL_a(X)|` with `X = (+-) q^k`.
pub fn gl_order(a: u32, negate: bool, k: u32) -> CycProduct {
    (1..=a).fold(CycProduct::q_power(k * a * a.saturating_sub(1) / 2), |acc, i| {
        acc.mul(&CycProduct::signed_power_minus_one(negate, k, i))
    })
}

fn sp_order(m: u32) -> CycProduct {
    (1..=m).fold(CycProduct::q_power(m * m), |acc, i| acc.mul(&CycProduct::q_pow_minus_one(2 * i)))
}

fn core_order(g: &GroupDescriptor, m: u32) -> CycProduct {
    match g.series {
        Series::A => gl_order(m, false, 1),
        Series::TwoA => gl_order(m, true, 1),
        Series::B | Series::C => sp_order(m),
    }
}

fn scalar_order(g: &GroupDescriptor) -> CycProduct {
    CycProduct::signed_power_minus_one(g.twisted(), 1, 1)
}

pub fn order_polynomial(g: &GroupDescriptor) -> CycProduct {
    let full = core_order(g, g.rank);
    if g.series.is_linear() && g.model == Model::Sc {
        full.div_exact(&scalar_order(g)).expect("scalars divide")
    } else {
        full
    }
}

pub fn levi_order(g: &GroupDescriptor, l: &LeviClass) -> CycProduct {
    let (neg, k) = l.factor_kind.signed_power();
    let mut p = core_order(g, l.core_rank);
    for &a in &l.torus_factors {
        p = p.mul(&gl_order(a, neg, k));
    }
    if g.series.is_linear() && g.model == Model::Sc {
        p.div_exact(&scalar_order(g)).expect("scalars divide")
    } else {
        p
    }
}

/// Factor names of a Levi, core first.
pub fn levi_factor_names(g: &GroupDescriptor, l: &LeviClass) -> Vec<String> {
    let mut parts = Vec::new();
    match g.series {
        Series::A if l.core_rank > 0 => parts.push(format!("GL{}(q)", l.core_rank)),
        Series::TwoA if l.core_rank > 0 => parts.push(format!("GU{}(q)", l.core_rank)),
        Series::B => parts.push(format!("SO{}", 2 * l.core_rank + 1)),
        Series::C => parts.push(format!("Sp{}", 2 * l.core_rank)),
        _ => {}
    }
    parts.extend(l.torus_factors.iter().map(|&a| l.factor_kind.name(a)));
    parts
}

pub fn levi_name(g: &GroupDescriptor, l: &LeviClass) -> String {
    format!("{g} e={} : {}", l.e, levi_factor_names(g, l).join(" x "))
}

fn partitions_desc(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions_desc(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All e-split Levi classes, the group itself first.
pub fn esplit_levis(g: &GroupDescriptor, e: u32) -> Result<Vec<LeviClass>> {
    let s = ESetup::new(g, e)?;
    let mut out = Vec::new();
    if s.coreless() {
        for p in partitions_desc(s.weight, s.weight) {
            out.push(LeviClass::new(0, p, s.factor_kind, e));
        }
        return Ok(out);
    }
    for zeros in (0..=s.weight).rev() {
        for p in partitions_desc(s.weight - zeros, s.weight) {
            out.push(LeviClass::new(s.min_core + s.step * zeros, p, s.factor_kind, e));
        }
    }
    Ok(out)
}

pub fn relative_weyl(g: &GroupDescriptor, l: &LeviClass) -> Result<WreathGroup> {
    let s = ESetup::new(g, l.e)?;
    let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
    for &a in &l.torus_factors {
        *mult.entry(a).or_insert(0) += 1;
    }
    Ok(WreathGroup { factors: mult.into_iter().rev().map(|(_, m)| (s.colors, m)).collect() })
}

pub fn central_torus(g: &GroupDescriptor, l: &LeviClass) -> CentralTorus {
    let (neg, k) = l.factor_kind.signed_power();
    let mut factors = Vec::new();
    if g.series.is_linear() && l.core_rank > 0 {
        factors.push(scalar_order(g));
    }
    for _ in &l.torus_factors {
        factors.push(CycProduct::signed_power_minus_one(neg, k, 1));
    }
    let quotient = (g.series.is_linear() && g.model == Model::Sc).then(|| scalar_order(g));
    CentralTorus { factors, quotient }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coord {
    Zero,
    Free { rep: u8, color: u8 },
}

/// A flat of the `G(c,1,w)` arrangement in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flat {
    pub coords: Vec<Coord>,
}

impl Flat {
    pub fn zero_count(&self) -> u32 {
        self.coords.iter().filter(|c| matches!(c, Coord::Zero)).count() as u32
    }

    pub fn zero_coords(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.coords[i] == Coord::Zero).collect()
    }

    /// Blocks as lists of `(coordinate, color)`, ordered by representative.
    pub fn blocks(&self) -> Vec<Vec<(usize, u8)>> {
        let mut by_rep: BTreeMap<u8, Vec<(usize, u8)>> = BTreeMap::new();
        for (i, c) in self.coords.iter().enumerate() {
            if let Coord::Free { rep, color } = *c {
                by_rep.entry(rep).or_default().push((i, color));
            }
        }
        by_rep.into_values().collect()
    }

    pub fn block_sizes(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.blocks().iter().map(|b| b.len() as u32).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn dimension(&self) -> usize {
        self.blocks().len()
    }
}

fn canonicalize(raw: &[Option<(usize, u8)>], c: u8) -> Flat {
    // raw[i] = None for zero, or Some((block id, absolute color))
    let w = raw.len();
    let mut coords = vec![Coord::Zero; w];
    let mut first: HashMap<usize, (u8, u8)> = HashMap::new();
    for i in 0..w {
        if let Some((b, col)) = raw[i] {
            let (rep, base) = *first.entry(b).or_insert((i as u8, col));
            coords[i] = Coord::Free { rep, color: (col + c - base) % c };
        }
    }
    Flat { coords }
}

/// The flats of `G(c,1,w)` together with the action of `W` on them.
pub struct Arrangement {
    pub setup: ESetup,
    pub group: ColoredPermGroup,
    pub flats: Vec<Flat>,
    index: HashMap<Flat, u32>,
    action: Vec<u32>,
    top: u32,
}

impl Arrangement {
    pub fn new(setup: ESetup) -> Self {
        let c = setup.colors as u8;
        let w = setup.weight as usize;
        let group = ColoredPermGroup::new(setup.colors, w);
        let mut flats = Vec::new();
        let mut cur = Vec::with_capacity(w);
        enumerate_flats(w, c, &mut cur, &mut flats);
        flats.sort();
        let index: HashMap<Flat, u32> = flats.iter().cloned().zip(0..).collect();
        let nf = flats.len();
        let mut action = vec![0u32; group.order() * nf];
        for (gi, g) in group.elements().iter().enumerate() {
            for (fi, f) in flats.iter().enumerate() {
                let mut raw = vec![None; w];
                for (i, coord) in f.coords.iter().enumerate() {
                    let dest = g.perm[i] as usize;
                    if let Coord::Free { rep, color } = *coord {
                        raw[dest] = Some((rep as usize, (color + g.colors[dest]) % c));
                    }
                }
                action[gi * nf + fi] = index[&canonicalize(&raw, c)];
            }
        }
        let top_flat = if setup.coreless() {
            Flat { coords: (0..w).map(|_| Coord::Free { rep: 0, color: 0 }).collect() }
        } else {
            Flat { coords: vec![Coord::Zero; w] }
        };
        let top = index[&top_flat];
        Arrangement { setup, group, flats, index, action, top }
    }

    pub fn for_group(g: &GroupDescriptor, e: u32) -> Result<Self> {
        Ok(Self::new(ESetup::new(g, e)?))
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flat(&self, i: u32) -> &Flat {
        &self.flats[i as usize]
    }

    pub fn index_of(&self, f: &Flat) -> Option<u32> {
        self.index.get(f).copied()
    }

    /// The flat of the whole group.
    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn act(&self, g: u32, f: u32) -> u32 {
        self.action[g as usize * self.flats.len() + f as usize]
    }

    /// Every point of flat `a` lies in flat `b` (so the Levi of `a` contains that of `b`).
    pub fn within(&self, a: u32, b: u32) -> bool {
        let (fa, fb) = (self.flat(a), self.flat(b));
        let c = self.setup.colors as u8;
        for (i, coord) in fb.coords.iter().enumerate() {
            match *coord {
                Coord::Zero => {
                    if fa.coords[i] != Coord::Zero {
                        return false;
                    }
                }
                Coord::Free { rep, color } => match (fa.coords[i], fa.coords[rep as usize]) {
                    (Coord::Zero, Coord::Zero) => {}
                    (Coord::Free { rep: ra, color: ca }, Coord::Free { rep: rb, color: cb }) => {
                        if ra != rb || (ca + c - cb) % c != color {
                            return false;
                        }
                    }
                    _ => return false,
                },
            }
        }
        true
    }

    pub fn levi(&self, f: u32) -> LeviClass {
        let flat = self.flat(f);
        let s = &self.setup;
        let core = if s.coreless() { 0 } else { s.min_core + s.step * flat.zero_count() };
        LeviClass::new(core, flat.block_sizes(), s.factor_kind, s.e)
    }

    /// Elements of `W` fixing the flat as a set.
    pub fn setwise_stabilizer(&self, f: u32) -> Vec<u32> {
        (0..self.group.order() as u32).filter(|&g| self.act(g, f) == f).collect()
    }

    /// Elements of `W` fixing every point of the flat: the Weyl group of its Levi.
    pub fn pointwise_stabilizer(&self, f: u32) -> Vec<u32> {
        let blocks = self.flat(f).blocks();
        (0..self.group.order() as u32)
            .filter(|&g| {
                let el = self.group.element(g);
                let flat = self.flat(f);
                blocks.iter().all(|b| {
                    b.iter().all(|&(i, col)| {
                        let dest = el.perm[i] as usize;
                        match flat.coords[dest] {
                            Coord::Free { rep, color } => {
                                rep as usize == b[0].0 && color == (col + el.colors[dest]) % self.setup.colors as u8
                            }
                            Coord::Zero => false,
                        }
                    })
                }) && flat.zero_coords().iter().all(|&i| flat.coords[el.perm[i] as usize] == Coord::Zero)
            })
            .collect()
    }

    /// Orbit representatives (smallest index) under a subgroup of `W`.
    pub fn orbits(&self, candidates: &[u32], sub: &[u32]) -> Vec<Vec<u32>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for &f in candidates {
            if seen.contains(&f) {
                continue;
            }
            let mut orbit: Vec<u32> = sub.iter().map(|&g| self.act(g, f)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            seen.extend(orbit.iter().copied());
            out.push(orbit);
        }
        out
    }

    /// A flat of the given Levi class, if any.
    pub fn representative(&self, l: &LeviClass) -> Option<u32> {
        (0..self.flats.len() as u32).find(|&f| &self.levi(f) == l)
    }
}

fn enumerate_flats(w: usize, c: u8, cur: &mut Vec<Coord>, out: &mut Vec<Flat>) {
    let i = cur.len();
    if i == w {
        out.push(Flat { coords: cur.clone() });
        return;
    }
    if c >= 2 {
        cur.push(Coord::Zero);
        enumerate_flats(w, c, cur, out);
        cur.pop();
    }
    cur.push(Coord::Free { rep: i as u8, color: 0 });
    enumerate_flats(w, c, cur, out);
    cur.pop();
    let reps: Vec<u8> = (0..i)
        .filter(|&j| matches!(cur[j], Coord::Free { rep, .. } if rep as usize == j))
        .map(|j| j as u8)
        .collect();
    for rep in reps {
        for color in 0..c {
            cur.push(Coord::Free { rep, color });
            enumerate_flats(w, c, cur, out);
            cur.pop();
        }
    }
}

/// A class of e-split Levis `M` of `L`, up to `N_G(L)`, with the number of
/// `L`-classes it fuses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubLevi {
    pub levi: LeviClass,
    pub representative: Flat,
    pub n_classes: usize,
}

pub fn sub_esplit_with_fusion(g: &GroupDescriptor, l: &LeviClass) -> Result<Vec<SubLevi>> {
    let arr = Arrangement::for_group(g, l.e)?;
    let fl = arr
        .representative(l)
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not an e-split Levi", levi_name(g, l))))?;
    let inside: Vec<u32> = (0..arr.len() as u32).filter(|&f| arr.within(fl, f)).collect();
    let normalizer = arr.setwise_stabilizer(fl);
    let weyl = arr.pointwise_stabilizer(fl);
    let local: Vec<Vec<u32>> = arr.orbits(&inside, &weyl);
    let mut out = Vec::new();
    for orbit in arr.orbits(&inside, &normalizer) {
        let n_classes = local.iter().filter(|o| orbit.contains(&o[0])).count();
        out.push(SubLevi { levi: arr.levi(orbit[0]), representative: arr.flat(orbit[0]).clone(), n_classes });
    }
    out.sort_by(|a, b| b.levi.core_rank.cmp(&a.levi.core_rank).then(b.levi.torus_factors.cmp(&a.levi.torus_factors)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gd(s: Series, n: u32, m: Model) -> GroupDescriptor {
        GroupDescriptor::new(s, n, m).unwrap()
    }

    #[test]
    fn orders() {
        let gl2 = order_polynomial(&gd(Series::A, 2, Model::Gl));
        assert_eq!(gl2.evaluate_int(3).unwrap(), (3 * 2 * 8).into());
        let sl2 = order_polynomial(&gd(Series::A, 2, Model::Sc));
        assert_eq!(sl2.evaluate_int(3).unwrap(), 24.into());
        let sp4 = order_polynomial(&gd(Series::C, 2, Model::Sc));
        assert_eq!(sp4.to_string(), "+q^4·Phi1^2·Phi2^2·Phi4");
        let gu3 = order_polynomial(&gd(Series::TwoA, 3, Model::Gl));
        // |GU_3(2)| = 2^3 * 3 * 3 * 9 = 648
        assert_eq!(gu3.evaluate_int(2).unwrap(), 648.into());
    }

    #[test]
    fn levi_lists() {
        let g = gd(Series::A, 3, Model::Gl);
        let l = esplit_levis(&g, 2).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(levi_name(&g, &l[1]), "A3.gl e=2 : GL1(q) x GL1(q^2)");
        let sp4 = gd(Series::C, 2, Model::Sc);
        let l = esplit_levis(&sp4, 1).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.iter().any(|x| levi_name(&sp4, x) == "C2 e=1 : Sp0 x GL2(q)"));
        assert_eq!(esplit_levis(&sp4, 5).unwrap().len(), 1);
        let arr = Arrangement::for_group(&sp4, 1).unwrap();
        let mut classes: Vec<LeviClass> = arr.orbits(&(0..arr.len() as u32).collect::<Vec<_>>(), &(0..8).collect::<Vec<_>>())
            .iter()
            .map(|o| arr.levi(o[0]))
            .collect();
        classes.sort();
        let mut expected = l.clone();
        expected.sort();
        assert_eq!(classes, expected);
    }

    #[test]
    fn relative_weyl_matches_normalizer() {
        for (g, e) in [
            (gd(Series::A, 3, Model::Gl), 2),
            (gd(Series::A, 4, Model::Gl), 1),
            (gd(Series::C, 3, Model::Sc), 1),
            (gd(Series::C, 3, Model::Sc), 2),
            (gd(Series::B, 2, Model::Sc), 4),
            (gd(Series::TwoA, 3, Model::Gl), 2),
        ] {
            let arr = Arrangement::for_group(&g, e).unwrap();
            for f in 0..arr.len() as u32 {
                let l = arr.levi(f);
                let rw = relative_weyl(&g, &l).unwrap();
                let quotient = arr.setwise_stabilizer(f).len() / arr.pointwise_stabilizer(f).len();
                assert_eq!(rw.order(), quotient as u128, "{}", levi_name(&g, &l));
                for q in [2i64, 3, 5] {
                    let go = order_polynomial(&g).evaluate_int(q).unwrap();
                    let lo = levi_order(&g, &l).evaluate_int(q).unwrap();
                    assert_eq!(&go % (&lo * num_bigint::BigInt::from(rw.order())), 0.into());
                }
            }
        }
        let gl3 = gd(Series::A, 3, Model::Gl);
        let l = esplit_levis(&gl3, 2).unwrap();
        assert_eq!(relative_weyl(&gl3, &l[1]).unwrap().order(), 2);
        assert_eq!(relative_weyl(&gl3, &l[0]).unwrap().order(), 1);
    }

    #[test]
    fn sylow_bound() {
        for g in [gd(Series::A, 4, Model::Gl), gd(Series::C, 3, Model::Sc), gd(Series::TwoA, 4, Model::Sc)] {
            for e in 1..=6 {
                let go = order_polynomial(&g);
                let levis = esplit_levis(&g, e).unwrap();
                let target = go.cyc_exponent(e);
                for l in &levis {
                    assert!(levi_order(&g, l).cyc_exponent(e) <= target);
                    assert!(levi_order(&g, l).divides(&go));
                }
                assert_eq!(levi_order(&g, levis.last().unwrap()).cyc_exponent(e), target, "{g} e={e}");
            }
        }
    }

    #[test]
    fn central_tori() {
        let sl3 = gd(Series::A, 3, Model::Sc);
        let levis = esplit_levis(&sl3, 2).unwrap();
        assert_eq!(central_torus(&sl3, &levis[0]).order().unwrap(), CycProduct::one());
        let gl3 = gd(Series::A, 3, Model::Gl);
        let t = central_torus(&gl3, &levis[1]);
        assert_eq!(t.order().unwrap().evaluate_int(2).unwrap(), 3.into());
    }

    #[test]
    fn fusion() {
        let gl5 = gd(Series::A, 5, Model::Gl);
        let l = LeviClass::new(1, vec![2], FactorKind::Split(2), 2);
        let subs = sub_esplit_with_fusion(&gl5, &l).unwrap();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[1].levi.torus_factors, vec![1, 1]);
        assert!(subs.iter().all(|s| s.n_classes == 1));
        let g = gd(Series::C, 2, Model::Sc);
        let top = LeviClass::new(2, vec![], FactorKind::Split(1), 1);
        let subs = sub_esplit_with_fusion(&g, &top).unwrap();
        assert_eq!(subs.len(), 4);
    }
}
