//! Partitions, beta-sets and abacus cores/quotients; Lusztig symbols with
//! hooks, cohooks and cores.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    /// Parts must be weakly decreasing; trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("not a partition: {parts:?}")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        Partition((1..=first).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// `n(lambda) = sum (i - 1) lambda_i`.
    pub fn n_invariant(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, &p)| i as u32 * p).sum()
    }

    /// All hook lengths, row by row.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut hooks = Vec::new();
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row - j as u32 - 1;
                let leg = conj.part(j) - i as u32 - 1;
                hooks.push(arm + leg + 1);
            }
        }
        hooks
    }

    /// First-column hook lengths padded to `n` beads: `lambda_i + n - i`.
    pub fn beta_set(&self, n: usize) -> Vec<u32> {
        assert!(n >= self.len(), "beta-set too small");
        (0..n).map(|i| self.part(i) + (n - 1 - i) as u32).collect()
    }

    pub fn from_beta_set(beta: &[u32]) -> Partition {
        let mut b = beta.to_vec();
        b.sort_unstable_by(|x, y| y.cmp(x));
        let n = b.len();
        let parts = b.iter().enumerate().map(|(i, &x)| x - (n - 1 - i) as u32).collect();
        Partition::new(parts).expect("beta-set gives a partition")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All partitions of `n`, in reverse lexicographic order (`[n]` first).
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All `k`-tuples of partitions with total size `n`.
pub fn multipartitions(k: usize, n: u32) -> Vec<Vec<Partition>> {
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for head in partitions(first) {
            for mut tail in multipartitions(k - 1, n - first) {
                tail.insert(0, head.clone());
                out.push(tail);
            }
        }
    }
    out
}

/// Number of standard Young tableaux, by the hook length formula.
pub fn standard_tableaux(p: &Partition) -> u128 {
    let n = p.size() as u128;
    let num: u128 = (1..=n).product();
    let den: u128 = p.hook_lengths().iter().map(|&h| h as u128).product();
    num / den
}

/// An `e`-quotient: exactly `e` partitions, indexed by abacus runner.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct EQuotient(pub Vec<Partition>);

impl EQuotient {
    pub fn weight(&self) -> u32 {
        self.0.iter().map(Partition::size).sum()
    }
}

fn abacus_size(len: usize, extra_rows: usize, e: u32) -> usize {
    let e = e as usize;
    e * (len.div_ceil(e) + extra_rows + 1)
}

/// `e`-core and `e`-quotient via the abacus with a bead count divisible by `e`.
pub fn e_core_and_quotient(lambda: &Partition, e: u32) -> (Partition, EQuotient) {
    assert!(e >= 1);
    let n = abacus_size(lambda.len(), 0, e);
    let beta = lambda.beta_set(n);
    let mut runners: Vec<Vec<u32>> = vec![Vec::new(); e as usize];
    for &b in &beta {
        runners[(b % e) as usize].push(b / e);
    }
    let mut core_beta = Vec::with_capacity(n);
    let mut quotient = Vec::with_capacity(e as usize);
    for (j, levels) in runners.iter().enumerate() {
        for k in 0..levels.len() as u32 {
            core_beta.push(j as u32 + e * k);
        }
        quotient.push(Partition::from_beta_set(levels));
    }
    (Partition::from_beta_set(&core_beta), EQuotient(quotient))
}

pub fn e_core(lambda: &Partition, e: u32) -> Partition {
    e_core_and_quotient(lambda, e).0
}

pub fn e_weight(lambda: &Partition, e: u32) -> u32 {
    e_core_and_quotient(lambda, e).1.weight()
}

pub fn is_e_core(lambda: &Partition, e: u32) -> bool {
    !lambda.hook_lengths().iter().any(|h| h % e == 0)
}

/// Inverse of the core/quotient map for a fixed core.
pub fn from_core_and_quotient(core: &Partition, quotient: &EQuotient, e: u32) -> Partition {
    assert_eq!(quotient.0.len(), e as usize);
    let w = quotient.weight() as usize;
    let n = abacus_size(core.len(), w + 1, e);
    let beta = core.beta_set(n);
    let mut counts = vec![0usize; e as usize];
    for &b in &beta {
        counts[(b % e) as usize] += 1;
    }
    let mut out = Vec::with_capacity(n);
    for (j, (&c, q)) in counts.iter().zip(&quotient.0).enumerate() {
        for level in q.beta_set(c) {
            out.push(j as u32 + e * level);
        }
    }
    Partition::from_beta_set(&out)
}

/// Every partition with the given `e`-core and weight `w`.
pub fn partitions_with_core(core: &Partition, e: u32, w: u32) -> Result<Vec<Partition>> {
    if !is_e_core(core, e) {
        return Err(Error::InvalidArgument(format!("{core} is not a {e}-core")));
    }
    let mut out: Vec<Partition> = multipartitions(e as usize, w)
        .into_iter()
        .map(|q| from_core_and_quotient(core, &EQuotient(q), e))
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// All `e`-cores of size `n`.
pub fn e_cores_of_size(n: u32, e: u32) -> Vec<Partition> {
    partitions(n).into_iter().filter(|p| is_e_core(p, e)).collect()
}

/// A Lusztig symbol `(S | T)`, stored shift-reduced with the longer row on top.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    top: Vec<u32>,
    bottom: Vec<u32>,
}

impl Symbol {
    pub fn new(top: Vec<u32>, bottom: Vec<u32>) -> Result<Self> {
        for row in [&top, &bottom] {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!("symbol rows must increase strictly: {row:?}")));
            }
        }
        Ok(Self::canonical(top, bottom))
    }

    fn canonical(mut top: Vec<u32>, mut bottom: Vec<u32>) -> Self {
        while top.first() == Some(&0) && bottom.first() == Some(&0) {
            top.remove(0);
            bottom.remove(0);
            top.iter_mut().for_each(|x| *x -= 1);
            bottom.iter_mut().for_each(|x| *x -= 1);
        }
        let swap = match top.len().cmp(&bottom.len()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => top < bottom,
        };
        if swap {
            std::mem::swap(&mut top, &mut bottom);
        }
        Symbol { top, bottom }
    }

    pub fn top(&self) -> &[u32] {
        &self.top
    }

    pub fn bottom(&self) -> &[u32] {
        &self.bottom
    }

    pub fn defect(&self) -> u32 {
        (self.top.len() - self.bottom.len()) as u32
    }

    pub fn rank(&self) -> u32 {
        let entries = (self.top.len() + self.bottom.len()) as u32;
        let sum: u32 = self.top.iter().chain(&self.bottom).sum();
        let correction = if entries == 0 { 0 } else { (entries - 1) * (entries - 1) / 4 };
        sum - correction
    }

    /// Same symbol with `k` extra leading entries on both rows (not reduced).
    pub fn shifted(&self, k: u32) -> (Vec<u32>, Vec<u32>) {
        let shift = |row: &[u32]| (0..k).chain(row.iter().map(|x| x + k)).collect::<Vec<_>>();
        (shift(&self.top), shift(&self.bottom))
    }

    /// Symbols reachable by removing one `e`-hook (or `e`-cohook).
    pub fn removals(&self, e: u32, kind: HookKind) -> Vec<Symbol> {
        let (top, bottom) = self.shifted(e);
        let rows = [top, bottom];
        let mut out = BTreeSet::new();
        for from in 0..2 {
            let to = match kind {
                HookKind::Hook => from,
                HookKind::Cohook => 1 - from,
            };
            for &x in &rows[from] {
                if x < e || rows[to].contains(&(x - e)) {
                    continue;
                }
                let mut new_rows = rows.clone();
                new_rows[from].retain(|&y| y != x);
                new_rows[to].push(x - e);
                new_rows[to].sort_unstable();
                let [a, b] = new_rows;
                out.insert(Symbol::canonical(a, b));
            }
        }
        out.into_iter().collect()
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.defect(), &self.top, &self.bottom).cmp(&(other.defect(), &other.top, &other.bottom))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[u32]| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        let top = row(&self.top);
        let bottom = row(&self.bottom);
        match (top.is_empty(), bottom.is_empty()) {
            (_, true) => write!(f, "({top} |)"),
            (true, _) => write!(f, "(| {bottom})"),
            _ => write!(f, "({top} | {bottom})"),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HookKind {
    Hook,
    Cohook,
}

/// Strictly increasing sequences of length `len` with entries summing to `sum`.
fn increasing_sequences(len: usize, sum: u32, min: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return if sum == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    // smallest possible total for the remaining entries starting at x
    let floor = |x: u32, l: usize| x * l as u32 + (l as u32) * (l as u32 - 1) / 2;
    let mut x = min;
    while floor(x, len) <= sum {
        for mut tail in increasing_sequences(len - 1, sum - x, x + 1) {
            tail.insert(0, x);
            out.push(tail);
        }
        x += 1;
    }
    out
}

/// Every shift-reduced symbol of rank `n` and odd defect at most `max_defect`.
pub fn symbols_of_rank(n: u32, max_defect: u32) -> Vec<Symbol> {
    let mut out = BTreeSet::new();
    let mut d = 1;
    while d <= max_defect && (d * d - 1) / 4 <= n {
        for t in 0..=n as usize {
            let entries = (2 * t + d as usize) as u32;
            let sum = n + (entries - 1) * (entries - 1) / 4;
            for bottom_sum in 0..=sum {
                for bottom in increasing_sequences(t, bottom_sum, 0) {
                    for top in increasing_sequences(t + d as usize, sum - bottom_sum, 0) {
                        if top.first() == Some(&0) && bottom.first() == Some(&0) {
                            continue;
                        }
                        out.insert(Symbol::canonical(top, bottom.clone()));
                    }
                }
            }
        }
        d += 2;
    }
    out.into_iter().collect()
}

/// Core after removing `e`-hooks (or cohooks) greedily, with the number removed.
pub fn symbol_core(sym: &Symbol, e: u32, kind: HookKind) -> (Symbol, u32) {
    let mut cur = sym.clone();
    let mut w = 0;
    while let Some(next) = cur.removals(e, kind).into_iter().next() {
        cur = next;
        w += 1;
    }
    (cur, w)
}

pub fn is_symbol_core(sym: &Symbol, e: u32, kind: HookKind) -> bool {
    sym.removals(e, kind).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(0), vec![Partition::empty()]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(4)[0], p(&[4]));
        assert_eq!(partitions(4)[4], p(&[1, 1, 1, 1]));
        assert_eq!(partitions(10).len(), 42);
    }

    #[test]
    fn cores_and_quotients() {
        let (core, q) = e_core_and_quotient(&p(&[2, 1]), 2);
        assert_eq!(core, p(&[2, 1]));
        assert_eq!(q.weight(), 0);
        let (core, q) = e_core_and_quotient(&p(&[3]), 2);
        assert_eq!(core, p(&[1]));
        assert_eq!(q.weight(), 1);
        for lam in partitions(6) {
            let (core, q) = e_core_and_quotient(&lam, 1);
            assert!(core.is_empty());
            assert_eq!(q.weight(), 6);
        }
    }

    #[test]
    fn core_quotient_inverts() {
        for e in 1..=4 {
            for lam in partitions(8) {
                let (core, q) = e_core_and_quotient(&lam, e);
                assert_eq!(from_core_and_quotient(&core, &q, e), lam);
                assert_eq!(lam.size(), core.size() + e * q.weight());
            }
        }
    }

    #[test]
    fn with_core() {
        assert_eq!(partitions_with_core(&p(&[1]), 2, 1).unwrap(), vec![p(&[3]), p(&[1, 1, 1])]);
        let with_empty = partitions_with_core(&Partition::empty(), 2, 2).unwrap();
        assert_eq!(with_empty.len(), 5);
        assert_eq!(multipartitions(2, 2).len(), 5);
        assert_eq!(partitions_with_core(&p(&[2, 1]), 2, 0).unwrap(), vec![p(&[2, 1])]);
        assert!(partitions_with_core(&p(&[2]), 2, 1).is_err());
    }

    #[test]
    fn hooks_and_tableaux() {
        assert_eq!(p(&[2, 1]).hook_lengths(), vec![3, 1, 1]);
        assert_eq!(standard_tableaux(&p(&[2, 1])), 2);
        assert_eq!(standard_tableaux(&p(&[3, 2])), 5);
    }

    #[test]
    fn symbol_basics() {
        let theta10 = Symbol::new(vec![0, 1, 2], vec![]).unwrap();
        assert_eq!(theta10.rank(), 2);
        assert_eq!(theta10.defect(), 3);
        assert_eq!(theta10.to_string(), "(0 1 2 |)");
        let s = Symbol::new(vec![1], vec![0, 2, 3]).unwrap();
        assert_eq!(s.top(), &[0, 2, 3]);
        assert_eq!(s.to_string(), "(0 2 3 | 1)");
        // shift-equivalence collapses to the same canonical symbol
        let (a, b) = theta10.shifted(3);
        assert_eq!(Symbol::new(a, b).unwrap(), theta10);
    }

    #[test]
    fn symbol_counts() {
        assert_eq!(symbols_of_rank(0, 99).len(), 1);
        assert_eq!(symbols_of_rank(1, 99).len(), 2);
        assert_eq!(symbols_of_rank(2, 99).len(), 6);
        assert_eq!(symbols_of_rank(2, 1).len(), 5);
        for s in symbols_of_rank(3, 99) {
            assert_eq!(s.rank(), 3);
            assert_eq!(s.defect() % 2, 1);
        }
    }

    #[test]
    fn symbol_cores_rank_two() {
        let syms = symbols_of_rank(2, 99);
        let theta10 = Symbol::new(vec![0, 1, 2], vec![]).unwrap();
        let mut fixed = 0;
        for s in &syms {
            let (core, w) = symbol_core(s, 1, HookKind::Hook);
            assert_eq!(core.rank() + w, 2);
            assert_eq!(w == 0, &core == s);
            if w == 0 {
                fixed += 1;
                assert_eq!(s, &theta10);
            }
        }
        assert_eq!(fixed, 1);
        // theta10 loses 1-cohooks, so it is not its own cohook core
        let (core, w) = symbol_core(&theta10, 1, HookKind::Cohook);
        assert_eq!((core.rank(), w), (0, 2));
    }
}
