//! Slow, obvious reimplementations used to cross-check the fast kernels.
//! Nothing here calls into the other modules beyond their plain data types.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cycpoly::CycProduct;
use crate::error::{Error, Result};
use crate::genre::{GroupDescriptor, Series, WreathGroup};
use crate::labelcomb::Partition;

/// Remove the rim hook attached to cell `(i, j)`.
fn remove_rim_hook(rows: &[u32], i: usize, j: usize) -> Vec<u32> {
    let col_len = rows.iter().take_while(|&&r| r as usize > j).count();
    let last = col_len - 1;
    let mut out = rows.to_vec();
    for r in i..last {
        out[r] = rows[r + 1] - 1;
    }
    out[last] = j as u32;
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn hook_at(rows: &[u32], i: usize, j: usize) -> u32 {
    let arm = rows[i] - j as u32 - 1;
    let leg = rows.iter().skip(i + 1).filter(|&&r| r as usize > j).count() as u32;
    arm + leg + 1
}

fn all_cores(rows: Vec<u32>, e: u32, memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> BTreeSet<Vec<u32>> {
    if let Some(s) = memo.get(&rows) {
        return s.clone();
    }
    let mut out = BTreeSet::new();
    for i in 0..rows.len() {
        for j in 0..rows[i] as usize {
            if hook_at(&rows, i, j) == e {
                out.extend(all_cores(remove_rim_hook(&rows, i, j), e, memo));
            }
        }
    }
    if out.is_empty() {
        out.insert(rows.clone());
    }
    memo.insert(rows, out.clone());
    out
}

/// e-core by exhaustive rim-hook removal in every order; fails if two orders disagree.
pub fn oracle_core(lambda: &Partition, e: u32) -> Result<Partition> {
    let cores = all_cores(lambda.parts().to_vec(), e, &mut HashMap::new());
    if cores.len() != 1 {
        return Err(Error::InvalidArgument(format!("removal order matters for {lambda}: {cores:?}")));
    }
    Partition::new(cores.into_iter().next().unwrap())
}

/// `Φ_d(q)` as an integer by dividing `q^d - 1` by the smaller cyclotomic values.
fn cyclotomic_value(d: u32, q: &BigInt, memo: &mut HashMap<u32, BigInt>) -> BigInt {
    if let Some(v) = memo.get(&d) {
        return v.clone();
    }
    let mut v = q.pow(d) - BigInt::one();
    for k in 1..d {
        if d.is_multiple_of(k) {
            v /= cyclotomic_value(k, q, memo);
        }
    }
    memo.insert(d, v.clone());
    v
}

/// ℓ-adic valuation of a cyclotomic product at `q`, by multiplying it out.
pub fn oracle_valuation(p: &CycProduct, q: u64, ell: u64) -> u32 {
    let qb = BigInt::from(q);
    let mut memo = HashMap::new();
    let mut n = qb.pow(p.q_exponent());
    for (&d, &m) in p.cyc_exponents() {
        n *= cyclotomic_value(d, &qb, &mut memo).pow(m);
    }
    let l = BigInt::from(ell);
    let mut v = 0;
    while !n.is_zero() && (&n % &l).is_zero() {
        n /= &l;
        v += 1;
    }
    v
}

fn partitions_of(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n.min(max) {
        for mut rest in partitions_of(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Standard tableaux by the branching rule.
fn tableaux(rows: &[u32], memo: &mut HashMap<Vec<u32>, u128>) -> u128 {
    if rows.iter().sum::<u32>() <= 1 {
        return 1;
    }
    if let Some(&v) = memo.get(rows) {
        return v;
    }
    let mut total = 0;
    for i in 0..rows.len() {
        let removable = i + 1 == rows.len() || rows[i + 1] < rows[i];
        if removable {
            let mut smaller = rows.to_vec();
            smaller[i] -= 1;
            if smaller[i] == 0 {
                smaller.pop();
            }
            total += tableaux(&smaller, memo);
        }
    }
    memo.insert(rows.to_vec(), total);
    total
}

fn tuples(c: usize, m: u32) -> Vec<Vec<Vec<u32>>> {
    if c == 0 {
        return if m == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for p in partitions_of(first, first) {
            for mut rest in tuples(c - 1, m - first) {
                rest.insert(0, p.clone());
                out.push(rest);
            }
        }
    }
    out
}

/// Wreath degrees from explicit multipartition labels, as a sorted list.
pub fn oracle_wreath(w: &WreathGroup) -> Vec<u64> {
    let mut memo = HashMap::new();
    let mut degrees = vec![1u128];
    for &(c, m) in &w.factors {
        let mut local = Vec::new();
        for t in tuples(c as usize, m) {
            let mut d: u128 = 1;
            let mut placed = 0u128;
            for p in &t {
                let size: u128 = p.iter().map(|&x| x as u128).sum();
                for k in 1..=size {
                    placed += 1;
                    d = d * placed / k;
                }
                d *= tableaux(p, &mut memo);
            }
            local.push(d);
        }
        degrees = degrees.iter().flat_map(|a| local.iter().map(move |b| a * b)).collect();
    }
    let mut out: Vec<u64> = degrees.into_iter().map(|d| d as u64).collect();
    out.sort_unstable();
    out
}

fn modpow(b: u64, mut e: u64, p: u64) -> u64 {
    let (mut r, mut b) = (1, b % p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Monomial matrix `(source -> target, scalar)` per coordinate.
type Monomial = Vec<(usize, u64)>;

fn monomial_group(c: u64, w: usize, zeta: u64, p: u64) -> Vec<Monomial> {
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for k in 0..w {
        perms = perms
            .into_iter()
            .flat_map(|pm| {
                (0..=k).map(move |pos| {
                    let mut x = pm.clone();
                    x.insert(pos, k);
                    x
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for pm in perms {
        for code in 0..c.pow(w as u32) {
            let mut x = code;
            let mut g = Vec::with_capacity(w);
            for &t in pm.iter() {
                g.push((t, modpow(zeta, x % c, p)));
                x /= c;
            }
            out.push(g);
        }
    }
    out
}

fn apply(g: &Monomial, v: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; v.len()];
    for (i, &(t, s)) in g.iter().enumerate() {
        out[t] = v[i] * s % p;
    }
    out
}

fn compose(a: &Monomial, b: &Monomial, p: u64) -> Monomial {
    // a after b
    b.iter().map(|&(t, s)| (a[t].0, a[t].1 * s % p)).collect()
}

/// Chain classes by length, from parabolic subgroups of the monomial group
/// realised as vector stabilisers over a prime field.
pub fn oracle_chain_count_small(g: &GroupDescriptor, e: u32) -> Result<BTreeMap<usize, usize>> {
    if g.rank > 3 {
        return Err(Error::InvalidArgument("oracle limited to rank <= 3".into()));
    }
    let n = g.rank;
    let (c, w) = match g.series {
        Series::A | Series::TwoA => {
            let es = if g.series == Series::A {
                e
            } else if e % 2 == 1 {
                2 * e
            } else if e % 4 == 2 {
                e / 2
            } else {
                e
            };
            if es == 1 {
                (1, n)
            } else {
                (es, n / es)
            }
        }
        Series::B | Series::C => {
            if e % 2 == 1 {
                (2 * e, n / e)
            } else {
                (e, n / (e / 2))
            }
        }
    };
    let (c, w) = (c as u64, w as usize);
    let mut p = c + 1;
    while !((2..p).all(|d| p % d != 0) && (p - 1) % c == 0 && (p - 1) / c > w as u64) {
        p += 1;
    }
    let zeta = (1..p).find(|&z| (1..=c).find(|&k| modpow(z, k, p) == 1) == Some(c)).expect("root of unity");
    let group = monomial_group(c, w, zeta, p);
    let index: HashMap<Monomial, usize> = group.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let inverse: Vec<usize> = group
        .iter()
        .map(|a| (0..group.len()).find(|&j| compose(a, &group[j], p).iter().enumerate().all(|(i, &(t, s))| t == i && s == 1)).unwrap())
        .collect();

    // parabolic subgroups = stabilisers of vectors
    let mut parabolics: BTreeSet<Vec<usize>> = BTreeSet::new();
    let total = (p as usize).pow(w as u32);
    for code in 0..total {
        let mut x = code;
        let v: Vec<u64> = (0..w)
            .map(|_| {
                let d = (x % p as usize) as u64;
                x /= p as usize;
                d
            })
            .collect();
        let stab: Vec<usize> = (0..group.len()).filter(|&i| apply(&group[i], &v, p) == v).collect();
        parabolics.insert(stab);
    }
    let parabolics: Vec<Vec<usize>> = parabolics.into_iter().collect();
    let whole: Vec<usize> = (0..group.len()).collect();
    let pindex: HashMap<Vec<usize>, usize> = parabolics.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let top = pindex[&whole];
    let subset = |a: &Vec<usize>, b: &Vec<usize>| a.len() < b.len() && a.iter().all(|x| b.binary_search(x).is_ok());

    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![vec![top]];
    while let Some(ch) = stack.pop() {
        let last = &parabolics[*ch.last().unwrap()];
        for (i, s) in parabolics.iter().enumerate() {
            if subset(s, last) {
                let mut next = ch.clone();
                next.push(i);
                stack.push(next);
            }
        }
        chains.push(ch);
    }
    // conjugation action on parabolics
    let conj: Vec<Vec<usize>> = (0..group.len())
        .map(|gi| {
            parabolics
                .iter()
                .map(|s| {
                    let mut img: Vec<usize> = s
                        .iter()
                        .map(|&h| index[&compose(&compose(&group[gi], &group[h], p), &group[inverse[gi]], p)])
                        .collect();
                    img.sort_unstable();
                    pindex[&img]
                })
                .collect()
        })
        .collect();
    // Burnside per length
    let mut fixed: BTreeMap<usize, usize> = BTreeMap::new();
    for ch in &chains {
        let count = conj.iter().filter(|act| ch.iter().all(|&i| act[i] == i)).count();
        *fixed.entry(ch.len() - 1).or_insert(0) += count;
    }
    Ok(fixed.into_iter().map(|(l, f)| (l, f / group.len())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let p = |v: &[u32]| Partition::new(v.to_vec()).unwrap();
        assert_eq!(oracle_core(&p(&[3]), 2).unwrap(), p(&[1]));
        assert_eq!(oracle_core(&p(&[2, 1]), 2).unwrap(), p(&[2, 1]));
        assert_eq!(oracle_core(&p(&[4, 2, 1]), 1).unwrap(), Partition::empty());
        assert_eq!(oracle_wreath(&WreathGroup { factors: vec![(1, 3)] }), vec![1, 1, 2]);
        assert_eq!(oracle_wreath(&WreathGroup { factors: vec![(2, 2)] }), vec![1, 1, 1, 1, 2]);
        assert_eq!(oracle_valuation(&CycProduct::phi(3), 4, 3), 1);
    }
}
