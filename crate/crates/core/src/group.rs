//! Small finite groups given by multiplication tables, the colored
//! permutation groups `G(c,1,w) = Z_c wr S_w`, and irreducible character
//! degrees computed with Dixon's modular variant of Burnside's algorithm.

use std::collections::HashMap;

use crate::cycpoly::is_prime;

/// A finite group as a full multiplication table on `0..order`.
#[derive(Clone, Debug)]
pub struct CayleyGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
}

impl CayleyGroup {
    pub fn from_table(order: usize, mul: Vec<u32>) -> Self {
        assert_eq!(mul.len(), order * order);
        let identity = (0..order as u32)
            .find(|&e| (0..order).all(|x| mul[e as usize * order + x] == x as u32))
            .expect("group has an identity");
        let inv = (0..order)
            .map(|x| (0..order as u32).find(|&y| mul[x * order + y as usize] == identity).expect("inverse exists"))
            .collect();
        CayleyGroup { order, mul, inv, identity }
    }

    pub fn trivial() -> Self {
        Self::from_table(1, vec![0])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Conjugacy classes, the first one being `{identity}`.
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes: Vec<Vec<u32>> = Vec::new();
        let mut seeds: Vec<u32> = vec![self.identity];
        seeds.extend((0..self.order as u32).filter(|&x| x != self.identity));
        for x in seeds {
            if class_of[x as usize] != usize::MAX {
                continue;
            }
            let idx = classes.len();
            let mut members = Vec::new();
            for g in 0..self.order as u32 {
                let y = self.mul(self.mul(g, x), self.inv(g));
                if class_of[y as usize] == usize::MAX {
                    class_of[y as usize] = idx;
                    members.push(y);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// The quotient `sub / normal`, both given as element lists of `self`.
    pub fn quotient(&self, sub: &[u32], normal: &[u32]) -> CayleyGroup {
        let mut coset_of: HashMap<u32, u32> = HashMap::new();
        let mut reps: Vec<u32> = Vec::new();
        for &g in sub {
            if coset_of.contains_key(&g) {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(g);
            for &n in normal {
                let prev = coset_of.insert(self.mul(g, n), id);
                debug_assert!(prev.is_none(), "normal subgroup not contained in sub");
            }
        }
        let m = reps.len();
        let mut table = vec![0u32; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * m + j] = coset_of[&self.mul(a, b)];
            }
        }
        CayleyGroup::from_table(m, table)
    }

    /// Subgroup generated by nothing but the listed elements (must be closed).
    pub fn subgroup(&self, elements: &[u32]) -> CayleyGroup {
        self.quotient(elements, &[self.identity])
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / num_integer::gcd(a, b) * b
}

/// Basis of the null space of the `rows x cols` matrix `m` over `F_p`.
fn nullspace(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let scale = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * scale % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p - f * m[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Degrees of the irreducible characters, sorted ascending.
pub fn irr_degrees(g: &CayleyGroup) -> Vec<u64> {
    let n = g.order() as u64;
    let classes = g.conjugacy_classes();
    let k = classes.len();
    if k as u64 == n {
        return vec![1; k];
    }
    let mut class_of = vec![0usize; g.order()];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x as usize] = i;
        }
    }
    let exponent = (0..n as u32).fold(1, |acc, x| lcm(acc, g.element_order(x)));
    let mut p = exponent * ((2 * n) / exponent + 1) + 1;
    while !is_prime(p) {
        p += exponent;
    }
    // structure constants a[i][j][l] = #{x in C_i : class(x^-1 z_l) = j}
    let mut a = vec![vec![vec![0u64; k]; k]; k];
    for (i, ci) in classes.iter().enumerate() {
        for (l, cl) in classes.iter().enumerate() {
            let z = cl[0];
            for &x in ci {
                let y = g.mul(g.inv(x), z);
                a[i][class_of[y as usize]][l] += 1;
            }
        }
    }
    let identity_basis: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            let mut v = vec![0; k];
            v[i] = 1;
            v
        })
        .collect();
    let mut spaces = vec![identity_basis];
    for mat in a.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let d = basis.len();
            // columns M b_t
            let mb: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| (0..k).map(|j| (0..k).map(|l| mat[j][l] * b[l] % p).sum::<u64>() % p).collect())
                .collect();
            let mut found = 0;
            for lambda in 0..p {
                let sys: Vec<Vec<u64>> = (0..k)
                    .map(|j| (0..d).map(|t| (mb[t][j] + p - lambda * basis[t][j] % p) % p).collect())
                    .collect();
                let null = nullspace(sys, d, p);
                if null.is_empty() {
                    continue;
                }
                found += null.len();
                let sub: Vec<Vec<u64>> = null
                    .iter()
                    .map(|coef| (0..k).map(|j| (0..d).map(|t| coef[t] * basis[t][j] % p).sum::<u64>() % p).collect())
                    .collect();
                next.push(sub);
                if found == d {
                    break;
                }
            }
            assert_eq!(found, d, "class matrices not simultaneously diagonalizable mod {p}");
        }
        spaces = next;
    }
    assert!(spaces.iter().all(|s| s.len() == 1), "eigenspaces did not split");
    let inverse_class: Vec<usize> = classes.iter().map(|c| class_of[g.inv(c[0]) as usize]).collect();
    let mut degrees: Vec<u64> = spaces
        .into_iter()
        .map(|s| {
            let v = &s[0];
            let norm = inv_mod(v[0], p);
            let w: Vec<u64> = v.iter().map(|x| x * norm % p).collect();
            let mut sum = 0u64;
            for j in 0..k {
                let term = w[j] * w[inverse_class[j]] % p * inv_mod(classes[j].len() as u64, p) % p;
                sum = (sum + term) % p;
            }
            let target = n % p * inv_mod(sum, p) % p;
            (1..=n).take_while(|d| d * d <= n).find(|d| d * d % p == target).expect("degree found")
        })
        .collect();
    degrees.sort_unstable();
    assert_eq!(degrees.iter().map(|d| d * d).sum::<u64>(), n, "sum of squared degrees");
    degrees
}

/// An element of `G(c,1,w)`: coordinate `i` goes to `perm[i]`, picking up
/// color `colors[perm[i]]` at its destination.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredPerm {
    pub colors: Vec<u8>,
    pub perm: Vec<u8>,
}

impl ColoredPerm {
    pub fn identity(w: usize) -> Self {
        ColoredPerm { colors: vec![0; w], perm: (0..w as u8).collect() }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self, c: u8) -> Self {
        let w = self.perm.len();
        let mut colors = vec![0u8; w];
        let mut perm = vec![0u8; w];
        for i in 0..w {
            let mid = other.perm[i] as usize;
            let dest = self.perm[mid] as usize;
            perm[i] = dest as u8;
            colors[dest] = (other.colors[mid] + self.colors[dest]) % c;
        }
        ColoredPerm { colors, perm }
    }
}

fn all_permutations(w: usize) -> Vec<Vec<u8>> {
    if w == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_permutations(w - 1) {
        for pos in 0..w {
            let mut q = p.clone();
            q.insert(pos, (w - 1) as u8);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// `G(c,1,w)` with every element listed.
#[derive(Clone, Debug)]
pub struct ColoredPermGroup {
    c: u8,
    w: usize,
    elements: Vec<ColoredPerm>,
    table: CayleyGroup,
}

impl ColoredPermGroup {
    pub fn new(c: u32, w: usize) -> Self {
        assert!((1..256).contains(&c));
        let c8 = c as u8;
        let mut elements = Vec::new();
        for perm in all_permutations(w) {
            let count = (c as usize).pow(w as u32);
            for code in 0..count {
                let mut x = code;
                let colors = (0..w)
                    .map(|_| {
                        let col = (x % c as usize) as u8;
                        x /= c as usize;
                        col
                    })
                    .collect();
                elements.push(ColoredPerm { colors, perm: perm.clone() });
            }
        }
        let index: HashMap<ColoredPerm, u32> = elements.iter().cloned().zip(0..).collect();
        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                mul[i * n + j] = index[&a.compose(b, c8)];
            }
        }
        let table = CayleyGroup::from_table(n, mul);
        ColoredPermGroup { c: c8, w, elements, table }
    }

    pub fn colors(&self) -> u32 {
        self.c as u32
    }

    pub fn rank(&self) -> usize {
        self.w
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: u32) -> &ColoredPerm {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[ColoredPerm] {
        &self.elements
    }

    pub fn table(&self) -> &CayleyGroup {
        &self.table
    }
}

/// Memoized degrees of quotient groups `sub / normal` inside a fixed ambient group.
#[derive(Default)]
pub struct DegreeCache {
    cache: HashMap<(Vec<u32>, Vec<u32>), Vec<u64>>,
}

impl DegreeCache {
    pub fn quotient_degrees(&mut self, ambient: &CayleyGroup, sub: &[u32], normal: &[u32]) -> Vec<u64> {
        let key = (sub.to_vec(), normal.to_vec());
        if let Some(d) = self.cache.get(&key) {
            return d.clone();
        }
        let degrees = if sub.len() == normal.len() {
            vec![1]
        } else {
            irr_degrees(&ambient.quotient(sub, normal))
        };
        self.cache.insert(key, degrees.clone());
        degrees
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> CayleyGroup {
        let table = (0..n * n).map(|x| ((x / n + x % n) % n) as u32).collect();
        CayleyGroup::from_table(n, table)
    }

    #[test]
    fn abelian_degrees() {
        assert_eq!(irr_degrees(&cyclic(6)), vec![1; 6]);
        assert_eq!(irr_degrees(&CayleyGroup::trivial()), vec![1]);
    }

    #[test]
    fn symmetric_groups() {
        assert_eq!(irr_degrees(ColoredPermGroup::new(1, 3).table()), vec![1, 1, 2]);
        assert_eq!(irr_degrees(ColoredPermGroup::new(1, 4).table()), vec![1, 1, 2, 3, 3]);
    }

    #[test]
    fn hyperoctahedral() {
        let b2 = ColoredPermGroup::new(2, 2);
        assert_eq!(b2.order(), 8);
        assert_eq!(irr_degrees(b2.table()), vec![1, 1, 1, 1, 2]);
        let b3 = ColoredPermGroup::new(2, 3);
        assert_eq!(irr_degrees(b3.table()), vec![1, 1, 1, 1, 2, 2, 3, 3, 3, 3]);
        let g32 = ColoredPermGroup::new(3, 2);
        let d = irr_degrees(g32.table());
        assert_eq!(d.iter().map(|x| x * x).sum::<u64>(), 18);
        assert_eq!(d.len(), 9);
    }

    #[test]
    fn quotients() {
        // S_3 / A_3 = Z_2
        let s3 = ColoredPermGroup::new(1, 3);
        let t = s3.table();
        let all: Vec<u32> = (0..6).collect();
        let a3: Vec<u32> = (0..6u32).filter(|&x| {
            let p = &s3.element(x).perm;
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            inversions % 2 == 0
        }).collect();
        let q = t.quotient(&all, &a3);
        assert_eq!(q.order(), 2);
        assert_eq!(irr_degrees(&q), vec![1, 1]);
    }
}
