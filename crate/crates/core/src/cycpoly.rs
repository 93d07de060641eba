//! Polynomials in `q` kept as signed products of cyclotomic polynomials.
//!
//! Every order polynomial and unipotent degree in this crate is a
//! [`CycProduct`]: `sign * q^a * prod_d Phi_d(q)^{m_d} / 2^c`. Valuations at an
//! odd prime `ell` are read off the factored form directly; dense expansion
//! only happens on request.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer polynomial, lowest degree first.
pub type DensePoly = Vec<BigInt>;

fn trim(mut p: DensePoly) -> DensePoly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn dense_mul(a: &[BigInt], b: &[BigInt]) -> DensePoly {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division by a monic polynomial. Returns `None` if there is a remainder.
fn dense_div_monic(num: &[BigInt], den: &[BigInt]) -> Option<DensePoly> {
    let den = trim(den.to_vec());
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        return if rem.iter().all(Zero::is_zero) { Some(vec![BigInt::zero()]) } else { None };
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    if rem.iter().all(Zero::is_zero) {
        Some(trim(quot))
    } else {
        None
    }
}

pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Coefficients of the cyclotomic polynomial `Phi_d`, obtained by dividing
/// `q^d - 1` by `Phi_k` for every proper divisor `k` of `d`.
pub fn cyclotomic_expand(d: u32) -> DensePoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    let mut num = vec![BigInt::zero(); d as usize + 1];
    num[0] = BigInt::from(-1);
    num[d as usize] = BigInt::one();
    for k in divisors(d).into_iter().filter(|&k| k < d) {
        num = dense_div_monic(&num, &cyclotomic_expand(k)).expect("Phi_k divides q^d - 1");
    }
    num
}

pub fn dense_eval(p: &[BigInt], q: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
}

/// Multiplicative order of `q` modulo `ell`.
pub fn multiplicative_order(q: u64, ell: u64) -> Option<u32> {
    if ell < 2 || q.gcd(&ell) != 1 {
        return None;
    }
    let mut x = q % ell;
    let mut k = 1;
    while x != 1 {
        x = x * (q % ell) % ell;
        k += 1;
    }
    Some(k)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// `ell`-adic valuation of a non-zero integer.
pub fn int_valuation(n: &BigInt, ell: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let ell = BigInt::from(ell);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quo, rem) = n.div_rem(&ell);
        if !rem.is_zero() {
            return v;
        }
        n = quo;
        v += 1;
    }
}

/// `sign * q^q_exp * prod Phi_d^{m_d} / 2^two_denom`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCycProduct")]
pub struct CycProduct {
    sign: i8,
    q_exp: u32,
    cyc: BTreeMap<u32, u32>,
    two_denom: u32,
}

#[derive(Deserialize)]
struct RawCycProduct {
    sign: i8,
    q_exp: u32,
    cyc: BTreeMap<u32, u32>,
    two_denom: u32,
}

impl TryFrom<RawCycProduct> for CycProduct {
    type Error = Error;

    fn try_from(raw: RawCycProduct) -> Result<Self> {
        if raw.sign != 1 && raw.sign != -1 {
            return Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {}", raw.sign)));
        }
        if raw.cyc.keys().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("cyclotomic index 0".into()));
        }
        let cyc = raw.cyc.into_iter().filter(|&(_, m)| m > 0).collect();
        Ok(CycProduct { sign: raw.sign, q_exp: raw.q_exp, cyc, two_denom: raw.two_denom })
    }
}

impl Default for CycProduct {
    fn default() -> Self {
        Self::one()
    }
}

impl CycProduct {
    pub fn one() -> Self {
        CycProduct { sign: 1, q_exp: 0, cyc: BTreeMap::new(), two_denom: 0 }
    }

    pub fn q_power(a: u32) -> Self {
        CycProduct { q_exp: a, ..Self::one() }
    }

    pub fn phi(d: u32) -> Self {
        Self::phi_pow(d, 1)
    }

    pub fn phi_pow(d: u32, m: u32) -> Self {
        assert!(d >= 1);
        let mut p = Self::one();
        if m > 0 {
            p.cyc.insert(d, m);
        }
        p
    }

    /// `1/2^c`.
    pub fn half_pow(c: u32) -> Self {
        CycProduct { two_denom: c, ..Self::one() }
    }

    /// `q^n - 1 = prod_{d | n} Phi_d`.
    pub fn q_pow_minus_one(n: u32) -> Self {
        assert!(n >= 1);
        let mut p = Self::one();
        for d in divisors(n) {
            p.cyc.insert(d, 1);
        }
        p
    }

    /// `q^n + 1 = prod_{d | 2n, d not dividing n} Phi_d`.
    pub fn q_pow_plus_one(n: u32) -> Self {
        assert!(n >= 1);
        let mut p = Self::one();
        for d in divisors(2 * n).into_iter().filter(|d| !n.is_multiple_of(*d)) {
            p.cyc.insert(d, 1);
        }
        p
    }

    /// `|(eps * q^k)^i - 1|` for `eps = +-1`.
    pub fn signed_power_minus_one(negate: bool, k: u32, i: u32) -> Self {
        if negate && i % 2 == 1 {
            Self::q_pow_plus_one(k * i)
        } else {
            Self::q_pow_minus_one(k * i)
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn q_exponent(&self) -> u32 {
        self.q_exp
    }

    pub fn two_denominator(&self) -> u32 {
        self.two_denom
    }

    pub fn cyc_exponents(&self) -> &BTreeMap<u32, u32> {
        &self.cyc
    }

    pub fn cyc_exponent(&self, d: u32) -> u32 {
        self.cyc.get(&d).copied().unwrap_or(0)
    }

    pub fn negated(&self) -> Self {
        CycProduct { sign: -self.sign, ..self.clone() }
    }

    pub fn abs(&self) -> Self {
        CycProduct { sign: 1, ..self.clone() }
    }

    /// Degree as a polynomial in `q` (the `2^c` denominator does not count).
    pub fn degree(&self) -> u32 {
        self.q_exp + self.cyc.iter().map(|(&d, &m)| euler_phi(d) * m).sum::<u32>()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut cyc = self.cyc.clone();
        for (&d, &m) in &other.cyc {
            *cyc.entry(d).or_insert(0) += m;
        }
        CycProduct {
            sign: self.sign * other.sign,
            q_exp: self.q_exp + other.q_exp,
            cyc,
            two_denom: self.two_denom + other.two_denom,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Exponentwise quotient. Fails if any exponent of `other` exceeds ours;
    /// a larger power of two in `other`'s denominator is likewise rejected.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        let fail = || Error::InexactDivision(format!("{self} / {other}"));
        if other.q_exp > self.q_exp {
            return Err(fail());
        }
        let mut cyc = self.cyc.clone();
        for (&d, &m) in &other.cyc {
            match cyc.get_mut(&d) {
                Some(mine) if *mine >= m => {
                    *mine -= m;
                    if *mine == 0 {
                        cyc.remove(&d);
                    }
                }
                _ => return Err(fail()),
            }
        }
        // dividing by 1/2^c multiplies by 2^c; only representable while it cancels our denominator
        if other.two_denom > self.two_denom {
            return Err(fail());
        }
        Ok(CycProduct {
            sign: self.sign * other.sign,
            q_exp: self.q_exp - other.q_exp,
            cyc,
            two_denom: self.two_denom - other.two_denom,
        })
    }

    /// Whether `other` divides `self` exponentwise.
    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_ok()
    }

    /// Replace `q` by `-q` and take the absolute value: `Phi_d(-q) = +-Phi_{d'}(q)`.
    pub fn substitute_neg_q(&self) -> Self {
        let mut cyc = BTreeMap::new();
        for (&d, &m) in &self.cyc {
            let image = match d % 4 {
                1 | 3 => 2 * d,
                2 => d / 2,
                _ => d,
            };
            *cyc.entry(image).or_insert(0) += m;
        }
        CycProduct { sign: 1, q_exp: self.q_exp, cyc, two_denom: self.two_denom }
    }

    pub fn numerator_dense(&self) -> DensePoly {
        let mut p = vec![BigInt::zero(); self.q_exp as usize + 1];
        p[self.q_exp as usize] = BigInt::from(self.sign);
        for (&d, &m) in &self.cyc {
            let phi = cyclotomic_expand(d);
            for _ in 0..m {
                p = dense_mul(&p, &phi);
            }
        }
        p
    }

    fn numerator_at(&self, q: &BigInt) -> BigInt {
        let mut v = BigInt::from(self.sign) * q.pow(self.q_exp);
        for (&d, &m) in &self.cyc {
            let phi = dense_eval(&cyclotomic_expand(d), q);
            v *= phi.pow(m);
        }
        v
    }

    pub fn evaluate(&self, q: i64) -> BigRational {
        let q = BigInt::from(q);
        BigRational::new(self.numerator_at(&q), BigInt::from(2).pow(self.two_denom))
    }

    pub fn evaluate_int(&self, q: i64) -> Result<BigInt> {
        let v = self.evaluate(q);
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::NotIntegral(format!("{self} at q={q} is {v}")))
        }
    }

    /// `v_ell(p(q))` for an odd prime `ell` not dividing `q`, via
    /// `v(Phi_d(q)) = v(q^e - 1)` if `d = e`, `1` if `d = e * ell^k` with
    /// `k >= 1`, else `0`, where `e` is the order of `q` mod `ell`.
    pub fn ell_valuation(&self, q: u64, ell: u64) -> Result<u32> {
        let e = check_prime(q, ell)?;
        let base = int_valuation(&(BigInt::from(q).pow(e) - 1), ell);
        let mut v = 0;
        for (&d, &m) in &self.cyc {
            v += m * phi_valuation(d, e, ell, base);
        }
        Ok(v)
    }
}

fn phi_valuation(d: u32, e: u32, ell: u64, base: u32) -> u32 {
    if d == e {
        return base;
    }
    if !d.is_multiple_of(e) {
        return 0;
    }
    let mut r = (d / e) as u64;
    while r.is_multiple_of(ell) {
        r /= ell;
    }
    u32::from(r == 1)
}

/// Validates `(q, ell)` and returns `e`, the multiplicative order of `q` mod `ell`.
pub fn check_prime(q: u64, ell: u64) -> Result<u32> {
    let bad = |reason: &str| Err(Error::BadPrime { ell, reason: reason.into() });
    if !is_prime(ell) {
        return bad("not a prime");
    }
    if ell == 2 {
        return bad("ell must be odd");
    }
    if q < 2 {
        return bad("q must be at least 2");
    }
    if q.is_multiple_of(ell) {
        return bad("ell divides q");
    }
    Ok(multiplicative_order(q, ell).expect("coprime"))
}

impl Mul for &CycProduct {
    type Output = CycProduct;

    fn mul(self, rhs: &CycProduct) -> CycProduct {
        CycProduct::mul(self, rhs)
    }
}

impl fmt::Display for CycProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign < 0 { "-" } else { "+" })?;
        let mut parts = Vec::new();
        match self.q_exp {
            0 => {}
            1 => parts.push("q".to_string()),
            a => parts.push(format!("q^{a}")),
        }
        for (&d, &m) in &self.cyc {
            if m == 1 {
                parts.push(format!("Phi{d}"));
            } else {
                parts.push(format!("Phi{d}^{m}"));
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        f.write_str(&parts.join("·"))?;
        if self.two_denom > 0 {
            write!(f, "/2^{}", self.two_denom)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> DensePoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn expands_small_cyclotomics() {
        assert_eq!(cyclotomic_expand(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_expand(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_expand(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_expand(12).len() as u32 - 1, euler_phi(12));
    }

    #[test]
    fn mul_and_div_exact() {
        let a = CycProduct::q_power(1).mul(&CycProduct::phi(1)).mul(&CycProduct::phi(2));
        let b = a.mul(&CycProduct::phi(2));
        assert_eq!(b, CycProduct::q_power(1).mul(&CycProduct::phi(1)).mul(&CycProduct::phi_pow(2, 2)));

        let sp4 = CycProduct::q_power(4)
            .mul(&CycProduct::phi_pow(1, 2))
            .mul(&CycProduct::phi_pow(2, 2))
            .mul(&CycProduct::phi(4));
        let den = CycProduct::q_power(3).mul(&CycProduct::phi(1)).mul(&CycProduct::phi(2));
        let quo = sp4.div_exact(&den).unwrap();
        assert_eq!(quo, CycProduct::q_power(1).mul(&CycProduct::phi(1)).mul(&CycProduct::phi(2)).mul(&CycProduct::phi(4)));

        assert!(CycProduct::phi(1).div_exact(&CycProduct::phi(2)).is_err());
    }

    #[test]
    fn evaluates() {
        let sl2 = CycProduct::q_power(1).mul(&CycProduct::phi(1)).mul(&CycProduct::phi(2));
        assert_eq!(sl2.evaluate_int(2).unwrap(), BigInt::from(6));
        assert_eq!(CycProduct::phi(6).evaluate_int(2).unwrap(), BigInt::from(3));
        let sp4 = CycProduct::q_power(4)
            .mul(&CycProduct::phi_pow(1, 2))
            .mul(&CycProduct::phi_pow(2, 2))
            .mul(&CycProduct::phi(4));
        // 3^4 * (3^2 - 1) * (3^4 - 1), computed directly
        let direct = 81i64 * 8 * 80;
        assert_eq!(direct, 51840);
        assert_eq!(sp4.evaluate_int(3).unwrap(), BigInt::from(direct));
    }

    #[test]
    fn evaluate_int_rejects_fractions() {
        let half = CycProduct::half_pow(1).mul(&CycProduct::phi(1));
        assert!(half.evaluate_int(2).is_err());
        assert_eq!(half.evaluate_int(3).unwrap(), BigInt::from(1));
    }

    #[test]
    fn valuations() {
        assert_eq!(CycProduct::phi(2).ell_valuation(2, 3).unwrap(), 1);
        assert_eq!(CycProduct::phi(1).ell_valuation(4, 3).unwrap(), 1);
        // Phi_3(4) = 21 = 3 * 7
        assert_eq!(CycProduct::phi(3).ell_valuation(4, 3).unwrap(), 1);
        assert_eq!(CycProduct::phi(2).ell_valuation(4, 3).unwrap(), 0);
        assert_eq!(CycProduct::phi(4).ell_valuation(2, 5).unwrap(), 1);
        // Phi_6(2) = 3 = Phi_{2*3}: d = e * ell
        assert_eq!(CycProduct::phi(6).ell_valuation(2, 3).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(CycProduct::one().ell_valuation(3, 2).is_err());
        assert!(CycProduct::one().ell_valuation(9, 3).is_err());
        assert!(CycProduct::one().ell_valuation(4, 9).is_err());
    }

    #[test]
    fn neg_q_substitution_matches_evaluation() {
        // |GU_2(q)| = q (q+1)(q^2-1) = |GL_2(-q)|
        let gl2 = CycProduct::q_power(1).mul(&CycProduct::q_pow_minus_one(1)).mul(&CycProduct::q_pow_minus_one(2));
        let gu2 = gl2.substitute_neg_q();
        assert_eq!(gu2.evaluate_int(3).unwrap(), BigInt::from(3 * 4 * 8));
    }

    #[test]
    fn renders() {
        let p = CycProduct::q_power(4).mul(&CycProduct::phi_pow(1, 2)).mul(&CycProduct::half_pow(1));
        assert_eq!(p.to_string(), "+q^4·Phi1^2/2^1");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"sign":1,"q_exp":4,"cyc":{"1":2},"two_denom":1}"#);
        let back: CycProduct = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
