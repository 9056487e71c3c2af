//! Exponent vectors, lexicographic order and multi-index binomials.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents above this are rejected wherever binomials are taken.
pub const MAX_EXPONENT: u32 = 1 << 20;

/// An exponent vector `(a_1, ..., a_n)`. The derived ordering on equal-arity
/// indices is the lexicographic order: the first differing coordinate decides.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zero(arity: usize) -> Self {
        MultiIndex(vec![0; arity])
    }

    /// The unit vector `e_i` of the given arity.
    pub fn unit(arity: usize, i: usize) -> Self {
        let mut v = vec![0; arity];
        v[i] = 1;
        MultiIndex(v)
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Total degree `|a|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.arity(), other.arity());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` if `other <= self` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.arity(), other.arity());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, k: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * k).collect())
    }

    /// Drop the last coordinate.
    pub fn head(&self) -> MultiIndex {
        MultiIndex(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn last(&self) -> u32 {
        *self.0.last().expect("non-empty multi-index")
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn check_arity(a: &MultiIndex, b: &MultiIndex) -> Result<()> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    Ok(())
}

pub fn lex_compare(a: &MultiIndex, b: &MultiIndex) -> Result<Ordering> {
    check_arity(a, b)?;
    Ok(a.cmp(b))
}

/// Integer binomial `C(n, k)`, zero for `k > n`. `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `C(a, b) = prod_i C(a_i, b_i)` over the integers; zero as soon as some
/// `b_i > a_i`.
pub fn binom_multi(a: &MultiIndex, b: &MultiIndex) -> Result<u128> {
    check_arity(a, b)?;
    if !b.divides(a) {
        return Ok(0);
    }
    let mut acc: u128 = 1;
    for (&ai, &bi) in a.exps().iter().zip(b.exps()) {
        let c = binomial(ai as u64, bi as u64).ok_or(Error::Overflow("binomial"))?;
        acc = acc.checked_mul(c).ok_or(Error::Overflow("multi-index binomial"))?;
    }
    Ok(acc)
}

/// `C(n, k) mod p` by Lucas' theorem; exact for any exponent size.
pub fn binomial_mod_p(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc: u64 = 1;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % p64, k % p64);
        if kd > nd {
            return 0;
        }
        // digits are below p <= 2^16, so the small binomial fits comfortably
        let c = small_binomial_mod(nd, kd, p64);
        acc = acc * c % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

fn small_binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * mod_pow(den, p - 2, p) % p
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `C(a, b) mod p`, the coefficient that appears in Hasse derivatives.
pub fn binom_multi_mod_p(a: &MultiIndex, b: &MultiIndex, p: u32) -> u32 {
    debug_assert_eq!(a.arity(), b.arity());
    let mut acc: u64 = 1;
    for (&ai, &bi) in a.exps().iter().zip(b.exps()) {
        if bi > ai {
            return 0;
        }
        acc = acc * binomial_mod_p(ai as u64, bi as u64, p) as u64 % p as u64;
        if acc == 0 {
            return 0;
        }
    }
    acc as u32
}

/// `a_1 + ... + a_{n-1} + ell * a_n`.
pub fn weighted_degree(alpha: &MultiIndex, ell: u32) -> Result<u64> {
    if ell < 2 {
        return Err(Error::BadEll(ell));
    }
    if alpha.arity() < 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: alpha.arity(),
        });
    }
    let head: u64 = alpha.exps()[..alpha.arity() - 1].iter().map(|&e| e as u64).sum();
    Ok(head + ell as u64 * alpha.last() as u64)
}

/// All indices of the given arity and total degree, in ascending lex order.
pub fn indices_of_degree(arity: usize, total: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    if arity == 0 {
        if total == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    let mut cur = vec![0u32; arity];
    fill_degree(&mut cur, 0, total, &mut out);
    out
}

fn fill_degree(cur: &mut Vec<u32>, pos: usize, rest: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for e in 0..=rest {
        cur[pos] = e;
        fill_degree(cur, pos + 1, rest - e, out);
    }
    cur[pos] = 0;
}

/// All indices with total degree `<= max_total`, graded: by degree first,
/// then ascending lex within a degree. This is the monomial order used for
/// linear-system columns and for derivative enumeration.
pub fn indices_up_to_degree(arity: usize, max_total: u32) -> Vec<MultiIndex> {
    (0..=max_total)
        .flat_map(|d| indices_of_degree(arity, d))
        .collect()
}

/// Same as [`indices_up_to_degree`] but with a strict bound; empty when
/// `bound == 0`.
pub fn indices_below_degree(arity: usize, bound: u32) -> Vec<MultiIndex> {
    match bound {
        0 => Vec::new(),
        b => indices_up_to_degree(arity, b - 1),
    }
}
