use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use super::index::{binom_multi_mod_p, MultiIndex, MAX_EXPONENT};
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`,
/// which compares below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::NegInfinity => s.serialize_str("-inf"),
            Degree::Finite(d) => s.serialize_u32(*d),
        }
    }
}

/// Sparse multivariate polynomial over a finite field. Only nonzero
/// coefficients are stored, so the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: Field,
    arity: usize,
    terms: BTreeMap<MultiIndex, Elem>,
}

impl SparsePoly {
    pub fn zero(field: &Field, arity: usize) -> Self {
        SparsePoly {
            field: field.clone(),
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, arity: usize, c: Elem) -> Self {
        let mut p = SparsePoly::zero(field, arity);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zero(arity), c);
        }
        p
    }

    pub fn one(field: &Field, arity: usize) -> Self {
        SparsePoly::constant(field, arity, field.one())
    }

    /// The coordinate polynomial `x_i` (zero-based).
    pub fn var(field: &Field, arity: usize, i: usize) -> Self {
        SparsePoly::monomial(field, MultiIndex::unit(arity, i), field.one())
    }

    pub fn monomial(field: &Field, exp: MultiIndex, c: Elem) -> Self {
        let mut p = SparsePoly::zero(field, exp.arity());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Sums the given terms; repeated exponents accumulate and zero results
    /// are pruned.
    pub fn from_terms<I>(field: &Field, arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Elem)>,
    {
        let mut p = SparsePoly::zero(field, arity);
        for (exp, c) in terms {
            if exp.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: exp.arity(),
                });
            }
            field.elem(c.code())?;
            p.add_term(exp, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: MultiIndex, c: Elem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Terms in ascending lex order of exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, Elem)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &MultiIndex) -> Elem {
        self.terms.get(exp).copied().unwrap_or(Elem::ZERO)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(MultiIndex::total)
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// True for the zero polynomial and for polynomials whose terms all have
    /// the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut totals = self.terms.keys().map(MultiIndex::total);
        match totals.next() {
            None => true,
            Some(d) => totals.all(|t| t == d),
        }
    }

    /// The terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> SparsePoly {
        SparsePoly {
            field: self.field.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.total() == d)
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    fn check_compatible(&self, other: &SparsePoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> SparsePoly {
        SparsePoly {
            field: self.field.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: Elem) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(&self.field, self.arity);
        }
        SparsePoly {
            field: self.field.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, &v)| (e.clone(), self.field.mul(v, c)))
                .collect(),
        }
    }

    /// Multiplies by the monomial `c * x^exp`.
    pub fn mul_monomial(&self, exp: &MultiIndex, c: Elem) -> Result<SparsePoly> {
        if exp.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: exp.arity(),
            });
        }
        if c.is_zero() {
            return Ok(SparsePoly::zero(&self.field, self.arity));
        }
        Ok(SparsePoly {
            field: self.field.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, &v)| (e.add(exp), self.field.mul(v, c)))
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = SparsePoly::zero(&self.field, self.arity);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                out.add_term(ea.add(eb), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u32) -> SparsePoly {
        let mut base = self.clone();
        let mut acc = SparsePoly::one(&self.field, self.arity);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check_point(&self, point: &[Elem]) -> Result<()> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: point.len(),
            });
        }
        for &c in point {
            self.field.elem(c.code())?;
        }
        Ok(())
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Elem> {
        self.check_point(point)?;
        let f = &self.field;
        let mut acc = f.zero();
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &k) in point.iter().zip(e.exps()) {
                if k > 0 {
                    t = f.mul(t, f.pow(x, k as u64));
                }
            }
            acc = f.add(acc, t);
        }
        Ok(acc)
    }

    /// Lex-least exponent and its coefficient: `f = b x^e + (lex-greater terms)`.
    pub fn min_lex_exponent(&self) -> Result<(MultiIndex, Elem)> {
        self.terms
            .iter()
            .next()
            .map(|(e, &c)| (e.clone(), c))
            .ok_or(Error::ZeroPolynomial)
    }

    /// The Hasse derivative `P^(beta) = sum_a c_a C(a, beta) x^(a - beta)`,
    /// binomials reduced mod p.
    pub fn hasse_derivative(&self, beta: &MultiIndex) -> Result<SparsePoly> {
        if beta.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: beta.arity(),
            });
        }
        let f = &self.field;
        let p = f.p();
        let mut out = SparsePoly::zero(f, self.arity);
        for (alpha, &c) in &self.terms {
            let Some(rest) = alpha.checked_sub(beta) else {
                continue;
            };
            let b = binom_multi_mod_p(alpha, beta, p);
            if b == 0 {
                continue;
            }
            // distinct alphas give distinct alpha - beta, no accumulation needed
            out.terms.insert(rest, f.mul(c, f.from_u128(b as u128)));
        }
        Ok(out)
    }

    /// Full table of Hasse derivatives read off from a brute-force expansion
    /// of `P(x + y)` in `2n` variables. Zero derivatives are omitted.
    pub fn expand_shift(&self) -> BTreeMap<MultiIndex, SparsePoly> {
        let n = self.arity;
        let f = &self.field;
        let shifted: Vec<SparsePoly> = (0..n)
            .map(|i| &SparsePoly::var(f, 2 * n, i) + &SparsePoly::var(f, 2 * n, n + i))
            .collect();
        let expanded = self
            .compose(&shifted)
            .expect("shift substitution has matching arity and field");
        let mut table: BTreeMap<MultiIndex, SparsePoly> = BTreeMap::new();
        for (e, c) in expanded.terms() {
            let x = MultiIndex::from(&e.exps()[..n]);
            let y = MultiIndex::from(&e.exps()[n..]);
            table
                .entry(y)
                .or_insert_with(|| SparsePoly::zero(f, n))
                .add_term(x, c);
        }
        table.retain(|_, p| !p.is_zero());
        table
    }

    /// Substitutes `x_i := h_i`. All `h_i` must share one arity and this
    /// polynomial's field; the result has that arity.
    pub fn compose(&self, h: &[SparsePoly]) -> Result<SparsePoly> {
        if h.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: h.len(),
            });
        }
        let out_arity = match h.first() {
            Some(h0) => h0.arity,
            None => 0,
        };
        for hi in h {
            if hi.field != self.field {
                return Err(Error::MixedFields);
            }
            if hi.arity != out_arity {
                return Err(Error::ArityMismatch {
                    expected: out_arity,
                    found: hi.arity,
                });
            }
        }
        let mut max_exp = vec![0u32; self.arity];
        for e in self.terms.keys() {
            for (m, &k) in max_exp.iter_mut().zip(e.exps()) {
                *m = (*m).max(k);
            }
        }
        // powers[i][k] = h_i^k
        let powers: Vec<Vec<SparsePoly>> = h
            .iter()
            .zip(&max_exp)
            .map(|(hi, &top)| {
                let mut v = Vec::with_capacity(top as usize + 1);
                v.push(SparsePoly::one(&self.field, out_arity));
                for k in 1..=top as usize {
                    let next = &v[k - 1] * hi;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = SparsePoly::zero(&self.field, out_arity);
        for (e, &c) in &self.terms {
            let mut term = SparsePoly::constant(&self.field, out_arity, c);
            for (i, &k) in e.exps().iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
                if term.is_zero() {
                    break;
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// Exponent guard for the binomial machinery.
    pub fn check_exponents(&self) -> Result<()> {
        if self
            .terms
            .keys()
            .any(|e| e.exps().iter().any(|&k| k >= MAX_EXPONENT))
        {
            return Err(Error::SizeGuard(format!(
                "exponents must stay below {MAX_EXPONENT}"
            )));
        }
        Ok(())
    }
}

impl<'a> Add for &'a SparsePoly {
    type Output = SparsePoly;

    /// Panics on mixed fields or arities; use [`SparsePoly::try_add`] to check.
    fn add(self, rhs: &'a SparsePoly) -> SparsePoly {
        self.try_add(rhs).expect("compatible polynomials")
    }
}

impl<'a> Sub for &'a SparsePoly {
    type Output = SparsePoly;

    fn sub(self, rhs: &'a SparsePoly) -> SparsePoly {
        self.try_sub(rhs).expect("compatible polynomials")
    }
}

impl<'a> Mul for &'a SparsePoly {
    type Output = SparsePoly;

    fn mul(self, rhs: &'a SparsePoly) -> SparsePoly {
        self.try_mul(rhs).expect("compatible polynomials")
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        self.neg_ref()
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {:?}", self.field)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| match k {
                    1 => format!("x{}", i + 1),
                    _ => format!("x{}^{k}", i + 1),
                })
                .collect();
            let coeff = self.field.display(c);
            let coeff = if self.field.m() > 1 && coeff.contains('+') {
                format!("({coeff})")
            } else {
                coeff
            };
            match (vars.is_empty(), c == self.field.one()) {
                (true, _) => f.write_str(&coeff)?,
                (false, true) => f.write_str(&vars.join("*"))?,
                (false, false) => write!(f, "{coeff}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::from(v)
    }

    fn poly(field: &Field, arity: usize, terms: &[(&[u32], i64)]) -> SparsePoly {
        SparsePoly::from_terms(
            field,
            arity,
            terms.iter().map(|(e, c)| (mi(e), field.from_int(*c))),
        )
        .unwrap()
    }

    #[test]
    fn zero_polynomial_conventions() {
        let f = Field::prime(3).unwrap();
        let z = SparsePoly::zero(&f, 2);
        assert!(z.is_zero());
        assert_eq!(z.degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(z.min_lex_exponent().unwrap_err(), Error::ZeroPolynomial);
        // coefficients that cancel are pruned
        let p = poly(&f, 1, &[(&[1], 1), (&[1], 2)]);
        assert!(p.is_zero());
    }

    #[test]
    fn min_lex_examples() {
        let f = Field::prime(3).unwrap();
        let p = poly(&f, 2, &[(&[2, 0], 1), (&[1, 1], 1)]);
        assert_eq!(p.min_lex_exponent().unwrap(), (mi(&[1, 1]), f.one()));
        let single = poly(&f, 2, &[(&[0, 5], 2)]);
        assert_eq!(single.min_lex_exponent().unwrap(), (mi(&[0, 5]), f.from_int(2)));
    }

    #[test]
    fn hasse_examples() {
        let f3 = Field::prime(3).unwrap();
        let cube = poly(&f3, 1, &[(&[3], 1)]);
        assert!(cube.hasse_derivative(&mi(&[2])).unwrap().is_zero());
        assert_eq!(
            cube.hasse_derivative(&mi(&[3])).unwrap(),
            SparsePoly::one(&f3, 1)
        );
        let f5 = Field::prime(5).unwrap();
        let p = poly(&f5, 2, &[(&[2, 1], 1)]);
        assert_eq!(
            p.hasse_derivative(&mi(&[1, 0])).unwrap(),
            poly(&f5, 2, &[(&[1, 1], 2)])
        );
        assert!(p.hasse_derivative(&mi(&[1])).is_err());
    }

    #[test]
    fn expand_shift_examples() {
        let f7 = Field::prime(7).unwrap();
        let x = SparsePoly::var(&f7, 1, 0);
        let table = x.expand_shift();
        assert_eq!(table.len(), 2);
        assert_eq!(table[&mi(&[0])], x);
        assert_eq!(table[&mi(&[1])], SparsePoly::one(&f7, 1));

        // (x + y)^2 = x^2 + y^2 in characteristic 2
        let f2 = Field::prime(2).unwrap();
        let sq = poly(&f2, 1, &[(&[2], 1)]);
        let table = sq.expand_shift();
        assert_eq!(table.keys().cloned().collect::<Vec<_>>(), vec![mi(&[0]), mi(&[2])]);
        assert_eq!(table[&mi(&[2])], SparsePoly::one(&f2, 1));
    }

    #[test]
    fn compose_examples() {
        let f = Field::prime(5).unwrap();
        let t = SparsePoly::var(&f, 1, 0);
        let t2 = t.pow(2);
        let parabola = poly(&f, 2, &[(&[0, 1], 1), (&[2, 0], -1)]);
        assert!(parabola.compose(&[t.clone(), t2.clone()]).unwrap().is_zero());
        let prod = poly(&f, 2, &[(&[1, 1], 1)]);
        assert_eq!(prod.compose(&[t.clone(), t.clone()]).unwrap(), t2);

        let f3 = Field::prime(3).unwrap();
        let t = SparsePoly::var(&f3, 1, 0);
        let sum = poly(&f3, 2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let h = [t.scale(f3.from_int(2)), &t + &SparsePoly::one(&f3, 1)];
        assert_eq!(sum.compose(&h).unwrap(), SparsePoly::one(&f3, 1));

        assert!(matches!(sum.compose(std::slice::from_ref(&t)), Err(Error::ArityMismatch { .. })));
        let other = SparsePoly::var(&Field::prime(7).unwrap(), 1, 0);
        assert_eq!(sum.compose(&[t, other]).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn evaluation_and_display() {
        let f = Field::prime(7).unwrap();
        let p = poly(&f, 2, &[(&[2, 1], 3), (&[0, 0], 1)]);
        // 3 * 2^2 * 5 + 1 = 61 = 5 mod 7
        assert_eq!(p.eval(&[f.from_int(2), f.from_int(5)]).unwrap(), f.from_int(5));
        assert_eq!(p.to_string(), "3*x1^2*x2 + 1");
        assert!(p.eval(&[f.one()]).is_err());
    }

    #[test]
    fn homogeneity() {
        let f = Field::prime(5).unwrap();
        assert!(poly(&f, 2, &[(&[2, 0], 1), (&[1, 1], 3)]).is_homogeneous());
        let mixed = poly(&f, 2, &[(&[2, 0], 1), (&[1, 0], 3)]);
        assert!(!mixed.is_homogeneous());
        assert_eq!(mixed.homogeneous_part(2), poly(&f, 2, &[(&[2, 0], 1)]));
    }
}
