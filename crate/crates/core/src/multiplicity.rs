//! Vanishing multiplicities at points and on sets, and the multiplicity
//! version of the Schwartz–Zippel bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::mpoly::{binom_multi_mod_p, indices_of_degree, Degree, MultiIndex, SparsePoly};

/// Largest grid `|A|^n` the audit will enumerate.
pub const AUDIT_LIMIT: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u32),
    Infinite,
}

impl Multiplicity {
    pub fn finite(self) -> Option<u32> {
        match self {
            Multiplicity::Finite(m) => Some(m),
            Multiplicity::Infinite => None,
        }
    }

    /// `self >= m` for a finite threshold.
    pub fn at_least(self, m: u32) -> bool {
        match self {
            Multiplicity::Finite(k) => k >= m,
            Multiplicity::Infinite => true,
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(m) => s.serialize_u32(*m),
            Multiplicity::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultReport {
    pub point: Vec<Elem>,
    pub mult: Multiplicity,
    /// Lex-least `beta` of minimal order with `P^(beta)(point) != 0`.
    pub witness: Option<MultiIndex>,
}

/// Powers `a_i^e` for `e <= max` of each coordinate, so that Hasse values at a
/// fixed point cost one pass over the terms.
struct PointPowers {
    table: Vec<Vec<Elem>>,
}

impl PointPowers {
    fn new(field: &Field, point: &[Elem], max: u32) -> Self {
        let table = point
            .iter()
            .map(|&a| {
                let mut v = Vec::with_capacity(max as usize + 1);
                v.push(field.one());
                for k in 1..=max as usize {
                    v.push(field.mul(v[k - 1], a));
                }
                v
            })
            .collect();
        PointPowers { table }
    }
}

fn max_exponent(p: &SparsePoly) -> u32 {
    p.terms()
        .flat_map(|(e, _)| e.exps().to_vec())
        .max()
        .unwrap_or(0)
}

/// `P^(beta)(a) = sum_{alpha >= beta} c_alpha C(alpha, beta) a^(alpha - beta)`.
fn hasse_value(p: &SparsePoly, beta: &MultiIndex, pw: &PointPowers) -> Elem {
    let f = p.field();
    let mut acc = f.zero();
    for (alpha, c) in p.terms() {
        if !beta.divides(alpha) {
            continue;
        }
        let b = binom_multi_mod_p(alpha, beta, f.p());
        if b == 0 {
            continue;
        }
        let mut t = f.mul(c, f.from_u128(b as u128));
        for (i, (&ai, &bi)) in alpha.exps().iter().zip(beta.exps()).enumerate() {
            t = f.mul(t, pw.table[i][(ai - bi) as usize]);
        }
        acc = f.add(acc, t);
    }
    acc
}

/// First `beta` (by increasing order, lex within an order) below `levels`
/// with a nonvanishing derivative at the point.
fn first_nonvanishing(p: &SparsePoly, pw: &PointPowers, levels: u32) -> Option<MultiIndex> {
    for w in 0..levels {
        for beta in indices_of_degree(p.arity(), w) {
            if !hasse_value(p, &beta, pw).is_zero() {
                return Some(beta);
            }
        }
    }
    None
}

fn check_point(p: &SparsePoly, point: &[Elem]) -> Result<()> {
    if point.len() != p.arity() {
        return Err(Error::ArityMismatch {
            expected: p.arity(),
            found: point.len(),
        });
    }
    for &c in point {
        if c.code() >= p.field().q() {
            return Err(Error::MixedFields);
        }
    }
    Ok(())
}

pub fn mult_at(p: &SparsePoly, point: &[Elem]) -> Result<MultReport> {
    check_point(p, point)?;
    let Degree::Finite(deg) = p.degree() else {
        return Ok(MultReport {
            point: point.to_vec(),
            mult: Multiplicity::Infinite,
            witness: None,
        });
    };
    let pw = PointPowers::new(p.field(), point, max_exponent(p));
    // the top-degree term itself is a nonvanishing derivative of order deg
    let beta = first_nonvanishing(p, &pw, deg + 1).expect("nonzero polynomial has a witness");
    Ok(MultReport {
        point: point.to_vec(),
        mult: Multiplicity::Finite(beta.total()),
        witness: Some(beta),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishCheck {
    pub holds: bool,
    /// The first offending point and a derivative that does not vanish there.
    pub failure: Option<(Vec<Elem>, MultiIndex)>,
}

/// Whether `mult(P, a) >= m` for every `a` in `points`.
pub fn vanishes_with_mult(p: &SparsePoly, points: &[Vec<Elem>], m: u32) -> Result<VanishCheck> {
    for point in points {
        check_point(p, point)?;
    }
    if !p.is_zero() {
        let top = max_exponent(p);
        for point in points {
            let pw = PointPowers::new(p.field(), point, top);
            if let Some(beta) = first_nonvanishing(p, &pw, m) {
                return Ok(VanishCheck {
                    holds: false,
                    failure: Some((point.clone(), beta)),
                });
            }
        }
    }
    Ok(VanishCheck {
        holds: true,
        failure: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    pub total_mult: u128,
    pub bound: u128,
    pub ok: bool,
}

/// Sums `mult(P, a)` over the grid `A^n` and compares with `deg(P) |A|^(n-1)`.
pub fn schwartz_zippel_audit(p: &SparsePoly, set: &[Elem]) -> Result<AuditRecord> {
    let Degree::Finite(deg) = p.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    let mut set = set.to_vec();
    set.sort();
    set.dedup();
    for &c in &set {
        if c.code() >= p.field().q() {
            return Err(Error::MixedFields);
        }
    }
    let n = p.arity() as u32;
    let size = set.len() as u128;
    let grid = size.checked_pow(n).unwrap_or(u128::MAX);
    if grid > AUDIT_LIMIT {
        return Err(Error::SizeGuard(format!("audit grid of {grid} points")));
    }
    let bound = match n {
        0 => 0,
        _ => deg as u128 * size.pow(n - 1),
    };
    let mut total: u128 = 0;
    for point in grid_points(&set, p.arity()) {
        let r = mult_at(p, &point)?;
        total += r.mult.finite().expect("nonzero polynomial") as u128;
    }
    Ok(AuditRecord {
        total_mult: total,
        bound,
        ok: total <= bound,
    })
}

/// Consistency check of the vanishing corollary: a polynomial that vanishes
/// on all of `F_q^n` with multiplicity `m` and has degree below `m q` must be
/// zero. Returns `false` only for an instance that violates this.
pub fn corollary_zero_check(p: &SparsePoly, m: u32) -> Result<bool> {
    let Degree::Finite(deg) = p.degree() else {
        return Ok(true);
    };
    let q = p.field().q();
    if deg as u64 >= m as u64 * q as u64 {
        return Ok(true);
    }
    let grid = (q as u128).checked_pow(p.arity() as u32).unwrap_or(u128::MAX);
    if grid > AUDIT_LIMIT {
        return Err(Error::SizeGuard(format!("grid of {grid} points")));
    }
    let all: Vec<Elem> = p.field().elements().collect();
    let points: Vec<Vec<Elem>> = grid_points(&all, p.arity()).collect();
    Ok(!vanishes_with_mult(p, &points, m)?.holds)
}

/// All points of `set^n` in lex order of their index tuples.
pub fn grid_points(set: &[Elem], n: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let size = set.len();
    let total = if size == 0 && n > 0 { 0 } else { size.pow(n as u32) };
    (0..total).map(move |mut idx| {
        let mut pt = vec![Elem::ZERO; n];
        for slot in pt.iter_mut().rev() {
            *slot = set[idx % size];
            idx /= size;
        }
        pt
    })
}
