//! Interpolating polynomials that vanish to a given order on a point set.
//!
//! The unknowns are the coefficients `c_alpha` of a polynomial of degree at
//! most `D`, one column per monomial in graded order (degree, then ascending
//! lex). Each point `a` and each `beta` with `|beta| < M` gives the row
//! `P^(beta)(a) = sum_alpha C(alpha, beta) a^(alpha - beta) c_alpha = 0`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::json::elem_to_json;
use crate::linalg::{row_reduce, Echelon, Matrix};
use crate::mpoly::{binom_multi_mod_p, binomial, indices_below_degree, indices_up_to_degree, MultiIndex, SparsePoly};
use crate::multiplicity::vanishes_with_mult;

/// Largest `rows * cols` a system may have.
pub const SYSTEM_LIMIT: u128 = 100_000_000;

#[derive(Clone, Debug)]
pub struct VanishProblem {
    field: Field,
    arity: usize,
    points: Vec<Vec<Elem>>,
    degree: u32,
    mult: u32,
}

impl VanishProblem {
    /// Duplicate points are collapsed, keeping first occurrences in order.
    pub fn new(
        field: &Field,
        arity: usize,
        points: Vec<Vec<Elem>>,
        degree: u32,
        mult: u32,
    ) -> Result<Self> {
        if mult == 0 {
            return Err(Error::InvalidInstance("multiplicity must be at least 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut unique = Vec::with_capacity(points.len());
        for pt in points {
            if pt.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: pt.len(),
                });
            }
            for &c in &pt {
                field.elem(c.code())?;
            }
            if seen.insert(pt.clone()) {
                unique.push(pt);
            }
        }
        Ok(VanishProblem {
            field: field.clone(),
            arity,
            points: unique,
            degree,
            mult,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mult(&self) -> u32 {
        self.mult
    }

    /// `C(D + n, n)`.
    pub fn unknown_count(&self) -> u128 {
        binomial(self.degree as u64 + self.arity as u64, self.arity as u64).unwrap_or(u128::MAX)
    }

    /// `|A| C(M + n - 1, n)`.
    pub fn constraint_count(&self) -> u128 {
        let per_point = binomial(self.mult as u64 + self.arity as u64 - 1, self.arity as u64)
            .unwrap_or(u128::MAX);
        per_point.saturating_mul(self.points.len() as u128)
    }

    /// The strict counting inequality under which a nonzero solution must exist.
    pub fn counting_inequality_holds(&self) -> bool {
        self.constraint_count() < self.unknown_count()
    }
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    field: Field,
    /// `(point index, beta)` per row.
    pub rows: Vec<(usize, MultiIndex)>,
    /// Monomial per column.
    pub cols: Vec<MultiIndex>,
    pub matrix: Matrix,
}

impl LinearSystem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn solve(&self) -> Echelon {
        row_reduce(&self.field, self.matrix.clone())
    }

    /// Debug dump: `{"rows": [...], "cols": [...], "entries": [[elem,...],...]}`.
    pub fn to_json(&self, points: &[Vec<Elem>]) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(i, beta)| {
                let pt: Vec<Value> = points[*i].iter().map(|&c| elem_to_json(&self.field, c)).collect();
                json!({"point": pt, "beta": beta})
            })
            .collect();
        let entries: Vec<Vec<Value>> = (0..self.matrix.rows())
            .map(|r| {
                self.matrix
                    .row(r)
                    .iter()
                    .map(|&c| elem_to_json(&self.field, c))
                    .collect()
            })
            .collect();
        json!({"rows": rows, "cols": self.cols, "entries": entries})
    }
}

pub fn build_system(prob: &VanishProblem) -> Result<LinearSystem> {
    let unknowns = prob.unknown_count();
    let constraints = prob.constraint_count();
    if unknowns.saturating_mul(constraints) > SYSTEM_LIMIT {
        return Err(Error::SizeGuard(format!(
            "{constraints} x {unknowns} system exceeds {SYSTEM_LIMIT} entries"
        )));
    }
    let f = &prob.field;
    let cols = indices_up_to_degree(prob.arity, prob.degree);
    let betas = indices_below_degree(prob.arity, prob.mult);
    let mut rows = Vec::with_capacity(constraints as usize);
    let mut matrix = Matrix::zeros(constraints as usize, cols.len());
    let top = prob.degree as usize;
    let mut r = 0;
    for (pi, point) in prob.points.iter().enumerate() {
        let powers: Vec<Vec<Elem>> = point
            .iter()
            .map(|&a| {
                let mut v = vec![f.one(); top + 1];
                for k in 1..=top {
                    v[k] = f.mul(v[k - 1], a);
                }
                v
            })
            .collect();
        for beta in &betas {
            for (c, alpha) in cols.iter().enumerate() {
                let Some(rest) = alpha.checked_sub(beta) else {
                    continue;
                };
                let b = binom_multi_mod_p(alpha, beta, f.p());
                if b == 0 {
                    continue;
                }
                let mut v = f.from_u128(b as u128);
                for (i, &e) in rest.exps().iter().enumerate() {
                    v = f.mul(v, powers[i][e as usize]);
                }
                matrix.set(r, c, v);
            }
            rows.push((pi, beta.clone()));
            r += 1;
        }
    }
    Ok(LinearSystem {
        field: f.clone(),
        rows,
        cols,
        matrix,
    })
}

/// A nonzero polynomial of degree at most `D` vanishing on the points with
/// multiplicity `M`, or `None` if only the zero polynomial does. The returned
/// polynomial is the canonical nullspace vector of the system.
pub fn find_vanishing_poly(prob: &VanishProblem) -> Result<Option<SparsePoly>> {
    let system = build_system(prob)?;
    let echelon = system.solve();
    let Some(v) = echelon.canonical_null_vector(&prob.field) else {
        return Ok(None);
    };
    let poly = SparsePoly::from_terms(
        &prob.field,
        prob.arity,
        system.cols.iter().cloned().zip(v),
    )?;
    let check = vanishes_with_mult(&poly, &prob.points, prob.mult)?;
    assert!(
        check.holds && !poly.is_zero() && poly.degree().finite() <= Some(prob.degree),
        "interpolated polynomial failed re-verification: {:?}",
        check.failure
    );
    Ok(Some(poly))
}

/// True iff the zero polynomial is the only solution.
pub fn nullspace_trivial(prob: &VanishProblem) -> Result<bool> {
    let system = build_system(prob)?;
    Ok(system.solve().rank() == system.cols.len())
}

/// Rank of the constraint system together with the number of unknowns.
pub fn system_rank(prob: &VanishProblem) -> Result<(usize, usize)> {
    let system = build_system(prob)?;
    Ok((system.solve().rank(), system.cols.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(f: &Field, raw: &[&[i64]]) -> Vec<Vec<Elem>> {
        raw.iter()
            .map(|p| p.iter().map(|&c| f.from_int(c)).collect())
            .collect()
    }

    #[test]
    fn origin_double_point_linear() {
        let f = Field::prime(3).unwrap();
        let prob = VanishProblem::new(&f, 2, pts(&f, &[&[0, 0]]), 1, 2).unwrap();
        let sys = build_system(&prob).unwrap();
        assert_eq!((sys.matrix.rows(), sys.matrix.cols()), (3, 3));
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { f.one() } else { f.zero() };
                assert_eq!(sys.matrix.get(r, c), expect);
            }
        }
        assert!(nullspace_trivial(&prob).unwrap());
        assert!(find_vanishing_poly(&prob).unwrap().is_none());
    }

    #[test]
    fn empty_set_has_no_rows() {
        let f = Field::prime(3).unwrap();
        let prob = VanishProblem::new(&f, 2, vec![], 0, 1).unwrap();
        let sys = build_system(&prob).unwrap();
        assert_eq!(sys.matrix.rows(), 0);
        assert!(!nullspace_trivial(&prob).unwrap());
        assert_eq!(
            find_vanishing_poly(&prob).unwrap().unwrap(),
            SparsePoly::one(&f, 2)
        );
    }

    #[test]
    fn single_point_evaluation_row() {
        let f = Field::prime(2).unwrap();
        let prob = VanishProblem::new(&f, 2, pts(&f, &[&[1, 1]]), 1, 1).unwrap();
        let sys = build_system(&prob).unwrap();
        assert_eq!(sys.matrix.rows(), 1);
        assert_eq!(sys.matrix.row(0), &[f.one(), f.one(), f.one()]);
    }

    #[test]
    fn origin_double_point_quadratic() {
        let f = Field::prime(3).unwrap();
        let prob = VanishProblem::new(&f, 2, pts(&f, &[&[0, 0]]), 2, 2).unwrap();
        assert_eq!((prob.constraint_count(), prob.unknown_count()), (3, 6));
        let p = find_vanishing_poly(&prob).unwrap().unwrap();
        assert!(p.terms().all(|(e, _)| e.total() == 2));
        // canonical choice: first free column is x2^2
        assert_eq!(p, SparsePoly::monomial(&f, MultiIndex::from(vec![0, 2]), f.one()));
    }

    #[test]
    fn parabola_interpolation() {
        let f = Field::prime(5).unwrap();
        let points: Vec<Vec<Elem>> = f.elements().map(|l| vec![l, f.mul(l, l)]).collect();
        let prob = VanishProblem::new(&f, 2, points, 2, 1).unwrap();
        let p = find_vanishing_poly(&prob).unwrap().unwrap();
        let parabola = SparsePoly::from_terms(
            &f,
            2,
            [
                (MultiIndex::from(vec![0, 1]), f.one()),
                (MultiIndex::from(vec![2, 0]), f.from_int(-1)),
            ],
        )
        .unwrap();
        let (e, b) = parabola.min_lex_exponent().unwrap();
        let scale = f.div(p.coeff(&e), b).unwrap();
        assert_eq!(p, parabola.scale(scale));
    }

    #[test]
    fn duplicate_points_collapse_and_guard_trips() {
        let f = Field::prime(3).unwrap();
        let prob = VanishProblem::new(&f, 1, pts(&f, &[&[1], &[1], &[2]]), 3, 1).unwrap();
        assert_eq!(prob.points().len(), 2);
        assert!(VanishProblem::new(&f, 1, vec![], 3, 0).is_err());
        let big = VanishProblem::new(&f, 3, pts(&f, &[&[0, 0, 0]]), 400, 60).unwrap();
        assert!(matches!(build_system(&big), Err(Error::SizeGuard(_))));
    }
}
