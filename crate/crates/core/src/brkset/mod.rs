//! BRK-type sets and Kakeya sets in `F_q^n`.
//!
//! A BRK-type set of degree `ell` contains, for every `rho` in `F_q`, the
//! surface `{a(rho) + rho (lambda, g_rho(lambda)) : lambda in F_q^(n-1)}`
//! where every `g_rho` has top homogeneous part equal to one fixed form `g`.

mod bound;
mod kakeya;
mod search;

use std::collections::BTreeSet;

pub use bound::{first_violation, proof_params, theorem_bound, ProofParams, TheoremBound};
pub use kakeya::{kakeya_set, verify_kakeya};
pub use search::{min_brk_search, SearchMode, SearchResult, EXHAUSTIVE_LIMIT};

use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::mpoly::{Degree, SparsePoly};
use crate::multiplicity::grid_points;

/// A subset of `F_q^n`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: Field,
    n: usize,
    points: BTreeSet<Vec<Elem>>,
}

impl PointSet {
    pub fn new(field: &Field, n: usize) -> Self {
        PointSet {
            field: field.clone(),
            n,
            points: BTreeSet::new(),
        }
    }

    pub fn from_points<I: IntoIterator<Item = Vec<Elem>>>(field: &Field, n: usize, points: I) -> Result<Self> {
        let mut s = PointSet::new(field, n);
        for pt in points {
            if pt.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: pt.len(),
                });
            }
            for &c in &pt {
                field.elem(c.code())?;
            }
            s.points.insert(pt);
        }
        Ok(s)
    }

    /// All of `F_q^n`.
    pub fn full(field: &Field, n: usize) -> Self {
        let all: Vec<Elem> = field.elements().collect();
        PointSet {
            field: field.clone(),
            n,
            points: grid_points(&all, n).collect(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, pt: &[Elem]) -> bool {
        self.points.contains(pt)
    }

    pub fn insert(&mut self, pt: Vec<Elem>) {
        debug_assert_eq!(pt.len(), self.n);
        self.points.insert(pt);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Elem>> {
        self.points.iter()
    }

    pub fn to_vec(&self) -> Vec<Vec<Elem>> {
        self.points.iter().cloned().collect()
    }
}

/// Translation and lower-order part chosen for one `rho`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoChoice {
    pub a: Vec<Elem>,
    pub lower: SparsePoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrkInstance {
    field: Field,
    n: usize,
    ell: u32,
    g: SparsePoly,
    /// Indexed by the code of `rho`.
    choices: Vec<RhoChoice>,
}

/// Checks that `g` is a nonzero form of degree exactly `ell` in `n - 1`
/// variables over `field`, with `2 <= ell < q`.
pub(crate) fn check_form(field: &Field, n: usize, ell: u32, g: &SparsePoly) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!("dimension {n} is below 2")));
    }
    if ell < 2 || ell >= field.q() {
        return Err(Error::EllOutOfRange { ell, q: field.q() });
    }
    if g.field() != field {
        return Err(Error::MixedFields);
    }
    if g.arity() != n - 1 {
        return Err(Error::ArityMismatch {
            expected: n - 1,
            found: g.arity(),
        });
    }
    if g.degree() != Degree::Finite(ell) || !g.is_homogeneous() {
        return Err(Error::InvalidInstance(format!(
            "g must be a nonzero homogeneous polynomial of degree {ell}"
        )));
    }
    Ok(())
}

impl BrkInstance {
    pub fn new(field: &Field, n: usize, ell: u32, g: SparsePoly, choices: Vec<RhoChoice>) -> Result<Self> {
        check_form(field, n, ell, &g)?;
        if choices.len() != field.q() as usize {
            return Err(Error::InvalidInstance(format!(
                "{} per-rho entries, expected {}",
                choices.len(),
                field.q()
            )));
        }
        for ch in &choices {
            if ch.a.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: ch.a.len(),
                });
            }
            for &c in &ch.a {
                field.elem(c.code())?;
            }
            if ch.lower.field() != field {
                return Err(Error::MixedFields);
            }
            if ch.lower.arity() != n - 1 {
                return Err(Error::ArityMismatch {
                    expected: n - 1,
                    found: ch.lower.arity(),
                });
            }
            if ch.lower.degree() >= Degree::Finite(ell) {
                return Err(Error::InvalidInstance(format!(
                    "lower-order part {} has degree {} >= ell",
                    ch.lower,
                    ch.lower.degree()
                )));
            }
        }
        Ok(BrkInstance {
            field: field.clone(),
            n,
            ell,
            g,
            choices,
        })
    }

    /// Every `a(rho) = 0` and `g_rho = g`.
    pub fn uniform(field: &Field, n: usize, ell: u32, g: SparsePoly) -> Result<Self> {
        let choices = field
            .elements()
            .map(|_| RhoChoice {
                a: vec![field.zero(); n],
                lower: SparsePoly::zero(field, n - 1),
            })
            .collect();
        BrkInstance::new(field, n, ell, g, choices)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn g(&self) -> &SparsePoly {
        &self.g
    }

    pub fn choices(&self) -> &[RhoChoice] {
        &self.choices
    }

    pub fn choice(&self, rho: Elem) -> &RhoChoice {
        &self.choices[rho.code() as usize]
    }

    /// `g_rho = g + lower(rho)`.
    pub fn g_rho(&self, rho: Elem) -> SparsePoly {
        &self.g + &self.choice(rho).lower
    }

    /// The points `a(rho) + rho (lambda, g_rho(lambda))` in `lambda` order.
    pub fn surface(&self, rho: Elem) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let ch = self.choice(rho);
        let g_rho = self.g_rho(rho);
        let all: Vec<Elem> = f.elements().collect();
        grid_points(&all, self.n - 1)
            .map(|lambda| {
                let top = g_rho.eval(&lambda).expect("lambda has arity n - 1");
                lambda
                    .iter()
                    .chain(std::iter::once(&top))
                    .zip(&ch.a)
                    .map(|(&x, &a)| f.add(a, f.mul(rho, x)))
                    .collect()
            })
            .collect()
    }
}

/// The smallest set containing every prescribed surface.
pub fn generate_set(inst: &BrkInstance) -> PointSet {
    let mut s = PointSet::new(&inst.field, inst.n);
    for rho in inst.field.elements() {
        for pt in inst.surface(rho) {
            s.insert(pt);
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Containment {
    pub holds: bool,
    pub missing: Option<Vec<Elem>>,
}

/// Whether `set` contains every surface of `inst`; reports the first missing
/// point in `rho`, then `lambda`, order.
pub fn verify_brk(set: &PointSet, inst: &BrkInstance) -> Result<Containment> {
    if set.field != inst.field {
        return Err(Error::MixedFields);
    }
    if set.n != inst.n {
        return Err(Error::DimensionMismatch {
            expected: inst.n,
            found: set.n,
        });
    }
    for rho in inst.field.elements() {
        if let Some(pt) = inst.surface(rho).into_iter().find(|pt| !set.contains(pt)) {
            return Ok(Containment {
                holds: false,
                missing: Some(pt),
            });
        }
    }
    Ok(Containment {
        holds: true,
        missing: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::MultiIndex;

    fn square(f: &Field) -> SparsePoly {
        SparsePoly::monomial(f, MultiIndex::from(vec![2]), f.one())
    }

    fn ints(f: &Field, pts: &PointSet) -> Vec<Vec<u32>> {
        let _ = f;
        pts.iter().map(|p| p.iter().map(|c| c.code()).collect()).collect()
    }

    #[test]
    fn parabolas_over_f3() {
        let f = Field::prime(3).unwrap();
        let inst = BrkInstance::uniform(&f, 2, 2, square(&f)).unwrap();
        let s = generate_set(&inst);
        assert_eq!(
            ints(&f, &s),
            vec![vec![0, 0], vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]
        );
        assert!(verify_brk(&s, &inst).unwrap().holds);
    }

    #[test]
    fn rho_zero_contributes_its_translation() {
        let f = Field::prime(3).unwrap();
        let mut choices: Vec<RhoChoice> = f
            .elements()
            .map(|_| RhoChoice {
                a: vec![f.zero(), f.zero()],
                lower: SparsePoly::zero(&f, 1),
            })
            .collect();
        choices[0].a = vec![f.one(), f.one()];
        let inst = BrkInstance::new(&f, 2, 2, square(&f), choices).unwrap();
        assert_eq!(inst.surface(f.zero()), vec![vec![f.one(); 2]; 3]);
        let s = generate_set(&inst);
        assert!(s.contains(&[f.one(), f.one()]));
    }

    #[test]
    fn missing_point_reported() {
        let f = Field::prime(5).unwrap();
        let inst = BrkInstance::uniform(&f, 2, 2, square(&f)).unwrap();
        let full = generate_set(&inst);
        let victim = vec![f.from_int(2), f.from_int(4)];
        assert!(full.contains(&victim));
        let holed = PointSet::from_points(&f, 2, full.iter().filter(|p| **p != victim).cloned()).unwrap();
        let c = verify_brk(&holed, &inst).unwrap();
        assert!(!c.holds);
        assert_eq!(c.missing, Some(victim));
        assert!(verify_brk(&PointSet::full(&f, 2), &inst).unwrap().holds);
    }

    #[test]
    fn cardinality_bound() {
        for q in [3u32, 4, 5, 7] {
            let f = Field::with_order(q).unwrap();
            let inst = BrkInstance::uniform(&f, 2, 2, square(&f)).unwrap();
            let s = generate_set(&inst);
            assert!(s.len() <= 1 + (q as usize - 1) * q as usize);
        }
    }

    #[test]
    fn instance_validation() {
        let f = Field::prime(5).unwrap();
        let g = square(&f);
        let not_form = &g + &SparsePoly::var(&f, 1, 0);
        assert!(BrkInstance::uniform(&f, 2, 2, not_form).is_err());
        assert!(matches!(
            BrkInstance::uniform(&f, 2, 5, g.clone()),
            Err(Error::EllOutOfRange { .. })
        ));
        let mut choices: Vec<RhoChoice> = f
            .elements()
            .map(|_| RhoChoice {
                a: vec![f.zero(), f.zero()],
                lower: SparsePoly::zero(&f, 1),
            })
            .collect();
        choices[2].lower = square(&f);
        assert!(BrkInstance::new(&f, 2, 2, g.clone(), choices.clone()).is_err());
        choices.pop();
        assert!(BrkInstance::new(&f, 2, 2, g, choices).is_err());
    }
}
