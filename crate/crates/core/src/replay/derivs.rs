//! Derivatives of a polynomial vanishing to high order on a curve vanish
//! identically along it.

use serde_json::json;

use crate::brkset::first_violation;
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::json::{point_to_json, PolyDoc};
use crate::mpoly::{indices_below_degree, Degree, SparsePoly};
use crate::multiplicity::{grid_points, vanishes_with_mult};

use super::{Certificate, DEFAULT_SEED};

/// `{a + rho (lambda, g(lambda)) : lambda in F_q^(n-1)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub a: Vec<Elem>,
    pub rho: Elem,
    pub g: SparsePoly,
}

impl Curve {
    pub fn points(&self) -> Vec<Vec<Elem>> {
        let f = self.g.field();
        let all: Vec<Elem> = f.elements().collect();
        grid_points(&all, self.g.arity())
            .map(|lambda| {
                let top = self.g.eval(&lambda).expect("arity n - 1");
                lambda
                    .iter()
                    .chain(std::iter::once(&top))
                    .zip(&self.a)
                    .map(|(&x, &a)| f.add(a, f.mul(self.rho, x)))
                    .collect()
            })
            .collect()
    }

    /// `a + rho (s, g(s))` as `n` polynomials in `s`.
    pub fn parametrization(&self) -> Vec<SparsePoly> {
        let f = self.g.field();
        let m = self.g.arity();
        (0..=m)
            .map(|i| {
                let base = if i < m { SparsePoly::var(f, m, i) } else { self.g.clone() };
                &base.scale(self.rho) + &SparsePoly::constant(f, m, self.a[i])
            })
            .collect()
    }
}

fn precondition(msg: String) -> Error {
    Error::PreconditionFailed(msg)
}

/// Checks every hypothesis, then that `P^(beta)(a + rho (s, g(s)))` is the zero
/// polynomial for each `|beta| < k`.
pub fn check_derivs_zero(p: &SparsePoly, curve: &Curve, k: u64, d: u64, m: u64) -> Result<Certificate> {
    let f: &Field = p.field();
    if curve.g.field() != f {
        return Err(Error::MixedFields);
    }
    let n = p.arity();
    if curve.a.len() != n || curve.g.arity() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: curve.a.len().max(curve.g.arity() + 1),
        });
    }
    let Degree::Finite(ell) = curve.g.degree() else {
        return Err(precondition("g is the zero polynomial".into()));
    };
    if ell < 2 || ell >= f.q() {
        return Err(precondition(format!("deg g = {ell} is outside 2 <= ell < q = {}", f.q())));
    }
    let deg = match p.degree() {
        Degree::NegInfinity => return Err(precondition("P is the zero polynomial".into())),
        Degree::Finite(x) => x,
    };
    if deg as u64 > d {
        return Err(precondition(format!("deg P = {deg} exceeds D = {d}")));
    }
    if let Some(w) = first_violation(f.q(), ell, k, d, m) {
        return Err(precondition(format!(
            "inequality ell(D-w) < (M-w)q fails at w = {w}: {} >= {}",
            ell as i128 * (d as i128 - w as i128),
            (m as i128 - w as i128) * f.q() as i128
        )));
    }
    let mult = u32::try_from(m).map_err(|_| Error::Overflow("multiplicity"))?;
    let vanish = vanishes_with_mult(p, &curve.points(), mult)?;
    if let Some((pt, beta)) = vanish.failure {
        return Err(precondition(format!(
            "P does not vanish with multiplicity {m} on the curve: P^({beta:?}) is nonzero at {}",
            point_to_json(f, &pt)
        )));
    }

    let mut cert = Certificate::new(
        "derivs-zero",
        DEFAULT_SEED,
        json!({
            "P": PolyDoc::from_poly(p),
            "curve": {"a": point_to_json(f, &curve.a), "rho": crate::json::elem_to_json(f, curve.rho), "g": PolyDoc::from_poly(&curve.g)},
            "k": k, "D": d, "M": m,
        }),
    );
    cert.steps.push(json!({"precondition": "P nonzero", "deg": deg}));
    cert.steps.push(json!({"precondition": "inequality", "ell": ell, "checked_w": k}));
    cert.steps.push(json!({"precondition": "vanishing on curve", "points": curve.points().len(), "mult": m}));
    let h = curve.parametrization();
    let order = u32::try_from(k).map_err(|_| Error::Overflow("derivative order"))?;
    for beta in indices_below_degree(n, order) {
        let composed = p.hasse_derivative(&beta)?.compose(&h)?;
        cert.steps.push(json!({"beta": beta, "composed_terms": composed.num_terms()}));
        if !composed.is_zero() {
            cert.fail(json!({"beta": beta, "composed": PolyDoc::from_poly(&composed)}));
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::MultiIndex;

    fn parabola_poly(f: &Field) -> SparsePoly {
        SparsePoly::from_terms(
            f,
            2,
            [(MultiIndex::from(vec![0, 1]), f.one()), (MultiIndex::from(vec![2, 0]), f.from_int(-1))],
        )
        .unwrap()
    }

    fn parabola(f: &Field) -> Curve {
        Curve {
            a: vec![f.zero(), f.zero()],
            rho: f.one(),
            g: SparsePoly::monomial(f, MultiIndex::from(vec![2]), f.one()),
        }
    }

    #[test]
    fn simple_parabola() {
        let f = Field::prime(5).unwrap();
        let c = check_derivs_zero(&parabola_poly(&f), &parabola(&f), 1, 2, 1).unwrap();
        assert!(c.passed());
    }

    #[test]
    fn squared_parabola_at_q7_and_q5() {
        let f7 = Field::prime(7).unwrap();
        let p = parabola_poly(&f7).pow(2);
        let c = check_derivs_zero(&p, &parabola(&f7), 2, 4, 2).unwrap();
        assert!(c.passed());
        assert_eq!(c.steps.len(), 3 + 3);

        let f5 = Field::prime(5).unwrap();
        let p = parabola_poly(&f5).pow(2);
        match check_derivs_zero(&p, &parabola(&f5), 2, 4, 2) {
            Err(Error::PreconditionFailed(msg)) => assert!(msg.contains("w = 1"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_hypotheses_reported() {
        let f = Field::prime(5).unwrap();
        let zero = SparsePoly::zero(&f, 2);
        assert!(matches!(check_derivs_zero(&zero, &parabola(&f), 1, 2, 1), Err(Error::PreconditionFailed(_))));
        let x1 = SparsePoly::var(&f, 2, 0);
        match check_derivs_zero(&x1, &parabola(&f), 1, 2, 1) {
            Err(Error::PreconditionFailed(msg)) => assert!(msg.contains("vanish"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let big = parabola_poly(&f).pow(2);
        match check_derivs_zero(&big, &parabola(&f), 1, 2, 1) {
            Err(Error::PreconditionFailed(msg)) => assert!(msg.contains("exceeds"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
