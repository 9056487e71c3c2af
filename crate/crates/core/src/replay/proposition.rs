//! Contrapositive replay of the homogeneous statement: a nonzero
//! weighted-homogeneous `Q` of degree `< k(q-1)` has some `|beta| < k` and
//! `rho != 0` with `Q^(beta)(rho (s, f(s)))` not identically zero.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::json::{elem_to_json, PolyDoc};
use crate::mpoly::{indices_below_degree, indices_up_to_degree, Degree, MultiIndex, SparsePoly};
use crate::random;

use super::key_lemma::{key_lemma_table, KeyLemmaInstance};
use super::{min_exponent_partition, par_map, weighted_partition, Certificate, Trials};

/// `Q^(beta)(rho (s, f(s)))`.
pub fn composed_derivative(q: &SparsePoly, f: &SparsePoly, beta: &MultiIndex, rho: Elem) -> Result<SparsePoly> {
    let field = q.field();
    let m = f.arity();
    let h: Vec<SparsePoly> = (0..m)
        .map(|i| SparsePoly::var(field, m, i))
        .chain(std::iter::once(f.clone()))
        .map(|p| p.scale(rho))
        .collect();
    q.hasse_derivative(beta)?.compose(&h)
}

struct Outcome {
    hit: Option<(MultiIndex, Elem, usize)>,
    /// Whether the key-lemma table of the lex-least class is nonzero.
    key_lemma_nonzero: bool,
    class: MultiIndex,
}

fn examine(q: &SparsePoly, f: &SparsePoly, k: u32) -> Result<Outcome> {
    let field = q.field();
    let n = q.arity();
    let mut hit = None;
    'search: for beta in indices_below_degree(n, k) {
        for rho in field.nonzero_elements() {
            let c = composed_derivative(q, f, &beta, rho)?;
            if !c.is_zero() {
                hit = Some((beta, rho, c.num_terms()));
                break 'search;
            }
        }
    }
    // the coefficient of the lex-least exponent class is a key-lemma sum
    let (e, b) = f.min_lex_exponent()?;
    let support: Vec<MultiIndex> = q.terms().map(|(a, _)| a.clone()).collect();
    let classes = min_exponent_partition(&support, &e)?;
    let (class, members) = classes.into_iter().next().ok_or(Error::ZeroPolynomial)?;
    let terms = members.iter().map(|a| (a.clone(), q.coeff(a))).collect();
    let inst = KeyLemmaInstance::new(field, n, k as u64, terms, b)?;
    Ok(Outcome {
        hit,
        key_lemma_nonzero: key_lemma_table(&inst).first_nonzero().is_some(),
        class,
    })
}

/// A random nonzero `Q` whose exponents all have one weighted degree `m` and
/// total degree `< k(q-1)`.
fn random_q<R: Rng>(classes: &BTreeMap<u64, Vec<MultiIndex>>, field: &Field, n: usize, rng: &mut R) -> SparsePoly {
    let keys: Vec<&u64> = classes.keys().collect();
    let m = keys[rng.gen_range(0..keys.len())];
    let class = &classes[m];
    let count = rng.gen_range(1..=class.len().min(4));
    let terms: Vec<(MultiIndex, Elem)> = class
        .choose_multiple(rng, count)
        .map(|a| (a.clone(), random::nonzero_elem(field, rng)))
        .collect();
    SparsePoly::from_terms(field, n, terms).expect("well-formed terms")
}

pub fn check_proposition(trials: Trials, field: &Field, n: usize, ell: u32, k: u64, f: &SparsePoly) -> Result<Certificate> {
    if f.field() != field {
        return Err(Error::MixedFields);
    }
    if n < 2 || f.arity() != n - 1 {
        return Err(Error::PreconditionFailed(format!("f must have {} variables", n.saturating_sub(1))));
    }
    if ell < 2 {
        return Err(Error::PreconditionFailed(format!("ell = {ell} must be at least 2")));
    }
    if f.degree() != Degree::Finite(ell) || !f.is_homogeneous() {
        return Err(Error::PreconditionFailed(format!(
            "f must be nonzero and homogeneous of degree {ell}"
        )));
    }
    let cap = k * (field.q() as u64 - 1);
    if cap < 2 {
        return Err(Error::PreconditionFailed(format!("k(q-1) = {cap} must be at least 2")));
    }
    let k32 = u32::try_from(k).map_err(|_| Error::Overflow("k"))?;
    let cap32 = u32::try_from(cap).map_err(|_| Error::Overflow("k(q-1)"))?;
    let classes = weighted_partition(&indices_up_to_degree(n, cap32 - 1), ell)?;

    let mut cert = Certificate::new(
        "proposition",
        trials.seed,
        json!({"field": field.spec(), "n": n, "ell": ell, "k": k, "f": PolyDoc::from_poly(f), "trials": trials.count}),
    );
    let mut rng = random::rng_from_seed(trials.seed);
    let qs: Vec<SparsePoly> = (0..trials.count)
        .map(|_| random_q(&classes, field, n, &mut rng))
        .collect();
    let outcomes = par_map(&qs, trials.jobs, |q| examine(q, f, k32));
    for (i, (q, out)) in qs.iter().zip(outcomes).enumerate() {
        let out = out?;
        let m = q
            .terms()
            .next()
            .map(|(a, _)| crate::mpoly::weighted_degree(a, ell))
            .transpose()?
            .expect("Q is nonzero");
        let mut step = json!({
            "trial": i,
            "m": m,
            "terms": q.num_terms(),
            "class": out.class,
            "key_lemma_nonzero": out.key_lemma_nonzero,
        });
        match &out.hit {
            Some((beta, rho, count)) => {
                step["beta"] = json!(beta);
                step["rho"] = elem_to_json(field, *rho);
                step["composed_terms"] = json!(count);
            }
            None => step["all_zero"] = json!(true),
        }
        cert.steps.push(step);
        if out.hit.is_none() || !out.key_lemma_nonzero {
            cert.fail(json!({"trial": i, "Q": PolyDoc::from_poly(q)}));
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_witness_at_rho_two() {
        let f5 = Field::prime(5).unwrap();
        let q = SparsePoly::from_terms(
            &f5,
            2,
            [(MultiIndex::from(vec![0, 1]), f5.one()), (MultiIndex::from(vec![2, 0]), f5.from_int(-1))],
        )
        .unwrap();
        let f = SparsePoly::monomial(&f5, MultiIndex::from(vec![2]), f5.one());
        let beta = MultiIndex::zero(2);
        assert!(composed_derivative(&q, &f, &beta, f5.one()).unwrap().is_zero());
        // (rho - rho^2) s^2 at rho = 2 is -2 s^2
        let c = composed_derivative(&q, &f, &beta, f5.from_int(2)).unwrap();
        assert_eq!(c, SparsePoly::monomial(&f5, MultiIndex::from(vec![2]), f5.from_int(-2)));
        let out = examine(&q, &f, 1).unwrap();
        assert_eq!(out.hit.unwrap().1, f5.from_int(2));
        assert!(out.key_lemma_nonzero);
    }

    #[test]
    fn random_trials_pass() {
        for (q, n) in [(3u32, 2usize), (5, 3)] {
            let field = Field::prime(q).unwrap();
            let mut rng = random::rng_from_seed(1);
            let f = random::homogeneous(&field, n - 1, 2, &mut rng);
            let c = check_proposition(Trials::new(20, 9), &field, n, 2, 2, &f).unwrap();
            assert!(c.passed(), "{}", c.to_json_string());
        }
    }

    #[test]
    fn bad_f_rejected() {
        let field = Field::prime(5).unwrap();
        let zero = SparsePoly::zero(&field, 1);
        assert!(check_proposition(Trials::new(1, 0), &field, 2, 2, 1, &zero).is_err());
        let lin = SparsePoly::var(&field, 1, 0);
        assert!(check_proposition(Trials::new(1, 0), &field, 2, 2, 1, &lin).is_err());
    }
}
