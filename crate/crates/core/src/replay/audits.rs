//! Certificates for interpolation existence, the multiplicity Schwartz–Zippel
//! bound, and minimal-set search.

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use crate::brkset::{min_brk_search, SearchMode};
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::json::{elem_to_json, InstanceDoc, PolyDoc};
use crate::mpoly::{binomial, Degree, MultiIndex, SparsePoly};
use crate::multiplicity::{schwartz_zippel_audit, vanishes_with_mult};
use crate::random;
use crate::vanish::{find_vanishing_poly, VanishProblem};

use super::{par_map, Certificate, Trials};

const EXISTENCE_FIELDS: [u32; 5] = [2, 3, 4, 5, 7];
const AUDIT_FIELDS: [u32; 3] = [3, 5, 7];

fn random_problem<R: Rng>(rng: &mut R) -> VanishProblem {
    loop {
        let q = EXISTENCE_FIELDS[rng.gen_range(0..EXISTENCE_FIELDS.len())];
        let field = Field::with_order(q).expect("prime power");
        let n = rng.gen_range(1..=3usize);
        let mult = rng.gen_range(1..=3u32);
        let degree = rng.gen_range(0..=8u32);
        let unknowns = binomial(degree as u64 + n as u64, n as u64).expect("small");
        let per_point = binomial(mult as u64 + n as u64 - 1, n as u64).expect("small");
        let space = (q as u128).pow(n as u32);
        let max_points = ((unknowns - 1) / per_point).min(space) as usize;
        if max_points == 0 {
            continue;
        }
        let count = rng.gen_range(1..=max_points);
        let points = random::distinct_points(&field, n, count, rng);
        let prob = VanishProblem::new(&field, n, points, degree, mult).expect("valid problem");
        debug_assert!(prob.counting_inequality_holds());
        return prob;
    }
}

/// Random problems under the strict counting inequality must have a nonzero
/// solution of degree `<= D`, re-verified independently.
pub fn check_existence(trials: Trials) -> Result<Certificate> {
    let mut cert = Certificate::new("existence", trials.seed, json!({"trials": trials.count, "fields": EXISTENCE_FIELDS}));
    let mut rng = random::rng_from_seed(trials.seed);
    let problems: Vec<VanishProblem> = (0..trials.count).map(|_| random_problem(&mut rng)).collect();
    let found = par_map(&problems, trials.jobs, find_vanishing_poly);
    for (i, (prob, p)) in problems.iter().zip(found).enumerate() {
        let p = p?;
        let ok = match &p {
            Some(p) => {
                !p.is_zero()
                    && p.degree() <= Degree::Finite(prob.degree())
                    && vanishes_with_mult(p, prob.points(), prob.mult())?.holds
            }
            None => false,
        };
        cert.steps.push(json!({
            "trial": i,
            "q": prob.field().q(),
            "n": prob.arity(),
            "points": prob.points().len(),
            "D": prob.degree(),
            "M": prob.mult(),
            "constraints": prob.constraint_count().to_string(),
            "unknowns": prob.unknown_count().to_string(),
            "terms": p.as_ref().map_or(0, |p| p.num_terms()),
            "verified": ok,
        }));
        if !ok {
            cert.fail(json!({"trial": i}));
        }
    }
    Ok(cert)
}

/// `sum_(a in A^n) mult(P, a) <= deg(P) |A|^(n-1)` on random nonzero `P`,
/// after the equality case `x1 x2` on `F_3`.
pub fn check_schwartz_zippel(trials: Trials) -> Result<Certificate> {
    let mut cert = Certificate::new("schwartz-zippel", trials.seed, json!({"trials": trials.count, "fields": AUDIT_FIELDS}));
    let f3 = Field::prime(3)?;
    let x1x2 = SparsePoly::monomial(&f3, MultiIndex::from(vec![1, 1]), f3.one());
    let all3: Vec<Elem> = f3.elements().collect();
    let eq = schwartz_zippel_audit(&x1x2, &all3)?;
    cert.steps.push(json!({"equality_case": "x1*x2 on F_3", "total": eq.total_mult.to_string(), "bound": eq.bound.to_string()}));
    if eq.total_mult != 6 || eq.bound != 6 {
        cert.fail(json!({"equality_case": eq}));
    }

    let mut rng = random::rng_from_seed(trials.seed);
    let cases: Vec<(SparsePoly, Vec<Elem>)> = (0..trials.count)
        .map(|i| {
            let q = AUDIT_FIELDS[rng.gen_range(0..AUDIT_FIELDS.len())];
            let field = Field::prime(q).expect("prime");
            let n = rng.gen_range(1..=3usize);
            // half the cases are products of forms through a point, so that
            // high multiplicities actually occur
            let p = if i % 2 == 0 {
                random::poly(&field, n, 5, 6, &mut rng)
            } else {
                let at = random::point(&field, n, &mut rng);
                let factors = rng.gen_range(1..=4);
                random::vanishing_product(&field, &at, factors, &mut rng)
            };
            let mut set: Vec<Elem> = field.elements().collect();
            set.shuffle(&mut rng);
            set.truncate(rng.gen_range(1..=q as usize));
            set.sort();
            (p, set)
        })
        .collect();
    let audits = par_map(&cases, trials.jobs, |(p, set)| schwartz_zippel_audit(p, set));
    for (i, ((p, set), audit)) in cases.iter().zip(audits).enumerate() {
        let audit = audit?;
        cert.steps.push(json!({
            "trial": i,
            "q": p.field().q(),
            "n": p.arity(),
            "deg": p.degree(),
            "set": set.iter().map(|&c| elem_to_json(p.field(), c)).collect::<Vec<_>>(),
            "total": audit.total_mult.to_string(),
            "bound": audit.bound.to_string(),
        }));
        if !audit.ok {
            cert.fail(json!({"trial": i, "P": PolyDoc::from_poly(p)}));
        }
    }
    Ok(cert)
}

/// Runs the search and records the bound comparison. A size below the bound
/// yields a failed certificate rather than an error.
pub fn check_min_search(field: &Field, n: usize, ell: u32, g: &SparsePoly, mode: SearchMode, jobs: usize) -> Result<Certificate> {
    let (seed, mode_json) = match mode {
        SearchMode::Exhaustive => (0, json!("exhaustive")),
        SearchMode::Greedy { restarts, seed } => (seed, json!({"greedy": {"restarts": restarts}})),
    };
    let mut cert = Certificate::new(
        "min-search",
        seed,
        json!({"field": field.spec(), "n": n, "ell": ell, "g": PolyDoc::from_poly(g), "mode": mode_json}),
    );
    match min_brk_search(field, n, ell, g, mode, jobs) {
        Ok(r) => {
            cert.steps.push(json!({
                "bound": r.bound,
                "configurations": r.configurations.to_string(),
                "exhaustive": r.exhaustive,
                "min_size": r.min_size,
                "witness": InstanceDoc::from_instance(&r.witness),
            }));
        }
        Err(Error::BoundViolated { size, bound }) => {
            cert.fail(json!({"size": size, "bound": bound}));
        }
        Err(e) => return Err(e),
    }
    Ok(cert)
}
