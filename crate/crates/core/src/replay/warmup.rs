//! The planar degree-2 case: sets containing `{a + rho (lambda, lambda^2)}`
//! for every `rho`, with `D = k(q-1) - 1` and `M = 3k - 4k/q`.

use serde_json::json;

use crate::brkset::{first_violation, generate_set, BrkInstance, RhoChoice};
use crate::error::{Error, Result};
use crate::ffield::Field;
use crate::json::point_to_json;
use crate::mpoly::{binomial, MultiIndex, SparsePoly};
use crate::random;
use crate::vanish::{system_rank, VanishProblem};

use super::Certificate;

/// Checks inequality `C(M+1, 2) |S| >= C(D+2, 2)` and that no nonzero
/// polynomial of degree `<= D` vanishes on `S` with multiplicity `M`, for the
/// untranslated set and `random_sets` sets with seeded random translations.
pub fn check_warmup(field: &Field, k: u64, seed: u64, random_sets: usize) -> Result<Certificate> {
    let q = field.q() as u64;
    if q <= 2 {
        return Err(Error::PreconditionFailed("q > 2 required".into()));
    }
    if k == 0 || !k.is_multiple_of(q) {
        return Err(Error::NotMultipleOfQ { k, q: field.q() });
    }
    let d = k * (q - 1) - 1;
    let m = 3 * k - 4 * k / q;
    let mut cert = Certificate::new(
        "warmup",
        seed,
        json!({"field": field.spec(), "k": k, "random_sets": random_sets}),
    );
    let ineq = first_violation(field.q(), 2, k, d, m);
    cert.steps.push(json!({"D": d, "M": m, "inequality_holds": ineq.is_none()}));
    if let Some(w) = ineq {
        cert.fail(json!({"inequality_fails_at": w}));
    }
    let d32 = u32::try_from(d).map_err(|_| Error::Overflow("D"))?;
    let m32 = u32::try_from(m).map_err(|_| Error::Overflow("M"))?;
    let rhs = binomial(d + 2, 2).ok_or(Error::Overflow("C(D+2, 2)"))?;
    let per_point = binomial(m + 1, 2).ok_or(Error::Overflow("C(M+1, 2)"))?;

    let g = SparsePoly::monomial(field, MultiIndex::from(vec![2]), field.one());
    let mut rng = random::rng_from_seed(seed);
    for index in 0..=random_sets {
        let choices: Vec<RhoChoice> = field
            .elements()
            .map(|_| RhoChoice {
                a: if index == 0 {
                    vec![field.zero(); 2]
                } else {
                    random::point(field, 2, &mut rng)
                },
                lower: SparsePoly::zero(field, 1),
            })
            .collect();
        let translations: Vec<_> = choices.iter().map(|c| point_to_json(field, &c.a)).collect();
        let inst = BrkInstance::new(field, 2, 2, g.clone(), choices)?;
        let set = generate_set(&inst);
        let lhs = per_point * set.len() as u128;
        let prob = VanishProblem::new(field, 2, set.to_vec(), d32, m32)?;
        let (rank, unknowns) = system_rank(&prob)?;
        let trivial = rank == unknowns;
        cert.steps.push(json!({
            "set": index,
            "translations": translations,
            "size": set.len(),
            "lhs": lhs.to_string(),
            "rhs": rhs.to_string(),
            "counting_holds": lhs >= rhs,
            "rank": rank,
            "unknowns": unknowns,
            "nullspace_trivial": trivial,
        }));
        if lhs < rhs || !trivial {
            cert.fail(json!({"set": index, "translations": translations}));
        }
    }
    Ok(cert)
}
