//! The key lemma: if every
//! `f_beta(rho) = sum_alpha b^(alpha_n - beta_n) c_alpha C(alpha, beta) rho^(|alpha| - |beta|)`
//! with `|beta| < k`, `rho != 0` vanishes, then every `c_alpha` is zero.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::json::elem_to_json;
use crate::mpoly::{binom_multi_mod_p, indices_below_degree, MultiIndex};
use crate::random;

use super::{par_map, Certificate, Trials};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyLemmaInstance {
    field: Field,
    n: usize,
    k: u64,
    terms: Vec<(MultiIndex, Elem)>,
    b: Elem,
}

impl KeyLemmaInstance {
    /// Rejects repeated `|alpha|`, `|alpha| >= k(q-1)` and `b = 0`.
    pub fn new(field: &Field, n: usize, k: u64, terms: Vec<(MultiIndex, Elem)>, b: Elem) -> Result<Self> {
        field.elem(b.code())?;
        if b.is_zero() {
            return Err(Error::InvalidInstance("b must be nonzero".into()));
        }
        let cap = k * (field.q() as u64 - 1);
        let mut totals = BTreeSet::new();
        for (alpha, c) in &terms {
            field.elem(c.code())?;
            if alpha.arity() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: alpha.arity(),
                });
            }
            if alpha.total() as u64 >= cap {
                return Err(Error::InvalidInstance(format!("|{alpha:?}| >= k(q-1) = {cap}")));
            }
            if !totals.insert(alpha.total()) {
                return Err(Error::InvalidInstance(format!("total degree {} repeated", alpha.total())));
            }
        }
        let mut terms = terms;
        terms.sort();
        Ok(KeyLemmaInstance {
            field: field.clone(),
            n,
            k,
            terms,
            b,
        })
    }

    /// A random instance with at least one nonzero coefficient.
    pub fn random<R: Rng>(field: &Field, n: usize, k: u64, rng: &mut R) -> Self {
        let cap = k * (field.q() as u64 - 1);
        let mut totals: Vec<u64> = (0..cap).collect();
        totals.shuffle(rng);
        let size = rng.gen_range(1..=cap.min(6) as usize);
        let terms = totals[..size]
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let mut exps = vec![0u32; n];
                for _ in 0..t {
                    exps[rng.gen_range(0..n)] += 1;
                }
                let c = if i == 0 {
                    random::nonzero_elem(field, rng)
                } else {
                    random::elem(field, rng)
                };
                (MultiIndex::new(exps), c)
            })
            .collect();
        let b = random::nonzero_elem(field, rng);
        KeyLemmaInstance::new(field, n, k, terms, b).expect("generated instance is valid")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &[(MultiIndex, Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_zero())
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        json!({
            "field": f.spec(),
            "n": self.n,
            "k": self.k,
            "b": elem_to_json(f, self.b),
            "terms": self.terms.iter().map(|(a, c)| json!({"exp": a, "coeff": elem_to_json(f, *c)})).collect::<Vec<_>>(),
        })
    }
}

/// `f_beta(rho)` for `|beta| < k` in graded order and `rho != 0` ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyLemmaTable {
    pub entries: Vec<(MultiIndex, Elem, Elem)>,
}

impl KeyLemmaTable {
    pub fn get(&self, beta: &MultiIndex, rho: Elem) -> Option<Elem> {
        self.entries
            .iter()
            .find(|(b, r, _)| b == beta && *r == rho)
            .map(|e| e.2)
    }

    pub fn first_nonzero(&self) -> Option<&(MultiIndex, Elem, Elem)> {
        self.entries.iter().find(|e| !e.2.is_zero())
    }
}

pub fn key_lemma_table(inst: &KeyLemmaInstance) -> KeyLemmaTable {
    let f = &inst.field;
    let mut entries = Vec::new();
    for beta in indices_below_degree(inst.n, inst.k.min(u32::MAX as u64) as u32) {
        for rho in f.nonzero_elements() {
            let mut acc = f.zero();
            for (alpha, c) in &inst.terms {
                if c.is_zero() || !beta.divides(alpha) {
                    continue;
                }
                let binom = binom_multi_mod_p(alpha, &beta, f.p());
                if binom == 0 {
                    continue;
                }
                let b_pow = f.pow(inst.b, (alpha.last() - beta.last()) as u64);
                let rho_pow = f.pow(rho, (alpha.total() - beta.total()) as u64);
                let term = f.mul(f.mul(b_pow, *c), f.mul(f.from_u128(binom as u128), rho_pow));
                acc = f.add(acc, term);
            }
            entries.push((beta.clone(), rho, acc));
        }
    }
    KeyLemmaTable { entries }
}

/// Random instances with `c != 0` must each have a nonzero table entry.
pub fn check_key_lemma(trials: Trials, field: &Field, n: usize, k: u64) -> Result<Certificate> {
    if k * (field.q() as u64 - 1) < 2 {
        return Err(Error::PreconditionFailed(format!(
            "k(q-1) = {} must be at least 2",
            k * (field.q() as u64 - 1)
        )));
    }
    if n == 0 {
        return Err(Error::PreconditionFailed("arity must be positive".into()));
    }
    let mut cert = Certificate::new(
        "key-lemma",
        trials.seed,
        json!({"field": field.spec(), "n": n, "k": k, "trials": trials.count}),
    );
    let mut rng = random::rng_from_seed(trials.seed);
    let instances: Vec<KeyLemmaInstance> = (0..trials.count)
        .map(|_| KeyLemmaInstance::random(field, n, k, &mut rng))
        .collect();
    let found = par_map(&instances, trials.jobs, |inst| key_lemma_table(inst).first_nonzero().cloned());
    for (i, (inst, hit)) in instances.iter().zip(found).enumerate() {
        match hit {
            Some((beta, rho, v)) => cert.steps.push(json!({
                "trial": i,
                "terms": inst.terms.len(),
                "beta": beta,
                "rho": elem_to_json(field, rho),
                "value": elem_to_json(field, v),
            })),
            None => {
                cert.steps.push(json!({"trial": i, "terms": inst.terms.len(), "all_zero": true}));
                cert.fail(json!({"trial": i, "instance": inst.to_json()}));
            }
        }
    }
    Ok(cert)
}
