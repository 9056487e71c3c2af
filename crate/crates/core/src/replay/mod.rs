//! Replayable instance checks of the lower-bound argument. Every check runs
//! on concrete, seeded inputs and returns a [`Certificate`] recording its
//! inputs, per-step values and a pass/fail verdict.

mod audits;
mod derivs;
mod key_lemma;
mod proposition;
mod warmup;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::mpoly::{weighted_degree, MultiIndex};

pub use audits::{check_existence, check_min_search, check_schwartz_zippel};
pub use derivs::{check_derivs_zero, Curve};
pub use key_lemma::{check_key_lemma, key_lemma_table, KeyLemmaInstance, KeyLemmaTable};
pub use proposition::{check_proposition, composed_derivative};
pub use warmup::check_warmup;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub check: String,
    pub seed: u64,
    pub inputs: Value,
    pub steps: Vec<Value>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Certificate {
    fn new(check: &str, seed: u64, inputs: Value) -> Self {
        Certificate {
            check: check.to_string(),
            seed,
            inputs,
            steps: Vec::new(),
            verdict: Verdict::Pass,
            witness: None,
        }
    }

    /// Marks the certificate failed; the first witness is kept.
    fn fail(&mut self, witness: Value) {
        self.verdict = Verdict::Fail;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Pretty JSON with a trailing newline; byte-stable for equal inputs.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

/// Trial count, seed and worker count for the randomized checks. The result
/// never depends on `jobs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trials {
    pub count: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl Trials {
    pub fn new(count: usize, seed: u64) -> Self {
        Trials { count, seed, jobs: 1 }
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }
}

/// Maps `f` over `items` on up to `jobs` threads, keeping input order.
pub(crate) fn par_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("replay worker panicked"))
            .collect()
    })
}

/// Groups exponents by `alpha_1 + ... + alpha_(n-1) + ell alpha_n`.
pub fn weighted_partition(indices: &[MultiIndex], ell: u32) -> Result<BTreeMap<u64, Vec<MultiIndex>>> {
    if ell < 2 {
        return Err(Error::BadEll(ell));
    }
    let mut out: BTreeMap<u64, Vec<MultiIndex>> = BTreeMap::new();
    for alpha in indices {
        out.entry(weighted_degree(alpha, ell)?).or_default().push(alpha.clone());
    }
    for class in out.values_mut() {
        class.sort();
        class.dedup();
    }
    Ok(out)
}

/// Groups exponents by `d(alpha) = (alpha_1, .., alpha_(n-1)) + alpha_n e`,
/// where `e` is the lex-least exponent of the curve form.
pub fn min_exponent_partition(indices: &[MultiIndex], e: &MultiIndex) -> Result<BTreeMap<MultiIndex, Vec<MultiIndex>>> {
    let mut out: BTreeMap<MultiIndex, Vec<MultiIndex>> = BTreeMap::new();
    for alpha in indices {
        if alpha.arity() != e.arity() + 1 {
            return Err(Error::ArityMismatch {
                expected: e.arity() + 1,
                found: alpha.arity(),
            });
        }
        let key = alpha.head().add(&e.scale(alpha.last()));
        out.entry(key).or_default().push(alpha.clone());
    }
    for class in out.values_mut() {
        class.sort();
        class.dedup();
    }
    Ok(out)
}

/// Whether the total degrees within a class are pairwise distinct.
pub fn totals_distinct(class: &[MultiIndex]) -> bool {
    let mut totals: Vec<u32> = class.iter().map(|a| a.total()).collect();
    totals.sort_unstable();
    totals.windows(2).all(|w| w[0] != w[1])
}
