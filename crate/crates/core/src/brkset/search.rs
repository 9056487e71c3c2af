//! Smallest BRK-type sets for a fixed form `g`, varying `a(rho)` and the
//! lower-order part of every `g_rho`.
//!
//! A choice for one `rho` is a translation `a` (grid index) together with a
//! coefficient vector for the monomials of degree `< ell` (graded order). The
//! choice index is `a_index * q^L + coeff_index`; configurations compare lex
//! by their choice indices for `rho = 0, 1, ...`.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::mpoly::{indices_below_degree, MultiIndex, SparsePoly};
use crate::multiplicity::grid_points;
use crate::random;

use super::{check_form, generate_set, theorem_bound, BrkInstance, RhoChoice, TheoremBound};

/// Largest configuration count exhaustive mode accepts.
pub const EXHAUSTIVE_LIMIT: u128 = 100_000_000;

/// Candidate choices per `rho` examined by greedy mode when the full list is
/// longer than this.
const GREEDY_CANDIDATES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Greedy { restarts: u32, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub min_size: usize,
    pub witness: BrkInstance,
    pub bound: TheoremBound,
    pub exhaustive: bool,
    /// Total configuration count `(q^n q^L)^q`, saturating.
    pub configurations: u128,
}

struct Space {
    field: Field,
    n: usize,
    ell: u32,
    g: SparsePoly,
    all: Vec<Elem>,
    lower_monomials: Vec<MultiIndex>,
    translations: u128,
    coeff_vectors: u128,
}

impl Space {
    fn new(field: &Field, n: usize, ell: u32, g: &SparsePoly) -> Result<Self> {
        check_form(field, n, ell, g)?;
        let q = field.q() as u128;
        let lower_monomials = indices_below_degree(n - 1, ell);
        let translations = q.checked_pow(n as u32).ok_or(Error::SearchSpaceTooLarge(u128::MAX))?;
        let coeff_vectors = q
            .checked_pow(lower_monomials.len() as u32)
            .ok_or(Error::SearchSpaceTooLarge(u128::MAX))?;
        Ok(Space {
            field: field.clone(),
            n,
            ell,
            g: g.clone(),
            all: field.elements().collect(),
            lower_monomials,
            translations,
            coeff_vectors,
        })
    }

    fn choices_per_rho(&self) -> u128 {
        self.translations.saturating_mul(self.coeff_vectors)
    }

    fn configurations(&self) -> u128 {
        let per = self.choices_per_rho();
        (0..self.field.q()).fold(1u128, |acc, _| acc.saturating_mul(per))
    }

    fn digits(&self, mut idx: u128, len: usize) -> Vec<Elem> {
        let q = self.field.q() as u128;
        let mut out = vec![Elem::ZERO; len];
        for slot in out.iter_mut().rev() {
            *slot = self.all[(idx % q) as usize];
            idx /= q;
        }
        out
    }

    fn choice(&self, idx: u128) -> RhoChoice {
        let a = self.digits(idx / self.coeff_vectors, self.n);
        let coeffs = self.digits(idx % self.coeff_vectors, self.lower_monomials.len());
        let lower = SparsePoly::from_terms(
            &self.field,
            self.n - 1,
            self.lower_monomials.iter().cloned().zip(coeffs),
        )
        .expect("monomials have arity n - 1");
        RhoChoice { a, lower }
    }

    fn point_index(&self, pt: &[Elem]) -> usize {
        let q = self.field.q() as usize;
        pt.iter().fold(0, |acc, c| acc * q + c.code() as usize)
    }

    /// Grid indices of `a + rho (lambda, g(lambda) + lower(lambda))`.
    fn surface(&self, rho: Elem, ch: &RhoChoice) -> Vec<usize> {
        let f = &self.field;
        let g_rho = &self.g + &ch.lower;
        grid_points(&self.all, self.n - 1)
            .map(|lambda| {
                let top = g_rho.eval(&lambda).expect("arity n - 1");
                let pt: Vec<Elem> = lambda
                    .iter()
                    .chain(std::iter::once(&top))
                    .zip(&ch.a)
                    .map(|(&x, &a)| f.add(a, f.mul(rho, x)))
                    .collect();
                self.point_index(&pt)
            })
            .collect()
    }

    fn instance(&self, picks: &[u128]) -> BrkInstance {
        let choices = picks.iter().map(|&i| self.choice(i)).collect();
        BrkInstance::new(&self.field, self.n, self.ell, self.g.clone(), choices).expect("search builds valid instances")
    }
}

/// Exact minimum (exhaustive) or an upper bound (greedy) of `|S|` over all
/// BRK-type sets built on `g`. `jobs` only affects exhaustive mode and never
/// the result.
pub fn min_brk_search(field: &Field, n: usize, ell: u32, g: &SparsePoly, mode: SearchMode, jobs: usize) -> Result<SearchResult> {
    let space = Space::new(field, n, ell, g)?;
    let bound = theorem_bound(field.q(), n as u32, ell)?;
    let configurations = space.configurations();
    let (min_size, picks, exhaustive) = match mode {
        SearchMode::Exhaustive => {
            if n > 2 {
                return Err(Error::InvalidInstance("exhaustive search supports n = 2 only".into()));
            }
            if configurations > EXHAUSTIVE_LIMIT {
                return Err(Error::SearchSpaceTooLarge(configurations));
            }
            let (size, picks) = exhaustive(&space, jobs.max(1))?;
            (size, picks, true)
        }
        SearchMode::Greedy { restarts, seed } => {
            let (size, picks) = greedy(&space, restarts.max(1), seed);
            (size, picks, false)
        }
    };
    let witness = space.instance(&picks);
    let size = generate_set(&witness).len();
    assert_eq!(size, min_size, "witness does not reproduce the reported size");
    if min_size < bound.ceil_usize() {
        return Err(Error::BoundViolated {
            size: min_size,
            bound: bound.to_string(),
        });
    }
    Ok(SearchResult {
        min_size,
        witness,
        bound,
        exhaustive,
        configurations,
    })
}

/// Distinct surfaces for each `rho`, as bitsets, each tagged with the least
/// choice index producing it, in ascending index order.
fn distinct_surfaces(space: &Space) -> Vec<Vec<(u128, u128)>> {
    space
        .field
        .elements()
        .map(|rho| {
            let mut seen: HashMap<u128, u128> = HashMap::new();
            let mut out = Vec::new();
            for idx in 0..space.choices_per_rho() {
                let bits = space
                    .surface(rho, &space.choice(idx))
                    .into_iter()
                    .fold(0u128, |acc, i| acc | (1u128 << i));
                if seen.insert(bits, idx).is_none() {
                    out.push((bits, idx));
                }
            }
            out
        })
        .collect()
}

fn exhaustive(space: &Space, jobs: usize) -> Result<(usize, Vec<u128>)> {
    if space.translations > 128 {
        return Err(Error::SizeGuard(format!("{} grid points exceed 128", space.translations)));
    }
    let levels = distinct_surfaces(space);
    let global = AtomicUsize::new(space.translations as usize + 1);
    let first = &levels[0];
    let chunk = first.len().div_ceil(jobs);
    let results: Vec<Option<(usize, Vec<u128>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = first
            .chunks(chunk.max(1))
            .map(|part| {
                let (levels, global) = (&levels, &global);
                scope.spawn(move || {
                    let mut best: Option<(usize, Vec<u128>)> = None;
                    let mut path = Vec::with_capacity(levels.len());
                    for &(bits, idx) in part {
                        path.push(idx);
                        dfs(levels, 1, bits, &mut path, &mut best, global);
                        path.pop();
                    }
                    best
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
    });
    // chunks are in ascending first-level order, so the first strict minimum
    // is also the lex-least witness
    let mut best: Option<(usize, Vec<u128>)> = None;
    for r in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| r.0 < b.0) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one configuration"))
}

fn dfs(
    levels: &[Vec<(u128, u128)>],
    depth: usize,
    union: u128,
    path: &mut Vec<u128>,
    best: &mut Option<(usize, Vec<u128>)>,
    global: &AtomicUsize,
) {
    let size = union.count_ones() as usize;
    // configurations of the current global size must still be reached so the
    // lex-least witness does not depend on the worker split
    if size > global.load(Ordering::Relaxed) || best.as_ref().is_some_and(|b| size >= b.0) {
        return;
    }
    if depth == levels.len() {
        *best = Some((size, path.clone()));
        global.fetch_min(size, Ordering::Relaxed);
        return;
    }
    for &(bits, idx) in &levels[depth] {
        path.push(idx);
        dfs(levels, depth + 1, union | bits, path, best, global);
        path.pop();
    }
}

fn greedy(space: &Space, restarts: u32, seed: u64) -> (usize, Vec<u128>) {
    let mut rng = random::rng_from_seed(seed);
    let per = space.choices_per_rho();
    let rhos: Vec<Elem> = space.field.elements().collect();
    let mut best: Option<(usize, Vec<u128>)> = None;
    for _ in 0..restarts {
        let candidates: Vec<u128> = if per <= GREEDY_CANDIDATES as u128 {
            (0..per).collect()
        } else {
            let mut c: BTreeSet<u128> = BTreeSet::from([0]);
            while c.len() < GREEDY_CANDIDATES {
                c.insert(rng.gen_range(0..per));
            }
            c.into_iter().collect()
        };
        let mut order = rhos.clone();
        order.shuffle(&mut rng);
        let mut covered: BTreeSet<usize> = BTreeSet::new();
        let mut picks = vec![0u128; rhos.len()];
        for &rho in &order {
            let mut pick: Option<(usize, u128, Vec<usize>)> = None;
            for &idx in &candidates {
                let pts = space.surface(rho, &space.choice(idx));
                let fresh = pts.iter().collect::<BTreeSet<_>>().into_iter().filter(|p| !covered.contains(p)).count();
                if pick.as_ref().is_none_or(|p| fresh < p.0) {
                    pick = Some((fresh, idx, pts));
                }
            }
            let (_, idx, pts) = pick.expect("candidate list is nonempty");
            covered.extend(pts);
            picks[rho.code() as usize] = idx;
        }
        if best.as_ref().is_none_or(|b| covered.len() < b.0) {
            best = Some((covered.len(), picks));
        }
    }
    best.expect("at least one restart")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(f: &Field) -> SparsePoly {
        SparsePoly::monomial(f, MultiIndex::from(vec![2]), f.one())
    }

    #[test]
    fn choice_encoding_roundtrip() {
        let f = Field::prime(3).unwrap();
        let space = Space::new(&f, 2, 2, &square(&f)).unwrap();
        assert_eq!(space.choices_per_rho(), 81);
        assert_eq!(space.configurations(), 81u128.pow(3));
        let ch = space.choice(0);
        assert_eq!(ch.a, vec![f.zero(), f.zero()]);
        assert!(ch.lower.is_zero());
        // last translation, lower = 2*s + 2 (monomials ordered 1, s)
        let ch = space.choice(80);
        assert_eq!(ch.a, vec![f.from_int(2), f.from_int(2)]);
        assert_eq!(ch.lower.coeff(&MultiIndex::from(vec![0])), f.from_int(2));
        assert_eq!(ch.lower.coeff(&MultiIndex::from(vec![1])), f.from_int(2));
    }

    #[test]
    fn exhaustive_is_independent_of_jobs() {
        let f = Field::prime(3).unwrap();
        let g = square(&f);
        let one = min_brk_search(&f, 2, 2, &g, SearchMode::Exhaustive, 1).unwrap();
        let four = min_brk_search(&f, 2, 2, &g, SearchMode::Exhaustive, 4).unwrap();
        assert_eq!(one.min_size, four.min_size);
        assert_eq!(one.witness, four.witness);
        assert!(one.min_size >= 2);
    }

    #[test]
    fn guard_and_dimension_checks() {
        let f = Field::prime(5).unwrap();
        let g = square(&f);
        assert!(matches!(
            min_brk_search(&f, 2, 2, &g, SearchMode::Exhaustive, 1),
            Err(Error::SearchSpaceTooLarge(_))
        ));
        let f3 = Field::prime(3).unwrap();
        let g3 = SparsePoly::monomial(&f3, MultiIndex::from(vec![2, 0]), f3.one());
        assert!(min_brk_search(&f3, 3, 2, &g3, SearchMode::Exhaustive, 1).is_err());
    }

    #[test]
    fn greedy_is_seeded() {
        let f = Field::prime(5).unwrap();
        let g = square(&f);
        let mode = SearchMode::Greedy { restarts: 3, seed: 11 };
        let a = min_brk_search(&f, 2, 2, &g, mode, 1).unwrap();
        let b = min_brk_search(&f, 2, 2, &g, mode, 1).unwrap();
        assert_eq!(a.min_size, b.min_size);
        assert_eq!(a.witness, b.witness);
        assert!(a.min_size >= 4);
    }
}
