//! Seeded random instances. Every generator takes an explicit RNG so that a
//! run is reproducible from its seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ffield::{Elem, Field};
use crate::mpoly::{indices_of_degree, indices_up_to_degree, MultiIndex, SparsePoly};

pub type DetRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn elem<R: Rng>(field: &Field, rng: &mut R) -> Elem {
    field.elem(rng.gen_range(0..field.q())).expect("in range")
}

pub fn nonzero_elem<R: Rng>(field: &Field, rng: &mut R) -> Elem {
    field.elem(rng.gen_range(1..field.q())).expect("in range")
}

pub fn point<R: Rng>(field: &Field, arity: usize, rng: &mut R) -> Vec<Elem> {
    (0..arity).map(|_| elem(field, rng)).collect()
}

/// A polynomial with at most `max_terms` terms drawn from the monomials of
/// degree `<= max_deg`; may be zero only if `max_terms == 0`.
pub fn poly<R: Rng>(
    field: &Field,
    arity: usize,
    max_deg: u32,
    max_terms: usize,
    rng: &mut R,
) -> SparsePoly {
    let monos = indices_up_to_degree(arity, max_deg);
    let count = rng.gen_range(1..=max_terms.max(1)).min(monos.len());
    let chosen = monos.choose_multiple(rng, count);
    let terms: Vec<(MultiIndex, Elem)> = chosen
        .map(|e| (e.clone(), nonzero_elem(field, rng)))
        .collect();
    SparsePoly::from_terms(field, arity, terms).expect("well-formed terms")
}

/// A nonzero homogeneous polynomial of exactly the given degree.
pub fn homogeneous<R: Rng>(field: &Field, arity: usize, deg: u32, rng: &mut R) -> SparsePoly {
    let monos = indices_of_degree(arity, deg);
    let count = rng.gen_range(1..=monos.len());
    let chosen = monos.choose_multiple(rng, count);
    let terms: Vec<(MultiIndex, Elem)> = chosen
        .map(|e| (e.clone(), nonzero_elem(field, rng)))
        .collect();
    SparsePoly::from_terms(field, arity, terms).expect("well-formed terms")
}

/// A product of `factors` random affine forms that all vanish at `at`, so the
/// result has multiplicity at least `factors` there.
pub fn vanishing_product<R: Rng>(
    field: &Field,
    at: &[Elem],
    factors: u32,
    rng: &mut R,
) -> SparsePoly {
    let n = at.len();
    let mut acc = SparsePoly::one(field, n);
    for _ in 0..factors {
        let mut form = SparsePoly::zero(field, n);
        while form.is_zero() {
            form = SparsePoly::zero(field, n);
            for (i, &ai) in at.iter().enumerate() {
                let c = elem(field, rng);
                let shifted = &SparsePoly::var(field, n, i)
                    - &SparsePoly::constant(field, n, ai);
                form = &form + &shifted.scale(c);
            }
        }
        acc = &acc * &form;
    }
    acc
}

/// `count` distinct points of `F_q^arity` (fewer if the space is smaller).
pub fn distinct_points<R: Rng>(
    field: &Field,
    arity: usize,
    count: usize,
    rng: &mut R,
) -> Vec<Vec<Elem>> {
    let total = (field.q() as u128).saturating_pow(arity as u32);
    let count = (count as u128).min(total) as usize;
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < count {
        seen.insert(point(field, arity, rng));
    }
    let mut out: Vec<Vec<Elem>> = seen.into_iter().collect();
    out.shuffle(rng);
    out
}
