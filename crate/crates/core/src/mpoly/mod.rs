//! Sparse multivariate polynomials over finite fields.

mod index;
mod poly;

pub use index::{
    binom_multi, binom_multi_mod_p, binomial, binomial_mod_p, indices_below_degree,
    indices_of_degree, indices_up_to_degree, lex_compare, weighted_degree, MultiIndex,
    MAX_EXPONENT,
};
pub use poly::{Degree, SparsePoly};
