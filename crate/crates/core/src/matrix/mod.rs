//! Dense matrices over the reals, the rationals and prime fields.

mod dense;
pub(crate) mod factor;
mod prime;
mod rational;

pub use dense::DenseMatrix;
pub use factor::{svd_plain, sym_eig, PlainSvd};
pub use prime::{is_prime, PrimeFieldMatrix, MAX_MODULUS};
pub use rational::{parse_rational, rational_to_f64, RationalMatrix};

/// Exact rank over the rationals (fraction-free elimination).
pub fn exact_rank(m: &RationalMatrix) -> usize {
    m.exact_rank()
}

/// Rank over `F_p`.
pub fn exact_rank_mod_p(m: &PrimeFieldMatrix) -> usize {
    m.exact_rank()
}
