//! Singular value decompositions of finite chain complexes.
//!
//! A complex `0 ← R^{c_0} ← R^{c_1} ← … ← R^{c_n} ← 0` is given by
//! differentials `A_i` with `A_i·A_{i+1} = 0`. This crate computes, from
//! floating-point approximations of the `A_i`, orthogonal bases in which
//! every differential is diagonal, and reads off ranks, singular values and
//! homology dimensions. It also provides pseudoinverse complexes over the
//! reals, the rationals and prime fields, projection of near-complexes onto
//! genuine complexes, and generators for test complexes with known homology.
//!
//! ```
//! use chainsvd::{ChainComplex, Thresholds, svd_by_projection};
//! use chainsvd::matrix::DenseMatrix;
//!
//! let a1 = DenseMatrix::from_rows(&[[1.0, 1.0]]);
//! let a2 = DenseMatrix::from_rows(&[[1.0], [-1.0]]);
//! let c = ChainComplex::real(vec![a1, a2]).unwrap();
//! let d = svd_by_projection(c.real_maps().unwrap(), &Thresholds::default()).unwrap();
//! assert_eq!(d.profile.homology, vec![0, 0, 0]);
//! ```

pub mod bench;
pub mod chain;
pub mod document;
pub mod error;
pub mod generators;
pub mod matrix;
pub mod pinv;
pub mod svd;

pub use chain::{
    exact_homology, homology_from_ranks, ranks_from_homology, ChainComplex, Differentials,
    RankProfile, ScalarField, Thresholds,
};
pub use error::{Error, Result};
pub use svd::{
    make_special_orthogonal, normal_form_residual, project_to_complex, rank_decision,
    stable_singular_values, svd_by_laplacian, svd_by_projection, svd_by_projection_two_precision,
    ComplexSvd, Method,
};
