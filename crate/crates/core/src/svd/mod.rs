//! SVD normal form of a complex.
//!
//! Given (approximations of) differentials `B_1..B_n`, find orthogonal
//! `U_0..U_n` such that every `U_{i−1}^t·B_i·U_i` has the block form
//!
//! ```text
//!              r_i   r_{i+1}  h_i
//!   r_{i−1} [   0      0      0  ]
//!   r_i     [  Σ_i     0      0  ]
//!   h_{i−1} [   0      0      0  ]
//! ```
//!
//! with `Σ_i` diagonal and strictly positive. Two routes are provided:
//! successive projection ([`svd_by_projection`]) and diagonalisation of
//! the Laplacians ([`svd_by_laplacian`]).

mod laplacian;
mod orient;
mod project;
mod projection;

pub use laplacian::{svd_by_laplacian, LAPLACIAN_ZERO_CUTOFF};
pub use orient::make_special_orthogonal;
pub use project::project_to_complex;
pub use projection::{svd_by_projection, svd_by_projection_two_precision};

use crate::chain::RankProfile;
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Projection,
    Laplacian,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Projection => "projection",
            Method::Laplacian => "laplacian",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "projection" => Ok(Method::Projection),
            "laplacian" => Ok(Method::Laplacian),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// Orthogonal bases putting a complex into normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSvd {
    /// `U_0..U_n`, `U_i` is `c_i × c_i`.
    pub bases: Vec<DenseMatrix>,
    /// `Σ_1..Σ_n`, each strictly positive and non-increasing, length `r_i`.
    pub singular_values: Vec<Vec<f64>>,
    pub profile: RankProfile,
    pub method: Method,
    /// `max_i ‖U_{i−1}^t·B_i·U_i − Σ̄_i‖_max / σ_max` against the input maps.
    pub normal_form_residual: f64,
}

impl ComplexSvd {
    /// `U_{i−1}^t · B_i · U_i` for 1-based `i`.
    pub fn conjugate(&self, maps: &[DenseMatrix], i: usize) -> DenseMatrix {
        self.bases[i - 1].tr_matmul(&(&maps[i - 1] * &self.bases[i]))
    }

    /// The block matrix `Σ̄_i` for 1-based `i`.
    pub fn normal_form(&self, i: usize) -> DenseMatrix {
        let rows = self.bases[i - 1].rows();
        let cols = self.bases[i].rows();
        normal_form_block(rows, cols, self.profile.rank(i - 1), &self.singular_values[i - 1])
    }

    pub fn max_singular_value(&self) -> f64 {
        self.singular_values
            .iter()
            .flatten()
            .fold(0.0, |m, &s| m.max(s))
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(DenseMatrix::rows).collect()
    }
}

/// `rows × cols` zero matrix with `sigma` on the diagonal starting at
/// `(row_offset, 0)`.
pub(crate) fn normal_form_block(
    rows: usize,
    cols: usize,
    row_offset: usize,
    sigma: &[f64],
) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols);
    for (k, &s) in sigma.iter().enumerate() {
        m.set(row_offset + k, k, s);
    }
    m
}

/// Number of singular values taken as non-zero.
///
/// Returns the smallest 1-based `j < cap` with `b·σ_j ≥ σ_{j+1}`, or `cap`
/// when there is no such gap. Empty or identically zero spectra give 0.
pub fn rank_decision(sigma: &[f64], cap: usize, b: f64) -> usize {
    let cap = cap.min(sigma.len());
    if cap == 0 || sigma[0] == 0.0 {
        return 0;
    }
    (1..cap)
        .find(|&j| b * sigma[j - 1] >= sigma[j])
        .unwrap_or(cap)
}

/// Length of the longest common prefix on which two spectra are non-zero
/// and agree to relative precision `rel_tol` (entrywise, relative to the
/// larger value).
pub fn stable_singular_values(a: &[f64], b: &[f64], rel_tol: f64) -> usize {
    a.iter()
        .zip(b)
        .take_while(|&(&x, &y)| x > 0.0 && y > 0.0 && (x - y).abs() <= rel_tol * x.max(y))
        .count()
}

/// `max_i ‖U_{i−1}^t·B_i·U_i − Σ̄_i‖_max / σ_max`. A decomposition with no
/// singular values at all is measured in absolute terms.
pub fn normal_form_residual(maps: &[DenseMatrix], d: &ComplexSvd) -> f64 {
    let smax = d.max_singular_value();
    let scale = if smax > 0.0 { smax } else { 1.0 };
    (1..=maps.len())
        .map(|i| (&d.conjugate(maps, i) - &d.normal_form(i)).max_abs() / scale)
        .fold(0.0, f64::max)
}
