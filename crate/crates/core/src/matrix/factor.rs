//! Full SVD and symmetric eigendecomposition.
//!
//! The iterations come from `faer`; this module supplies what the complex
//! algorithms need on top of them: square (not thin) orthogonal factors,
//! descending order, graceful handling of empty shapes, and a check of
//! every factorization before it is handed out.

use nalgebra::{DMatrix, RealField};

use super::DenseMatrix;
use crate::error::{Error, Result};

/// `M = U · diag(σ) · V^t` with square orthogonal `U` (m×m) and `V` (k×k).
#[derive(Debug, Clone)]
pub struct PlainSvd {
    pub u: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub v: DenseMatrix,
}

impl PlainSvd {
    /// `U · diag(σ) · V^t`
    pub fn reconstruct(&self) -> DenseMatrix {
        let s = DenseMatrix::from_diagonal(self.u.cols(), self.v.cols(), &self.singular_values);
        &(&self.u * &s) * &self.v.transpose()
    }
}

/// Full singular value decomposition.
pub fn svd_plain(m: &DenseMatrix) -> Result<PlainSvd> {
    let (u, singular_values, v) = svd_full(m.to_nalgebra())?;
    Ok(PlainSvd {
        u: DenseMatrix::from_nalgebra(&u),
        singular_values,
        v: DenseMatrix::from_nalgebra(&v),
    })
}

/// Acceptance limits for a computed factorization, in units of machine
/// epsilon: residual relative to `‖A‖_F·√k`, and orthogonality defect.
const RESIDUAL_ULPS: f64 = 1024.0;
const ORTHOGONALITY_ULPS: f64 = 4096.0;

fn ulps<T: RealField + Copy>(n: f64) -> T {
    T::from_f64(n).expect("real field holds small constants") * T::default_epsilon()
}

/// Precisions with a full SVD available.
pub(crate) trait SvdReal: RealField + Copy {
    fn raw_svd(a: &DMatrix<Self>) -> Option<(DMatrix<Self>, Vec<Self>, DMatrix<Self>)>;
}

macro_rules! svd_real {
    ($t:ty) => {
        impl SvdReal for $t {
            fn raw_svd(a: &DMatrix<$t>) -> Option<(DMatrix<$t>, Vec<$t>, DMatrix<$t>)> {
                let (m, k) = a.shape();
                let svd = faer::Mat::<$t>::from_fn(m, k, |i, j| a[(i, j)]).svd().ok()?;
                let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
                Some((
                    DMatrix::from_fn(m, m, |i, j| u[(i, j)]),
                    (0..m.min(k)).map(|j| s[j].max(0.0)).collect(),
                    DMatrix::from_fn(k, k, |i, j| v[(i, j)]),
                ))
            }
        }
    };
}
svd_real!(f32);
svd_real!(f64);

/// Full SVD in either precision: square `U`, descending `σ`, square `V`.
pub(crate) fn svd_full<T: SvdReal>(a: DMatrix<T>) -> Result<(DMatrix<T>, Vec<T>, DMatrix<T>)> {
    let (m, k) = a.shape();
    if m == 0 || k == 0 {
        return Ok((DMatrix::identity(m, m), Vec::new(), DMatrix::identity(k, k)));
    }
    let fail = || Error::NumericalFailure(format!("SVD of {m}x{k} matrix"));
    let (u, s, v) = T::raw_svd(&a).ok_or_else(fail)?;
    let mut us = u.columns(0, s.len()).into_owned();
    for (j, &sj) in s.iter().enumerate() {
        us.column_mut(j).scale_mut(sj);
    }
    let n = T::from_usize(m.min(k)).expect("small dimension");
    let residual_ok = (us * v.columns(0, s.len()).transpose() - &a).norm() <= ulps::<T>(RESIDUAL_ULPS) * n.sqrt() * a.norm();
    if residual_ok && orthogonal(&u) && orthogonal(&v) {
        Ok((u, s, v))
    } else {
        Err(fail())
    }
}

fn orthogonal<T: RealField + Copy>(q: &DMatrix<T>) -> bool {
    (q.tr_mul(q) - DMatrix::<T>::identity(q.ncols(), q.ncols())).amax() <= ulps(ORTHOGONALITY_ULPS)
}

/// Symmetric eigendecomposition `S = Q · diag(λ) · Q^t`, eigenvalues in
/// non-increasing order. The input is symmetrized first; asymmetry beyond
/// `1e-10 · ‖S‖_max` is rejected.
pub fn sym_eig(s: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = s.rows();
    if n != s.cols() {
        return Err(Error::DimensionMismatch(format!(
            "sym_eig needs a square matrix, got {}x{}",
            n,
            s.cols()
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), DenseMatrix::identity(0)));
    }
    let scale = s.max_abs();
    if s.asymmetry() > 1e-10 * scale {
        return Err(Error::DimensionMismatch(format!(
            "matrix not symmetric (drift {:e})",
            s.asymmetry()
        )));
    }
    let sym = s.symmetrize();
    let fail = || Error::NumericalFailure(format!("eigendecomposition of {n}x{n} matrix"));
    let eig = faer::Mat::<f64>::from_fn(n, n, |i, j| sym.get(i, j))
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| fail())?;
    let (q_asc, l_asc) = (eig.U(), eig.S().column_vector());
    // faer orders ascending
    let values: Vec<f64> = (0..n).rev().map(|k| l_asc[k]).collect();
    let q = DenseMatrix::from_fn(n, n, |i, j| q_asc[(i, n - 1 - j)]);
    let sym = sym.to_nalgebra();
    let q_na = q.to_nalgebra();
    let mut ql = q_na.clone();
    for (j, &l) in values.iter().enumerate() {
        ql.column_mut(j).scale_mut(l);
    }
    let tol = RESIDUAL_ULPS * f64::EPSILON * (n as f64).sqrt() * sym.norm();
    if (&sym * &q_na - ql).norm() <= tol && orthogonal(&q_na) {
        Ok((values, q))
    } else {
        Err(fail())
    }
}
