use super::{normal_form_residual, rank_decision, stable_singular_values, ComplexSvd, Method};
use crate::chain::{homology_from_ranks, RankProfile, Thresholds};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

use crate::matrix::factor::svd_full;
use crate::matrix::{svd_plain, DenseMatrix, PlainSvd};

/// State of one successive-projection sweep over `B_1..B_n`.
///
/// After level `i` has been processed, `kernel` holds `P_i` (rows spanning
/// an approximation of `ker B_i`) and `coimage` holds `Q_i` (rows spanning
/// its orthogonal complement); stacked they form `Ṽ_i^t`.
pub(crate) struct Sweep<'a> {
    maps: &'a [DenseMatrix],
    coimage: DenseMatrix,
    kernel: DenseMatrix,
}

impl<'a> Sweep<'a> {
    pub(crate) fn new(maps: &'a [DenseMatrix]) -> Self {
        let c0 = maps[0].rows();
        Self {
            maps,
            coimage: DenseMatrix::zeros(0, c0),
            kernel: DenseMatrix::identity(c0),
        }
    }

    /// Full SVD of `B̃_i = P_{i−1}·B_i` (1-based `i`).
    pub(crate) fn reduce(&self, i: usize) -> Result<PlainSvd> {
        svd_plain(&(&self.kernel * &self.maps[i - 1]))
    }

    /// Split `Ṽ_i^t` at `rank` and return `U_{i−1}^t = [Q_{i−1}; Ũ_{i−1}^t·P_{i−1}]`.
    pub(crate) fn advance(&mut self, svd: &PlainSvd, rank: usize) -> DenseMatrix {
        let u_prev_t = self.coimage.vstack(&svd.u.tr_matmul(&self.kernel));
        let v_t = svd.v.transpose();
        self.coimage = v_t.row_block(0, rank);
        self.kernel = v_t.row_block(rank, v_t.rows());
        u_prev_t
    }
}

/// `n_i = min(c_{i−1} − r_{i−1}, c_i)`, the number of singular values of `B̃_i`.
fn cap(svd: &PlainSvd) -> usize {
    svd.u.rows().min(svd.v.rows())
}

fn check_input(maps: &[DenseMatrix]) -> Result<()> {
    if maps.is_empty() {
        return Err(Error::Structural {
            index: 0,
            detail: "a complex needs at least one differential".into(),
        });
    }
    for (k, w) in maps.windows(2).enumerate() {
        if w[0].cols() != w[1].rows() {
            return Err(Error::Structural {
                index: k + 2,
                detail: format!(
                    "has {} rows but differential {} has {} columns",
                    w[1].rows(),
                    k + 1,
                    w[0].cols()
                ),
            });
        }
    }
    Ok(())
}

fn dims_of(maps: &[DenseMatrix]) -> Vec<usize> {
    std::iter::once(maps[0].rows())
        .chain(maps.iter().map(DenseMatrix::cols))
        .collect()
}

fn finish(
    maps: &[DenseMatrix],
    bases: Vec<DenseMatrix>,
    spectra: Vec<Vec<f64>>,
    ranks: Vec<usize>,
) -> Result<ComplexSvd> {
    let dims = dims_of(maps);
    let homology = homology_from_ranks(&dims, &ranks).map_err(|_| {
        let position = (0..dims.len())
            .find(|&i| {
                let r = |j: usize| if j == 0 || j > ranks.len() { 0 } else { ranks[j - 1] };
                r(i) + r(i + 1) > dims[i]
            })
            .unwrap_or(0);
        Error::RankDecisionFailure {
            position,
            singular_values: spectra.clone(),
        }
    })?;
    let singular_values = spectra
        .iter()
        .zip(&ranks)
        .map(|(s, &r)| s[..r].to_vec())
        .collect();
    let mut d = ComplexSvd {
        bases,
        singular_values,
        profile: RankProfile { ranks, homology },
        method: Method::Projection,
        normal_form_residual: 0.0,
    };
    d.normal_form_residual = normal_form_residual(maps, &d);
    Ok(d)
}

fn warn_if_far_from_complex(maps: &[DenseMatrix], t: &Thresholds) {
    let residual = maps
        .windows(2)
        .map(|w| {
            let scale = (w[0].frobenius_norm() * w[1].frobenius_norm()).max(1.0);
            (&w[0] * &w[1]).max_abs() / scale
        })
        .fold(0.0, f64::max);
    if residual > t.compose_tol {
        log_warning(&format!(
            "input composition residual {residual:e} exceeds {:e}",
            t.compose_tol
        ));
    }
}

pub(crate) fn log_warning(msg: &str) {
    if std::env::var_os("CHAINSVD_QUIET").is_none() {
        eprintln!("warning: {msg}");
    }
}

/// Successive projection: at each level, project `B_i` onto the current
/// kernel approximation, take a full SVD, decide the rank by the gap rule
/// with threshold `t.rank_threshold`, and split `Ṽ_i^t` into coimage and
/// kernel rows for the next level.
pub fn svd_by_projection(maps: &[DenseMatrix], t: &Thresholds) -> Result<ComplexSvd> {
    check_input(maps)?;
    warn_if_far_from_complex(maps, t);
    let n = maps.len();
    let mut sweep = Sweep::new(maps);
    let mut bases = Vec::with_capacity(n + 1);
    let mut spectra = Vec::with_capacity(n);
    let mut ranks = Vec::with_capacity(n);
    let mut last_v = DenseMatrix::identity(0);
    for i in 1..=n {
        let svd = sweep.reduce(i)?;
        let r = rank_decision(&svd.singular_values, cap(&svd), t.rank_threshold);
        bases.push(sweep.advance(&svd, r).transpose());
        spectra.push(svd.singular_values.clone());
        ranks.push(r);
        last_v = svd.v;
    }
    bases.push(last_v);
    finish(maps, bases, spectra, ranks)
}

/// Successive projection where each rank is the number of singular values
/// that agree, to relative precision `t.eigen_match_rel_tol`, between the
/// sweep in double precision and the same sweep carried out in single
/// precision. Singular values that are zero in exact arithmetic come out at
/// the rounding level of each precision and so disagree.
pub fn svd_by_projection_two_precision(maps: &[DenseMatrix], t: &Thresholds) -> Result<ComplexSvd> {
    check_input(maps)?;
    let n = maps.len();
    let mut sweep = Sweep::new(maps);
    let mut shadow = SingleSweep::new(maps);
    let mut bases = Vec::with_capacity(n + 1);
    let mut spectra = Vec::with_capacity(n);
    let mut ranks = Vec::with_capacity(n);
    let mut last_v = DenseMatrix::identity(0);
    for i in 1..=n {
        let svd = sweep.reduce(i)?;
        let (shadow_values, shadow_v) = shadow.reduce(i)?;
        let r = stable_singular_values(&svd.singular_values, &shadow_values, t.eigen_match_rel_tol)
            .min(cap(&svd));
        bases.push(sweep.advance(&svd, r).transpose());
        shadow.advance(&shadow_v, r);
        spectra.push(svd.singular_values.clone());
        ranks.push(r);
        last_v = svd.v;
    }
    bases.push(last_v);
    finish(maps, bases, spectra, ranks)
}

/// The kernel half of [`Sweep`] in single precision.
struct SingleSweep {
    maps: Vec<DMatrix<f32>>,
    kernel: DMatrix<f32>,
}

impl SingleSweep {
    fn new(maps: &[DenseMatrix]) -> Self {
        let maps: Vec<DMatrix<f32>> = maps.iter().map(|m| m.to_nalgebra().map(|x| x as f32)).collect();
        let c0 = maps[0].nrows();
        Self {
            maps,
            kernel: DMatrix::identity(c0, c0),
        }
    }

    fn reduce(&self, i: usize) -> Result<(Vec<f64>, DMatrix<f32>)> {
        let (_, s, v) = svd_full(&self.kernel * &self.maps[i - 1])?;
        Ok((s.into_iter().map(f64::from).collect(), v))
    }

    fn advance(&mut self, v: &DMatrix<f32>, rank: usize) {
        let v_t = v.transpose();
        self.kernel = v_t.rows(rank, v_t.nrows() - rank).into_owned();
    }
}
