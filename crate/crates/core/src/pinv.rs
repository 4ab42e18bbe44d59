//! Moore–Penrose pseudoinverses of differentials and the pseudoinverse
//! complex `C_0 → C_1 → … → C_n` they form.
//!
//! Floating maps are inverted through an SVD with the rank supplied by the
//! caller, so the rank decisions made for the whole complex stay
//! authoritative. Exact maps (over `Q` or `F_p`) use a full-rank
//! factorization `M = F·G` and `M^+ = G^t·(G·G^t)^{-1}·(F^t·F)^{-1}·F^t`.

use crate::chain::{ChainComplex, Differentials, RankProfile};
use crate::error::{Error, PenroseConditionKind, Result};
use crate::matrix::{svd_plain, DenseMatrix, PrimeFieldMatrix, RationalMatrix};

/// Smallest retained singular value, relative to the largest.
const PINV_CONDITION_LIMIT: f64 = 1e-13;

/// Pseudoinverse with exactly `rank` inverted singular values.
pub fn pinv_float(m: &DenseMatrix, rank: usize) -> Result<DenseMatrix> {
    let (rows, cols) = m.shape();
    if rank > rows.min(cols) {
        return Err(Error::Inconsistent(format!(
            "rank {rank} exceeds the dimensions of a {rows}x{cols} matrix"
        )));
    }
    if rank == 0 {
        return Ok(DenseMatrix::zeros(cols, rows));
    }
    let svd = svd_plain(m)?;
    let s = &svd.singular_values;
    if s[rank - 1] <= PINV_CONDITION_LIMIT * s[0] {
        return Err(Error::IllConditionedRank {
            rank,
            sigma_r: s[rank - 1],
            sigma_1: s[0],
        });
    }
    let v = svd.v.col_block(0, rank);
    let u = svd.u.col_block(0, rank);
    let scaled_v = DenseMatrix::from_fn(cols, rank, |i, j| v.get(i, j) / s[j]);
    Ok(&scaled_v * &u.transpose())
}

/// Full-rank factorization over `Q`: `F` = pivot columns of `M`, `G` = the
/// non-zero rows of its reduced echelon form.
fn rational_full_rank_factors(m: &RationalMatrix) -> (RationalMatrix, RationalMatrix) {
    let (r, pivots) = m.rref();
    let rank = pivots.len();
    let g = RationalMatrix::from_fn(rank, m.cols(), |i, j| r.get(i, j).clone());
    let f = RationalMatrix::from_fn(m.rows(), rank, |i, j| m.get(i, pivots[j]).clone());
    (f, g)
}

/// Exact Moore–Penrose pseudoinverse over `Q`.
pub fn pinv_exact_rational(m: &RationalMatrix) -> RationalMatrix {
    let (f, g) = rational_full_rank_factors(m);
    if g.rows() == 0 {
        return RationalMatrix::zeros(m.cols(), m.rows());
    }
    let gt = g.transpose();
    let ft = f.transpose();
    // both Gram matrices are positive definite over Q
    let ggt_inv = g.matmul(&gt).inverse().expect("G has independent rows");
    let ftf_inv = ft.matmul(&f).inverse().expect("F has independent columns");
    gt.matmul(&ggt_inv).matmul(&ftf_inv).matmul(&ft)
}

/// Pseudoinverse over `F_p` with respect to the standard dot product.
///
/// Exists iff `ker M ∩ (ker M)^⊥ = 0` and `im M ∩ (im M)^⊥ = 0`, i.e. iff
/// the Gram matrices `G·G^t` and `F^t·F` of the factorization are invertible.
pub fn pinv_prime_field(m: &PrimeFieldMatrix) -> Result<PrimeFieldMatrix> {
    let p = m.modulus();
    let (r, pivots) = m.rref();
    let rank = pivots.len();
    if rank == 0 {
        return PrimeFieldMatrix::zeros(m.cols(), m.rows(), p);
    }
    let g_data: Vec<i64> = (0..rank)
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| r.get(i, j) as i64)
        .collect();
    let g = PrimeFieldMatrix::new(rank, m.cols(), p, g_data)?;
    let f_data: Vec<i64> = (0..m.rows())
        .flat_map(|i| pivots.iter().map(move |&j| (i, j)))
        .map(|(i, j)| m.get(i, j) as i64)
        .collect();
    let f = PrimeFieldMatrix::new(m.rows(), rank, p, f_data)?;
    let gt = g.transpose();
    let ft = f.transpose();
    let ggt_inv = g.matmul(&gt).inverse().ok_or(Error::PenroseCondition {
        modulus: p,
        condition: PenroseConditionKind::KernelDegenerate,
    })?;
    let ftf_inv = ft.matmul(&f).inverse().ok_or(Error::PenroseCondition {
        modulus: p,
        condition: PenroseConditionKind::ImageDegenerate,
    })?;
    Ok(gt.matmul(&ggt_inv).matmul(&ftf_inv).matmul(&ft))
}

/// Arrow-reversed complex of pseudoinverses; `maps[i − 1]` is `A_i^+`,
/// a `c_i × c_{i−1}` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoinverseComplex {
    pub ranks: Vec<usize>,
    pub maps: Differentials,
}

impl PseudoinverseComplex {
    /// Composition residual `A_{i+1}^+·A_i^+`, measured like
    /// [`ChainComplex::validate`]: normalized max-entry for real maps,
    /// count of non-zero entries for exact ones.
    pub fn composition_residual(&self) -> f64 {
        match &self.maps {
            Differentials::Real(m) => m
                .windows(2)
                .map(|w| {
                    let scale = (w[0].frobenius_norm() * w[1].frobenius_norm()).max(1.0);
                    (&w[1] * &w[0]).max_abs() / scale
                })
                .fold(0.0, f64::max),
            Differentials::Rational(m) => m
                .windows(2)
                .map(|w| w[1].matmul(&w[0]).count_nonzero())
                .sum::<usize>() as f64,
            Differentials::PrimeField(m) => m
                .windows(2)
                .map(|w| w[1].matmul(&w[0]).count_nonzero())
                .sum::<usize>() as f64,
        }
    }
}

/// Floating pseudoinverse complex with ranks taken from `profile`.
pub fn pinv_complex(c: &ChainComplex, profile: &RankProfile) -> Result<PseudoinverseComplex> {
    let maps = c.real_maps()?;
    if profile.ranks.len() != maps.len() {
        return Err(Error::Inconsistent(format!(
            "profile has {} ranks for {} differentials",
            profile.ranks.len(),
            maps.len()
        )));
    }
    let inv = maps
        .iter()
        .zip(&profile.ranks)
        .map(|(m, &r)| pinv_float(m, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(PseudoinverseComplex {
        ranks: c.ranks().to_vec(),
        maps: Differentials::Real(inv),
    })
}

/// Exact pseudoinverse complex of a rational or prime-field complex.
pub fn pinv_exact_complex(c: &ChainComplex) -> Result<PseudoinverseComplex> {
    let maps = match c.differentials() {
        Differentials::Rational(m) => Differentials::Rational(m.iter().map(pinv_exact_rational).collect()),
        Differentials::PrimeField(m) => Differentials::PrimeField(
            m.iter().map(pinv_prime_field).collect::<Result<Vec<_>>>()?,
        ),
        Differentials::Real(_) => {
            return Err(Error::WrongDomain {
                expected: "rational or prime-field",
                actual: "real",
            })
        }
    };
    Ok(PseudoinverseComplex {
        ranks: c.ranks().to_vec(),
        maps,
    })
}

/// Orthogonal projector `id − (A_i^+·A_i + A_{i+1}·A_{i+1}^+)` of `C_i`
/// onto its homology, for `i` in `0..=n`.
pub fn homology_projector(c: &ChainComplex, profile: &RankProfile, i: usize) -> Result<DenseMatrix> {
    let maps = c.real_maps()?;
    let n = maps.len();
    if i > n {
        return Err(Error::DimensionMismatch(format!("position {i} outside 0..={n}")));
    }
    let dim = c.ranks()[i];
    let mut proj = DenseMatrix::identity(dim);
    if i >= 1 {
        let a = &maps[i - 1];
        let ap = pinv_float(a, profile.rank(i))?;
        proj = &proj - &(&ap * a);
    }
    if i < n {
        let a = &maps[i];
        let ap = pinv_float(a, profile.rank(i + 1))?;
        proj = &proj - &(a * &ap);
    }
    Ok(proj)
}

/// Exact homology projector of a rational complex.
pub fn homology_projector_exact(c: &ChainComplex, i: usize) -> Result<RationalMatrix> {
    let maps = c.rational_maps()?;
    let n = maps.len();
    if i > n {
        return Err(Error::DimensionMismatch(format!("position {i} outside 0..={n}")));
    }
    let mut proj = RationalMatrix::identity(c.ranks()[i]);
    if i >= 1 {
        let a = &maps[i - 1];
        proj = proj.sub(&pinv_exact_rational(a).matmul(a));
    }
    if i < n {
        let a = &maps[i];
        proj = proj.sub(&a.matmul(&pinv_exact_rational(a)));
    }
    Ok(proj)
}

fn normalized(x: &DenseMatrix, scale: &DenseMatrix) -> f64 {
    let s = scale.frobenius_norm();
    if s > 0.0 {
        x.frobenius_norm() / s
    } else {
        x.frobenius_norm()
    }
}

/// Relative residuals of the four Penrose relations, in the order
/// `M·X·M = M`, `X·M·X = X`, `(M·X)^t = M·X`, `(X·M)^t = X·M`.
pub fn penrose_residuals(m: &DenseMatrix, x: &DenseMatrix) -> Result<[f64; 4]> {
    if m.rows() != x.cols() || m.cols() != x.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not a candidate inverse of {}x{}",
            x.rows(),
            x.cols(),
            m.rows(),
            m.cols()
        )));
    }
    let mx = m * x;
    let xm = x * m;
    Ok([
        normalized(&(&(&mx * m) - m), m),
        normalized(&(&(&xm * x) - x), x),
        normalized(&(&mx.transpose() - &mx), &mx),
        normalized(&(&xm.transpose() - &xm), &xm),
    ])
}

/// Number of entries violating each Penrose relation over `Q`; all zero
/// iff `x` is the pseudoinverse of `m`.
pub fn penrose_residuals_rational(m: &RationalMatrix, x: &RationalMatrix) -> Result<[usize; 4]> {
    if m.rows() != x.cols() || m.cols() != x.rows() {
        return Err(Error::DimensionMismatch("shapes are not transposed".into()));
    }
    let mx = m.matmul(x);
    let xm = x.matmul(m);
    Ok([
        mx.matmul(m).sub(m).count_nonzero(),
        xm.matmul(x).sub(x).count_nonzero(),
        mx.transpose().sub(&mx).count_nonzero(),
        xm.transpose().sub(&xm).count_nonzero(),
    ])
}

/// Number of entries violating each Penrose relation over `F_p`.
pub fn penrose_residuals_prime_field(m: &PrimeFieldMatrix, x: &PrimeFieldMatrix) -> Result<[usize; 4]> {
    if m.rows() != x.cols() || m.cols() != x.rows() || m.modulus() != x.modulus() {
        return Err(Error::DimensionMismatch("shapes are not transposed".into()));
    }
    let diff = |a: &PrimeFieldMatrix, b: &PrimeFieldMatrix| {
        a.entries().iter().zip(b.entries()).filter(|(u, v)| u != v).count()
    };
    let mx = m.matmul(x);
    let xm = x.matmul(m);
    Ok([
        diff(&mx.matmul(m), m),
        diff(&xm.matmul(x), x),
        diff(&mx.transpose(), &mx),
        diff(&xm.transpose(), &xm),
    ])
}
