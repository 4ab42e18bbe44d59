//! Chain complexes `0 ← C_0 ← C_1 ← … ← C_n ← 0` and their rank arithmetic.
//!
//! Indexing: `ranks()` gives the dimensions `c_0..c_n` (length `n + 1`),
//! differential `i` (1-based, `1..=n`) maps `C_i → C_{i−1}` and is stored
//! at position `i − 1`. Rank lists `r_1..r_n` have length `n`, homology lists
//! `h_0..h_n` have length `n + 1`. The boundary maps `A_0` and `A_{n+1}` are
//! zero and never materialized.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, PrimeFieldMatrix, RationalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Real,
    Rational,
    PrimeField(u64),
}

impl ScalarField {
    pub fn name(&self) -> &'static str {
        match self {
            ScalarField::Real => "real",
            ScalarField::Rational => "rational",
            ScalarField::PrimeField(_) => "prime-field",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Differentials {
    Real(Vec<DenseMatrix>),
    Rational(Vec<RationalMatrix>),
    PrimeField(Vec<PrimeFieldMatrix>),
}

impl Differentials {
    fn len(&self) -> usize {
        match self {
            Differentials::Real(v) => v.len(),
            Differentials::Rational(v) => v.len(),
            Differentials::PrimeField(v) => v.len(),
        }
    }

    fn shape(&self, k: usize) -> (usize, usize) {
        match self {
            Differentials::Real(v) => v[k].shape(),
            Differentials::Rational(v) => v[k].shape(),
            Differentials::PrimeField(v) => v[k].shape(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    differentials: Differentials,
}

impl ChainComplex {
    /// Checks that differential `i` is `c_{i−1} × c_i`. Ranks are read off
    /// the shapes; the composition law is left to [`ChainComplex::validate`].
    pub fn new(differentials: Differentials) -> Result<Self> {
        let n = differentials.len();
        if n == 0 {
            return Err(Error::Structural {
                index: 0,
                detail: "a complex needs at least one differential".into(),
            });
        }
        if let Differentials::PrimeField(maps) = &differentials {
            let p = maps[0].modulus();
            if let Some(k) = maps.iter().position(|m| m.modulus() != p) {
                return Err(Error::Structural {
                    index: k + 1,
                    detail: format!("modulus {} differs from {p}", maps[k].modulus()),
                });
            }
        }
        let mut ranks = vec![differentials.shape(0).0];
        for k in 0..n {
            let (rows, cols) = differentials.shape(k);
            if rows != ranks[k] {
                return Err(Error::Structural {
                    index: k + 1,
                    detail: format!(
                        "has {rows} rows but the target space has dimension {}",
                        ranks[k]
                    ),
                });
            }
            ranks.push(cols);
        }
        Ok(Self {
            ranks,
            differentials,
        })
    }

    /// Like [`ChainComplex::new`] but also checks the shapes against the
    /// declared dimensions `c_0..c_n`.
    pub fn with_ranks(ranks: Vec<usize>, differentials: Differentials) -> Result<Self> {
        if ranks.len() != differentials.len() + 1 {
            return Err(Error::Structural {
                index: 0,
                detail: format!(
                    "{} dimensions declared for {} differentials",
                    ranks.len(),
                    differentials.len()
                ),
            });
        }
        for k in 0..differentials.len() {
            let (rows, cols) = differentials.shape(k);
            if rows != ranks[k] || cols != ranks[k + 1] {
                return Err(Error::Structural {
                    index: k + 1,
                    detail: format!(
                        "shape {rows}x{cols}, expected {}x{}",
                        ranks[k],
                        ranks[k + 1]
                    ),
                });
            }
        }
        Self::new(differentials)
    }

    pub fn real(maps: Vec<DenseMatrix>) -> Result<Self> {
        Self::new(Differentials::Real(maps))
    }

    pub fn rational(maps: Vec<RationalMatrix>) -> Result<Self> {
        Self::new(Differentials::Rational(maps))
    }

    pub fn prime_field(maps: Vec<PrimeFieldMatrix>) -> Result<Self> {
        Self::new(Differentials::PrimeField(maps))
    }

    /// The complex with all differentials zero.
    pub fn zero_real(ranks: &[usize]) -> Result<Self> {
        let maps = ranks
            .windows(2)
            .map(|w| DenseMatrix::zeros(w[0], w[1]))
            .collect();
        Self::with_ranks(ranks.to_vec(), Differentials::Real(maps))
    }

    /// Dimensions `c_0..c_n`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Number of differentials `n`.
    pub fn len(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn differentials(&self) -> &Differentials {
        &self.differentials
    }

    pub fn field(&self) -> ScalarField {
        match &self.differentials {
            Differentials::Real(_) => ScalarField::Real,
            Differentials::Rational(_) => ScalarField::Rational,
            Differentials::PrimeField(m) => ScalarField::PrimeField(m[0].modulus()),
        }
    }

    pub fn real_maps(&self) -> Result<&[DenseMatrix]> {
        match &self.differentials {
            Differentials::Real(m) => Ok(m),
            _ => Err(Error::WrongDomain {
                expected: "real",
                actual: self.field().name(),
            }),
        }
    }

    pub fn rational_maps(&self) -> Result<&[RationalMatrix]> {
        match &self.differentials {
            Differentials::Rational(m) => Ok(m),
            _ => Err(Error::WrongDomain {
                expected: "rational",
                actual: self.field().name(),
            }),
        }
    }

    pub fn prime_field_maps(&self) -> Result<&[PrimeFieldMatrix]> {
        match &self.differentials {
            Differentials::PrimeField(m) => Ok(m),
            _ => Err(Error::WrongDomain {
                expected: "prime-field",
                actual: self.field().name(),
            }),
        }
    }

    /// Real-double rendering; rationals are rounded to nearest. Prime-field
    /// complexes have no meaningful real image and are rejected.
    pub fn to_real(&self) -> Result<ChainComplex> {
        match &self.differentials {
            Differentials::Real(_) => Ok(self.clone()),
            Differentials::Rational(m) => Self::with_ranks(
                self.ranks.clone(),
                Differentials::Real(m.iter().map(RationalMatrix::to_dense).collect()),
            ),
            Differentials::PrimeField(_) => Err(Error::WrongDomain {
                expected: "real or rational",
                actual: "prime-field",
            }),
        }
    }

    /// Largest composition residual.
    ///
    /// Real complexes: `max_i ‖A_i·A_{i+1}‖_max / max(1, ‖A_i‖_F·‖A_{i+1}‖_F)`,
    /// to be compared against `Thresholds::compose_tol`. Exact complexes:
    /// the number of non-zero entries over all compositions, so zero means
    /// an exact complex.
    pub fn validate(&self) -> f64 {
        match &self.differentials {
            Differentials::Real(m) => m
                .windows(2)
                .map(|w| {
                    let prod = &w[0] * &w[1];
                    let scale = (w[0].frobenius_norm() * w[1].frobenius_norm()).max(1.0);
                    prod.max_abs() / scale
                })
                .fold(0.0, f64::max),
            Differentials::Rational(m) => m
                .windows(2)
                .map(|w| w[0].matmul(&w[1]).count_nonzero())
                .sum::<usize>() as f64,
            Differentials::PrimeField(m) => m
                .windows(2)
                .map(|w| w[0].matmul(&w[1]).count_nonzero())
                .sum::<usize>() as f64,
        }
    }

    /// `Δ_i = A_i^t·A_i + A_{i+1}·A_{i+1}^t` for `i` in `0..=n`.
    pub fn laplacian(&self, i: usize) -> Result<DenseMatrix> {
        let maps = self.real_maps()?;
        laplacian_of(maps, i)
    }
}

/// Laplacian of a list of real maps, treating the out-of-range neighbours
/// as zero.
pub fn laplacian_of(maps: &[DenseMatrix], i: usize) -> Result<DenseMatrix> {
    let n = maps.len();
    if i > n {
        return Err(Error::DimensionMismatch(format!(
            "Laplacian index {i} outside 0..={n}"
        )));
    }
    let c = if i == 0 { maps[0].rows() } else { maps[i - 1].cols() };
    let mut lap = DenseMatrix::zeros(c, c);
    if i >= 1 {
        lap = &lap + &maps[i - 1].tr_matmul(&maps[i - 1]);
    }
    if i < n {
        let next = &maps[i];
        lap = &lap + &(next * &next.transpose());
    }
    Ok(lap.symmetrize())
}

/// Ranks `r_1..r_n` together with homology dimensions `h_0..h_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub ranks: Vec<usize>,
    pub homology: Vec<usize>,
}

impl RankProfile {
    pub fn from_ranks(dims: &[usize], ranks: Vec<usize>) -> Result<Self> {
        let homology = homology_from_ranks(dims, &ranks)?;
        Ok(Self { ranks, homology })
    }

    pub fn from_homology(dims: &[usize], homology: Vec<usize>) -> Result<Self> {
        let ranks = ranks_from_homology(dims, &homology)?;
        Ok(Self { ranks, homology })
    }

    /// `r_i` with the virtual `r_0 = r_{n+1} = 0`.
    pub fn rank(&self, i: usize) -> usize {
        if i == 0 || i > self.ranks.len() {
            0
        } else {
            self.ranks[i - 1]
        }
    }

    /// Recomputes `c_i = r_i + r_{i+1} + h_i`.
    pub fn dims(&self) -> Vec<usize> {
        (0..self.homology.len())
            .map(|i| self.rank(i) + self.rank(i + 1) + self.homology[i])
            .collect()
    }
}

/// `h_i = c_i − r_i − r_{i+1}`; fails when any of them would be negative.
pub fn homology_from_ranks(dims: &[usize], ranks: &[usize]) -> Result<Vec<usize>> {
    if dims.len() != ranks.len() + 1 {
        return Err(Error::Inconsistent(format!(
            "{} dimensions need {} ranks, got {}",
            dims.len(),
            dims.len().saturating_sub(1),
            ranks.len()
        )));
    }
    let r = |i: usize| if i == 0 || i > ranks.len() { 0 } else { ranks[i - 1] };
    dims.iter()
        .enumerate()
        .map(|(i, &c)| {
            c.checked_sub(r(i) + r(i + 1)).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "h_{i} = {c} - {} - {} < 0",
                    r(i),
                    r(i + 1)
                ))
            })
        })
        .collect()
}

/// Solves `c_i = r_i + r_{i+1} + h_i` for the ranks, starting from `r_0 = 0`.
/// Fails with [`Error::RankConditions`] if a rank goes negative or
/// `r_{n+1} ≠ 0`.
pub fn ranks_from_homology(dims: &[usize], homology: &[usize]) -> Result<Vec<usize>> {
    if dims.len() != homology.len() || dims.len() < 2 {
        return Err(Error::Inconsistent(format!(
            "{} dimensions but {} homology values",
            dims.len(),
            homology.len()
        )));
    }
    let mut ranks = Vec::with_capacity(dims.len());
    let mut prev: i64 = 0;
    for (&c, &h) in dims.iter().zip(homology) {
        let next = c as i64 - prev - h as i64;
        if next < 0 {
            return Err(Error::RankConditions);
        }
        ranks.push(next as usize);
        prev = next;
    }
    if ranks.pop() != Some(0) {
        return Err(Error::RankConditions);
    }
    Ok(ranks)
}

/// Homology dimensions of an exact complex, from exact ranks.
pub fn exact_homology(complex: &ChainComplex) -> Result<Vec<usize>> {
    let ranks: Vec<usize> = match complex.differentials() {
        Differentials::Rational(m) => m.iter().map(RationalMatrix::exact_rank).collect(),
        Differentials::PrimeField(m) => m.iter().map(PrimeFieldMatrix::exact_rank).collect(),
        Differentials::Real(_) => {
            return Err(Error::WrongDomain {
                expected: "rational or prime-field",
                actual: "real",
            })
        }
    };
    let nonzero = complex.validate();
    if nonzero != 0.0 {
        return Err(Error::NotAComplex {
            nonzero: nonzero as usize,
        });
    }
    homology_from_ranks(complex.ranks(), &ranks)
}

/// Numerical decision parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Gap ratio `b` for singular value rank decisions.
    pub rank_threshold: f64,
    /// Relative tolerance for two eigenvalues to count as equal.
    pub eigen_match_rel_tol: f64,
    /// Tolerance on the normalized composition residual.
    pub compose_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            rank_threshold: 1e-4,
            eigen_match_rel_tol: 1e-4,
            compose_tol: 1e-8,
        }
    }
}

impl Thresholds {
    pub fn new(rank_threshold: f64, eigen_match_rel_tol: f64, compose_tol: f64) -> Result<Self> {
        let t = Self {
            rank_threshold,
            eigen_match_rel_tol,
            compose_tol,
        };
        for (name, v) in [
            ("rank_threshold", rank_threshold),
            ("eigen_match_rel_tol", eigen_match_rel_tol),
            ("compose_tol", compose_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Inconsistent(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(t)
    }

    pub fn with_rank_threshold(self, b: f64) -> Result<Self> {
        Self::new(b, self.eigen_match_rel_tol, self.compose_tol)
    }
}
