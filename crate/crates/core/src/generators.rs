//! Test-case factories: integer complexes with prescribed ranks and
//! homology, Stanley–Reisner chain complexes, and relative perturbations.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{laplacian_of, ChainComplex, Differentials};
use crate::error::{Error, Result};
use crate::matrix::{sym_eig, DenseMatrix, RationalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    /// Elementary operations per space; `None` means `3·c_i`.
    pub unimodular_steps: Option<usize>,
    /// Elementary operation coefficients are drawn from `[−bound, bound] \ {0}`.
    pub coefficient_bound: i64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            unimodular_steps: None,
            coefficient_bound: 1,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// Square integer matrix with determinant ±1, kept together with its inverse.
struct Unimodular {
    n: usize,
    fwd: Vec<i128>,
    inv: Vec<i128>,
}

impl Unimodular {
    fn identity(n: usize) -> Self {
        let mut fwd = vec![0; n * n];
        for i in 0..n {
            fwd[i * n + i] = 1;
        }
        Self {
            n,
            inv: fwd.clone(),
            fwd,
        }
    }

    /// `T ← E·T` with `E = I + c·e_a·e_b^t`, and `T^{-1} ← T^{-1}·E^{-1}`.
    fn add_row(&mut self, a: usize, b: usize, c: i128) -> Result<()> {
        let n = self.n;
        for j in 0..n {
            let v = self.fwd[b * n + j]
                .checked_mul(c)
                .and_then(|x| x.checked_add(self.fwd[a * n + j]))
                .ok_or_else(overflow)?;
            self.fwd[a * n + j] = v;
        }
        for i in 0..n {
            let v = self.inv[i * n + a]
                .checked_mul(c)
                .and_then(|x| self.inv[i * n + b].checked_sub(x))
                .ok_or_else(overflow)?;
            self.inv[i * n + b] = v;
        }
        Ok(())
    }

    fn random(n: usize, steps: usize, bound: i64, rng: &mut ChaCha8Rng) -> Result<Self> {
        let mut t = Self::identity(n);
        if n < 2 {
            if n == 1 && rng.random_bool(0.5) {
                t.fwd[0] = -1;
                t.inv[0] = -1;
            }
            return Ok(t);
        }
        for _ in 0..steps {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let mut c = rng.random_range(-bound..=bound - 1);
            if c >= 0 {
                c += 1;
            }
            t.add_row(a, b, c as i128)?;
        }
        Ok(t)
    }
}

fn overflow() -> Error {
    Error::Generator("entry overflow; lower unimodular_steps or coefficient_bound".into())
}

fn checked_product(a: &[i128], b: &[i128], m: usize, k: usize, n: usize) -> Result<Vec<i128>> {
    let mut out = vec![0i128; m * n];
    for i in 0..m {
        for l in 0..k {
            let x = a[i * k + l];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                let y = b[l * n + j];
                if y == 0 {
                    continue;
                }
                let cell = &mut out[i * n + j];
                *cell = x
                    .checked_mul(y)
                    .and_then(|p| cell.checked_add(p))
                    .ok_or_else(overflow)?;
            }
        }
    }
    Ok(out)
}

/// Redraws allowed before `random_complex` settles for what it has.
const MAX_REDRAWS: usize = 100;

/// Two non-zero Laplacian eigenvalues closer than this (relative) count as
/// colliding.
const MIN_RELATIVE_GAP: f64 = 1e-3;

/// Smallest non-zero Laplacian eigenvalue allowed, relative to the largest
/// of the same Laplacian.
const MIN_SPECTRAL_SPREAD: f64 = 1e-7;

/// Integer complex with `rank A_i = ranks[i−1]` and `dim H_i = homology[i]`.
///
/// Starts from the normal form with distinct integer diagonals (`1, 2, …`
/// numbered consecutively across levels) and conjugates each space by a
/// random unimodular matrix, `A_i = T_{i−1}·Σ̄_i·T_i^{-1}`. Draws whose
/// Laplacians have nearly colliding non-zero eigenvalues, or a non-zero
/// eigenvalue below `1e-7` of the largest, are redrawn from the same stream
/// (up to 100 times), so both decomposition methods apply to the output.
pub fn random_complex(homology: &[usize], ranks: &[usize], cfg: &GeneratorConfig) -> Result<ChainComplex> {
    let n = ranks.len();
    if n == 0 || homology.len() != n + 1 {
        return Err(Error::Generator(format!(
            "need n >= 1 ranks and n + 1 homology values, got {} and {}",
            n,
            homology.len()
        )));
    }
    if cfg.coefficient_bound < 1 {
        return Err(Error::Generator("coefficient_bound must be at least 1".into()));
    }
    let r = |i: usize| if i == 0 || i > n { 0 } else { ranks[i - 1] };
    let dims: Vec<usize> = (0..=n).map(|i| r(i) + r(i + 1) + homology[i]).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut attempt = 0;
    loop {
        let transforms = dims
            .iter()
            .map(|&c| {
                let steps = cfg.unimodular_steps.unwrap_or(3 * c);
                Unimodular::random(c, steps, cfg.coefficient_bound, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;

        let mut next_diag = 1i128;
        let mut maps = Vec::with_capacity(n);
        for i in 1..=n {
            let (rows, cols) = (dims[i - 1], dims[i]);
            let mut block = vec![0i128; rows * cols];
            for k in 0..r(i) {
                block[(r(i - 1) + k) * cols + k] = next_diag;
                next_diag += 1;
            }
            let left = checked_product(&transforms[i - 1].fwd, &block, rows, rows, cols)?;
            let a = checked_product(&left, &transforms[i].inv, rows, cols, cols)?;
            maps.push(RationalMatrix::from_fn(rows, cols, |p, q| {
                BigRational::from_integer(a[p * cols + q].into())
            }));
        }
        let c = ChainComplex::with_ranks(dims.clone(), Differentials::Rational(maps))?;
        attempt += 1;
        if attempt >= MAX_REDRAWS || well_separated(&c)? {
            return Ok(c);
        }
    }
}

/// Non-zero Laplacian spectra are simple and not too spread out.
fn well_separated(c: &ChainComplex) -> Result<bool> {
    let real = c.to_real()?;
    let maps = real.real_maps()?;
    for i in 0..=maps.len() {
        let (values, _) = sym_eig(&laplacian_of(maps, i)?)?;
        let top = values.first().copied().unwrap_or(0.0);
        let nonzero: Vec<f64> = values.into_iter().filter(|&v| v > 1e-10 * top).collect();
        if nonzero.last().is_some_and(|&v| v < MIN_SPECTRAL_SPREAD * top) {
            return Ok(false);
        }
        if nonzero.windows(2).any(|w| w[0] - w[1] < MIN_RELATIVE_GAP * w[0]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Non-reduced simplicial chain complex of the Stanley–Reisner complex of
/// `monomials` random square-free monomials in `vars` variables, degrees
/// drawn from `[2, min(5, vars − 1)]`.
pub fn stanley_reisner_chain(vars: usize, monomials: usize, cfg: &GeneratorConfig) -> Result<ChainComplex> {
    if !(3..=16).contains(&vars) {
        return Err(Error::Generator(format!("vars = {vars} outside 3..=16")));
    }
    if monomials == 0 {
        return Err(Error::Generator("need at least one monomial".into()));
    }
    let max_deg = 5.min(vars - 1);
    for attempt in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let mut gens: Vec<u32> = Vec::with_capacity(monomials);
        for _ in 0..monomials * 50 {
            if gens.len() == monomials {
                break;
            }
            let deg = rng.random_range(2..=max_deg);
            let mut vs: Vec<usize> = (0..vars).collect();
            let mut mask = 0u32;
            for d in 0..deg {
                let pick = rng.random_range(d..vars);
                vs.swap(d, pick);
                mask |= 1 << vs[d];
            }
            if !gens.contains(&mask) {
                gens.push(mask);
            }
        }
        if gens.len() == monomials {
            return stanley_reisner_from_generators(vars, &gens);
        }
    }
    Err(Error::Generator(format!(
        "could not draw {monomials} distinct monomials in {vars} variables"
    )))
}

/// Drop generators divisible by another generator.
pub fn minimalize(gens: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for &g in gens {
        let redundant = gens
            .iter()
            .any(|&h| h != g && h & g == h) // h divides g
            || out.contains(&g);
        if !redundant {
            out.push(g);
        }
    }
    out.sort_unstable();
    out
}

/// Faces of the Stanley–Reisner complex, grouped by dimension; each face is
/// a sorted vertex list and each group is in lexicographic order.
pub fn stanley_reisner_faces(vars: usize, gens: &[u32]) -> Vec<Vec<Vec<usize>>> {
    let gens = minimalize(gens);
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); vars];
    for mask in 1u32..(1u32 << vars) {
        if gens.iter().any(|&g| g & mask == g) {
            continue;
        }
        let face: Vec<usize> = (0..vars).filter(|&v| mask & (1 << v) != 0).collect();
        faces[face.len() - 1].push(face);
    }
    for group in &mut faces {
        group.sort();
    }
    while faces.last().is_some_and(Vec::is_empty) {
        faces.pop();
    }
    faces
}

/// Boundary `∂[v_0 < … < v_d] = Σ_j (−1)^j [v_0 … v̂_j … v_d]` as a
/// `|lower| × |upper|` integer matrix.
pub fn boundary_matrix(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(lower.len(), upper.len());
    for (col, face) in upper.iter().enumerate() {
        for j in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(j);
            let row = lower.binary_search(&sub).expect("faces closed under subsets");
            let sign = if j % 2 == 0 { 1 } else { -1 };
            m.set(row, col, BigRational::from_integer(sign.into()));
        }
    }
    m
}

/// Chain complex of the Stanley–Reisner complex of explicit generators
/// (bit masks over `vars` variables). An empty generator list gives the
/// full simplex.
pub fn stanley_reisner_from_generators(vars: usize, gens: &[u32]) -> Result<ChainComplex> {
    if vars == 0 || vars > 16 {
        return Err(Error::Generator(format!("vars = {vars} outside 1..=16")));
    }
    let faces = stanley_reisner_faces(vars, gens);
    if faces.is_empty() {
        return Err(Error::Generator("the simplicial complex is empty".into()));
    }
    let mut maps: Vec<RationalMatrix> = faces
        .windows(2)
        .map(|w| boundary_matrix(&w[0], &w[1]))
        .collect();
    if maps.is_empty() {
        // only vertices: close with a map from the zero space
        maps.push(RationalMatrix::zeros(faces[0].len(), 0));
    }
    ChainComplex::rational(maps)
}

/// Multiply every entry by `1 + δ`, `δ` uniform in `[−rel_eps, rel_eps]`.
pub fn perturb(c: &ChainComplex, rel_eps: f64, seed: u64) -> Result<ChainComplex> {
    if !(rel_eps > 0.0 && rel_eps < 1.0) {
        return Err(Error::Generator(format!("rel_eps = {rel_eps} outside (0, 1)")));
    }
    let maps = c.real_maps()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = maps
        .iter()
        .map(|m| {
            let data = m
                .as_slice()
                .iter()
                .map(|&x| x * (1.0 + rng.random_range(-rel_eps..=rel_eps)))
                .collect();
            DenseMatrix::new(m.rows(), m.cols(), data)
        })
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::with_ranks(c.ranks().to_vec(), Differentials::Real(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::exact_homology;

    #[test]
    fn example_shape() {
        let c = random_complex(&[1, 1, 1, 1], &[2, 2, 2], &GeneratorConfig::with_seed(7)).unwrap();
        assert_eq!(c.ranks(), &[3, 5, 5, 3]);
        assert_eq!(c.validate(), 0.0);
        assert_eq!(exact_homology(&c).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn table_one_shape() {
        let c = random_complex(&[2, 3, 2, 1], &[5, 13, 13], &GeneratorConfig::with_seed(1)).unwrap();
        assert_eq!(c.ranks(), &[7, 21, 28, 14]);
        assert_eq!(exact_homology(&c).unwrap(), vec![2, 3, 2, 1]);
    }

    #[test]
    fn two_term_isomorphism() {
        let c = random_complex(&[0, 0], &[4], &GeneratorConfig::with_seed(3)).unwrap();
        assert_eq!(c.ranks(), &[4, 4]);
        assert_eq!(c.rational_maps().unwrap()[0].exact_rank(), 4);
        assert!(random_complex(&[0], &[], &GeneratorConfig::default()).is_err());
    }

    #[test]
    fn deterministic() {
        let cfg = GeneratorConfig::with_seed(11);
        let a = random_complex(&[1, 0, 1], &[2, 3], &cfg).unwrap();
        let b = random_complex(&[1, 0, 1], &[2, 3], &cfg).unwrap();
        assert_eq!(a, b);
        let c = random_complex(&[1, 0, 1], &[2, 3], &GeneratorConfig::with_seed(12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn full_simplex_and_hollow_triangle() {
        let simplex = stanley_reisner_from_generators(3, &[]).unwrap();
        assert_eq!(simplex.ranks(), &[3, 3, 1]);
        assert_eq!(exact_homology(&simplex).unwrap(), vec![1, 0, 0]);
        let circle = stanley_reisner_from_generators(3, &[0b111]).unwrap();
        assert_eq!(circle.ranks(), &[3, 3]);
        assert_eq!(exact_homology(&circle).unwrap(), vec![1, 1]);
    }

    #[test]
    fn degree_one_generator_drops_vertex() {
        let c = stanley_reisner_from_generators(4, &[0b0001, 0b0011]).unwrap();
        assert_eq!(c.ranks()[0], 3);
        assert_eq!(minimalize(&[0b0001, 0b0011, 0b0001]), vec![0b0001]);
    }

    #[test]
    fn discrete_points() {
        // all edges forbidden: three isolated vertices
        let c = stanley_reisner_from_generators(3, &[0b011, 0b101, 0b110]).unwrap();
        assert_eq!(c.ranks(), &[3, 0]);
        assert_eq!(exact_homology(&c).unwrap(), vec![3, 0]);
    }

    #[test]
    fn perturb_keeps_zeros() {
        let c = ChainComplex::real(vec![DenseMatrix::from_rows(&[[0.0, 2.0], [1.0, 0.0]])]).unwrap();
        let p = perturb(&c, 1e-3, 5).unwrap();
        let m = &p.real_maps().unwrap()[0];
        assert_eq!(m.get(0, 0), 0.0);
        assert!((m.get(0, 1) - 2.0).abs() <= 2e-3);
        assert_eq!(p, perturb(&c, 1e-3, 5).unwrap());
        assert!(perturb(&c, 0.0, 5).is_err());
    }

    #[test]
    fn sampled_draw_is_a_complex() {
        let c = stanley_reisner_chain(8, 20, &GeneratorConfig::with_seed(2)).unwrap();
        assert_eq!(c.validate(), 0.0);
        assert!(c.ranks()[0] <= 8);
        assert!(stanley_reisner_chain(2, 1, &GeneratorConfig::default()).is_err());
    }
}
