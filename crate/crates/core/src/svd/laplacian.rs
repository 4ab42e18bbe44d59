use super::{normal_form_residual, ComplexSvd, Method};
use crate::chain::{homology_from_ranks, laplacian_of, RankProfile, Thresholds};
use crate::error::{Error, Result};
use crate::matrix::{sym_eig, DenseMatrix};

/// Laplacian eigenvalues at or below this fraction of the largest
/// eigenvalue (over all Laplacians) are treated as zero and never matched.
pub const LAPLACIAN_ZERO_CUTOFF: f64 = 1e-10;

/// Off-diagonal mass allowed in a conjugated block, relative to `σ_max`.
const DIAGONALITY_TOL: f64 = 1e-6;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Greedy two-pointer matching of two descending lists. Returns index pairs.
fn match_spectra(left: &[(usize, f64)], right: &[(usize, f64)], tol: f64) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    let (mut a, mut b) = (0, 0);
    while a < left.len() && b < right.len() {
        let (ia, x) = left[a];
        let (ib, y) = right[b];
        if close(x, y, tol) {
            // prefer the nearer neighbour when the next entry is also within tolerance
            if b + 1 < right.len()
                && close(x, right[b + 1].1, tol)
                && (x - right[b + 1].1).abs() < (x - y).abs()
            {
                b += 1;
                continue;
            }
            pairs.push((ia, ib));
            a += 1;
            b += 1;
        } else if x > y {
            a += 1;
        } else {
            b += 1;
        }
    }
    pairs
}

/// Laplacian method.
///
/// Diagonalises `Δ'_i = B_i^t·B_i + B_{i+1}·B_{i+1}^t`, aborts on repeated
/// non-zero eigenvalues, takes `r_i` as the number of eigenvalues shared
/// by `Δ'_{i−1}` and `Δ'_i`, reorders eigenvectors so the shared ones lead,
/// and fixes eigenvector signs so every conjugated block has a
/// non-negative diagonal.
pub fn svd_by_laplacian(maps: &[DenseMatrix], t: &Thresholds) -> Result<ComplexSvd> {
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
                detail: "shape incompatible with previous differential".into(),
            });
        }
    }
    let n = maps.len();
    let tol = t.eigen_match_rel_tol;

    let mut eigs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        eigs.push(sym_eig(&laplacian_of(maps, i)?)?);
    }
    let lambda_max = eigs
        .iter()
        .flat_map(|(v, _)| v.first().copied())
        .fold(0.0, f64::max);
    let cutoff = LAPLACIAN_ZERO_CUTOFF * lambda_max;

    // non-zero eigenvalues per Laplacian, descending, with their positions
    let nonzero: Vec<Vec<(usize, f64)>> = eigs
        .iter()
        .map(|(vals, _)| {
            vals.iter()
                .copied()
                .enumerate()
                .filter(|&(_, v)| v > cutoff)
                .collect()
        })
        .collect();

    for (i, nz) in nonzero.iter().enumerate() {
        if let Some(w) = nz.windows(2).find(|w| close(w[0].1, w[1].1, tol)) {
            return Err(Error::RepeatedEigenvalue {
                index: i,
                values: vec![w[0].1, w[1].1],
            });
        }
    }

    // matches[i-1] pairs eigenvalue positions of D_{i-1} with those of D_i
    let matches: Vec<Vec<(usize, usize)>> = (1..=n)
        .map(|i| match_spectra(&nonzero[i - 1], &nonzero[i], tol))
        .collect();
    let ranks: Vec<usize> = matches.iter().map(Vec::len).collect();
    let dims: Vec<usize> = eigs.iter().map(|(v, _)| v.len()).collect();
    let spectra_for_error = || {
        eigs.iter()
            .map(|(v, _)| v.iter().map(|x| x.max(0.0).sqrt()).collect())
            .collect::<Vec<Vec<f64>>>()
    };
    let homology = homology_from_ranks(&dims, &ranks).map_err(|_| Error::RankDecisionFailure {
        position: 0,
        singular_values: spectra_for_error(),
    })?;

    // permutation of eigenvector columns: [shared with i-1 | shared with i+1 | rest]
    let mut bases = Vec::with_capacity(n + 1);
    for (i, (vals, q)) in eigs.iter().enumerate() {
        let mut order: Vec<usize> = Vec::with_capacity(vals.len());
        if i >= 1 {
            order.extend(matches[i - 1].iter().map(|&(_, b)| b));
        }
        if i < n {
            order.extend(matches[i].iter().map(|&(a, _)| a));
        }
        let mut used = vec![false; vals.len()];
        for &k in &order {
            if used[k] {
                return Err(Error::RepeatedEigenvalue {
                    index: i,
                    values: vec![vals[k]],
                });
            }
            used[k] = true;
        }
        order.extend((0..vals.len()).filter(|&k| !used[k]));
        bases.push(q.permute_cols(&order));
    }

    let profile = RankProfile { ranks, homology };
    let mut singular_values = Vec::with_capacity(n);
    let mut flips: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut smax = 0.0f64;
    let mut blocks = Vec::with_capacity(n);
    for i in 1..=n {
        let conj = bases[i - 1].tr_matmul(&(&maps[i - 1] * &bases[i]));
        let offset = profile.rank(i - 1);
        let r = profile.rank(i);
        let diag: Vec<f64> = (0..r).map(|k| conj.get(offset + k, k)).collect();
        smax = diag.iter().fold(smax, |m, d| m.max(d.abs()));
        flips[i] = (0..r).filter(|&k| diag[k] < 0.0).collect();
        singular_values.push(diag.iter().map(|d| d.abs()).collect::<Vec<f64>>());
        blocks.push((conj, offset, r));
    }
    for (idx, (conj, offset, r)) in blocks.iter().enumerate() {
        let mut mass = 0.0f64;
        for a in 0..*r {
            for b in 0..*r {
                if a != b {
                    mass = mass.max(conj.get(offset + a, b).abs());
                }
            }
        }
        if mass > DIAGONALITY_TOL * smax {
            return Err(Error::DiagonalityFailure {
                index: idx + 1,
                mass,
            });
        }
    }
    for (u, cols) in bases.iter_mut().zip(&flips) {
        for &k in cols {
            u.negate_col(k);
        }
    }

    let mut d = ComplexSvd {
        bases,
        singular_values,
        profile,
        method: Method::Laplacian,
        normal_form_residual: 0.0,
    };
    d.normal_form_residual = normal_form_residual(maps, &d);
    Ok(d)
}
