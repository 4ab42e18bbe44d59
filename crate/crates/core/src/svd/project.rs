use super::normal_form_block;
use super::projection::Sweep;
use crate::chain::ranks_from_homology;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Replace `B_1..B_n` by a genuine complex with homology dimensions
/// `homology` (`h_0..h_n`).
///
/// Ranks follow from `c_i = r_i + r_{i+1} + h_i`; infeasible requests fail
/// with [`Error::RankConditions`]. The sweep is the successive projection
/// one with the ranks imposed, keeping the largest `r_i` singular values of
/// each projected map, and the result is `A_i = U_{i−1}·Σ̄_i·U_i^t`.
pub fn project_to_complex(maps: &[DenseMatrix], homology: &[usize]) -> Result<Vec<DenseMatrix>> {
    if maps.is_empty() {
        return Err(Error::Structural {
            index: 0,
            detail: "a complex needs at least one differential".into(),
        });
    }
    let mut dims = vec![maps[0].rows()];
    for (k, m) in maps.iter().enumerate() {
        if m.rows() != dims[k] {
            return Err(Error::Structural {
                index: k + 1,
                detail: format!("has {} rows, expected {}", m.rows(), dims[k]),
            });
        }
        dims.push(m.cols());
    }
    let ranks = ranks_from_homology(&dims, homology)?;

    let n = maps.len();
    let mut sweep = Sweep::new(maps);
    let mut bases = Vec::with_capacity(n + 1);
    let mut sigmas = Vec::with_capacity(n);
    let mut last_v = DenseMatrix::identity(0);
    for i in 1..=n {
        let svd = sweep.reduce(i)?;
        let r = ranks[i - 1];
        sigmas.push(svd.singular_values[..r].to_vec());
        bases.push(sweep.advance(&svd, r).transpose());
        last_v = svd.v;
    }
    bases.push(last_v);

    Ok((1..=n)
        .map(|i| {
            let prev_rank = if i == 1 { 0 } else { ranks[i - 2] };
            let block = normal_form_block(dims[i - 1], dims[i], prev_rank, &sigmas[i - 1]);
            &(&bases[i - 1] * &block) * &bases[i].transpose()
        })
        .collect())
}
