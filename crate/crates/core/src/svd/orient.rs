use super::ComplexSvd;
use crate::error::{Error, Result};

/// A column sign flip that leaves every `U_{i−1}^t·B_i·U_i` unchanged.
#[derive(Debug, Clone, Copy)]
enum Flip {
    /// Column 0 of `U_i` together with column `r_{i−1}` of `U_{i−1}`.
    Pair(usize),
    /// Last column of `U_i`, which spans part of the homology.
    Lone(usize),
}

/// Flip column signs until every `det U_i = +1`.
///
/// Positions `i−1` and `i` are linked when `r_i > 0` (a paired flip changes
/// both determinants); a position with `h_i > 0` can fix its own sign. On a
/// linked run of positions the parities are pushed toward a position with
/// homology, or cancel pairwise. When a run has an odd number of negative
/// determinants and no homology, the input is returned inside
/// [`Error::InsufficientSignFreedom`].
pub fn make_special_orthogonal(d: ComplexSvd) -> Result<ComplexSvd> {
    let n = d.bases.len() - 1;
    let mut odd: Vec<bool> = d.bases.iter().map(|u| u.determinant() < 0.0).collect();
    let linked = |i: usize| d.profile.rank(i) > 0; // joins positions i-1 and i
    let has_homology = |i: usize| d.profile.homology[i] > 0;

    let mut flips = Vec::new();
    let mut start = 0;
    while start <= n {
        let mut end = start;
        while end < n && linked(end + 1) {
            end += 1;
        }
        let parity = odd[start..=end].iter().filter(|&&b| b).count() % 2;
        let sink = (start..=end).find(|&i| has_homology(i));
        if parity == 1 && sink.is_none() {
            return Err(Error::InsufficientSignFreedom(Box::new(d)));
        }
        let sink = sink.unwrap_or(end);
        for i in start..sink {
            if odd[i] {
                flips.push(Flip::Pair(i + 1));
                odd[i] = false;
                odd[i + 1] = !odd[i + 1];
            }
        }
        for i in (sink + 1..=end).rev() {
            if odd[i] {
                flips.push(Flip::Pair(i));
                odd[i] = false;
                odd[i - 1] = !odd[i - 1];
            }
        }
        if odd[sink] {
            flips.push(Flip::Lone(sink));
            odd[sink] = false;
        }
        start = end + 1;
    }

    let mut d = d;
    for flip in flips {
        match flip {
            Flip::Pair(i) => {
                d.bases[i].negate_col(0);
                let col = d.profile.rank(i - 1);
                d.bases[i - 1].negate_col(col);
            }
            Flip::Lone(i) => {
                let last = d.bases[i].cols() - 1;
                d.bases[i].negate_col(last);
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::RankProfile;
    use crate::matrix::DenseMatrix;
    use crate::svd::{normal_form_residual, Method};

    fn decomposition(bases: Vec<DenseMatrix>, ranks: Vec<usize>, homology: Vec<usize>) -> ComplexSvd {
        let singular_values = ranks.iter().map(|&r| vec![1.0; r]).collect();
        ComplexSvd {
            bases,
            singular_values,
            profile: RankProfile { ranks, homology },
            method: Method::Projection,
            normal_form_residual: 0.0,
        }
    }

    #[test]
    fn paired_flip_on_scalar_complex() {
        let maps = vec![DenseMatrix::from_rows(&[[1.0]])];
        let minus = DenseMatrix::from_rows(&[[-1.0]]);
        let d = decomposition(vec![minus.clone(), minus], vec![1], vec![0, 0]);
        assert_eq!(normal_form_residual(&maps, &d), 0.0);
        let d = make_special_orthogonal(d).unwrap();
        assert_eq!(d.bases[0].get(0, 0), 1.0);
        assert_eq!(d.bases[1].get(0, 0), 1.0);
        assert_eq!(normal_form_residual(&maps, &d), 0.0);
    }

    #[test]
    fn fixed_point() {
        let d = decomposition(
            vec![DenseMatrix::identity(1), DenseMatrix::identity(1)],
            vec![1],
            vec![0, 0],
        );
        let e = make_special_orthogonal(d.clone()).unwrap();
        assert_eq!(d, e);
    }

    #[test]
    fn parity_obstruction() {
        let minus = DenseMatrix::from_rows(&[[-1.0]]);
        let d = decomposition(vec![minus, DenseMatrix::identity(1)], vec![1], vec![0, 0]);
        match make_special_orthogonal(d.clone()) {
            Err(Error::InsufficientSignFreedom(back)) => assert_eq!(*back, d),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn unlinked_positions_use_homology() {
        // zero map: both spaces are pure homology
        let minus = DenseMatrix::from_rows(&[[-1.0]]);
        let d = decomposition(vec![minus.clone(), minus], vec![0], vec![1, 1]);
        let d = make_special_orthogonal(d).unwrap();
        assert!(d.bases.iter().all(|u| u.determinant() > 0.0));
    }
}
