mod common;

use chainsvd::matrix::{exact_rank, sym_eig, DenseMatrix, PrimeFieldMatrix, RationalMatrix};
use chainsvd::pinv::{
    homology_projector_exact, pinv_exact_complex, pinv_exact_rational, pinv_float, pinv_prime_field,
};
use chainsvd::{
    exact_homology, make_special_orthogonal, svd_by_laplacian, svd_by_projection,
    svd_by_projection_two_precision, ComplexSvd, Thresholds,
};
use common::*;
use num_rational::BigRational;

/// Orthogonal bases as printed to four digits.
const U0: [[f64; 3]; 3] = [
    [-0.6553, 0.2393, -0.7165],
    [-0.7549, -0.1745, 0.6322],
    [0.0262, 0.9551, 0.2950],
];
const U1: [[f64; 5]; 5] = [
    [-0.5694, 0.1646, -0.7702, -0.1318, 0.1950],
    [0.1862, 0.0303, 0.0679, -0.9710, 0.1301],
    [-0.7448, -0.1213, 0.6010, -0.0706, 0.2537],
    [-0.2631, -0.4289, -0.0790, -0.1821, -0.8411],
    [0.1309, -0.8794, -0.1862, 0.0404, 0.4162],
];
const U2: [[f64; 5]; 5] = [
    [0.5019, -0.1770, 0.2288, 0.5338, 0.6160],
    [0.5257, 0.6126, 0.3335, 0.1127, -0.4738],
    [0.3586, -0.7250, 0.3461, -0.3015, -0.3677],
    [0.5735, 0.0970, -0.5972, -0.5061, 0.2210],
    [-0.1195, 0.2417, 0.6000, -0.5961, 0.4604],
];
const U3: [[f64; 3]; 3] = [
    [-0.2525, -0.2843, -0.9249],
    [0.1813, -0.9528, 0.2434],
    [-0.9505, -0.1062, 0.2921],
];

fn check_singular_values(d: &ComplexSvd) {
    assert_eq!(d.profile.ranks, vec![2, 2, 2]);
    assert_eq!(d.profile.homology, vec![1, 1, 1, 1]);
    for (got, want) in d.singular_values.iter().zip(SIGMA) {
        for (g, w) in got.iter().zip(want) {
            assert!(rel_err(*g, w) < 5e-5, "{g} vs {w}");
        }
    }
}

/// Columns agree up to sign with a four-digit printout.
fn assert_columns_match<const N: usize>(got: &DenseMatrix, want: &[[f64; N]; N]) {
    assert_eq!(got.shape(), (N, N));
    for j in 0..N {
        let sign = if got.get(0, j) * want[0][j] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..N {
            let diff = (sign * got.get(i, j) - want[i][j]).abs();
            assert!(diff < 1e-4, "column {j} row {i}: {} vs {}", got.get(i, j), want[i][j]);
        }
    }
}

#[test]
fn projection_singular_values() {
    let d = svd_by_projection(&real_maps(), &Thresholds::default()).unwrap();
    check_singular_values(&d);
    assert!(d.normal_form_residual < 1e-12);
}

#[test]
fn laplacian_singular_values() {
    let d = svd_by_laplacian(&real_maps(), &Thresholds::default()).unwrap();
    check_singular_values(&d);
    assert!(d.normal_form_residual < 1e-12);
}

#[test]
fn two_precision_ranks() {
    let d = svd_by_projection_two_precision(&real_maps(), &Thresholds::default()).unwrap();
    check_singular_values(&d);
}

#[test]
fn printed_bases() {
    for d in [
        svd_by_projection(&real_maps(), &Thresholds::default()).unwrap(),
        svd_by_laplacian(&real_maps(), &Thresholds::default()).unwrap(),
    ] {
        assert_columns_match(&d.bases[0], &U0);
        assert_columns_match(&d.bases[1], &U1);
        assert_columns_match(&d.bases[2], &U2);
        assert_columns_match(&d.bases[3], &U3);
    }
}

#[test]
fn special_orthogonal_bases() {
    let d = svd_by_projection(&real_maps(), &Thresholds::default()).unwrap();
    let before = d.normal_form_residual;
    let s = make_special_orthogonal(d).unwrap();
    for u in &s.bases {
        assert!((u.determinant() - 1.0).abs() < 1e-10);
    }
    assert!((s.normal_form_residual - before).abs() <= 1e-14);
}

#[test]
fn exact_pseudoinverse() {
    let maps = rational_maps();
    let p = pinv_exact_rational(&maps[0]);
    assert_eq!(p.shape(), (5, 3));
    assert_eq!(p.get(0, 0).to_string(), "5978/490373");
    for (i, row) in A1_PINV_EXACT.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            assert_eq!(&p.get(i, j).to_string(), s);
        }
    }
}

#[test]
fn float_pseudoinverse() {
    let p = pinv_float(&real_maps()[0], 2).unwrap();
    for (i, row) in A1_PINV.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            // same value when rounded to six significant digits
            assert_eq!(format!("{:.5e}", p.get(i, j)), format!("{w:.5e}"), "({i},{j})");
        }
    }
}

#[test]
fn pseudoinverse_mod_101() {
    let a1 = PrimeFieldMatrix::from_rows(101, &A1).unwrap();
    assert_eq!(a1.exact_rank(), 2);
    let p = pinv_prime_field(&a1).unwrap();
    // 5978/490373 reduced mod 101
    assert_eq!(p.to_rows()[0][0], 74);
}

#[test]
fn exact_ranks_and_homology() {
    let maps = rational_maps();
    for m in &maps {
        assert_eq!(exact_rank(m), 2);
    }
    assert_eq!(exact_homology(&rational_complex()).unwrap(), vec![1, 1, 1, 1]);
    assert!(maps[0].matmul(&maps[1]).is_zero());
    assert!(maps[1].matmul(&maps[2]).is_zero());
}

#[test]
fn laplacian_spectrum() {
    let c = real_complex();
    let (values, q) = sym_eig(&c.laplacian(1).unwrap()).unwrap();
    let expected = [SIGMA[1][0].powi(2), SIGMA[1][1].powi(2), SIGMA[0][0].powi(2), SIGMA[0][1].powi(2)];
    for (v, e) in values.iter().zip(expected) {
        assert!(rel_err(*v, e) < 1e-4, "{v} vs {e}");
    }
    assert!(values[4].abs() < 1e-9 * values[0]);
    assert!(q.orthogonality_defect() < 1e-12);
}

#[test]
fn exact_pseudoinverse_complex_and_projector() {
    let c = rational_complex();
    let p = pinv_exact_complex(&c).unwrap();
    assert_eq!(p.composition_residual(), 0.0);
    for i in 0..4 {
        let h = homology_projector_exact(&c, i).unwrap();
        let trace = (0..h.rows()).fold(BigRational::from_integer(0.into()), |acc, k| acc + h.get(k, k));
        assert_eq!(trace, BigRational::from_integer(1.into()), "level {i}");
        assert_eq!(h.matmul(&h), h);
    }
}

#[test]
fn rational_roundtrip_through_doubles() {
    let m: RationalMatrix = rational_maps().remove(1);
    let back = m.to_dense();
    assert_eq!(back.get(0, 0), -43.0);
}
