#![allow(dead_code)]

use chainsvd::matrix::{DenseMatrix, RationalMatrix};
use chainsvd::ChainComplex;

pub const A1: [[i64; 5]; 3] = [
    [14, -4, 16, 3, -9],
    [14, -5, 20, 9, 1],
    [4, 1, -4, -12, -24],
];

pub const A2: [[i64; 5]; 5] = [
    [-43, -50, -27, -51, 9],
    [12, -24, 36, 0, -12],
    [35, 34, 27, 39, -9],
    [-3, -10, 3, -6, -1],
    [-11, -10, -9, -12, 3],
];

pub const A3: [[i64; 3]; 5] = [
    [-8, -16, -12],
    [-5, -1, -15],
    [-1, 13, -14],
    [12, 12, 28],
    [-1, 25, -24],
];

/// Published singular values, five significant digits.
pub const SIGMA: [[f64; 2]; 3] = [[34.489, 28.714], [114.08, 47.193], [45.993, 35.209]];

/// Published floating `A_1^+`, six significant digits.
pub const A1_PINV: [[f64; 3]; 5] = [
    [0.0121907, 0.0114627, 0.0050431],
    [-0.00328525, -0.00426002, 0.00115014],
    [0.013141, 0.0170401, -0.00460058],
    [0.00142545, 0.00836608, -0.0144655],
    [-0.00981498, 0.00248076, -0.0291523],
];

/// Published exact `A_1^+`.
pub const A1_PINV_EXACT: [[&str; 3]; 5] = [
    ["5978/490373", "5621/490373", "2473/490373"],
    ["-1611/490373", "-2089/490373", "564/490373"],
    ["6444/490373", "8356/490373", "-2256/490373"],
    ["699/490373", "8205/980746", "-14187/980746"],
    ["-4813/490373", "2433/980746", "-28591/980746"],
];

pub fn rational_maps() -> Vec<RationalMatrix> {
    vec![
        RationalMatrix::from_integers(&A1),
        RationalMatrix::from_integers(&A2),
        RationalMatrix::from_integers(&A3),
    ]
}

pub fn rational_complex() -> ChainComplex {
    ChainComplex::rational(rational_maps()).unwrap()
}

pub fn real_maps() -> Vec<DenseMatrix> {
    rational_maps().iter().map(RationalMatrix::to_dense).collect()
}

pub fn real_complex() -> ChainComplex {
    ChainComplex::real(real_maps()).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
