use std::fmt;

use super::RationalMatrix;
use crate::error::{Error, Result};

/// Largest modulus accepted; keeps products of residues inside `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// Matrix over the prime field `F_p`, entries stored as residues in `[0, p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    data: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl PrimeFieldMatrix {
    /// Entries are reduced into `[0, p)`, so negative representatives are fine.
    pub fn new(rows: usize, cols: usize, modulus: u64, data: Vec<i64>) -> Result<Self> {
        if modulus > MAX_MODULUS || !is_prime(modulus) {
            return Err(Error::NotPrime { modulus });
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: data.len(),
            });
        }
        let p = modulus as i64;
        let data = data.into_iter().map(|x| x.rem_euclid(p) as u64).collect();
        Ok(Self {
            rows,
            cols,
            modulus,
            data,
        })
    }

    pub fn from_rows<R: AsRef<[i64]>>(modulus: u64, rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.as_ref().len() != ncols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            data.extend_from_slice(r.as_ref());
        }
        Self::new(nrows, ncols, modulus, data)
    }

    /// Reduce an integer-valued or `p`-integral rational matrix mod `p`.
    pub fn from_rational(m: &RationalMatrix, modulus: u64) -> Result<Self> {
        use num_bigint::BigInt;
        use num_traits::{ToPrimitive, Zero};
        if modulus > MAX_MODULUS || !is_prime(modulus) {
            return Err(Error::NotPrime { modulus });
        }
        let pb = BigInt::from(modulus);
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for x in m.entries() {
            let num = (x.numer() % &pb + &pb) % &pb;
            let den = (x.denom() % &pb + &pb) % &pb;
            if den.is_zero() {
                return Err(Error::Document(format!(
                    "denominator of {x} vanishes mod {modulus}"
                )));
            }
            let num = num.to_u64().unwrap();
            let den = den.to_u64().unwrap();
            data.push(num * pow_mod(den, modulus - 2, modulus) % modulus);
        }
        Ok(Self {
            rows: m.rows(),
            cols: m.cols(),
            modulus,
            data,
        })
    }

    fn with_data(&self, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        Self {
            rows,
            cols,
            modulus: self.modulus,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Result<Self> {
        Self::new(rows, cols, modulus, vec![0; rows * cols])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn inv_scalar(&self, x: u64) -> u64 {
        debug_assert!(x % self.modulus != 0);
        pow_mod(x, self.modulus - 2, self.modulus)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        self.with_data(self.cols, self.rows, data)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.modulus, rhs.modulus, "moduli differ");
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimensions differ");
        let p = self.modulus;
        let mut out = vec![0u64; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let o = &mut out[i * rhs.cols + j];
                    *o = (*o + a * rhs.get(k, j)) % p;
                }
            }
        }
        self.with_data(self.rows, rhs.cols, out)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let p = self.modulus;
        let (m, n) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            if r == m {
                break;
            }
            let Some(piv) = (r..m).find(|&i| a[i * n + col] != 0) else {
                continue;
            };
            for j in 0..n {
                a.swap(piv * n + j, r * n + j);
            }
            let inv = self.inv_scalar(a[r * n + col]);
            for j in col..n {
                a[r * n + j] = a[r * n + j] * inv % p;
            }
            for i in 0..m {
                let f = a[i * n + col];
                if i == r || f == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = f * a[r * n + j] % p;
                    a[i * n + j] = (a[i * n + j] + p - sub) % p;
                }
            }
            pivots.push(col);
            r += 1;
        }
        (self.with_data(m, n, a), pivots)
    }

    /// Rank over `F_p` by Gaussian elimination.
    pub fn exact_rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                aug.push(self.get(i, j));
            }
            for j in 0..n {
                aug.push(u64::from(i == j));
            }
        }
        let (r, pivots) = self.with_data(n, 2 * n, aug).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(r.get(i, n + j));
            }
        }
        Some(self.with_data(n, n, data))
    }
}

impl fmt::Debug for PrimeFieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PrimeFieldMatrix {}x{} mod {} [", self.rows, self.cols, self.modulus)?;
        for row in self.to_rows() {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}
