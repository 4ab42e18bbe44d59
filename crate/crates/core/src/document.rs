//! JSON interchange format for complexes, decompositions and pseudoinverse
//! complexes.
//!
//! ```json
//! { "schema_version": "1", "field": "QQ", "ranks": [1, 1],
//!   "differentials": [[["3/2"]]] }
//! ```
//!
//! Entries are JSON numbers for `R53`, `"p/q"` or `"p"` strings for `QQ`
//! and integers for `Fp` (which also carries `"modulus"`). Differential `i`
//! is a row-major `c_{i−1} × c_i` array; rows of length zero are written as
//! empty arrays and the shape is recovered from `ranks`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chain::{ChainComplex, Differentials, RankProfile};
use crate::error::{Error, Result};
use crate::matrix::{parse_rational, DenseMatrix, PrimeFieldMatrix, RationalMatrix};
use crate::pinv::PseudoinverseComplex;
use crate::svd::ComplexSvd;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldTag {
    R53,
    QQ,
    Fp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub schema_version: String,
    pub field: FieldTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    pub ranks: Vec<usize>,
    pub differentials: Vec<Vec<Vec<Value>>>,
}

fn entry_error(index: usize, row: usize, col: usize, what: &str, v: &Value) -> Error {
    Error::Document(format!(
        "differential {index}, entry ({row}, {col}): expected {what}, got {v}"
    ))
}

fn check_shape(index: usize, rows: &[Vec<Value>], nrows: usize, ncols: usize) -> Result<()> {
    if rows.len() != nrows {
        return Err(Error::Document(format!(
            "differential {index} has {} rows, ranks require {nrows}",
            rows.len()
        )));
    }
    if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != ncols) {
        return Err(Error::Document(format!(
            "differential {index}, row {r} has {} entries, ranks require {ncols}",
            row.len()
        )));
    }
    Ok(())
}

fn matrices_to_values<T>(rows: Vec<Vec<T>>, f: impl Fn(T) -> Value) -> Vec<Vec<Value>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(&f).collect())
        .collect()
}

fn real_values(m: &DenseMatrix) -> Vec<Vec<Value>> {
    matrices_to_values(m.to_rows(), Value::from)
}

fn rational_values(m: &RationalMatrix) -> Vec<Vec<Value>> {
    matrices_to_values(m.to_strings(), Value::from)
}

fn prime_values(m: &PrimeFieldMatrix) -> Vec<Vec<Value>> {
    matrices_to_values(m.to_rows(), Value::from)
}

fn field_of(d: &Differentials) -> (FieldTag, Option<u64>) {
    match d {
        Differentials::Real(_) => (FieldTag::R53, None),
        Differentials::Rational(_) => (FieldTag::QQ, None),
        Differentials::PrimeField(m) => (FieldTag::Fp, m.first().map(PrimeFieldMatrix::modulus)),
    }
}

fn differential_values(d: &Differentials) -> Vec<Vec<Vec<Value>>> {
    match d {
        Differentials::Real(m) => m.iter().map(real_values).collect(),
        Differentials::Rational(m) => m.iter().map(rational_values).collect(),
        Differentials::PrimeField(m) => m.iter().map(prime_values).collect(),
    }
}

/// Parse row arrays with a declared shape into differentials of the given field.
fn parse_maps(
    field: FieldTag,
    modulus: Option<u64>,
    shapes: &[(usize, usize)],
    arrays: &[Vec<Vec<Value>>],
) -> Result<Differentials> {
    if shapes.len() != arrays.len() {
        return Err(Error::Document(format!(
            "{} matrices given, shapes require {}",
            arrays.len(),
            shapes.len()
        )));
    }
    for (k, (&(r, c), rows)) in shapes.iter().zip(arrays).enumerate() {
        check_shape(k + 1, rows, r, c)?;
    }
    let cells = |k: usize| {
        arrays[k]
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v)))
    };
    Ok(match field {
        FieldTag::R53 => {
            let mut maps = Vec::with_capacity(shapes.len());
            for (k, &(r, c)) in shapes.iter().enumerate() {
                let data = cells(k)
                    .map(|(i, j, v)| v.as_f64().ok_or_else(|| entry_error(k + 1, i, j, "a number", v)))
                    .collect::<Result<Vec<f64>>>()?;
                maps.push(DenseMatrix::new(r, c, data)?);
            }
            Differentials::Real(maps)
        }
        FieldTag::QQ => {
            let mut maps = Vec::with_capacity(shapes.len());
            for (k, &(r, c)) in shapes.iter().enumerate() {
                let data = cells(k)
                    .map(|(i, j, v)| {
                        v.as_str()
                            .and_then(parse_rational)
                            .ok_or_else(|| entry_error(k + 1, i, j, "a \"p/q\" string", v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                maps.push(RationalMatrix::new(r, c, data)?);
            }
            Differentials::Rational(maps)
        }
        FieldTag::Fp => {
            let p = modulus.ok_or_else(|| Error::Document("field Fp requires \"modulus\"".into()))?;
            let mut maps = Vec::with_capacity(shapes.len());
            for (k, &(r, c)) in shapes.iter().enumerate() {
                let data = cells(k)
                    .map(|(i, j, v)| v.as_i64().ok_or_else(|| entry_error(k + 1, i, j, "an integer", v)))
                    .collect::<Result<Vec<i64>>>()?;
                maps.push(PrimeFieldMatrix::new(r, c, p, data)?);
            }
            Differentials::PrimeField(maps)
        }
    })
}

impl ComplexDocument {
    pub fn from_complex(c: &ChainComplex) -> Self {
        let (field, modulus) = field_of(c.differentials());
        Self {
            schema_version: SCHEMA_VERSION.into(),
            field,
            modulus,
            ranks: c.ranks().to_vec(),
            differentials: differential_values(c.differentials()),
        }
    }

    pub fn to_complex(&self) -> Result<ChainComplex> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported schema_version {:?}",
                self.schema_version
            )));
        }
        if self.ranks.len() < 2 {
            return Err(Error::Document("ranks must list at least c_0 and c_1".into()));
        }
        let shapes: Vec<(usize, usize)> = self.ranks.windows(2).map(|w| (w[0], w[1])).collect();
        let maps = parse_maps(self.field, self.modulus, &shapes, &self.differentials)?;
        ChainComplex::with_ranks(self.ranks.clone(), maps)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(format!("{e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// Parse a complex straight from JSON text.
pub fn parse_complex(text: &str) -> Result<ChainComplex> {
    ComplexDocument::from_json(text)?.to_complex()
}

pub fn complex_to_json(c: &ChainComplex) -> String {
    ComplexDocument::from_complex(c).to_json()
}

/// Pseudoinverse complex; `maps[i−1]` is the `c_i × c_{i−1}` matrix `A_i^+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoinverseDocument {
    pub schema_version: String,
    pub kind: String,
    pub field: FieldTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    pub ranks: Vec<usize>,
    pub maps: Vec<Vec<Vec<Value>>>,
}

impl PseudoinverseDocument {
    pub fn from_pinv(p: &PseudoinverseComplex) -> Self {
        let (field, modulus) = field_of(&p.maps);
        Self {
            schema_version: SCHEMA_VERSION.into(),
            kind: "pseudoinverse".into(),
            field,
            modulus,
            ranks: p.ranks.clone(),
            maps: differential_values(&p.maps),
        }
    }

    pub fn to_pinv(&self) -> Result<PseudoinverseComplex> {
        let shapes: Vec<(usize, usize)> = self.ranks.windows(2).map(|w| (w[1], w[0])).collect();
        let maps = parse_maps(self.field, self.modulus, &shapes, &self.maps)?;
        Ok(PseudoinverseComplex {
            ranks: self.ranks.clone(),
            maps,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// Output of the SVD command: bases `U_i` (row-major), the singular values
/// per level and the rank profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDocument {
    pub schema_version: String,
    pub method: String,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub homology: Vec<usize>,
    pub singular_values: Vec<Vec<f64>>,
    pub bases: Vec<Vec<Vec<f64>>>,
    pub normal_form_residual: f64,
}

impl DecompositionDocument {
    pub fn from_svd(d: &ComplexSvd) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            method: d.method.name().into(),
            dims: d.dims(),
            ranks: d.profile.ranks.clone(),
            homology: d.profile.homology.clone(),
            singular_values: d.singular_values.clone(),
            bases: d.bases.iter().map(DenseMatrix::to_rows).collect(),
            normal_form_residual: d.normal_form_residual,
        }
    }

    pub fn to_svd(&self) -> Result<ComplexSvd> {
        let bases = self
            .bases
            .iter()
            .zip(&self.dims)
            .map(|(rows, &c)| {
                let data: Vec<f64> = rows.iter().flatten().copied().collect();
                DenseMatrix::new(c, c, data)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ComplexSvd {
            bases,
            singular_values: self.singular_values.clone(),
            profile: RankProfile {
                ranks: self.ranks.clone(),
                homology: self.homology.clone(),
            },
            method: self.method.parse().map_err(Error::Document)?,
            normal_form_residual: self.normal_form_residual,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}
