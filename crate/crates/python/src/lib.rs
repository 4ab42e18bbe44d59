//! Python bindings: complexes, their SVD normal forms, pseudoinverses,
//! projection onto complexes and the test generators.

use chainsvd::document::{complex_to_json, parse_complex, DecompositionDocument};
use chainsvd::generators::{perturb, random_complex, stanley_reisner_chain, stanley_reisner_from_generators, GeneratorConfig};
use chainsvd::matrix::{parse_rational, DenseMatrix, PrimeFieldMatrix, RationalMatrix};
use chainsvd::pinv::{pinv_complex, pinv_exact_complex, pinv_exact_rational, pinv_float, pinv_prime_field};
use chainsvd::{
    homology_from_ranks, make_special_orthogonal, project_to_complex, rank_decision,
    ranks_from_homology, svd_by_laplacian, svd_by_projection, svd_by_projection_two_precision,
    ChainComplex, ComplexSvd, Differentials, Error, ScalarField, Thresholds,
};
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(chainsvd_py, AlgorithmError, PyRuntimeError, "The algorithm gave up on its input.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::RepeatedEigenvalue { .. }
        | Error::DiagonalityFailure { .. }
        | Error::RankDecisionFailure { .. }
        | Error::NumericalFailure(_)
        | Error::PenroseCondition { .. }
        | Error::IllConditionedRank { .. }
        | Error::InsufficientSignFreedom(_) => AlgorithmError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn shape_of<T>(rows: &[Vec<T>]) -> PyResult<(usize, usize)> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    Ok((rows.len(), cols))
}

fn dense(rows: Vec<Vec<f64>>) -> PyResult<DenseMatrix> {
    let (m, n) = shape_of(&rows)?;
    DenseMatrix::new(m, n, rows.into_iter().flatten().collect()).map_err(py_err)
}

/// Ints or strings such as `"-3/4"`.
fn rational_entry(x: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let text = match x.extract::<i64>() {
        Ok(i) => i.to_string(),
        Err(_) => x.extract::<String>()?,
    };
    parse_rational(&text).ok_or_else(|| PyValueError::new_err(format!("not a rational number: {text:?}")))
}

fn rational(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<RationalMatrix> {
    let (m, n) = shape_of(&rows)?;
    let data = rows.iter().flatten().map(rational_entry).collect::<PyResult<Vec<_>>>()?;
    RationalMatrix::new(m, n, data).map_err(py_err)
}

fn prime(rows: Vec<Vec<i64>>, modulus: u64) -> PyResult<PrimeFieldMatrix> {
    let (m, n) = shape_of(&rows)?;
    PrimeFieldMatrix::new(m, n, modulus, rows.into_iter().flatten().collect()).map_err(py_err)
}

/// Matrices as nested Python lists: floats, fraction strings or residues.
fn maps_to_py(py: Python<'_>, maps: &Differentials) -> PyResult<Py<PyAny>> {
    let obj = match maps {
        Differentials::Real(m) => m.iter().map(DenseMatrix::to_rows).collect::<Vec<_>>().into_pyobject(py)?,
        Differentials::Rational(m) => m.iter().map(RationalMatrix::to_strings).collect::<Vec<_>>().into_pyobject(py)?,
        Differentials::PrimeField(m) => m.iter().map(PrimeFieldMatrix::to_rows).collect::<Vec<_>>().into_pyobject(py)?,
    };
    Ok(obj.into_any().unbind())
}

fn thresholds(rank_threshold: f64, eigen_match_rel_tol: f64) -> PyResult<Thresholds> {
    Thresholds::new(rank_threshold, eigen_match_rel_tol, Thresholds::default().compose_tol).map_err(py_err)
}

/// Finite complex `C_0 ← C_1 ← … ← C_n` over R (doubles), Q or F_p.
#[pyclass(name = "ChainComplex", module = "chainsvd_py", frozen)]
#[derive(Clone)]
struct PyChainComplex {
    inner: ChainComplex,
}

impl PyChainComplex {
    fn real(&self) -> PyResult<ChainComplex> {
        self.inner.to_real().map_err(py_err)
    }
}

#[pymethods]
impl PyChainComplex {
    /// `maps[i]` is the row-major matrix of `A_{i+1}`. Entries are floats
    /// for `"R53"`, ints or `"p/q"` strings for `"QQ"`, ints for `"Fp"`.
    #[new]
    #[pyo3(signature = (maps, field = "R53", modulus = None))]
    fn new(maps: Vec<Vec<Vec<Bound<'_, PyAny>>>>, field: &str, modulus: Option<u64>) -> PyResult<Self> {
        let differentials = match field {
            "R53" => Differentials::Real(
                maps.into_iter()
                    .map(|m| {
                        let rows = m
                            .iter()
                            .map(|r| r.iter().map(|x| x.extract::<f64>()).collect::<PyResult<Vec<_>>>())
                            .collect::<PyResult<Vec<_>>>()?;
                        dense(rows)
                    })
                    .collect::<PyResult<_>>()?,
            ),
            "QQ" => Differentials::Rational(maps.into_iter().map(rational).collect::<PyResult<_>>()?),
            "Fp" => {
                let p = modulus.ok_or_else(|| PyValueError::new_err("field \"Fp\" needs a modulus"))?;
                Differentials::PrimeField(
                    maps.into_iter()
                        .map(|m| {
                            let rows = m
                                .iter()
                                .map(|r| r.iter().map(|x| x.extract::<i64>()).collect::<PyResult<Vec<_>>>())
                                .collect::<PyResult<Vec<_>>>()?;
                            prime(rows, p)
                        })
                        .collect::<PyResult<_>>()?,
                )
            }
            other => return Err(PyValueError::new_err(format!("unknown field {other:?}"))),
        };
        let inner = ChainComplex::new(differentials).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_complex(text).map_err(py_err)?,
        })
    }

    fn to_json(&self) -> String {
        complex_to_json(&self.inner)
    }

    /// `[c_0, …, c_n]`
    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.ranks().to_vec()
    }

    #[getter]
    fn field(&self) -> &'static str {
        match self.inner.field() {
            ScalarField::Real => "R53",
            ScalarField::Rational => "QQ",
            ScalarField::PrimeField(_) => "Fp",
        }
    }

    fn maps(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        maps_to_py(py, self.inner.differentials())
    }

    /// Largest composition residual; see `ChainComplex::validate`.
    fn validate(&self) -> f64 {
        self.inner.validate()
    }

    fn exact_homology(&self) -> PyResult<Vec<usize>> {
        chainsvd::exact_homology(&self.inner).map_err(py_err)
    }

    fn laplacian(&self, i: usize) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.real()?.laplacian(i).map_err(py_err)?.to_rows())
    }

    fn to_real(&self) -> PyResult<Self> {
        Ok(Self { inner: self.real()? })
    }

    fn __repr__(&self) -> String {
        format!("ChainComplex(field={:?}, dims={:?})", self.field(), self.dims())
    }
}

/// Orthogonal bases `U_0..U_n` putting a complex into SVD normal form.
#[pyclass(name = "ComplexSvd", module = "chainsvd_py", frozen)]
struct PyComplexSvd {
    inner: ComplexSvd,
}

#[pymethods]
impl PyComplexSvd {
    #[getter]
    fn bases(&self) -> Vec<Vec<Vec<f64>>> {
        self.inner.bases.iter().map(DenseMatrix::to_rows).collect()
    }

    #[getter]
    fn singular_values(&self) -> Vec<Vec<f64>> {
        self.inner.singular_values.clone()
    }

    #[getter]
    fn ranks(&self) -> Vec<usize> {
        self.inner.profile.ranks.clone()
    }

    #[getter]
    fn homology(&self) -> Vec<usize> {
        self.inner.profile.homology.clone()
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.name()
    }

    #[getter]
    fn normal_form_residual(&self) -> f64 {
        self.inner.normal_form_residual
    }

    /// Same decomposition with every `det U_i = +1`.
    fn special_orthogonal(&self) -> PyResult<Self> {
        Ok(Self {
            inner: make_special_orthogonal(self.inner.clone()).map_err(py_err)?,
        })
    }

    fn to_json(&self) -> String {
        DecompositionDocument::from_svd(&self.inner).to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "ComplexSvd(method={:?}, ranks={:?}, homology={:?})",
            self.method(),
            self.inner.profile.ranks,
            self.inner.profile.homology
        )
    }
}

fn wrap(d: chainsvd::Result<ComplexSvd>) -> PyResult<PyComplexSvd> {
    Ok(PyComplexSvd { inner: d.map_err(py_err)? })
}

#[pyfunction(name = "svd_by_projection")]
#[pyo3(signature = (complex, threshold = 1e-4))]
fn py_svd_by_projection(complex: &PyChainComplex, threshold: f64) -> PyResult<PyComplexSvd> {
    let c = complex.real()?;
    wrap(svd_by_projection(c.real_maps().map_err(py_err)?, &thresholds(threshold, 1e-4)?))
}

#[pyfunction(name = "svd_by_projection_two_precision")]
#[pyo3(signature = (complex, eigen_match_rel_tol = 1e-4))]
fn py_svd_by_projection_two_precision(complex: &PyChainComplex, eigen_match_rel_tol: f64) -> PyResult<PyComplexSvd> {
    let c = complex.real()?;
    let t = thresholds(Thresholds::default().rank_threshold, eigen_match_rel_tol)?;
    wrap(svd_by_projection_two_precision(c.real_maps().map_err(py_err)?, &t))
}

#[pyfunction(name = "svd_by_laplacian")]
#[pyo3(signature = (complex, threshold = 1e-4, eigen_match_rel_tol = 1e-4))]
fn py_svd_by_laplacian(complex: &PyChainComplex, threshold: f64, eigen_match_rel_tol: f64) -> PyResult<PyComplexSvd> {
    let c = complex.real()?;
    wrap(svd_by_laplacian(c.real_maps().map_err(py_err)?, &thresholds(threshold, eigen_match_rel_tol)?))
}

/// Nearby complex with homology dimensions `homology`.
#[pyfunction(name = "project_to_complex")]
fn py_project_to_complex(complex: &PyChainComplex, homology: Vec<usize>) -> PyResult<PyChainComplex> {
    let c = complex.real()?;
    let maps = project_to_complex(c.real_maps().map_err(py_err)?, &homology).map_err(py_err)?;
    Ok(PyChainComplex {
        inner: ChainComplex::real(maps).map_err(py_err)?,
    })
}

/// Moore–Penrose pseudoinverse of a float matrix of known rank.
#[pyfunction]
fn pinv(matrix: Vec<Vec<f64>>, rank: usize) -> PyResult<Vec<Vec<f64>>> {
    Ok(pinv_float(&dense(matrix)?, rank).map_err(py_err)?.to_rows())
}

/// Exact pseudoinverse over Q, entries as fraction strings.
#[pyfunction]
fn pinv_exact(matrix: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Vec<Vec<String>>> {
    Ok(pinv_exact_rational(&rational(matrix)?).to_strings())
}

/// Pseudoinverse over F_p; raises `AlgorithmError` when none exists.
#[pyfunction]
fn pinv_mod_p(matrix: Vec<Vec<i64>>, modulus: u64) -> PyResult<Vec<Vec<u64>>> {
    Ok(pinv_prime_field(&prime(matrix, modulus)?).map_err(py_err)?.to_rows())
}

/// Pseudoinverse complex; `maps[i]` is `A_{i+1}^+`.
#[pyfunction(name = "pinv_complex")]
#[pyo3(signature = (complex, exact = false))]
fn py_pinv_complex(py: Python<'_>, complex: &PyChainComplex, exact: bool) -> PyResult<Py<PyAny>> {
    let p = if exact {
        pinv_exact_complex(&complex.inner).map_err(py_err)?
    } else {
        let c = complex.real()?;
        let d = svd_by_projection(c.real_maps().map_err(py_err)?, &Thresholds::default()).map_err(py_err)?;
        pinv_complex(&c, &d.profile).map_err(py_err)?
    };
    maps_to_py(py, &p.maps)
}

/// Rational complex with homology `homology` and ranks `ranks`.
#[pyfunction(name = "random_complex")]
#[pyo3(signature = (homology, ranks, seed = 0))]
fn py_random_complex(homology: Vec<usize>, ranks: Vec<usize>, seed: u64) -> PyResult<PyChainComplex> {
    Ok(PyChainComplex {
        inner: random_complex(&homology, &ranks, &GeneratorConfig::with_seed(seed)).map_err(py_err)?,
    })
}

/// Stanley–Reisner complex of `monomials` random square-free monomials.
#[pyfunction]
#[pyo3(signature = (vars, monomials, seed = 0))]
fn stanley_reisner(vars: usize, monomials: usize, seed: u64) -> PyResult<PyChainComplex> {
    Ok(PyChainComplex {
        inner: stanley_reisner_chain(vars, monomials, &GeneratorConfig::with_seed(seed)).map_err(py_err)?,
    })
}

/// Stanley–Reisner complex of explicit monomials, each a list of 1-based
/// variable indices.
#[pyfunction]
fn stanley_reisner_from_monomials(vars: usize, monomials: Vec<Vec<usize>>) -> PyResult<PyChainComplex> {
    let masks = monomials
        .iter()
        .map(|m| {
            m.iter().try_fold(0u32, |mask, &k| match k {
                1..=16 if k <= vars => Ok(mask | 1 << (k - 1)),
                _ => Err(PyValueError::new_err(format!("variable {k} outside 1..={vars}"))),
            })
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(PyChainComplex {
        inner: stanley_reisner_from_generators(vars, &masks).map_err(py_err)?,
    })
}

/// Multiply every entry by `1 + δ`, `δ` uniform in `[−rel_eps, rel_eps]`.
#[pyfunction(name = "perturb")]
#[pyo3(signature = (complex, rel_eps, seed = 0))]
fn py_perturb(complex: &PyChainComplex, rel_eps: f64, seed: u64) -> PyResult<PyChainComplex> {
    Ok(PyChainComplex {
        inner: perturb(&complex.real()?, rel_eps, seed).map_err(py_err)?,
    })
}

#[pyfunction(name = "ranks_from_homology")]
fn py_ranks_from_homology(dims: Vec<usize>, homology: Vec<usize>) -> PyResult<Vec<usize>> {
    ranks_from_homology(&dims, &homology).map_err(py_err)
}

#[pyfunction(name = "homology_from_ranks")]
fn py_homology_from_ranks(dims: Vec<usize>, ranks: Vec<usize>) -> PyResult<Vec<usize>> {
    homology_from_ranks(&dims, &ranks).map_err(py_err)
}

/// Gap rule: the first `j` with `threshold·σ_j ≥ σ_{j+1}`, else `cap`.
#[pyfunction(name = "rank_decision")]
#[pyo3(signature = (sigma, cap, threshold = 1e-4))]
fn py_rank_decision(sigma: Vec<f64>, cap: usize, threshold: f64) -> usize {
    rank_decision(&sigma, cap, threshold)
}

#[pymodule]
fn chainsvd_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChainComplex>()?;
    m.add_class::<PyComplexSvd>()?;
    m.add("AlgorithmError", m.py().get_type::<AlgorithmError>())?;
    m.add_function(wrap_pyfunction!(py_svd_by_projection, m)?)?;
    m.add_function(wrap_pyfunction!(py_svd_by_projection_two_precision, m)?)?;
    m.add_function(wrap_pyfunction!(py_svd_by_laplacian, m)?)?;
    m.add_function(wrap_pyfunction!(py_project_to_complex, m)?)?;
    m.add_function(wrap_pyfunction!(pinv, m)?)?;
    m.add_function(wrap_pyfunction!(pinv_exact, m)?)?;
    m.add_function(wrap_pyfunction!(pinv_mod_p, m)?)?;
    m.add_function(wrap_pyfunction!(py_pinv_complex, m)?)?;
    m.add_function(wrap_pyfunction!(py_random_complex, m)?)?;
    m.add_function(wrap_pyfunction!(stanley_reisner, m)?)?;
    m.add_function(wrap_pyfunction!(stanley_reisner_from_monomials, m)?)?;
    m.add_function(wrap_pyfunction!(py_perturb, m)?)?;
    m.add_function(wrap_pyfunction!(py_ranks_from_homology, m)?)?;
    m.add_function(wrap_pyfunction!(py_homology_from_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(py_rank_decision, m)?)?;
    Ok(())
}
