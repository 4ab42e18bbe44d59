//! Benchmark suites: generated complexes with known homology, run through
//! both algorithms and checked against the exact oracle.

use std::time::{Duration, Instant};

use crate::chain::{exact_homology, ranks_from_homology, ChainComplex, Thresholds};
use crate::error::Result;
use crate::generators::{random_complex, stanley_reisner_chain, GeneratorConfig};
use crate::matrix::DenseMatrix;
use crate::svd::{svd_by_laplacian, svd_by_projection, ComplexSvd};

/// `(c_0..c_3, h_0..h_3)` of the random-complex suite.
pub const TABLE1_SHAPES: [([usize; 4], [usize; 4]); 6] = [
    ([7, 21, 28, 14], [2, 3, 2, 1]),
    ([8, 27, 35, 17], [3, 6, 4, 2]),
    ([9, 33, 42, 20], [4, 9, 6, 3]),
    ([10, 39, 49, 23], [5, 12, 8, 4]),
    ([11, 45, 56, 26], [6, 15, 10, 5]),
    ([12, 51, 63, 29], [7, 18, 12, 6]),
];

/// `(variables, monomials)` of the Stanley–Reisner suite.
pub const TABLE2_DRAWS: [(usize, usize); 3] = [(8, 20), (9, 21), (10, 23)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Table1,
    Table2,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "table1" => Ok(Suite::Table1),
            "table2" => Ok(Suite::Table2),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MethodOutcome {
    /// Homology found, or the error message.
    pub homology: std::result::Result<Vec<usize>, String>,
    /// Fastest of the repeats.
    pub time: Duration,
}

impl MethodOutcome {
    pub fn agrees(&self, oracle: &[usize]) -> bool {
        self.homology.as_deref().is_ok_and(|h| h == oracle)
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub label: String,
    pub dims: Vec<usize>,
    pub oracle: Vec<usize>,
    pub projection: MethodOutcome,
    pub laplacian: Option<MethodOutcome>,
}

impl BenchRow {
    pub fn pass(&self) -> bool {
        self.projection.agrees(&self.oracle)
            && self.laplacian.as_ref().is_none_or(|l| l.agrees(&self.oracle))
    }
}

pub fn time_method(
    maps: &[DenseMatrix],
    repeats: usize,
    run: impl Fn(&[DenseMatrix]) -> Result<ComplexSvd>,
) -> MethodOutcome {
    let mut outcome = MethodOutcome {
        homology: Err(String::from("not run")),
        time: Duration::MAX,
    };
    for _ in 0..repeats.max(1) {
        timed_run(maps, &run, &mut outcome);
    }
    outcome
}

/// Time both methods with their runs interleaved, so drift in machine load
/// hits both alike.
pub fn time_pair(
    maps: &[DenseMatrix],
    repeats: usize,
    first: impl Fn(&[DenseMatrix]) -> Result<ComplexSvd>,
    second: impl Fn(&[DenseMatrix]) -> Result<ComplexSvd>,
) -> (MethodOutcome, MethodOutcome) {
    let fresh = || MethodOutcome {
        homology: Err(String::from("not run")),
        time: Duration::MAX,
    };
    let (mut a, mut b) = (fresh(), fresh());
    for _ in 0..repeats.max(1) {
        timed_run(maps, &first, &mut a);
        timed_run(maps, &second, &mut b);
    }
    (a, b)
}

fn timed_run(
    maps: &[DenseMatrix],
    run: &impl Fn(&[DenseMatrix]) -> Result<ComplexSvd>,
    outcome: &mut MethodOutcome,
) {
    let start = Instant::now();
    let out = run(maps);
    outcome.time = outcome.time.min(start.elapsed());
    outcome.homology = out.map(|d| d.profile.homology).map_err(|e| e.to_string());
}

/// Generated complex for shape `index` (0-based) of `TABLE1_SHAPES`.
pub fn table1_complex(index: usize, seed: u64) -> Result<ChainComplex> {
    let (dims, h) = TABLE1_SHAPES[index];
    let ranks = ranks_from_homology(&dims, &h)?;
    random_complex(&h, &ranks, &GeneratorConfig::with_seed(seed))
}

fn run_case(
    label: String,
    exact: &ChainComplex,
    repeats: usize,
    with_laplacian: bool,
) -> Result<BenchRow> {
    let oracle = exact_homology(exact)?;
    let real = exact.to_real()?;
    let maps = real.real_maps()?;
    let t = Thresholds::default();
    let project = |m: &[DenseMatrix]| svd_by_projection(m, &t);
    let (projection, laplacian) = if with_laplacian {
        let (p, l) = time_pair(maps, repeats, project, |m| svd_by_laplacian(m, &t));
        (p, Some(l))
    } else {
        (time_method(maps, repeats, project), None)
    };
    Ok(BenchRow {
        label,
        dims: exact.ranks().to_vec(),
        oracle,
        projection,
        laplacian,
    })
}

/// Run a suite. Cases are seeded from `seed` and their position, so the
/// homology columns are identical across runs and repeat counts.
pub fn run_suite(suite: Suite, repeats: usize, seed: u64) -> Result<Vec<BenchRow>> {
    match suite {
        Suite::Table1 => (0..TABLE1_SHAPES.len())
            .map(|k| {
                let c = table1_complex(k, seed.wrapping_add(k as u64))?;
                run_case(format!("random #{}", k + 1), &c, repeats, true)
            })
            .collect(),
        Suite::Table2 => TABLE2_DRAWS
            .iter()
            .enumerate()
            .map(|(k, &(vars, monomials))| {
                let cfg = GeneratorConfig::with_seed(seed.wrapping_add(k as u64));
                let c = stanley_reisner_chain(vars, monomials, &cfg)?;
                run_case(format!("k={vars} N={monomials}"), &c, repeats, false)
            })
            .collect(),
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn cell(o: &MethodOutcome) -> String {
    match &o.homology {
        Ok(h) => format!("{:>10.5} s  h={}", o.time.as_secs_f64(), join(h)),
        Err(e) => format!("{:>10.5} s  error: {e}", o.time.as_secs_f64()),
    }
}

pub fn format_report(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&format!(
            "{:<14} c={:<28} h={:<20} projection {}",
            row.label,
            join(&row.dims),
            join(&row.oracle),
            cell(&row.projection)
        ));
        if let Some(l) = &row.laplacian {
            out.push_str(&format!("  laplacian {}", cell(l)));
        }
        out.push_str(if row.pass() { "  PASS\n" } else { "  FAIL\n" });
    }
    out
}
