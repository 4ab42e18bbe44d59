//! Acceptance gate. Prints one PASS/FAIL line per criterion.
//!
//! A criterion that cannot hold as stated for any correct implementation is
//! reported as FAIL with the reason; the test itself only fails when a
//! criterion fails for any other reason.

mod common;

use std::time::{Duration, Instant};

use chainsvd::bench::{table1_complex, time_pair, TABLE1_SHAPES, TABLE2_DRAWS};
use chainsvd::generators::{perturb, random_complex, stanley_reisner_chain, GeneratorConfig};
use chainsvd::matrix::{exact_rank, exact_rank_mod_p, sym_eig, DenseMatrix, PrimeFieldMatrix, RationalMatrix};
use chainsvd::pinv::{
    penrose_residuals, penrose_residuals_prime_field, penrose_residuals_rational, pinv_exact_rational,
    pinv_float, pinv_prime_field,
};
use chainsvd::{
    chain::laplacian_of, exact_homology, make_special_orthogonal, project_to_complex,
    ranks_from_homology, svd_by_laplacian, svd_by_projection, ChainComplex, ComplexSvd, Error,
    Thresholds,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Verdict {
    Pass(String),
    Fail(String),
    /// The literal check fails, and every failing item is of the kind
    /// explained in the message.
    Unattainable(String),
}

type Maps = Vec<DenseMatrix>;

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Feasible `(h, r)` for a complex of length 1..=3 with every `c_i ≤ 30`.
fn random_shape(rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    loop {
        let n = rng.random_range(1..=3usize);
        let h: Vec<usize> = (0..=n).map(|_| rng.random_range(0..=6)).collect();
        let r: Vec<usize> = (0..n).map(|_| rng.random_range(1..=12)).collect();
        let rk = |i: usize| if i == 0 || i > n { 0 } else { r[i - 1] };
        if (0..=n).all(|i| rk(i) + rk(i + 1) + h[i] <= 30) {
            return (h, r);
        }
    }
}

fn generated(h: &[usize], r: &[usize], seed: u64) -> (ChainComplex, Maps) {
    let exact = random_complex(h, r, &GeneratorConfig::with_seed(seed)).unwrap();
    let maps = exact.to_real().unwrap().real_maps().unwrap().to_vec();
    (exact, maps)
}

fn example_maps() -> Maps {
    real_maps()
}

fn golden_sigma_ok(d: &ComplexSvd) -> bool {
    d.profile.ranks == [2, 2, 2]
        && d.profile.homology == [1, 1, 1, 1]
        && d.singular_values.iter().zip(SIGMA).all(|(got, want)| {
            got.len() == 2 && got.iter().zip(want).all(|(g, w)| rel_err(*g, w) <= 5e-5)
        })
}

fn criterion_1() -> Verdict {
    let t = Thresholds::default();
    let maps = example_maps();
    let (p, tp) = timed(|| svd_by_projection(&maps, &t));
    let (l, tl) = timed(|| svd_by_laplacian(&maps, &t));
    let detail = format!("projection {tp:?}, laplacian {tl:?}");
    match (p, l) {
        (Ok(p), Ok(l)) if golden_sigma_ok(&p) && golden_sigma_ok(&l) => {
            if tp.as_secs_f64() < 0.1 && tl.as_secs_f64() < 0.1 {
                Verdict::Pass(detail)
            } else {
                Verdict::Fail(format!("too slow: {detail}"))
            }
        }
        (p, l) => Verdict::Fail(format!(
            "projection {:?}, laplacian {:?}",
            p.map(|d| d.singular_values),
            l.map(|d| d.singular_values)
        )),
    }
}

fn criterion_2() -> Verdict {
    let ((exact, float), elapsed) = timed(|| {
        let exact = pinv_exact_rational(&rational_maps()[0]);
        let float = pinv_float(&real_maps()[0], 2);
        (exact, float)
    });
    let exact_entry = exact.get(0, 0).to_string();
    if exact_entry != "5978/490373" {
        return Verdict::Fail(format!("exact (1,1) entry is {exact_entry}"));
    }
    if elapsed.as_secs_f64() >= 0.1 {
        return Verdict::Fail(format!("took {elapsed:?}"));
    }
    let float = match float {
        Ok(x) => x,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let mut worst: f64 = 0.0;
    let mut outside = 0;
    let mut rounding_only = true;
    for (i, row) in A1_PINV.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            let got = float.get(i, j);
            let err = rel_err(got, want);
            worst = worst.max(err);
            if err > 1e-6 {
                outside += 1;
                // the printout has six significant digits
                rounding_only &= format!("{got:.5e}") == format!("{want:.5e}");
            }
        }
    }
    if outside == 0 {
        Verdict::Pass(format!("exact 5978/490373, float within {worst:.2e}, {elapsed:?}"))
    } else if rounding_only {
        Verdict::Unattainable(format!(
            "exact entry 5978/490373 holds; {outside} of 15 float entries differ from the \
             printed 6-digit values by more than 1e-6 relative (max {worst:.2e}), but all 15 \
             agree once rounded to 6 significant digits, so the bound is below the printout's \
             own rounding"
        ))
    } else {
        Verdict::Fail(format!("{outside} float entries disagree beyond rounding (max {worst:.2e})"))
    }
}

fn criterion_3() -> Verdict {
    let t = Thresholds::default().with_rank_threshold(1e-2).unwrap();
    let base = real_complex();
    let seeds = 100u64;
    let (wrong, elapsed) = timed(|| {
        (0..seeds)
            .filter(|&seed| {
                let noisy = perturb(&base, 1e-3, seed).unwrap();
                svd_by_projection(noisy.real_maps().unwrap(), &t)
                    .map_or(true, |d| d.profile.homology != [1, 1, 1, 1])
            })
            .collect::<Vec<_>>()
    });
    let detail = format!("{}/{seeds} recovered h = (1,1,1,1) in {elapsed:?}", seeds as usize - wrong.len());
    if wrong.is_empty() && elapsed.as_secs_f64() < 5.0 {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(format!("{detail}; failing seeds {wrong:?}"))
    }
}

fn criterion_4() -> Verdict {
    let t = Thresholds::default();
    let mut inputs = vec![example_maps()];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    while inputs.len() < 21 {
        let (h, r) = random_shape(&mut rng);
        if h.iter().any(|&x| x > 0) {
            inputs.push(generated(&h, &r, rng.random()).1);
        }
    }
    let (mut worst_residual, mut worst_det, mut worst_change) = (0.0f64, 0.0f64, 0.0f64);
    for maps in &inputs {
        for d in [svd_by_projection(maps, &t), svd_by_laplacian(maps, &t)] {
            let d = match d {
                Ok(d) => d,
                Err(e) => return Verdict::Fail(e.to_string()),
            };
            worst_residual = worst_residual.max(d.normal_form_residual);
            let before = d.normal_form_residual;
            let s = match make_special_orthogonal(d) {
                Ok(s) => s,
                Err(e) => return Verdict::Fail(e.to_string()),
            };
            for u in &s.bases {
                worst_det = worst_det.max((u.determinant() - 1.0).abs());
            }
            worst_change = worst_change.max((s.normal_form_residual - before).abs());
        }
    }
    let detail = format!(
        "{} complexes x 2 methods: residual {worst_residual:.1e}, |det - 1| {worst_det:.1e}, change {worst_change:.1e}",
        inputs.len()
    );
    if worst_residual <= 1e-9 && worst_det <= 1e-10 && worst_change <= 1e-14 {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn appears_in(value: f64, spectrum: &[f64], tol: f64) -> bool {
    spectrum.iter().any(|&l| (l - value).abs() <= tol * value)
}

fn criterion_5() -> Verdict {
    let t = Thresholds::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut problems = Vec::new();
    let complexes = 200;
    for case in 0..complexes {
        let (h, r) = random_shape(&mut rng);
        let (exact, maps) = generated(&h, &r, rng.random());
        let oracle = exact_homology(&exact).unwrap();
        let d = svd_by_projection(&maps, &t).unwrap();
        let spectra: Vec<Vec<f64>> = (0..=maps.len())
            .map(|i| sym_eig(&laplacian_of(&maps, i).unwrap()).unwrap().0)
            .collect();
        for (level, sigma) in d.singular_values.iter().enumerate() {
            for s in sigma {
                let s2 = s * s;
                if !appears_in(s2, &spectra[level], 1e-6) || !appears_in(s2, &spectra[level + 1], 1e-6) {
                    problems.push(format!("case {case}: sigma^2 = {s2} at level {}", level + 1));
                }
            }
        }
        for (i, spectrum) in spectra.iter().enumerate() {
            let top = spectrum.first().copied().unwrap_or(0.0);
            let kernel = spectrum.iter().filter(|&&l| l <= 1e-8 * top).count();
            if kernel != oracle[i] {
                problems.push(format!("case {case}: kernel of Laplacian {i} is {kernel}, oracle {}", oracle[i]));
            }
        }
    }
    if problems.is_empty() {
        Verdict::Pass(format!("{complexes} complexes"))
    } else {
        Verdict::Fail(problems.join("; "))
    }
}

fn criterion_6() -> Verdict {
    let t = Thresholds::default();
    let mut cases = 0;
    let mut slow = Vec::new();
    let mut wrong = Vec::new();
    let mut aborted = 0;
    let mut laplacian_ok = 0;

    let mut check = |label: String, exact: &ChainComplex, table1: bool| {
        cases += 1;
        let oracle = exact_homology(exact).unwrap();
        let real = exact.to_real().unwrap();
        let maps = real.real_maps().unwrap();
        let (p, elapsed) = timed(|| svd_by_projection(maps, &t));
        if table1 && elapsed.as_secs_f64() >= 1.0 {
            slow.push(format!("{label} {elapsed:?}"));
        }
        if !p.is_ok_and(|d| d.profile.homology == oracle) {
            wrong.push(format!("projection on {label}"));
        }
        match svd_by_laplacian(maps, &t) {
            Ok(d) if d.profile.homology == oracle => laplacian_ok += 1,
            Err(Error::RepeatedEigenvalue { .. }) if !table1 => aborted += 1,
            other => wrong.push(format!("laplacian on {label}: {:?}", other.map(|d| d.profile.homology))),
        }
    };

    for k in 0..TABLE1_SHAPES.len() {
        for seed in 0..5u64 {
            let c = table1_complex(k, 1000 * seed + k as u64).unwrap();
            check(format!("table1 #{} seed {seed}", k + 1), &c, true);
        }
    }
    let draws = TABLE2_DRAWS.iter().copied().chain([(5, 4), (6, 8), (7, 12)]);
    for (vars, monomials) in draws {
        for seed in 0..5u64 {
            let c = stanley_reisner_chain(vars, monomials, &GeneratorConfig::with_seed(seed)).unwrap();
            check(format!("k={vars} N={monomials} seed {seed}"), &c, false);
        }
    }

    let detail = format!(
        "{cases} cases: projection matched the oracle on {}, laplacian matched {laplacian_ok}, \
         aborted on repeated eigenvalues {aborted}",
        cases - wrong.iter().filter(|w| w.starts_with("projection")).count()
    );
    if !wrong.is_empty() || !slow.is_empty() || cases < 50 {
        Verdict::Fail(format!("{detail}; wrong {wrong:?}; slow {slow:?}"))
    } else if aborted > 0 {
        Verdict::Unattainable(format!(
            "{detail}. Stanley-Reisner Laplacians have repeated non-zero eigenvalues, where the \
             Laplacian method must abort, so it cannot return a profile on those draws"
        ))
    } else {
        Verdict::Pass(detail)
    }
}

fn criterion_7() -> Verdict {
    let t = Thresholds::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for k in 0..TABLE1_SHAPES.len() {
        let c = table1_complex(k, k as u64).unwrap().to_real().unwrap();
        let (p, l) = time_pair(
            c.real_maps().unwrap(),
            30,
            |m| svd_by_projection(m, &t),
            |m| svd_by_laplacian(m, &t),
        );
        let ratio = p.time.as_secs_f64() / l.time.as_secs_f64();
        ok &= p.time < l.time && p.homology.is_ok() && l.homology.is_ok();
        lines.push(format!("#{} {ratio:.2}", k + 1));
    }
    let detail = format!("projection/laplacian time ratio {}", lines.join(", "));
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn criterion_8() -> Verdict {
    let t = Thresholds::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    let seeds = 100;
    for seed in 0..seeds {
        let (h, r) = random_shape(&mut rng);
        let (exact, _) = generated(&h, &r, rng.random());
        let noisy = perturb(&exact.to_real().unwrap(), 1e-3, seed).unwrap();
        let out = match project_to_complex(noisy.real_maps().unwrap(), &h) {
            Ok(out) => out,
            Err(e) => {
                problems.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let residual = ChainComplex::real(out.clone()).unwrap().validate();
        worst = worst.max(residual);
        let recovered = svd_by_projection(&out, &t).map(|d| d.profile.homology);
        if residual > 1e-12 || !recovered.as_ref().is_ok_and(|got| *got == h) {
            problems.push(format!("seed {seed}: residual {residual:e}, homology {recovered:?}, wanted {h:?}"));
        }
    }
    let maps = example_maps();
    for request in [vec![1, 0, 0, 0], vec![4, 0, 0, 0], vec![0, 0, 0, 4], vec![0, 6, 0, 0]] {
        match project_to_complex(&maps, &request) {
            Err(e) if e.to_string() == "The rank conditions cannot be satisfied." => {}
            other => problems.push(format!("request {request:?} gave {:?}", other.map(|_| ()))),
        }
    }
    if problems.is_empty() {
        Verdict::Pass(format!("{seeds} seeds, composition residual <= {worst:.1e}, infeasible requests rejected"))
    } else {
        Verdict::Fail(problems.join("; "))
    }
}

/// Integer `X·Y` with random shapes up to 12 and factor entries in `[-3, 3]`,
/// so every rank up to full occurs.
fn random_integer_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let m = rng.random_range(1..=12);
    let n = rng.random_range(1..=12);
    let inner = rng.random_range(0..=12);
    let x: Vec<Vec<i64>> = (0..m).map(|_| (0..inner).map(|_| rng.random_range(-3..=3)).collect()).collect();
    let y: Vec<Vec<i64>> = (0..inner).map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect()).collect();
    (0..m)
        .map(|i| (0..n).map(|j| (0..inner).map(|k| x[i][k] * y[k][j]).sum()).collect())
        .collect()
}

fn criterion_9() -> Verdict {
    const PRIMES: [u64; 6] = [2, 3, 5, 7, 101, 32003];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut problems = Vec::new();
    let matrices = 500;
    let (mut prime_ok, mut prime_refused) = (0, 0);
    let mut worst_float: f64 = 0.0;
    for case in 0..matrices {
        let rows = random_integer_matrix(&mut rng);
        let (m, n) = (rows.len(), rows[0].len());
        let q = RationalMatrix::from_integers(&rows);
        let x = pinv_exact_rational(&q);
        if penrose_residuals_rational(&q, &x).unwrap() != [0; 4] {
            problems.push(format!("Q case {case}"));
        }

        let rank = exact_rank(&q);
        let a = DenseMatrix::new(m, n, rows.iter().flatten().map(|&v| v as f64).collect()).unwrap();
        match pinv_float(&a, rank).and_then(|x| penrose_residuals(&a, &x)) {
            Ok(res) => {
                worst_float = res.iter().copied().fold(worst_float, f64::max);
                if res.iter().any(|&v| v > 1e-10) {
                    problems.push(format!("float case {case}: {res:?}"));
                }
            }
            Err(e) => problems.push(format!("float case {case}: {e}")),
        }

        // over F_p: draw primes until one admits a pseudoinverse, checking every refusal
        let data: Vec<i64> = rows.iter().flatten().copied().collect();
        let mut done = false;
        for p in PRIMES.iter().cycle().skip(case % PRIMES.len()).take(PRIMES.len()) {
            let a = PrimeFieldMatrix::new(m, n, *p, data.clone()).unwrap();
            match pinv_prime_field(&a) {
                Ok(x) => {
                    if penrose_residuals_prime_field(&a, &x).unwrap() != [0; 4] {
                        problems.push(format!("F_{p} case {case}"));
                    }
                    prime_ok += 1;
                    done = true;
                    break;
                }
                Err(Error::PenroseCondition { .. }) => {
                    let r = exact_rank_mod_p(&a);
                    let left = exact_rank_mod_p(&a.matmul(&a.transpose()));
                    let right = exact_rank_mod_p(&a.transpose().matmul(&a));
                    if left == r && right == r {
                        problems.push(format!("F_{p} case {case}: refused although it exists"));
                    }
                    prime_refused += 1;
                }
                Err(e) => problems.push(format!("F_{p} case {case}: {e}")),
            }
        }
        if !done {
            problems.push(format!("case {case}: no prime admits a pseudoinverse"));
        }
    }
    let detail = format!(
        "{matrices} matrices: Q exact, F_p exact on {prime_ok} ({prime_refused} correct refusals), float max {worst_float:.1e}"
    );
    if problems.is_empty() {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(format!("{detail}; {}", problems.join("; ")))
    }
}

fn criterion_10() -> Verdict {
    let t = Thresholds::default();
    let mut outcomes = Vec::new();
    for n in 2..=6 {
        let c = ChainComplex::real(vec![DenseMatrix::identity(n)]).unwrap();
        let runs: Vec<String> = (0..3)
            .map(|_| match svd_by_laplacian(c.real_maps().unwrap(), &t) {
                Err(e @ Error::RepeatedEigenvalue { .. }) => e.to_string(),
                other => format!("no abort: {:?}", other.map(|d| d.profile)),
            })
            .collect();
        let deterministic = runs.iter().all(|r| r == &runs[0]);
        if !deterministic || runs[0].starts_with("no abort") {
            return Verdict::Fail(format!("identity {n}x{n}: {runs:?}"));
        }
        outcomes.push(n);
    }
    Verdict::Pass(format!("identity maps of size {outcomes:?} abort identically on every run"))
}

fn acceptance() -> bool {
    // keep the log readable; the perturbed inputs trigger composition warnings
    std::env::set_var("CHAINSVD_QUIET", "1");
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("golden singular values", criterion_1),
        ("golden pseudoinverse", criterion_2),
        ("perturbation robustness", criterion_3),
        ("normal form and special orthogonal bases", criterion_4),
        ("Laplacian spectra", criterion_5),
        ("oracle equivalence", criterion_6),
        ("projection faster than Laplacian", criterion_7),
        ("projection to a complex", criterion_8),
        ("Penrose relations", criterion_9),
        ("Laplacian abort on the identity", criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let number = k + 1;
        match run() {
            Verdict::Pass(detail) => println!("criterion {number:>2} PASS  {name}: {detail}"),
            Verdict::Unattainable(detail) => {
                println!("criterion {number:>2} FAIL  {name}: unattainable as stated. {detail}")
            }
            Verdict::Fail(detail) => {
                println!("criterion {number:>2} FAIL  {name}: {detail}");
                unexpected.push(number);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria failed: {unexpected:?}");
    }
    unexpected.is_empty()
}

fn shapes_are_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..50 {
        let (h, r) = random_shape(&mut rng);
        let dims: Vec<usize> = (0..h.len())
            .map(|i| {
                let rk = |j: usize| if j == 0 || j > r.len() { 0 } else { r[j - 1] };
                rk(i) + rk(i + 1) + h[i]
            })
            .collect();
        assert_eq!(ranks_from_homology(&dims, &h).unwrap(), r);
        assert!(dims.iter().all(|&c| c <= 30));
    }
}

fn main() {
    shapes_are_feasible();
    if !acceptance() {
        std::process::exit(1);
    }
}
