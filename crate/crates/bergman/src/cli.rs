//! Experiment orchestration behind the `bergman` binary: each runner loads
//! its inputs, produces CSV (plus plot series where applicable), handles
//! golden recording/verification, and returns a process exit code.
//!
//! Exit codes: 0 success, 1 acceptance/verification failure, 2 configuration
//! error, 3 numeric error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::{
    involution_apply, pseudo_ball_tau_mass, pseudo_ball_volume, Automorphism, CPoint,
};
use crate::config::{ExperimentConfig, GoldenMode};
use crate::error::{Error, Result};
use crate::functionals::{
    comparability_report, lemma10_local_check, lemma9_check, sharpness_profile, embedding_check,
    WeightParams,
};
use crate::holo::{
    invariant_gradient_definitional, invariant_gradient_norm, DerivativeBundle, HoloFunction,
};
use crate::kernels::{forelli_rudin_ratio, operator_bound_probe, reproducing_residual};
use crate::quad::{
    ball_monomial_norm, default_cutoffs, GrowthClass, IntegralEstimate, Method, QuadratureSpec,
    WeightedMeasure,
};
use crate::report::{
    envelope_within, fmt_float, golden_exact, parse_golden_rows, write_series, Csv, GoldenOutcome,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Maps library errors onto the exit-code contract.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Config(_) | Error::InvalidParameter(_) | Error::Io(_) => {
            EXIT_CONFIG
        }
        Error::Numeric(_) | Error::DimensionMismatch { .. } | Error::OutsideBall { .. } => {
            EXIT_NUMERIC
        }
    }
}

fn default_output_dir() -> PathBuf {
    std::env::var("BERGMAN_OUTPUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|_| PathBuf::from("out"))
}

fn default_golden_dir() -> PathBuf {
    PathBuf::from("goldens/v1")
}

fn params_key(p: &WeightParams) -> String {
    format!("n={} p={} q={} alpha={}", p.n, p.p, p.q, p.alpha)
}

/// `compare`: comparability rows + envelope summary over the config grid.
pub fn run_compare(config_path: &Path, seed: Option<u64>, verify_flag: bool) -> Result<i32> {
    let mut cfg = ExperimentConfig::load(config_path)?;
    if let Some(s) = seed {
        cfg = cfg.with_seed(s);
    }
    if cfg.params.is_empty() || cfg.family.is_empty() {
        return Err(Error::Config(
            "compare needs at least one [params] and one [function] block".into(),
        ));
    }
    let verify = verify_flag || cfg.golden_mode == GoldenMode::Verify;

    let mut rows_csv = Csv::new(
        &cfg.echo,
        &[
            "label", "n", "p", "q", "alpha", "in_range", "f0_pow_p", "i1", "i1_stderr", "i2",
            "i2_stderr", "i3", "i3_stderr", "i4", "i4_stderr",
        ],
    );
    let mut summary_csv = Csv::new(
        &cfg.echo,
        &["n", "p", "q", "alpha", "k", "ratio_min", "ratio_max"],
    );

    for params in &cfg.params {
        let report = comparability_report(&cfg.family, params, &cfg.spec)?;
        for row in &report.rows {
            let mut cells = vec![
                row.label.clone(),
                params.n.to_string(),
                fmt_float(params.p),
                fmt_float(params.q),
                fmt_float(params.alpha),
                report.in_range.to_string(),
                fmt_float(row.f0_pow_p),
            ];
            for est in &row.estimates {
                cells.push(fmt_float(est.value));
                cells.push(fmt_float(est.stderr));
            }
            rows_csv.push_row(cells);
        }
        for k in 0..3 {
            summary_csv.push_row(vec![
                params.n.to_string(),
                fmt_float(params.p),
                fmt_float(params.q),
                fmt_float(params.alpha),
                (k + 2).to_string(),
                fmt_float(report.ratio_min[k]),
                fmt_float(report.ratio_max[k]),
            ]);
        }
        println!(
            "compare {}: {} rows, envelopes k=2..4 within [{:.3e}, {:.3e}]",
            params_key(params),
            report.rows.len(),
            report.ratio_min.iter().cloned().fold(f64::INFINITY, f64::min),
            report.ratio_max.iter().cloned().fold(0.0, f64::max),
        );
    }

    rows_csv.write_to(&cfg.output_dir.join("compare.csv"))?;
    summary_csv.write_to(&cfg.output_dir.join("compare_summary.csv"))?;

    let rows_golden = cfg.golden_dir.join("compare.csv");
    let summary_golden = cfg.golden_dir.join("compare_summary.csv");
    if !verify {
        golden_exact(&rows_golden, &rows_csv.render(), true)?;
        golden_exact(&summary_golden, &summary_csv.render(), true)?;
        println!("goldens recorded under {}", cfg.golden_dir.display());
        return Ok(EXIT_OK);
    }

    // Rows are deterministic at fixed seed: exact match. Envelopes tolerate
    // 1.05× slack so a re-recorded family doesn't thrash.
    let mut ok = true;
    match golden_exact(&rows_golden, &rows_csv.render(), false)? {
        GoldenOutcome::Matched => println!("compare.csv matches golden"),
        outcome => {
            println!("compare.csv: golden {outcome:?}");
            ok = false;
        }
    }
    let recorded = std::fs::read_to_string(&summary_golden)
        .map_err(|e| Error::Config(format!("golden {} unreadable: {e}", summary_golden.display())))?;
    let recorded_rows = parse_golden_rows(&recorded);
    let current_rows = parse_golden_rows(&summary_csv.render());
    if recorded_rows.len() != current_rows.len() {
        println!("compare_summary.csv: row count changed");
        ok = false;
    } else {
        for (rec, cur) in recorded_rows.iter().zip(&current_rows) {
            let rmin: f64 = rec[5].parse().unwrap_or(f64::NAN);
            let rmax: f64 = rec[6].parse().unwrap_or(f64::NAN);
            let cmin: f64 = cur[5].parse().unwrap_or(f64::NAN);
            let cmax: f64 = cur[6].parse().unwrap_or(f64::NAN);
            if !envelope_within(rmin, rmax, cmin, cmax, 1.05) {
                println!(
                    "envelope widened at {:?}: recorded [{rmin}, {rmax}], current [{cmin}, {cmax}]",
                    &rec[..5]
                );
                ok = false;
            }
        }
    }
    if ok {
        println!("verify: ok");
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_FAILURE)
    }
}

fn expected_class_label(p: f64, q: f64) -> &'static str {
    if q < p + 2.0 - 1e-12 {
        "convergent"
    } else if q <= p + 2.0 + 1e-12 {
        "log-divergent"
    } else {
        "power-divergent"
    }
}

fn class_detail(class: &GrowthClass) -> f64 {
    match class {
        GrowthClass::Convergent => 0.0,
        GrowthClass::LogDivergent { slope } => *slope,
        GrowthClass::PowerDivergent { exponent } => *exponent,
    }
}

/// `sharpness`: truncation profiles of the extremal example over the q-grid.
pub fn run_sharpness(config_path: &Path) -> Result<i32> {
    let cfg = ExperimentConfig::load(config_path)?;
    if cfg.params.is_empty() {
        return Err(Error::Config("sharpness needs [params] blocks".into()));
    }
    let cutoffs = default_cutoffs();
    let mut csv = Csv::new(
        &cfg.echo,
        &["n", "p", "q", "alpha", "expected", "observed", "fit", "series_file"],
    );
    let mut manifest = String::new();
    let mut all_match = true;

    for (idx, params) in cfg.params.iter().enumerate() {
        let prof = sharpness_profile(params.p, params.alpha, params.n, params.q, &cutoffs)?;
        let expected = expected_class_label(params.p, params.q);
        let observed = prof.class.label();
        if expected != observed {
            all_match = false;
        }
        let series_name = format!("sharpness_{idx:02}.dat");
        write_series(&cfg.output_dir.join(&series_name), &prof.entries)?;
        manifest.push_str(&format!(
            "{series_name} n={} p={} q={} alpha={}\n",
            params.n, params.p, params.q, params.alpha
        ));
        csv.push_row(vec![
            params.n.to_string(),
            fmt_float(params.p),
            fmt_float(params.q),
            fmt_float(params.alpha),
            expected.to_string(),
            observed.to_string(),
            fmt_float(class_detail(&prof.class)),
            series_name,
        ]);
        println!(
            "sharpness {}: expected {expected}, observed {observed}",
            params_key(params)
        );
    }

    csv.write_to(&cfg.output_dir.join("sharpness.csv"))?;
    std::fs::write(cfg.output_dir.join("sharpness_manifest.txt"), manifest)?;

    let golden = cfg.golden_dir.join("sharpness.csv");
    match cfg.golden_mode {
        GoldenMode::Record => {
            golden_exact(&golden, &csv.render(), true)?;
            Ok(EXIT_OK)
        }
        GoldenMode::Verify => {
            let matched = golden_exact(&golden, &csv.render(), false)? == GoldenOutcome::Matched;
            if matched && all_match {
                println!("verify: ok");
                Ok(EXIT_OK)
            } else {
                if !all_match {
                    println!("verify: classification mismatch");
                }
                if !matched {
                    println!("verify: golden mismatch");
                }
                Ok(EXIT_FAILURE)
            }
        }
    }
}

struct CheckSink {
    csv: Csv,
    failures: usize,
}

impl CheckSink {
    fn new(echo: &BTreeMap<String, String>) -> Self {
        Self {
            csv: Csv::new(echo, &["lemma", "check", "value", "threshold", "pass"]),
            failures: 0,
        }
    }

    fn push(&mut self, lemma: u32, check: &str, value: f64, threshold: f64, pass: bool) {
        if !pass {
            self.failures += 1;
            println!("lemma {lemma}: FAIL {check} (value {value:e}, threshold {threshold:e})");
        }
        self.csv.push_row(vec![
            lemma.to_string(),
            check.to_string(),
            fmt_float(value),
            fmt_float(threshold),
            pass.to_string(),
        ]);
    }
}

fn random_interior(rng: &mut ChaCha8Rng, n: usize, max_norm: f64) -> CPoint {
    loop {
        let coords: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let p = CPoint::new(coords);
        if p.norm() < 1.0 {
            let scale = max_norm * rng.random::<f64>().powf(1.0 / (2 * n) as f64) / p.norm().max(1e-9);
            let scaled = CPoint::new(p.coords().iter().map(|c| c * scale).collect());
            return scaled;
        }
    }
}

fn random_function(rng: &mut ChaCha8Rng, n: usize) -> HoloFunction {
    if rng.random::<f64>() < 0.7 {
        let terms = rng.random_range(1..=4usize);
        let terms: Vec<(Vec<u32>, Complex64)> = (0..terms)
            .map(|_| {
                let m: Vec<u32> = (0..n).map(|_| rng.random_range(0..=3u32)).collect();
                let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                (m, c)
            })
            .collect();
        HoloFunction::Polynomial { n, terms }
    } else {
        let center = random_interior(rng, n, 0.6);
        let s = rng.random_range(0.5..3.0);
        HoloFunction::kernel_power(center, s, Complex64::new(1.0, 0.0))
    }
}

fn standard_family(n: usize) -> Vec<(String, HoloFunction)> {
    let one = Complex64::new(1.0, 0.0);
    let mut fam = vec![
        ("one".to_string(), HoloFunction::constant(n, one)),
        ("z1".to_string(), HoloFunction::coordinate(n, 0)),
        (
            "z1sq_shift".to_string(),
            HoloFunction::Polynomial {
                n,
                terms: vec![
                    ({
                        let mut m = vec![0u32; n];
                        m[0] = 2;
                        m
                    }, one),
                    (vec![0u32; n], Complex64::new(0.5, 0.0)),
                ],
            },
        ),
    ];
    let mut center = vec![0.0; n];
    center[0] = 0.5;
    fam.push((
        "kernel_half".to_string(),
        HoloFunction::kernel_power(CPoint::from_reals(&center), 1.0, one),
    ));
    fam
}

fn check_lemma3(sink: &mut CheckSink) -> Result<()> {
    let spec = QuadratureSpec::product(64, 16);
    for (label, f) in standard_family(1) {
        for p in [0.5, 1.0] {
            for alpha in [0.0, 1.0] {
                let r = embedding_check(&f, p, alpha, &spec)?;
                sink.push(
                    3,
                    &format!("ratio {label} p={p} alpha={alpha}"),
                    r,
                    f64::INFINITY,
                    r.is_finite() && r > 0.0,
                );
            }
        }
    }
    Ok(())
}

pub fn lemma4_grid() -> Vec<(f64, f64, f64, f64)> {
    let mut grid = Vec::new();
    for a in [-1.0, 0.0, 0.25] {
        for b in [-0.5, 0.0, 0.5] {
            for p in [1.0, 2.0] {
                grid.push((a, b, p, 0.0));
            }
        }
    }
    grid
}

fn check_lemma4(sink: &mut CheckSink) -> Result<()> {
    let mut matches = 0usize;
    let grid = lemma4_grid();
    let total = grid.len();
    for (a, b, p, alpha) in grid {
        let probe = operator_bound_probe(a, b, p, alpha)?;
        let observed_bounded =
            probe.verdict == crate::kernels::ProbeVerdict::BoundedConsistent;
        let ok = observed_bounded == probe.predicted_bounded;
        if ok {
            matches += 1;
        }
        sink.push(
            4,
            &format!("probe a={a} b={b} p={p} alpha={alpha}"),
            probe.max_ratio,
            f64::INFINITY,
            ok,
        );
    }
    sink.push(4, "verdicts matching criterion", matches as f64, total as f64, matches == total);
    Ok(())
}

fn check_lemma5(sink: &mut CheckSink) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut chain_violations = 0usize;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=2usize);
        let f = random_function(&mut rng, n);
        let z = random_interior(&mut rng, n, 0.95);
        let b = DerivativeBundle::compute(&f, &z)?;
        let s = 1.0 - z.norm_sq();
        let scale = 1.0 + b.grad_norm;
        if s * b.radial.norm() > s * b.grad_norm + 1e-9 * scale
            || s * b.grad_norm > b.inv_grad_norm + 1e-9 * scale
        {
            chain_violations += 1;
        }
    }
    sink.push(5, "chain violations on 1e4 samples", chain_violations as f64, 0.0, chain_violations == 0);

    let mut max_rel = 0.0f64;
    for _ in 0..300 {
        let n = rng.random_range(1..=2usize);
        let f = random_function(&mut rng, n);
        let z = random_interior(&mut rng, n, 0.9);
        let ident = invariant_gradient_norm(&f, &z)?;
        let defn = invariant_gradient_definitional(&f, &z)?;
        max_rel = max_rel.max((ident - defn).abs() / (1.0 + defn));
    }
    sink.push(5, "identity vs definitional max rel diff", max_rel, 1e-5, max_rel < 1e-5);

    let mut max_inv = 0.0f64;
    for _ in 0..1_000 {
        let n = rng.random_range(1..=2usize);
        let f = random_function(&mut rng, n);
        let a = random_interior(&mut rng, n, 0.7);
        let z = random_interior(&mut rng, n, 0.7);
        let composed = HoloFunction::composed(Automorphism::involution(a.clone()), f.clone());
        let lhs = invariant_gradient_definitional(&composed, &z)?;
        let rhs = invariant_gradient_norm(&f, &involution_apply(&a, &z)?)?;
        max_inv = max_inv.max((lhs - rhs).abs() / (1.0 + rhs));
    }
    sink.push(5, "moebius invariance max rel diff", max_inv, 1e-5, max_inv < 1e-5);
    Ok(())
}

fn monomials_up_to(n: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if n == 1 {
        for d in 0..=degree {
            out.push(vec![d]);
        }
    } else {
        for d1 in 0..=degree {
            for d2 in 0..=(degree - d1) {
                out.push(vec![d1, d2]);
            }
        }
    }
    out
}

fn check_lemma6(sink: &mut CheckSink) -> Result<()> {
    let spec = QuadratureSpec::product(32, 16);
    for n in [1usize, 2] {
        let mut z = vec![0.0; n];
        z[0] = 0.5;
        if n == 2 {
            z[1] = -0.2;
        }
        let z = CPoint::from_reals(&z);
        for alpha in [0.0, 1.0] {
            let mut max_residual = 0.0f64;
            for m in monomials_up_to(n, 4) {
                let f = HoloFunction::monomial(n, m, Complex64::new(1.0, 0.0));
                max_residual = max_residual.max(reproducing_residual(&f, &z, alpha, &spec)?);
            }
            sink.push(
                6,
                &format!("max residual n={n} alpha={alpha}"),
                max_residual,
                1e-3,
                max_residual < 1e-3,
            );
        }
    }
    Ok(())
}

fn check_lemma7(sink: &mut CheckSink) -> Result<()> {
    let spec = QuadratureSpec::product(96, 256);
    for alpha in [0.0, 1.0] {
        for t in [0.5, 1.0, 2.0] {
            let mut max_inner = 0.0f64;
            let mut max_outer = 0.0f64;
            for r in [0.5, 0.7, 0.9, 0.95, 0.99] {
                let ratio =
                    forelli_rudin_ratio(&CPoint::from_reals(&[r]), alpha, t, &spec)?;
                if r <= 0.9 {
                    max_inner = max_inner.max(ratio);
                }
                max_outer = max_outer.max(ratio);
            }
            // The normalized integral approaches its boundary limit like
            // (1−|z|²)^t, so for t < 1 the 0.9 → 0.99 growth genuinely
            // exceeds 1.5 (exact value ≈ 1.61 at α=1, t=0.5); allow 2.
            let threshold = if t < 1.0 { 2.0 } else { 1.5 };
            sink.push(
                7,
                &format!("ratio growth alpha={alpha} t={t}"),
                max_outer / max_inner,
                threshold,
                max_outer <= threshold * max_inner,
            );
        }
    }
    Ok(())
}

fn check_lemma8(sink: &mut CheckSink) -> Result<()> {
    let spec = QuadratureSpec::monte_carlo(200_000, 8);
    for n in [1usize, 2] {
        let mut ratios = Vec::new();
        for r in [0.0, 0.3, 0.6, 0.9] {
            let mut z = vec![0.0; n];
            z[0] = r;
            let z = CPoint::from_reals(&z);
            let vol = pseudo_ball_volume(&z, 0.5, &spec)?;
            let ratio = vol.value / (1.0 - z.norm_sq()).powi(n as i32 + 1);
            ratios.push(ratio);
        }
        let spread = ratios.iter().cloned().fold(0.0, f64::max)
            / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        sink.push(8, &format!("volume ratio spread n={n}"), spread, 10.0, spread < 10.0);

        let mut reference: Option<IntegralEstimate> = None;
        let mut worst_sigma = 0.0f64;
        for r in [0.0, 0.3, 0.6, 0.9] {
            let mut z = vec![0.0; n];
            z[0] = r;
            let z = CPoint::from_reals(&z);
            let mass = pseudo_ball_tau_mass(&z, 0.25, &spec)?;
            match &reference {
                None => reference = Some(mass),
                Some(base) => {
                    let sigma = (mass.value - base.value).abs()
                        / mass.stderr.hypot(base.stderr).max(1e-12);
                    worst_sigma = worst_sigma.max(sigma);
                }
            }
        }
        sink.push(8, &format!("tau mass constancy n={n} (sigma)"), worst_sigma, 3.0, worst_sigma < 3.0);
    }
    Ok(())
}

fn check_lemma9(sink: &mut CheckSink) -> Result<()> {
    let spec = QuadratureSpec::product(48, 16);
    for (label, f) in standard_family(1) {
        for p in [1.0, 2.0] {
            let (r1, r2) = lemma9_check(&f, p, &spec)?;
            sink.push(
                9,
                &format!("ratios {label} p={p}"),
                r1.max(r2),
                f64::INFINITY,
                r1.is_finite() && r2.is_finite() && r1 > 0.0 && r2 > 0.0,
            );
        }
    }
    // oracle instance: f(z)=z, p=2 → 3/2 and 2/3
    let (r1, r2) = lemma9_check(&HoloFunction::coordinate(1, 0), 2.0, &spec)?;
    sink.push(9, "oracle f=z p=2 lhs/rhs", r1, 1.5, (r1 - 1.5).abs() < 1e-6);
    sink.push(9, "oracle f=z p=2 rhs/lhs", r2, 2.0 / 3.0, (r2 - 2.0 / 3.0).abs() < 1e-6);
    Ok(())
}

fn check_lemma10(sink: &mut CheckSink) -> Result<()> {
    let spec = QuadratureSpec::monte_carlo(400_000, 10);
    let z1 = HoloFunction::coordinate(2, 0);

    let chk = lemma10_local_check(&z1, 1.0, 2.0, 0.0, &spec)?;
    sink.push(
        10,
        "f=z1 p=1 q=2 ratio finite",
        chk.ratio,
        f64::INFINITY,
        chk.ratio.is_finite() && !chk.numerator_class.is_divergent(),
    );

    let chk = lemma10_local_check(&z1, 1.0, 3.0, 0.0, &spec)?;
    sink.push(
        10,
        "f=z1 p=1 q=3 numerator divergence flagged",
        class_detail(&chk.numerator_class),
        f64::INFINITY,
        chk.numerator_class.is_divergent(),
    );

    let one = HoloFunction::constant(2, Complex64::new(1.0, 0.0));
    let chk = lemma10_local_check(&one, 2.0, 1.0, 0.0, &spec)?;
    sink.push(10, "f=1 numerator", chk.numerator, 0.0, chk.numerator.abs() < 1e-12);
    Ok(())
}

/// `lemma-checks`: one section per requested lemma, CSV + golden handling.
pub fn run_lemma_checks(lemmas: &[u32]) -> Result<i32> {
    for l in lemmas {
        if !(3..=10).contains(l) {
            return Err(Error::Config(format!("no check for lemma {l}; supported 3..10")));
        }
    }
    let mut echo = BTreeMap::new();
    echo.insert("command".to_string(), "lemma-checks".to_string());
    echo.insert(
        "lemmas".to_string(),
        lemmas
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    let mut sink = CheckSink::new(&echo);
    for l in lemmas {
        match l {
            3 => check_lemma3(&mut sink)?,
            4 => check_lemma4(&mut sink)?,
            5 => check_lemma5(&mut sink)?,
            6 => check_lemma6(&mut sink)?,
            7 => check_lemma7(&mut sink)?,
            8 => check_lemma8(&mut sink)?,
            9 => check_lemma9(&mut sink)?,
            10 => check_lemma10(&mut sink)?,
            _ => unreachable!(),
        }
        println!("lemma {l}: done");
    }

    let out = default_output_dir().join("lemma_checks.csv");
    sink.csv.write_to(&out)?;
    let golden = default_golden_dir().join(format!(
        "lemma_checks_{}.csv",
        lemmas
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join("_")
    ));
    let mut golden_ok = true;
    if golden.exists() {
        golden_ok = golden_exact(&golden, &sink.csv.render(), false)? == GoldenOutcome::Matched;
        println!(
            "golden {}: {}",
            golden.display(),
            if golden_ok { "match" } else { "MISMATCH" }
        );
    } else {
        golden_exact(&golden, &sink.csv.render(), true)?;
        println!("golden recorded at {}", golden.display());
    }

    if sink.failures == 0 && golden_ok {
        println!("all checks passed");
        Ok(EXIT_OK)
    } else {
        println!("{} check(s) failed", sink.failures);
        Ok(EXIT_FAILURE)
    }
}

/// `operator-probe`: Lemma 4 verdict grid from a whitespace-separated file of
/// `a b p alpha` rows.
pub fn run_operator_probe(grid_path: &Path) -> Result<i32> {
    let text = std::fs::read_to_string(grid_path)?;
    let mut echo = BTreeMap::new();
    echo.insert("command".to_string(), "operator-probe".to_string());
    echo.insert("grid".to_string(), grid_path.display().to_string());
    let mut csv = Csv::new(
        &echo,
        &["a", "b", "p", "alpha", "predicted", "observed", "max_ratio"],
    );
    let mut mismatches = 0usize;
    let mut total = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|e| Error::Parse {
                    line: idx + 1,
                    column: 1,
                    message: format!("bad grid value `{t}`: {e}"),
                })
            })
            .collect::<Result<_>>()?;
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: idx + 1,
                column: 1,
                message: format!("expected 4 columns (a b p alpha), got {}", fields.len()),
            });
        }
        let probe = operator_bound_probe(fields[0], fields[1], fields[2], fields[3])?;
        let predicted = if probe.predicted_bounded {
            "bounded-consistent"
        } else {
            "growth-detected"
        };
        let observed = probe.verdict.label();
        total += 1;
        if predicted != observed {
            mismatches += 1;
        }
        csv.push_row(vec![
            fmt_float(fields[0]),
            fmt_float(fields[1]),
            fmt_float(fields[2]),
            fmt_float(fields[3]),
            predicted.to_string(),
            observed.to_string(),
            fmt_float(probe.max_ratio),
        ]);
        println!(
            "probe a={} b={} p={} alpha={}: predicted {predicted}, observed {observed}",
            fields[0], fields[1], fields[2], fields[3]
        );
    }
    csv.write_to(&default_output_dir().join("operator_probe.csv"))?;
    println!("{}/{} verdicts match the criterion", total - mismatches, total);
    Ok(if mismatches == 0 { EXIT_OK } else { EXIT_FAILURE })
}

struct BenchCase {
    name: &'static str,
    n: usize,
    alpha: f64,
    exact: Option<f64>,
    f: fn(&CPoint) -> f64,
}

fn bench_case(name: &str) -> Result<BenchCase> {
    match name {
        "unit" => Ok(BenchCase {
            name: "unit",
            n: 2,
            alpha: 0.5,
            exact: Some(1.0),
            f: |_| 1.0,
        }),
        "coordinate-moment" => Ok(BenchCase {
            name: "coordinate-moment",
            n: 2,
            alpha: 1.0,
            exact: Some(ball_monomial_norm(&[1, 0], 2, 1.0).unwrap()),
            f: |z| z.coord(0).norm_sqr(),
        }),
        "boundary-weight" => Ok(BenchCase {
            name: "boundary-weight",
            n: 1,
            alpha: 0.0,
            // ∫ (1−|z|²)^{−1/2} dv = ∫₀¹ (1−u)^{−1/2} du = 2
            exact: Some(2.0),
            f: |z| (1.0 - z.norm_sq()).sqrt().recip(),
        }),
        other => Err(Error::Config(format!(
            "unknown integrand `{other}`; expected unit|coordinate-moment|boundary-weight"
        ))),
    }
}

/// `quadrature-bench`: one integrand across the requested methods.
pub fn run_quadrature_bench(integrand: &str, methods: &str) -> Result<i32> {
    let case = bench_case(integrand)?;
    let methods: Vec<Method> = if methods == "all" {
        vec![Method::ProductRule, Method::MonteCarlo, Method::StratifiedMc]
    } else {
        methods
            .split(',')
            .map(Method::parse)
            .collect::<Result<_>>()?
    };
    let measure = WeightedMeasure::new(case.n, case.alpha)?;
    let mut echo = BTreeMap::new();
    echo.insert("command".to_string(), "quadrature-bench".to_string());
    echo.insert("integrand".to_string(), case.name.to_string());
    let mut csv = Csv::new(
        &echo,
        &["integrand", "method", "value", "stderr", "samples", "exact", "abs_error"],
    );
    for method in methods {
        let spec = match method {
            Method::ProductRule => QuadratureSpec::product(64, 32),
            Method::MonteCarlo => QuadratureSpec::monte_carlo(400_000, 1),
            Method::StratifiedMc => QuadratureSpec::stratified(400_000, 1),
        };
        let est = crate::quad::integrate_ball(case.f, &measure, &spec)?;
        let (exact_s, err_s) = match case.exact {
            Some(x) => (fmt_float(x), fmt_float((est.value - x).abs())),
            None => ("".to_string(), "".to_string()),
        };
        println!(
            "{} via {}: value {:.10e} stderr {:.3e} samples {}",
            case.name,
            method.name(),
            est.value,
            est.stderr,
            est.samples_used
        );
        csv.push_row(vec![
            case.name.to_string(),
            method.name().to_string(),
            fmt_float(est.value),
            fmt_float(est.stderr),
            est.samples_used.to_string(),
            exact_s,
            err_s,
        ]);
    }
    csv.write_to(&default_output_dir().join("quadrature_bench.csv"))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        assert_eq!(exit_code_for(&Error::Config("x".into())), EXIT_CONFIG);
        assert_eq!(
            exit_code_for(&Error::Parse {
                line: 1,
                column: 1,
                message: "x".into()
            }),
            EXIT_CONFIG
        );
        assert_eq!(exit_code_for(&Error::Numeric("x".into())), EXIT_NUMERIC);
    }

    #[test]
    fn grid_straddles_both_boundaries() {
        let grid = lemma4_grid();
        assert!(grid.len() >= 12);
        // a-side boundary failure: −pa = α+1 at (a=−1, p=1)
        assert!(grid.iter().any(|&(a, _, p, al)| -p * a == al + 1.0));
        // b-side boundary failure: α+1 = p(b+1) at (b=0, p=1)
        assert!(grid.iter().any(|&(_, b, p, al)| al + 1.0 == p * (b + 1.0)));
        // clearly bounded point
        assert!(grid
            .iter()
            .any(|&(a, b, p, al)| -p * a < al + 1.0 && al + 1.0 < p * (b + 1.0)));
    }

    #[test]
    fn bench_cases_resolve() {
        assert!(bench_case("unit").is_ok());
        assert!(bench_case("coordinate-moment").is_ok());
        assert!(bench_case("boundary-weight").is_ok());
        assert!(bench_case("nope").is_err());
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_up_to(1, 4).len(), 5);
        assert_eq!(monomials_up_to(2, 4).len(), 15);
    }
}
