//! The `verify` report: every row compares two independently computed
//! quantities against a declared tolerance.

use std::fmt::Display;

use kesten::combinatorics::{
    enumerate_closed_walks, moment_polynomial, walk_count_by_returns, walk_count_dp, WalkModel,
    ENUMERATION_MAX_DEGREE, ENUMERATION_MAX_LENGTH,
};
use kesten::randmat::{ensemble_run, HistogramConfig, ModelSpec};
use kesten::series::{
    catalan_equation_holds, moment_series_matches_polynomials, returns_coefficient, DEFAULT_ORDER,
};
use kesten::spectral::{bernoulli_transforms, semicircle_distance};
use num_complex::Complex64;
use serde::Serialize;

use crate::commands::{integer_degree, law, MAX_ORDER};
use crate::output::{emit, float, Table};
use crate::{usage, CliResult, VerifyArgs};

/// Relative band for the simulated m4 and m6 against their limits. The
/// finite-size bias of these moments is of order 1/n, a few percent at the
/// default n = 400.
const SIMULATED_MOMENT_BAND: f64 = 0.05;
/// Allowed deviation of the simulated atom-window mass from (1 - c)/2.
const ATOM_MASS_BAND: f64 = 0.02;
/// Largest walk length checked by plain dynamic programming when `c` is an
/// integer too large to enumerate.
const DP_MAX_LENGTH: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Default)]
struct Report {
    rows: Vec<ReportRow>,
}

impl Report {
    fn exact(&mut self, label: impl Into<String>, expected: impl Display, computed: impl Display) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let as_f64 = |s: &str| s.parse::<f64>().unwrap_or(f64::NAN);
        let abs_error = (as_f64(&expected) - as_f64(&computed)).abs();
        self.rows.push(ReportRow {
            label: label.into(),
            pass: expected == computed,
            abs_error: if expected == computed { 0.0 } else { abs_error },
            expected,
            computed,
            tolerance: 0.0,
        });
    }

    fn close(&mut self, label: impl Into<String>, expected: f64, computed: f64, tolerance: f64) {
        self.described(label, float(expected), expected, computed, tolerance);
    }

    fn described(
        &mut self,
        label: impl Into<String>,
        expected_text: String,
        expected: f64,
        computed: f64,
        tolerance: f64,
    ) {
        let abs_error = (expected - computed).abs();
        self.rows.push(ReportRow {
            label: label.into(),
            expected: expected_text,
            computed: float(computed),
            abs_error,
            tolerance,
            pass: abs_error <= tolerance,
        });
    }

    fn holds(&mut self, label: impl Into<String>, ok: bool) {
        self.exact(label, true, ok);
    }
}

fn exact_rows(report: &mut Report, c: f64) {
    for (len, want) in [(2, 4u32), (4, 28), (6, 232)] {
        let got = walk_count_dp(WalkModel::new(4, len).expect("d = 4"));
        report.exact(format!("walk count d=4 length {len}"), want, got);
    }
    report.holds(
        format!("series coefficients equal moment polynomials below z^{DEFAULT_ORDER}"),
        moment_series_matches_polynomials(DEFAULT_ORDER),
    );
    report.holds(
        format!("z N^2 + 1 = N below z^{DEFAULT_ORDER}"),
        catalan_equation_holds(DEFAULT_ORDER),
    );
    let Some(d) = integer_degree(c) else {
        return;
    };
    let cu = (d - 1) as u64;
    let enumerable = d <= ENUMERATION_MAX_DEGREE;
    let max_len = if enumerable {
        ENUMERATION_MAX_LENGTH
    } else {
        DP_MAX_LENGTH
    };
    for two_n in (2..=max_len).step_by(2) {
        let model = WalkModel::new(d, two_n).expect("d >= 2");
        let poly = moment_polynomial(two_n).expect("even").eval_exact(cu);
        let dp = walk_count_dp(model);
        report.exact(format!("m_{two_n}({cu}): walk DP vs polynomial"), &poly, dp);
        if enumerable {
            let walked = enumerate_closed_walks(model).expect("within enumeration limits");
            report.exact(
                format!("m_{two_n}({cu}): enumeration vs polynomial"),
                &poly,
                walked,
            );
            for k in 1..=two_n / 2 {
                let by_dp = walk_count_by_returns(model, k).expect("k >= 1");
                let by_series = returns_coefficient(k, two_n).expect("valid").eval_exact(cu);
                report.exact(
                    format!("walks of length {two_n} with {k} returns: DP vs series"),
                    by_series,
                    by_dp,
                );
            }
        }
    }
}

fn analytic_rows(report: &mut Report, c: f64, order: usize, epsilon: f64) -> CliResult<()> {
    let law = law(c)?;
    for two_n in (0..=order).step_by(2) {
        let exact = moment_polynomial(two_n).expect("even").eval_f64(c);
        report.close(
            format!("m_{two_n}: quadrature vs polynomial"),
            exact,
            law.moment(two_n as u32),
            1e-7 * exact,
        );
    }
    report.close(
        "continuous mass = min(1, c)",
        c.min(1.0),
        law.continuous_mass(),
        1e-10,
    );
    let atoms = law.atoms();
    for atom in &atoms {
        report.described(
            format!("atom weight at {}", atom.location),
            format!("(1 - c)/2 = {}", (1.0 - c) / 2.0),
            (1.0 - c) / 2.0,
            atom.weight,
            1e-15,
        );
    }
    let total = law.continuous_mass() + atoms.iter().map(|a| a.weight).sum::<f64>();
    report.close("total mass", 1.0, total, 1e-10);

    let t = 0.5 * law.support_radius();
    let density = law.density(t).map_err(usage)?;
    let inverted = law.stieltjes_invert(t, epsilon).map_err(usage)?;
    report.close(
        format!("Stieltjes inversion at t = {t}, epsilon = {epsilon:e}"),
        density,
        inverted,
        100.0 * epsilon,
    );
    report.holds(
        format!("scaling identity rho_c(t) = rho_1/c(t/c) at t = {t}"),
        law.scaling_identity_holds(t),
    );

    let worst_im = (0..200)
        .map(|i| {
            // A fixed spread of points over the upper half-plane.
            let re = 8.0 * ((i as f64 * 0.618_033_988_75).fract() * 2.0 - 1.0);
            let im = 1e-3 + 8.0 * (i as f64 * 0.414_213_562_37).fract();
            law.cauchy_transform(Complex64::new(re, im))
                .map(|g| g.im)
                .unwrap_or(f64::INFINITY)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    report.exact(
        "Im G < 0 at 200 upper half-plane points",
        true,
        worst_im < 0.0,
    );

    let r = law.support_radius();
    for z in [
        Complex64::new(r + 2.0, 1.0),
        Complex64::new(3.0 * (1.0 + c), 0.0),
        Complex64::new(0.0, 10.0 * (1.0 + c)),
    ] {
        let back = law
            .cauchy_transform(z)
            .and_then(|g| law.k_transform(g))
            .map_err(usage)?;
        report.close(
            format!("|K(G(z)) - z| at z = {z}"),
            0.0,
            (back - z).norm(),
            1e-10,
        );
    }
    for z in [
        Complex64::new(0.1, 0.0),
        Complex64::new(0.0, 0.3),
        Complex64::new(0.2, 0.1),
    ] {
        let rk = law.r_transform(z).map_err(usage)?;
        let rb = bernoulli_transforms(z).map_err(usage)?.r;
        report.close(
            format!("|R(z) - (1 + c) R_Bernoulli(z)| at z = {z}"),
            0.0,
            (rk - (1.0 + c) * rb).norm(),
            1e-12,
        );
    }
    let distances: Vec<f64> = [4.0, 16.0, 64.0]
        .iter()
        .map(|&c| semicircle_distance(c, 1001).map_err(usage))
        .collect::<CliResult<_>>()?;
    report.holds(
        format!("sup |mu_c - eta| decreases over c = 4, 16, 64 ({distances:.4?})"),
        distances[0] > distances[1] && distances[1] > distances[2],
    );
    Ok(())
}

fn simulation_rows(report: &mut Report, args: &VerifyArgs) -> CliResult<()> {
    let spec =
        ModelSpec::compressed(args.n, args.c, args.seed, args.realizations).map_err(usage)?;
    if args.realizations < 2 {
        return Err(usage("simulation rows need at least 2 realizations"));
    }
    let stats = ensemble_run(&spec, &HistogramConfig::for_model(&spec)).map_err(usage)?;
    let tag = format!(
        "n={} k={} R={}",
        spec.n, stats.dimension, stats.realizations
    );
    let m2 = stats.moment(2).expect("default orders");
    let se = m2.standard_error.expect("R >= 2");
    report.described(
        format!("simulated m2 vs exact finite-n mean, 3 SE ({tag})"),
        float(spec.finite_second_moment()),
        spec.finite_second_moment(),
        m2.mean,
        3.0 * se,
    );
    for order in [4u32, 6] {
        let m = stats.moment(order).expect("default orders");
        let limit = moment_polynomial(order as usize)
            .expect("even")
            .eval_f64(args.c);
        report.close(
            format!("simulated m{order} vs limit, {SIMULATED_MOMENT_BAND} relative ({tag})"),
            limit,
            m.mean,
            SIMULATED_MOMENT_BAND * limit,
        );
    }
    for window in &stats.atom_windows {
        let weight = (1.0 - args.c) / 2.0;
        report.described(
            format!(
                "simulated mass within {} +- {} ({tag})",
                window.center, window.half_width
            ),
            format!("(1 - c)/2 = {weight}"),
            weight,
            window.mean,
            ATOM_MASS_BAND,
        );
    }
    Ok(())
}

/// Runs the suite, writes the report and returns whether every row passed.
pub fn run(args: &VerifyArgs) -> CliResult<bool> {
    if args.order > MAX_ORDER || !args.order.is_multiple_of(2) {
        return Err(usage(format!(
            "--order must be even and at most {MAX_ORDER}, got {}",
            args.order
        )));
    }
    if !(args.epsilon.is_finite() && args.epsilon > 0.0) {
        return Err(usage("--epsilon must be positive"));
    }
    let mut report = Report::default();
    exact_rows(&mut report, args.c);
    analytic_rows(&mut report, args.c, args.order, args.epsilon)?;
    if !args.skip_simulation {
        simulation_rows(&mut report, args)?;
    }
    let rows = report.rows;
    let passed = rows.iter().filter(|r| r.pass).count();
    for row in rows.iter().filter(|r| !r.pass) {
        eprintln!(
            "FAIL {}: expected {}, computed {}",
            row.label, row.expected, row.computed
        );
    }
    eprintln!("{passed}/{} rows passed", rows.len());

    #[derive(Serialize)]
    struct Doc<'a> {
        c: f64,
        rows: &'a [ReportRow],
        all_pass: bool,
    }
    let all_pass = passed == rows.len();
    let doc = Doc {
        c: args.c,
        rows: &rows,
        all_pass,
    };
    emit(&args.output, "verify", &doc, || Table {
        header: &[
            "label",
            "expected",
            "computed",
            "abs_error",
            "tolerance",
            "pass",
        ],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.label.clone(),
                    r.expected.clone(),
                    r.computed.clone(),
                    float(r.abs_error),
                    float(r.tolerance),
                    r.pass.to_string(),
                ]
            })
            .collect(),
    })?;
    Ok(all_pass)
}
