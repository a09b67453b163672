//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Duration;

use kesten::combinatorics::{
    c_pascal_row, enumerate_closed_walks, irreducible_polynomial, moment_polynomial, syt_count,
    walk_count_by_returns, walk_count_dp, PartitionShape, WalkModel,
};
use kesten::randmat::{ensemble_run, EnsembleStatistics, HistogramConfig, ModelSpec};
use kesten::series::{
    catalan_equation_holds, moment_series_matches_polynomials, returns_coefficient, DEFAULT_ORDER,
};
use kesten::spectral::{bernoulli_transforms, semicircle_distance};
use kesten::{ComplexPoint, KestenMcKayLaw, MomentPolynomial};
use kesten_suite::{run, Check};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TEST_CS: [f64; 6] = [0.25, 5.0 / 6.0, 1.0, 6.0 / 5.0, 2.0, 4.0];
const MC_SEED: u64 = 1;

fn model(d: usize, len: usize) -> WalkModel {
    WalkModel::new(d, len).unwrap()
}

fn cx(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::new(re, im)
}

fn exact_counts(ch: &mut Check) {
    for (len, want) in [(2, 4u32), (4, 28), (6, 232)] {
        let got = walk_count_dp(model(4, len));
        ch.require(got == BigUint::from(want), || {
            format!("d=4 len={len}: {got}")
        });
    }
    for (two_n, want) in [(2, 4u32), (4, 12), (6, 72)] {
        let got = irreducible_polynomial(two_n).unwrap().eval_exact(3);
        ch.require(got == BigUint::from(want), || {
            format!("irreducible 2n={two_n} at c=3: {got}")
        });
    }
}

fn polynomial_tables(ch: &mut Check) {
    let table: [(usize, &[u64]); 4] =
        [(0, &[1]), (2, &[1, 1]), (4, &[1, 3, 2]), (6, &[1, 5, 9, 5])];
    for (two_n, coeffs) in table {
        let got = moment_polynomial(two_n).unwrap();
        ch.require(got == MomentPolynomial::from_u64s(coeffs), || {
            format!("m_{two_n} = {got}")
        });
    }
    for n in 0..=20 {
        for (j, entry) in c_pascal_row(n).iter().enumerate() {
            let expected: Vec<BigUint> = (0..=j)
                .map(|i| {
                    if i == j {
                        syt_count(PartitionShape::new(n - j, j))
                    } else {
                        BigUint::from(0u32)
                    }
                })
                .collect();
            ch.require(*entry == MomentPolynomial::from_counts(expected), || {
                format!("row {n} entry {j} = {entry}")
            });
        }
    }
}

fn oracle_equivalence(ch: &mut Check) {
    for d in 2..=5usize {
        let c = (d - 1) as u64;
        for two_n in (2..=10).step_by(2) {
            let m = model(d, two_n);
            let walked = enumerate_closed_walks(m).unwrap();
            let dp = walk_count_dp(m);
            let poly = moment_polynomial(two_n).unwrap().eval_exact(c);
            ch.require(walked == dp && dp == poly, || {
                format!("d={d} 2n={two_n}: walked {walked}, dp {dp}, polynomial {poly}")
            });
            for k in 1..=two_n / 2 {
                let by_dp = walk_count_by_returns(m, k).unwrap();
                let by_series = returns_coefficient(k, two_n).unwrap().eval_exact(c);
                ch.require(by_dp == by_series, || {
                    format!("d={d} 2n={two_n} k={k}: dp {by_dp}, series {by_series}")
                });
            }
        }
    }
}

fn series_layer(ch: &mut Check) {
    ch.require(moment_series_matches_polynomials(DEFAULT_ORDER), || {
        format!("moment series differs from the polynomials below order {DEFAULT_ORDER}")
    });
    ch.require(catalan_equation_holds(DEFAULT_ORDER), || {
        "z N^2 + 1 != N".to_string()
    });
}

fn quadrature_moments(ch: &mut Check) {
    let mut worst = 0.0f64;
    for c in TEST_CS {
        let law = KestenMcKayLaw::new(c).unwrap();
        for order in (0..=12).step_by(2) {
            let exact = moment_polynomial(order as usize).unwrap().eval_f64(c);
            let rel = (law.moment(order) - exact).abs() / exact;
            worst = worst.max(rel);
            ch.require(rel < 1e-7, || {
                format!("c={c} order={order}: rel err {rel:e}")
            });
        }
    }
    ch.note(format!("worst relative error {worst:.2e}"));
}

fn mass_identities(ch: &mut Check) {
    for c in TEST_CS {
        let law = KestenMcKayLaw::new(c).unwrap();
        let mass = law.continuous_mass();
        ch.require((mass - c.min(1.0)).abs() < 1e-10, || {
            format!("c={c}: continuous mass {mass}")
        });
        let atoms = law.atoms();
        if c < 1.0 {
            let ok = atoms.len() == 2
                && atoms.iter().all(|a| {
                    (a.location.abs() - (1.0 + c)).abs() < 1e-15
                        && (a.weight - (1.0 - c) / 2.0).abs() < 1e-15
                })
                && atoms[0].location * atoms[1].location < 0.0;
            ch.require(ok, || format!("c={c}: atoms {atoms:?}"));
        } else {
            ch.require(atoms.is_empty(), || {
                format!("c={c}: unexpected atoms {atoms:?}")
            });
        }
        let total = mass + atoms.iter().map(|a| a.weight).sum::<f64>();
        ch.require((total - 1.0).abs() < 1e-10, || {
            format!("c={c}: total mass {total}")
        });
    }
    let atoms = KestenMcKayLaw::new(0.25).unwrap().atoms();
    let ok = atoms
        .iter()
        .all(|a| (a.location.abs() - 1.25).abs() < 1e-15 && (a.weight - 0.375).abs() < 1e-15);
    ch.require(ok, || format!("c=1/4 atoms {atoms:?}"));
}

fn inversion(ch: &mut Check) {
    for c in TEST_CS {
        let law = KestenMcKayLaw::new(c).unwrap();
        for i in 0..20 {
            let t = law.support_radius() * (-0.9 + 1.8 * i as f64 / 19.0);
            let exact = law.density(t).unwrap();
            let errs: Vec<f64> = [1e-3, 1e-4, 1e-5]
                .iter()
                .map(|&eps| (law.stieltjes_invert(t, eps).unwrap() - exact).abs())
                .collect();
            ch.require(errs[0] > errs[1] && errs[1] > errs[2], || {
                format!("c={c} t={t:.4}: errors {errs:?} not decreasing")
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let z = cx(rng.random_range(-8.0..8.0), rng.random_range(1e-4..8.0));
            let g = law.cauchy_transform(z).unwrap();
            ch.require(g.im < 0.0, || format!("c={c} z={z}: Im G = {}", g.im));
        }
    }
}

fn transforms(ch: &mut Check) {
    let law = KestenMcKayLaw::new(2.0).unwrap();
    for z in [cx(4.0, 1.0), cx(6.0, 0.0), cx(0.0, 10.0)] {
        let back = law.k_transform(law.cauchy_transform(z).unwrap()).unwrap();
        ch.require((back - z).norm() < 1e-10, || {
            format!("c=2: K(G({z})) = {back}")
        });
    }
    for c in TEST_CS {
        let law = KestenMcKayLaw::new(c).unwrap();
        for w in [
            cx(0.05, 0.0),
            cx(0.02, -0.03),
            cx(-0.04, 0.01),
            cx(0.0, -0.05),
        ] {
            let back = law.cauchy_transform(law.k_transform(w).unwrap()).unwrap();
            ch.require((back - w).norm() < 1e-10, || {
                format!("c={c}: G(K({w})) = {back}")
            });
        }
    }
    for c in [0.25, 2.0, 4.0] {
        let law = KestenMcKayLaw::new(c).unwrap();
        for z in [cx(0.1, 0.0), cx(0.0, 0.3), cx(0.2, 0.1)] {
            let r = law.r_transform(z).unwrap();
            let b = bernoulli_transforms(z).unwrap().r;
            let err = (r - (1.0 + c) * b).norm();
            ch.require(err <= 1e-12, || {
                format!("c={c} z={z}: |R - (1+c) R_B| = {err:e}")
            });
        }
    }
}

/// `|mean - expected| <= 3 SE`, noted with the z-score.
fn within_three_se(
    ch: &mut Check,
    label: &str,
    stats: &EnsembleStatistics,
    order: u32,
    expected: f64,
) {
    let m = stats.moment(order).expect("moment requested");
    let se = m.standard_error.expect("several realizations");
    let z = (m.mean - expected) / se;
    ch.note(format!(
        "{label} m{order}: {:.6} vs {expected:.6} (se {se:.2e}, z {z:+.2})",
        m.mean
    ));
    ch.require(z.abs() <= 3.0, || format!("{label} m{order}: z = {z:+.2}"));
}

fn finite_n_note(ch: &mut Check, label: &str, stats: &EnsembleStatistics) {
    let m = stats.moment(2).unwrap();
    let expected = stats.model.finite_second_moment();
    let z = (m.mean - expected) / m.standard_error.unwrap();
    ch.note(format!(
        "{label} m2 against its exact finite-n mean {expected:.6}: z {z:+.2}"
    ));
}

fn compressed_monte_carlo(ch: &mut Check) {
    for c in [0.25, 4.0] {
        let spec = ModelSpec::compressed(1000, c, MC_SEED, 500).unwrap();
        let stats = ensemble_run(&spec, &HistogramConfig::for_model(&spec)).unwrap();
        let label = format!("c={c}");
        for order in [2u32, 4, 6] {
            let exact = moment_polynomial(order as usize).unwrap().eval_f64(c);
            within_three_se(ch, &label, &stats, order, exact);
        }
        finite_n_note(ch, &label, &stats);
        if c < 1.0 {
            let window = stats
                .atom_windows
                .iter()
                .find(|w| w.center > 0.0)
                .expect("window at +(1+c)");
            ch.note(format!(
                "c={c} mass in [{}+-{}]: {:.5}",
                window.center, window.half_width, window.mean
            ));
            ch.require((window.mean - 0.375).abs() <= 0.02, || {
                format!("atom window mass {}", window.mean)
            });
        } else {
            let edge = 2.0 * c.sqrt() + 0.1;
            ch.note(format!("c={c} histogram mass beyond +-{edge:.2}: {:.5}", {
                let h = &stats.histogram;
                h.edges
                    .windows(2)
                    .zip(&h.masses)
                    .filter(|(e, _)| e[1] <= -edge || e[0] >= edge)
                    .map(|(_, m)| m)
                    .sum::<f64>()
            }));
        }
    }
}

fn orthogonal_sums(ch: &mut Check) {
    let spec = ModelSpec::orthogonal_sum(200, 1, MC_SEED, 200).unwrap();
    let stats = ensemble_run(&spec, &HistogramConfig::for_model(&spec)).unwrap();
    within_three_se(ch, "l=1", &stats, 4, 6.0);
    finite_n_note(ch, "l=1", &stats);
    let spec = ModelSpec::orthogonal_sum(200, 2, MC_SEED, 200).unwrap();
    let stats = ensemble_run(&spec, &HistogramConfig::for_model(&spec)).unwrap();
    for order in [2u32, 4, 6] {
        let exact = moment_polynomial(order as usize).unwrap().eval_f64(3.0);
        within_three_se(ch, "l=2", &stats, order, exact);
    }
    finite_n_note(ch, "l=2", &stats);
}

fn free_clt(ch: &mut Check) {
    let distances: Vec<f64> = [4.0, 16.0, 64.0]
        .iter()
        .map(|&c| semicircle_distance(c, 1001).unwrap())
        .collect();
    ch.note(format!(
        "sup |mu_c - eta| for c = 4, 16, 64: {distances:.4?}"
    ));
    ch.require(
        distances[0] > distances[1] && distances[1] > distances[2],
        || "distances not strictly decreasing".to_string(),
    );
    let law = KestenMcKayLaw::new(64.0).unwrap();
    let mu0 = law.scaled_density(0.0).unwrap();
    ch.note(format!("mu_64(0) = {mu0:.5}, 1/pi = {:.5}", 1.0 / PI));
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run(1, "exact walk counts", secs(1), exact_counts),
        run(2, "moment polynomial tables", secs(1), polynomial_tables),
        run(3, "walk oracles agree", secs(30), oracle_equivalence),
        run(4, "generating series", secs(5), series_layer),
        run(5, "quadrature moments", secs(5), quadrature_moments),
        run(6, "mass identities", secs(1), mass_identities),
        run(7, "Stieltjes inversion", secs(5), inversion),
        run(8, "K and R transforms", secs(1), transforms),
        run(
            9,
            "compressed model Monte Carlo",
            secs(300),
            compressed_monte_carlo,
        ),
        run(10, "sums of orthogonals", secs(60), orthogonal_sums),
        run(11, "free central limit", secs(1), free_clt),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
