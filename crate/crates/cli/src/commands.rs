use std::f64::consts::FRAC_PI_2;

use kesten::combinatorics::{moment_polynomial, walk_count_dp, WalkModel};
use kesten::randmat::{ensemble_run, EnsembleStatistics, HistogramConfig, ModelSpec, WindowMass};
use kesten::spectral::Atom;
use kesten::KestenMcKayLaw;
use serde::Serialize;

use crate::output::{emit, float, Table};
use crate::{usage, CliResult, DensityArgs, ModelChoice, MomentsArgs, SimulateArgs};

pub const MAX_ORDER: usize = 40;

/// `d = c + 1` when `c` is a positive integer small enough to count walks.
pub fn integer_degree(c: f64) -> Option<usize> {
    (c.fract() == 0.0 && (1.0..=1e6).contains(&c)).then(|| c as usize + 1)
}

pub fn law(c: f64) -> CliResult<KestenMcKayLaw> {
    KestenMcKayLaw::new(c).map_err(usage)
}

#[derive(Serialize)]
struct MomentRow {
    two_n: usize,
    polynomial: String,
    value: f64,
    walk_count: Option<String>,
    quadrature: f64,
}

#[derive(Serialize)]
struct MomentsDoc {
    c: f64,
    rows: Vec<MomentRow>,
}

pub fn moments(args: &MomentsArgs) -> CliResult<()> {
    if args.order > MAX_ORDER || !args.order.is_multiple_of(2) {
        return Err(usage(format!(
            "--order must be even and at most {MAX_ORDER}, got {}",
            args.order
        )));
    }
    let law = law(args.c)?;
    let degree = integer_degree(args.c);
    let rows: Vec<MomentRow> = (0..=args.order)
        .step_by(2)
        .map(|two_n| {
            let poly = moment_polynomial(two_n).expect("even order");
            MomentRow {
                two_n,
                value: poly.eval_f64(args.c),
                polynomial: poly.to_string(),
                walk_count: degree
                    .map(|d| walk_count_dp(WalkModel::new(d, two_n).expect("d >= 2")).to_string()),
                quadrature: law.moment(two_n as u32),
            }
        })
        .collect();
    let doc = MomentsDoc { c: args.c, rows };
    emit(&args.output, "moments", &doc, || Table {
        header: &["two_n", "polynomial", "value", "walk_count", "quadrature"],
        rows: doc
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.two_n.to_string(),
                    r.polynomial.clone(),
                    float(r.value),
                    r.walk_count.clone().unwrap_or_default(),
                    float(r.quadrature),
                ]
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct GridPoint {
    t: f64,
    density: f64,
}

#[derive(Serialize)]
struct DensityDoc {
    c: f64,
    support_radius: f64,
    continuous_mass: f64,
    grid: Vec<GridPoint>,
    atoms: Vec<Atom>,
}

/// Points `t = 2 sqrt(c) sin(theta)` at the midpoints of a uniform split of
/// `(-pi/2, pi/2)`; they crowd toward the edges and avoid them exactly.
fn support_grid(law: &KestenMcKayLaw, points: usize) -> Vec<GridPoint> {
    let r = law.support_radius();
    (0..points)
        .map(|i| {
            let theta = -FRAC_PI_2 + (i as f64 + 0.5) * std::f64::consts::PI / points as f64;
            let t = r * theta.sin();
            GridPoint {
                t,
                density: law.density(t).expect("interior point"),
            }
        })
        .collect()
}

pub fn density(args: &DensityArgs) -> CliResult<()> {
    if args.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let law = law(args.c)?;
    let doc = DensityDoc {
        c: args.c,
        support_radius: law.support_radius(),
        continuous_mass: law.continuous_mass(),
        grid: support_grid(&law, args.points),
        atoms: law.atoms(),
    };
    emit(&args.output, "density", &doc, || {
        let mut rows: Vec<Vec<String>> = doc
            .grid
            .iter()
            .map(|p| vec!["density".into(), float(p.t), float(p.density)])
            .collect();
        rows.extend(
            doc.atoms
                .iter()
                .map(|a| vec!["atom".into(), float(a.location), float(a.weight)]),
        );
        Table {
            header: &["kind", "t", "value"],
            rows,
        }
    })
}

#[derive(Serialize)]
struct HistogramDoc {
    edges: Vec<f64>,
    counts: Vec<u64>,
    masses: Vec<f64>,
    densities: Vec<f64>,
    overlay_density: Vec<f64>,
    outside: u64,
}

#[derive(Serialize)]
struct MomentDoc {
    order: u32,
    mean: f64,
    standard_error: Option<f64>,
    limit: f64,
}

#[derive(Serialize)]
struct SimulateDoc {
    model: ModelSpec,
    dimension: usize,
    c_limit: f64,
    c_effective: f64,
    realizations: u64,
    histogram: HistogramDoc,
    moments: Vec<MomentDoc>,
    atom_windows: Vec<WindowMass>,
}

pub fn model_spec(args: &SimulateArgs) -> CliResult<ModelSpec> {
    match args.model {
        ModelChoice::Compressed => {
            let c = args
                .c
                .ok_or_else(|| usage("--c is required for the compressed model"))?;
            ModelSpec::compressed(args.n, c, args.seed, args.realizations)
        }
        ModelChoice::Sum => ModelSpec::orthogonal_sum(args.n, args.l, args.seed, args.realizations),
    }
    .map_err(usage)
}

/// Law density at each bin centre; `inf` where it diverges.
pub fn overlay(law: &KestenMcKayLaw, stats: &EnsembleStatistics) -> Vec<f64> {
    stats
        .histogram
        .centers()
        .iter()
        .map(|&t| law.density(t).unwrap_or(f64::INFINITY))
        .collect()
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let spec = model_spec(args)?;
    let config = HistogramConfig::for_model(&spec).with_bins(args.bins);
    config.validate().map_err(usage)?;
    let stats = ensemble_run(&spec, &config).map_err(usage)?;
    let c = spec.limit_c();
    let law = law(c)?;
    let overlay_density = overlay(&law, &stats);
    let moments: Vec<MomentDoc> = stats
        .moments
        .iter()
        .map(|m| MomentDoc {
            order: m.order,
            mean: m.mean,
            standard_error: m.standard_error,
            limit: moment_polynomial(m.order as usize)
                .expect("even")
                .eval_f64(c),
        })
        .collect();
    eprintln!(
        "dimension {}, c = {c}, effective c = {:.6}, {} realizations",
        stats.dimension, stats.c_effective, stats.realizations
    );
    for m in &moments {
        let se = m
            .standard_error
            .map_or("n/a".to_string(), |s| format!("{s:.2e}"));
        eprintln!(
            "m{}: {:.6} (se {se}), limit {:.6}",
            m.order, m.mean, m.limit
        );
    }
    for w in &stats.atom_windows {
        eprintln!(
            "mass within {} +- {}: {:.5}",
            w.center, w.half_width, w.mean
        );
    }
    let histogram = &stats.histogram;
    let doc = SimulateDoc {
        model: spec,
        dimension: stats.dimension,
        c_limit: c,
        c_effective: stats.c_effective,
        realizations: stats.realizations,
        histogram: HistogramDoc {
            edges: histogram.edges.clone(),
            counts: histogram.counts.clone(),
            masses: histogram.masses.clone(),
            densities: histogram.densities(),
            overlay_density,
            outside: histogram.outside,
        },
        moments,
        atom_windows: stats.atom_windows.clone(),
    };
    emit(&args.output, "simulate", &doc, || {
        let h = &doc.histogram;
        Table {
            header: &[
                "bin_left",
                "bin_right",
                "mass",
                "density",
                "overlay_density",
            ],
            rows: (0..h.masses.len())
                .map(|i| {
                    vec![
                        float(h.edges[i]),
                        float(h.edges[i + 1]),
                        float(h.masses[i]),
                        float(h.densities[i]),
                        float(h.overlay_density[i]),
                    ]
                })
                .collect(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_degrees() {
        assert_eq!(integer_degree(3.0), Some(4));
        assert_eq!(integer_degree(1.0), Some(2));
        assert_eq!(integer_degree(2.5), None);
        assert_eq!(integer_degree(0.25), None);
    }

    #[test]
    fn grid_avoids_arcsine_edges() {
        let law = law(1.0).unwrap();
        let grid = support_grid(&law, 101);
        assert!(grid.iter().all(|p| p.density.is_finite()));
        assert!(grid.windows(2).all(|w| w[0].t < w[1].t));
    }
}
