//! The Kesten-McKay law for real `c > 0`: density, atoms, quadrature
//! moments, and its transforms (see [`transforms`]).
//!
//! For `c >= 1` the law is the absolutely continuous density
//!
//! ```text
//! rho_c(t) = (1 + c) / (2 pi) * sqrt(4c - t^2) / ((1 + c)^2 - t^2),  |t| <= 2 sqrt(c)
//! ```
//!
//! For `0 < c < 1` the same density only carries mass `c`; the remaining
//! `1 - c` sits in two atoms at `+-(1 + c)`.

pub mod transforms;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::quadrature::GaussLegendre;

pub use transforms::{bernoulli_transforms, BernoulliTransforms};

/// Argument of the Cauchy, K and R transforms.
pub type ComplexPoint = Complex64;

/// Gauss-Legendre nodes used for moments when nothing else is requested.
pub const DEFAULT_QUADRATURE_NODES: usize = 256;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SpectralError {
    #[error("tree parameter must be positive and finite, got {0}")]
    InvalidC(f64),
    #[error("the rescaled law needs c >= 1, got {0}")]
    CBelowOne(f64),
    #[error("density diverges at t = {0} (c = 1 support edge)")]
    Divergent(f64),
    #[error("{z} is a pole of the transform")]
    Pole { z: Complex64 },
    #[error("{z} lies on the branch cut [-{radius}, {radius}]")]
    OnBranchCut { z: Complex64, radius: f64 },
    #[error("argument must be finite, got {0}")]
    NonFinite(Complex64),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
}

pub type Result<T> = std::result::Result<T, SpectralError>;

/// A point mass.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct KestenMcKayLaw {
    c: f64,
    quadrature: GaussLegendre,
}

impl KestenMcKayLaw {
    pub fn new(c: f64) -> Result<Self> {
        Self::with_quadrature_nodes(c, DEFAULT_QUADRATURE_NODES)
    }

    pub fn with_quadrature_nodes(c: f64, nodes: usize) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(SpectralError::InvalidC(c));
        }
        Ok(KestenMcKayLaw {
            c,
            quadrature: GaussLegendre::new(nodes),
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `2 sqrt(c)`, the edge of the continuous part.
    pub fn support_radius(&self) -> f64 {
        2.0 * self.c.sqrt()
    }

    /// Empty for `c >= 1`, otherwise the two atoms at `+-(1 + c)` of weight
    /// `(1 - c) / 2` each.
    pub fn atoms(&self) -> Vec<Atom> {
        if self.c >= 1.0 {
            return Vec::new();
        }
        let weight = 0.5 * (1.0 - self.c);
        let location = 1.0 + self.c;
        vec![
            Atom {
                location: -location,
                weight,
            },
            Atom { location, weight },
        ]
    }

    /// Density of the continuous part. Zero off the support; for `c = 1`
    /// the support edges are reported as [`SpectralError::Divergent`].
    pub fn density(&self, t: f64) -> Result<f64> {
        let c = self.c;
        let radius = self.support_radius();
        if t.abs() > radius {
            return Ok(0.0);
        }
        let inside = 4.0 * c - t * t;
        let denom = (1.0 + c) * (1.0 + c) - t * t;
        if c == 1.0 && t.abs() == radius {
            return Err(SpectralError::Divergent(t));
        }
        Ok((1.0 + c) / (2.0 * PI) * inside.max(0.0).sqrt() / denom)
    }

    /// `int t^order rho_c(t) dt` over the continuous part only.
    ///
    /// Uses `t = 2 sqrt(c) sin(theta)`, under which the integrand becomes
    /// `(1 + c)/(2 pi) * 4c cos^2 / ((1 - c)^2 + 4c cos^2) * t^order`: smooth
    /// on `[-pi/2, pi/2]`, including the arcsine case `c = 1`.
    pub fn continuous_moment(&self, order: u32) -> f64 {
        if order % 2 == 1 {
            return 0.0;
        }
        let c = self.c;
        let a = self.support_radius();
        let gap = (1.0 - c) * (1.0 - c);
        let pref = (1.0 + c) / (2.0 * PI);
        self.quadrature.integrate(-PI / 2.0, PI / 2.0, |theta| {
            let cos2 = theta.cos().powi(2);
            let t = a * theta.sin();
            pref * 4.0 * c * cos2 / (gap + 4.0 * c * cos2) * t.powi(order as i32)
        })
    }

    /// Mass of the continuous part; `min(1, c)` analytically.
    pub fn continuous_mass(&self) -> f64 {
        self.continuous_moment(0)
    }

    /// Full moment: quadrature over the density plus the atoms. Odd orders
    /// are exactly zero by symmetry.
    pub fn moment(&self, order: u32) -> f64 {
        if order % 2 == 1 {
            return 0.0;
        }
        let atoms: f64 = self
            .atoms()
            .iter()
            .map(|a| a.weight * a.location.powi(order as i32))
            .sum();
        self.continuous_moment(order) + atoms
    }

    /// `sqrt(c) rho_c(sqrt(c) t)`, the law rescaled to variance
    /// `(1 + c) / c` and support `[-2, 2]`. Defined for `c >= 1`.
    pub fn scaled_density(&self, t: f64) -> Result<f64> {
        if self.c < 1.0 {
            return Err(SpectralError::CBelowOne(self.c));
        }
        let root = self.c.sqrt();
        Ok(root * self.density(root * t)?)
    }

    /// Whether `rho_c(t) = rho_{1/c}(t / c)` holds at `t` to 1e-12.
    pub fn scaling_identity_holds(&self, t: f64) -> bool {
        let dual = KestenMcKayLaw {
            c: 1.0 / self.c,
            quadrature: self.quadrature.clone(),
        };
        match (self.density(t), dual.density(t / self.c)) {
            (Ok(a), Ok(b)) => (a - b).abs() <= 1e-12 * a.abs().max(1.0),
            (Err(SpectralError::Divergent(_)), Err(SpectralError::Divergent(_))) => true,
            _ => false,
        }
    }
}

/// Semicircle density `sqrt(4 - t^2) / (2 pi)` on `[-2, 2]`.
pub fn semicircle_density(t: f64) -> f64 {
    if t.abs() >= 2.0 {
        return 0.0;
    }
    (4.0 - t * t).sqrt() / (2.0 * PI)
}

/// `max |mu_c(t) - eta(t)|` over `points` equally spaced `t` in `[-2, 2]`,
/// where `mu_c` is [`KestenMcKayLaw::scaled_density`].
pub fn semicircle_distance(c: f64, points: usize) -> Result<f64> {
    let law = KestenMcKayLaw::new(c)?;
    let step = 4.0 / (points.max(2) - 1) as f64;
    (0..points.max(2))
        .map(|i| {
            let t = -2.0 + step * i as f64;
            Ok((law.scaled_density(t)? - semicircle_density(t)).abs())
        })
        .try_fold(0.0f64, |acc, d: Result<f64>| Ok(acc.max(d?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{binomial, moment_polynomial};
    use approx::assert_relative_eq;

    const TEST_CS: [f64; 6] = [0.25, 5.0 / 6.0, 1.0, 6.0 / 5.0, 2.0, 4.0];

    #[test]
    fn rejects_bad_parameters() {
        assert!(KestenMcKayLaw::new(0.0).is_err());
        assert!(KestenMcKayLaw::new(-1.0).is_err());
        assert!(KestenMcKayLaw::new(f64::NAN).is_err());
    }

    #[test]
    fn density_values() {
        let arcsine = KestenMcKayLaw::new(1.0).unwrap();
        assert_relative_eq!(
            arcsine.density(0.0).unwrap(),
            1.0 / (2.0 * PI),
            epsilon = 1e-15
        );
        assert_eq!(arcsine.density(2.0), Err(SpectralError::Divergent(2.0)));
        assert_eq!(arcsine.density(-2.0), Err(SpectralError::Divergent(-2.0)));
        assert_eq!(KestenMcKayLaw::new(4.0).unwrap().density(5.0).unwrap(), 0.0);
        let expected = 3.0 / (2.0 * PI) * 7f64.sqrt() / 8.0;
        assert_relative_eq!(
            KestenMcKayLaw::new(2.0).unwrap().density(1.0).unwrap(),
            expected,
            epsilon = 1e-15
        );
        // finite at the edge away from c = 1
        assert_eq!(KestenMcKayLaw::new(4.0).unwrap().density(4.0).unwrap(), 0.0);
    }

    #[test]
    fn atoms() {
        assert!(KestenMcKayLaw::new(2.0).unwrap().atoms().is_empty());
        assert!(KestenMcKayLaw::new(1.0).unwrap().atoms().is_empty());
        let atoms = KestenMcKayLaw::new(0.25).unwrap().atoms();
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[0].location, -1.25);
        assert_eq!(atoms[1].location, 1.25);
        assert!(atoms.iter().all(|a| a.weight == 0.375));
    }

    #[test]
    fn total_mass_is_one() {
        for c in TEST_CS {
            let law = KestenMcKayLaw::new(c).unwrap();
            assert!(
                (law.continuous_mass() - c.min(1.0)).abs() < 1e-10,
                "c = {c}"
            );
            assert!((law.moment(0) - 1.0).abs() < 1e-10, "c = {c}");
        }
    }

    #[test]
    fn moments_match_polynomials() {
        for c in TEST_CS {
            let law = KestenMcKayLaw::new(c).unwrap();
            for two_n in (0..=12).step_by(2) {
                let exact = moment_polynomial(two_n).unwrap().eval_f64(c);
                let rel = (law.moment(two_n as u32) - exact).abs() / exact;
                assert!(rel < 1e-7, "c = {c}, order {two_n}: rel {rel}");
            }
            assert_eq!(law.moment(3), 0.0);
        }
        let law = KestenMcKayLaw::new(3.0).unwrap();
        assert!((law.moment(6) - 232.0).abs() / 232.0 < 1e-7);
        assert!((KestenMcKayLaw::new(0.25).unwrap().moment(2) - 1.25).abs() < 1e-9);
    }

    #[test]
    fn arcsine_moments_are_central_binomials() {
        let law = KestenMcKayLaw::new(1.0).unwrap();
        for n in 0..=6 {
            let exact = binomial(2 * n, n as i64)
                .to_string()
                .parse::<f64>()
                .unwrap();
            assert!((law.moment(2 * n as u32) - exact).abs() / exact < 1e-7);
        }
    }

    #[test]
    fn scaling_identity() {
        assert!(KestenMcKayLaw::new(2.0)
            .unwrap()
            .scaling_identity_holds(1.0));
        assert!(KestenMcKayLaw::new(4.0)
            .unwrap()
            .scaling_identity_holds(3.9));
        let one = KestenMcKayLaw::new(1.0).unwrap();
        for t in [-2.0, -1.3, 0.0, 0.7, 2.0, 3.0] {
            assert!(one.scaling_identity_holds(t));
        }
        for c in TEST_CS {
            let law = KestenMcKayLaw::new(c).unwrap();
            for i in 0..=40 {
                let t = -1.1 * law.support_radius() + 0.055 * law.support_radius() * i as f64;
                assert!(law.scaling_identity_holds(t), "c = {c}, t = {t}");
            }
        }
    }

    #[test]
    fn semicircle() {
        assert_relative_eq!(semicircle_density(0.0), 1.0 / PI, epsilon = 1e-15);
        assert_eq!(semicircle_density(2.0), 0.0);
        assert_eq!(semicircle_density(-2.0), 0.0);
        let rule = GaussLegendre::new(256);
        let mass = rule.integrate(-PI / 2.0, PI / 2.0, |th| {
            semicircle_density(2.0 * th.sin()) * 2.0 * th.cos()
        });
        assert!((mass - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rescaled_law() {
        assert!(matches!(
            KestenMcKayLaw::new(0.5).unwrap().scaled_density(0.0),
            Err(SpectralError::CBelowOne(_))
        ));
        let rule = GaussLegendre::new(256);
        for c in [4.0, 16.0, 64.0] {
            let law = KestenMcKayLaw::new(c).unwrap();
            let mass = rule.integrate(-PI / 2.0, PI / 2.0, |th| {
                law.scaled_density(2.0 * th.sin()).unwrap() * 2.0 * th.cos()
            });
            assert!((mass - 1.0).abs() < 1e-9, "c = {c}: {mass}");
            assert_eq!(law.scaled_density(2.5).unwrap(), 0.0);
            // mu_c(0) = c / (1 + c) * eta(0)
            assert_relative_eq!(
                law.scaled_density(0.0).unwrap(),
                c / (1.0 + c) / PI,
                epsilon = 1e-14
            );
        }
        let d4 = semicircle_distance(4.0, 1001).unwrap();
        let d16 = semicircle_distance(16.0, 1001).unwrap();
        let d64 = semicircle_distance(64.0, 1001).unwrap();
        assert!(d4 > d16 && d16 > d64, "{d4} {d16} {d64}");
    }
}
