//! Cauchy transform, Stieltjes inversion and the K/R transforms.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{KestenMcKayLaw, Result, SpectralError};

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(SpectralError::NonFinite(z))
    }
}

/// `2z / (1 + sqrt(1 + 4z^2))`, the Bernoulli R-transform written without
/// cancellation near 0.
fn bernoulli_r(z: Complex64) -> Complex64 {
    let root = (1.0 + 4.0 * z * z).sqrt();
    2.0 * z / (1.0 + root)
}

impl KestenMcKayLaw {
    /// `G(z) = int d mu(t) / (z - t)`.
    ///
    /// `sqrt(z^2 - 4c)` is taken as `sqrt(z - 2 sqrt c) * sqrt(z + 2 sqrt c)`
    /// with principal roots, which is holomorphic off the support and behaves
    /// like `z` at infinity. The closed form
    /// `((1 - c) z + (1 + c) s) / (2 (z^2 - (1 + c)^2))` is evaluated as
    /// `2c / ((c - 1) z + (1 + c) s)` (multiply through by the conjugate),
    /// which has no removable singularity at `+-(1 + c)` when `c > 1`.
    pub fn cauchy_transform(&self, z: Complex64) -> Result<Complex64> {
        check_finite(z)?;
        let c = self.c;
        let radius = self.support_radius();
        if z.im == 0.0 && z.re.abs() <= radius {
            return Err(SpectralError::OnBranchCut { z, radius });
        }
        if c < 1.0 {
            let pole = 1.0 + c;
            if z.im == 0.0 && (z.re.abs() - pole).abs() <= 1e-14 * pole {
                return Err(SpectralError::Pole { z });
            }
        }
        let s = (z - radius).sqrt() * (z + radius).sqrt();
        let denom = (c - 1.0) * z + (1.0 + c) * s;
        if denom == Complex64::new(0.0, 0.0) {
            return Err(SpectralError::Pole { z });
        }
        Ok(2.0 * c / denom)
    }

    /// `-Im G(t + i eps) / pi`, which tends to the density as `eps -> 0`.
    pub fn stieltjes_invert(&self, t: f64, epsilon: f64) -> Result<f64> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(SpectralError::InvalidEpsilon(epsilon));
        }
        Ok(-self.cauchy_transform(Complex64::new(t, epsilon))?.im / PI)
    }

    /// Compositional inverse of `G` near infinity,
    /// `(1 - c + (1 + c) sqrt(1 + 4z^2)) / (2z)` on the principal branch.
    pub fn k_transform(&self, z: Complex64) -> Result<Complex64> {
        check_finite(z)?;
        if z == Complex64::new(0.0, 0.0) {
            return Err(SpectralError::Pole { z });
        }
        let c = self.c;
        Ok((1.0 - c + (1.0 + c) * (1.0 + 4.0 * z * z).sqrt()) / (2.0 * z))
    }

    /// `R(z) = K(z) - 1/z = (1 + c)(-1 + sqrt(1 + 4z^2)) / (2z)`, with the
    /// removable singularity at 0 filled in (`R(0) = 0`).
    pub fn r_transform(&self, z: Complex64) -> Result<Complex64> {
        check_finite(z)?;
        Ok((1.0 + self.c) * bernoulli_r(z))
    }
}

/// Transforms of the symmetric Bernoulli law with variance 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernoulliTransforms {
    /// Moment generating function `1 / (1 - z^2)`.
    pub m: Complex64,
    /// Cauchy transform `z / (z^2 - 1)`.
    pub g: Complex64,
    /// `(1 + sqrt(1 + 4z^2)) / (2z)`.
    pub k: Complex64,
    /// `(-1 + sqrt(1 + 4z^2)) / (2z)`.
    pub r: Complex64,
}

/// All four at once; fails at the poles `+-1` (M, G) and 0 (K).
pub fn bernoulli_transforms(z: Complex64) -> Result<BernoulliTransforms> {
    check_finite(z)?;
    let one = Complex64::new(1.0, 0.0);
    if z == one || z == -one || z == Complex64::new(0.0, 0.0) {
        return Err(SpectralError::Pole { z });
    }
    let r = bernoulli_r(z);
    Ok(BernoulliTransforms {
        m: one / (one - z * z),
        g: z / (z * z - one),
        k: (one + (one + 4.0 * z * z).sqrt()) / (2.0 * z),
        r,
    })
}
