//! Truncated power series in `z` whose coefficients are integer polynomials
//! in `c`. All arithmetic is exact.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::combinatorics::{self, catalan};
use crate::poly::{MomentPolynomial, Polynomial};

/// Order used when callers do not pick one.
pub const DEFAULT_ORDER: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("constant term must be 1 to invert, got {0}")]
    NonUnitConstant(Polynomial),
    #[error("need 1 <= k <= n, got k = {k}, 2n = {two_n}")]
    InvalidReturnCount { k: usize, two_n: usize },
    #[error("expected an even power of z, got {0}")]
    OddPower(usize),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// `sum_{i <= order} coeffs[i] z^i`, everything above `order` discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Polynomial>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Polynomial::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Polynomial::one();
        s
    }

    /// Pads with zeros or truncates to exactly `order + 1` coefficients.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<Polynomial>) -> Self {
        coeffs.resize(order + 1, Polynomial::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_integers(order: usize, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            order,
            coeffs
                .iter()
                .map(|&a| Polynomial::constant(BigInt::from(a)))
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// Coefficient of `z^i`; zero above the order.
    pub fn coeff(&self, i: usize) -> Polynomial {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(order, self.coeffs.clone())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Multiply every coefficient by a polynomial in `c`.
    pub fn scale(&self, factor: &Polynomial) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * factor).collect(),
        }
    }

    /// Multiply by `z^power`, dropping what falls past the order.
    pub fn shift_up(&self, power: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![Polynomial::zero(); power.min(order + 1)];
        coeffs.extend(
            self.coeffs
                .iter()
                .take((order + 1).saturating_sub(power))
                .cloned(),
        );
        TruncatedSeries { coeffs }
    }

    /// Divide by `z^power`. The result has order `order - power`; the low
    /// coefficients that are dropped must be zero, else `None`.
    pub fn shift_down(&self, power: usize) -> Option<Self> {
        if power > self.order() || self.coeffs[..power].iter().any(|a| !a.is_zero()) {
            return None;
        }
        Some(TruncatedSeries {
            coeffs: self.coeffs[power..].to_vec(),
        })
    }

    /// Exact coefficient-wise division by a polynomial in `c`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.div_exact(divisor))
            .collect::<Option<Vec<_>>>()?;
        Some(TruncatedSeries { coeffs })
    }

    /// `f(z) -> f(scale * z^power)`, keeping the same truncation order.
    pub fn substitute_scaled_power(&self, scale: &Polynomial, power: usize) -> Self {
        assert!(power >= 1, "substitution power must be positive");
        let order = self.order();
        let mut out = Self::zero(order);
        let mut factor = Polynomial::one();
        for (i, a) in self.coeffs.iter().enumerate() {
            let target = i * power;
            if target > order {
                break;
            }
            out.coeffs[target] = a * &factor;
            factor = &factor * scale;
        }
        out
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// `self^k` for `k >= 0`.
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// Multiplicative inverse up to the truncation order. The constant term
    /// must be exactly the polynomial 1, which keeps everything integral.
    pub fn reciprocal(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitConstant(self.coeffs[0].clone()));
        }
        let order = self.order();
        let mut inv = Self::zero(order);
        inv.coeffs[0] = Polynomial::one();
        for n in 1..=order {
            let mut acc = Polynomial::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() && !inv.coeffs[n - i].is_zero() {
                    acc = &acc + &(&self.coeffs[i] * &inv.coeffs[n - i]);
                }
            }
            inv.coeffs[n] = -&acc;
        }
        Ok(inv)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})z")?,
                _ => write!(f, "({a})z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// Free-function form of [`TruncatedSeries::mul`].
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.mul(b)
}

/// Free-function form of [`TruncatedSeries::reciprocal`].
pub fn series_reciprocal(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.reciprocal()
}

/// `N(z) = sum C_n z^n`.
pub fn catalan_series(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_coeffs(
        order,
        (0..=order)
            .map(|n| Polynomial::constant(catalan(n).into()))
            .collect(),
    )
}

/// Generating function of walks that return to the root only at the end,
/// built as `z^2 (1 + c) N(c z^2)`.
pub fn irreducible_series(order: usize) -> TruncatedSeries {
    let c = Polynomial::from_i64s(&[0, 1]);
    catalan_series(order)
        .substitute_scaled_power(&c, 2)
        .scale(&Polynomial::one_plus_c())
        .shift_up(2)
}

/// `M(z) = 1 / (1 - M~(z))`, the closed-walk generating function.
pub fn moment_series(order: usize) -> TruncatedSeries {
    let one_minus = TruncatedSeries::one(order)
        .sub(&irreducible_series(order))
        .expect("same order");
    one_minus.reciprocal().expect("constant term is 1")
}

/// Coefficient of `z^{2n}` in `M~(z)^k`: closed walks of length `2n`
/// returning to the root exactly `k` times.
pub fn returns_coefficient(k: usize, two_n: usize) -> Result<MomentPolynomial> {
    if !two_n.is_multiple_of(2) {
        return Err(SeriesError::OddPower(two_n));
    }
    if k == 0 || k > two_n / 2 {
        return Err(SeriesError::InvalidReturnCount { k, two_n });
    }
    let coeff = irreducible_series(two_n).pow(k).coeff(two_n);
    Ok(MomentPolynomial::try_from_polynomial(coeff).expect("product of positive series"))
}

/// Checks `z N(z)^2 + 1 = N(z)` through the given order.
pub fn catalan_equation_holds(order: usize) -> bool {
    let n = catalan_series(order);
    let lhs = n
        .mul(&n)
        .expect("same order")
        .shift_up(1)
        .add(&TruncatedSeries::one(order))
        .expect("same order");
    lhs == n
}

/// Checks the quadratic equation behind the closed form of `M(z)` without a
/// series square root: with `Q = M~ / ((1 + c) z^2) = N(c z^2)`, verifies
/// `c z^2 Q^2 + 1 = Q`, and that `M (1 - M~) = 1`.
pub fn moment_quadratic_identity_holds(order: usize) -> bool {
    let c = Polynomial::from_i64s(&[0, 1]);
    let irreducible = irreducible_series(order);
    let Some(q) = irreducible
        .shift_down(2)
        .and_then(|s| s.div_exact(&Polynomial::one_plus_c()))
    else {
        return false;
    };
    let q_order = q.order();
    let lhs = q
        .mul(&q)
        .expect("same order")
        .scale(&c)
        .shift_up(2)
        .add(&TruncatedSeries::one(q_order))
        .expect("same order");
    if lhs != q {
        return false;
    }
    let one_minus = TruncatedSeries::one(order)
        .sub(&irreducible)
        .expect("same order");
    moment_series(order).mul(&one_minus).expect("same order") == TruncatedSeries::one(order)
}

/// Coefficient of `z^{2n}` of [`moment_series`] against
/// [`combinatorics::moment_polynomial`] for every even power up to `order`.
pub fn moment_series_matches_polynomials(order: usize) -> bool {
    let m = moment_series(order);
    (0..=order).all(|i| {
        if i % 2 == 1 {
            m.coeff(i).is_zero()
        } else {
            combinatorics::moment_polynomial(i)
                .map(|p| m.coeff(i) == *p.as_polynomial())
                .unwrap_or(false)
        }
    })
}
