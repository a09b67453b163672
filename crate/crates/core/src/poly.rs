//! Dense integer polynomials in the tree parameter `c`.
//!
//! [`Polynomial`] is the general signed ring element used by the series
//! layer. [`MomentPolynomial`] wraps it with the extra guarantee that every
//! coefficient is non-negative, which holds for all walk and tableau counts.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Polynomial with arbitrary-precision integer coefficients; `coeffs[k]` is
/// the coefficient of `c^k`. Trailing zeros are always stripped, so the zero
/// polynomial is the empty vector and equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Polynomial { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(value: BigInt) -> Self {
        Self::new(vec![value])
    }

    /// `coefficient * c^power`.
    pub fn monomial(coefficient: BigInt, power: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); power + 1];
        coeffs[power] = coefficient;
        Self::new(coeffs)
    }

    /// The polynomial `1 + c`.
    pub fn one_plus_c() -> Self {
        Self::from_i64s(&[1, 1])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `c^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exact value at an integer point.
    pub fn eval_exact(&self, c: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, a| acc * c + a)
    }

    /// Horner evaluation in double precision.
    pub fn eval_f64(&self, c: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * c + a.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * factor).collect())
    }

    /// Multiply by `c^power`.
    pub fn shift(&self, power: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); power];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// Exact division. Returns `None` when `divisor` is zero or does not
    /// divide `self` over the integers.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let d_deg = divisor.degree()?;
        let Some(n_deg) = self.degree() else {
            return Some(Self::zero());
        };
        if n_deg < d_deg {
            return None;
        }
        let lead = &divisor.coeffs[d_deg];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n_deg - d_deg + 1];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + d_deg];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * b;
            }
            quot[i] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::new(quot))
        } else {
            None
        }
    }

    fn fmt_with_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            if first {
                if a.is_negative() {
                    f.write_str("-")?;
                }
            } else if a.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    f.write_str(var)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Ascending powers, e.g. `1 + 5c + 9c^2 + 5c^3`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_var(f, "c")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(ToString::to_string))
    }
}

/// A polynomial in `c` with non-negative integer coefficients: a moment
/// `m_{2n}`, an odd moment `m_{2n-1}`, an irreducible count or one entry of
/// the c-deformed Pascal triangle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MomentPolynomial(Polynomial);

impl MomentPolynomial {
    pub fn from_counts(coeffs: Vec<BigUint>) -> Self {
        MomentPolynomial(Polynomial::new(
            coeffs
                .into_iter()
                .map(|a| BigInt::from_biguint(Sign::Plus, a))
                .collect(),
        ))
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Self::from_counts(coeffs.iter().map(|&a| BigUint::from(a)).collect())
    }

    /// Fails if any coefficient is negative.
    pub fn try_from_polynomial(p: Polynomial) -> Option<Self> {
        p.coeffs
            .iter()
            .all(|a| !a.is_negative())
            .then_some(MomentPolynomial(p))
    }

    pub fn as_polynomial(&self) -> &Polynomial {
        &self.0
    }

    pub fn into_polynomial(self) -> Polynomial {
        self.0
    }

    /// Coefficient of `c^k`.
    pub fn coeff(&self, k: usize) -> BigUint {
        self.0.coeff(k).magnitude().clone()
    }

    pub fn coeffs(&self) -> Vec<BigUint> {
        self.0
            .coeffs
            .iter()
            .map(|a| a.magnitude().clone())
            .collect()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn eval_exact(&self, c: u64) -> BigUint {
        self.0
            .eval_exact(&BigInt::from(c))
            .to_biguint()
            .expect("non-negative coefficients at a non-negative point")
    }

    pub fn eval_f64(&self, c: f64) -> f64 {
        self.0.eval_f64(c)
    }

    pub fn mul(&self, rhs: &MomentPolynomial) -> MomentPolynomial {
        MomentPolynomial(&self.0 * &rhs.0)
    }

    pub fn add(&self, rhs: &MomentPolynomial) -> MomentPolynomial {
        MomentPolynomial(&self.0 + &rhs.0)
    }
}

impl From<MomentPolynomial> for Polynomial {
    fn from(p: MomentPolynomial) -> Self {
        p.0
    }
}

impl fmt::Display for MomentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for MomentPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        let p = Polynomial::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.coeffs().len(), 2);
        assert!(Polynomial::from_i64s(&[0, 0]).is_zero());
        assert_eq!(Polynomial::from_i64s(&[0]).degree(), None);
    }

    #[test]
    fn display_matches_table_style() {
        assert_eq!(
            Polynomial::from_i64s(&[1, 5, 9, 5]).to_string(),
            "1 + 5c + 9c^2 + 5c^3"
        );
        assert_eq!(Polynomial::from_i64s(&[0, 1, 1]).to_string(), "c + c^2");
        assert_eq!(Polynomial::from_i64s(&[1, -2]).to_string(), "1 - 2c");
        assert_eq!(Polynomial::from_i64s(&[0, -1]).to_string(), "-c");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    #[test]
    fn exact_division_by_one_plus_c() {
        let p = Polynomial::from_i64s(&[1, 3, 2]); // (1 + c)(1 + 2c)
        let q = p.div_exact(&Polynomial::one_plus_c()).unwrap();
        assert_eq!(q, Polynomial::from_i64s(&[1, 2]));
        assert!(Polynomial::from_i64s(&[1, 1, 1])
            .div_exact(&Polynomial::one_plus_c())
            .is_none());
        assert!(p.div_exact(&Polynomial::zero()).is_none());
    }

    #[test]
    fn moment_polynomial_rejects_negative_coefficients() {
        assert!(MomentPolynomial::try_from_polynomial(Polynomial::from_i64s(&[1, -1])).is_none());
        let m = MomentPolynomial::try_from_polynomial(Polynomial::from_i64s(&[1, 3, 2])).unwrap();
        assert_eq!(m.eval_exact(3), BigUint::from(28u32));
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-20i64..20, 0..6).prop_map(|v| Polynomial::from_i64s(&v))
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(a in small_poly(), b in small_poly(), x in -5i64..5) {
            let x = BigInt::from(x);
            prop_assert_eq!((&a * &b).eval_exact(&x), a.eval_exact(&x) * b.eval_exact(&x));
            prop_assert_eq!((&a + &b).eval_exact(&x), a.eval_exact(&x) + b.eval_exact(&x));
            prop_assert_eq!((&a - &b).eval_exact(&x), a.eval_exact(&x) - b.eval_exact(&x));
        }

        #[test]
        fn division_undoes_multiplication(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
