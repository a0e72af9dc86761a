//! Truncated power series with complex coefficients.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0, ..., c_N` and stands for
//! the Taylor polynomial of some function about the origin. Binary
//! operations truncate to the smaller of the two orders, so a result never
//! claims more accuracy than its least accurate operand.
//!
//! The coefficient field is `Complex<T>` for any [`Scalar`] `T`: `f64` and
//! `f32` for numerics, `Ratio<i64>` when exact arithmetic is wanted.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, Num, One, Zero};

use crate::error::{Error, Result};

/// Real scalar underlying the complex coefficients.
pub trait Scalar: Clone + Num + Neg<Output = Self> + PartialOrd + Debug {}
impl<T: Clone + Num + Neg<Output = T> + PartialOrd + Debug> Scalar for T {}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> TruncatedSeries<T> {
    /// Builds a series of the given order, padding with zeros or dropping
    /// terms beyond `order`.
    pub fn new(mut coeffs: Vec<Complex<T>>, order: usize) -> Self {
        assert!(order >= 1, "series order must be at least 1");
        coeffs.resize(order + 1, Complex::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: Complex<T>, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The identity series `z`.
    pub fn identity(order: usize) -> Self {
        Self::new(vec![Complex::zero(), Complex::one()], order)
    }

    /// Builds a series from real coefficients.
    pub fn from_real(coeffs: &[T], order: usize) -> Self {
        let coeffs = coeffs.iter().map(|c| Complex::new(c.clone(), T::zero())).collect();
        Self::new(coeffs, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero beyond the order.
    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise the order by truncation");
        Self::new(self.coeffs[..=order].to_vec(), order)
    }

    pub fn scale(&self, s: &Complex<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    /// Multiplies by `z`, dropping the top coefficient.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Complex::zero());
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        Self { coeffs }
    }

    /// Multiplicative inverse by forward substitution on the Cauchy product.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = Complex::<T>::one() / c0.clone();
        let n = self.order();
        let mut out: Vec<Complex<T>> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Complex::<T>::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(Self { coeffs: out })
    }

    /// Taylor coefficients of `self ∘ inner`.
    ///
    /// `inner` must vanish at 0 so that every coefficient of the result is
    /// determined by the truncated operands.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InnerConstantNonzero);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner: c_0 + g (c_1 + g (c_2 + ...))
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Compositional inverse about the origin.
    ///
    /// Solves `self ∘ g = z` one order at a time: with `g` known through
    /// `z^{k-1}`, the `z^k` coefficient of `self ∘ g` is `c_1 g_k` plus terms
    /// that depend only on lower coefficients of `g`.
    pub fn revert(&self) -> Result<Self> {
        let c1 = self.coeffs[1].clone();
        if !self.coeffs[0].is_zero() || c1.is_zero() {
            return Err(Error::NotInvertibleAtOrigin);
        }
        let n = self.order();
        let mut g = Self::zero(n);
        g.coeffs[1] = Complex::<T>::one() / c1.clone();
        for k in 2..=n {
            let partial = g.truncate(k);
            let residual = self.truncate(k).compose(&partial)?.coeffs[k].clone();
            g.coeffs[k] = -(residual / c1.clone());
        }
        Ok(g)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn evaluate(&self, z: &Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    /// Value and derivative of the truncated polynomial at `z`.
    pub fn evaluate_with_derivative(&self, z: &Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut value = Complex::zero();
        let mut deriv = Complex::zero();
        for c in self.coeffs.iter().rev() {
            deriv = deriv * z.clone() + value.clone();
            value = value * z.clone() + c.clone();
        }
        (value, deriv)
    }
}

impl<T: Scalar + Float> TruncatedSeries<T> {
    /// Largest coefficientwise modulus difference over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Scalar> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl<T: Scalar> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl<T: Scalar> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn mul(self, rhs: Self) -> TruncatedSeries<T> {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(Complex::zero(), |acc, j| {
                    acc + self.coeffs[j].clone() * rhs.coeffs[k - j].clone()
                })
            })
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl<T: Scalar> Neg for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn neg(self) -> TruncatedSeries<T> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl<T: Scalar> $trait for TruncatedSeries<T> {
            type Output = TruncatedSeries<T>;

            fn $method(self, rhs: Self) -> TruncatedSeries<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_rational::Rational64;

    type S = TruncatedSeries<f64>;
    type Q = TruncatedSeries<Rational64>;

    fn re(c: &[f64], order: usize) -> S {
        S::from_real(c, order)
    }

    fn q(c: &[i64], order: usize) -> Q {
        let c: Vec<Rational64> = c.iter().map(|&x| Rational64::from_integer(x)).collect();
        Q::from_real(&c, order)
    }

    #[test]
    fn add_examples() {
        assert_eq!(re(&[1.0, 1.0], 1) + re(&[1.0, -1.0], 1), re(&[2.0], 1));
        assert_eq!(S::identity(3) + S::zero(3), S::identity(3));
        assert_eq!(re(&[1.0, 2.0], 2) + re(&[3.0, 0.0, 4.0], 2), re(&[4.0, 2.0, 4.0], 2));
    }

    #[test]
    fn add_truncates_to_min_order() {
        let sum = re(&[1.0, 1.0, 1.0, 1.0], 3) + re(&[1.0, 1.0], 1);
        assert_eq!(sum.order(), 1);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(q(&[1, 1], 2) * q(&[1, -1], 2), q(&[1, 0, -1], 2));
        assert_eq!(q(&[0, 1], 1) * q(&[0, 1], 1), Q::zero(1));
        assert_eq!(q(&[1, 1, 1], 2) * q(&[1, 1, 1], 2), q(&[1, 2, 3], 2));
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(q(&[1, -1], 3).reciprocal().unwrap(), q(&[1, 1, 1, 1], 3));
        assert_eq!(re(&[2.0], 1).reciprocal().unwrap(), re(&[0.5], 1));
        assert_eq!(q(&[1, 1, 1], 2).reciprocal().unwrap(), q(&[1, -1], 2));
        assert_eq!(q(&[0, 1], 2).reciprocal(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn compose_examples() {
        let inner = q(&[0, 3, -2, 5], 3);
        assert_eq!(Q::identity(3).compose(&inner).unwrap(), inner);
        let geometric = q(&[1, -1], 4).reciprocal().unwrap();
        assert_eq!(geometric.compose(&q(&[0, 0, 1], 4)).unwrap(), q(&[1, 0, 1, 0, 1], 4));
        assert_eq!(q(&[0, 1, 1], 3).compose(&Q::identity(3)).unwrap(), q(&[0, 1, 1], 3));
        assert_eq!(Q::identity(2).compose(&q(&[1, 1], 2)), Err(Error::InnerConstantNonzero));
    }

    #[test]
    fn revert_examples() {
        assert_eq!(Q::identity(5).revert().unwrap(), Q::identity(5));
        // Catalan numbers with alternating sign: (-1 + sqrt(1 + 4w)) / 2
        assert_eq!(q(&[0, 1, 1], 4).revert().unwrap(), q(&[0, 1, -1, 2, -5], 4));
        let c = Complex::new(Rational64::new(2, 3), Rational64::new(-1, 5));
        let linear = Q::new(vec![Complex::zero(), c], 3);
        let expected = Q::new(vec![Complex::zero(), Complex::<Rational64>::one() / c], 3);
        assert_eq!(linear.revert().unwrap(), expected);
        assert_eq!(q(&[1, 1], 2).revert(), Err(Error::NotInvertibleAtOrigin));
        assert_eq!(q(&[0, 0, 1], 2).revert(), Err(Error::NotInvertibleAtOrigin));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(re(&[1.0, 1.0, 1.0], 2).evaluate(&Complex64::zero()), Complex64::one());
        let z = Complex64::new(0.3, 0.4);
        assert_eq!(S::identity(2).evaluate(&z), z);
        assert_eq!(re(&[1.0, 0.0, -1.0], 2).evaluate(&Complex64::new(0.5, 0.0)).re, 0.75);
    }

    #[test]
    fn derivative_evaluation() {
        let p = re(&[1.0, 2.0, 3.0], 2);
        let (v, d) = p.evaluate_with_derivative(&Complex64::new(2.0, 0.0));
        assert_eq!(v.re, 17.0);
        assert_eq!(d.re, 14.0);
    }

    #[test]
    fn single_precision_reversion() {
        let a = TruncatedSeries::<f32>::from_real(&[0.0, 1.0, 1.0], 4);
        let g = a.revert().unwrap();
        let back = a.compose(&g).unwrap();
        assert!(back.max_abs_diff(&TruncatedSeries::identity(4)) < 1e-5);
    }
}
