use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use super::{Real, ScalarContext};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Complex<R> {
    #[inline]
    pub fn new(re: R, im: R) -> Self {
        Complex { re, im }
    }

    pub fn zero(ctx: &ScalarContext) -> Self {
        Complex::new(R::zero(ctx), R::zero(ctx))
    }

    pub fn from_f64(ctx: &ScalarContext, re: f64, im: f64) -> Self {
        Complex::new(R::from_f64(ctx, re), R::from_f64(ctx, im))
    }

    /// `e^{i theta}`.
    #[inline]
    pub fn cis(theta: &R) -> Self {
        let (s, c) = theta.sin_cos();
        Complex::new(c, s)
    }

    #[inline]
    pub fn norm_sqr(&self) -> R {
        self.re.square() + &self.im.square()
    }

    #[inline]
    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    #[inline]
    pub fn scale(&self, k: &R) -> Self {
        Complex::new(self.re.clone() * k, self.im.clone() * k)
    }

    #[inline]
    pub fn scale_in_place(&mut self, k: &R) {
        self.re *= k;
        self.im *= k;
    }

    /// `self * rhs` without consuming either side.
    #[inline]
    pub fn mul_ref(&self, rhs: &Self) -> Self {
        Complex::new(
            self.re.clone() * &rhs.re - self.im.clone() * &rhs.im,
            self.re.clone() * &rhs.im + self.im.clone() * &rhs.re,
        )
    }

    /// `conj(self) * rhs`.
    #[inline]
    pub fn conj_mul_ref(&self, rhs: &Self) -> Self {
        Complex::new(
            self.re.clone() * &rhs.re + self.im.clone() * &rhs.im,
            self.re.clone() * &rhs.im - self.im.clone() * &rhs.re,
        )
    }

    #[inline]
    pub fn mul_assign_ref(&mut self, rhs: &Self) {
        let re = self.re.clone() * &rhs.re - self.im.clone() * &rhs.im;
        self.im = self.im.clone() * &rhs.re + self.re.clone() * &rhs.im;
        self.re = re;
    }
}

impl<R: Real> Add for Complex<R> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Complex::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}

impl<R: Real> Sub for Complex<R> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Complex::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}

impl<R: Real> Mul for Complex<R> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a, R: Real> AddAssign<&'a Complex<R>> for Complex<R> {
    #[inline]
    fn add_assign(&mut self, rhs: &'a Complex<R>) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a, R: Real> SubAssign<&'a Complex<R>> for Complex<R> {
    #[inline]
    fn sub_assign(&mut self, rhs: &'a Complex<R>) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

/// Power-of-two length complex vector, the unit of work for the FFT.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector<R> {
    data: Vec<Complex<R>>,
}

impl<R: Real> ComplexVector<R> {
    pub fn new(data: Vec<Complex<R>>) -> Result<Self> {
        if data.is_empty() || !data.len().is_power_of_two() {
            return Err(Error::Sizing(data.len()));
        }
        Ok(ComplexVector { data })
    }

    pub fn from_f64(ctx: &ScalarContext, values: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&(re, im)| Complex::from_f64(ctx, re, im))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<R>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex<R>] {
        &mut self.data
    }

    pub fn into_inner(self) -> Vec<Complex<R>> {
        self.data
    }

    /// Euclidean norm.
    pub fn norm(&self) -> R {
        let mut acc = self.data[0].norm_sqr();
        for z in &self.data[1..] {
            acc += &z.norm_sqr();
        }
        acc.sqrt()
    }
}
