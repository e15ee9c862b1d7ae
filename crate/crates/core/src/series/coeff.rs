use std::fmt;

use super::poly::{Poly, PolyAccumulator};

/// Relative threshold below which a sum of contributions is treated as exact cancellation.
pub const CANCEL_TOL: f64 = 1e-12;

/// Coefficient ring of a [`GenSeries`](super::GenSeries).
///
/// Sums are built through an accumulator that tracks the magnitude of the
/// individual contributions, so cancellation is judged locally.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Acc: Default;

    fn zero() -> Self;
    fn from_real(x: f64) -> Self;
    fn is_zero(&self) -> bool;
    fn scale(&self, k: f64) -> Self;
    fn magnitude(&self) -> f64;
    fn accumulate(acc: &mut Self::Acc, v: &Self, k: f64);
    fn accumulate_product(acc: &mut Self::Acc, a: &Self, b: &Self, k: f64);
    fn finish(acc: Self::Acc) -> Self;
    /// Equality up to `tol` relative to `scale`.
    fn close_to(&self, other: &Self, tol: f64, scale: f64) -> bool;
}

#[derive(Default)]
pub struct RealAccumulator {
    sum: f64,
    mag: f64,
}

impl Coeff for f64 {
    type Acc = RealAccumulator;

    fn zero() -> Self {
        0.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn accumulate(acc: &mut RealAccumulator, v: &f64, k: f64) {
        let x = v * k;
        acc.sum += x;
        acc.mag += x.abs();
    }
    fn accumulate_product(acc: &mut RealAccumulator, a: &f64, b: &f64, k: f64) {
        let x = a * b * k;
        acc.sum += x;
        acc.mag += x.abs();
    }
    fn finish(acc: RealAccumulator) -> f64 {
        if acc.sum.abs() <= CANCEL_TOL * acc.mag {
            0.0
        } else {
            acc.sum
        }
    }
    fn close_to(&self, other: &f64, tol: f64, scale: f64) -> bool {
        (self - other).abs() <= tol * scale.max(self.abs()).max(other.abs())
    }
}

impl Coeff for Poly {
    type Acc = PolyAccumulator;

    fn zero() -> Self {
        Poly::zero()
    }
    fn from_real(x: f64) -> Self {
        Poly::constant(x)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn scale(&self, k: f64) -> Self {
        Poly::scale(self, k)
    }
    fn magnitude(&self) -> f64 {
        self.max_abs()
    }
    fn accumulate(acc: &mut PolyAccumulator, v: &Poly, k: f64) {
        acc.add_scaled(v, k);
    }
    fn accumulate_product(acc: &mut PolyAccumulator, a: &Poly, b: &Poly, k: f64) {
        acc.add_product(a, b, k);
    }
    fn finish(acc: PolyAccumulator) -> Poly {
        acc.finish()
    }
    fn close_to(&self, other: &Poly, tol: f64, scale: f64) -> bool {
        let s = scale.max(self.max_abs()).max(other.max_abs());
        let diff = self.sub(other);
        diff.max_abs() <= tol * s
    }
}
