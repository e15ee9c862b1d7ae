//! Numeric Laplace transform on a finite horizon, for verification only.

use super::SpecFunError;

/// Number of geometric refinements toward `t = 0`.
pub const GRADING_DEPTH: usize = 40;
const MAX_BISECTIONS: usize = 40;

// Gauss-Kronrod (7, 15) nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> (f64, f64) {
    let (value, err) = gauss_kronrod(f, a, b);
    if err <= tol || depth == 0 || !value.is_finite() {
        return (value, err);
    }
    let m = 0.5 * (a + b);
    let (l, el) = adaptive(f, a, m, 0.5 * tol, depth - 1);
    let (r, er) = adaptive(f, m, b, 0.5 * tol, depth - 1);
    (l + r, el + er)
}

/// `int_0^T e^{-s t} f(t) dt` with tolerance `tol` on the summed error estimate.
///
/// `[0, T]` is split geometrically (ratio 1/2) toward the origin so that
/// integrable `t^{beta-1}` endpoint behaviour is resolved.
pub fn laplace_numeric<F: Fn(f64) -> f64>(f: F, s: f64, horizon: f64, tol: f64) -> Result<f64, SpecFunError> {
    if !(s > 0.0) || !(horizon > 0.0) || !(tol > 0.0) {
        return Err(SpecFunError::InvalidParameter(format!(
            "laplace_numeric needs s > 0, T > 0, tol > 0 (got s={s}, T={horizon}, tol={tol})"
        )));
    }
    let integrand = |t: f64| (-s * t).exp() * f(t);
    let pieces = GRADING_DEPTH + 1;
    let local_tol = tol / (2.0 * pieces as f64);
    let mut total = 0.0;
    let mut estimate = 0.0;
    let mut hi = horizon;
    for _ in 0..GRADING_DEPTH {
        let lo = 0.5 * hi;
        let (v, e) = adaptive(&integrand, lo, hi, local_tol, MAX_BISECTIONS);
        total += v;
        estimate += e;
        hi = lo;
    }
    let (v, e) = adaptive(&integrand, 0.0, hi, local_tol, MAX_BISECTIONS);
    total += v;
    estimate += e;
    if !total.is_finite() || estimate > tol {
        return Err(SpecFunError::Quadrature { estimate, tol });
    }
    Ok(total)
}

/// Smallest horizon of the form `T0 * 2^k` with `e^{-sT} max(1, |f(T)|) < 1e-13`.
pub fn laplace_horizon<F: Fn(f64) -> f64>(f: F, s: f64) -> f64 {
    let mut t = 10.0 / s.max(1e-3);
    for _ in 0..20 {
        let tail = (-s * t).exp() * f(t).abs().max(1.0);
        if tail < 1e-13 {
            return t;
        }
        t *= 1.5;
    }
    t
}
