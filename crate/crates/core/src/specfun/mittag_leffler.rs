//! Two-parameter Mittag-Leffler function, its derivatives, and the functions
//! built from it (fractional cosine/sine and the Laplace-pair kernel).

use super::gamma::{gamma_real, ln_gamma};
use super::SpecFunError;

/// Default cap on the number of series terms.
pub const DEFAULT_TERM_CAP: usize = 10_000;
/// Default absolute tolerance for series summation.
pub const DEFAULT_TOL: f64 = 1e-15;

/// Orders of `E_{alpha, beta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, SpecFunError> {
        if !(alpha > 0.0 && alpha.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
            return Err(SpecFunError::InvalidParameter(format!(
                "Mittag-Leffler orders must be positive, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }
}

/// Order and frequency of `cos_gamma(lambda t^gamma)` / `sin_gamma(lambda t^gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracTrigParams {
    pub gamma: f64,
    pub lambda: f64,
}

impl FracTrigParams {
    pub fn new(gamma: f64, lambda: f64) -> Result<Self, SpecFunError> {
        if !(gamma > 0.0 && gamma.is_finite()) || !lambda.is_finite() {
            return Err(SpecFunError::InvalidParameter(format!(
                "fractional trig order must be positive, got gamma={gamma}"
            )));
        }
        Ok(Self { gamma, lambda })
    }
}

/// `(k+1)(k+2)...(k+n)`, i.e. `(k+n)!/k!`.
fn rising_ratio(k: usize, n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * (k + j) as f64)
}

/// k-th term of `sum_k (k+n)!/k! z^k / Gamma(alpha k + alpha n + beta)`.
fn ml_term(p: MLParams, n: usize, k: usize, z: f64) -> f64 {
    let arg = p.alpha * (k + n) as f64 + p.beta;
    if z == 0.0 {
        return if k == 0 { rising_ratio(0, n) / gamma_real(arg).unwrap_or(f64::INFINITY) } else { 0.0 };
    }
    let zk = z.powi(k as i32);
    if arg < 170.0 && zk.is_finite() && zk.abs() > 1e-300 {
        if let Ok(g) = gamma_real(arg) {
            return rising_ratio(k, n) * zk / g;
        }
    }
    let log_mag = k as f64 * z.abs().ln() + rising_ratio(k, n).ln() - ln_gamma(arg);
    let sign = if z < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * log_mag.exp()
}

/// Sums the n-th derivative series with a ratio-based tail bound.
fn ml_series(p: MLParams, n: usize, z: f64, tol: f64, cap: usize) -> Result<f64, SpecFunError> {
    if !(tol > 0.0) {
        return Err(SpecFunError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if !z.is_finite() {
        return Err(SpecFunError::InvalidParameter(format!("non-finite argument {z}")));
    }
    let mut sum = 0.0;
    let mut comp = 0.0; // Kahan compensation
    let mut prev = ml_term(p, n, 0, z);
    let mut decreasing = false;
    for k in 0..cap {
        let term = prev;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let next = ml_term(p, n, k + 1, z);
        if next == 0.0 && z == 0.0 {
            return Ok(sum);
        }
        let ratio = if term != 0.0 { (next / term).abs() } else { 0.0 };
        if ratio < 1.0 {
            decreasing = true;
            let tail = next.abs() / (1.0 - ratio);
            if tail <= tol || tail <= 1e-17 * sum.abs() {
                return Ok(sum + next);
            }
        } else if decreasing && next.abs() <= 1e-300 {
            return Ok(sum);
        }
        prev = next;
    }
    Err(SpecFunError::Convergence { terms: cap, z })
}

/// `E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta)`.
pub fn mittag_leffler(p: MLParams, z: f64, tol: f64) -> Result<f64, SpecFunError> {
    ml_series(p, 0, z, tol, DEFAULT_TERM_CAP)
}

/// Like [`mittag_leffler`] with an explicit term cap.
pub fn mittag_leffler_capped(p: MLParams, z: f64, tol: f64, cap: usize) -> Result<f64, SpecFunError> {
    ml_series(p, 0, z, tol, cap)
}

/// n-th derivative of `E_{alpha,beta}` with respect to its argument.
pub fn ml_derivative(p: MLParams, n: usize, z: f64, tol: f64) -> Result<f64, SpecFunError> {
    ml_series(p, n, z, tol, DEFAULT_TERM_CAP)
}

/// `cos_gamma(lambda t^gamma) = E_{2 gamma, 1}(-lambda^2 t^{2 gamma})`.
pub fn frac_cos(p: FracTrigParams, t: f64, tol: f64) -> Result<f64, SpecFunError> {
    check_nonnegative(t)?;
    let ml = MLParams::new(2.0 * p.gamma, 1.0)?;
    mittag_leffler(ml, -p.lambda * p.lambda * t.powf(2.0 * p.gamma), tol)
}

/// `sin_gamma(lambda t^gamma) = lambda t^gamma E_{2 gamma, gamma + 1}(-lambda^2 t^{2 gamma})`.
pub fn frac_sin(p: FracTrigParams, t: f64, tol: f64) -> Result<f64, SpecFunError> {
    check_nonnegative(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let ml = MLParams::new(2.0 * p.gamma, p.gamma + 1.0)?;
    let tg = t.powf(p.gamma);
    Ok(p.lambda * tg * mittag_leffler(ml, -p.lambda * p.lambda * tg * tg, tol)?)
}

fn check_nonnegative(t: f64) -> Result<(), SpecFunError> {
    if t < 0.0 || !t.is_finite() {
        return Err(SpecFunError::InvalidParameter(format!("argument must be nonnegative, got {t}")));
    }
    Ok(())
}

/// Sign of the argument inside the Laplace-pair kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSign {
    Plus,
    Minus,
}

impl KernelSign {
    pub fn value(self) -> f64 {
        match self {
            KernelSign::Plus => 1.0,
            KernelSign::Minus => -1.0,
        }
    }
}

/// `eps_n(t, a; alpha, beta) = t^{alpha n + beta - 1} E^{(n)}_{alpha,beta}(sign a t^alpha)`.
///
/// Its Laplace transform is `n! s^{alpha-beta} / (s^alpha -/+ a)^{n+1}`.
pub fn epsilon_fn(n: usize, t: f64, a: f64, p: MLParams, sign: KernelSign) -> Result<f64, SpecFunError> {
    if !(t > 0.0) {
        return Err(SpecFunError::InvalidParameter(format!("epsilon function needs t > 0, got {t}")));
    }
    let z = sign.value() * a * t.powf(p.alpha);
    let power = t.powf(p.alpha * n as f64 + p.beta - 1.0);
    Ok(power * ml_derivative(p, n, z, DEFAULT_TOL)?)
}

/// Closed-form Laplace transform of [`epsilon_fn`].
pub fn epsilon_transform(n: usize, s: f64, a: f64, p: MLParams, sign: KernelSign) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    fact * s.powf(p.alpha - p.beta) / (s.powf(p.alpha) - sign.value() * a).powi(n as i32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ml(a: f64, b: f64) -> MLParams {
        MLParams::new(a, b).unwrap()
    }

    /// Independent oracle: plain partial sums until they stagnate.
    fn brute_force(alpha: f64, beta: f64, n: usize, z: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..400 {
            let g = gamma_real(alpha * (k + n) as f64 + beta).unwrap();
            let term = rising_ratio(k, n) * z.powi(k as i32) / g;
            let next = sum + term;
            if next == sum && k > 5 {
                break;
            }
            sum = next;
        }
        sum
    }

    #[test]
    fn trivial_reductions() {
        let e = mittag_leffler(ml(1.0, 1.0), 1.0, DEFAULT_TOL).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-15);
        let c = mittag_leffler(ml(2.0, 1.0), 1.0, DEFAULT_TOL).unwrap();
        assert!((c - 1.543_080_634_815_243_7).abs() < 1e-15);
        let d = ml_derivative(ml(1.0, 1.0), 0, 1.0, DEFAULT_TOL).unwrap();
        assert!((d - std::f64::consts::E).abs() < 1e-15);
        let d2 = ml_derivative(ml(1.0, 1.0), 2, 0.0, DEFAULT_TOL).unwrap();
        assert!((d2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_partial_sum_oracle() {
        let got = mittag_leffler(ml(0.5, 1.0), 0.3, DEFAULT_TOL).unwrap();
        assert!((got - brute_force(0.5, 1.0, 0, 0.3)).abs() < 1e-14);
        let got = ml_derivative(ml(0.5, 2.0), 1, 0.2, DEFAULT_TOL).unwrap();
        assert!((got - brute_force(0.5, 2.0, 1, 0.2)).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = ml(0.5, 2.0);
        let h = 1e-5;
        let fd = (mittag_leffler(p, 0.2 + h, DEFAULT_TOL).unwrap() - mittag_leffler(p, 0.2 - h, DEFAULT_TOL).unwrap())
            / (2.0 * h);
        let d = ml_derivative(p, 1, 0.2, DEFAULT_TOL).unwrap();
        assert!((fd - d).abs() < 1e-8);
    }

    #[test]
    fn frac_trig_reductions() {
        let p = FracTrigParams::new(1.0, 2.0).unwrap();
        assert!((frac_cos(p, 0.7, DEFAULT_TOL).unwrap() - 1.4f64.cos()).abs() < 1e-14);
        assert!((frac_sin(p, 0.7, DEFAULT_TOL).unwrap() - 1.4f64.sin()).abs() < 1e-14);
        let q = FracTrigParams::new(0.37, 1.9).unwrap();
        assert_eq!(frac_sin(q, 0.0, DEFAULT_TOL).unwrap(), 0.0);
        assert_eq!(frac_cos(q, 0.0, DEFAULT_TOL).unwrap(), 1.0);
    }

    #[test]
    fn frac_cos_partial_sum_oracle() {
        // cos_{0.8}(1): sum (-1)^k / Gamma(1.6 k + 1)
        let mut want = 0.0;
        for k in 0..60 {
            want += (-1f64).powi(k) / gamma_real(1.6 * k as f64 + 1.0).unwrap();
        }
        let p = FracTrigParams::new(0.8, 1.0).unwrap();
        assert!((frac_cos(p, 1.0, DEFAULT_TOL).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn epsilon_values() {
        let p = ml(1.0, 1.0);
        assert!((epsilon_fn(0, 1.0, 0.0, p, KernelSign::Plus).unwrap() - 1.0).abs() < 1e-15);
        assert!((epsilon_fn(0, 2.0, 1.0, p, KernelSign::Plus).unwrap() - 2f64.exp()).abs() < 1e-13);
        // t^{alpha+beta-1} E'_{alpha,beta}(-a t^alpha) at t = 1
        let q = ml(0.5, 1.0);
        let got = epsilon_fn(1, 1.0, 0.5, q, KernelSign::Minus).unwrap();
        assert!((got - brute_force(0.5, 1.0, 1, -0.5)).abs() < 1e-14);
    }

    #[test]
    fn convergence_error_with_tiny_cap() {
        let r = mittag_leffler_capped(ml(0.5, 1.0), 40.0, DEFAULT_TOL, 5);
        assert!(matches!(r, Err(SpecFunError::Convergence { .. })));
    }

    #[test]
    fn large_arguments_stay_finite() {
        let v = mittag_leffler(ml(1.0, 1.0), 50.0, DEFAULT_TOL).unwrap();
        assert!(((v - 50f64.exp()) / 50f64.exp()).abs() < 1e-13);
        let w = mittag_leffler(ml(0.9, 1.2), 30.0, DEFAULT_TOL).unwrap();
        assert!(w.is_finite() && w > 0.0);
    }
}
