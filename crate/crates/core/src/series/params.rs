use num::{BigInt, BigRational};

use super::exponent::{ExponentVector, MAX_SYMBOLS};
use super::SeriesError;

/// Ordered symbolic parameters (orders such as `alpha1`, `beta`) with numeric values.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamTable {
    names: Vec<String>,
    values: Vec<f64>,
    exact: Vec<BigRational>,
}

impl ParamTable {
    pub fn new(entries: Vec<(String, f64)>) -> Result<Self, SeriesError> {
        if entries.len() > MAX_SYMBOLS {
            return Err(SeriesError::Params(format!(
                "at most {MAX_SYMBOLS} symbolic parameters are supported, got {}",
                entries.len()
            )));
        }
        let mut names = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut exact = Vec::with_capacity(entries.len());
        for (name, value) in entries {
            if names.contains(&name) {
                return Err(SeriesError::Params(format!("duplicate parameter '{name}'")));
            }
            let Some(r) = exact_parameter(value) else {
                return Err(SeriesError::Params(format!("parameter '{name}' is not finite")));
            };
            names.push(name);
            values.push(value);
            exact.push(r);
        }
        Ok(Self { names, values, exact })
    }

    pub fn empty() -> Self {
        Self { names: Vec::new(), values: Vec::new(), exact: Vec::new() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.values[i])
    }

    pub(crate) fn value_at(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub(crate) fn exact_at(&self, i: usize) -> &BigRational {
        &self.exact[i]
    }

    /// Exponent equal to the named parameter.
    pub fn symbol(&self, name: &str) -> Result<ExponentVector, SeriesError> {
        self.index_of(name)
            .map(ExponentVector::symbol)
            .ok_or_else(|| SeriesError::Params(format!("unknown parameter '{name}'")))
    }

    /// Same names with new values.
    pub fn with_values(&self, values: &[f64]) -> Result<Self, SeriesError> {
        if values.len() != self.names.len() {
            return Err(SeriesError::Params("value count does not match parameter count".into()));
        }
        Self::new(self.names.iter().cloned().zip(values.iter().copied()).collect())
    }
}

/// Exact rational for a parameter value: the simplest fraction with a small
/// denominator that rounds to `value`, else the binary fraction itself.
fn exact_parameter(value: f64) -> Option<BigRational> {
    if !value.is_finite() {
        return None;
    }
    let tol = 4.0 * f64::EPSILON * value.abs().max(1.0);
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut x = value;
    for _ in 0..40 {
        let a = x.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.checked_mul(h1).and_then(|v| v.checked_add(h0))?, a.checked_mul(k1).and_then(|v| v.checked_add(k0))?);
        if k2 > 1_000_000 {
            break;
        }
        if (h2 as f64 / k2 as f64 - value).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h2), BigInt::from(k2)));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a as f64;
        if frac == 0.0 {
            break;
        }
        x = 1.0 / frac;
    }
    BigRational::from_float(value)
}
