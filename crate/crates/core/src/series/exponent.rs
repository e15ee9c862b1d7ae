//! Exact exponents: a rational constant plus rational multiples of parameters.

use std::fmt;

use num::integer::Integer;
use num::rational::Ratio;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::params::ParamTable;
use super::SeriesError;

/// Maximum number of symbolic parameters an exponent may reference.
pub const MAX_SYMBOLS: usize = 6;

/// `(num[0] + sum_i num[i+1] * p_i) / den`, kept in lowest terms with `den > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    num: [i64; MAX_SYMBOLS + 1],
    den: i64,
}

impl Default for ExponentVector {
    fn default() -> Self {
        Self::zero()
    }
}

impl ExponentVector {
    pub const fn zero() -> Self {
        Self { num: [0; MAX_SYMBOLS + 1], den: 1 }
    }

    pub fn integer(c: i64) -> Self {
        let mut e = Self::zero();
        e.num[0] = c;
        e
    }

    pub fn rational(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        let mut e = Self { num: [0; MAX_SYMBOLS + 1], den: q };
        e.num[0] = p;
        e.normalized()
    }

    /// `1 * p_index`.
    pub fn symbol(index: usize) -> Self {
        assert!(index < MAX_SYMBOLS, "symbol index {index} exceeds capacity");
        let mut e = Self::zero();
        e.num[index + 1] = 1;
        e
    }

    fn normalized(mut self) -> Self {
        if self.den < 0 {
            self.den = -self.den;
            for n in &mut self.num {
                *n = -*n;
            }
        }
        if self.num.iter().all(|&n| n == 0) {
            return Self::zero();
        }
        if self.den != 1 {
            let g = self.num.iter().fold(self.den, |g, &n| g.gcd(&n));
            if g > 1 {
                self.den /= g;
                for n in &mut self.num {
                    *n /= g;
                }
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&n| n == 0)
    }

    /// True when no parameter symbol occurs.
    pub fn is_constant(&self) -> bool {
        self.num[1..].iter().all(|&n| n == 0)
    }

    pub fn constant_part(&self) -> Ratio<i64> {
        Ratio::new(self.num[0], self.den)
    }

    pub fn symbol_coeff(&self, index: usize) -> Ratio<i64> {
        Ratio::new(self.num[index + 1], self.den)
    }

    /// Indices of symbols with nonzero coefficient.
    pub fn symbols(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_SYMBOLS).filter(move |&i| self.num[i + 1] != 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            let mut out = *self;
            for (o, b) in out.num.iter_mut().zip(other.num.iter()) {
                *o = o.checked_add(*b).expect("exponent overflow");
            }
            return if out.den == 1 { out } else { out.normalized() };
        }
        let l = self.den.lcm(&other.den);
        let (fa, fb) = (l / self.den, l / other.den);
        let mut out = Self { num: [0; MAX_SYMBOLS + 1], den: l };
        for i in 0..=MAX_SYMBOLS {
            out.num[i] = self.num[i] * fa + other.num[i] * fb;
        }
        out.normalized()
    }

    pub fn neg(&self) -> Self {
        let mut out = *self;
        for n in &mut out.num {
            *n = -*n;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let mut out = *self;
        for n in &mut out.num {
            *n = n.checked_mul(k).expect("exponent overflow");
        }
        out.normalized()
    }

    pub fn scale(&self, r: Ratio<i64>) -> Self {
        let mut out = self.scale_int(*r.numer());
        out.den = out.den.checked_mul(*r.denom()).expect("exponent overflow");
        out.normalized()
    }

    pub fn add_int(&self, k: i64) -> Self {
        self.add(&Self::integer(k))
    }

    /// Numeric value under the parameter assignment.
    pub fn value(&self, params: &ParamTable) -> f64 {
        let mut v = self.num[0] as f64;
        for i in self.symbols() {
            v += self.num[i + 1] as f64 * params.value_at(i);
        }
        v / self.den as f64
    }

    /// Exact rational value, treating each parameter's `f64` as an exact binary fraction.
    pub fn exact_value(&self, params: &ParamTable) -> BigRational {
        let mut v = BigRational::from_integer(BigInt::from(self.num[0]));
        for i in self.symbols() {
            v += BigRational::from_integer(BigInt::from(self.num[i + 1])) * params.exact_at(i);
        }
        v / BigRational::from_integer(BigInt::from(self.den))
    }

    /// The integer value, if the exponent is exactly an integer under `params`.
    pub fn as_integer(&self, params: &ParamTable) -> Option<i64> {
        if self.is_constant() {
            return (self.den == 1).then_some(self.num[0]);
        }
        let v = self.value(params);
        if (v - v.round()).abs() > 1e-9 {
            return None;
        }
        let exact = self.exact_value(params);
        if exact.is_integer() {
            exact.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Exact test for `{0, -1, -2, ...}`.
    pub fn is_nonpositive_integer(&self, params: &ParamTable) -> bool {
        matches!(self.as_integer(params), Some(n) if n <= 0)
    }

    /// Exact comparison of the numeric value with an integer.
    pub fn cmp_integer(&self, k: i64, params: &ParamTable) -> std::cmp::Ordering {
        let v = self.value(params);
        let d = v - k as f64;
        if d.abs() > 1e-9 {
            return d.partial_cmp(&0.0).unwrap_or(std::cmp::Ordering::Equal);
        }
        let diff = self.exact_value(params) - BigRational::from_integer(BigInt::from(k));
        if diff.is_zero() {
            std::cmp::Ordering::Equal
        } else if diff.is_positive() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Less
        }
    }

    /// Smallest integer `n` with `n >= value` (exact).
    pub fn ceil(&self, params: &ParamTable) -> i64 {
        if let Some(n) = self.as_integer(params) {
            return n;
        }
        self.value(params).ceil() as i64
    }

    /// Renders with parameter names, e.g. `2*beta+1`.
    pub fn display<'a>(&'a self, params: &'a ParamTable) -> impl fmt::Display + 'a {
        DisplayExp { e: self, names: params.names() }
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayExp { e: self, names }
    }

    /// Parses the textual form produced by [`ExponentVector::display`].
    pub fn parse(text: &str, params: &ParamTable) -> Result<Self, SeriesError> {
        parse_exponent(text, params.names())
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..MAX_SYMBOLS).map(|i| format!("p{i}")).collect();
        let shown = self.display_with(&names).to_string();
        f.write_str(&shown)
    }
}

struct DisplayExp<'a> {
    e: &'a ExponentVector,
    names: &'a [String],
}

fn write_ratio(f: &mut fmt::Formatter<'_>, r: Ratio<i64>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for DisplayExp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.e.symbols() {
            let c = self.e.symbol_coeff(i);
            let name = self.names.get(i).map(String::as_str).unwrap_or("?");
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            if !mag.is_one() {
                write_ratio(f, mag)?;
                f.write_str("*")?;
            }
            f.write_str(name)?;
            first = false;
        }
        let c = self.e.constant_part();
        if first {
            return write_ratio(f, c);
        }
        if !c.is_zero() {
            f.write_str(if c.is_negative() { "-" } else { "+" })?;
            write_ratio(f, c.abs())?;
        }
        Ok(())
    }
}

fn parse_error(text: &str, why: &str) -> SeriesError {
    SeriesError::Parse(format!("cannot parse exponent '{text}': {why}"))
}

fn parse_ratio(text: &str, whole: &str) -> Result<Ratio<i64>, SeriesError> {
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let p: i64 = p.trim().parse().map_err(|_| parse_error(whole, "bad number"))?;
    let q: i64 = q.trim().parse().map_err(|_| parse_error(whole, "bad denominator"))?;
    if q == 0 {
        return Err(parse_error(whole, "zero denominator"));
    }
    Ok(Ratio::new(p, q))
}

fn parse_exponent(text: &str, names: &[String]) -> Result<ExponentVector, SeriesError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(parse_error(text, "empty"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' && bytes[i - 1] != b'/' {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut acc = ExponentVector::zero();
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        if body.is_empty() {
            return Err(parse_error(text, "dangling sign"));
        }
        let (coeff, sym) = match body.rsplit_once('*') {
            Some((c, s)) => (parse_ratio(c, text)?, Some(s)),
            None if body.chars().next().is_some_and(|c| c.is_ascii_digit()) => (parse_ratio(body, text)?, None),
            None => (Ratio::one(), Some(body)),
        };
        let coeff = coeff * sign;
        let piece = match sym {
            None => ExponentVector::rational(*coeff.numer(), *coeff.denom()),
            Some(name) => {
                let idx = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| parse_error(text, &format!("unknown symbol '{name}'")))?;
                ExponentVector::symbol(idx).scale(coeff)
            }
        };
        acc = acc.add(&piece);
    }
    Ok(acc)
}
