//! Sparse multivariate polynomials with real coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::coeff::CANCEL_TOL;

/// Product of symbols with positive exponents, sorted by symbol id.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(sym: u32) -> Self {
        Self(vec![(sym, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (s, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => out.push((s, e)),
            }
        }
        Self(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn exponent_of(&self, sym: u32) -> u32 {
        self.0.iter().find(|&&(s, _)| s == sym).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self(out)
    }

    /// Replaces every symbol through `map` (exponents kept).
    pub fn relabel(&self, map: impl Fn(u32) -> u32) -> Self {
        Self::from_pairs(self.0.iter().map(|&(s, e)| (map(s), e)).collect())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order: total degree first, then larger exponent
    /// on the lower-numbered symbol ranks higher.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        while i < a.len() && i < b.len() {
            if a[i].0 != b[i].0 {
                // the monomial containing the smaller symbol is larger
                return if a[i].0 < b[i].0 { Ordering::Greater } else { Ordering::Less };
            }
            if a[i].1 != b[i].1 {
                return a[i].1.cmp(&b[i].1);
            }
            i += 1;
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(s, e)| if e == 1 { format!("k{s}") } else { format!("k{s}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Polynomial over symbols `k_i`, stored in graded-lex canonical order.
#[derive(Clone, PartialEq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, f64>,
}

/// Running sum of polynomial contributions with per-monomial magnitude tracking.
#[derive(Default)]
pub struct PolyAccumulator {
    terms: BTreeMap<Monomial, (f64, f64)>,
}

impl PolyAccumulator {
    pub fn add_scaled(&mut self, p: &Poly, factor: f64) {
        for (m, &c) in &p.terms {
            let v = c * factor;
            let slot = self.terms.entry(m.clone()).or_insert((0.0, 0.0));
            slot.0 += v;
            slot.1 += v.abs();
        }
    }

    pub fn add_product(&mut self, a: &Poly, b: &Poly, factor: f64) {
        for (ma, &ca) in &a.terms {
            for (mb, &cb) in &b.terms {
                let v = ca * cb * factor;
                let slot = self.terms.entry(ma.mul(mb)).or_insert((0.0, 0.0));
                slot.0 += v;
                slot.1 += v.abs();
            }
        }
    }

    pub fn finish(self) -> Poly {
        let terms = self
            .terms
            .into_iter()
            .filter(|&(_, (sum, mag))| sum != 0.0 && sum.abs() > CANCEL_TOL * mag)
            .map(|(m, (sum, _))| (m, sum))
            .collect();
        Poly { terms }
    }
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(sym: u32) -> Self {
        Self::monomial(Monomial::var(sym), 1.0)
    }

    pub fn monomial(m: Monomial, c: f64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, f64)>) -> Self {
        let mut acc = PolyAccumulator::default();
        for (m, c) in terms {
            acc.add_scaled(&Self::monomial(m, c), 1.0);
        }
        acc.finish()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the highest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|&(s, _)| s)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, k: f64) -> Self {
        if k == 0.0 {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, &c)| (m.clone(), c * k)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut acc = PolyAccumulator::default();
        acc.add_scaled(self, 1.0);
        acc.add_scaled(other, 1.0);
        acc.finish()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut acc = PolyAccumulator::default();
        acc.add_scaled(self, 1.0);
        acc.add_scaled(other, -1.0);
        acc.finish()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = PolyAccumulator::default();
        acc.add_product(self, other, 1.0);
        acc.finish()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(1.0), |acc, _| acc.mul(self))
    }

    /// Evaluates with `values[sym]` for each symbol.
    pub fn eval(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, &c)| c * m.0.iter().map(|&(s, e)| values[s as usize].powi(e as i32)).product::<f64>())
            .sum()
    }

    pub fn relabel(&self, map: impl Fn(u32) -> u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, &c)| (m.relabel(&map), c)))
    }

    /// Replaces symbol `sym` by the polynomial `value`.
    pub fn substitute(&self, sym: u32, value: &Poly) -> Self {
        let mut acc = PolyAccumulator::default();
        for (m, &c) in &self.terms {
            let e = m.exponent_of(sym);
            let rest = Self::monomial(Monomial::from_pairs(m.0.iter().copied().filter(|&(s, _)| s != sym).collect()), c);
            if e == 0 {
                acc.add_scaled(&rest, 1.0);
            } else {
                acc.add_product(&rest, &value.pow(e), 1.0);
            }
        }
        acc.finish()
    }

    /// `self / sym` when every monomial contains `sym`.
    pub fn divide_by_var(&self, sym: u32) -> Option<Self> {
        if self.is_zero() || self.terms.keys().any(|m| m.exponent_of(sym) == 0) {
            return None;
        }
        let terms = self.terms.iter().map(|(m, &c)| {
            let pairs = m.0.iter().map(|&(s, e)| if s == sym { (s, e - 1) } else { (s, e) }).collect();
            (Monomial::from_pairs(pairs), c)
        });
        Some(Self { terms: terms.collect() })
    }

    /// Drops coefficients with magnitude at most `threshold`.
    pub fn prune(&self, threshold: f64) -> Self {
        Self { terms: self.terms.iter().filter(|(_, c)| c.abs() > threshold).map(|(m, &c)| (m.clone(), c)).collect() }
    }

    /// Monomial-wise comparison with relative tolerance `tol` against the larger magnitude.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs());
        let keys: BTreeSet<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|m| (self.coeff(m) - other.coeff(m)).abs() <= tol * scale)
    }

    /// Renders like `-0.5*K1*L2 + 2*K2^2` using `name` for each symbol.
    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(u32) -> String) -> impl fmt::Display + 'a {
        DisplayPoly { p: self, name }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |s: u32| format!("k{s}");
        let shown = self.display_with(&name).to_string();
        f.write_str(&shown)
    }
}

struct DisplayPoly<'a> {
    p: &'a Poly,
    name: &'a dyn Fn(u32) -> String,
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.p.terms().enumerate() {
            let mag = c.abs();
            match (i, c < 0.0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .map(|&(s, e)| if e == 1 { (self.name)(s) } else { format!("{}^{e}", (self.name)(s)) })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitute_and_divide() {
        // x*(x + 2y) with x := y - 1
        let (x, y) = (Poly::var(0), Poly::var(1));
        let p = x.mul(&x.add(&y.scale(2.0)));
        let q = p.substitute(0, &y.sub(&Poly::constant(1.0)));
        let expected = y.sub(&Poly::constant(1.0)).mul(&y.scale(3.0).sub(&Poly::constant(1.0)));
        assert!(q.approx_eq(&expected, 1e-15));
        let cof = p.divide_by_var(0).unwrap();
        assert!(cof.approx_eq(&x.add(&y.scale(2.0)), 0.0));
        assert!(p.divide_by_var(1).is_none());
    }

    #[test]
    fn graded_lex_order() {
        let k0 = Monomial::var(0);
        let k1 = Monomial::var(1);
        let k0k1 = k0.mul(&k1);
        let k1sq = k1.mul(&k1);
        assert!(Monomial::one() < k1);
        assert!(k1 < k0);
        assert!(k0 < k1sq);
        assert!(k1sq < k0k1);
    }

    #[test]
    fn cancellation_is_exact() {
        let p = Poly::var(0).add(&Poly::var(1));
        let q = p.sub(&Poly::var(1)).sub(&Poly::var(0));
        assert!(q.is_zero());
        let sq = p.mul(&p);
        assert_eq!(sq.coeff(&Monomial::var(0).mul(&Monomial::var(1))), 2.0);
        assert_eq!(sq.len(), 3);
    }

    #[test]
    fn local_cleanup_drops_noise() {
        let a = Poly::constant(1.0 + 1e-15);
        let b = Poly::constant(-1.0);
        assert!(a.add(&b).is_zero());
        // a genuinely small coefficient next to a large one survives
        let c = Poly::constant(1e-14).add(&Poly::var(0).scale(1e6));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn display_canonical() {
        let p = Poly::var(0).mul(&Poly::var(1)).scale(-2.0).add(&Poly::var(1).pow(2)).add(&Poly::constant(3.0));
        let name = |s: u32| ["K1", "L2"][s as usize].to_string();
        assert_eq!(p.display_with(&name).to_string(), "-2*K1*L2 + L2^2 + 3");
    }
}
