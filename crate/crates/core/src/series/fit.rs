//! Expressing a series as a combination of basis series.

use std::collections::BTreeSet;

use super::coeff::Coeff;
use super::genseries::{Exps, GenSeries, EXPONENT_EPS, MAX_VARS};
use super::SeriesError;

/// Relative size below which a residual coefficient counts as zero.
pub const FIT_TOL: f64 = 1e-10;

/// Outcome of [`fit_to_basis`].
#[derive(Debug, Clone)]
pub struct Fit<C: Coeff> {
    pub coeffs: Vec<C>,
    /// `s - sum c_j basis_j` below the frontier (zero when `in_span`).
    pub residual: GenSeries<C>,
    pub in_span: bool,
    /// Per-variable exponent frontier below which the comparison was made.
    pub frontier: Vec<f64>,
    /// Number of terms of `s` at or beyond the frontier that were ignored.
    pub beyond_frontier: usize,
}

impl<C: Coeff> Fit<C> {
    /// The coefficients, or `NotInSpan` when the residual is nonzero.
    pub fn into_coeffs(self) -> Result<Vec<C>, SeriesError> {
        if self.in_span {
            Ok(self.coeffs)
        } else {
            Err(SeriesError::NotInSpan { residual_terms: self.residual.len() })
        }
    }
}

/// Fits `s` to `basis` over every exponent tuple strictly below the common
/// precision frontier of `s` and the basis.
pub fn fit_to_basis<C: Coeff>(s: &GenSeries<C>, basis: &[GenSeries<f64>]) -> Result<Fit<C>, SeriesError> {
    let ctx = s.ctx();
    let n = ctx.nvars();
    let mut frontier = [f64::INFINITY; MAX_VARS];
    frontier[..n].copy_from_slice(&s.precision()[..n]);
    for b in basis {
        if b.ctx().vars() != ctx.vars() || b.params() != s.params() {
            return Err(SeriesError::VariableMismatch);
        }
        for v in 0..n {
            frontier[v] = frontier[v].min(b.precision()[v]);
        }
    }
    let below = |e: &Exps| {
        let x = s.numeric_exponents(e);
        (0..n).all(|v| x[v] < frontier[v] - EXPONENT_EPS)
    };
    let rows: Vec<Exps> = basis
        .iter()
        .flat_map(|b| b.terms().map(|(e, _)| *e))
        .chain(s.terms().map(|(e, _)| *e))
        .filter(|e| below(e))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let beyond_frontier = s.terms().filter(|(e, _)| !below(e)).count();

    let cols = basis.len();
    let matrix: Vec<Vec<f64>> =
        rows.iter().map(|e| basis.iter().map(|b| b.coeff(e).copied().unwrap_or(0.0)).collect()).collect();
    let pivots = select_rows(&matrix, cols)?;
    let square: Vec<Vec<f64>> = pivots.iter().map(|&r| matrix[r].clone()).collect();
    let inverse = invert(square)?;

    let zero = C::zero();
    let rhs: Vec<&C> = pivots.iter().map(|&r| s.coeff(&rows[r]).unwrap_or(&zero)).collect();
    let coeffs: Vec<C> = (0..cols)
        .map(|j| {
            let mut acc = C::Acc::default();
            for (i, r) in rhs.iter().enumerate() {
                if inverse[j][i] != 0.0 {
                    C::accumulate(&mut acc, r, inverse[j][i]);
                }
            }
            C::finish(acc)
        })
        .collect();

    let precision: Vec<f64> = frontier[..n].to_vec();
    let mut residual = s.restrict_below(&precision);
    for (c, b) in coeffs.iter().zip(basis) {
        let term = b.lift::<C>().mul_coeff(c).restrict_below(&precision);
        residual = residual.sub(&term)?;
    }
    let scale = s.max_magnitude().max(coeffs.iter().fold(0.0, |m, c| m.max(c.magnitude())));
    let in_span = residual.terms().all(|(_, c)| c.magnitude() <= FIT_TOL * scale.max(f64::MIN_POSITIVE));
    if in_span {
        residual = GenSeries::zero(ctx).with_precision(&precision);
    }
    Ok(Fit { coeffs, residual, in_span, frontier: precision, beyond_frontier })
}

/// Greedy partial pivoting; returns one independent row per column.
fn select_rows(matrix: &[Vec<f64>], cols: usize) -> Result<Vec<usize>, SeriesError> {
    let mut work: Vec<Vec<f64>> = matrix.to_vec();
    let mut used = vec![false; work.len()];
    let mut chosen = Vec::with_capacity(cols);
    let scale = matrix.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for col in 0..cols {
        let best = (0..work.len())
            .filter(|&r| !used[r])
            .max_by(|&a, &b| work[a][col].abs().total_cmp(&work[b][col].abs()));
        let Some(p) = best.filter(|&p| work[p][col].abs() > 1e-12 * scale) else {
            return Err(SeriesError::DependentBasis);
        };
        used[p] = true;
        chosen.push(p);
        let pivot_row = work[p].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if used[r] {
                continue;
            }
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for c in col..cols {
                    row[c] -= f * pivot_row[c];
                }
            }
        }
    }
    Ok(chosen)
}

fn invert(mut a: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>, SeriesError> {
    let n = a.len();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).ok_or(SeriesError::DependentBasis)?;
        if a[p][col] == 0.0 {
            return Err(SeriesError::DependentBasis);
        }
        a.swap(col, p);
        inv.swap(col, p);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for j in 0..n {
                        a[r][j] -= f * a[col][j];
                        inv[r][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{ParamTable, Poly, SeriesContext};
    use std::sync::Arc;

    fn setup() -> (Arc<SeriesContext>, Exps) {
        let p = ParamTable::new(vec![("beta".into(), 0.7)]).unwrap();
        let c = SeriesContext::new(vec!["x".into()], p).unwrap();
        let xb = Exps::single(0, c.params().symbol("beta").unwrap());
        (c, xb)
    }

    #[test]
    fn fits_affine_combination() {
        let (c, xb) = setup();
        let basis = vec![GenSeries::constant(&c, 1.0), GenSeries::monomial(&c, 1.0, xb)];
        let s = GenSeries::constant(&c, 3.0).add(&GenSeries::monomial(&c, 5.0, xb)).unwrap();
        let fit = fit_to_basis(&s, &basis).unwrap();
        assert!(fit.in_span);
        assert!((fit.coeffs[0] - 3.0).abs() < 1e-14 && (fit.coeffs[1] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn reports_residual_outside_span() {
        let (c, xb) = setup();
        let basis = vec![GenSeries::constant(&c, 1.0), GenSeries::monomial(&c, 1.0, xb)];
        let x2b = xb.add(&xb);
        let s = GenSeries::monomial(&c, 1.0, x2b);
        let fit = fit_to_basis(&s, &basis).unwrap();
        assert!(!fit.in_span);
        assert_eq!(fit.residual.coeff(&x2b), Some(&1.0));
        assert!(matches!(fit.into_coeffs(), Err(SeriesError::NotInSpan { .. })));
    }

    #[test]
    fn detects_dependence() {
        let (c, xb) = setup();
        let b = GenSeries::monomial(&c, 1.0, xb);
        assert!(matches!(fit_to_basis(&b, &[b.clone(), b.scale(2.0)]), Err(SeriesError::DependentBasis)));
    }

    #[test]
    fn polynomial_coefficients() {
        let (c, xb) = setup();
        let basis = vec![GenSeries::constant(&c, 1.0), GenSeries::monomial(&c, 1.0, xb)];
        let s = GenSeries::monomial(&c, Poly::var(0).add(&Poly::var(1)), xb);
        let fit = fit_to_basis(&s, &basis).unwrap();
        assert!(fit.in_span && fit.coeffs[0].is_zero());
        assert_eq!(fit.coeffs[1], Poly::var(0).add(&Poly::var(1)));
    }
}
