//! Replays invariance, reduction, residual and solver cross-checks for an example.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::fode::{solve_power_ansatz, solve_series, FodeError, FodeSolution, InitialData};
use crate::fracalc::DerivKind;
use crate::operators::{residual, FodeSystem, Grid, PdeSystem};
use crate::series::GenSeries;

use super::doc::ProblemSpec;
use super::solution::KnownSolution;
use super::{bind, example, CatalogError, Example, Values};

/// Residual bound a closed form must meet.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Truncation used by the series-solver cross-check.
pub const ORACLE_TRUNCATION: f64 = 6.0;
/// Relative agreement required between computed and displayed reduced systems.
const TARGET_TOLERANCE: f64 = 1e-10;
/// Relative agreement required between a solver and the closed form.
const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub status: StageStatus,
    /// The number the stage is judged on, when it has one.
    pub value: Option<f64>,
    pub detail: String,
}

impl Stage {
    fn judged(name: &str, value: f64, bound: f64, detail: String) -> Self {
        let status = if value <= bound { StageStatus::Pass } else { StageStatus::Fail };
        Self { name: name.into(), status, value: Some(value), detail }
    }

    fn fail(name: &str, detail: impl fmt::Display) -> Self {
        Self { name: name.into(), status: StageStatus::Fail, value: None, detail: detail.to_string() }
    }

    fn skipped(name: &str, detail: impl fmt::Display) -> Self {
        Self { name: name.into(), status: StageStatus::Skipped, value: None, detail: detail.to_string() }
    }

    fn flag(name: &str, ok: bool, detail: String) -> Self {
        let status = if ok { StageStatus::Pass } else { StageStatus::Fail };
        Self { name: name.into(), status, value: None, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: Vec<(String, f64)>,
    pub tolerance: f64,
    pub stages: Vec<Stage>,
}

impl VerificationReport {
    /// No stage failed; skipped stages do not count against the example.
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.status != StageStatus::Fail)
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// Largest residual over the main and alternate subspaces.
    pub fn max_residual(&self) -> Option<f64> {
        self.stages.iter().filter(|s| s.name.starts_with("residual")).filter_map(|s| s.value).reduce(f64::max)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "example {}", self.id)?;
        let shown: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "params {}", shown.join(" "))?;
        for s in &self.stages {
            let status = match s.status {
                StageStatus::Pass => "PASS",
                StageStatus::Fail => "FAIL",
                StageStatus::Skipped => "SKIP",
            };
            match s.value {
                Some(v) => writeln!(f, "{status} {:<24} {v:.3e}  {}", s.name, s.detail)?,
                None => writeln!(f, "{status} {:<24} {}", s.name, s.detail)?,
            }
        }
        if let Some(r) = self.max_residual() {
            let cmp = if r <= self.tolerance { "≤" } else { ">" };
            writeln!(f, "max_residual {r:.3e} {cmp} {:e}", self.tolerance)?;
        }
        write!(f, "{}", if self.passed() { "verified" } else { "verification failed" })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub tolerance: f64,
    pub truncation: Option<f64>,
    /// One `(min, max, count)` per variable; the example's default when `None`.
    pub grid: Option<Vec<(f64, f64, usize)>>,
    pub oracle: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tolerance: DEFAULT_TOLERANCE, truncation: None, grid: None, oracle: true }
    }
}

/// Builds the example with `overrides` and runs every stage.
///
/// Errors are reserved for requests that cannot be built at all; failing checks are report entries.
pub fn verify(id: &str, overrides: &Values, opts: &VerifyOptions) -> Result<VerificationReport, CatalogError> {
    let ex = example(id)?;
    let values = bind(ex, overrides)?;
    let spec = ex.spec(&values)?;
    verify_bound(ex, &values, spec, opts)
}

/// Verifies a spec document against the catalog example its id names.
pub fn verify_spec(spec: &ProblemSpec, opts: &VerifyOptions) -> Result<VerificationReport, CatalogError> {
    spec.validate()?;
    let ex = example(&spec.id)?;
    let values = bind(ex, &spec.values())?;
    verify_bound(ex, &values, spec.clone(), opts)
}

/// Runs many requests in parallel; the reports come back sorted by id, then by request order.
pub fn verify_many(
    requests: &[(String, Values)],
    opts: &VerifyOptions,
) -> Vec<Result<VerificationReport, CatalogError>> {
    let mut out: Vec<(usize, Result<VerificationReport, CatalogError>)> =
        requests.par_iter().enumerate().map(|(i, (id, v))| (i, verify(id, v, opts))).collect();
    out.sort_by(|(i, _), (j, _)| requests[*i].0.cmp(&requests[*j].0).then(i.cmp(j)));
    out.into_iter().map(|(_, r)| r).collect()
}

fn seed_for(id: &str, seed: u64) -> u64 {
    // FNV-1a, stable across platforms and releases
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed
}

/// `count` admissible parameter sets with the drawn parameters sampled uniformly.
pub fn random_draws(id: &str, seed: u64, count: usize) -> Result<Vec<Values>, CatalogError> {
    let ex = example(id)?;
    let decls = ex.params();
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(id, seed));
    let mut draws = Vec::with_capacity(count);
    let mut attempts = 0;
    while draws.len() < count {
        attempts += 1;
        if attempts > 1000 * count.max(1) {
            return Err(CatalogError::Spec(format!("could not draw admissible parameters for {id}")));
        }
        let mut v = Values::new();
        for d in &decls {
            if let Some((lo, hi)) = d.draw {
                v.set(d.name, rng.gen_range(lo..hi));
            }
        }
        if bind(ex, &v).is_ok() {
            draws.push(v);
        }
    }
    Ok(draws)
}

fn verify_bound(
    ex: &dyn Example,
    values: &Values,
    mut spec: ProblemSpec,
    opts: &VerifyOptions,
) -> Result<VerificationReport, CatalogError> {
    if let Some(t) = opts.truncation {
        spec.truncation = t;
    }
    spec.validate()?;
    let sys = spec.system()?;
    let mut stages = Vec::new();

    stages.push(invariance("invariance", &sys));
    for (i, alt) in spec.alternates.iter().enumerate() {
        let name = format!("invariance[{}]", alt.label);
        stages.push(match spec.alternate_system(i) {
            Ok(s) => invariance(&name, &s),
            Err(e) => Stage::fail(&name, e),
        });
    }

    let fode = match sys.reduce() {
        Ok(f) => Some(f),
        Err(e) => {
            stages.push(Stage::fail("reduction", e));
            None
        }
    };
    if let Some(fode) = &fode {
        stages.push(reduction(ex, values, fode));
    }

    let grid = opts.grid.clone().unwrap_or_else(|| ex.verify_grid(values));
    let known = ex.known(values, &spec);
    match &known {
        Ok(k) => stages.push(residual_stage("residual", &sys, k, &grid, opts.tolerance)),
        Err(e) => stages.push(Stage::fail("residual", e)),
    }
    for (i, alt) in spec.alternates.iter().enumerate() {
        if let Some(k) = ex.alternate_known(values, &spec, i) {
            let name = format!("residual[{}]", alt.label);
            stages.push(match (k, spec.alternate_system(i)) {
                (Ok(k), Ok(s)) => residual_stage(&name, &s, &k, &grid, opts.tolerance),
                (Err(e), _) | (_, Err(e)) => Stage::fail(&name, e),
            });
        }
    }

    if opts.oracle {
        stages.push(match (&fode, &known) {
            (Some(_), Ok(k)) => oracle(&spec, k, &grid),
            _ => Stage::skipped("oracle", "needs a reduced system and a closed form"),
        });
    }

    Ok(VerificationReport {
        id: spec.id.clone(),
        params: spec.params.iter().map(|p| (p.name.clone(), p.value)).collect(),
        tolerance: opts.tolerance,
        stages,
    })
}

fn invariance(name: &str, sys: &PdeSystem) -> Stage {
    match sys.check_invariant() {
        Ok(r) => {
            let bad: Vec<&str> =
                sys.components.iter().zip(&r.fits).filter(|(_, f)| !f.in_span).map(|(c, _)| c.name.as_str()).collect();
            let detail = if bad.is_empty() { "subspace is invariant".into() } else { format!("not invariant for {}", bad.join(", ")) };
            Stage::flag(name, r.invariant, detail)
        }
        Err(e) => Stage::fail(name, e),
    }
}

fn reduction(ex: &dyn Example, values: &Values, fode: &FodeSystem) -> Stage {
    let target = match ex.target(values, fode) {
        Ok(t) => t,
        Err(e) => return Stage::fail("reduction", e),
    };
    if target.len() != fode.equations.len() {
        return Stage::fail("reduction", format!("{} target equations for {} unknowns", target.len(), fode.equations.len()));
    }
    let mut worst = 0.0f64;
    let mut worst_name = String::new();
    for eq in &fode.equations {
        let want = &target[eq.unknown];
        let scale = want.max_abs().max(eq.rhs.max_abs()).max(1.0);
        let d = eq.rhs.sub(want).max_abs() / scale;
        if worst_name.is_empty() || d > worst {
            worst = d;
            worst_name = fode.unknown_names()[eq.unknown].clone();
        }
    }
    Stage::judged("reduction", worst, TARGET_TOLERANCE, format!("{} equations, worst at {worst_name}", fode.equations.len()))
}

fn residual_stage(name: &str, sys: &PdeSystem, known: &KnownSolution, axes: &[(f64, f64, usize)], tol: f64) -> Stage {
    let run = || -> Result<Stage, CatalogError> {
        let form = known.solution_form(&sys.ctx)?;
        let grid = Grid::new(axes.to_vec())?;
        let r = residual(sys, &form, &grid)?;
        Ok(Stage::judged(name, r.max_relative, tol, format!("max_abs {:.3e}, {} grid points", r.max_abs, grid.len())))
    };
    run().unwrap_or_else(|e| Stage::fail(name, e))
}

/// Worst relative gap between two sets of coefficient functions at the sample times.
fn solution_gap(a: &[GenSeries<f64>], b: &[GenSeries<f64>], times: &[f64]) -> Result<f64, CatalogError> {
    let mut gap = 0.0f64;
    let mut scale = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let cut: Vec<f64> = x.precision().iter().zip(y.precision()).map(|(p, q)| p.min(*q)).collect();
        let (x, y) = (x.restrict_below(&cut), y.restrict_below(&cut));
        let nv = x.ctx().nvars();
        for &t in times {
            let mut pt = vec![1.0; nv];
            pt[0] = t;
            let (u, v) = (x.eval(&pt)?, y.eval(&pt)?);
            gap = gap.max((u - v).abs());
            scale = scale.max(u.abs()).max(v.abs());
        }
    }
    Ok(gap / scale.max(1e-300))
}

fn oracle(spec: &ProblemSpec, known: &KnownSolution, axes: &[(f64, f64, usize)]) -> Stage {
    let rl = spec.components.iter().flat_map(|c| &c.time).any(|t| DerivKind::from(t.kind) == DerivKind::RiemannLiouville);
    let (t_lo, t_hi, _) = axes.first().copied().unwrap_or((0.1, 1.0, 2));
    let times: Vec<f64> = (0..5).map(|i| t_lo.max(0.05) + (t_hi - t_lo.max(0.05)) * i as f64 / 4.0).collect();
    let run = || -> Result<Stage, CatalogError> {
        if rl {
            let fode = spec.system()?.reduce()?;
            let want = known.fode_solution(&fode.ctx)?;
            let candidates = match solve_power_ansatz(&fode, &known.solver_bindings) {
                Ok(c) => c,
                Err(e) => return Ok(Stage::fail("oracle", format!("power-law ansatz: {e}"))),
            };
            let best = candidates
                .iter()
                .map(|c| solution_gap(&c.components, &want.components, &times))
                .collect::<Result<Vec<f64>, _>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            return Ok(Stage::judged(
                "oracle",
                best,
                ORACLE_TOLERANCE,
                format!("power-law ansatz, closest of {} branches", candidates.len()),
            ));
        }
        let Some(ics) = &spec.initial_data else {
            return Ok(Stage::skipped("oracle", "no initial data"));
        };
        let mut coarse = spec.clone();
        coarse.truncation = ORACLE_TRUNCATION;
        let fode = coarse.system()?.reduce()?;
        let solved: FodeSolution = match solve_series(&fode, &InitialData { values: ics.clone() }, ORACLE_TRUNCATION) {
            Ok(s) => s,
            Err(e @ (FodeError::Lattice { .. } | FodeError::Unsupported(_))) => {
                return Ok(Stage::skipped("oracle", format!("series solver: {e}")))
            }
            Err(e) => return Ok(Stage::fail("oracle", format!("series solver: {e}"))),
        };
        let want = known.fode_solution(&fode.ctx)?;
        let gap = solution_gap(&solved.components, &want.components, &times)?;
        Ok(Stage::judged("oracle", gap, ORACLE_TOLERANCE, format!("series solver at truncation {ORACLE_TRUNCATION}")))
    };
    run().unwrap_or_else(|e| Stage::fail("oracle", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible_and_admissible() {
        let a = random_draws("mixed-derivative", 7, 3).unwrap();
        let b = random_draws("mixed-derivative", 7, 3).unwrap();
        assert_eq!(a, b);
        let ex = example("mixed-derivative").unwrap();
        for v in &a {
            let bound = bind(ex, v).unwrap();
            assert!(bound.at("gamma") < bound.at("alpha1") && bound.at("gamma") < bound.at("alpha2"));
        }
        assert_ne!(a, random_draws("mixed-derivative", 8, 3).unwrap());
    }

    #[test]
    fn report_display_ends_with_verdict() {
        let r = VerificationReport {
            id: "x".into(),
            params: vec![("alpha".into(), 0.5)],
            tolerance: 1e-8,
            stages: vec![Stage::judged("residual", 1e-12, 1e-8, String::new()), Stage::skipped("oracle", "none")],
        };
        assert!(r.passed());
        let text = r.to_string();
        assert!(text.contains("max_residual 1.000e-12 ≤ 1e-8"));
        assert!(text.ends_with("verified"));
    }
}
