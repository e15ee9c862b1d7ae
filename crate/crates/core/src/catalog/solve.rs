use crate::fode::{solve_power_ansatz, solve_series, FodeSolution, FreeBindings, InitialData};
use crate::fracalc::DerivKind;
use crate::operators::FodeSystem;

use super::{known_for_spec, CatalogError, ProblemSpec};

/// Reduced system of a spec together with its series solutions.
#[derive(Debug, Clone)]
pub struct Solved {
    pub system: FodeSystem,
    /// One entry for initial-value problems; one per ansatz branch otherwise.
    pub solutions: Vec<FodeSolution>,
}

impl Solved {
    /// `K(t) = …` lines, branches separated by a `# branch i` header when there are several.
    pub fn render(&self) -> String {
        let names = &self.system.symbols.unknown_names;
        let mut out = String::new();
        for (b, sol) in self.solutions.iter().enumerate() {
            if self.solutions.len() > 1 {
                out.push_str(&format!("# branch {}\n", b + 1));
            }
            for (name, k) in names.iter().zip(&sol.components) {
                out.push_str(&format!("{name}(t) = {}\n", k.display()));
            }
        }
        out
    }
}

/// Solves the reduced system of `spec`.
///
/// Caputo systems need initial data and go through the series solver at `truncation`;
/// Riemann-Liouville systems go through the power-law ansatz.
pub fn solve(spec: &ProblemSpec, truncation: f64) -> Result<Solved, CatalogError> {
    spec.validate()?;
    let rl = spec.components.iter().flat_map(|c| &c.time).any(|t| DerivKind::from(t.kind) == DerivKind::RiemannLiouville);
    let mut spec = spec.clone();
    spec.truncation = truncation;
    let system = spec.system()?.reduce()?;
    let solutions = if rl {
        let bindings = match known_for_spec(&spec) {
            Ok(k) => k.solver_bindings,
            Err(CatalogError::UnknownExample(_)) => FreeBindings::new(),
            Err(e) => return Err(e),
        };
        solve_power_ansatz(&system, &bindings)?
    } else {
        let ics = spec
            .initial_data
            .clone()
            .ok_or_else(|| CatalogError::Spec("a Caputo system needs initial_data to be solved".into()))?;
        vec![solve_series(&system, &InitialData { values: ics }, truncation)?]
    };
    Ok(Solved { system, solutions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, Values};

    #[test]
    fn initial_value_solution_starts_at_the_data() {
        let (spec, _) = build("boussinesq-system", &Values::new()).unwrap();
        let solved = solve(&spec, 4.0).unwrap();
        assert_eq!(solved.solutions.len(), 1);
        let ics = spec.initial_data.as_ref().unwrap();
        for (k, ic) in solved.solutions[0].components.iter().zip(ics) {
            let origin = vec![0.0; k.ctx().nvars()];
            assert!((k.eval(&origin).unwrap() - ic[0]).abs() < 1e-12);
        }
        assert_eq!(solved.render().lines().count(), 4);
    }
}
