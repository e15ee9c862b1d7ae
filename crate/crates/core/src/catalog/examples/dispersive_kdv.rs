//! Linear dispersive KdV equation in `1+n` dimensions on fractional trig subspaces.

use crate::fode::ClosedForm;
use crate::operators::FodeSystem;
use crate::series::{MlTerm, Poly};

use super::super::doc::{AlternateDoc, BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::{KnownSolution, TimeFn};
use super::super::{CatalogError, Example, ParamDecl, Range, Values};
use super::{entries, exp, problem, time, Syms};

pub struct DispersiveKdv;

const BETA: [&str; 3] = ["beta1", "beta2", "beta3"];
const LAMBDA: [&str; 3] = ["lambda1", "lambda2", "lambda3"];
const AMP: [&str; 3] = ["a1", "a2", "a3"];

fn dim(v: &Values) -> usize {
    v.at("n") as usize
}

fn var(i: usize) -> String {
    format!("x{}", i + 1)
}

/// Mittag-Leffler pieces of `a sin_α(μ t^α)` and `a cos_α(μ t^α)`.
fn trig_pair(spec: &ProblemSpec, a: f64, mu: f64) -> Result<(TimeFn, TimeFn), CatalogError> {
    let (alpha, two_alpha) = (exp(spec, "alpha")?, exp(spec, "2*alpha")?);
    let sin = MlTerm::new(0, two_alpha, alpha.add_int(1), -mu * mu).shifted(alpha).scaled(a * mu);
    let cos = MlTerm::new(0, two_alpha, exp(spec, "1")?, -mu * mu).scaled(a);
    Ok((TimeFn::ml(sin), TimeFn::ml(cos)))
}

impl Example for DispersiveKdv {
    fn id(&self) -> &'static str {
        "dispersive-kdv"
    }

    fn provenance(&self) -> &'static str {
        "linear dispersive KdV in 1+n dimensions on {cos_beta_i, sin_beta_i}, fractional trig solution; alternate {E_beta_i}"
    }

    fn params(&self) -> Vec<ParamDecl> {
        let mut p = vec![
            ParamDecl {
                name: "n",
                role: super::super::ParamRole::Dimension,
                default: 2.0,
                range: Some(Range::closed(1.0, 3.0)),
                range_text: "n ∈ {1, 2, 3}",
                draw: None,
            },
            ParamDecl::order("alpha", 0.8, "α ∈ (0,1]"),
        ];
        for (i, b) in BETA.iter().enumerate() {
            p.push(ParamDecl::order(b, [0.7, 0.9, 0.8][i], "β_i ∈ (0,1]"));
        }
        for (i, l) in LAMBDA.iter().enumerate() {
            p.push(ParamDecl::coefficient(l, [1.0, 2.0, 1.0][i]));
        }
        for a in AMP {
            p.push(ParamDecl::free(a, 1.0));
        }
        p
    }

    fn check(&self, v: &Values) -> Result<(), CatalogError> {
        let n = v.at("n");
        if n.fract() != 0.0 {
            return Err(CatalogError::ParamOutOfRange { name: "n".into(), value: n, range: "n ∈ {1, 2, 3}".into() });
        }
        Ok(())
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let n = dim(v);
        let decls = self.params();
        let used = |name: &str| match name.chars().last().and_then(|c| c.to_digit(10)) {
            Some(i) if name != "n" => (i as usize) <= n,
            _ => true,
        };
        let vars: Vec<String> = std::iter::once("t".to_string()).chain((0..n).map(var)).collect();
        let var_refs: Vec<&str> = vars.iter().map(String::as_str).collect();
        let f = ExprDoc::field("f");
        let operator = ExprDoc::sum((0..n).map(|i| f.clone().dx_seq(&var(i), BETA[i], 3).scale(-1.0)).collect());
        let mut basis = Vec::new();
        let mut unknowns = Vec::new();
        let mut ics = Vec::new();
        for i in 0..n {
            let lambda = v.at(LAMBDA[i]);
            basis.push(BasisFn::cos(&var(i), BETA[i], lambda));
            basis.push(BasisFn::sin(&var(i), BETA[i], lambda));
            unknowns.push(format!("K{}1", i + 1));
            unknowns.push(format!("K{}2", i + 1));
            ics.push(vec![0.0]);
            ics.push(vec![v.at(AMP[i])]);
        }
        let alternate = AlternateDoc {
            label: "mittag-leffler".into(),
            bases: vec![(0..n).map(|i| BasisFn::ml(&var(i), BETA[i], v.at(LAMBDA[i]))).collect()],
            unknowns: vec![(0..n).map(|i| format!("K{}", i + 1)).collect()],
        };
        let mut spec = problem(
            self.id(),
            &var_refs,
            entries(decls.iter().filter(|d| used(d.name)), v),
            vec![ComponentDoc { name: "f".into(), time: vec![time(1.0, "alpha", TimeKind::Caputo)], operator, basis, unknowns }],
        );
        spec.alternates.push(alternate);
        spec.initial_data = Some(ics);
        Ok(spec)
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        let mut out = Vec::new();
        for i in 0..dim(v) {
            let cube = v.at(LAMBDA[i]).powi(3);
            out.push(s.k(&format!("K{}2", i + 1))?.scale(cube));
            out.push(s.k(&format!("K{}1", i + 1))?.scale(-cube));
        }
        Ok(out)
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let mut ks = Vec::new();
        for i in 0..dim(v) {
            let (sin, cos) = trig_pair(spec, v.at(AMP[i]), v.at(LAMBDA[i]).powi(3))?;
            ks.push(sin);
            ks.push(cos);
        }
        let free: Vec<&str> = AMP[..dim(v)].to_vec();
        Ok(KnownSolution::new(
            "K_i1 = a_i sin_alpha(lambda_i^3 t^alpha), K_i2 = a_i cos_alpha(lambda_i^3 t^alpha)",
            ClosedForm::FracTrig,
            vec![ks],
        )
        .with_free(&free, spec))
    }

    fn alternate_known(&self, v: &Values, spec: &ProblemSpec, which: usize) -> Option<Result<KnownSolution, CatalogError>> {
        if which != 0 {
            return None;
        }
        let build = || -> Result<KnownSolution, CatalogError> {
            let alpha = exp(spec, "alpha")?;
            let one = exp(spec, "1")?;
            let ks = (0..dim(v))
                .map(|i| TimeFn::ml(MlTerm::new(0, alpha, one, -v.at(LAMBDA[i]).powi(3)).scaled(v.at(AMP[i]))))
                .collect();
            Ok(KnownSolution::new("K_i = a_i E_alpha(-lambda_i^3 t^alpha)", ClosedForm::MittagLeffler, vec![ks]))
        };
        Some(build())
    }

    fn verify_grid(&self, v: &Values) -> Vec<(f64, f64, usize)> {
        std::iter::once((0.0, 1.0, 5)).chain((0..dim(v)).map(|_| (0.0, 2.0, 5))).collect()
    }
}
