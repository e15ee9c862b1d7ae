//! Two-term (orders α and α+1) coupled system on fractional trig and Mittag-Leffler subspaces.

use crate::fode::ClosedForm;
use crate::operators::FodeSystem;
use crate::series::{ExponentVector, Poly};

use super::super::doc::{BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::{KnownSolution, MlSeriesSum, TimeAtom, TimeFn};
use super::super::{CatalogError, Example, ParamDecl, Values};
use super::{entries, exp, names, problem, time, Syms};

pub struct CoupledMl;

const UNKNOWNS: [&str; 3] = ["K1", "K2", "L1"];

/// Solution of `a D^α K + D^{α+1} K = μ K` with `K(0) = k0`, `K'(0) = k1`.
pub(super) fn two_term(alpha: ExponentVector, a: f64, mu: f64, k0: f64, k1: f64) -> TimeFn {
    let sum = |beta0: i64, shift0: i64, scale: f64| {
        TimeAtom::MlSum(MlSeriesSum {
            alpha: ExponentVector::integer(1),
            arg: -a,
            beta0: ExponentVector::integer(beta0),
            dbeta: alpha,
            shift0: ExponentVector::integer(shift0),
            dshift: alpha.add_int(1),
            ratio: mu,
            scale,
        })
    };
    TimeFn(vec![sum(1, 0, k0), sum(2, 1, a * k0 + k1)])
}

fn ic_names(u: &str) -> [String; 2] {
    [format!("{u}_0"), format!("{u}_1")]
}

impl Example for CoupledMl {
    fn id(&self) -> &'static str {
        "coupled-ml"
    }

    fn provenance(&self) -> &'static str {
        "coupled system with D^a + D^(a+1) in time on {sin_beta, cos_beta} x {E_beta}, epsilon-series solution"
    }

    fn params(&self) -> Vec<ParamDecl> {
        let mut p = vec![
            ParamDecl::order("alpha1", 0.6, "α₁ ∈ (0,1]"),
            ParamDecl::order("alpha2", 0.8, "α₂ ∈ (0,1]"),
            ParamDecl::order("beta", 0.7, "β ∈ (0,1]"),
            ParamDecl::coefficient("a1", 0.5),
            ParamDecl::coefficient("a2", 0.8),
            ParamDecl::coefficient("m1", 1.0),
            ParamDecl::coefficient("n1", 1.0),
            ParamDecl::coefficient("n2", 0.5),
        ];
        for (name, value) in [("K1_0", 1.0), ("K1_1", 0.0), ("K2_0", 0.0), ("K2_1", 1.0), ("L1_0", 1.0), ("L1_1", 0.5)] {
            p.push(ParamDecl::free(name, value));
        }
        p
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let (f, g) = (ExprDoc::field("f"), ExprDoc::field("g"));
        let (a1, a2, m1, n1, n2) = (v.at("a1"), v.at("a2"), v.at("m1"), v.at("n1"), v.at("n2"));
        let two = |o: &str| vec![time(1.0, o, TimeKind::Caputo), time(1.0, &format!("{o}+1"), TimeKind::Caputo)];
        let n_f = ExprDoc::sum(vec![
            f.clone().dx_seq("x", "beta", 2),
            g.clone().times(g.clone().dx("x", "beta")).scale(m1),
            g.clone().pow(2).scale(a1 * m1),
        ]);
        let n_g = ExprDoc::sum(vec![
            g.clone().dx_seq("x", "beta", 2),
            f.clone().dx_seq("x", "beta", 2).scale(n1),
            f.scale(a2 * a2 * n1),
            g.scale(n2),
        ]);
        let mut spec = problem(
            self.id(),
            &["t", "x"],
            entries(&self.params(), v),
            vec![
                ComponentDoc {
                    name: "f".into(),
                    time: two("alpha1"),
                    operator: n_f,
                    basis: vec![BasisFn::sin("x", "beta", a2), BasisFn::cos("x", "beta", a2)],
                    unknowns: names(&UNKNOWNS[..2]),
                },
                ComponentDoc {
                    name: "g".into(),
                    time: two("alpha2"),
                    operator: n_g,
                    basis: vec![BasisFn::ml("x", "beta", -a1)],
                    unknowns: names(&UNKNOWNS[2..]),
                },
            ],
        );
        spec.initial_data = Some(UNKNOWNS.iter().map(|u| ic_names(u).iter().map(|n| v.at(n)).collect()).collect());
        Ok(spec)
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        let (a1, a2, n2) = (v.at("a1"), v.at("a2"), v.at("n2"));
        Ok(vec![s.k("K1")?.scale(-a2 * a2), s.k("K2")?.scale(-a2 * a2), s.k("L1")?.scale(a1 * a1 + n2)])
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let (a1, a2, n2) = (v.at("a1"), v.at("a2"), v.at("n2"));
        let k = |u: &str, order: &str, mu: f64| -> Result<TimeFn, CatalogError> {
            let [n0, n1] = ic_names(u);
            Ok(two_term(exp(spec, order)?, 1.0, mu, v.at(&n0), v.at(&n1)))
        };
        Ok(KnownSolution::new(
            "K(t) = sum_m mu^m/m! [K(0) eps_m(t; 1, 1+a m) + (K(0)+K'(0)) eps_m(t; 1, 2+a m)] for each unknown",
            ClosedForm::EpsilonSeries,
            vec![vec![k("K1", "alpha1", -a2 * a2)?, k("K2", "alpha1", -a2 * a2)?], vec![k("L1", "alpha2", a1 * a1 + n2)?]],
        ))
    }

    fn verify_grid(&self, _v: &Values) -> Vec<(f64, f64, usize)> {
        vec![(0.0, 1.0, 6), (0.0, 1.5, 6)]
    }
}
