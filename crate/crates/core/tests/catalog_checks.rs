use std::collections::BTreeMap;

use fracsub::catalog::{
    build, list, random_draws, verify, CatalogError, KnownSolution, ProblemSpec, StageStatus, TimeAtom, TimeFn, Values,
    VerifyOptions,
};
use fracsub::operators::{residual, Grid};
use fracsub::series::{ExponentVector, ParamTable};
use fracsub::specfun::gamma_real;

fn ids() -> Vec<&'static str> {
    list().into_iter().map(|(id, _)| id).collect()
}

/// Power atoms of a coefficient grouped by numeric exponent (rounded to 1e-9).
fn power_coeffs(k: &TimeFn, params: &ParamTable) -> BTreeMap<i64, f64> {
    let mut out = BTreeMap::new();
    for atom in &k.0 {
        match atom {
            TimeAtom::Power { coeff, exponent } => {
                *out.entry((exponent.value(params) * 1e9).round() as i64).or_insert(0.0) += coeff;
            }
            other => panic!("expected a polynomial coefficient, got {other:?}"),
        }
    }
    out.retain(|_, c| *c != 0.0);
    out
}

fn expect_terms(k: &TimeFn, params: &ParamTable, want: &[(f64, f64)]) {
    let got = power_coeffs(k, params);
    let mut expected = BTreeMap::new();
    for &(e, c) in want {
        if c != 0.0 {
            *expected.entry((e * 1e9).round() as i64).or_insert(0.0) += c;
        }
    }
    assert_eq!(got.keys().collect::<Vec<_>>(), expected.keys().collect::<Vec<_>>(), "{got:?} vs {expected:?}");
    for (e, c) in &expected {
        assert!((got[e] - c).abs() <= 1e-14 * c.abs().max(1.0), "t^{e}: {} vs {c}", got[e]);
    }
}

#[test]
fn every_example_verifies_at_defaults() {
    for id in ids() {
        let r = verify(id, &Values::new(), &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
        for stage in ["invariance", "reduction", "residual"] {
            assert_eq!(r.stage(stage).map(|s| s.status), Some(StageStatus::Pass), "{id} {stage}\n{r}");
        }
    }
}

#[test]
fn every_example_verifies_at_three_random_draws() {
    for id in ids() {
        for (i, draw) in random_draws(id, 2024, 3).unwrap().iter().enumerate() {
            let r = verify(id, draw, &VerifyOptions::default()).unwrap();
            assert!(r.passed(), "draw {i} of {id}:\n{r}");
            assert!(r.max_residual().unwrap() <= 1e-8);
        }
    }
}

#[test]
fn perturbed_closed_forms_are_rejected() {
    for id in ids() {
        let (spec, mut known): (ProblemSpec, KnownSolution) = build(id, &Values::new()).unwrap();
        let sys = spec.system().unwrap();
        let axes = fracsub::catalog::example(id).unwrap().verify_grid(&spec.values());
        let grid = Grid::new(axes).unwrap();
        let exact = residual(&sys, &known.solution_form(&sys.ctx).unwrap(), &grid).unwrap();
        // a bump of 0.1% of the field size, in a direction no example's equation annihilates
        let bump = TimeFn::power(1e-3 * exact.max_field, ExponentVector::integer(1));
        known.coefficients[0][0] = known.coefficients[0][0].clone().plus(bump);
        let r = residual(&sys, &known.solution_form(&sys.ctx).unwrap(), &grid).unwrap();
        assert!(r.max_relative > 1e-6, "{id}: perturbation went unnoticed ({})", r.max_relative);
    }
}

#[test]
fn specs_round_trip_through_json() {
    for id in ids() {
        let (spec, _) = build(id, &Values::new()).unwrap();
        let back = ProblemSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec, "{id}");
        let again = fracsub::catalog::known_for_spec(&back).unwrap();
        assert_eq!(again.coefficients.len(), back.components.len());
    }
}

#[test]
fn boussinesq_initial_value_solution() {
    let v = Values::from_pairs([("alpha1", 0.4), ("alpha2", 0.7), ("beta", 0.9)]);
    let (spec, known) = build("boussinesq-system", &v).unwrap();
    let p = spec.order_params().unwrap();
    let g = gamma_real(1.9).unwrap();
    let e = std::f64::consts::E;
    expect_terms(&known.coefficients[0][0], &p, &[(0.0, e), (1.1, -12.0 * g * g / gamma_real(2.1).unwrap())]);
    expect_terms(&known.coefficients[0][1], &p, &[(0.0, 2.0)]);
    let l1 = [
        (0.0, 1.5),
        (0.7, (6.0 * e - 2.0) * g / gamma_real(1.7).unwrap()),
        (1.8, -72.0 * g.powi(3) / gamma_real(2.8).unwrap()),
    ];
    expect_terms(&known.coefficients[1][0], &p, &l1);
    expect_terms(&known.coefficients[1][1], &p, &[(0.7, 12.0 * g / gamma_real(1.7).unwrap())]);
}

#[test]
fn boussinesq_degenerate_orders() {
    let (alpha, a, b, c, d, m1) = (0.6, 1.2, 0.7, -0.4, 0.9, 1.3);
    let v = Values::from_pairs([
        ("alpha1", alpha),
        ("alpha2", alpha),
        ("beta", 1.0),
        ("a", a),
        ("b", b),
        ("c", c),
        ("d", d),
        ("m1", m1),
    ]);
    let (spec, known) = build("boussinesq-system", &v).unwrap();
    let p = spec.order_params().unwrap();
    let gm = |k: f64| gamma_real(1.0 + k * alpha).unwrap();
    let (t1, t2, t3) = (alpha, 2.0 * alpha, 3.0 * alpha);
    expect_terms(&known.coefficients[0][0], &p, &[(0.0, a), (t1, -d / gm(1.0)), (t2, -3.0 * b * b / gm(2.0))]);
    expect_terms(&known.coefficients[0][1], &p, &[(0.0, b)]);
    let l1 = [(0.0, c), (t1, (3.0 * a * b - m1 * b) / gm(1.0)), (t2, -3.0 * b * d / gm(2.0)), (t3, -9.0 * b.powi(3) / gm(3.0))];
    expect_terms(&known.coefficients[1][0], &p, &l1);
    expect_terms(&known.coefficients[1][1], &p, &[(0.0, d), (t1, 3.0 * b * b / gm(1.0))]);
    assert!(verify("boussinesq-system", &v, &VerifyOptions::default()).unwrap().passed());
}

#[test]
fn diffusion_like_classical_limit() {
    let v = Values::from_pairs([("alpha", 1.0), ("beta", 1.0), ("gamma", 1.0)]);
    assert!(verify("diffusion-like", &v, &VerifyOptions::default()).unwrap().passed());
    let (spec, known) = build("diffusion-like", &v).unwrap();
    let eval = known.evaluator(&spec).unwrap();
    for t in [0.0, 0.3, 1.0, 1.7] {
        for x in [0.0, 0.5, 1.5] {
            for y in [0.2, 1.0, 2.0] {
                let f = eval.eval(&[t, x, y]).unwrap()[0];
                let want = t.sinh() * x * x + t.cosh() * y * y;
                assert!((f - want).abs() <= 1e-10, "({t},{x},{y}): {f} vs {want}");
            }
        }
    }
}

#[test]
fn boussinesq_2d_classical_limit() {
    let v = Values::from_pairs([("alpha", 1.0), ("beta", 1.0), ("gamma", 1.0), ("r", 1.0), ("s", 0.0), ("a2", 0.4)]);
    assert!(verify("boussinesq-2d", &v, &VerifyOptions::default()).unwrap().passed());
    let (spec, known) = build("boussinesq-2d", &v).unwrap();
    let eval = known.evaluator(&spec).unwrap();
    let (a1, a2, a3) = (1.8, 0.4, std::f64::consts::E.powi(2));
    // f_t = (f f_x)_x + (f f_y)_y for f = a1 + (a2² + a3²) t + a2 x + a3 y
    for (t, x, y) in [(0.0, 0.0, 0.0), (0.5, 1.0, 2.0), (1.0, 0.3, 0.7)] {
        let f = eval.eval(&[t, x, y]).unwrap()[0];
        let want = a1 + (a2 * a2 + a3 * a3) * t + a2 * x + a3 * y;
        assert!((f - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
}

#[test]
fn figure_configurations_verify() {
    let dispersive = Values::from_pairs([
        ("n", 2.0),
        ("alpha", 0.8),
        ("beta1", 0.7),
        ("beta2", 0.9),
        ("a1", 1.0),
        ("a2", 1.0),
        ("lambda1", 1.0),
        ("lambda2", 2.0),
    ]);
    let r = verify("dispersive-kdv", &dispersive, &VerifyOptions::default()).unwrap();
    assert!(r.passed() && r.max_residual().unwrap() <= 1e-8, "{r}");
    for n in [1.0, 3.0] {
        let r = verify("dispersive-kdv", &Values::new().with("n", n), &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
    }
    let kdv = Values::from_pairs([("alpha", 1.0), ("beta", 1.0), ("M1", 1.0), ("a1", 2.0), ("a2", 4.0), ("b1", 1.0), ("b2", 2.0)]);
    let r = verify("kdv-system", &kdv, &VerifyOptions::default()).unwrap();
    assert!(r.passed() && r.max_residual().unwrap() <= 1e-8, "{r}");
}

#[test]
fn out_of_range_parameters_cite_the_admissible_set() {
    match build("burgers-coupled", &Values::new().with("alpha", 0.5)) {
        Err(CatalogError::ParamOutOfRange { name, range, .. }) => {
            assert_eq!(name, "alpha");
            assert!(range.contains("1/2"), "{range}");
        }
        other => panic!("expected ParamOutOfRange, got {other:?}"),
    }
    match build("mixed-derivative", &Values::new().with("gamma", 0.85)) {
        Err(CatalogError::ParamOutOfRange { range, .. }) => assert_eq!(range, "γ < α₁, γ < α₂"),
        other => panic!("expected ParamOutOfRange, got {other:?}"),
    }
    assert!(matches!(build("dispersive-kdv", &Values::new().with("n", 4.0)), Err(CatalogError::ParamOutOfRange { .. })));
    assert!(matches!(build("kdv-system", &Values::new().with("b2", 0.5)), Err(CatalogError::ParamOutOfRange { .. })));
}

#[test]
fn verify_is_deterministic_across_parallel_runs() {
    let requests: Vec<(String, Values)> = ids().into_iter().rev().map(|id| (id.to_string(), Values::new())).collect();
    let opts = VerifyOptions::default();
    let a = fracsub::catalog::verify_many(&requests, &opts);
    let b = fracsub::catalog::verify_many(&requests, &opts);
    let ids_a: Vec<String> = a.iter().map(|r| r.as_ref().unwrap().id.clone()).collect();
    let mut sorted = ids_a.clone();
    sorted.sort();
    assert_eq!(ids_a, sorted);
    assert_eq!(a, b);
}
