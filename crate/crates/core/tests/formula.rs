mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vclab::formula::{
    definable_space, nip_shatter_search, parse_formula, relu_graph, sigmoid_net, sigmoid_net_classify, Backend, CmpOp,
    Expr, Formula, ParameterSource, SearchConfig, Term,
};
use vclab::rational::{int, ratio};
use vclab::{shatters, vc_dimension, HypothesisSpace, Instance, Labeling, Rational};

fn rat(x: i64, d: i64) -> Rational {
    ratio(x, d)
}

#[test]
fn relu_against_direct_oracle() {
    let f = relu_graph();
    let again = parse_formula(&f.to_string(), &["x", "y"], &[] as &[&str]).unwrap();
    assert_eq!(again, f);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..1000 {
        let x = rat(rng.random_range(-40..=40), rng.random_range(1..5));
        let y = if rng.random_bool(0.5) {
            if x > int(0) { x.clone() } else { int(0) }
        } else {
            rat(rng.random_range(-40..=40), rng.random_range(1..5))
        };
        let relu = if x > int(0) { x.clone() } else { int(0) };
        let want = y == relu;
        assert_eq!(f.eval(&[x.clone(), y.clone()], &[], Backend::Exact).unwrap(), want);
        assert_eq!(f.eval(&[x, y], &[], Backend::Float).unwrap(), want);
    }
}

#[test]
fn sigmoid_network_round_trips_and_matches() {
    let f = sigmoid_net(2, 2);
    let text = f.to_string();
    let again = parse_formula(&text, &f.objects, &f.params).unwrap();
    assert_eq!(again, f);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut agree = 0;
    for _ in 0..500 {
        let x: Vec<f64> = (0..2).map(|_| rng.random_range(-3.0..3.0)).collect();
        let w: Vec<f64> = (0..f.params.len()).map(|_| rng.random_range(-2.0..2.0)).collect();
        if f.eval_f64(&x, &w).unwrap() == sigmoid_net_classify(&x, &w, 2) {
            agree += 1;
        }
    }
    // only decision-boundary rounding may differ
    assert!(agree >= 498, "{agree}");
    assert!(matches!(
        definable_space(f, ParameterSource::Unrestricted { budget: 10, seed: 0 }, 2, Backend::Exact),
        Err(vclab::Error::ExactBackendExp)
    ));
}

#[test]
fn co_singleton_dichotomies() {
    let f = parse_formula("x != p", &["x"], &["p"]).unwrap();
    let space = definable_space(f, ParameterSource::Unrestricted { budget: 1_000, seed: 0 }, 1, Backend::Exact).unwrap();
    let d = space.realized_dichotomies(&common::ints([1, 2, 3])).unwrap();
    assert!(d.exact);
    let got: Vec<String> = d.labelings().map(|l| l.to_string()).collect();
    let mut want = vec!["111", "011", "101", "110"];
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn grid_spaces_agree_with_closed_forms() {
    let grid: Vec<Rational> = (0..=12).map(|i| rat(i, 2)).collect();
    let cases = [
        ("p <= x", vec!["p"], HypothesisSpace::thresholds(), 1),
        ("a <= x and x <= b", vec!["a", "b"], HypothesisSpace::intervals(), 2),
        ("x != p", vec!["p"], HypothesisSpace::co_singletons(), 1),
    ];
    let pool = common::ints(1..6);
    for (text, params, closed, vc) in cases {
        let f = parse_formula(text, &["x"], &params).unwrap();
        let axes = vec![grid.clone(); params.len()];
        let space = definable_space(f, ParameterSource::Grid(axes), 1, Backend::Exact).unwrap();
        assert_eq!(vc_dimension(&space, &pool, 4).unwrap().value, vc, "{text}");
        for m in 1..=4 {
            let a = &pool[..m];
            assert_eq!(
                space.realized_dichotomies(a).unwrap().len(),
                closed.realized_dichotomies(a).unwrap().len(),
                "{text} m={m}"
            );
        }
    }
}

#[test]
fn search_verdicts_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let families: [(&str, &[&str], &[&str]); 5] = [
        ("p <= x", &["x"], &["p"]),
        ("a <= x and x <= b", &["x"], &["a", "b"]),
        ("a * x + b * y + c >= 0", &["x", "y"], &["a", "b", "c"]),
        ("x * x <= p", &["x"], &["p"]),
        ("a * x * x + b * x + c > 0", &["x"], &["a", "b", "c"]),
    ];
    for round in 0..100 {
        let (text, objects, params) = families[round % families.len()];
        let f = parse_formula(text, objects, params).unwrap();
        let n = rng.random_range(1..=4);
        let mut points: Vec<Vec<Rational>> = Vec::new();
        while points.len() < n {
            let p: Vec<Rational> = (0..objects.len()).map(|_| int(rng.random_range(-4..=4))).collect();
            if !points.contains(&p) {
                points.push(p);
            }
        }
        let cfg = SearchConfig { budget: 3_000, seed: round as u64, grid: None };
        let r = nip_shatter_search(&f, &points, Backend::Exact, &cfg).unwrap();
        for (labeling, w) in &r.witnesses {
            for (x, &b) in points.iter().zip(labeling.bits()) {
                assert_eq!(f.eval(x, w, Backend::Exact).unwrap(), b);
            }
        }
        assert_eq!(r.witnesses.len() + r.missing.len(), 1 << n);
        assert_eq!(r.is_shattered(), r.missing.is_empty());
        let space = definable_space(f.clone(), ParameterSource::Unrestricted { budget: 3_000, seed: 0 }, objects.len(), Backend::Exact).unwrap();
        if space.has_exact_oracle() {
            let instances: Vec<Instance> = points.iter().map(|p| Instance::point(p.clone())).collect();
            let exact = shatters(&space, &instances).unwrap();
            if r.is_shattered() {
                assert!(exact.is_shattered(), "{text} on {points:?}");
            }
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_formula("x <= (p", &["x"], &["p"]).unwrap_err();
    assert_eq!((err.line, err.col), (1, 6));
    let err = parse_formula("forall x (x = x)", &["x"], &[] as &[&str]).unwrap_err();
    assert_eq!(err.line, 1);
    assert!(parse_formula("x = q", &["x"], &["p"]).is_err());
    assert!(parse_formula("x ≤ p ∧ ¬(x = p)", &["x"], &["p"]).is_ok());
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (-3i64..4).prop_map(|c| Term::Const(int(c))),
        (1i64..4, 2i64..4).prop_map(|(a, b)| Term::Const(ratio(a, b))),
        (0usize..2).prop_map(Term::Object),
        (0usize..2).prop_map(Term::Param),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Mul(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Term::Neg(Box::new(a))),
        ]
    })
}

fn arb_op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![
        Just(CmpOp::Lt),
        Just(CmpOp::Le),
        Just(CmpOp::Eq),
        Just(CmpOp::Ne),
        Just(CmpOp::Gt),
        Just(CmpOp::Ge)
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let atom = prop_oneof![
        1 => Just(Expr::True),
        1 => Just(Expr::False),
        6 => (arb_op(), arb_term(), arb_term()).prop_map(|(op, a, b)| Expr::Cmp(op, a, b)),
    ];
    atom.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Implies(Box::new(a), Box::new(b))),
        ]
    })
}

fn formula_of(body: Expr) -> Formula {
    Formula {
        objects: vec!["x".into(), "y".into()],
        params: vec!["p".into(), "q".into()],
        body,
    }
}

fn small() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-5i64..6).prop_map(int), 2)
}

proptest! {
    #[test]
    fn printing_round_trips(body in arb_expr(), x in small(), w in small()) {
        let f = formula_of(body);
        let text = f.to_string();
        let g = parse_formula(&text, &f.objects, &f.params).unwrap();
        prop_assert_eq!(g.to_string(), text);
        prop_assert_eq!(g.eval(&x, &w, Backend::Exact).unwrap(), f.eval(&x, &w, Backend::Exact).unwrap());
    }

    #[test]
    fn backends_agree_on_small_integers(body in arb_expr(), x in small(), w in small()) {
        let f = formula_of(body);
        prop_assert_eq!(f.eval(&x, &w, Backend::Exact).unwrap(), f.eval(&x, &w, Backend::Float).unwrap());
    }
}

#[test]
fn labeling_codes_are_lexicographic() {
    let all: Vec<String> = Labeling::all(2).map(|l| l.to_string()).collect();
    assert_eq!(all, ["00", "01", "10", "11"]);
}
