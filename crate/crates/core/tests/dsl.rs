mod common;

use proptest::prelude::*;
use spacetime_convex::dsl::{parse, BinaryOp, Expr, Function, Jet2, ScalarField, Symbol, SymbolKind, Symbols};

fn symbols() -> Symbols {
    Symbols::new(["x".to_owned(), "y".to_owned()], ["a".to_owned()])
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0.0..1e6f64).prop_map(Expr::Number),
        (0u32..20).prop_map(|k| Expr::Number(k as f64)),
        Just(Expr::Symbol(Symbol { kind: SymbolKind::Coordinate, index: 0, name: "x".into() })),
        Just(Expr::Symbol(Symbol { kind: SymbolKind::Coordinate, index: 1, name: "y".into() })),
        Just(Expr::Symbol(Symbol { kind: SymbolKind::Parameter, index: 0, name: "a".into() })),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(6, 64, 2, |inner| {
        let op = prop_oneof![
            Just(BinaryOp::Add),
            Just(BinaryOp::Sub),
            Just(BinaryOp::Mul),
            Just(BinaryOp::Div),
            Just(BinaryOp::Pow)
        ];
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (op, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (0..Function::ALL.len(), inner).prop_map(|(k, a)| Expr::call(Function::ALL[k], a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printing_then_parsing_reproduces_the_tree(e in expr()) {
        let text = e.to_string();
        let back = parse(&text, &symbols()).unwrap();
        prop_assert_eq!(&back, &e, "printed as {}", text);
        prop_assert_eq!(back.to_string(), text);
    }
}

fn jets(u: (f64, f64, f64), v: (f64, f64, f64)) -> (Jet2, Jet2) {
    // Build two jets in two variables from polynomial expressions so every
    // slot is populated.
    let f = ScalarField::new(&format!("{} + {}*x + {}*x*y", u.0, u.1, u.2), &["x", "y"], &[]).unwrap();
    let g = ScalarField::new(&format!("{} + {}*y + {}*x^2", v.0, v.1, v.2), &["x", "y"], &[]).unwrap();
    let p = [0.7, -0.4];
    (f.jet(&p).unwrap(), g.jet(&p).unwrap())
}

proptest! {
    #[test]
    fn products_follow_the_leibniz_rule(
        u in (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64),
        v in (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64),
    ) {
        let (a, b) = jets(u, v);
        let ab = &a * &b;
        prop_assert!((ab.value - a.value * b.value).abs() < 1e-12);
        for i in 0..2 {
            let expected = a.gradient[i] * b.value + a.value * b.gradient[i];
            prop_assert!((ab.gradient[i] - expected).abs() < 1e-12);
            for j in 0..2 {
                let expected = a.hessian(i, j) * b.value
                    + a.gradient[i] * b.gradient[j]
                    + a.gradient[j] * b.gradient[i]
                    + a.value * b.hessian(i, j);
                prop_assert!((ab.hessian(i, j) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn field_jets_match_finite_differences(x in 0.2..2.0f64, y in -1.5..1.5f64) {
        let f = ScalarField::new(
            "sin(x)*y^3 - exp(0.5*x*y) + log(x)*cosh(y) + sqrt(x + 1)/(2 + y^2) + x^y",
            &["x", "y"],
            &[],
        )
        .unwrap();
        let p = [x, y];
        let value = |q: &[f64]| f.value(q).unwrap();
        let jet = f.jet(&p).unwrap();
        let grad = common::fd_gradient(&value, &p);
        let hess = common::fd_hessian(&value, &p);
        for i in 0..2 {
            prop_assert!(common::relative_gap(jet.gradient[i], grad[i]) < 1e-6);
            for j in 0..2 {
                prop_assert!(common::relative_gap(jet.hessian(i, j), hess[(i, j)]) < 1e-6);
            }
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse("x +", &symbols()).unwrap_err().to_string();
    assert!(err.contains("line 1, column 4"), "{err}");
    let err = parse("x\n + )", &symbols()).unwrap_err().to_string();
    assert!(err.contains("line 2, column 4"), "{err}");
    assert!(parse("q", &symbols()).is_err());
}
