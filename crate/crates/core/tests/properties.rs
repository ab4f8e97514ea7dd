//! Randomized invariants.

use largen::analysis::{assemble_partial_sums, shanks_transform};
use largen::expansion::{build_w_table, scale_problem};
use largen::potential::{eval_point, eval_series, Literal};
use largen::recursion::recurse;
use largen::recursion::Branch;
use largen::{
    parse_potential, solve, BigReal, MassConvention, PotentialExpr, PowerSeries, PrecisionContext,
    ProblemSpec, State,
};
use proptest::prelude::*;

const TRUNC: usize = 8;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(60).unwrap()
}

fn series(c: &PrecisionContext, v: &[f64]) -> PowerSeries {
    PowerSeries::new(v.iter().map(|&x| c.from_f64(x)).collect())
}

fn close(a: &PowerSeries, b: &PowerSeries, tol: &BigReal) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| {
        let scale = x.abs().max(y.abs()).max(ctx().one());
        (x - y).abs() <= tol * &scale
    })
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, TRUNC)
}

fn unit_led() -> impl Strategy<Value = Vec<f64>> {
    (0.3f64..3.0, prop::collection::vec(-2.0f64..2.0, TRUNC - 1)).prop_map(|(c0, rest)| {
        let mut v = vec![c0];
        v.extend(rest);
        v
    })
}

proptest! {
    #[test]
    fn product_commutes_and_distributes(a in coeffs(), b in coeffs(), c in coeffs()) {
        let x = ctx();
        let (a, b, c) = (series(&x, &a), series(&x, &b), series(&x, &c));
        let tol = x.tolerance(5);
        prop_assert!(close(&a.mul(&b), &b.mul(&a), &tol));
        prop_assert!(close(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c)), &tol));
    }

    #[test]
    fn reciprocal_inverts(a in unit_led()) {
        let x = ctx();
        let a = series(&x, &a);
        let one = PowerSeries::constant(&x, x.one(), TRUNC);
        prop_assert!(close(&a.mul(&a.recip(&x).unwrap()), &one, &x.tolerance(8)));
    }

    #[test]
    fn division_undoes_product(a in coeffs(), b in unit_led()) {
        let x = ctx();
        let (a, b) = (series(&x, &a), series(&x, &b));
        prop_assert!(close(&a.mul(&b).div(&b, &x).unwrap(), &a, &x.tolerance(8)));
    }

    #[test]
    fn exp_and_ln_are_inverse(a in unit_led()) {
        let x = ctx();
        let a = series(&x, &a);
        prop_assert!(close(&a.ln(&x).unwrap().exp(&x), &a, &x.tolerance(8)));
    }

    #[test]
    fn derivative_obeys_product_rule(a in coeffs(), b in coeffs()) {
        let x = ctx();
        let (a, b) = (series(&x, &a), series(&x, &b));
        let lhs = a.mul(&b).derivative(&x);
        let rhs = a.derivative(&x).mul(&b).add(&a.mul(&b.derivative(&x)));
        prop_assert!(close(&lhs, &rhs, &x.tolerance(5)));
    }

    #[test]
    fn integer_powers_agree_with_real_powers(a in unit_led(), n in -4i64..6) {
        let x = ctx();
        let a = series(&x, &a);
        let int = a.pow_int(n, &x).unwrap();
        let real = a.pow_real(&x.int(n), &x).unwrap();
        prop_assert!(close(&int, &real, &x.tolerance(8)));
    }
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        (1i64..50).prop_map(Literal::from_int),
        (1u32..999, 1u32..4).prop_map(|(m, d)| {
            let v = m as f64 / 10f64.powi(d as i32);
            Literal::new(&format!("{v}")).unwrap()
        }),
    ]
}

fn exponent() -> impl Strategy<Value = Literal> {
    prop_oneof![
        (-3i64..4).prop_map(Literal::from_int),
        (-20i64..20).prop_map(|t| Literal::new(&format!("{}", t as f64 / 10.0)).unwrap()),
    ]
}

fn expr() -> impl Strategy<Value = PotentialExpr> {
    let leaf = prop_oneof![
        Just(PotentialExpr::Var),
        literal().prop_map(PotentialExpr::Const),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PotentialExpr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PotentialExpr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PotentialExpr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PotentialExpr::div(a, b)),
            (inner.clone(), exponent()).prop_map(|(a, p)| PotentialExpr::pow(a, p)),
            inner.clone().prop_map(PotentialExpr::ln),
            inner.prop_map(PotentialExpr::neg),
        ]
    })
}

proptest! {
    #[test]
    fn printing_round_trips(e in expr()) {
        let text = e.to_string();
        let back = parse_potential(&text).unwrap();
        prop_assert_eq!(back.to_string(), text.clone());
        let x = ctx();
        for r in ["0.7", "1.3", "2.9"] {
            let r = x.parse(r).unwrap();
            match (eval_point(&e, &r, &x), eval_point(&back, &r, &x)) {
                (Ok(a), Ok(b)) => {
                    let scale = a.abs().max(x.one());
                    prop_assert!((a - b).abs() <= x.tolerance(10) * scale, "{}", text);
                }
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{}: {:?} vs {:?}", text, a.is_ok(), b.is_ok()),
            }
        }
    }

    #[test]
    fn series_matches_point_values_and_slopes(
        c1 in 0.1f64..3.0,
        p in -1.5f64..3.0,
        c2 in -2.0f64..2.0,
        c3 in -2.0f64..2.0,
        r0 in 0.3f64..4.0,
    ) {
        let text = format!("{c1}*r^({p}) + {c2}*ln(r) + {c3}/(1 + r^2)");
        let e = parse_potential(&text).unwrap();
        let x = ctx();
        let r = x.from_f64(r0);
        let s = eval_series(&e, &r, 3, &x).unwrap();
        let v = eval_point(&e, &r, &x).unwrap();
        prop_assert!((s.coeff(0) - &v).abs() <= x.tolerance(10) * v.abs().max(x.one()));
        let h = x.ten_pow_neg(15);
        let up = eval_point(&e, &(&r + &h), &x).unwrap();
        let down = eval_point(&e, &(&r - &h), &x).unwrap();
        let slope = (up - down) / h.mul_int(2);
        prop_assert!((s.coeff(1) - &slope).abs() <= x.ten_pow_neg(20) * slope.abs().max(x.one()));
    }

    #[test]
    fn shanks_is_exact_on_geometric_sequences(q in prop_oneof![-0.95f64..-0.05, 0.05f64..0.95], a in 0.5f64..3.0) {
        let x = ctx();
        let q = x.from_f64(q);
        let a = x.from_f64(a);
        let limit = &a / &(x.one() - &q);
        let p: Vec<BigReal> = (1..=12)
            .map(|n| &limit * &(x.one() - q.powi(n)))
            .collect();
        for e in shanks_transform(&p, &x) {
            let v = e.value.expect("well-conditioned denominator");
            prop_assert!((v - &limit).abs() <= x.tolerance(15) * limit.abs());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn out_of_range_reads_are_zero(m in -6i64..20, n in -6i64..20, state in 0u8..3) {
        let x = ctx();
        let spec = ProblemSpec::new(
            parse_potential("-1/r").unwrap(), 3, 0, State::from_index(state).unwrap(),
            MassConvention::M1, 6, x,
        ).unwrap();
        let w = build_w_table(&scale_problem(&spec).unwrap(), 6).unwrap();
        let (t, _) = recurse(&w, 6, spec.state, Branch::Negative).unwrap();
        let outside_d = n < 0 || m < 1 || m > n + 1 || n >= 6;
        let outside_c = n < 0 || m < 0 || m > n + 1 || n >= 6;
        let outside_ts = n < 0 || m < 0 || m > n || n >= 6;
        if outside_d && (n < 0 || m < 1 || m > n + 1) {
            prop_assert!(t.d(m, n).unwrap().is_zero());
        }
        if outside_c && (n < 0 || m < 0 || m > n + 1) {
            prop_assert!(t.c(m, n).unwrap().is_zero());
        }
        if (outside_ts && (n < 0 || m < 0 || m > n)) || state == 0 {
            prop_assert!(t.t(m, n).unwrap().is_zero());
            prop_assert!(t.s(m, n).unwrap().is_zero());
        }
        if m < 1 {
            prop_assert!(t.a(m).unwrap().is_zero());
            prop_assert!(t.b(m).unwrap().is_zero());
            prop_assert!(t.c_node(m).unwrap().is_zero());
        }
        if state != 1 {
            prop_assert!(t.a(m).unwrap().is_zero());
        }
        if state != 2 {
            prop_assert!(t.b(m).unwrap().is_zero());
            prop_assert!(t.c_node(m).unwrap().is_zero());
        }
        prop_assert!(t.d(0, n.clamp(0, 5)).unwrap().is_zero());
    }
}

#[test]
fn partial_sums_and_coefficients_are_a_bijection() {
    for (pot, mass, state) in [
        ("-1/r", MassConvention::M1, State::Ground),
        ("r^2", MassConvention::TwoM1, State::Ground),
        ("2^3.5*r", MassConvention::M1, State::First),
        ("ln(r)", MassConvention::TwoM1, State::Second),
    ] {
        let x = ctx();
        let spec =
            ProblemSpec::new(parse_potential(pot).unwrap(), 3, 1, state, mass, 15, x).unwrap();
        let s = solve(&spec).unwrap();
        let back = s.sums.coefficients();
        // P_1..P_order use E^(-1)..E^(order-3); the last coefficient is spare.
        assert_eq!(back.len(), s.energy.coeffs.len() - 1);
        let scale = s.energy.coeffs.iter().fold(x.one(), |m, c| m.max(c.abs()));
        for (i, (a, b)) in back.iter().zip(&s.energy.coeffs).enumerate() {
            assert!(
                (a - b).abs() <= x.tolerance(10) * &scale,
                "{pot} coefficient {i}"
            );
        }
        let again = assemble_partial_sums(&s.energy);
        assert_eq!(again.sums, s.sums.sums);
    }
}
