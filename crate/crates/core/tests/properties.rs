//! Property tests: residue arithmetic laws, parse/print round trips,
//! compatibility of reductions and parallel determinism.

use std::collections::BTreeMap;

use hcong::catalog::builtin_catalog;
use hcong::context::build_context;
use hcong::dsl::{
    parse_congruence, parse_expr, parse_index_expr, evaluate_expr, CongruenceSpec, Expr, IndexExpr,
    Precondition, Quantifier,
};
use hcong::exactnum::{int, Rational};
use hcong::identities::{integral_identity_sides, lemma_3_1_sides};
use hcong::report::{emit_report, ReportFormat};
use hcong::residue::{inverse, is_prime, pow_mod, reduce_rational, PrimePowerModulus};
use hcong::verify::{sieve_primes, verify_range};
use num_bigint::BigInt;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    (5u64..2000).prop_filter("prime", |&n| is_prime(n))
}

fn modulus() -> impl Strategy<Value = PrimePowerModulus> {
    (prime(), 1u32..=4).prop_map(|(p, e)| PrimePowerModulus::new(p, e).unwrap())
}

proptest! {
    #[test]
    fn ring_laws(m in modulus(), a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
        let (a, b, c) = (m.from_i128(a.into()), m.from_i128(b.into()), m.from_i128(c.into()));
        prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
        prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
        let left = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let right = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.try_add(&a.neg()).unwrap(), m.zero());
        prop_assert_eq!(a.try_sub(&b).unwrap(), a.try_add(&b.neg()).unwrap());
    }

    #[test]
    fn negative_values_normalize(m in modulus(), a in any::<i64>()) {
        let r = m.from_i128(a.into());
        prop_assert!(r.value() < m.value());
        let diff = i128::from(a) - r.value() as i128;
        prop_assert_eq!(diff.rem_euclid(m.value() as i128), 0);
    }

    #[test]
    fn units_invert(m in modulus(), a in any::<i64>()) {
        let r = m.from_i128(a.into());
        prop_assume!(r.is_unit());
        prop_assert_eq!(r.try_mul(&inverse(&r).unwrap()).unwrap(), m.one());
        let n = (a.unsigned_abs() % 500) as i64;
        let up = pow_mod(&r, n).unwrap();
        let down = pow_mod(&r, -n).unwrap();
        prop_assert_eq!(up.try_mul(&down).unwrap(), m.one());
        if m.exponent() >= 2 {
            let lower = m.with_exponent(m.exponent() - 1).unwrap();
            let reduced = inverse(&r).unwrap().reduce_to(lower).unwrap();
            prop_assert_eq!(reduced, inverse(&r.reduce_to(lower).unwrap()).unwrap());
        }
    }

    #[test]
    fn non_units_do_not_invert(m in modulus(), a in any::<i32>()) {
        let r = m.from_i128(i128::from(a) * i128::from(m.p()));
        prop_assert!(inverse(&r).is_err());
    }

    #[test]
    fn reduction_commutes_with_arithmetic(p in prime(), a in any::<i64>(), b in any::<i64>(), lo in 1u32..=3) {
        let high = PrimePowerModulus::new(p, 4).unwrap();
        let low = high.with_exponent(lo).unwrap();
        let (x, y) = (high.from_i128(a.into()), high.from_i128(b.into()));
        let r = |v: hcong::residue::Residue| v.reduce_to(low).unwrap();
        prop_assert_eq!(r(x.try_mul(&y).unwrap()), r(x).try_mul(&r(y)).unwrap());
        prop_assert_eq!(r(x.try_add(&y).unwrap()), r(x).try_add(&r(y)).unwrap());
        prop_assert_eq!(r(x), low.from_i128(a.into()));
    }

    #[test]
    fn rationals_reduce_consistently(m in modulus(), n in -10_000i64..10_000, d in 1i64..10_000) {
        prop_assume!(!(d as u64).is_multiple_of(m.p()));
        let q = Rational::new(BigInt::from(n), BigInt::from(d));
        let r = reduce_rational(&q, m).unwrap();
        prop_assert_eq!(r.try_mul(&m.from_i128(d.into())).unwrap(), m.from_i128(n.into()));
    }
}

const VARS: [&str; 4] = ["k", "i", "j", "x"];

fn index_expr() -> impl Strategy<Value = IndexExpr> {
    let leaf = prop_oneof![
        (-20i128..50).prop_map(IndexExpr::Int),
        Just(IndexExpr::Prime),
        prop::sample::select(&VARS[..]).prop_map(IndexExpr::var),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| -a),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            (inner.clone(), inner).prop_map(|(a, b)| IndexExpr::Pow(Box::new(a), Box::new(b))),
        ]
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-30i64..30, 1i64..12).prop_map(|(n, d)| Expr::rational(n, d)),
        (0i64..100).prop_map(Expr::int),
        Just(Expr::Prime),
        Just(Expr::FermatQuotient),
        prop::sample::select(&VARS[..]).prop_map(Expr::var),
        index_expr().prop_map(Expr::Bernoulli),
        (index_expr(), 1u32..4).prop_map(|(n, m)| Expr::Harmonic(n, m)),
        (index_expr(), index_expr()).prop_map(|(n, k)| Expr::Binomial(n, k)),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| -a),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            (inner.clone(), index_expr()).prop_map(|(a, n)| a.pow(n)),
            (prop::sample::select(&VARS[..]), index_expr(), index_expr(), inner).prop_map(
                |(v, lo, hi, body)| Expr::Sum { var: v.to_string(), lo, hi, body: Box::new(body) }
            ),
        ]
    })
}

fn spec() -> impl Strategy<Value = CongruenceSpec> {
    let quantifier = prop::option::of((prop::sample::select(&VARS[..]), index_expr(), index_expr()).prop_map(
        |(v, lo, hi)| Quantifier { var: v.to_string(), lo, hi },
    ));
    ("[a-z][a-z0-9_.-]{0,8}", 0u64..20, quantifier, expr(), expr(), 1u32..=3).prop_map(
        |(id, greater_than, quantifier, lhs, rhs, mod_exponent)| CongruenceSpec {
            id,
            precondition: Precondition { greater_than },
            quantifier,
            lhs,
            rhs,
            mod_exponent,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn index_round_trip(e in index_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_index_expr(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn expr_round_trip(e in expr()) {
        let text = e.to_string();
        let back = parse_expr(&text).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn spec_round_trip(s in spec()) {
        let text = s.to_string();
        prop_assert_eq!(parse_congruence(&text).unwrap(), s, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn catalog_values_reduce_compatibly(p in (7u64..300).prop_filter("prime", |&n| is_prime(n))) {
        let ctx = build_context(p, 3).unwrap();
        let env = BTreeMap::new();
        for spec in builtin_catalog().iter().filter(|s| s.quantifier.is_none()) {
            for side in [&spec.lhs, &spec.rhs] {
                let top = evaluate_expr(side, &ctx, 3, &env).unwrap();
                for e in [1, 2] {
                    let low = evaluate_expr(side, &ctx, e, &env).unwrap();
                    let target = PrimePowerModulus::new(p, e).unwrap();
                    prop_assert_eq!(top.reduce_to(target).unwrap(), low, "{} at p={} e={}", spec.id, p, e);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sweep_is_deterministic(lo in 5u64..200, width in 1u64..300, jobs in 2usize..6) {
        let hi = lo + width;
        let one = verify_range(builtin_catalog(), lo, hi, 1).unwrap();
        let many = verify_range(builtin_catalog(), lo, hi, jobs).unwrap();
        prop_assert_eq!(emit_report(&one, ReportFormat::Json), emit_report(&many, ReportFormat::Json));
        let n = sieve_primes(lo, hi).len() * builtin_catalog().len();
        prop_assert_eq!(one.results.len(), n);
    }
}

proptest! {
    #[test]
    fn odd_branch_matches_integral_form_at_two(half in 1u64..40) {
        let n = 2 * half + 1;
        let (lhs, branch) = lemma_3_1_sides(n);
        let (sum, integral) = integral_identity_sides(n, &int(2));
        prop_assert_eq!(&lhs, &sum);
        prop_assert_eq!(branch, integral);
    }
}
