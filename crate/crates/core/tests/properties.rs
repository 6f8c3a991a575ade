use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use podcong_core::arith::{legendre, r3_scale, r5_scale, r_enum_table, rk_series};
use podcong_core::congruence::{
    builtin_families, family, grid_instances, verify_progression, verify_relation_with, FamilyForm,
    FamilyInstance, GridSpec, Status,
};
use podcong_core::pod::{pod_table_enum, pod_table_series};
use podcong_core::{CoefficientDomain, TruncatedSeries};

const ORACLE_LIMIT: usize = 6000;

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, 1..=max_len)
}

fn modulus() -> impl Strategy<Value = u64> {
    prop_oneof![
        Just(2u64),
        Just(3),
        Just(5),
        Just(9),
        Just(27),
        Just(256),
        2u64..1000
    ]
}

fn exact(c: &[i64]) -> TruncatedSeries {
    TruncatedSeries::from_i64(CoefficientDomain::Exact, c).unwrap()
}

fn residue(c: &[i64], m: u64) -> TruncatedSeries {
    TruncatedSeries::from_i64(CoefficientDomain::Mod(m), c).unwrap()
}

fn with_constant(mut c: Vec<i64>, c0: i64) -> Vec<i64> {
    c[0] = c0;
    c
}

/// Sums of squares counted by brute force, independent of the theta series.
fn r_oracle(k: u32) -> &'static [u64] {
    static R3: OnceLock<Vec<u64>> = OnceLock::new();
    static R5: OnceLock<Vec<u64>> = OnceLock::new();
    let cell = if k == 3 { &R3 } else { &R5 };
    cell.get_or_init(|| r_enum_table(k, ORACLE_LIMIT).unwrap())
}

proptest! {
    #[test]
    fn mul_commutes(a in coeffs(65), b in coeffs(65), m in modulus()) {
        prop_assert_eq!(exact(&a).mul(&exact(&b)).unwrap(), exact(&b).mul(&exact(&a)).unwrap());
        prop_assert_eq!(residue(&a, m).mul(&residue(&b, m)).unwrap(), residue(&b, m).mul(&residue(&a, m)).unwrap());
    }

    #[test]
    fn mul_associates(a in coeffs(65), b in coeffs(65), c in coeffs(65), m in modulus()) {
        let (x, y, z) = (exact(&a), exact(&b), exact(&c));
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        let (x, y, z) = (residue(&a, m), residue(&b, m), residue(&c, m));
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn product_order_is_the_smaller(a in coeffs(40), b in coeffs(40)) {
        let p = exact(&a).mul(&exact(&b)).unwrap();
        prop_assert_eq!(p.order(), a.len().min(b.len()) - 1);
    }

    #[test]
    fn pow_adds_exponents(a in coeffs(33), j in 0u64..5, k in 0u64..5, m in modulus()) {
        let x = exact(&a);
        prop_assert_eq!(x.pow(j + k), x.pow(j).mul(&x.pow(k)).unwrap());
        let x = residue(&a, m);
        prop_assert_eq!(x.pow(j + k), x.pow(j).mul(&x.pow(k)).unwrap());
    }

    #[test]
    fn mixed_domains_rejected(a in coeffs(10), m in modulus()) {
        prop_assert!(exact(&a).mul(&residue(&a, m)).is_err());
        prop_assert!(exact(&a).add(&residue(&a, m)).is_err());
    }

    #[test]
    fn reduction_commutes_with_operations(
        a in coeffs(40),
        b in coeffs(40),
        m in modulus(),
        k in 0u64..6,
        r in 0usize..5,
        s in 1usize..6,
        negative in any::<bool>(),
    ) {
        let (x, y) = (exact(&a), exact(&b));
        let (xm, ym) = (residue(&a, m), residue(&b, m));
        let red = |t: TruncatedSeries| t.reduce_mod(m).unwrap();
        prop_assert_eq!(red(x.mul(&y).unwrap()), xm.mul(&ym).unwrap());
        prop_assert_eq!(red(x.add(&y).unwrap()), xm.add(&ym).unwrap());
        prop_assert_eq!(red(x.sub(&y).unwrap()), xm.sub(&ym).unwrap());
        prop_assert_eq!(red(x.pow(k)), xm.pow(k));
        prop_assert_eq!(red(x.alternate_signs()), xm.alternate_signs());
        prop_assert_eq!(red(x.inflate(s).unwrap()), xm.inflate(s).unwrap());
        if r < s && r <= x.order() {
            prop_assert_eq!(red(x.dissect(r, s).unwrap()), xm.dissect(r, s).unwrap());
        }
        let unit = exact(&with_constant(a.clone(), if negative { -1 } else { 1 }));
        prop_assert_eq!(red(unit.inverse().unwrap()), unit.reduce_mod(m).unwrap().inverse().unwrap());
    }

    #[test]
    fn alternate_signs_is_an_involution(a in coeffs(50), m in modulus()) {
        prop_assert_eq!(exact(&a).alternate_signs().alternate_signs(), exact(&a));
        prop_assert_eq!(residue(&a, m).alternate_signs().alternate_signs(), residue(&a, m));
    }

    #[test]
    fn dissection_reassembles(a in coeffs(80), s in prop::sample::select(vec![2usize, 3, 5])) {
        let x = exact(&a);
        let order = x.order();
        let mut rebuilt = vec![BigInt::from(0); order + 1];
        for r in 0..s.min(order + 1) {
            let part = x.dissect(r, s).unwrap();
            let spread = part.inflate_capped(s, order - r).unwrap();
            for (i, slot) in rebuilt.iter_mut().enumerate().skip(r) {
                if i - r <= spread.order() {
                    *slot += spread.coeff(i - r);
                }
            }
        }
        prop_assert_eq!(TruncatedSeries::from_bigints(rebuilt).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_round_trip_exact(a in coeffs(60), negative in any::<bool>()) {
        let x = exact(&with_constant(a, if negative { -1 } else { 1 }));
        prop_assert!(x.mul(&x.inverse().unwrap()).unwrap().is_one());
    }

    #[test]
    fn inverse_round_trip_residue(a in coeffs(60), m in modulus(), c0 in 1i64..1000) {
        prop_assume!((c0 as u64).gcd(&m) == 1);
        let x = residue(&with_constant(a, c0), m);
        prop_assert!(x.mul(&x.inverse().unwrap()).unwrap().is_one());
    }

    #[test]
    fn non_units_have_no_inverse(a in coeffs(20), m in prop::sample::select(vec![4u64, 6, 9, 10, 25]), c0 in 0i64..50) {
        prop_assume!((c0 as u64).gcd(&m) != 1);
        prop_assert!(residue(&with_constant(a.clone(), c0), m).inverse().is_err());
        prop_assert!(exact(&with_constant(a, 2 * c0)).inverse().is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wider_range_never_unfalsifies(a in 1u128..40, b in 0u128..40, m in 2u64..12, n1 in 0u64..30, extra in 0u64..30) {
        let pod = pod_table_series(40 * 60 + 40, CoefficientDomain::Mod(m)).unwrap();
        let inst = FamilyInstance::progression(a, b, m).unwrap();
        let small = verify_progression(&inst, n1, &pod).unwrap();
        let large = verify_progression(&inst, n1 + extra, &pod).unwrap();
        prop_assert_eq!(small.verified(), small.counterexamples.is_empty());
        if small.status == Status::Falsified {
            prop_assert_eq!(large.status, Status::Falsified);
        }
        prop_assert!(large.violations >= small.violations);
        prop_assert_eq!(large.checked, n1 + extra + 1);
    }

    #[test]
    fn legendre_is_multiplicative(a in -200i64..200, b in -200i64..200, p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 29])) {
        let lhs = legendre(a * b, p).unwrap();
        prop_assert_eq!(lhs, legendre(a, p).unwrap() * legendre(b, p).unwrap());
    }

    #[test]
    fn r5_scaling_matches_enumeration(p in prop::sample::select(vec![3u64, 5, 7]), alpha in 0u64..=2, n in 1u64..200) {
        let target = p.pow(2 * alpha as u32) * n;
        prop_assume!(target as usize <= ORACLE_LIMIT && n % (p * p) != 0);
        let r5 = r_oracle(5);
        let got = r5_scale(p, alpha, n, &BigInt::from(r5[n as usize])).unwrap();
        prop_assert_eq!(got, BigInt::from(r5[target as usize]));
    }

    #[test]
    fn r3_scaling_matches_enumeration(p in prop::sample::select(vec![3u64, 5, 7]), alpha in 0u64..=2, n in 1u64..300) {
        let target = p.pow(2 * alpha as u32) * n;
        prop_assume!(target as usize <= ORACLE_LIMIT);
        let r3 = r_oracle(3);
        let below = if n % (p * p) == 0 { r3[(n / (p * p)) as usize] } else { 0 };
        let got = r3_scale(p, alpha, n, &BigInt::from(r3[n as usize]), &BigInt::from(below)).unwrap();
        prop_assert_eq!(got, BigInt::from(r3[target as usize]));
    }
}

#[test]
fn pod_reduces_consistently_and_matches_enumeration() {
    let exact = pod_table_series(600, CoefficientDomain::Exact).unwrap();
    assert!((0..=600).all(|n| exact.value(n) > BigInt::from(0)));
    for m in [2u64, 3, 5, 7, 9, 11, 125, 300] {
        let table = pod_table_series(600, CoefficientDomain::Mod(m)).unwrap();
        assert_eq!(
            table.as_series(),
            &exact.as_series().reduce_mod(m).unwrap(),
            "m={m}"
        );
    }
    let oracle = pod_table_enum(100, CoefficientDomain::Exact).unwrap();
    assert_eq!(oracle.as_series(), &exact.as_series().truncate(100));
}

#[test]
fn admissible_grid_points_give_integral_indices() {
    let grid = GridSpec {
        p_bound: 60,
        alpha_max: 2,
        n_bound: 400,
        limit: u64::MAX,
        n_max: 10,
    };
    for f in builtin_families().into_iter().filter(|f| f.is_parametric()) {
        let (kept, skipped) = grid_instances(&f, &grid).unwrap();
        assert!(
            !kept.is_empty() || !skipped.is_empty(),
            "{}: empty grid",
            f.id
        );
        for s in &skipped {
            assert!(
                !s.reason.contains("divisible by 8"),
                "{} {}: {}",
                f.id,
                s.substitution,
                s.reason
            );
        }
    }
}

#[test]
fn vanishing_sums_of_squares_force_vanishing_pod() {
    for id in ["thm1", "thm3"] {
        let f = family(id).unwrap();
        let FamilyForm::Relation(spec) = f.form else {
            unreachable!("{id} is a relation")
        };
        let n_max = 3000u64;
        let domain = CoefficientDomain::Mod(f.modulus);
        let pod = pod_table_series((spec.a * n_max + spec.b) as usize, domain).unwrap();
        let rk = rk_series(spec.k, (8 * n_max + spec.k as u64) as usize, domain).unwrap();
        assert!(verify_relation_with(&f, n_max, &pod, &rk)
            .unwrap()
            .verified());
        let mut zeros = 0;
        for n in 0..=n_max {
            if rk.coeff_mod((8 * n + spec.k as u64) as usize, f.modulus) == 0 {
                zeros += 1;
                assert_eq!(
                    pod.residue((spec.a * n + spec.b) as usize, f.modulus),
                    0,
                    "{id} n={n}"
                );
            }
        }
        assert!(zeros > 0, "{id}: no vanishing r_k values in range");
    }
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let f = family("thm1").unwrap();
    let pod = pod_table_series(3 * 2000 + 2, CoefficientDomain::Mod(9)).unwrap();
    let rk = rk_series(5, 8 * 2000 + 5, CoefficientDomain::Mod(9)).unwrap();
    let runs: Vec<String> = [1usize, 2, 4]
        .iter()
        .map(|&threads| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let mut r = pool
                .install(|| verify_relation_with(&f, 2000, &pod, &rk))
                .unwrap();
            r.elapsed_ms = 0;
            serde_json::to_string(&r).unwrap()
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}
