use num_bigint::BigInt;
use proptest::prelude::*;

use partial_zeta::{
    build_field, pade_reconstruct, partial_count, series_from_counts, Config, RationalFunctionZ,
    SubfieldMethod, TruncatedSeries, VarietySpec,
};

fn small_field() -> impl Strategy<Value = (u32, u32)> {
    prop_oneof![
        (Just(2u32), 1u32..=6),
        (Just(3u32), 1u32..=4),
        (Just(5u32), 1u32..=3),
        (Just(7u32), 1u32..=2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((p, n) in small_field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = build_field(p, 1, n).unwrap();
        let elems = f.elements();
        let pick = |r: u64| elems[(r % elems.len() as u64) as usize];
        let (a, b, c) = (pick(a), pick(b), pick(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if let Some(inv) = f.invert(a) {
            prop_assert_eq!(f.mul(a, inv), f.from_int(1));
        } else {
            prop_assert!(a.is_zero());
        }
        prop_assert_eq!(f.pow(a, f.order()), a);
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, n as u64), a);
        let tr = |x| f.absolute_trace(x);
        prop_assert_eq!(tr(f.add(a, b)), (tr(a) + tr(b)) % p);
    }

    #[test]
    fn subfield_methods_agree((p, n) in small_field(), e_pick in 0usize..8) {
        let f = build_field(p, 1, n).unwrap();
        let divisors: Vec<u32> = (1..=n).filter(|e| n % e == 0).collect();
        let e = divisors[e_pick % divisors.len()];
        let mut filter = f.enumerate_subfield_with(e, SubfieldMethod::Filter).unwrap();
        let mut basis = f.enumerate_subfield_with(e, SubfieldMethod::Basis).unwrap();
        filter.sort();
        basis.sort();
        prop_assert_eq!(filter.len() as u64, (p as u64).pow(e));
        prop_assert_eq!(filter, basis);
    }
}

/// A random sparse polynomial in `x1, x2, x3` written as text.
fn poly_text(p: u32) -> impl Strategy<Value = String> {
    prop::collection::vec((1..p, 0u32..3, 0u32..3, 0u32..3), 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, a, b, d)| format!("{c}*x1^{a}*x2^{b}*x3^{d}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn system() -> impl Strategy<Value = (u32, Vec<String>, Vec<u32>)> {
    prop_oneof![Just(2u32), Just(3u32)].prop_flat_map(|p| {
        (
            Just(p),
            prop::collection::vec(poly_text(p), 1..3),
            prop::collection::vec(1u32..=3, 3),
        )
    })
}

/// Every tuple of the product of subfields, every equation evaluated.
fn naive(x: &VarietySpec, k: u32) -> u64 {
    let f = build_field(x.p(), x.s(), x.lcm() * k).unwrap();
    let d: Vec<Vec<_>> = x
        .profile()
        .iter()
        .map(|&e| f.enumerate_subfield(e * k).unwrap())
        .collect();
    let mut n = 0;
    for &a in &d[0] {
        for &b in &d[1] {
            for &c in &d[2] {
                if x.equations().iter().all(|e| e.eval(&f, &[a, b, c]).unwrap().is_zero()) {
                    n += 1;
                }
            }
        }
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_matches_nested_loops((p, eqs, profile) in system(), k in 1u32..=2) {
        let eqs: Vec<&str> = eqs.iter().map(String::as_str).collect();
        let x = VarietySpec::parse(p, 1, &["x1", "x2", "x3"], &eqs, &profile).unwrap();
        prop_assume!(partial_zeta::count::partial_count_cost(&x, k) <= 300_000);
        let expect = naive(&x, k);
        let cfg = Config::default();
        prop_assert_eq!(partial_count(&x, k, &cfg).unwrap(), expect);
        prop_assert_eq!(partial_count(&x, k, &cfg.with_workers(3)).unwrap(), expect);

        // renaming the variables and permuting the profile alongside
        let y = VarietySpec::parse(p, 1, &["x3", "x1", "x2"], &eqs, &[profile[2], profile[0], profile[1]]).unwrap();
        prop_assert_eq!(partial_count(&y, k, &cfg).unwrap(), expect);
    }
}

fn factors(max: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-max..=max, 0..4)
}

fn product(roots: &[i64]) -> Vec<i64> {
    let mut c = vec![1i64];
    for &r in roots {
        let mut next = c.clone();
        next.push(0);
        for (i, &v) in c.iter().enumerate() {
            next[i + 1] -= r * v;
        }
        c = next;
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pade_recovers_rational_functions(num in factors(4), den in factors(4)) {
        let f = RationalFunctionZ::from_i64(&product(&num), &product(&den)).unwrap();
        let (dn, dd) = (num.len(), den.len());
        let order = dn + dd + 1;
        let s = TruncatedSeries::new(
            f.expand(order).into_iter().map(num_rational::BigRational::from_integer).collect(),
        ).unwrap();
        let g = pade_reconstruct(&s, dn, dd).unwrap();
        prop_assert_eq!(g.expand(order + 8), f.expand(order + 8));
    }

    #[test]
    fn counts_to_series_to_counts(poles in prop::collection::vec(1i64..=5, 1..4), zeros in prop::collection::vec(0i64..=5, 0..3)) {
        // keep every count non-negative: each zero is matched by a larger pole
        let zeros: Vec<i64> = zeros.iter().zip(&poles).map(|(&z, &p)| z.min(p)).collect();
        let f = RationalFunctionZ::from_i64(&product(&zeros), &product(&poles)).unwrap();
        let sums = f.power_sums(10);
        let counts: Vec<u64> = sums.iter().map(|n| u64::try_from(n).unwrap()).collect();
        let s = series_from_counts(&counts);
        prop_assert!(s.is_integral());
        prop_assert!(f.matches(&s));
        let expect: Vec<BigInt> = f.expand(10);
        prop_assert_eq!(s.integer_coeffs().unwrap(), expect);
    }
}
