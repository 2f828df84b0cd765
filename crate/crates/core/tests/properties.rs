use ke_fillings::calabi::{check_einstein_identity, solve_profile};
use ke_fillings::cr3::{classify_seifert, Answer, SeifertData};
use ke_fillings::exact_arith::{rat, LaurentPolynomial};
use ke_fillings::hj::{hj_evaluate, hj_expand, intersection_matrix, ke_admissible, QuotientData};
use ke_fillings::hypersurface::{se_property, weighted_degree};
use num::{Integer, Zero};
use proptest::prelude::*;

fn laurent() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((-5i32..=5, -20i64..=20, 1i64..=9), 0..8)
        .prop_map(|terms| LaurentPolynomial::from_terms(terms.into_iter().map(|(e, n, d)| (e, rat(n, d)))))
}

fn coprime_pair(max_p: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max_p)
        .prop_flat_map(|p| (Just(p), 1..p))
        .prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
}

/// Central difference with one Richardson step.
fn richardson_derivative(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-3 * x;
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

proptest! {
    #[test]
    fn arithmetic_stays_canonical(a in laurent(), b in laurent(), c in laurent()) {
        for r in [&a + &b, &a - &b, &a * &b] {
            prop_assert!(r.terms().all(|(_, v)| !v.is_zero()));
        }
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivative_matches_finite_difference(p in laurent(), x in 0.5f64..4.0) {
        let exact = p.derivative().eval_f64(x).unwrap();
        let numeric = richardson_derivative(|y| p.eval_f64(y).unwrap(), x);
        // Relative to the size of the terms, so cancellation in p'(x) does not
        // turn round-off into a spurious failure.
        let scale = p
            .derivative()
            .terms()
            .map(|(e, c)| (ke_fillings::exact_arith::to_f64(c) * x.powi(e)).abs())
            .sum::<f64>();
        prop_assert!((numeric - exact).abs() <= 1e-8 * scale.max(f64::MIN_POSITIVE),
            "p = {p}, x = {x}: {numeric} vs {exact}");
    }

    #[test]
    fn hj_round_trip((p, q) in coprime_pair(1_000_000)) {
        let data = QuotientData::new(p, q).unwrap();
        let s = hj_expand(data);
        prop_assert_eq!(hj_evaluate(&s.entries), Ok(data));
        prop_assert_eq!(s.stabilizers.last().copied(), Some((p - q, p)));
        prop_assert_eq!(s.stabilizers.len(), s.entries.len() + 2);
    }

    #[test]
    fn admissible_iff_diagonal_at_most_minus_three(entries in prop::collection::vec(2i64..6, 1..12)) {
        let m = intersection_matrix(&entries);
        let diagonal_ok = (0..entries.len()).all(|i| m[i][i] <= -3);
        prop_assert_eq!(ke_admissible(&entries), diagonal_ok);
    }

    #[test]
    fn evaluate_inverts_expand(entries in prop::collection::vec(2i64..8, 1..10)) {
        let data = hj_evaluate(&entries).unwrap();
        prop_assert_eq!(hj_expand(data).entries, entries);
    }

    #[test]
    fn se_property_is_permutation_invariant(
        columns in prop::collection::vec((1i64..12, prop::collection::vec(0u32..6, 3)), 1..6),
        seed in any::<u64>(),
    ) {
        let weights: Vec<i64> = columns.iter().map(|c| c.0).collect();
        let monomials: Vec<Vec<u32>> = (0..3).map(|j| columns.iter().map(|c| c.1[j]).collect()).collect();
        let d = weighted_degree(&monomials, &weights).unwrap();

        // Fisher-Yates driven by the seed.
        let mut order: Vec<usize> = (0..columns.len()).collect();
        let mut state = seed;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let pw: Vec<i64> = order.iter().map(|&i| weights[i]).collect();
        let pm: Vec<Vec<u32>> = monomials.iter().map(|m| order.iter().map(|&i| m[i]).collect()).collect();
        let pd = weighted_degree(&pm, &pw).unwrap();
        prop_assert_eq!(pd, d);
        prop_assert_eq!(se_property(&pw, pd), se_property(&weights, d));
    }

    #[test]
    fn adding_a_fiber_never_turns_no_into_yes(
        genus in 1u32..5,
        fibers in prop::collection::vec(coprime_pair(80), 0..5),
        extra in coprime_pair(80),
    ) {
        let base = SeifertData::new(genus, &fibers).unwrap();
        let before = classify_seifert(&base).unwrap().answer;
        let after = classify_seifert(&base.with_fiber(QuotientData::new(extra.0, extra.1).unwrap())).unwrap().answer;
        prop_assert!(!(before == Answer::No && after == Answer::Yes));
    }

    #[test]
    fn general_profile_satisfies_identity(
        n in 2u32..8, k in 1u32..15, (ln, ld) in (-20i64..20, 1i64..10), (cn, cd) in (-20i64..20, 1i64..10),
    ) {
        let p = solve_profile(n, k, rat(ln, ld), rat(cn, cd)).unwrap();
        prop_assert!(check_einstein_identity(&p));
    }
}
