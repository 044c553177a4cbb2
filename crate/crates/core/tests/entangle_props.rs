use proptest::prelude::*;
use relmaj::entangle::*;
use relmaj::sample;

fn schmidt_pair(lo: usize, hi: usize) -> impl Strategy<Value = (SchmidtVector, SchmidtVector)> {
    any::<u64>().prop_map(move |s| {
        let mut rng = sample::rng(s);
        (sample::schmidt(&mut rng, lo, hi), sample::schmidt(&mut rng, lo, hi))
    })
}

fn padded(v: &SchmidtVector, extra: usize) -> SchmidtVector {
    let mut c = v.coefficients().to_vec();
    c.extend(std::iter::repeat(0.0).take(extra));
    SchmidtVector::new(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn vidal_formula_matches_program((s, t) in schmidt_pair(1, 6)) {
        let formula = vidal_probability(&s, &t);
        let lp = vidal_probability_lp(&s, &t).unwrap();
        prop_assert!((formula - lp).abs() <= 1e-6, "{formula} vs {lp}");
    }

    #[test]
    fn certain_conversion_iff_probability_one((s, t) in schmidt_pair(1, 6)) {
        let certain = locc_possible(&s, &t).unwrap();
        let p = vidal_probability(&s, &t);
        prop_assert_eq!(certain, p >= 1.0 - 1e-9, "p = {}", p);
    }

    #[test]
    fn bhattacharyya_sandwich((s, t) in schmidt_pair(1, 6)) {
        let m = s.len().max(t.len());
        let (lo, d, hi) = sandwich(&s.padded(m), &t.padded(m)).unwrap();
        prop_assert!(lo <= d + 1e-12 && d <= hi + 1e-12, "{lo} ≤ {d} ≤ {hi}");
    }

    #[test]
    fn zero_padding_changes_nothing((s, t) in schmidt_pair(1, 5), k in 1usize..4, z in 0.3f64..3.0) {
        let (s2, t2) = (padded(&s, k), padded(&t, k + 1));
        prop_assert_eq!(locc_possible(&s, &t).unwrap(), locc_possible(&s2, &t2).unwrap());
        prop_assert!((vidal_probability(&s, &t) - vidal_probability(&s2, &t2)).abs() <= 1e-12);
        prop_assert!((entanglement_cost(&s, &t) - entanglement_cost(&s2, &t2)).abs() <= 1e-12);
        prop_assert!((s.entropy() - s2.entropy()).abs() <= 1e-12);
        let (f, f2) = (fidelity_bounds(&s, &t, z).unwrap(), fidelity_bounds(&s2, &t2, z).unwrap());
        prop_assert!((f.shift - f2.shift).abs() <= 1e-12);
        prop_assert!((f.bhattacharyya - f2.bhattacharyya).abs() <= 1e-12);
        prop_assert_eq!(f.entropy.is_some(), f2.entropy.is_some());
        prop_assert_eq!(f.cost.is_some(), f2.cost.is_some());
    }

    #[test]
    fn fidelity_bounds_are_probabilities((s, t) in schmidt_pair(1, 5), z in 0.3f64..3.0) {
        let f = fidelity_bounds(&s, &t, z).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f.shift));
        if let Some(c) = f.cost {
            prop_assert!(c <= 1.0 + 1e-9);
        }
        // A larger battery ratio never lowers the first-kind bound.
        let g = fidelity_bounds(&s, &t, z * 1.5).unwrap();
        prop_assert!(g.shift >= f.shift - 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cost_matches_integer_battery_search((s, t) in schmidt_pair(2, 3)) {
        let cost = entanglement_cost(&s, &t);
        let found = battery_cost_search(&s, &t, 64);
        if let Some(r) = found {
            prop_assert!(r.ratio() >= cost - 1e-9, "{} below {}", r.ratio(), cost);
        }
        // With d = ⌊64/z*⌋ the fraction ⌈z* d⌉/d has both parts ≤ 64 and lies
        // within 1/d above z*; the search must do at least that well.
        if cost > 0.0 && cost <= 8.0 {
            let d = (64.0 / cost).floor();
            let r = found.expect("a feasible battery ratio exists");
            prop_assert!(r.ratio() <= cost + 1.0 / d + 1e-9, "{} vs {}", r.ratio(), cost);
        }
    }
}
