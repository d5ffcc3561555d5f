use dft_hermite_core::*;
use proptest::prelude::*;

fn ctx(digits: u32) -> PrecisionContext {
    PrecisionContext::new(digits).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn basis_satisfies_defining_conditions(n in 2usize..40) {
        let c = ctx(PrecisionContext::default_digits(n));
        let basis = build_basis::<Real>(n, &c).unwrap();
        let report = verify_basis(&basis, &c).unwrap();
        let tolerance = -(f64::from(c.digits()) - n.div_ceil(2) as f64 - 20.0);
        prop_assert!(report.passed(tolerance), "{report:?}");
        prop_assert_eq!(basis.label_counts(), EigenspaceDims::new(n).unwrap().dims);
    }

    #[test]
    fn first_significant_entry_is_positive(n in 2usize..40) {
        let c = ctx(PrecisionContext::default_digits(n));
        let basis = build_basis::<Real>(n, &c).unwrap();
        for v in basis.vectors() {
            let cutoff = v.norm_log10() + c.zero_threshold_log10();
            let pivot = (0..=v.index_set().hi()).find(|&k| v.get(k).log10_abs() > cutoff).unwrap();
            prop_assert!(!v.get(pivot).is_negative());
        }
    }

    #[test]
    fn recurrence_coefficients_are_positive(n in 5usize..40) {
        let c = ctx(PrecisionContext::default_digits(n));
        let basis = build_basis::<Real>(n, &c).unwrap();
        for step in basis.steps() {
            prop_assert!(!step.b.is_negative() && !step.b.is_zero());
        }
    }

    #[test]
    fn tracked_midpoints_match_plain_arithmetic(n in 5usize..24) {
        let c = ctx(80);
        let plain = build_basis::<Real>(n, &c).unwrap();
        let tracked = build_basis::<Ball>(n, &c.clone().with_track_error(true)).unwrap();
        for (p, t) in plain.vectors().iter().zip(tracked.vectors()) {
            for ((_, x), (_, y)) in p.iter().zip(t.iter()) {
                let gap = x.sub(&y.midpoint()).log10_abs();
                prop_assert!(gap <= y.radius_log10().max(-60.0) + 1.0);
            }
        }
    }

    #[test]
    fn constructions_agree(n in 2usize..24) {
        let c = ctx(100);
        let rec = build_basis::<Real>(n, &c).unwrap();
        let gs = build_basis_with::<Real>(n, &c, BuildOptions { construction: Construction::GramSchmidt, ..BuildOptions::default() }).unwrap();
        prop_assert!(oracle_deviation(&rec, &gs).unwrap().at_most(-60.0));
    }

    #[test]
    fn seed_identities_hold(n in 2usize..64) {
        let c = ctx(80);
        let family = SeedFamily::<Real>::new(n, &c).unwrap();
        prop_assert!(family.s_identity_residual_log10(&c) <= -60.0);
        prop_assert!(family.closed_form_deviation_log10().unwrap() <= -60.0);
        prop_assert!(family.check_fourier_pairs(&c).unwrap().max_residual_log10() <= -50.0);
    }
}
