use proptest::prelude::*;
use reebmult::certify::{self, BoundOptions, Verdict};
use reebmult::rational::{int, ratio, Rational};
use reebmult::record;
use reebmult::schema::{self, SystemSpec};

const SCALE: i64 = 1_000_000_000_000;

fn weights(count: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set(SCALE + 1..3 * SCALE, count - 1)
        .prop_map(|set| std::iter::once(int(1)).chain(set.into_iter().map(|w| ratio(w, SCALE))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn three_dimensional_ellipsoids_are_consistent(
        w in weights(2).prop_filter("room for the search", |w| certify::ellipsoid_nondeg_bound(w) > 10_000_000_000)
    ) {
        let system = certify::ellipsoid_system(&w, certify::ellipsoid_nondeg_bound(&w)).unwrap();
        let report = certify::verify_theorem_bound(&system, &BoundOptions::default()).unwrap();
        prop_assert_eq!(report.verdict, Verdict::Consistent, "{:?}", report.first_violation());
        prop_assert_eq!(report.implied_bound, 2);
        let plus = report.plus.as_ref().unwrap();
        let minus = report.minus.as_ref().unwrap();
        prop_assert!(plus.window.agrees() && minus.window.agrees());
        prop_assert!(plus.lemma.holds() && minus.lemma.holds());
        prop_assert!(plus.morse_slack >= 0 && minus.morse_slack >= 0);

        let refuted = certify::verify_theorem_bound(&system.without(0), &BoundOptions::default()).unwrap();
        prop_assert_eq!(refuted.verdict, Verdict::Refuted);
    }

    #[test]
    fn resonance_holds_for_every_ellipsoid(w in (2usize..=5).prop_flat_map(weights)) {
        let system = certify::ellipsoid_system(&w, certify::ellipsoid_nondeg_bound(&w)).unwrap();
        let res = certify::resonance_check(&system).unwrap();
        let n = w.len() - 1;
        prop_assert!(res.passed());
        prop_assert_eq!(res.lhs, ratio(if n % 2 == 0 { 1 } else { -1 }, 2));
    }

    #[test]
    fn system_files_round_trip(w in (2usize..=4).prop_flat_map(weights)) {
        let system = certify::ellipsoid_system(&w, certify::ellipsoid_nondeg_bound(&w)).unwrap();
        let text = schema::to_toml(&SystemSpec::from_model(&system)).unwrap();
        let back = schema::from_toml::<SystemSpec>(&text).unwrap().to_model().unwrap();
        prop_assert_eq!(back, system);
    }
}

#[test]
fn report_records_round_trip() {
    let system = certify::ellipsoid_system(&[int(1), ratio(1_414_213_562_373, SCALE)], 999_999_999_999).unwrap();
    let report = certify::verify_theorem_bound(&system, &BoundOptions::default()).unwrap();
    let records = record::bound_report_records(&report);
    let text = record::write_records(&records);
    let parsed = record::parse_records(&text).unwrap();
    assert_eq!(parsed, records);
    assert_eq!(record::verdict_of(&parsed[0]).unwrap(), Verdict::Consistent);
}
