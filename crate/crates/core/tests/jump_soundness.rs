use proptest::prelude::*;
use reebmult::index::PathModel;
use reebmult::jump::{self, JumpCertificate, JumpParams};
use reebmult::rational::{int, ratio, Rational};
use reebmult::Error;

const BOUND: u64 = 100_000_000;

fn generator() -> impl Strategy<Value = Rational> {
    (1_000_000_000i64..2_000_000_000).prop_flat_map(|q| (q / 10..9 * q / 10).prop_map(move |p| ratio(p, q)))
}

/// One or two paths over a common generator.
fn arb_system() -> impl Strategy<Value = Vec<PathModel>> {
    let path = (0i64..=2, prop::collection::vec((1i64..=2, 0i64..=1), 1..=2), prop::collection::vec(1i64..=3, 0..=1));
    (generator(), prop::collection::vec(path, 1..=2)).prop_filter_map("certifiable", |(theta, specs)| {
        specs
            .into_iter()
            .map(|(nu, ell, hyp)| {
                let ell = ell.into_iter().map(|(m, z)| &theta * int(m) + int(z)).collect();
                PathModel::certified(nu, ell, hyp, BOUND).ok()
            })
            .collect()
    })
}

fn params(ell0: u64, divisor: u64) -> JumpParams {
    JumpParams::new(ratio(1, 10), ell0, divisor, 2_000_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn found_certificates_verify(paths in arb_system(), ell0 in 1u64..=4, c in 1u64..=4) {
        let params = params(ell0, 2 * c);
        match jump::find_common_jump(&paths, &params, 0) {
            Ok(cert) => {
                let report = jump::verify_jump(&paths, &cert, &params);
                prop_assert!(report.passed(), "{:?}", report.first_failure());
                prop_assert_eq!(cert.d_plus % (2 * c) as i64, 0);
                prop_assert_eq!(cert.d_minus % (2 * c) as i64, 0);
                prop_assert!(cert.k_plus.iter().chain(&cert.k_minus).all(|&k| k > ell0 && k % (2 * c) == 0));
            }
            Err(Error::SearchExhausted { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn tampered_certificates_fail(paths in arb_system(), shift in prop::sample::select(vec![-2i64, -1, 1, 2])) {
        let params = params(2, 4);
        if let Ok(cert) = jump::find_common_jump(&paths, &params, 0) {
            let moved_d = JumpCertificate { d_plus: cert.d_plus + shift, ..cert.clone() };
            prop_assert!(!jump::verify_jump(&paths, &moved_d, &params).passed());
            let mut k_plus = cert.k_plus.clone();
            k_plus[0] = (k_plus[0] as i64 + 4 * shift) as u64;
            let moved_k = JumpCertificate { k_plus, ..cert.clone() };
            prop_assert!(!jump::verify_jump(&paths, &moved_k, &params).passed());
            let mut k_minus = cert.k_minus.clone();
            k_minus.pop();
            let short = JumpCertificate { k_minus, ..cert };
            prop_assert!(!jump::verify_jump(&paths, &short, &params).passed());
        }
    }
}

#[test]
fn minimality_of_the_first_jump() {
    let paths = vec![PathModel::certified(0, vec![ratio(41, 100)], vec![], 99).unwrap()];
    let params = JumpParams::new(ratio(1, 4), 1, 1, 98);
    let cert = jump::find_common_jump(&paths, &params, 0).unwrap();
    for k in 2..cert.k_plus[0] {
        let probe = JumpCertificate {
            d_plus: reebmult::index::cz_index(&paths[0], k).unwrap(),
            k_plus: vec![k],
            ..cert.clone()
        };
        assert!(!jump::verify_jump(&paths, &probe, &params).passed(), "k = {k}");
    }
}
