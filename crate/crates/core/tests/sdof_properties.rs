mod common;

use common::*;
use proptest::prelude::*;
use quake_core::sdof::*;

fn record_strategy(max_len: usize) -> impl Strategy<Value = GroundMotionRecord> {
    (
        proptest::collection::vec(-1.0f64..1.0, 2..max_len),
        prop_oneof![Just(0.005), Just(0.01), Just(0.02)],
    )
        .prop_map(|(s, dt)| GroundMotionRecord::new(dt, s, "random").unwrap())
}

fn system_strategy() -> impl Strategy<Value = SdofSystem> {
    (0.01f64..20.0, 0.0f64..3.0).prop_map(|(w, c)| SdofSystem::new(w, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linearity(rec in record_strategy(300), sys in system_strategy(), alpha in -3.0f64..3.0) {
        let scaled = scale_record(&rec, alpha).unwrap();
        let base = respond_damped(&rec, &sys).unwrap();
        let expected: Vec<f64> = base.values().iter().map(|x| alpha * x).collect();
        let got = respond_damped(&scaled, &sys).unwrap();
        prop_assert!(normwise_rel(got.values(), &expected) <= 1e-12);
        let got = respond_damped_incremental(&scaled, &sys).unwrap();
        let inc: Vec<f64> = respond_damped_incremental(&rec, &sys).unwrap().values().iter().map(|x| alpha * x).collect();
        prop_assert!(normwise_rel(got.values(), &inc) <= 1e-12);
        let got = respond_undamped(&scaled, sys.omega()).unwrap();
        let und: Vec<f64> = respond_undamped(&rec, sys.omega()).unwrap().values().iter().map(|x| alpha * x).collect();
        prop_assert!(normwise_rel(got.values(), &und) <= 1e-12);
    }

    #[test]
    fn superposition(
        pair in (2usize..300).prop_flat_map(|n| (
            proptest::collection::vec(-1.0f64..1.0, n),
            proptest::collection::vec(-1.0f64..1.0, n),
        )),
        sys in system_strategy(),
    ) {
        let a = GroundMotionRecord::new(0.01, pair.0, "a").unwrap();
        let b = GroundMotionRecord::new(0.01, pair.1, "b").unwrap();
        let sum = a.add(&b).unwrap();
        let ra = respond_damped(&a, &sys).unwrap();
        let rb = respond_damped(&b, &sys).unwrap();
        let expected: Vec<f64> = ra.values().iter().zip(rb.values()).map(|(x, y)| x + y).collect();
        // Scale by the larger constituent so cancellation in a+b is not penalized.
        let scale = ra.peak().max(rb.peak());
        let got = respond_damped(&sum, &sys).unwrap();
        let diff = got.values().iter().zip(&expected).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        prop_assert!(diff <= 1e-12 * scale.max(f64::MIN_POSITIVE));
        let got = respond_damped_incremental(&sum, &sys).unwrap();
        let diff = got.values().iter().zip(&expected).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        prop_assert!(diff <= 1e-9 * scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn zero_rate_reduces_to_undamped(rec in record_strategy(300), w in 0.01f64..20.0) {
        let a = respond_undamped(&rec, w).unwrap();
        let b = respond_damped(&rec, &SdofSystem::undamped(w).unwrap()).unwrap();
        prop_assert_eq!(a.values(), b.values());
        let c = respond_damped_incremental(&rec, &SdofSystem::undamped(w).unwrap()).unwrap();
        prop_assert!(normwise_rel(c.values(), a.values()) <= 1e-9);
    }

    #[test]
    fn incremental_matches_direct(rec in record_strategy(2000), sys in system_strategy()) {
        let direct = respond_damped(&rec, &sys).unwrap();
        let fast = respond_damped_incremental(&rec, &sys).unwrap();
        prop_assert_eq!(fast.len(), rec.len());
        prop_assert!(normwise_rel(fast.values(), direct.values()) <= 1e-9);
    }

    #[test]
    fn peak_and_shape_invariants(rec in record_strategy(400), sys in system_strategy()) {
        for h in [
            respond_undamped(&rec, sys.omega()).unwrap(),
            respond_damped(&rec, &sys).unwrap(),
            respond_damped_incremental(&rec, &sys).unwrap(),
        ] {
            prop_assert_eq!(h.len(), rec.len());
            prop_assert_eq!(h.dt(), rec.dt());
            prop_assert_eq!(h.values()[0], 0.0);
            let max = h.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            prop_assert_eq!(h.peak(), max);
        }
    }

    #[test]
    fn spectrum_invariants(rec in record_strategy(200), xi in 0.0f64..0.3) {
        let periods = period_sweep(0.5, 3.0, 0.25).unwrap();
        let s = response_spectrum(&rec, &periods, DampingSpec::Ratio(xi)).unwrap();
        prop_assert_eq!(s.peaks().len(), s.periods().len());
        prop_assert!(s.periods().windows(2).all(|w| w[1] > w[0]));
        prop_assert!(s.peaks().iter().all(|p| *p >= 0.0));
    }
}

#[test]
fn closed_forms_converge_at_second_order() {
    let (a0, omega, rate) = (1.0, 1.0, 0.3);
    let mut prev: Option<(f64, f64)> = None;
    for dt in [0.04, 0.02, 0.01, 0.005] {
        let rec = constant_record(a0, dt, 10.0);
        let und = respond_undamped(&rec, omega).unwrap();
        let damp = respond_damped(&rec, &SdofSystem::new(omega, rate).unwrap()).unwrap();
        let e_u = closed_form_error(und.values(), dt, |t| constant_input_undamped(a0, omega, t));
        let e_d = closed_form_error(damp.values(), dt, |t| constant_input_response(a0, omega, rate, t));
        if let Some((pu, pd)) = prev {
            assert!(pu / e_u >= 3.5, "undamped ratio {}", pu / e_u);
            assert!(pd / e_d >= 3.5, "damped ratio {}", pd / e_d);
        }
        prev = Some((e_u, e_d));
    }
}

#[test]
fn closed_form_helpers_agree_at_zero_damping() {
    for t in [0.0, 0.7, 3.0, 9.9] {
        let a = constant_input_response(0.4, 2.0, 0.0, t);
        let b = constant_input_undamped(0.4, 2.0, t);
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn spectrum_is_serial_deterministic() {
    let samples: Vec<f64> = (0..500).map(|i| ((i * 7919) % 113) as f64 / 113.0 - 0.5).collect();
    let rec = GroundMotionRecord::new(0.02, samples, "det").unwrap();
    let periods = period_sweep(0.5, 10.0, 0.02).unwrap();
    let a = response_spectrum(&rec, &periods, DampingSpec::Ratio(0.05)).unwrap();
    let b = response_spectrum(&rec, &periods, DampingSpec::Ratio(0.05)).unwrap();
    assert_eq!(a, b);
    for (k, &p) in periods.iter().enumerate().step_by(97) {
        let sys = SdofSystem::from_period(p, DampingSpec::Ratio(0.05)).unwrap();
        let direct = respond_damped(&rec, &sys).unwrap().peak();
        assert!((a.peaks()[k] - direct).abs() <= 1e-9 * direct);
    }
}
