//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quake_core::ann::{gradient_check, load_model, save_model, MlpNetwork, TrainingPair};
use quake_core::cli::write_eval_table;
use quake_core::io::{generate_synthetic, write_csv, SyntheticKind, SyntheticParams};
use quake_core::pipeline::{run_experiment, ExperimentSpec, Mode};
use quake_core::sdof::*;

mod common;
use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion(id: u32, name: &str, budget: Duration, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = check();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let pass = out.pass && in_time;
    println!(
        "[{}] {id}. {name}: {} ({:.2}s, budget {}s{})",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { ", over budget" },
    );
    pass
}

fn sine_record(duration: f64) -> GroundMotionRecord {
    let params = SyntheticParams { duration, ..Default::default() };
    generate_synthetic(SyntheticKind::Sine, &params, 0).unwrap()
}

fn test_records() -> Vec<GroundMotionRecord> {
    let params = SyntheticParams::default();
    vec![
        generate_synthetic(SyntheticKind::Sine, &params, 0).unwrap(),
        generate_synthetic(SyntheticKind::Sweep, &params, 0).unwrap(),
        generate_synthetic(SyntheticKind::Noise, &params, 3).unwrap(),
    ]
}

fn ratio_error(system: &SdofSystem, damped: bool, lo: f64, hi: f64) -> (f64, String) {
    let peak = |rec: &GroundMotionRecord, f: f64| {
        let scaled = scale_record(rec, f).unwrap();
        if damped {
            respond_damped(&scaled, system).unwrap().peak()
        } else {
            respond_undamped(&scaled, system.omega()).unwrap().peak()
        }
    };
    let mut worst = 0.0_f64;
    let mut shown = String::new();
    for rec in test_records() {
        let base = peak(&rec, 1.0);
        let (p_lo, p_hi) = (peak(&rec, lo), peak(&rec, hi));
        if damped {
            worst = worst.max(((p_hi / p_lo) - hi / lo).abs() / (hi / lo));
        } else {
            worst = worst.max(((p_lo / base) - lo).abs() / lo);
            worst = worst.max(((p_hi / base) - hi).abs() / hi);
        }
        if shown.is_empty() {
            shown = format!("{} peaks {:.6e}/{:.6e}/{:.6e}", rec.label(), p_lo, base, p_hi);
        }
    }
    (worst, shown)
}

fn intensity_scaling() -> Outcome {
    let system = SdofSystem::undamped(0.5).unwrap();
    let (worst, shown) = ratio_error(&system, false, 0.8, 1.2);
    outcome(worst <= 1e-9, format!("max ratio deviation {worst:.2e}; {shown}"))
}

fn damped_linearity() -> Outcome {
    let system = SdofSystem::new(0.68981, 1.58033).unwrap();
    let (worst, _) = ratio_error(&system, true, 0.5, 1.2);
    outcome(worst <= 1e-9, format!("120%/50% ratio deviation from 2.4 is {worst:.2e}"))
}

fn duhamel_closed_forms() -> Outcome {
    let (a0, omega, rate) = (1.0, 1.0, 0.3);
    let errors = |dt: f64| {
        let rec = constant_record(a0, dt, 10.0);
        let und = respond_undamped(&rec, omega).unwrap();
        let damp = respond_damped(&rec, &SdofSystem::new(omega, rate).unwrap()).unwrap();
        (
            closed_form_error(und.values(), dt, |t| constant_input_undamped(a0, omega, t)),
            closed_form_error(damp.values(), dt, |t| constant_input_response(a0, omega, rate, t)),
        )
    };
    let (eu, ed) = errors(0.001);
    let (eu2, ed2) = errors(0.002);
    let (ru, rd) = (eu2 / eu, ed2 / ed);
    outcome(
        eu <= 1e-3 && ed <= 1e-3 && ru >= 3.5 && rd >= 3.5,
        format!("rel err undamped {eu:.2e} damped {ed:.2e}; halving ratios {ru:.3} / {rd:.3}"),
    )
}

fn solver_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for case in 0..20 {
        let n = rng.random_range(2..=2000);
        let dt = [0.005, 0.01, 0.02][rng.random_range(0..3)];
        let samples: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let rec = GroundMotionRecord::new(dt, samples, format!("random-{case}")).unwrap();
        let sys = SdofSystem::new(rng.random_range(0.05..20.0), rng.random_range(0.0..3.0)).unwrap();
        let direct = respond_damped(&rec, &sys).unwrap();
        let fast = respond_damped_incremental(&rec, &sys).unwrap();
        worst = worst.max(normwise_rel(fast.values(), direct.values()));
    }
    outcome(worst <= 1e-9, format!("max relative deviation {worst:.2e} over 20 records"))
}

fn gradient_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    for case in 0..100u64 {
        let (i, j, k) = (rng.random_range(1..=6), rng.random_range(1..=12), rng.random_range(1..=3));
        let net = MlpNetwork::seeded(i, j, k, 1.0, case).unwrap();
        let z = (0..i).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d = (0..k).map(|_| rng.random_range(-0.9..0.9)).collect();
        let pair = TrainingPair::new(z, d).unwrap();
        worst = worst.max(gradient_check(&net, &pair, 1e-5).unwrap());
    }
    outcome(worst < 1e-4, format!("max deviation {worst:.2e} over 100 nets"))
}

fn accel_relative_rms(hidden: usize, beta: f64) -> f64 {
    let record = sine_record(14.94);
    let mut spec = ExperimentSpec::new(Mode::AccelToResponse, record, SdofSystem::undamped(0.5).unwrap());
    spec.hidden = hidden;
    spec.trainer.beta = beta;
    spec.trainer.max_epochs = 10_000;
    spec.trainer.error_goal = 0.0;
    spec.trainer.init_range = 2.0;
    let result = run_experiment(&spec).unwrap();
    result.evaluations[0].metrics.relative_rms_train_range
}

fn surrogate_convergence() -> Outcome {
    let betas = [0.01, 0.05, 0.1];
    let best = |hidden: usize, goal: f64| {
        let mut best = (f64::INFINITY, 0.0);
        for &beta in &betas {
            let r = accel_relative_rms(hidden, beta);
            if r < best.0 {
                best = (r, beta);
            }
            if r < goal {
                break;
            }
        }
        best
    };
    assert_eq!(sine_record(14.94).len(), 748);
    let (r10, b10) = best(10, 0.05);
    let (r5, b5) = best(5, 0.10);
    let (r20, b20) = best(20, 0.10);
    outcome(
        r10 < 0.05 && r5 < 0.10 && r20 < 0.10,
        format!("rel RMS h=10 {r10:.4} (β={b10}), h=5 {r5:.4} (β={b5}), h=20 {r20:.4} (β={b20})"),
    )
}

fn spectrum_surrogate() -> Outcome {
    let params = SyntheticParams { duration: 14.94, ..Default::default() };
    let train_rec = generate_synthetic(SyntheticKind::Noise, &params, 1).unwrap();
    let held_rec = generate_synthetic(SyntheticKind::Noise, &params, 2).unwrap();
    let mut spec = ExperimentSpec::new(Mode::PeriodToPeak, train_rec, SdofSystem::undamped(1.0).unwrap());
    spec.spectrum_damping = DampingSpec::Ratio(0.05);
    spec.eval_record = Some(held_rec);
    spec.eval_step = 0.5;
    spec.trainer.error_goal = 0.0;
    let result = run_experiment(&spec).unwrap();
    let train = &result.evaluations[0];
    let held = &result.evaluations[1];
    let (rt, rh) = (train.metrics.relative_rms_train_range, held.metrics.relative_rms);
    outcome(
        train.axis.len() == 476 && held.axis.len() == 20 && rt < 0.05 && rh < 0.15,
        format!("{} training periods rel RMS {rt:.4}; {} held-out periods rel RMS {rh:.4}", train.axis.len(), held.axis.len()),
    )
}

fn persistence_and_determinism() -> Outcome {
    let run = || {
        let mut spec = ExperimentSpec::new(Mode::AccelToResponse, sine_record(4.0), SdofSystem::undamped(0.5).unwrap());
        spec.hidden = 6;
        spec.factors = vec![0.8, 1.0, 1.2];
        spec.trainer.max_epochs = 200;
        spec.trainer.seed = 42;
        let result = run_experiment(&spec).unwrap();
        let mut bytes = Vec::new();
        write_eval_table(&result, &mut bytes).unwrap();
        for ev in &result.evaluations {
            write_csv(&mut bytes, &["t", "desired", "predicted"], &[&ev.axis, &ev.desired, &ev.predicted]).unwrap();
        }
        (result, bytes)
    };
    let (a, bytes_a) = run();
    let (_, bytes_b) = run();
    let mut saved = Vec::new();
    save_model(&a.network, &a.normalization, &mut saved).unwrap();
    let (net, norm) = load_model(saved.as_slice()).unwrap();
    let round_trip = net == a.network && norm.as_ref() == Some(&a.normalization);
    let bits_equal = net
        .hidden_weights()
        .iter()
        .chain(net.output_weights())
        .zip(a.network.hidden_weights().iter().chain(a.network.output_weights()))
        .all(|(x, y)| x.to_bits() == y.to_bits());
    outcome(
        round_trip && bits_equal && bytes_a == bytes_b,
        format!(
            "weights round trip {}; repeated run output {} bytes, identical = {}",
            if round_trip && bits_equal { "bit-exact" } else { "differs" },
            bytes_a.len(),
            bytes_a == bytes_b
        ),
    )
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "intensity scaling ratios", secs(1), intensity_scaling),
        criterion(2, "damped linearity", secs(1), damped_linearity),
        criterion(3, "convolution closed forms", secs(10), duhamel_closed_forms),
        criterion(4, "incremental vs direct solver", secs(30), solver_cross_check),
        criterion(5, "back-propagation gradient check", secs(10), gradient_agreement),
        criterion(6, "accel-to-response surrogate", secs(120), surrogate_convergence),
        criterion(7, "period-to-peak surrogate", secs(120), spectrum_surrogate),
        criterion(8, "persistence and determinism", secs(1), persistence_and_determinism),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
