//! One test per acceptance criterion. Each prints a PASS/FAIL line; run with
//! `cargo test -p q3pen --test acceptance -- --nocapture` to see them.

mod common;

use std::time::Instant;

use common::{expected_step3_amplitudes, worked_scenario, rng};
use q3pen::analysis::{cost_table, detection_curve, holevo_bound};
use q3pen::circuits::{build_comparator_with, build_pipeline, initial_state};
use q3pen::commitment::{commit, LinearCode};
use q3pen::counting::{error_bound, quantum_count, CountingParams};
use q3pen::protocol::{measurement_attack, run_negotiation, transcript_costs, NegotiationConfig, Role};
use q3pen::statevec::{ceil_log2, PriceOrder, Register, RegisterLayout, StateVector};
use q3pen::{ComparatorKind, PriceScenario, Transcript64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u8, name: &str, pass: bool, detail: String) {
    println!("criterion {id} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_worked_example() {
    let s = worked_scenario();
    let start = Instant::now();
    let t: Transcript64 = run_negotiation(&s, &NegotiationConfig::for_scenario(&s, 42).unwrap()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let pass = t.t_a == 5 && t.t_b == 5 && t.trade && secs < 10.0;
    report(1, "worked example", pass, format!("t_A={} t_B={} trade={} in {secs:.3}s", t.t_a, t.t_b, t.trade));
}

#[test]
fn criterion_2_comparator_equivalence() {
    let mut failures = 0usize;
    let mut checked = 0usize;
    for d in 1..=4 {
        let layout = RegisterLayout::packed(0, d, PriceOrder::BuyerFirst, 0, 0);
        let cmp = build_comparator_with::<f64>(ComparatorKind::InPlace, d, &layout).unwrap();
        let clayout = RegisterLayout::packed(0, d, PriceOrder::BuyerFirst, ComparatorKind::Cascade.ancilla_needed(d), 0);
        let cascade = build_comparator_with::<f64>(ComparatorKind::Cascade, d, &clayout).unwrap();
        for a in 0..1u64 << d {
            for b in 0..1u64 << d {
                checked += 1;
                let want = (a >= b) as u64;
                // state-vector simulation for the in-place circuit
                let idx = layout.basis_index(&[(Register::PriceA, a), (Register::PriceB, b)]);
                let mut s = StateVector::<f64>::prepare_basis(layout.total_qubits(), idx).unwrap();
                cmp.apply(&mut s).unwrap();
                let out = layout.basis_index(&[(Register::PriceA, a), (Register::PriceB, b), (Register::Flag, want)]);
                if (s.probability(out) - 1.0).abs() > 1e-12 {
                    failures += 1;
                }
                // basis permutation for the ancilla cascade
                let cidx = clayout.basis_index(&[(Register::PriceA, a), (Register::PriceB, b)]);
                let cout = cascade.permute_basis(cidx).unwrap();
                if clayout.flag.extract(cout) != want || cout & !clayout.flag.mask() != cidx {
                    failures += 1;
                }
            }
        }
    }
    report(2, "comparator equivalence", failures == 0, format!("{checked} pairs, {failures} failures"));
}

#[test]
fn criterion_3_state_structure() {
    let mut r = rng(303);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let products = r.random_range(1..=8);
        let bits = r.random_range(1..=3);
        let s = common::random_scenario(&mut r, products, bits);
        assert!(s.d() <= 3);
        let layout = s.layout(PriceOrder::BuyerFirst, ComparatorKind::InPlace, 0);
        let mut state = initial_state::<f64>(&s, layout.total_qubits()).unwrap();
        build_pipeline::<f64>(&s, &layout, ComparatorKind::InPlace).unwrap().apply(&mut state).unwrap();
        let expect = expected_step3_amplitudes(&s, &layout);
        for (i, e) in expect.iter().enumerate() {
            worst = worst.max((state.amplitude(i).norm() - e.norm()).abs());
        }
    }
    report(3, "state structure", worst < 1e-9, format!("20 scenarios, max deviation {worst:.2e}"));
}

#[test]
fn criterion_4_counting_accuracy() {
    let mut r = rng(404);
    let (t, total) = (7, 8);
    let (mut within, mut shots, mut exact) = (0usize, 0usize, 0usize);
    for k in 0..50 {
        let mut a: Vec<u64> = (0..total).map(|_| r.random_range(0..4)).collect();
        let b: Vec<u64> = (0..total).map(|_| r.random_range(0..4)).collect();
        a[0] = 3;
        let s = PriceScenario::new(a, b, 1).unwrap();
        assert_eq!(s.d(), 2);
        let params = CountingParams::new(t, 11, 1000 + k).unwrap();
        let est = quantum_count::<f64>(&s, &params).unwrap();
        let truth = s.marked_count();
        for shot in &est.shots {
            shots += 1;
            let delta: f64 = error_bound(t, total, shot.m_hat);
            if (shot.m_hat as f64 - truth as f64).abs() <= delta {
                within += 1;
            }
        }
        exact += (est.m_hat == truth) as usize;
    }
    let shot_rate = within as f64 / shots as f64;
    let median_rate = exact as f64 / 50.0;
    report(
        4,
        "counting accuracy",
        shot_rate >= 0.75 && median_rate >= 0.95,
        format!("single shots within delta {shot_rate:.3}, median exact {median_rate:.2}"),
    );
}

#[test]
fn criterion_5_holevo_bound() {
    let mut r = rng(505);
    let mut worst: f64 = 0.0;
    for total in [2usize, 4, 6, 8, 16] {
        let d = 10 - ceil_log2(total as u64 + 1);
        let limit = 1u64 << d.min(3);
        let a: Vec<u64> = (0..total).map(|_| r.random_range(0..limit)).collect();
        let s = PriceScenario::new(a.clone(), a, 1).unwrap();
        let chi: f64 = holevo_bound(&s).unwrap();
        worst = worst.max((chi - (total as f64).log2()).abs());
    }
    report(5, "holevo bound", worst < 1e-9, format!("max |chi - log2 N| = {worst:.2e}"));
}

#[test]
fn criterion_6_measurement_attack() {
    let s = worked_scenario();
    let runs = 60_000u64;
    let mut hist = [0usize; 7];
    let mut bad_pairs = 0usize;
    for seed in 0..runs {
        let out = measurement_attack::<f64>(&s, Role::Bob, seed).unwrap();
        if !(1..=6).contains(&out.index) || out.price != s.buyer_prices()[out.index as usize - 1] {
            bad_pairs += 1;
            continue;
        }
        hist[out.index as usize] += 1;
    }
    let worst = hist[1..]
        .iter()
        .map(|&h| (h as f64 / runs as f64 - 1.0 / 6.0).abs())
        .fold(0.0, f64::max);
    report(
        6,
        "measurement attack",
        bad_pairs == 0 && worst <= 0.01,
        format!("{runs} runs, max frequency deviation {worst:.4}, invalid pairs {bad_pairs}"),
    );
}

#[test]
fn criterion_7_commitment_binding() {
    let code = LinearCode::systematic_parity(3, 2.0).unwrap();
    let bound = code.binding_bound();
    let trials = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let (mut worst_gap, mut over_bound, mut honest_rejects): (f64, usize, usize) = (0.0, 0, 0);
    for x in 0..8u64 {
        for y in 0..8u64 {
            let accepted = (0..trials)
                .filter(|_| commit::<f64>(x, &code).unwrap().verify(y, &mut rng).unwrap())
                .count();
            if x == y {
                honest_rejects += trials - accepted;
                continue;
            }
            let o: f64 = code.overlap(x, y).unwrap();
            worst_gap = worst_gap.max((accepted as f64 / trials as f64 - o * o).abs());
            over_bound += (o * o > bound + 1e-12) as usize;
        }
    }
    report(
        7,
        "commitment binding",
        worst_gap <= 0.02 && over_bound == 0 && honest_rejects == 0,
        format!("max |rate - overlap^2| {worst_gap:.4}, bound {bound:.4}, over bound {over_bound}, honest rejects {honest_rejects}"),
    );
}

#[test]
fn criterion_8_cost_formulas() {
    let rows = cost_table(1..=100, 2).unwrap();
    let mismatches = rows
        .iter()
        .filter(|r| {
            let n = r.products;
            r.q3pen != 4 * ceil_log2(n as u64 + 1) + 4 || r.c05 != 4 * n || r.a07 != 8 * n
        })
        .count();
    let s = worked_scenario();
    let t: Transcript64 = run_negotiation(&s, &NegotiationConfig::for_scenario(&s, 42).unwrap()).unwrap();
    let c = transcript_costs(&t).unwrap();
    let pass = rows.len() == 100 && mismatches == 0 && c.qubits == 12 && c.cbits == 6;
    report(8, "cost formulas", pass, format!("{mismatches} table mismatches, transcript {} qubits + {} cbits", c.qubits, c.cbits));
}

#[test]
fn criterion_9_detection_probability() {
    let row = detection_curve(2.0, [3]).unwrap()[0];
    let pass = row.m == 6 && (row.p_detect - 0.9531).abs() <= 1e-4;
    report(9, "detection probability", pass, format!("n=3 m={} p={:.6}", row.m, row.p_detect));
}
