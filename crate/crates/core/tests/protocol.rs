mod common;

use common::{worked_scenario, random_scenario, rng};
use q3pen::counting::error_bound;
use q3pen::protocol::{
    measurement_attack, run_negotiation, run_with_adversary, transcript_costs, Adversary, Behavior, NegotiationConfig,
    NegotiationTranscript, Payload, Role,
};
use q3pen::PriceScenario;
use rand::Rng;

fn run(s: &PriceScenario, seed: u64) -> NegotiationTranscript<f64> {
    run_negotiation(s, &NegotiationConfig::for_scenario(s, seed).unwrap()).unwrap()
}

#[test]
fn worked_scenario_trades() {
    let t = run(&worked_scenario(), 42);
    assert_eq!((t.t_a, t.t_b), (5, 5));
    assert!(t.consistency && t.trade);
    assert!(t.commitments.bob_accepts_alice && t.commitments.alice_accepts_bob);
}

#[test]
fn higher_threshold_blocks_trade() {
    let s = worked_scenario().with_epsilon(6).unwrap();
    let t = run(&s, 42);
    assert_eq!((t.t_a, t.t_b), (5, 5));
    assert!(!t.trade);
}

#[test]
fn buyer_always_below_seller() {
    let s = PriceScenario::new(vec![0, 1, 2, 3], vec![4, 5, 6, 7], 1).unwrap();
    let t = run(&s, 1);
    assert_eq!((t.t_a, t.t_b), (0, 0));
    assert!(!t.trade);
}

#[test]
fn costs_of_worked_run() {
    let t = run(&worked_scenario(), 42);
    let c = transcript_costs(&t).unwrap();
    assert_eq!((c.qubits, c.cbits, c.fingerprint_qubits), (12, 6, 6));
    assert_eq!(c, t.costs);
}

#[test]
fn single_product_costs() {
    let s = PriceScenario::new(vec![1], vec![0], 1).unwrap();
    let t = run(&s, 3);
    let c = transcript_costs(&t).unwrap();
    assert_eq!((c.qubits, c.cbits), (4, 2));
    assert!(t.trade);
}

#[test]
fn wider_prices_cost_two_qubits_per_bit() {
    let narrow = PriceScenario::new(vec![3, 1, 2], vec![2, 2, 0], 1).unwrap();
    let wide = PriceScenario::new(vec![15, 1, 2], vec![2, 2, 0], 1).unwrap();
    assert_eq!(wide.d() - narrow.d(), 2);
    let a = transcript_costs(&run(&narrow, 0)).unwrap();
    let b = transcript_costs(&run(&wide, 0)).unwrap();
    assert_eq!(b.qubits - a.qubits, 4);
    assert_eq!(a.cbits, b.cbits);
}

#[test]
fn only_counts_cross_classically() {
    let t = run(&worked_scenario(), 42);
    let classical: Vec<_> = t.messages.iter().filter(|m| m.payload == Payload::ClassicalBits).collect();
    assert_eq!(classical.len(), 2);
    assert!(classical.iter().all(|m| m.step == 5 && m.cbits == 3));
    let json = t.to_json();
    assert!(!json.contains("[3,2,5,4,7,6]") && !json.contains("[2,2,5,5,6,6]"));
}

#[test]
fn trade_agrees_with_classical_rule() {
    let mut r = rng(21);
    for _ in 0..15 {
        let products = r.random_range(1..=3);
        let bits = r.random_range(1..=2);
        let s = random_scenario(&mut r, products, bits);
        let mut cfg = NegotiationConfig::for_scenario(&s, r.random()).unwrap();
        cfg.counting.precision = (1..20).find(|&t| error_bound::<f64>(t, s.len(), s.len()) < 0.5).unwrap();
        cfg.counting.max_qubits = 14;
        let t: NegotiationTranscript<f64> = run_negotiation(&s, &cfg).unwrap();
        assert_eq!(t.t_a, t.t_b);
        assert_eq!(t.t_a as usize, s.marked_count());
        assert_eq!(t.trade, s.classical_trade());
    }
}

#[test]
fn seed_reproducible_json() {
    let s = worked_scenario();
    assert_eq!(run(&s, 7).to_json(), run(&s, 7).to_json());
}

#[test]
fn honest_adversary_harness_detects_nothing() {
    let s = worked_scenario();
    let cfg = NegotiationConfig::for_scenario(&s, 42).unwrap();
    for party in [Role::Alice, Role::Bob] {
        let t: NegotiationTranscript<f64> =
            run_with_adversary(&s, Adversary { party, behavior: Behavior::Honest }, &cfg).unwrap();
        let report = t.adversary.unwrap();
        assert!(!report.cheat_detected);
        assert!(t.trade);
    }
}

#[test]
fn measuring_cheater_learns_one_valid_pair() {
    let s = worked_scenario();
    for seed in 0..200 {
        let out = measurement_attack::<f64>(&s, Role::Bob, seed).unwrap();
        assert!((1..=6).contains(&out.index));
        assert_eq!(out.price, s.buyer_prices()[out.index as usize - 1]);
    }
}

#[test]
fn measure_and_cheat_skips_counting() {
    let s = worked_scenario();
    let cfg = NegotiationConfig::for_scenario(&s, 9).unwrap();
    let adv = Adversary { party: Role::Bob, behavior: Behavior::MeasureAndCheat };
    let t: NegotiationTranscript<f64> = run_with_adversary(&s, adv, &cfg).unwrap();
    assert!(t.estimates.bob.is_none());
    assert!(t.adversary.unwrap().learned.is_some());
    assert_eq!(t.t_b, t.t_a);
}

#[test]
fn false_unveil_detected_at_commitment_rate() {
    let s = PriceScenario::new(vec![2, 1, 3], vec![1, 2, 3], 2).unwrap();
    let mut cfg = NegotiationConfig::for_scenario(&s, 0).unwrap();
    cfg.counting.precision = 5;
    cfg.counting.shots = 1;
    let code = cfg.code.clone();
    let trials = 10_000;
    let (mut rejected, mut expected) = (0usize, 0.0);
    for k in 0..trials {
        cfg.master_seed = k;
        let adv = Adversary { party: Role::Bob, behavior: Behavior::FalseUnveil { claimed: None } };
        let t: NegotiationTranscript<f64> = run_with_adversary(&s, adv, &cfg).unwrap();
        let committed = t.estimates.bob.as_ref().unwrap().m_hat as u64;
        let o: f64 = code.overlap(committed, t.t_b).unwrap();
        expected += 1.0 - o * o;
        let report = t.adversary.unwrap();
        rejected += report.commitment_rejected as usize;
        assert!(!report.cheat_detected || !t.trade);
    }
    let rate = rejected as f64 / trials as f64;
    let expected = expected / trials as f64;
    assert!((rate - expected).abs() <= 0.02, "rate {rate} expected {expected}");
}
