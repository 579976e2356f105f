use num_complex::Complex;
use proptest::prelude::*;
use q3pen::statevec::{density_matrix, von_neumann_entropy, Control, Gate, Segment, StateVector};

fn state_strategy(qubits: usize) -> impl Strategy<Value = StateVector<f64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << qubits)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            let amps = v.into_iter().map(|(a, b)| Complex::new(a / norm, b / norm)).collect();
            StateVector::prepare_amplitudes(qubits, amps).unwrap()
        })
}

fn gate_strategy(qubits: usize) -> impl Strategy<Value = Gate<f64>> {
    (0..qubits, 0..qubits, 0u8..4, -3.0f64..3.0).prop_map(move |(t, c, kind, angle)| {
        let g = match kind {
            0 => Gate::not(t),
            1 => Gate::hadamard(t),
            2 => Gate::phase(t, angle),
            _ => Gate::z(t),
        };
        if c != t {
            g.with_control(if angle > 0.0 { Control::on(c) } else { Control::off(c) }).unwrap()
        } else {
            g
        }
    })
}

proptest! {
    #[test]
    fn gates_preserve_norm_and_invert(s in state_strategy(4), gates in prop::collection::vec(gate_strategy(4), 1..20)) {
        let mut work = s.clone();
        for g in &gates {
            work.apply_gate(g).unwrap();
            prop_assert!((work.norm_sqr() - 1.0).abs() < 1e-10);
        }
        for g in gates.iter().rev() {
            work.apply_gate(&g.inverse()).unwrap();
        }
        prop_assert!(work.max_deviation(&s) < 1e-10);
    }

    #[test]
    fn measurement_is_seed_deterministic(s in state_strategy(3), seed in any::<u64>()) {
        let seg = Segment::new(0, 2);
        let (a, post_a) = s.measure(seg, seed).unwrap();
        let (b, post_b) = s.measure(seg, seed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(post_a.max_deviation(&post_b) < 1e-15);
        prop_assert!((post_a.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!(s.marginal(seg).unwrap()[a as usize] > 0.0);
    }

    #[test]
    fn entropy_within_bounds(states in prop::collection::vec(state_strategy(2), 1..5)) {
        let w = 1.0 / states.len() as f64;
        let mix: Vec<(f64, &StateVector<f64>)> = states.iter().map(|s| (w, s)).collect();
        let rho = density_matrix(&mix).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= -1e-9);
        prop_assert!(s <= 2.0 + 1e-9);
        prop_assert!(s <= (states.len() as f64).log2() + 1e-9);
    }
}

#[test]
fn uniform_measurement_frequencies() {
    let s = StateVector::<f64>::uniform_over(3, 1..=6).unwrap();
    let trials = 60_000;
    let mut hist = [0usize; 8];
    for k in 0..trials {
        let (v, _) = s.measure(Segment::new(0, 3), k).unwrap();
        hist[v as usize] += 1;
    }
    assert_eq!(hist[0] + hist[7], 0);
    for h in &hist[1..7] {
        assert!((*h as f64 / trials as f64 - 1.0 / 6.0).abs() < 0.01);
    }
}

#[test]
fn pure_state_has_zero_entropy() {
    let s = StateVector::<f64>::uniform_over(3, 0..8).unwrap();
    let rho = density_matrix(&[(1.0, &s)]).unwrap();
    assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-9);
}
