#![allow(dead_code)]

use num_complex::Complex;
use q3pen::circuits::classical_f;
use q3pen::statevec::{Register, RegisterLayout};
use q3pen::PriceScenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn worked_scenario() -> PriceScenario {
    PriceScenario::new(vec![3, 2, 5, 4, 7, 6], vec![2, 2, 5, 5, 6, 6], 5).unwrap()
}

/// Random scenario with `products` items and prices below `2^max_bits`.
pub fn random_scenario(rng: &mut ChaCha8Rng, products: usize, max_bits: usize) -> PriceScenario {
    let limit = 1u64 << max_bits;
    let a: Vec<u64> = (0..products).map(|_| rng.random_range(0..limit)).collect();
    let b: Vec<u64> = (0..products).map(|_| rng.random_range(0..limit)).collect();
    let eps = rng.random_range(1..=products);
    PriceScenario::new(a, b, eps).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Step 3 state written out term by term: `N^{-1/2} Σ |i⟩|a_i⟩|b_i⟩|f⟩`.
pub fn expected_step3_amplitudes(s: &PriceScenario, layout: &RegisterLayout) -> Vec<Complex<f64>> {
    let mut amps = vec![Complex::new(0.0, 0.0); 1 << layout.total_qubits()];
    let amp = 1.0 / (s.len() as f64).sqrt();
    for (k, (&a, &b)) in s.buyer_prices().iter().zip(s.seller_prices()).enumerate() {
        let idx = layout.basis_index(&[
            (Register::Index, k as u64 + 1),
            (Register::PriceA, a),
            (Register::PriceB, b),
            (Register::Flag, classical_f(a, b) as u64),
        ]);
        amps[idx] = Complex::new(amp, 0.0);
    }
    amps
}
