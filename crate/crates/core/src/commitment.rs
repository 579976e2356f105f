//! Bit-string commitment through code-based fingerprint states.
//!
//! An `n`-bit value `x` is encoded by a binary linear code into `m` bits
//! and committed as `|τ_x⟩ = m^{-1/2} Σ_{j<m} (−1)^{E(x)_j} |j⟩` on
//! `⌈log₂ m⌉` qubits. Positions `j ≥ m` carry zero amplitude, so
//! `⟨τ_x|τ_y⟩ = 1 − 2·dist(E(x), E(y))/m` exactly.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::scalar::{c_re, Real};
use crate::statevec::{ceil_log2, StateVector};

/// Largest message width whose distance is checked exhaustively.
pub const MAX_EXHAUSTIVE_BITS: usize = 16;

/// Binary linear `[m, n]` code given by generator rows (bit `j` of a row is
/// codeword position `j`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearCode {
    n: usize,
    m: usize,
    rows: Vec<u64>,
}

impl LinearCode {
    pub fn from_rows(m: usize, rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_EXHAUSTIVE_BITS {
            return arg(format!("message width {n} outside 1..={MAX_EXHAUSTIVE_BITS}"));
        }
        if m <= n || m > 63 {
            return arg(format!("codeword length {m} must exceed message width {n} and be < 64"));
        }
        if rows.iter().any(|r| r >> m != 0) {
            return arg("generator row wider than codeword length");
        }
        let code = Self { n, m, rows };
        if !code.is_injective() {
            return arg("generator rows are linearly dependent");
        }
        Ok(code)
    }

    /// Codeword length for expansion `c`: `⌈c·n⌉`.
    pub fn length_for(n: usize, expansion: f64) -> Result<usize> {
        if expansion.is_nan() || expansion <= 1.0 || !expansion.is_finite() {
            return arg(format!("expansion constant {expansion} must exceed 1"));
        }
        Ok(((n as f64) * expansion - 1e-9).ceil() as usize)
    }

    /// Seeded random generator matrix, redrawn until the fingerprint distance
    /// reaches `min_distance`.
    pub fn random(n: usize, expansion: f64, seed: u64, min_distance: f64) -> Result<Self> {
        let m = Self::length_for(n, expansion)?;
        if m > 63 {
            return arg("codeword length too large");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let rows: Vec<u64> = (0..n).map(|_| rng.random::<u64>() & ((1u64 << m) - 1)).collect();
            if let Ok(code) = Self::from_rows(m, rows) {
                if code.relative_distance() >= min_distance {
                    return Ok(code);
                }
            }
        }
        Err(Error::Construction(format!(
            "no [{m}, {n}] code with relative distance {min_distance} found"
        )))
    }

    /// Deterministic systematic code: `x` followed by the cyclic neighbour
    /// parities `x_j ⊕ x_{j+1}`, repeated to fill `m` positions.
    pub fn systematic_parity(n: usize, expansion: f64) -> Result<Self> {
        let m = Self::length_for(n, expansion)?;
        let rows = (0..n)
            .map(|i| {
                let mut row = 1u64 << i;
                for pos in n..m {
                    let j = (pos - n) % n;
                    // parity bit j covers x_j and x_{j+1}
                    if n > 1 && (i == j || i == (j + 1) % n) {
                        row |= 1 << pos;
                    }
                }
                row
            })
            .collect();
        Self::from_rows(m, rows)
    }

    pub fn message_bits(&self) -> usize {
        self.n
    }

    pub fn codeword_bits(&self) -> usize {
        self.m
    }

    pub fn encode(&self, x: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, _)| x >> i & 1 == 1)
            .fold(0, |acc, (_, r)| acc ^ r)
    }

    fn is_injective(&self) -> bool {
        (1..1u64 << self.n).all(|x| self.encode(x) != 0)
    }

    /// `min over x ≠ 0 of min(w, m − w)/m` with `w = |E(x)|`. Codeword
    /// pairs at relative distance in `[δ, 1 − δ]` give fingerprint overlaps
    /// of magnitude at most `1 − 2δ`.
    pub fn relative_distance(&self) -> f64 {
        let m = self.m as u32;
        (1..1u64 << self.n)
            .map(|x| {
                let w = self.encode(x).count_ones();
                w.min(m - w)
            })
            .min()
            .unwrap_or(0) as f64
            / self.m as f64
    }

    /// `(1 − 2δ)²`: largest accept probability of a false unveil.
    pub fn binding_bound(&self) -> f64 {
        let x = 1.0 - 2.0 * self.relative_distance();
        x * x
    }

    /// Fingerprint register width `⌈log₂ m⌉`.
    pub fn fingerprint_qubits(&self) -> usize {
        ceil_log2(self.m as u64)
    }

    pub fn fingerprint<T: Real>(&self, x: u64) -> Result<StateVector<T>> {
        if x >> self.n != 0 {
            return arg(format!("value {x} does not fit in {} bits", self.n));
        }
        let q = self.fingerprint_qubits();
        let word = self.encode(x);
        let a = T::of_usize(self.m).sqrt().recip();
        let amps = (0..1usize << q)
            .map(|j| {
                if j >= self.m {
                    Complex::new(T::zero(), T::zero())
                } else if word >> j & 1 == 1 {
                    c_re(-a)
                } else {
                    c_re(a)
                }
            })
            .collect();
        StateVector::prepare_amplitudes(q, amps)
    }

    /// `⟨τ_x|τ_y⟩`
    pub fn overlap<T: Real>(&self, x: u64, y: u64) -> Result<T> {
        Ok(self.fingerprint::<T>(x)?.inner_product(&self.fingerprint::<T>(y)?)?.re)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommitmentPhase {
    Committed,
    Unveiled,
    Accepted,
    Rejected,
}

/// Commitment held by the receiving party.
#[derive(Clone, Debug)]
pub struct Commitment<T> {
    fingerprint: StateVector<T>,
    code: LinearCode,
    phase: CommitmentPhase,
    unveiled: Option<u64>,
}

/// Commits to the `n`-bit value `x`.
pub fn commit<T: Real>(x: u64, code: &LinearCode) -> Result<Commitment<T>> {
    Ok(Commitment { fingerprint: code.fingerprint(x)?, code: code.clone(), phase: CommitmentPhase::Committed, unveiled: None })
}

impl<T: Real> Commitment<T> {
    pub fn fingerprint(&self) -> &StateVector<T> {
        &self.fingerprint
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn phase(&self) -> CommitmentPhase {
        self.phase
    }

    pub fn committed_bits(&self) -> usize {
        self.code.message_bits()
    }

    pub fn unveiled(&self) -> Option<u64> {
        self.unveiled
    }

    pub fn qubits(&self) -> usize {
        self.fingerprint.num_qubits()
    }

    /// Unveils `claimed` and checks it by projecting the held fingerprint
    /// onto `|τ_claimed⟩`. Accepts on the eigenvalue-1 outcome.
    pub fn verify<R: Rng + ?Sized>(&mut self, claimed: u64, rng: &mut R) -> Result<bool> {
        if self.phase != CommitmentPhase::Committed {
            return Err(Error::State(format!("commitment already {:?}", self.phase)));
        }
        let axis = self.code.fingerprint::<T>(claimed)?;
        self.phase = CommitmentPhase::Unveiled;
        self.unveiled = Some(claimed);
        let (accept, post) = self.fingerprint.measure_projector(&axis, rng)?;
        self.fingerprint = post;
        self.phase = if accept { CommitmentPhase::Accepted } else { CommitmentPhase::Rejected };
        Ok(accept)
    }

    pub fn verify_seeded(&mut self, claimed: u64, seed: u64) -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.verify(claimed, &mut rng)
    }
}

/// Detection probability `1 − 2^{−(m − log₂ n)}` for a cheating party.
pub fn cheat_detection_probability(n: usize, m: usize) -> Result<f64> {
    if n == 0 {
        return arg("committed string must have at least one bit");
    }
    let log_n = (n as f64).log2();
    if m as f64 <= log_n {
        return arg(format!("m = {m} must exceed log2(n) = {log_n:.4}"));
    }
    Ok(1.0 - (-(m as f64 - log_n)).exp2())
}
