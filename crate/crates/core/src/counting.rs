//! Quantum counting of flagged products.
//!
//! The Grover iterate is `Q = A·S₀·A⁻¹·S_f` where `A` prepares the Step 3
//! state, `S₀ = I − 2|0…0⟩⟨0…0|` and `S_f` is a Z on the flag qubit. On the
//! plane spanned by the flagged and unflagged parts of `A|0⟩`, with
//! `sin²(θ/2) = M/N`, `Q` has eigenphases `π ± θ`. Phase estimation returns
//! `ω ≈ 2^t·φ/2π`; we recover `θ̂ = |π − φ|` and `M̂ = N·sin²(θ̂/2)`. Both
//! eigenphases give the same estimate, and `M = 0`, `M = N` are exact.

use num_complex::Complex;
use serde::Serialize;

use crate::circuits::{build_pipeline, uniform_index_amplitudes, Circuit, ComparatorKind, PriceScenario};
use crate::error::{arg, Error, Result};
use crate::rng::derive_seed;
use crate::scalar::{c_re, Real};
use crate::statevec::{Control, Gate, PriceOrder, Reflection, RegisterLayout, Segment, StateVector};

pub const DEFAULT_PRECISION_QUBITS: usize = 6;
pub const DEFAULT_SHOTS: usize = 11;
pub const DEFAULT_MAX_QUBITS: usize = 20;

/// How the phase-estimation register is driven.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseEstimation {
    /// Builds `2^{-t/2} Σ_j |j⟩ Q^j|ψ⟩` directly by repeated application of
    /// `Q` to the system register, then runs the inverse QFT circuit.
    #[default]
    PowerSeries,
    /// Full circuit: Hadamards, controlled `Q^{2^k}` gate by gate, inverse QFT.
    GateLevel,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountingParams {
    /// Precision qubits `t`.
    pub precision: usize,
    pub shots: usize,
    pub rng_seed: u64,
    pub max_qubits: usize,
    pub method: PhaseEstimation,
    pub comparator: ComparatorKind,
}

impl Default for CountingParams {
    fn default() -> Self {
        Self {
            precision: DEFAULT_PRECISION_QUBITS,
            shots: DEFAULT_SHOTS,
            rng_seed: 42,
            max_qubits: DEFAULT_MAX_QUBITS,
            method: PhaseEstimation::default(),
            comparator: ComparatorKind::default(),
        }
    }
}

impl CountingParams {
    pub fn new(precision: usize, shots: usize, rng_seed: u64) -> Result<Self> {
        let params = Self { precision, shots, rng_seed, ..Self::default() };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision < 1 {
            return arg("counting needs at least one precision qubit");
        }
        if self.shots < 1 {
            return arg("counting needs at least one shot");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShotOutcome {
    /// Phase-register reading `ω`.
    pub outcome: u64,
    pub m_hat: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountEstimate<T> {
    /// Median of the per-shot estimates.
    pub m_hat: usize,
    /// Grover rotation angle of the median shot, in `[0, π]`.
    pub theta_hat: T,
    /// Error bound on `m_hat`, in products.
    pub delta: T,
    /// Phase-register reading of the median shot.
    pub raw_outcome: u64,
    pub precision: usize,
    pub shots: Vec<ShotOutcome>,
}

/// Bound on `|M − M̂|` after phase estimation with `t` precision qubits:
/// `2π√(M̂·N)/2^t + π²N/2^{2t}`.
pub fn error_bound<T: Real>(precision: usize, total: usize, m_hat: usize) -> T {
    let p = T::of(2f64.powi(precision as i32));
    let n = T::of_usize(total);
    let m = T::of_usize(m_hat);
    let two_pi = T::PI() + T::PI();
    two_pi * (m * n).sqrt() / p + T::PI() * T::PI() * n / (p * p)
}

/// `(θ̂, M̂)` for a phase-register reading.
pub fn phase_to_count<T: Real>(outcome: u64, precision: usize, total: usize) -> (T, usize) {
    let phi = T::of(2.0 * std::f64::consts::PI * outcome as f64 / 2f64.powi(precision as i32));
    let theta = (T::PI() - phi).abs();
    let half = theta / T::of(2.0);
    let m = T::of_usize(total) * half.sin() * half.sin();
    let m = m.round().to_usize().unwrap_or(0).min(total);
    (theta, m)
}

/// State preparation `A` with its inverse.
#[derive(Clone, Debug)]
pub struct StatePrep<T> {
    num_qubits: usize,
    injection: Injection<T>,
    oracles: Circuit<T>,
}

#[derive(Clone, Debug)]
enum Injection<T> {
    /// Householder reflection exchanging |0…0⟩ with the index superposition.
    Reflection(Reflection<T>),
    /// Amplitudes written directly into the index register; no inverse.
    OneWay { segment: Segment, amplitudes: Vec<T> },
}

impl<T: Real> StatePrep<T> {
    /// `A` for one side of a scenario: index superposition, both price
    /// oracles, and the flag oracle.
    pub fn for_scenario(scenario: &PriceScenario, layout: &RegisterLayout, kind: ComparatorKind) -> Result<Self> {
        let amplitudes = uniform_index_amplitudes::<T>(scenario);
        let injection = Reflection::householder_from_zero(layout.index, &amplitudes)?;
        Ok(Self {
            num_qubits: layout.system_qubits(),
            injection: Injection::Reflection(injection),
            oracles: build_pipeline(scenario, layout, kind)?,
        })
    }

    /// Preparation that writes `amplitudes` into `segment` without an
    /// invertible realization. Usable for [`StatePrep::prepare`] only.
    pub fn one_way(num_qubits: usize, segment: Segment, amplitudes: Vec<T>, oracles: Circuit<T>) -> Self {
        Self { num_qubits, injection: Injection::OneWay { segment, amplitudes }, oracles }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn has_inverse(&self) -> bool {
        matches!(self.injection, Injection::Reflection(_))
    }

    /// `A|0…0⟩`
    pub fn prepare(&self) -> Result<StateVector<T>> {
        let mut state = match &self.injection {
            Injection::Reflection(r) => {
                let mut s = StateVector::prepare_basis(self.num_qubits, 0)?;
                s.apply_reflection(r)?;
                s
            }
            Injection::OneWay { segment, amplitudes } => {
                let mut amps = vec![Complex::new(T::zero(), T::zero()); 1usize << self.num_qubits];
                for (k, a) in amplitudes.iter().enumerate() {
                    amps[segment.place(k as u64)] = c_re(*a);
                }
                StateVector::prepare_amplitudes(self.num_qubits, amps)?
            }
        };
        self.oracles.apply(&mut state)?;
        Ok(state)
    }

    /// `A` as a circuit, when invertible.
    pub fn circuit(&self) -> Result<Circuit<T>> {
        let Injection::Reflection(r) = &self.injection else {
            return Err(Error::Construction("state preparation has no invertible realization".into()));
        };
        let mut c = Circuit::new();
        c.push_reflection(r.clone());
        c.append(&self.oracles);
        Ok(c)
    }
}

/// `Q = A·S₀·A⁻¹·S_f`, stored as a circuit over the system register.
#[derive(Clone, Debug)]
pub struct GroverIterate<T> {
    num_qubits: usize,
    flag: usize,
    prep: Circuit<T>,
    zero: Reflection<T>,
    circuit: Circuit<T>,
}

pub fn build_grover_iterate<T: Real>(prep: &StatePrep<T>, flag: usize) -> Result<GroverIterate<T>> {
    if flag >= prep.num_qubits() {
        return arg(format!("flag qubit {flag} outside a {}-qubit register", prep.num_qubits()));
    }
    let a = prep.circuit()?;
    let zero = Reflection::zero_state(Segment::new(0, prep.num_qubits()))?;
    let mut circuit = Circuit::new();
    circuit.push_gate(Gate::z(flag));
    circuit.append(&a.inverse());
    circuit.push_reflection(zero.clone());
    circuit.append(&a);
    Ok(GroverIterate { num_qubits: prep.num_qubits(), flag, prep: a, zero, circuit })
}

impl<T: Real> GroverIterate<T> {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        self.circuit.apply(state)
    }

    pub fn circuit(&self) -> &Circuit<T> {
        &self.circuit
    }

    /// Controlled-`Q`. `A` and `A⁻¹` cancel when the control is clear, so
    /// only the two reflections carry the control.
    pub fn controlled(&self, ctl: Control) -> Result<Circuit<T>> {
        let mut c = Circuit::new();
        c.push_gate(Gate::z(self.flag).with_control(ctl)?);
        c.append(&self.prep.inverse());
        c.push_reflection(self.zero.clone().with_control(ctl)?);
        c.append(&self.prep);
        Ok(c)
    }
}

/// QFT on `segment`: `|j⟩ → 2^{-t/2} Σ_k e^{2πi·jk/2^t}|k⟩`.
pub fn qft<T: Real>(segment: Segment) -> Result<Circuit<T>> {
    let mut c = Circuit::new();
    for target in (0..segment.width).rev() {
        c.push_gate(Gate::hadamard(segment.qubit(target)));
        for ctl in (0..target).rev() {
            let angle = T::PI() / T::of(2f64.powi((target - ctl) as i32));
            c.push_gate(Gate::phase(segment.qubit(target), angle).with_control(Control::on(segment.qubit(ctl)))?);
        }
    }
    for k in 0..segment.width / 2 {
        let (x, y) = (segment.qubit(k), segment.qubit(segment.width - 1 - k));
        c.push_gate(Gate::cnot(x, y)?);
        c.push_gate(Gate::cnot(y, x)?);
        c.push_gate(Gate::cnot(x, y)?);
    }
    Ok(c)
}

/// Joint system ⊗ phase-register state just before measurement. The phase
/// register occupies the `precision` qubits above the system register.
pub fn phase_estimation_state<T: Real>(
    iterate: &GroverIterate<T>,
    prep: &StatePrep<T>,
    precision: usize,
    method: PhaseEstimation,
) -> Result<StateVector<T>> {
    let sys = iterate.num_qubits();
    let register = Segment::new(sys, precision);
    let mut joint = match method {
        PhaseEstimation::PowerSeries => {
            let mut psi = prep.prepare()?;
            let steps = 1usize << precision;
            let scale = c_re(T::of_usize(steps).sqrt().recip());
            let mut amps = Vec::with_capacity(steps << sys);
            for j in 0..steps {
                if j > 0 {
                    iterate.apply(&mut psi)?;
                }
                amps.extend(psi.amplitudes().iter().map(|a| *a * scale));
            }
            StateVector::prepare_amplitudes(sys + precision, amps)?
        }
        PhaseEstimation::GateLevel => {
            let mut s = StateVector::prepare_basis(sys + precision, 0)?;
            prep.circuit()?.apply(&mut s)?;
            for k in 0..precision {
                s.apply_gate(&Gate::hadamard(register.qubit(k)))?;
            }
            for k in 0..precision {
                let cq = iterate.controlled(Control::on(register.qubit(k)))?;
                for _ in 0..1usize << k {
                    cq.apply(&mut s)?;
                }
            }
            s
        }
    };
    qft::<T>(register)?.inverse().apply(&mut joint)?;
    Ok(joint)
}

/// Counts flagged products in the state produced by `prep`.
pub fn count_prepared<T: Real>(prep: &StatePrep<T>, flag: usize, total: usize, params: &CountingParams) -> Result<CountEstimate<T>> {
    params.validate()?;
    let needed = prep.num_qubits() + params.precision;
    if needed > params.max_qubits {
        return Err(Error::Resource { needed, limit: params.max_qubits });
    }
    let iterate = build_grover_iterate(prep, flag)?;
    let joint = phase_estimation_state(&iterate, prep, params.precision, params.method)?;
    let register = Segment::new(prep.num_qubits(), params.precision);
    let mut shots = (0..params.shots)
        .map(|k| {
            let (outcome, _) = joint.measure(register, derive_seed(params.rng_seed, k as u64))?;
            let (_, m_hat) = phase_to_count::<T>(outcome, params.precision, total);
            Ok(ShotOutcome { outcome, m_hat })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sorted = shots.clone();
    sorted.sort_by_key(|s| (s.m_hat, s.outcome));
    let median = sorted[(sorted.len() - 1) / 2];
    let (theta_hat, _) = phase_to_count::<T>(median.outcome, params.precision, total);
    shots.sort_by_key(|s| (s.m_hat, s.outcome));
    Ok(CountEstimate {
        m_hat: median.m_hat,
        theta_hat,
        delta: error_bound(params.precision, total, median.m_hat),
        raw_outcome: median.outcome,
        precision: params.precision,
        shots,
    })
}

/// Counts `Σ f(a_i, b_i)` on the state held by the side with `order`.
pub fn count_side<T: Real>(scenario: &PriceScenario, order: PriceOrder, params: &CountingParams) -> Result<CountEstimate<T>> {
    let layout = scenario.layout(order, params.comparator, 0);
    let prep = StatePrep::for_scenario(scenario, &layout, params.comparator)?;
    count_prepared(&prep, layout.flag_qubit(), scenario.len(), params)
}

/// Counting on the buyer-first state `|i⟩|a_i⟩|b_i⟩|f⟩`.
pub fn quantum_count<T: Real>(scenario: &PriceScenario, params: &CountingParams) -> Result<CountEstimate<T>> {
    count_side(scenario, PriceOrder::BuyerFirst, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn error_bound_examples() {
        assert!(error_bound::<f64>(20, 6, 6) < 0.5);
        for t in 1..12 {
            let d: f64 = error_bound(t, 1, 0);
            assert!((d - PI * PI / 4f64.powi(t as i32)).abs() < 1e-15);
        }
        for t in 1..15 {
            for n in [1, 6, 8, 100] {
                for m in [0, 1, n / 2, n] {
                    assert!(error_bound::<f64>(t + 1, n, m) < error_bound::<f64>(t, n, m));
                }
            }
        }
    }

    #[test]
    fn phase_symmetry() {
        for t in 1..9 {
            for w in 1..(1u64 << t) {
                let a = phase_to_count::<f64>(w, t, 6);
                let b = phase_to_count::<f64>((1 << t) - w, t, 6);
                assert_eq!(a.1, b.1);
                assert!((a.0 - b.0).abs() < 1e-12);
            }
        }
        assert_eq!(phase_to_count::<f64>(0, 5, 7).1, 7);
        assert_eq!(phase_to_count::<f64>(16, 5, 7).1, 0);
    }

    #[test]
    fn params_validation() {
        assert!(CountingParams::new(0, 1, 0).is_err());
        assert!(CountingParams::new(1, 0, 0).is_err());
        assert!(CountingParams::new(3, 1, 0).is_ok());
    }

    #[test]
    fn qft_matches_dft() {
        let t = 3;
        let seg = Segment::new(0, t);
        let c = qft::<f64>(seg).unwrap();
        let dim = 1usize << t;
        for j in 0..dim {
            let mut s = StateVector::prepare_basis(t, j).unwrap();
            c.apply(&mut s).unwrap();
            for k in 0..dim {
                let expect = Complex::from_polar(1.0 / (dim as f64).sqrt(), 2.0 * PI * (j * k) as f64 / dim as f64);
                assert!((s.amplitude(k) - expect).norm() < 1e-12, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn one_way_prep_has_no_iterate() {
        let prep = StatePrep::<f64>::one_way(2, Segment::new(0, 2), vec![0.5; 4], Circuit::new());
        assert!(prep.prepare().is_ok());
        assert!(matches!(build_grover_iterate(&prep, 1), Err(Error::Construction(_))));
    }

    #[test]
    fn capacity_guard() {
        let s = PriceScenario::new(vec![3, 2, 5, 4, 7, 6], vec![2, 2, 5, 5, 6, 6], 5).unwrap();
        let params = CountingParams { max_qubits: 12, ..CountingParams::default() };
        assert_eq!(
            quantum_count::<f64>(&s, &params).unwrap_err(),
            Error::Resource { needed: 16, limit: 12 }
        );
    }

    #[test]
    fn extremes_are_exact() {
        let all = PriceScenario::new(vec![3, 2, 1], vec![1, 2, 0], 1).unwrap();
        let none = PriceScenario::new(vec![0, 1, 2], vec![1, 2, 3], 1).unwrap();
        for t in 3..6 {
            let p = CountingParams::new(t, 5, 9).unwrap();
            let e = quantum_count::<f64>(&all, &p).unwrap();
            assert_eq!(e.m_hat, 3);
            assert!(e.shots.iter().all(|s| s.m_hat == 3));
            let e = quantum_count::<f64>(&none, &p).unwrap();
            assert!(e.shots.iter().all(|s| s.m_hat == 0));
        }
    }
}
