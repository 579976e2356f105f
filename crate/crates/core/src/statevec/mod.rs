//! Dense state-vector simulator.
//!
//! Qubit 0 is the least-significant bit of the basis index. All modules
//! address qubits through [`Segment`]s of a [`RegisterLayout`].

mod entropy;
mod gate;
mod layout;

pub use entropy::{density_matrix, von_neumann_entropy};
pub use gate::{Control, Gate, GateKind, Polarity, Reflection};
pub use layout::{ceil_log2, PriceOrder, Register, RegisterLayout, Segment};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{arg, Result};
use crate::scalar::{c_re, Real};

/// Hard ceiling on simulated qubits regardless of configured limits.
pub const MAX_SIMULATED_QUBITS: usize = 26;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    num_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn prepare_basis(num_qubits: usize, basis_index: usize) -> Result<Self> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        if basis_index >= dim {
            return arg(format!("basis index {basis_index} out of range for {num_qubits} qubits"));
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[basis_index] = c_re(T::one());
        Ok(Self { num_qubits, amplitudes })
    }

    /// State from explicit amplitudes. Input must already be unit-norm up to
    /// the input tolerance; the stored copy is renormalized exactly.
    pub fn prepare_amplitudes(num_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_width(num_qubits)?;
        if amplitudes.len() != 1usize << num_qubits {
            return arg(format!(
                "expected {} amplitudes for {num_qubits} qubits, got {}",
                1usize << num_qubits,
                amplitudes.len()
            ));
        }
        let norm = norm_sqr(&amplitudes);
        if norm <= T::zero() {
            return arg("all-zero amplitude vector cannot be normalized");
        }
        if (norm - T::one()).abs() > T::input_tol() {
            return arg(format!("amplitudes have squared norm {norm}, expected 1"));
        }
        let scale = norm.sqrt().recip();
        let amplitudes = amplitudes.into_iter().map(|a| a * scale).collect();
        Ok(Self { num_qubits, amplitudes })
    }

    /// Uniform superposition over `indices` in a `num_qubits` register.
    pub fn uniform_over(num_qubits: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        let mut count = 0usize;
        for i in indices {
            if i >= dim {
                return arg(format!("index {i} out of range for {num_qubits} qubits"));
            }
            if amps[i].re == T::zero() {
                count += 1;
            }
            amps[i] = c_re(T::one());
        }
        if count == 0 {
            return arg("uniform superposition over an empty index set");
        }
        let a = T::of_usize(count).sqrt().recip();
        for x in amps.iter_mut() {
            *x = *x * a;
        }
        Ok(Self { num_qubits, amplitudes: amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amplitudes[index]
    }

    pub fn probability(&self, index: usize) -> T {
        self.amplitudes[index].norm_sqr()
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amplitudes)
    }

    pub fn apply_gate(&mut self, gate: &Gate<T>) -> Result<()> {
        if gate.max_qubit() >= self.num_qubits {
            return arg(format!(
                "gate touches qubit {} of a {}-qubit state",
                gate.max_qubit(),
                self.num_qubits
            ));
        }
        gate.apply(&mut self.amplitudes);
        Ok(())
    }

    pub fn apply_reflection(&mut self, refl: &Reflection<T>) -> Result<()> {
        if refl.max_qubit() >= self.num_qubits {
            return arg(format!(
                "reflection touches qubit {} of a {}-qubit state",
                refl.max_qubit(),
                self.num_qubits
            ));
        }
        refl.apply(&mut self.amplitudes);
        Ok(())
    }

    /// `⟨self|other⟩`
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        if self.num_qubits != other.num_qubits {
            return arg(format!(
                "inner product of {}- and {}-qubit states",
                self.num_qubits, other.num_qubits
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Largest absolute amplitude difference.
    pub fn max_deviation(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Tensor with `extra` fresh |0⟩ qubits placed above the current ones.
    pub fn extend_zeros(&self, extra: usize) -> Result<Self> {
        check_width(self.num_qubits + extra)?;
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); 1usize << (self.num_qubits + extra)];
        amplitudes[..self.amplitudes.len()].copy_from_slice(&self.amplitudes);
        Ok(Self { num_qubits: self.num_qubits + extra, amplitudes })
    }

    /// Outcome probabilities of measuring `segment`.
    pub fn marginal(&self, segment: Segment) -> Result<Vec<T>> {
        self.check_segment(segment)?;
        let mut probs = vec![T::zero(); 1usize << segment.width];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let v = segment.extract(i) as usize;
            probs[v] = probs[v] + a.norm_sqr();
        }
        Ok(probs)
    }

    /// Projective computational-basis measurement of `segment`, seeded.
    pub fn measure(&self, segment: Segment, seed: u64) -> Result<(u64, Self)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.measure_with(segment, &mut rng)
    }

    pub fn measure_with<R: Rng + ?Sized>(&self, segment: Segment, rng: &mut R) -> Result<(u64, Self)> {
        let probs = self.marginal(segment)?;
        let outcome = sample_index(&probs, rng) as u64;
        let p = probs[outcome as usize];
        let scale = p.sqrt().recip();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if segment.extract(i) == outcome {
                    *a * scale
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })
            .collect();
        Ok((outcome, Self { num_qubits: self.num_qubits, amplitudes }))
    }

    /// Two-outcome measurement `{|axis⟩⟨axis|, I − |axis⟩⟨axis|}`.
    /// Returns `true` for the eigenvalue-1 outcome plus the collapsed state.
    pub fn measure_projector<R: Rng + ?Sized>(&self, axis: &Self, rng: &mut R) -> Result<(bool, Self)> {
        let overlap = axis.inner_product(self)?;
        let p_accept = overlap.norm_sqr().min(T::one());
        let r = T::of(rng.random::<f64>());
        if r < p_accept {
            Ok((true, axis.scaled(overlap / c_re(overlap.norm()))))
        } else {
            let residual: Vec<Complex<T>> = self
                .amplitudes
                .iter()
                .zip(&axis.amplitudes)
                .map(|(s, a)| *s - *a * overlap)
                .collect();
            let norm = norm_sqr(&residual).sqrt();
            let amplitudes = residual.into_iter().map(|x| x / c_re(norm)).collect();
            Ok((false, Self { num_qubits: self.num_qubits, amplitudes }))
        }
    }

    fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| *a * factor).collect(),
        }
    }

    fn check_segment(&self, segment: Segment) -> Result<()> {
        if segment.is_empty() {
            return arg("cannot measure an empty segment");
        }
        if segment.end() > self.num_qubits {
            return arg(format!(
                "segment {}..{} outside a {}-qubit state",
                segment.offset,
                segment.end(),
                self.num_qubits
            ));
        }
        Ok(())
    }
}

fn check_width(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_SIMULATED_QUBITS {
        return arg(format!("{num_qubits} qubits exceeds the simulator ceiling of {MAX_SIMULATED_QUBITS}"));
    }
    Ok(())
}

fn norm_sqr<T: Real>(amps: &[Complex<T>]) -> T {
    amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
}

/// Inverse-CDF sampling of a discrete distribution.
pub(crate) fn sample_index<T: Real, R: Rng + ?Sized>(probs: &[T], rng: &mut R) -> usize {
    let total = probs.iter().fold(0.0f64, |acc, p| acc + p.to_f64().unwrap_or(0.0));
    let r = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, p) in probs.iter().enumerate() {
        let p = p.to_f64().unwrap_or(0.0);
        if p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        if r < acc {
            return i;
        }
    }
    last_nonzero
}
