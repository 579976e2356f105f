use num_complex::Complex;

use crate::error::{arg, Result};
use crate::scalar::{c, c_re, cis, Real};

use super::Segment;

/// Which value of a control qubit enables a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Fires when the control is |1⟩.
    One,
    /// Fires when the control is |0⟩ (negative control).
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::One }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::Zero }
    }

    /// Control that fires when `qubit` holds bit `bit` of a pattern.
    pub fn matching(qubit: usize, bit: bool) -> Self {
        if bit {
            Self::on(qubit)
        } else {
            Self::off(qubit)
        }
    }
}

/// `(mask, value)` pair: a basis index fires iff `index & mask == value`.
pub(crate) fn control_mask(controls: &[Control]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(mask, value), ctl| {
        let bit = 1usize << ctl.qubit;
        match ctl.polarity {
            Polarity::One => (mask | bit, value | bit),
            Polarity::Zero => (mask | bit, value),
        }
    })
}

fn check_controls(controls: &[Control], exclude: &[usize]) -> Result<()> {
    for (i, ctl) in controls.iter().enumerate() {
        if exclude.contains(&ctl.qubit) {
            return arg(format!("control qubit {} overlaps a target", ctl.qubit));
        }
        if controls[..i].iter().any(|other| other.qubit == ctl.qubit) {
            return arg(format!("control qubit {} listed twice", ctl.qubit));
        }
    }
    Ok(())
}

/// Single-qubit operation kinds.
#[derive(Clone, Debug, PartialEq)]
pub enum GateKind<T> {
    Not,
    Hadamard,
    /// `diag(1, e^{iθ})`
    Phase(T),
    /// Arbitrary 2×2 unitary, row-major.
    Unitary([[Complex<T>; 2]; 2]),
}

/// A (multi-)controlled single-qubit gate.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate<T> {
    kind: GateKind<T>,
    target: usize,
    controls: Vec<Control>,
}

impl<T: Real> Gate<T> {
    pub fn new(kind: GateKind<T>, target: usize, controls: Vec<Control>) -> Result<Self> {
        check_controls(&controls, &[target])?;
        if let GateKind::Unitary(m) = &kind {
            check_unitary(m)?;
        }
        Ok(Self { kind, target, controls })
    }

    pub fn not(target: usize) -> Self {
        Self { kind: GateKind::Not, target, controls: Vec::new() }
    }

    pub fn hadamard(target: usize) -> Self {
        Self { kind: GateKind::Hadamard, target, controls: Vec::new() }
    }

    pub fn phase(target: usize, angle: T) -> Self {
        Self { kind: GateKind::Phase(angle), target, controls: Vec::new() }
    }

    /// Pauli-Z as a phase rotation by π.
    pub fn z(target: usize) -> Self {
        Self::phase(target, T::PI())
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Not, target, vec![Control::on(control)])
    }

    pub fn toffoli(c1: Control, c2: Control, target: usize) -> Result<Self> {
        Self::new(GateKind::Not, target, vec![c1, c2])
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Result<Self> {
        Self::new(GateKind::Not, target, controls)
    }

    pub fn with_control(mut self, ctl: Control) -> Result<Self> {
        check_controls(std::slice::from_ref(&ctl), &[self.target])?;
        check_controls(&self.controls, &[ctl.qubit])?;
        self.controls.push(ctl);
        Ok(self)
    }

    pub fn kind(&self) -> &GateKind<T> {
        &self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// Largest qubit index touched.
    pub fn max_qubit(&self) -> usize {
        self.controls.iter().map(|c| c.qubit).fold(self.target, usize::max)
    }

    /// True when the gate maps basis states to basis states.
    pub fn is_classical(&self) -> bool {
        matches!(self.kind, GateKind::Not)
    }

    pub fn matrix(&self) -> [[Complex<T>; 2]; 2] {
        let zero = Complex::new(T::zero(), T::zero());
        let one = c_re(T::one());
        match &self.kind {
            GateKind::Not => [[zero, one], [one, zero]],
            GateKind::Hadamard => {
                let h = c_re(T::FRAC_1_SQRT_2());
                [[h, h], [h, -h]]
            }
            GateKind::Phase(theta) => [[one, zero], [zero, cis(*theta)]],
            GateKind::Unitary(m) => *m,
        }
    }

    pub fn inverse(&self) -> Self {
        let kind = match &self.kind {
            GateKind::Not => GateKind::Not,
            GateKind::Hadamard => GateKind::Hadamard,
            GateKind::Phase(theta) => GateKind::Phase(-*theta),
            GateKind::Unitary(m) => GateKind::Unitary([
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ]),
        };
        Self { kind, target: self.target, controls: self.controls.clone() }
    }

    pub(crate) fn apply(&self, amps: &mut [Complex<T>]) {
        let tbit = 1usize << self.target;
        let (mask, value) = control_mask(&self.controls);
        let fires = |i: usize| i & tbit == 0 && i & mask == value;
        match &self.kind {
            GateKind::Not => {
                for i in 0..amps.len() {
                    if fires(i) {
                        amps.swap(i, i | tbit);
                    }
                }
            }
            GateKind::Phase(theta) => {
                let ph = cis(*theta);
                for i in 0..amps.len() {
                    if fires(i) {
                        amps[i | tbit] = amps[i | tbit] * ph;
                    }
                }
            }
            _ => {
                let m = self.matrix();
                for i in 0..amps.len() {
                    if fires(i) {
                        let (a0, a1) = (amps[i], amps[i | tbit]);
                        amps[i] = m[0][0] * a0 + m[0][1] * a1;
                        amps[i | tbit] = m[1][0] * a0 + m[1][1] * a1;
                    }
                }
            }
        }
    }

    /// Image of a basis index; only meaningful for classical gates.
    pub(crate) fn permute_basis(&self, index: usize) -> usize {
        debug_assert!(self.is_classical());
        let (mask, value) = control_mask(&self.controls);
        if index & mask == value {
            index ^ (1usize << self.target)
        } else {
            index
        }
    }
}

fn check_unitary<T: Real>(m: &[[Complex<T>; 2]; 2]) -> Result<()> {
    // M·M† = I
    for r in 0..2 {
        for col in 0..2 {
            let dot = m[r][0] * m[col][0].conj() + m[r][1] * m[col][1].conj();
            let expect = if r == col { T::one() } else { T::zero() };
            if (dot - c(expect, T::zero())).norm() > T::gate_tol() {
                return arg("2x2 matrix is not unitary");
            }
        }
    }
    Ok(())
}

/// Reflection `I − 2|u⟩⟨u|` acting on a contiguous segment, optionally
/// controlled by qubits outside it. Hermitian and self-inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Reflection<T> {
    segment: Segment,
    axis: Vec<Complex<T>>,
    controls: Vec<Control>,
}

impl<T: Real> Reflection<T> {
    pub fn new(segment: Segment, axis: Vec<Complex<T>>, controls: Vec<Control>) -> Result<Self> {
        if segment.width == 0 {
            return arg("reflection segment is empty");
        }
        if axis.len() != 1usize << segment.width {
            return arg(format!(
                "reflection axis has {} entries, segment needs {}",
                axis.len(),
                1usize << segment.width
            ));
        }
        let norm: T = axis.iter().map(|a| a.norm_sqr()).fold(T::zero(), |x, y| x + y);
        if (norm - T::one()).abs() > T::input_tol() {
            return arg("reflection axis is not normalized");
        }
        let seg_qubits: Vec<usize> = segment.qubits().collect();
        check_controls(&controls, &seg_qubits)?;
        let scale = norm.sqrt().recip();
        let axis = axis.into_iter().map(|a| a * scale).collect();
        Ok(Self { segment, axis, controls })
    }

    /// `I − 2|0…0⟩⟨0…0|` on the segment: flips the sign of the all-zeros state.
    pub fn zero_state(segment: Segment) -> Result<Self> {
        let mut axis = vec![Complex::new(T::zero(), T::zero()); 1usize << segment.width];
        axis[0] = c_re(T::one());
        Self::new(segment, axis, Vec::new())
    }

    /// Householder reflection exchanging |0…0⟩ and the real unit vector `target`.
    pub fn householder_from_zero(segment: Segment, target: &[T]) -> Result<Self> {
        let dim = 1usize << segment.width;
        if target.len() != dim {
            return arg("householder target has wrong dimension");
        }
        let mut diff: Vec<T> = target.iter().map(|&x| -x).collect();
        diff[0] = diff[0] + T::one();
        let norm = diff.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        if norm <= T::gate_tol() {
            // target is |0…0⟩ itself; any reflection fixing |0⟩ works
            let mut axis = vec![T::zero(); dim];
            axis[dim - 1] = T::one();
            if dim == 1 {
                return arg("cannot build a reflection on a 0-qubit segment");
            }
            return Self::new(segment, axis.into_iter().map(c_re).collect(), Vec::new());
        }
        let axis = diff.into_iter().map(|x| c_re(x / norm)).collect();
        Self::new(segment, axis, Vec::new())
    }

    pub fn with_control(mut self, ctl: Control) -> Result<Self> {
        let seg_qubits: Vec<usize> = self.segment.qubits().collect();
        check_controls(std::slice::from_ref(&ctl), &seg_qubits)?;
        check_controls(&self.controls, &[ctl.qubit])?;
        self.controls.push(ctl);
        Ok(self)
    }

    pub fn segment(&self) -> Segment {
        self.segment
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn max_qubit(&self) -> usize {
        self.controls
            .iter()
            .map(|c| c.qubit)
            .fold(self.segment.end().saturating_sub(1), usize::max)
    }

    pub(crate) fn apply(&self, amps: &mut [Complex<T>]) {
        let seg_mask = self.segment.mask();
        let (mask, value) = control_mask(&self.controls);
        let two = T::one() + T::one();
        let mut buf = vec![Complex::new(T::zero(), T::zero()); self.axis.len()];
        for base in 0..amps.len() {
            if base & seg_mask != 0 || base & mask != value {
                continue;
            }
            let mut overlap = Complex::new(T::zero(), T::zero());
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = amps[base | self.segment.place(k as u64)];
                overlap = overlap + self.axis[k].conj() * *slot;
            }
            let overlap = overlap * two;
            for (k, v) in buf.iter().enumerate() {
                amps[base | self.segment.place(k as u64)] = *v - self.axis[k] * overlap;
            }
        }
    }
}
