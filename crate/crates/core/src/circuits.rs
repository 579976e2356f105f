//! Protocol unitaries: price-loading oracles, the comparator flag oracle,
//! and the [`Circuit`] container they are built into.

use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::scalar::Real;
use crate::statevec::{ceil_log2, Control, Gate, PriceOrder, Reflection, Register, RegisterLayout, Segment, StateVector};

/// Inputs of one negotiation: buyer ceilings `A`, seller floors `B`,
/// threshold `ε`, and the derived register widths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceScenario {
    buyer: Vec<u64>,
    seller: Vec<u64>,
    epsilon: usize,
    n: usize,
    d: usize,
}

impl PriceScenario {
    pub fn new(buyer: Vec<u64>, seller: Vec<u64>, epsilon: usize) -> Result<Self> {
        if buyer.is_empty() {
            return arg("scenario needs at least one product");
        }
        if buyer.len() != seller.len() {
            return arg(format!(
                "buyer has {} prices but seller has {}",
                buyer.len(),
                seller.len()
            ));
        }
        let count = buyer.len();
        if epsilon < 1 || epsilon > count {
            return arg(format!("threshold {epsilon} outside 1..={count}"));
        }
        let max_price = buyer.iter().chain(&seller).copied().max().unwrap_or(0);
        if max_price >= 1 << 20 {
            return arg(format!("price {max_price} too large to simulate"));
        }
        let n = ceil_log2(count as u64 + 1);
        // a zero-width price register cannot be sent, so d is at least 1
        let d = ceil_log2(max_price + 1).max(1);
        Ok(Self { buyer, seller, epsilon, n, d })
    }

    /// Product count `N`.
    pub fn len(&self) -> usize {
        self.buyer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buyer.is_empty()
    }

    pub fn buyer_prices(&self) -> &[u64] {
        &self.buyer
    }

    pub fn seller_prices(&self) -> &[u64] {
        &self.seller
    }

    pub fn epsilon(&self) -> usize {
        self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: usize) -> Result<Self> {
        Self::new(self.buyer.clone(), self.seller.clone(), epsilon)
    }

    /// Index register width `⌈log₂(N+1)⌉`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Price register width `⌈log₂(max price + 1)⌉`, at least 1.
    pub fn d(&self) -> usize {
        self.d
    }

    /// `Σ f(a_i, b_i)` evaluated classically.
    pub fn marked_count(&self) -> usize {
        self.buyer.iter().zip(&self.seller).filter(|(&a, &b)| classical_f(a, b)).count()
    }

    pub fn classical_trade(&self) -> bool {
        self.marked_count() >= self.epsilon
    }

    /// Register layout for the party whose own price register comes second.
    pub fn layout(&self, order: PriceOrder, comparator: ComparatorKind, counting: usize) -> RegisterLayout {
        RegisterLayout::packed(self.n, self.d, order, comparator.ancilla_needed(self.d), counting)
    }
}

/// Comparison bit: `a ≥ b`.
pub fn classical_f(a: u64, b: u64) -> bool {
    a >= b
}

/// One step of a [`Circuit`].
#[derive(Clone, Debug, PartialEq)]
pub enum Op<T> {
    Gate(Gate<T>),
    Reflect(Reflection<T>),
}

impl<T: Real> Op<T> {
    fn max_qubit(&self) -> usize {
        match self {
            Op::Gate(g) => g.max_qubit(),
            Op::Reflect(r) => r.max_qubit(),
        }
    }

    fn inverse(&self) -> Self {
        match self {
            Op::Gate(g) => Op::Gate(g.inverse()),
            Op::Reflect(r) => Op::Reflect(r.clone()),
        }
    }
}

/// Ordered list of operations over at least `min_qubits` qubits. The
/// `ancilla` segment is guaranteed returned to |0…0⟩ whenever it starts there.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T> {
    min_qubits: usize,
    ops: Vec<Op<T>>,
    ancilla: Segment,
}

impl<T: Real> Default for Circuit<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Circuit<T> {
    pub fn new() -> Self {
        Self { min_qubits: 0, ops: Vec::new(), ancilla: Segment::new(0, 0) }
    }

    pub fn with_ancilla(mut self, ancilla: Segment) -> Self {
        self.ancilla = ancilla;
        self.min_qubits = self.min_qubits.max(ancilla.end());
        self
    }

    pub fn push_gate(&mut self, gate: Gate<T>) {
        self.push(Op::Gate(gate));
    }

    pub fn push_reflection(&mut self, refl: Reflection<T>) {
        self.push(Op::Reflect(refl));
    }

    pub fn push(&mut self, op: Op<T>) {
        self.min_qubits = self.min_qubits.max(op.max_qubit() + 1);
        self.ops.push(op);
    }

    /// Appends `other`, to be run after the current operations.
    pub fn append(&mut self, other: &Circuit<T>) {
        for op in &other.ops {
            self.push(op.clone());
        }
        if self.ancilla.is_empty() {
            self.ancilla = other.ancilla;
        }
    }

    pub fn ops(&self) -> &[Op<T>] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn min_qubits(&self) -> usize {
        self.min_qubits
    }

    pub fn ancilla(&self) -> Segment {
        self.ancilla
    }

    pub fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        if self.min_qubits > state.num_qubits() {
            return arg(format!(
                "circuit needs {} qubits, state has {}",
                self.min_qubits,
                state.num_qubits()
            ));
        }
        for op in &self.ops {
            match op {
                Op::Gate(g) => state.apply_gate(g)?,
                Op::Reflect(r) => state.apply_reflection(r)?,
            }
        }
        Ok(())
    }

    /// Operations reversed, each inverted.
    pub fn inverse(&self) -> Self {
        Self {
            min_qubits: self.min_qubits,
            ops: self.ops.iter().rev().map(Op::inverse).collect(),
            ancilla: self.ancilla,
        }
    }

    /// Same circuit with `ctl` added to every operation.
    pub fn controlled(&self, ctl: Control) -> Result<Self> {
        let mut out = Self::new().with_ancilla(self.ancilla);
        for op in &self.ops {
            out.push(match op {
                Op::Gate(g) => Op::Gate(g.clone().with_control(ctl)?),
                Op::Reflect(r) => Op::Reflect(r.clone().with_control(ctl)?),
            });
        }
        Ok(out)
    }

    /// True when every operation is a (controlled) NOT.
    pub fn is_classical(&self) -> bool {
        self.ops.iter().all(|op| matches!(op, Op::Gate(g) if g.is_classical()))
    }

    /// Classical evaluation on a basis index, for reversible circuits only.
    pub fn permute_basis(&self, index: usize) -> Option<usize> {
        let mut idx = index;
        for op in &self.ops {
            match op {
                Op::Gate(g) if g.is_classical() => idx = g.permute_basis(idx),
                _ => return None,
            }
        }
        Some(idx)
    }
}

fn check_index_register(layout: &RegisterLayout, count: usize) -> Result<()> {
    if layout.index.width == 0 || count >= 1usize << layout.index.width {
        return arg(format!(
            "index register of width {} cannot address products 1..={count}",
            layout.index.width
        ));
    }
    Ok(())
}

/// Controls matching `value` on every qubit of `seg`.
fn pattern_controls(seg: Segment, value: u64) -> Vec<Control> {
    (0..seg.width).map(|b| Control::matching(seg.qubit(b), value >> b & 1 == 1)).collect()
}

/// Price-loading oracle `|i⟩|y⟩ → |i⟩|y ⊕ price_i⟩` for `i ∈ 1..=N`,
/// identity for other index values. `prices[0]` belongs to product 1.
pub fn build_price_oracle<T: Real>(prices: &[u64], layout: &RegisterLayout, target: Register) -> Result<Circuit<T>> {
    check_index_register(layout, prices.len())?;
    let seg = layout.segment(target);
    if seg.is_empty() {
        return arg(format!("target register {target:?} is empty"));
    }
    let mut circuit = Circuit::new();
    for (k, &price) in prices.iter().enumerate() {
        if price >> seg.width != 0 {
            return arg(format!("price {price} does not fit in {} bits", seg.width));
        }
        let controls = pattern_controls(layout.index, k as u64 + 1);
        for bit in (0..seg.width).filter(|b| price >> b & 1 == 1) {
            circuit.push_gate(Gate::mcx(controls.clone(), seg.qubit(bit))?);
        }
    }
    Ok(circuit)
}

/// Reversible realizations of `flag ⊕= [a ≥ b]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparatorKind {
    /// Writes `a_j ⊕ b_j` into the `b` register, decides on the most
    /// significant differing bit, then restores `b`. Needs no ancilla.
    #[default]
    InPlace,
    /// Per-bit greater/less flags in `2d` ancillas, cascaded from the most
    /// significant bit with negative controls, then uncomputed.
    Cascade,
}

impl ComparatorKind {
    pub fn ancilla_needed(self, d: usize) -> usize {
        match self {
            ComparatorKind::InPlace => 0,
            ComparatorKind::Cascade => 2 * d,
        }
    }
}

/// Comparator with the default [`ComparatorKind`].
pub fn build_comparator<T: Real>(d: usize, layout: &RegisterLayout) -> Result<Circuit<T>> {
    build_comparator_with(ComparatorKind::default(), d, layout)
}

/// `|a⟩|b⟩|y⟩ → |a⟩|b⟩|y ⊕ [a ≥ b]⟩` on the layout's price and flag registers.
pub fn build_comparator_with<T: Real>(kind: ComparatorKind, d: usize, layout: &RegisterLayout) -> Result<Circuit<T>> {
    let (a, b) = (layout.price_a, layout.price_b);
    if d == 0 || a.width != d || b.width != d {
        return arg(format!(
            "comparator of width {d} needs price registers of that width (got {} and {})",
            a.width, b.width
        ));
    }
    if layout.flag.width != 1 {
        return arg("comparator needs a one-qubit flag register");
    }
    let needed = kind.ancilla_needed(d);
    if layout.ancilla.width < needed {
        return arg(format!(
            "comparator needs {needed} ancilla qubits, layout provides {}",
            layout.ancilla.width
        ));
    }
    let flag = layout.flag_qubit();
    let mut circuit = Circuit::new();
    circuit.push_gate(Gate::not(flag));
    match kind {
        ComparatorKind::InPlace => {
            let mut diff = Circuit::new();
            for j in 0..d {
                diff.push_gate(Gate::cnot(a.qubit(j), b.qubit(j))?);
            }
            circuit.append(&diff);
            // b now holds a ⊕ b; at most one j is the leading difference
            for j in (0..d).rev() {
                let mut controls = vec![Control::on(b.qubit(j)), Control::off(a.qubit(j))];
                controls.extend((j + 1..d).map(|k| Control::off(b.qubit(k))));
                circuit.push_gate(Gate::mcx(controls, flag)?);
            }
            circuit.append(&diff.inverse());
        }
        ComparatorKind::Cascade => {
            let anc = Segment::new(layout.ancilla.offset, needed);
            let greater = |j: usize| anc.qubit(2 * j);
            let less = |j: usize| anc.qubit(2 * j + 1);
            let mut compute = Circuit::new();
            for j in (0..d).rev() {
                let undecided: Vec<Control> =
                    (j + 1..d).flat_map(|k| [Control::off(greater(k)), Control::off(less(k))]).collect();
                let mut gt = vec![Control::on(a.qubit(j)), Control::off(b.qubit(j))];
                gt.extend(undecided.iter().copied());
                compute.push_gate(Gate::mcx(gt, greater(j))?);
                let mut lt = vec![Control::off(a.qubit(j)), Control::on(b.qubit(j))];
                lt.extend(undecided);
                compute.push_gate(Gate::mcx(lt, less(j))?);
            }
            circuit.append(&compute);
            for j in 0..d {
                circuit.push_gate(Gate::cnot(less(j), flag)?);
            }
            circuit.append(&compute.inverse());
            circuit = circuit.with_ancilla(anc);
        }
    }
    Ok(circuit)
}

/// Flag oracle `O_f` over the layout's full price width.
pub fn build_flag_oracle<T: Real>(layout: &RegisterLayout) -> Result<Circuit<T>> {
    build_comparator(layout.d(), layout)
}

pub fn build_flag_oracle_with<T: Real>(kind: ComparatorKind, layout: &RegisterLayout) -> Result<Circuit<T>> {
    build_comparator_with(kind, layout.d(), layout)
}

/// Oracles of Steps 1–3 for one side: load the first price register, load
/// the second, then write the flag.
pub fn build_pipeline<T: Real>(scenario: &PriceScenario, layout: &RegisterLayout, kind: ComparatorKind) -> Result<Circuit<T>> {
    let oracle_a = build_price_oracle(scenario.buyer_prices(), layout, Register::PriceA)?;
    let oracle_b = build_price_oracle(scenario.seller_prices(), layout, Register::PriceB)?;
    let mut circuit = Circuit::new();
    if layout.price_a.offset < layout.price_b.offset {
        circuit.append(&oracle_a);
        circuit.append(&oracle_b);
    } else {
        circuit.append(&oracle_b);
        circuit.append(&oracle_a);
    }
    circuit.append(&build_flag_oracle_with(kind, layout)?);
    Ok(circuit)
}

/// Amplitudes of the uniform index superposition `N^{-1/2} Σ_{i=1..N} |i⟩`
/// over the index register.
pub fn uniform_index_amplitudes<T: Real>(scenario: &PriceScenario) -> Vec<T> {
    let dim = 1usize << scenario.n();
    let a = T::of_usize(scenario.len()).sqrt().recip();
    (0..dim).map(|i| if (1..=scenario.len()).contains(&i) { a } else { T::zero() }).collect()
}

/// Uniform index state on `num_qubits` qubits, all other registers |0⟩.
pub fn initial_state<T: Real>(scenario: &PriceScenario, num_qubits: usize) -> Result<StateVector<T>> {
    if num_qubits < scenario.n() {
        return Err(Error::Argument("state narrower than the index register".into()));
    }
    StateVector::uniform_over(num_qubits, 1..=scenario.len())
}
