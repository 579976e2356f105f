//! Privacy and efficiency figures: accessible-information bound,
//! communication cost comparison, and cheat-detection curve.

use std::fmt::Write;

use nalgebra::RealField;
use num_traits::Float;
use serde::Serialize;

use crate::circuits::PriceScenario;
use crate::commitment::cheat_detection_probability;
use crate::error::{arg, Error, Result};
use crate::scalar::Real;
use crate::statevec::{ceil_log2, density_matrix, von_neumann_entropy, StateVector};

/// Qubits above which the ensemble density matrix is not built.
pub const MAX_ENSEMBLE_QUBITS: usize = 10;

/// `{P_i = 1/N, ρ(i) = |i⟩|a_i⟩⟨a_i|⟨i|}` over `n + d` qubits.
pub struct EnsembleSpec<T> {
    pub probabilities: Vec<T>,
    pub states: Vec<StateVector<T>>,
}

impl<T: Real> EnsembleSpec<T> {
    pub fn buyer_prices(scenario: &PriceScenario) -> Result<Self> {
        let (n, d) = (scenario.n(), scenario.d());
        let qubits = n + d;
        if qubits > MAX_ENSEMBLE_QUBITS {
            return Err(Error::Resource { needed: qubits, limit: MAX_ENSEMBLE_QUBITS });
        }
        let p = T::of_usize(scenario.len()).recip();
        let states = scenario
            .buyer_prices()
            .iter()
            .enumerate()
            .map(|(k, &a)| StateVector::prepare_basis(qubits, (k + 1) | (a as usize) << n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { probabilities: vec![p; states.len()], states })
    }
}

/// Holevo quantity `S(ρ) − Σ P_i S(ρ(i))` of the buyer-price ensemble, in bits.
pub fn holevo_bound<T: Real + RealField>(scenario: &PriceScenario) -> Result<T> {
    let ensemble = EnsembleSpec::<T>::buyer_prices(scenario)?;
    let weighted: Vec<(T, &StateVector<T>)> = ensemble.probabilities.iter().copied().zip(&ensemble.states).collect();
    let total = von_neumann_entropy(&density_matrix(&weighted)?)?;
    let mut conditional = T::zero();
    for (p, psi) in &weighted {
        conditional += *p * von_neumann_entropy(&density_matrix(&[(T::one(), *psi)])?)?;
    }
    Ok(Float::max(total - conditional, T::zero()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CostModel {
    /// `2(n + d)` qubits plus `2n` cbits.
    Q3pen,
    /// `2·N·d` cbits.
    C05,
    /// `4·N·d` cbits.
    A07,
}

impl CostModel {
    /// `(qubits, cbits)` exchanged for `N` products of `d`-bit prices.
    pub fn split(self, products: usize, d: usize) -> (usize, usize) {
        match self {
            CostModel::Q3pen => {
                let n = ceil_log2(products as u64 + 1);
                (2 * (n + d), 2 * n)
            }
            CostModel::C05 => (0, 2 * products * d),
            CostModel::A07 => (0, 4 * products * d),
        }
    }

    pub fn total(self, products: usize, d: usize) -> usize {
        let (q, c) = self.split(products, d);
        q + c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CostRow {
    #[serde(rename = "N")]
    pub products: usize,
    pub q3pen: usize,
    pub q3pen_qubits: usize,
    pub q3pen_cbits: usize,
    pub c05: usize,
    pub a07: usize,
}

pub fn cost_table(products: impl IntoIterator<Item = usize>, d: usize) -> Result<Vec<CostRow>> {
    if d < 1 {
        return arg("price width d must be at least 1");
    }
    products
        .into_iter()
        .map(|n| {
            if n < 1 {
                return arg("product count must be at least 1");
            }
            let (qubits, cbits) = CostModel::Q3pen.split(n, d);
            Ok(CostRow {
                products: n,
                q3pen: qubits + cbits,
                q3pen_qubits: qubits,
                q3pen_cbits: cbits,
                c05: CostModel::C05.total(n, d),
                a07: CostModel::A07.total(n, d),
            })
        })
        .collect()
}

/// CSV with header `N,q3pen,c05,a07`; `split` appends the qubit/cbit
/// breakdown of the quantum column.
pub fn cost_table_csv(rows: &[CostRow], split: bool) -> String {
    let mut out = String::from(if split { "N,q3pen,c05,a07,q3pen_qubits,q3pen_cbits\n" } else { "N,q3pen,c05,a07\n" });
    for r in rows {
        let _ = write!(out, "{},{},{},{}", r.products, r.q3pen, r.c05, r.a07);
        if split {
            let _ = write!(out, ",{},{}", r.q3pen_qubits, r.q3pen_cbits);
        }
        out.push('\n');
    }
    out
}

/// Smallest `N*` such that `Q3PEN < C05 < A07` for every `N ≥ N*`.
pub fn cost_crossover(d: usize) -> Result<usize> {
    if d < 1 {
        return arg("price width d must be at least 1");
    }
    // Past N = 2^16 the quantum cost grows by at most 4 per doubling of N
    // while C05 grows by 2d·N, so checking up to there is conclusive.
    const HORIZON: usize = 1 << 16;
    let cheaper = |n: usize| {
        let q = CostModel::Q3pen.total(n, d);
        q < CostModel::C05.total(n, d) && CostModel::C05.total(n, d) < CostModel::A07.total(n, d)
    };
    let last_fail = (1..=HORIZON).rev().find(|&n| !cheaper(n)).unwrap_or(0);
    Ok(last_fail + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetectionRow {
    pub n: usize,
    pub m: usize,
    pub p_detect: f64,
}

/// Rows `(n, m = ⌈c·n⌉, 1 − 2^{−(m − log₂ n)})`.
pub fn detection_curve(expansion: f64, n_values: impl IntoIterator<Item = usize>) -> Result<Vec<DetectionRow>> {
    if expansion.is_nan() || expansion <= 1.0 || !expansion.is_finite() {
        return arg(format!("expansion constant {expansion} must exceed 1"));
    }
    n_values
        .into_iter()
        .map(|n| {
            let m = ((n as f64) * expansion - 1e-9).ceil() as usize;
            Ok(DetectionRow { n, m, p_detect: cheat_detection_probability(n, m)? })
        })
        .collect()
}

pub fn detection_curve_csv(rows: &[DetectionRow]) -> String {
    let mut out = String::from("n,m,p_detect\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:.6}", r.n, r.m, r.p_detect);
    }
    out
}
