use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use num_traits::Float;

use crate::error::{arg, Result};
use crate::scalar::Real;

use super::StateVector;

/// Largest density-matrix dimension built explicitly.
pub const MAX_DENSITY_DIM: usize = 1 << 10;

/// `ρ = Σ p_k |ψ_k⟩⟨ψ_k|`
pub fn density_matrix<T: Real + RealField>(ensemble: &[(T, &StateVector<T>)]) -> Result<DMatrix<Complex<T>>> {
    let Some((_, first)) = ensemble.first() else {
        return arg("empty ensemble");
    };
    let dim = first.dim();
    if dim > MAX_DENSITY_DIM {
        return arg(format!("density matrix dimension {dim} exceeds {MAX_DENSITY_DIM}"));
    }
    let mut rho = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
    for (p, psi) in ensemble {
        if psi.dim() != dim {
            return arg("ensemble states differ in qubit count");
        }
        let amps = psi.amplitudes();
        for r in 0..dim {
            if amps[r] == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            for c in 0..dim {
                rho[(r, c)] += amps[r] * amps[c].conj() * Complex::new(*p, T::zero());
            }
        }
    }
    Ok(rho)
}

/// `S(ρ) = −Σ λ log₂ λ` in bits, with `0·log 0 = 0`.
pub fn von_neumann_entropy<T: Real + RealField>(rho: &DMatrix<Complex<T>>) -> Result<T> {
    if !rho.is_square() || rho.nrows() == 0 {
        return arg("density matrix must be square and non-empty");
    }
    let dim = rho.nrows();
    let tol = <T as Real>::input_tol();
    let mut trace = T::zero();
    for r in 0..dim {
        trace += rho[(r, r)].re;
        for c in r..dim {
            if Float::abs(Complex::norm(rho[(r, c)] - rho[(c, r)].conj())) > tol {
                return arg("density matrix is not Hermitian");
            }
        }
    }
    if Float::abs(trace - T::one()) > tol {
        return arg(format!("density matrix has trace {trace}, expected 1"));
    }
    let floor = -<T as Real>::gate_tol();
    let eigen = rho.clone().symmetric_eigenvalues();
    let mut entropy = T::zero();
    for &lambda in eigen.iter() {
        if lambda < floor {
            return arg(format!("density matrix has negative eigenvalue {lambda}"));
        }
        if lambda > T::zero() {
            entropy -= lambda * Float::log2(lambda);
        }
    }
    Ok(Float::max(entropy, T::zero()))
}
