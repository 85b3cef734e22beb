//! Zero-energy history states of a clock ⊗ system universe.
//!
//! The clock has an evenly spaced spectrum on `s + 1 = dim` levels so that
//! its time states `|t_m⟩`, `m = 0..dim`, are discrete Fourier vectors and
//! mutually orthogonal. The global state is
//! `|Ψ⟩ = dim^{-1/2} Σ_m |t_m⟩ ⊗ e^{−i H_s m β}|ψ₀⟩`
//! and conditioning on `|t_m⟩` returns the system evolved for clock time `mβ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channels::{EnergyStructure, GROUPING_TOL};
use crate::error::{Error, Result};
use crate::qmat::{kron, unitary_evolution, ComplexMatrix};

/// Largest `‖H Ψ‖` accepted by [`build_history_universe`].
pub const ZERO_ENERGY_LIMIT: f64 = 1e-6;

pub const DEFAULT_BETA: f64 = 1.0;

/// Diagonal clock Hamiltonian with spectrum `E_n = 2πn/(dim·β)`, `n = 0..dim`.
pub fn commensurate_clock_hamiltonian(dim: usize, beta: f64) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(Error::BadDimension(dim));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    let spectrum: Vec<f64> = (0..dim).map(|n| 2.0 * PI * n as f64 / (dim as f64 * beta)).collect();
    Ok(ComplexMatrix::diag_real(&spectrum))
}

#[derive(Clone, Debug)]
pub struct HistoryUniverse {
    clock_dim: usize,
    beta: f64,
    clock_hamiltonian: ComplexMatrix,
    system_hamiltonian: ComplexMatrix,
    state: Vec<Complex64>,
    initial: Vec<Complex64>,
    residual: f64,
}

impl HistoryUniverse {
    pub fn clock_dim(&self) -> usize {
        self.clock_dim
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn system_dim(&self) -> usize {
        self.initial.len()
    }

    /// The clock Hamiltonian `H_c` entering `H = H_c⊗1 + 1⊗H_s`. It is the
    /// negated commensurate grid, so that clock level `n` cancels system
    /// energy `2πn/(dim·β)`.
    pub fn clock_hamiltonian(&self) -> &ComplexMatrix {
        &self.clock_hamiltonian
    }

    pub fn system_hamiltonian(&self) -> &ComplexMatrix {
        &self.system_hamiltonian
    }

    pub fn state(&self) -> &[Complex64] {
        &self.state
    }

    pub fn initial_state(&self) -> &[Complex64] {
        &self.initial
    }

    pub fn total_hamiltonian(&self) -> ComplexMatrix {
        let ds = self.system_dim();
        &kron(&self.clock_hamiltonian, &ComplexMatrix::identity(ds))
            + &kron(&ComplexMatrix::identity(self.clock_dim), &self.system_hamiltonian)
    }

    /// `‖H Ψ‖` measured at construction.
    pub fn zero_energy_residual(&self) -> f64 {
        self.residual
    }

    /// Energy structure of the total Hamiltonian, with period `dim·β`.
    pub fn total_energy_structure(&self) -> Result<EnergyStructure> {
        Ok(EnergyStructure::from_hamiltonian(self.total_hamiltonian(), GROUPING_TOL)?
            .with_period(self.clock_dim as f64 * self.beta))
    }

    /// Clock time state `|t_m⟩ = e^{−i H_c m β}|t_0⟩`, `|t_0⟩` the uniform superposition.
    pub fn clock_time_state(&self, m: usize) -> Vec<Complex64> {
        clock_time_state(self.clock_dim, m)
    }
}

fn clock_time_state(dim: usize, m: usize) -> Vec<Complex64> {
    let amp = 1.0 / (dim as f64).sqrt();
    // −E_n m β = 2π n m / dim
    (0..dim)
        .map(|n| Complex64::from_polar(amp, 2.0 * PI * ((n * m) % dim) as f64 / dim as f64))
        .collect()
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Builds the history state for system Hamiltonian `h_s` and initial state `psi0`.
///
/// `h_s` must have its spectrum on the grid `2πj/(clock_dim·β)`, `0 ≤ j < clock_dim`;
/// otherwise the constructed state is not annihilated by the total Hamiltonian
/// and `NoZeroEnergySector` is returned.
pub fn build_history_universe(
    clock_dim: usize,
    beta: f64,
    h_s: &ComplexMatrix,
    psi0: &[Complex64],
) -> Result<HistoryUniverse> {
    let grid = commensurate_clock_hamiltonian(clock_dim, beta)?;
    if h_s.dim() != psi0.len() {
        return Err(Error::DimensionMismatch {
            expected: h_s.dim(),
            found: psi0.len(),
        });
    }
    let n0 = vec_norm(psi0);
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(Error::InvalidArgument("initial state has zero or non-finite norm".into()));
    }
    let initial: Vec<Complex64> = psi0.iter().map(|z| z / n0).collect();
    let step = unitary_evolution(h_s, beta)?;

    let ds = initial.len();
    let mut state = vec![Complex64::new(0.0, 0.0); clock_dim * ds];
    let mut psi_m = initial.clone();
    let amp = 1.0 / (clock_dim as f64).sqrt();
    for m in 0..clock_dim {
        let tm = clock_time_state(clock_dim, m);
        for (n, &c) in tm.iter().enumerate() {
            for (k, &s) in psi_m.iter().enumerate() {
                state[n * ds + k] += c * s * amp;
            }
        }
        psi_m = step.apply(&psi_m);
    }
    let norm = vec_norm(&state);
    state.iter_mut().for_each(|z| *z /= norm);

    let clock_hamiltonian = grid.scale_real(-1.0);
    let mut universe = HistoryUniverse {
        clock_dim,
        beta,
        clock_hamiltonian,
        system_hamiltonian: h_s.clone(),
        state,
        initial,
        residual: 0.0,
    };
    let residual = vec_norm(&universe.total_hamiltonian().apply(&universe.state));
    if residual > ZERO_ENERGY_LIMIT {
        return Err(Error::NoZeroEnergySector { residual });
    }
    universe.residual = residual;
    Ok(universe)
}

/// System state conditioned on clock reading `m`.
#[derive(Clone, Debug)]
pub struct ConditionalState {
    /// `⟨t_m|Ψ⟩`
    pub unnormalized: Vec<Complex64>,
    pub normalized: Vec<Complex64>,
    /// `‖⟨t_m|Ψ⟩‖²`
    pub weight: f64,
}

pub fn conditional_system_state(u: &HistoryUniverse, m: usize) -> Result<ConditionalState> {
    if m >= u.clock_dim {
        return Err(Error::IndexOutOfRange {
            index: m,
            len: u.clock_dim,
        });
    }
    let ds = u.system_dim();
    let tm = u.clock_time_state(m);
    let unnormalized: Vec<Complex64> = (0..ds)
        .map(|k| (0..u.clock_dim).map(|n| tm[n].conj() * u.state[n * ds + k]).sum())
        .collect();
    let weight = unnormalized.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let norm = weight.sqrt();
    let normalized = if norm > 0.0 {
        unnormalized.iter().map(|z| z / norm).collect()
    } else {
        unnormalized.clone()
    };
    Ok(ConditionalState {
        unnormalized,
        normalized,
        weight,
    })
}

/// `|⟨a|b⟩|²` for unit vectors.
pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

/// Qubit system with `H_s = diag(0, 2π/(dim·β))` starting in `|+⟩`: one full
/// precession over the clock's `dim` ticks.
pub fn qubit_demo_universe(clock_dim: usize, beta: f64) -> Result<HistoryUniverse> {
    if clock_dim < 2 {
        return Err(Error::BadDimension(clock_dim));
    }
    let h_s = ComplexMatrix::diag_real(&[0.0, 2.0 * PI / (clock_dim as f64 * beta)]);
    build_history_universe(clock_dim, beta, &h_s, &crate::states::plus_ket())
}
