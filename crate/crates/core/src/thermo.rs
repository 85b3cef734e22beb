//! Free energy, single-shot work from twirled states, and the two-copy
//! work-unlocking example.

use std::f64::consts::LN_2;

use crate::channels::{full_dephase, single_spin_zeeman, twirl_pinching, zeeman_hamiltonian, EnergyStructure, DEFAULT_FIELD};
use crate::error::{Error, Result};
use crate::measures::von_neumann_entropy;
use crate::qmat::{ComplexMatrix, HERMITIAN_TOL};
use crate::states::{plus_ket, thermal_state, DensityMatrix};

pub const DEFAULT_KT: f64 = 1.0;

/// Free energies and extracted work for the twirled-to-dephased conversion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorkReport {
    pub free_energy_twirled: f64,
    pub free_energy_dephased: f64,
    /// `F(D(ρ)) − F(Δ(ρ))`, energy units.
    pub work: f64,
    /// `work / (kT ln 2)`
    pub work_bits: f64,
    pub kt: f64,
}

fn check_kt(kt: f64) -> Result<()> {
    if kt > 0.0 && kt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("kT must be positive, got {kt}")))
    }
}

/// `F(ρ) = tr(Hρ) − kT·S(ρ)` with the entropy converted from bits to nats.
pub fn free_energy(rho: &DensityMatrix, h: &ComplexMatrix, kt: f64) -> Result<f64> {
    check_kt(kt)?;
    if !h.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::NotHermitian {
            deviation: h.hermitian_deviation(),
            tolerance: HERMITIAN_TOL,
        });
    }
    let energy = rho.expectation(h)?.re;
    Ok(energy - kt * LN_2 * von_neumann_entropy(rho))
}

/// Single-shot work `F(D(ρ)) − F(τ_B)` with `τ_B` the bath Gibbs state at `kT`.
pub fn extractable_work_total(
    rho: &DensityMatrix,
    es: &EnergyStructure,
    bath_h: &ComplexMatrix,
    kt: f64,
) -> Result<f64> {
    check_kt(kt)?;
    let twirled = twirl_pinching(rho, es)?;
    let bath = thermal_state(bath_h, 1.0 / kt)?;
    Ok(free_energy(&twirled, es.hamiltonian(), kt)? - free_energy(&bath, bath_h, kt)?)
}

/// `W(ρ) = F(D(ρ)) − F(Δ(ρ))` with both free energies taken against `es`.
pub fn work_from_internal_coherence(rho: &DensityMatrix, es: &EnergyStructure, kt: f64) -> Result<WorkReport> {
    check_kt(kt)?;
    let h = es.hamiltonian();
    let twirled = twirl_pinching(rho, es)?;
    let dephased = full_dephase(rho);
    let free_energy_twirled = free_energy(&twirled, h, kt)?;
    let free_energy_dephased = free_energy(&dephased, h, kt)?;
    let work = free_energy_twirled - free_energy_dephased;
    Ok(WorkReport {
        free_energy_twirled,
        free_energy_dephased,
        work,
        work_bits: work / (kt * LN_2),
        kt,
    })
}

#[derive(Clone, Debug)]
pub struct WorkLockingReport {
    /// Work from one copy of `|+⟩⟨+|` under the single-spin twirl.
    pub single_copy: WorkReport,
    /// Work from `|+⟩⟨+| ⊗ |+⟩⟨+|` under the two-spin Zeeman twirl.
    pub two_copy: WorkReport,
    /// `D(ρ₁)` for the single copy.
    pub single_twirled: ComplexMatrix,
    /// `D(ρ₁ ⊗ ρ₂)`
    pub twirled_product: ComplexMatrix,
    /// `Δ(ρ₁) ⊗ Δ(ρ₂)`
    pub product_of_dephased: ComplexMatrix,
}

impl WorkLockingReport {
    /// The twirled product matrix one expects: `¼[[1,0,0,0],[0,1,1,0],[0,1,1,0],[0,0,0,1]]`.
    pub fn expected_twirled_product() -> ComplexMatrix {
        #[rustfmt::skip]
        let m = ComplexMatrix::from_real(4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 1.0, 0.0,
            0.0, 1.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
        ]).expect("static");
        m.scale_real(0.25)
    }
}

/// Single-copy versus two-copy work for `ρ₁ = ρ₂ = ½[[1,1],[1,1]]`.
pub fn work_locking_demo(kt: f64) -> Result<WorkLockingReport> {
    check_kt(kt)?;
    let rho1 = DensityMatrix::pure(&plus_ket())?;
    let single_es = single_spin_zeeman(DEFAULT_FIELD)?;
    let pair_es = zeeman_hamiltonian(DEFAULT_FIELD)?;
    let pair = rho1.tensor(&rho1);
    let dephased_single = full_dephase(&rho1);
    Ok(WorkLockingReport {
        single_copy: work_from_internal_coherence(&rho1, &single_es, kt)?,
        two_copy: work_from_internal_coherence(&pair, &pair_es, kt)?,
        single_twirled: twirl_pinching(&rho1, &single_es)?.into_matrix(),
        twirled_product: twirl_pinching(&pair, &pair_es)?.into_matrix(),
        product_of_dephased: dephased_single.tensor(&dephased_single).into_matrix(),
    })
}
