//! Full dephasing in the computational basis and the time-average twirl over
//! the translations generated by a Hamiltonian.
//!
//! The twirl is implemented as a pinching onto degenerate energy blocks. A
//! literal Simpson-rule time average is provided alongside it; the two are
//! computed independently and checked against each other in the tests.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{hermitian_eigendecompose, kron, ComplexMatrix, HERMITIAN_TOL};
use crate::states::DensityMatrix;

/// Eigenvalues closer than this are grouped into one degenerate block.
pub const GROUPING_TOL: f64 = 1e-9;

/// Default Zeeman field strength.
pub const DEFAULT_FIELD: f64 = 1.0;

/// A Hamiltonian with its spectrum grouped into degenerate blocks.
#[derive(Clone, Debug)]
pub struct EnergyStructure {
    hamiltonian: ComplexMatrix,
    projectors: Vec<ComplexMatrix>,
    energies: Vec<f64>,
    tolerance: f64,
    period: Option<f64>,
}

impl EnergyStructure {
    /// Groups the spectrum of `h` into blocks of eigenvalues within `tolerance`
    /// of their neighbours.
    pub fn from_hamiltonian(h: ComplexMatrix, tolerance: f64) -> Result<Self> {
        let eig = hermitian_eigendecompose(&h, HERMITIAN_TOL)?;
        let n = h.dim();
        let mut projectors = Vec::new();
        let mut energies = Vec::new();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= tolerance {
                end += 1;
            }
            let mut p = ComplexMatrix::zeros(n);
            for k in start..end {
                p = &p + &ComplexMatrix::outer(&eig.eigenvector(k));
            }
            let mean = eig.eigenvalues[start..end].iter().sum::<f64>() / (end - start) as f64;
            projectors.push(p);
            energies.push(mean);
            start = end;
        }
        Ok(EnergyStructure {
            hamiltonian: h,
            projectors,
            energies,
            tolerance,
            period: None,
        })
    }

    /// Records the period `T` used by [`twirl_quadrature`].
    pub fn with_period(mut self, period: f64) -> Self {
        self.period = Some(period);
        self
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn block_count(&self) -> usize {
        self.projectors.len()
    }
}

/// `H = −h(σz⊗1 + 1⊗σz) = diag(−2h, 0, 0, 2h)`, three blocks, period `π/|h|`.
pub fn zeeman_hamiltonian(h: f64) -> Result<EnergyStructure> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::ZeroField);
    }
    let sz = ComplexMatrix::pauli_z();
    let id = ComplexMatrix::identity(2);
    let hz = (&kron(&sz, &id) + &kron(&id, &sz)).scale_real(-h);
    Ok(EnergyStructure::from_hamiltonian(hz, GROUPING_TOL)?.with_period(PI / h.abs()))
}

/// Single spin `H = −h σz`; nondegenerate, so its twirl equals full dephasing.
pub fn single_spin_zeeman(h: f64) -> Result<EnergyStructure> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::ZeroField);
    }
    let hz = ComplexMatrix::pauli_z().scale_real(-h);
    Ok(EnergyStructure::from_hamiltonian(hz, GROUPING_TOL)?.with_period(PI / h.abs()))
}

/// `Δ(ρ) = Σᵢ |i⟩⟨i| ρ |i⟩⟨i|`
pub fn full_dephase(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::trusted(full_dephase_matrix(rho.matrix()))
}

pub(crate) fn full_dephase_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::diag(&m.diagonal())
}

/// `D(ρ) = Σ_k P_k ρ P_k` over the degenerate energy blocks.
pub fn twirl_pinching(rho: &DensityMatrix, es: &EnergyStructure) -> Result<DensityMatrix> {
    Ok(DensityMatrix::trusted(pinch(rho.matrix(), es)?))
}

pub(crate) fn pinch(m: &ComplexMatrix, es: &EnergyStructure) -> Result<ComplexMatrix> {
    if m.dim() != es.dim() {
        return Err(Error::DimensionMismatch {
            expected: es.dim(),
            found: m.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(m.dim());
    for p in &es.projectors {
        out = &out + &p.matmul(m).matmul(p);
    }
    Ok(out)
}

/// `(1/T)∫₀ᵀ e^{−iHt} ρ e^{iHt} dt` by composite Simpson with `steps` intervals.
pub fn twirl_quadrature(rho: &DensityMatrix, es: &EnergyStructure, steps: usize) -> Result<DensityMatrix> {
    if steps < 4 || !steps.is_multiple_of(2) {
        return Err(Error::BadStepCount(steps));
    }
    if rho.dim() != es.dim() {
        return Err(Error::DimensionMismatch {
            expected: es.dim(),
            found: rho.dim(),
        });
    }
    let period = es.period.ok_or(Error::MissingPeriod)?;
    let eig = hermitian_eigendecompose(&es.hamiltonian, HERMITIAN_TOL)?;
    let dt = period / steps as f64;
    let mut acc = ComplexMatrix::zeros(rho.dim());
    for k in 0..=steps {
        let weight = if k == 0 || k == steps {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let t = k as f64 * dt;
        let u = eig.map(|e| Complex64::from_polar(1.0, -e * t));
        acc = &acc + &rho.matrix().conjugate_by(&u).scale_real(weight);
    }
    let avg = acc.scale_real(dt / 3.0 / period);
    Ok(DensityMatrix::trusted(avg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::unitary_evolution;
    use crate::states::{bell_diagonal, phi_plus, plus_ket, random_density_matrix, BellDiagonalTriplet};

    fn x_form(c1: f64, c2: f64, c3: f64) -> DensityMatrix {
        bell_diagonal(BellDiagonalTriplet::new(c1, c2, c3)).unwrap()
    }

    #[test]
    fn zeeman_structure() {
        let es = zeeman_hamiltonian(1.0).unwrap();
        assert_eq!(es.hamiltonian(), &ComplexMatrix::diag_real(&[-2.0, 0.0, 0.0, 2.0]));
        assert_eq!(es.block_count(), 3);
        assert_eq!(es.energies(), &[-2.0, 0.0, 2.0]);
        let middle = ComplexMatrix::diag_real(&[0.0, 1.0, 1.0, 0.0]);
        assert!(es.projectors()[1].max_abs_diff(&middle) < 1e-15);
        assert_eq!(es.period(), Some(PI));
        assert!(matches!(zeeman_hamiltonian(0.0), Err(Error::ZeroField)));
    }

    #[test]
    fn projectors_resolve_identity() {
        let es = zeeman_hamiltonian(0.7).unwrap();
        let mut sum = ComplexMatrix::zeros(4);
        for p in es.projectors() {
            assert!(p.matmul(p).max_abs_diff(p) < 1e-12);
            assert!(p.is_hermitian(1e-14));
            sum = &sum + p;
        }
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
    }

    #[test]
    fn full_dephase_examples() {
        let d = ComplexMatrix::diag_real(&[0.1, 0.2, 0.3, 0.4]);
        let rho = DensityMatrix::new(d.clone()).unwrap();
        assert_eq!(full_dephase(&rho).matrix(), &d);

        let (c1, c2, c3) = (0.3, -0.2, 0.4);
        let out = full_dephase(&x_form(c1, c2, c3));
        let expected = ComplexMatrix::diag_real(&[
            (1.0 + c3) / 4.0,
            (1.0 - c3) / 4.0,
            (1.0 - c3) / 4.0,
            (1.0 + c3) / 4.0,
        ]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);

        let plus = DensityMatrix::pure(&plus_ket()).unwrap();
        assert!(full_dephase(&plus).matrix().max_abs_diff(&ComplexMatrix::diag_real(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn pinching_reproduces_dephased_x_form() {
        let es = zeeman_hamiltonian(1.0).unwrap();
        let (c1, c2, c3) = (0.2, 0.5, -0.3);
        let out = twirl_pinching(&x_form(c1, c2, c3), &es).unwrap();
        #[rustfmt::skip]
        let expected = ComplexMatrix::from_real(4, &[
            1.0 + c3, 0.0,      0.0,      0.0,
            0.0,      1.0 - c3, c1 + c2,  0.0,
            0.0,      c1 + c2,  1.0 - c3, 0.0,
            0.0,      0.0,      0.0,      1.0 + c3,
        ]).unwrap().scale_real(0.25);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn pinching_kills_phi_plus_corners() {
        let es = zeeman_hamiltonian(1.0).unwrap();
        let out = twirl_pinching(&phi_plus(), &es).unwrap();
        let expected = ComplexMatrix::diag_real(&[0.5, 0.0, 0.0, 0.5]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
        let quad = twirl_quadrature(&phi_plus(), &es, 64).unwrap();
        assert!(quad.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn pinching_dimension_mismatch() {
        let es = zeeman_hamiltonian(1.0).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(twirl_pinching(&rho, &es), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn quadrature_bad_steps() {
        let es = zeeman_hamiltonian(1.0).unwrap();
        let rho = DensityMatrix::maximally_mixed(4);
        assert_eq!(twirl_quadrature(&rho, &es, 3).unwrap_err(), Error::BadStepCount(3));
        assert_eq!(twirl_quadrature(&rho, &es, 7).unwrap_err(), Error::BadStepCount(7));
        assert!(twirl_quadrature(&rho, &es, 4).is_ok());
    }

    #[test]
    fn quadrature_fixed_points() {
        let es = zeeman_hamiltonian(1.0).unwrap();
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!(twirl_quadrature(&mixed, &es, 8).unwrap().matrix().max_abs_diff(mixed.matrix()) < 1e-12);
        let diag = DensityMatrix::new(ComplexMatrix::diag_real(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        assert!(twirl_quadrature(&diag, &es, 8).unwrap().matrix().max_abs_diff(diag.matrix()) < 1e-12);
    }

    #[test]
    fn quadrature_converges_to_pinching() {
        let es = zeeman_hamiltonian(1.0).unwrap();
        let rho = x_form(0.3, -0.1, 0.2);
        let quad = twirl_quadrature(&rho, &es, 1024).unwrap();
        let pin = twirl_pinching(&rho, &es).unwrap();
        assert!(quad.matrix().max_abs_diff(pin.matrix()) <= 1e-8);
    }

    #[test]
    fn channel_properties_on_random_states() {
        let es = zeeman_hamiltonian(1.0).unwrap();
        for seed in 0..50 {
            let rho = random_density_matrix(4, seed).unwrap();
            let d = twirl_pinching(&rho, &es).unwrap();
            let delta = full_dephase(&rho);
            for out in [&d, &delta] {
                assert!((out.matrix().trace().re - 1.0).abs() <= 1e-12);
                assert!(out.eigenvalues().unwrap()[0] >= -1e-10);
            }
            // idempotence
            assert!(twirl_pinching(&d, &es).unwrap().matrix().max_abs_diff(d.matrix()) <= 1e-10);
            assert!(full_dephase(&delta).matrix().max_abs_diff(delta.matrix()) <= 1e-10);
            // composition
            assert!(full_dephase(&d).matrix().max_abs_diff(delta.matrix()) <= 1e-12);
            assert!(twirl_pinching(&delta, &es).unwrap().matrix().max_abs_diff(delta.matrix()) <= 1e-12);
            // covariance
            for &t in &[0.3, 1.1, 2.9] {
                let u = unitary_evolution(es.hamiltonian(), t).unwrap();
                let rotated = DensityMatrix::trusted(rho.matrix().conjugate_by(&u));
                let lhs = twirl_pinching(&rotated, &es).unwrap();
                let rhs = d.matrix().conjugate_by(&u);
                assert!(lhs.matrix().max_abs_diff(&rhs) <= 1e-10);
            }
        }
    }
}
