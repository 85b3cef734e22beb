//! Density matrices and the state families used throughout: Bell-diagonal
//! states, thermal states and seeded random states.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::qmat::{hermitian_eigendecompose, kron, ComplexMatrix, HERMITIAN_TOL};

/// Validation tolerance for [`DensityMatrix`].
pub const DENSITY_TOL: f64 = 1e-10;

/// Bell-diagonal eigenvalues may dip this far below zero and still be accepted.
pub const TRIPLET_TOL: f64 = 1e-12;

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DENSITY_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let dev = matrix.hermitian_deviation();
        if dev > tol {
            return Err(Error::NotDensityMatrix(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::NotDensityMatrix(format!("trace {} != 1", tr.re)));
        }
        let eig = hermitian_eigendecompose(&matrix, tol)?;
        let min = eig.eigenvalues[0];
        if min < -tol {
            return Err(Error::NotDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Wraps the output of an operation known to preserve validity
    /// (pinchings, partial traces, normalized Gram matrices).
    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        DensityMatrix { matrix }
    }

    /// Pure state `|ψ⟩⟨ψ|`; the vector is normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero or non-finite norm".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(DensityMatrix::trusted(ComplexMatrix::outer(&v)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix::trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::trusted(kron(&self.matrix, &other.matrix))
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigendecompose(&self.matrix, HERMITIAN_TOL)?.eigenvalues)
    }

    /// Expectation value `tr(ρ A)`.
    pub fn expectation(&self, a: &ComplexMatrix) -> Result<Complex64> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.dim(),
            });
        }
        Ok(self.matrix.matmul(a).trace())
    }
}

/// Correlation coefficients `cᵢ = tr(ρ σᵢ⊗σᵢ)` of a two-qubit Bell-diagonal state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagonalTriplet {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

const LAMBDA_LABELS: [&str; 4] = ["λ₀₀", "λ₀₁", "λ₁₀", "λ₁₁"];

impl BellDiagonalTriplet {
    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        BellDiagonalTriplet { c1, c2, c3 }
    }

    /// Rejects triplets whose state would have an eigenvalue below `-TRIPLET_TOL`.
    pub fn validate(&self) -> Result<()> {
        if ![self.c1, self.c2, self.c3].iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite triplet {self:?}")));
        }
        let lambdas = bell_diagonal_eigenvalues(*self);
        // Report the most negative one.
        let (k, &value) = lambdas
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("four eigenvalues");
        if value < -TRIPLET_TOL {
            return Err(Error::InvalidTriplet {
                label: LAMBDA_LABELS[k],
                value,
            });
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// The four eigenvalues `λ_{γν} = ¼[1 + (−1)^γ c₁ − (−1)^{γ+ν} c₂ + (−1)^ν c₃]`,
/// ordered `λ₀₀, λ₀₁, λ₁₀, λ₁₁`. No validity check.
pub fn bell_diagonal_eigenvalues(t: BellDiagonalTriplet) -> [f64; 4] {
    let sign = |k: u32| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut out = [0.0; 4];
    for gamma in 0..2 {
        for nu in 0..2 {
            out[(2 * gamma + nu) as usize] =
                0.25 * (1.0 + sign(gamma) * t.c1 - sign(gamma + nu) * t.c2 + sign(nu) * t.c3);
        }
    }
    out
}

/// X-form matrix of a Bell-diagonal state in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn bell_diagonal(t: BellDiagonalTriplet) -> Result<DensityMatrix> {
    t.validate()?;
    let BellDiagonalTriplet { c1, c2, c3 } = t;
    #[rustfmt::skip]
    let m = ComplexMatrix::from_real(4, &[
        1.0 + c3, 0.0,      0.0,      c1 - c2,
        0.0,      1.0 - c3, c1 + c2,  0.0,
        0.0,      c1 + c2,  1.0 - c3, 0.0,
        c1 - c2,  0.0,      0.0,      1.0 + c3,
    ])?
    .scale_real(0.25);
    Ok(DensityMatrix::trusted(m))
}

/// `|ψ⁺⟩ = (|01⟩ + |10⟩)/√2`
pub fn psi_plus() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let a = Complex64::new(s, 0.0);
    DensityMatrix::trusted(ComplexMatrix::outer(&[z, a, a, z]))
}

/// `|φ⁺⟩ = (|00⟩ + |11⟩)/√2`
pub fn phi_plus() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let a = Complex64::new(s, 0.0);
    DensityMatrix::trusted(ComplexMatrix::outer(&[a, z, z, a]))
}

/// `|+⟩ = (|0⟩ + |1⟩)/√2` as a vector.
pub fn plus_ket() -> [Complex64; 2] {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [s, s]
}

/// `|−⟩ = (|0⟩ − |1⟩)/√2` as a vector.
pub fn minus_ket() -> [Complex64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]
}

/// Gibbs state `e^{−βH}/Z`.
pub fn thermal_state(h: &ComplexMatrix, beta: f64) -> Result<DensityMatrix> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("inverse temperature must be >= 0, got {beta}")));
    }
    let eig = hermitian_eigendecompose(h, HERMITIAN_TOL)?;
    // Shift by the ground energy so the largest weight is exactly 1.
    let ground = eig.eigenvalues[0];
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&e| (-beta * (e - ground)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let m = eig.map(|e| Complex64::new((-beta * (e - ground)).exp() / z, 0.0));
    Ok(DensityMatrix::trusted(m))
}

/// Normalized `G G†` with `G` a complex Ginibre matrix drawn from a seeded ChaCha8 stream.
pub fn random_density_matrix(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::BadDimension(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<Complex64> = (0..dim * dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    let g = ComplexMatrix::from_row_major(dim, entries)?;
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    let mut rho = gg.scale_real(1.0 / tr);
    // Remove rounding asymmetry so the result is exactly Hermitian.
    rho = ComplexMatrix::from_fn(dim, |i, j| (rho[(i, j)] + rho[(j, i)].conj()) * 0.5);
    Ok(DensityMatrix::trusted(rho))
}

/// Random pure state drawn the same way (normalized complex Gaussian vector).
pub fn random_pure_state(dim: usize, seed: u64) -> Result<Vec<Complex64>> {
    if dim < 1 {
        return Err(Error::BadDimension(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(v.into_iter().map(|z| z / n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{partial_trace, Subsystem};

    fn pauli(i: usize) -> ComplexMatrix {
        match i {
            1 => ComplexMatrix::pauli_x(),
            2 => ComplexMatrix::pauli_y(),
            _ => ComplexMatrix::pauli_z(),
        }
    }

    /// Step-0.1 grid of valid triplets, built from integers so the grid is exact.
    fn valid_grid() -> Vec<BellDiagonalTriplet> {
        let mut out = Vec::new();
        for i in -10..=10 {
            for j in -10..=10 {
                for k in -10..=10 {
                    let t = BellDiagonalTriplet::new(i as f64 / 10.0, j as f64 / 10.0, k as f64 / 10.0);
                    if t.is_valid() {
                        out.push(t);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn bell_state_vertices() {
        let psi = bell_diagonal(BellDiagonalTriplet::new(1.0, 1.0, -1.0)).unwrap();
        assert!(psi.matrix().max_abs_diff(psi_plus().matrix()) < 1e-15);
        let phi = bell_diagonal(BellDiagonalTriplet::new(1.0, -1.0, 1.0)).unwrap();
        assert!(phi.matrix().max_abs_diff(phi_plus().matrix()) < 1e-15);
        let mixed = bell_diagonal(BellDiagonalTriplet::new(0.0, 0.0, 0.0)).unwrap();
        assert!(mixed.matrix().max_abs_diff(DensityMatrix::maximally_mixed(4).matrix()) == 0.0);
    }

    #[test]
    fn invalid_triplet_names_eigenvalue() {
        let err = bell_diagonal(BellDiagonalTriplet::new(1.0, 1.0, 1.0)).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidTriplet {
                label: "λ₁₁",
                value: -0.5
            }
        );
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(bell_diagonal_eigenvalues(BellDiagonalTriplet::new(0.0, 0.0, 0.0)), [0.25; 4]);
        let mut l = bell_diagonal_eigenvalues(BellDiagonalTriplet::new(1.0, 1.0, -1.0));
        l.sort_by(f64::total_cmp);
        assert_eq!(l, [0.0, 0.0, 0.0, 1.0]);
        let mut l = bell_diagonal_eigenvalues(BellDiagonalTriplet::new(1.0, 0.0, 0.0));
        l.sort_by(f64::total_cmp);
        assert_eq!(l, [0.0, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn eigenvalues_match_diagonalization_on_grid() {
        for t in valid_grid() {
            let mut closed = bell_diagonal_eigenvalues(t);
            closed.sort_by(f64::total_cmp);
            let numeric = bell_diagonal(t).unwrap().eigenvalues().unwrap();
            for (a, b) in closed.iter().zip(&numeric) {
                assert!((a - b).abs() <= 1e-10, "{t:?}: {closed:?} vs {numeric:?}");
            }
            assert!((closed.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn reduced_states_maximally_mixed_and_correlations_recovered() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        for t in valid_grid() {
            let rho = bell_diagonal(t).unwrap();
            for keep in [Subsystem::First, Subsystem::Second] {
                let r = partial_trace(rho.matrix(), (2, 2), keep).unwrap();
                assert!(r.max_abs_diff(&half) <= 1e-12);
            }
            for (i, c) in [(1, t.c1), (2, t.c2), (3, t.c3)] {
                let ss = kron(&pauli(i), &pauli(i));
                let got = rho.expectation(&ss).unwrap();
                assert!((got.re - c).abs() <= 1e-12 && got.im.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn thermal_state_examples() {
        let sz = ComplexMatrix::pauli_z();
        let t0 = thermal_state(&sz, 0.0).unwrap();
        assert!(t0.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);

        let cold = thermal_state(&sz, 20.0).unwrap();
        assert!(cold.matrix()[(1, 1)].re >= 1.0 - 1e-6);

        let e = std::f64::consts::E;
        let t1 = thermal_state(&sz, 1.0).unwrap();
        let z = e + 1.0 / e;
        assert!((t1.matrix()[(0, 0)].re - (1.0 / e) / z).abs() < 1e-15);
        assert!((t1.matrix()[(1, 1)].re - e / z).abs() < 1e-15);

        assert!(thermal_state(&sz, -1.0).is_err());
        let not_h = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(thermal_state(&not_h, 1.0), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn random_states_are_valid_and_deterministic() {
        for seed in 0..1000 {
            let rho = random_density_matrix(4, seed).unwrap();
            assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-12);
            assert!(rho.eigenvalues().unwrap()[0] >= 0.0 - 1e-15);
        }
        assert_eq!(random_density_matrix(3, 42).unwrap(), random_density_matrix(3, 42).unwrap());
        assert_ne!(random_density_matrix(3, 42).unwrap(), random_density_matrix(3, 43).unwrap());
        assert!(matches!(random_density_matrix(1, 0), Err(Error::BadDimension(1))));
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::diag_real(&[0.5, 0.6])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag_real(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag_real(&[0.25, 0.75])).is_ok());
    }
}
