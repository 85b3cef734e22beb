//! Entropic coherence quantifiers and two-qubit concurrence. All values in bits.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::channels::{twirl_pinching, EnergyStructure};
use crate::error::{Error, Result};
use crate::qmat::{clamp_eigenvalue, hermitian_eigendecompose, kron, xlog2x, ComplexMatrix, HERMITIAN_TOL};
use crate::states::{BellDiagonalTriplet, DensityMatrix};

/// Default number of sampled incoherent states in [`min_over_incoherent`].
pub const DEFAULT_INCOHERENT_TRIALS: usize = 10_000;

/// Eigenvalues of ρ at or below this are treated as outside its support.
const SUPPORT_TOL: f64 = 1e-14;

/// Total coherence split into the part that survives the twirl (internal)
/// and the part it erases (external, the Holevo asymmetry).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherenceBreakdown {
    /// `S(Δ(ρ)) − S(ρ)`
    pub total: f64,
    /// `S(D(ρ)) − S(ρ)`
    pub external: f64,
    /// `S(Δ(ρ)) − S(D(ρ))`
    pub internal: f64,
}

/// `−Σ λ log₂ λ` over clamped eigenvalues.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(rho.matrix())
}

fn entropy_of(m: &ComplexMatrix) -> f64 {
    let eig = hermitian_eigendecompose(m, HERMITIAN_TOL).expect("density matrices are Hermitian");
    entropy_of_spectrum(&eig.eigenvalues)
}

fn entropy_of_spectrum(values: &[f64]) -> f64 {
    // -0.0 + 0.0 so a pure state reports +0
    -values.iter().map(|&l| xlog2x(l)).sum::<f64>() + 0.0
}

/// `S(ρ‖σ) = tr ρ log₂ρ − tr ρ log₂σ`.
///
/// Returns `f64::INFINITY` when the support of `rho` is not contained in the
/// support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let neg_entropy = -von_neumann_entropy(rho);
    let eig = hermitian_eigendecompose(sigma.matrix(), HERMITIAN_TOL)?;
    let mut cross = 0.0;
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvector(k);
        let weight = rho.matrix().apply(&v).iter().zip(&v).map(|(a, b)| b.conj() * a).sum::<Complex64>().re;
        let l = clamp_eigenvalue(l);
        if l <= SUPPORT_TOL {
            if weight > 1e-12 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * l.log2();
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// Total, external and internal coherence of `rho` with respect to `es`.
pub fn coherence_breakdown(rho: &DensityMatrix, es: &EnergyStructure) -> Result<CoherenceBreakdown> {
    breakdown_with_twirl(rho, es).map(|(b, _)| b)
}

/// `S(Δ(ρ))`: Shannon entropy of the diagonal.
fn diagonal_entropy(m: &ComplexMatrix) -> f64 {
    let diag: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
    entropy_of_spectrum(&diag)
}

/// Relative entropy of coherence `C_r(ρ) = S(Δ(ρ)) − S(ρ)`.
pub fn relative_entropy_of_coherence(rho: &DensityMatrix) -> f64 {
    diagonal_entropy(rho.matrix()) - von_neumann_entropy(rho)
}

/// Internal coherence of a Bell-diagonal state from its triplet alone:
///
/// `−((1−c₃)/2) log₂(1−c₃) + Σ± ((1 ± (c₁+c₂) − c₃)/4) log₂(1 ± (c₁+c₂) − c₃)`.
pub fn internal_coherence_closed_form(t: BellDiagonalTriplet) -> Result<f64> {
    t.validate()?;
    let a = 1.0 - t.c3;
    let x = t.c1 + t.c2;
    let value = -0.5 * xlog2x(a) + 0.25 * (xlog2x(a - x) + xlog2x(a + x));
    Ok(value)
}

/// Minimum of `S(drho‖τ)` over `trials` Dirichlet-uniform diagonal states τ,
/// always including `τ = Δ(drho)` as a candidate.
pub fn min_over_incoherent(drho: &DensityMatrix, trials: usize, seed: u64) -> f64 {
    let n = drho.dim();
    let neg_entropy = -von_neumann_entropy(drho);
    let populations: Vec<f64> = drho.matrix().diagonal().iter().map(|z| z.re).collect();
    // For diagonal τ, tr(ρ log τ) only sees the diagonal of ρ.
    let against = |tau: &[f64]| -> f64 {
        let mut cross = 0.0;
        for (&p, &q) in populations.iter().zip(tau) {
            let p = clamp_eigenvalue(p);
            if q <= SUPPORT_TOL {
                if p > 1e-12 {
                    return f64::INFINITY;
                }
                continue;
            }
            cross += p * q.log2();
        }
        neg_entropy - cross
    };
    let mut best = against(&populations);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tau = vec![0.0; n];
    for _ in 0..trials {
        for q in tau.iter_mut() {
            *q = Exp1.sample(&mut rng);
        }
        let s: f64 = tau.iter().sum();
        tau.iter_mut().for_each(|q| *q /= s);
        best = best.min(against(&tau));
    }
    best
}

/// Dirichlet-uniform diagonal state drawn the same way as in [`min_over_incoherent`].
pub fn random_incoherent_state(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut tau: Vec<f64> = (0..dim).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = tau.iter().sum();
    tau.iter_mut().for_each(|q| *q /= s);
    DensityMatrix::trusted(ComplexMatrix::diag_real(&tau))
}

/// `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`, conjugation in the computational basis.
pub fn spin_flip(m: &ComplexMatrix) -> ComplexMatrix {
    let yy = kron(&ComplexMatrix::pauli_y(), &ComplexMatrix::pauli_y());
    yy.matmul(&m.conj()).matmul(&yy)
}

/// Wootters concurrence `max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}` of a two-qubit state.
///
/// The `√λᵢ` are obtained as singular values of `√ρ·√ρ̃` (via the Hermitian
/// dilation) rather than as square roots of eigenvalues of `ρρ̃`, which would
/// turn O(ε) rounding into O(√ε) errors for rank-deficient states.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let eig = hermitian_eigendecompose(rho.matrix(), HERMITIAN_TOL)?;
    let rank_tol = 64.0 * f64::EPSILON;
    let sqrt_rho = eig.map(|l| Complex64::new(if l > rank_tol { l.sqrt() } else { 0.0 }, 0.0));
    let sqrt_flip = spin_flip(&sqrt_rho);
    let mut sv = singular_values(&sqrt_rho.matmul(&sqrt_flip))?;
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).max(0.0))
}

/// Eigenvalues of `ρρ̃` in decreasing order (squared singular values).
pub fn spin_flip_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let eig = hermitian_eigendecompose(rho.matrix(), HERMITIAN_TOL)?;
    let sqrt_rho = eig.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let mut sv = singular_values(&sqrt_rho.matmul(&spin_flip(&sqrt_rho)))?;
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv.into_iter().map(|s| s * s).collect())
}

/// Singular values from the spectrum of `[[0, M], [M†, 0]]`.
fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    let dilation = ComplexMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
        (true, false) => m[(i, j - n)],
        (false, true) => m[(j, i - n)].conj(),
        _ => Complex64::new(0.0, 0.0),
    });
    let eig = hermitian_eigendecompose(&dilation, HERMITIAN_TOL)?;
    // Spectrum is ±σᵢ; the top n are the singular values.
    Ok(eig.eigenvalues[n..].iter().map(|&s| s.max(0.0)).collect())
}

/// The four eigenvalues of `ρρ̃` for the twirled Bell-diagonal state, as
/// explicit polynomials in the triplet:
///
/// `λ₁ = ((1 + c₁ + c₂ − c₃)/4)²`, `λ₂ = ((1 − c₁ − c₂ − c₃)/4)²`,
/// `λ₃ = λ₄ = c₃²/16 + c₃/8 + 1/16`.
pub fn concurrence_bd_eigenvalues(t: BellDiagonalTriplet) -> Result<[f64; 4]> {
    t.validate()?;
    let BellDiagonalTriplet { c1, c2, c3 } = t;
    let l1 = c1 * c1 / 16.0 + c1 * c2 / 8.0 - c1 * c3 / 8.0 + c1 / 8.0 + c2 * c2 / 16.0 - c2 * c3 / 8.0
        + c2 / 8.0
        + c3 * c3 / 16.0
        - c3 / 8.0
        + 1.0 / 16.0;
    let l2 = c1 * c1 / 16.0 + c1 * c2 / 8.0 + c1 * c3 / 8.0 - c1 / 8.0 + c2 * c2 / 16.0 + c2 * c3 / 8.0
        - c2 / 8.0
        + c3 * c3 / 16.0
        - c3 / 8.0
        + 1.0 / 16.0;
    let l3 = c3 * c3 / 16.0 + c3 / 8.0 + 1.0 / 16.0;
    Ok([l1, l2, l3, l3])
}

/// Breakdown together with the twirled state it was computed from.
pub(crate) fn breakdown_with_twirl(
    rho: &DensityMatrix,
    es: &EnergyStructure,
) -> Result<(CoherenceBreakdown, DensityMatrix)> {
    let twirled = twirl_pinching(rho, es)?;
    let s_rho = von_neumann_entropy(rho);
    let s_twirl = von_neumann_entropy(&twirled);
    let s_dephased = diagonal_entropy(rho.matrix());
    Ok((
        CoherenceBreakdown {
            total: s_dephased - s_rho,
            external: s_twirl - s_rho,
            internal: s_dephased - s_twirl,
        },
        twirled,
    ))
}
