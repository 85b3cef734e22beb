//! Dense complex-matrix kernel.
//!
//! Everything in this crate is at most a few dozen dimensions, so matrices are
//! stored as flat row-major `Vec<Complex64>` and all algorithms are the plain
//! O(n³) ones. The Hermitian eigensolver is a cyclic complex Jacobi iteration,
//! which is slow for large matrices but accurate to a few ulps for the sizes
//! used here.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for Hermiticity checks in spectral functions.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-CLAMP_TOL, 0)` are treated as zero before any logarithm.
pub const CLAMP_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square matrix of complex entries in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting ragged or non-finite input.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(ComplexMatrix { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        ComplexMatrix { dim, entries }
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn pauli_x() -> Self {
        Self::from_fn(2, |i, j| if i != j { ONE } else { ZERO })
    }

    pub fn pauli_y() -> Self {
        Self::from_row_major(2, vec![ZERO, -I, I, ZERO]).expect("static")
    }

    pub fn pauli_z() -> Self {
        Self::diag_real(&[1.0, -1.0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.entries[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        ComplexMatrix { dim: n, entries: out }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "apply dimension mismatch");
        (0..self.dim)
            .map(|i| {
                self.entries[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `U A U†`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> ComplexMatrix {
        u.matmul(self).matmul(&u.adjoint())
    }

    /// Largest entrywise modulus, ‖A‖_max.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖A − A†‖_max
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// True when every off-diagonal entry is at most `tol` in modulus.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| i == j || self[(i, j)].norm() <= tol))
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    fn check_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: tol,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; `a` indexes the most-significant subsystem.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    ComplexMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

/// Which factor of a bipartite space to keep in [`partial_trace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Traces out one factor of a `d1 ⊗ d2` operator.
pub fn partial_trace(a: &ComplexMatrix, dims: (usize, usize), keep: Subsystem) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    if d1 * d2 != a.dim {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: a.dim,
        });
    }
    Ok(match keep {
        Subsystem::First => ComplexMatrix::from_fn(d1, |i, j| {
            (0..d2).map(|k| a[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(d2, |i, j| {
            (0..d1).map(|k| a[(k * d2 + i, k * d2 + j)]).sum()
        }),
    })
}

/// Spectral decomposition `A = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(f(λ)) V†`
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| Complex64::new(l, 0.0))
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Eigenvalues come back ascending. Within a cluster of (numerically)
/// degenerate eigenvalues the eigenvectors are replaced by the Gram-Schmidt
/// orthonormalization of the cluster projector's columns in index order, and
/// every other eigenvector has its first non-negligible component made real
/// and positive, so the output depends only on the input matrix.
pub fn hermitian_eigendecompose(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    a.check_hermitian(tol)?;
    let n = a.dim;
    // Work on the exactly Hermitian part.
    let mut m = ComplexMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let frob = m.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 || mag <= 1e-18 * frob {
                    m[(p, q)] = ZERO;
                    m[(q, p)] = ZERO;
                    continue;
                }
                let phase = apq / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let s_ph = phase * s; // J[p][q]
                let s_ph_c = s_ph.conj(); // -J[q][p]

                // M <- M J
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c - mkq * s_ph_c;
                    m[(k, q)] = mkp * s_ph + mkq * c;
                }
                // M <- J† M
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c - mqk * s_ph;
                    m[(q, k)] = mpk * s_ph_c + mqk * c;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                // V <- V J
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * s_ph_c;
                    v[(k, q)] = vkp * s_ph + vkq * c;
                }
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[(k, k)].re).collect();
    let mut columns: Vec<Vec<Complex64>> = order.iter().map(|&k| v.column(k)).collect();

    canonicalize(&eigenvalues, &mut columns, a.max_abs());

    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| columns[j][i]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn canonicalize(eigenvalues: &[f64], columns: &mut [Vec<Complex64>], scale: f64) {
    let n = eigenvalues.len();
    let cluster_tol = 1e-12 * scale.max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= cluster_tol {
            end += 1;
        }
        if end - start == 1 {
            fix_phase(&mut columns[start]);
        } else if let Some(basis) = canonical_basis(&columns[start..end], n) {
            for (dst, src) in columns[start..end].iter_mut().zip(basis) {
                *dst = src;
            }
        }
        start = end;
    }
}

fn fix_phase(v: &mut [Complex64]) {
    let n = v.len() as f64;
    if let Some(pivot) = v.iter().find(|z| z.norm_sqr() > 0.5 / n).copied() {
        let rot = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of span(cluster) obtained from the projector's columns in index order.
fn canonical_basis(cluster: &[Vec<Complex64>], n: usize) -> Option<Vec<Vec<Complex64>>> {
    let k = cluster.len();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for idx in 0..n {
        if basis.len() == k {
            break;
        }
        // P e_idx = Σ_c c conj(c_idx)
        let mut w: Vec<Complex64> = (0..n)
            .map(|i| cluster.iter().map(|c| c[i] * c[idx].conj()).sum())
            .collect();
        for _ in 0..2 {
            for u in &basis {
                let proj = inner(u, &w);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= proj * ui;
                }
            }
        }
        let nw = norm(&w);
        if nw > 1e-4 {
            for wi in w.iter_mut() {
                *wi /= nw;
            }
            basis.push(w);
        }
    }
    (basis.len() == k).then_some(basis)
}

/// Real spectral function `V diag(f(λ)) V†` of a Hermitian matrix.
pub fn spectral_function(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigendecompose(a, HERMITIAN_TOL)?;
    Ok(eig.map(|l| Complex64::new(f(l), 0.0)))
}

/// Complex-valued spectral function, e.g. `exp(-i H t)`.
pub fn spectral_function_complex(a: &ComplexMatrix, f: impl Fn(f64) -> Complex64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigendecompose(a, HERMITIAN_TOL)?;
    Ok(eig.map(f))
}

/// `e^{-i H t}` for Hermitian `H`.
pub fn unitary_evolution(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    spectral_function_complex(h, |e| Complex64::from_polar(1.0, -e * t))
}

/// Maps eigenvalues in `[-CLAMP_TOL, 0)` to zero; leaves everything else alone.
pub fn clamp_eigenvalue(x: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

/// `x log₂ x` with `0 log 0 = 0` and tiny negatives clamped.
pub fn xlog2x(x: f64) -> f64 {
    let x = clamp_eigenvalue(x);
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_ordering_left_factor_most_significant() {
        let zi = kron(&ComplexMatrix::pauli_z(), &ComplexMatrix::identity(2));
        assert_eq!(zi, ComplexMatrix::diag_real(&[1.0, 1.0, -1.0, -1.0]));
        let iz = kron(&ComplexMatrix::identity(2), &ComplexMatrix::pauli_z());
        assert_eq!(iz, ComplexMatrix::diag_real(&[1.0, -1.0, 1.0, -1.0]));
    }

    #[test]
    fn sigma_y_kron_sigma_y_matches_hand_expansion() {
        // σy⊗σy = antidiag(-1, 1, 1, -1)
        let yy = kron(&ComplexMatrix::pauli_y(), &ComplexMatrix::pauli_y());
        let expected = ComplexMatrix::from_real(
            4,
            &[
                0.0, 0.0, 0.0, -1.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                -1.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert!(yy.max_abs_diff(&expected) == 0.0);
    }

    #[test]
    fn rejects_ragged_and_nonfinite() {
        assert!(matches!(
            ComplexMatrix::from_real(2, &[1.0, 2.0, 3.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_real(2, &[1.0, f64::NAN, 3.0, 4.0]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn eigen_of_pauli_z() {
        let e = hermitian_eigendecompose(&ComplexMatrix::pauli_z(), 1e-12).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn eigen_of_maximally_mixed() {
        let e = hermitian_eigendecompose(&ComplexMatrix::identity(4).scale_real(0.25), 1e-12).unwrap();
        for l in e.eigenvalues {
            assert!((l - 0.25).abs() < 1e-15);
        }
        assert!(e.eigenvectors.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn eigen_of_bell_diagonal_100() {
        // X-form with c = (1, 0, 0): center and corner blocks both [[1,1],[1,1]]/4.
        let rho = ComplexMatrix::from_real(
            4,
            &[
                0.25, 0.0, 0.0, 0.25, //
                0.0, 0.25, 0.25, 0.0, //
                0.0, 0.25, 0.25, 0.0, //
                0.25, 0.0, 0.0, 0.25,
            ],
        )
        .unwrap();
        let e = hermitian_eigendecompose(&rho, 1e-12).unwrap();
        let expected = [0.0, 0.0, 0.5, 0.5];
        for (l, x) in e.eigenvalues.iter().zip(expected) {
            assert!((l - x).abs() < 1e-14, "{:?}", e.eigenvalues);
        }
        assert!(e.reconstruct().max_abs_diff(&rho) < 1e-14);
    }

    #[test]
    fn not_hermitian_is_rejected() {
        let a = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eigendecompose(&a, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
        assert!(spectral_function(&a, |x| x).is_err());
    }

    #[test]
    fn degenerate_basis_is_canonical() {
        // Same matrix handed in with a different (unitarily rotated) internal representation
        // gives the same eigenvectors: the I₄ cluster collapses to the standard basis.
        let e = hermitian_eigendecompose(&ComplexMatrix::identity(3), 1e-12).unwrap();
        assert_eq!(e.eigenvectors, ComplexMatrix::identity(3));

        let a = ComplexMatrix::from_real(3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 3.0]).unwrap();
        // eigenvalues 1, 3, 3; the 3-cluster is span{(1,1,0)/√2, e₃}.
        let e = hermitian_eigendecompose(&a, 1e-12).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.eigenvectors[(0, 1)] - c(s)).norm() < 1e-14);
        assert!((e.eigenvectors[(1, 1)] - c(s)).norm() < 1e-14);
        assert!((e.eigenvectors[(2, 2)] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn spectral_identity_on_sigma_x() {
        let sx = ComplexMatrix::pauli_x();
        assert!(spectral_function(&sx, |x| x).unwrap().max_abs_diff(&sx) < 1e-14);
    }

    #[test]
    fn spectral_xlogx_uses_zero_convention() {
        let a = ComplexMatrix::diag_real(&[0.5, 0.5, 0.0, 0.0]);
        let out = spectral_function(&a, xlog2x).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::diag_real(&[-0.5, -0.5, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn exp_matches_taylor_series() {
        // Truncated Taylor oracle of exp(-i H t), order 30.
        let hz = ComplexMatrix::diag_real(&[-2.0, 0.0, 0.0, 2.0]);
        let h = &hz + &kron(&ComplexMatrix::pauli_x(), &ComplexMatrix::pauli_y()).scale_real(0.3);
        for &t in &[0.1, 0.7, 1.3] {
            let gen = h.scale(Complex64::new(0.0, -t));
            let mut term = ComplexMatrix::identity(4);
            let mut sum = ComplexMatrix::identity(4);
            for k in 1..=30 {
                term = term.matmul(&gen).scale_real(1.0 / k as f64);
                sum = &sum + &term;
            }
            let u = unitary_evolution(&h, t).unwrap();
            assert!(u.max_abs_diff(&sum) < 1e-10);
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::from_row_major(
            2,
            vec![c(0.3), Complex64::new(0.1, 0.2), Complex64::new(0.1, -0.2), c(0.7)],
        )
        .unwrap();
        let b = ComplexMatrix::from_real(2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        let ab = kron(&a, &b);
        let kept = partial_trace(&ab, (2, 2), Subsystem::First).unwrap();
        assert!(kept.max_abs_diff(&a.scale(b.trace())) < 1e-15);
        let kept = partial_trace(&ab, (2, 2), Subsystem::Second).unwrap();
        assert!(kept.max_abs_diff(&b.scale(a.trace())) < 1e-15);
    }

    #[test]
    fn partial_trace_of_psi_plus_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c(0.0), c(s), c(s), c(0.0)];
        let rho = ComplexMatrix::outer(&psi);
        for keep in [Subsystem::First, Subsystem::Second] {
            let r = partial_trace(&rho, (2, 2), keep).unwrap();
            assert!(r.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        assert!(matches!(
            partial_trace(&ComplexMatrix::identity(4), (2, 3), Subsystem::First),
            Err(Error::DimensionMismatch { expected: 6, found: 4 })
        ));
    }

    #[test]
    fn xlog2x_convention() {
        assert_eq!(xlog2x(0.0), 0.0);
        assert_eq!(xlog2x(-1e-13), 0.0);
        assert_eq!(xlog2x(0.5), -0.5);
        assert_eq!(clamp_eigenvalue(-1e-11), -1e-11);
    }
}
