//! Clock statistics: agreement projectors, conditional probabilities of the
//! system qubit given the clock qubit, and fixed-`c₃` family sweeps.
//!
//! Qubit 1 (most significant) is the system, qubit 2 the clock. "Right" is
//! `|+⟩`, "left" is `|−⟩`.

use rayon::prelude::*;

use crate::channels::{zeeman_hamiltonian, DEFAULT_FIELD};
use crate::error::{Error, Result};
use crate::measures::{breakdown_with_twirl, concurrence, CoherenceBreakdown};
use crate::qmat::{kron, ComplexMatrix};
use crate::states::{bell_diagonal, minus_ket, plus_ket, BellDiagonalTriplet, DensityMatrix};
use crate::thermo::{work_from_internal_coherence, DEFAULT_KT};

/// Clock-outcome probabilities below this make the conditional undefined.
pub const MIN_CONDITIONING_PROBABILITY: f64 = 1e-12;

/// `E_{ημ} = |η⟩⟨η| ⊗ |μ⟩⟨μ|`, first label the system, second the clock.
#[derive(Clone, Debug)]
pub struct AgreementProjectors {
    pub rr: ComplexMatrix,
    pub ll: ComplexMatrix,
    pub rl: ComplexMatrix,
    pub lr: ComplexMatrix,
}

impl AgreementProjectors {
    /// `1 ⊗ |+⟩⟨+|`
    pub fn clock_right(&self) -> ComplexMatrix {
        &self.rr + &self.lr
    }

    /// `1 ⊗ |−⟩⟨−|`
    pub fn clock_left(&self) -> ComplexMatrix {
        &self.ll + &self.rl
    }
}

pub fn agreement_projectors() -> AgreementProjectors {
    let right = ComplexMatrix::outer(&plus_ket());
    let left = ComplexMatrix::outer(&minus_ket());
    AgreementProjectors {
        rr: kron(&right, &right),
        ll: kron(&left, &left),
        rl: kron(&right, &left),
        lr: kron(&left, &right),
    }
}

/// Conditional probabilities `p_{system clock}` given the clock's outcome.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClockTable {
    /// system right | clock right
    pub p_rr: f64,
    /// system left | clock left
    pub p_ll: f64,
    /// system right | clock left
    pub p_rl: f64,
    /// system left | clock right
    pub p_lr: f64,
}

impl ClockTable {
    /// Same table with the system's labels exchanged; agreement becomes disagreement.
    pub fn disagreement(&self) -> ClockTable {
        ClockTable {
            p_rr: self.p_lr,
            p_ll: self.p_rl,
            p_rl: self.p_ll,
            p_lr: self.p_rr,
        }
    }
}

/// Conditional probabilities for a (twirled) two-qubit state.
pub fn conditional_probabilities(drho: &DensityMatrix) -> Result<ClockTable> {
    if drho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: drho.dim(),
        });
    }
    let e = agreement_projectors();
    let prob = |p: &ComplexMatrix| -> Result<f64> { Ok(drho.expectation(p)?.re) };
    let clock_right = prob(&e.clock_right())?;
    let clock_left = prob(&e.clock_left())?;
    if clock_right < MIN_CONDITIONING_PROBABILITY {
        return Err(Error::DegenerateConditional {
            outcome: "clock right",
            probability: clock_right,
        });
    }
    if clock_left < MIN_CONDITIONING_PROBABILITY {
        return Err(Error::DegenerateConditional {
            outcome: "clock left",
            probability: clock_left,
        });
    }
    Ok(ClockTable {
        p_rr: prob(&e.rr)? / clock_right,
        p_ll: prob(&e.ll)? / clock_left,
        p_rl: prob(&e.rl)? / clock_left,
        p_lr: prob(&e.lr)? / clock_right,
    })
}

/// `p_rr = (2 + c₁ + c₂)/4` for a Bell-diagonal state.
pub fn p_rr_closed_form(t: BellDiagonalTriplet) -> Result<f64> {
    t.validate()?;
    Ok((2.0 + t.c1 + t.c2) / 4.0)
}

/// All per-state quantities at one point of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord {
    pub triplet: BellDiagonalTriplet,
    pub clock: ClockTable,
    pub breakdown: CoherenceBreakdown,
    pub concurrence_initial: f64,
    pub concurrence_dephased: f64,
    pub work_bits: f64,
}

/// Evaluates every quantity of a [`SweepRecord`] for one triplet.
pub fn evaluate_triplet(t: BellDiagonalTriplet) -> Result<SweepRecord> {
    let es = zeeman_hamiltonian(DEFAULT_FIELD)?;
    let rho = bell_diagonal(t)?;
    let (breakdown, twirled) = breakdown_with_twirl(&rho, &es)?;
    Ok(SweepRecord {
        triplet: t,
        clock: conditional_probabilities(&twirled)?,
        breakdown,
        concurrence_initial: concurrence(&rho)?,
        concurrence_dephased: concurrence(&twirled)?,
        work_bits: work_from_internal_coherence(&rho, &es, DEFAULT_KT)?.work_bits,
    })
}

/// Grid coordinates `−1, −1 + step, …` up to 1, snapped to 12 decimals so
/// that values like 0.35 are the nearest doubles rather than accumulated sums.
pub fn grid_axis(step: f64) -> Vec<f64> {
    let count = (2.0 / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|k| {
            let v = -1.0 + k as f64 * step;
            let snapped = (v * 1e12).round() / 1e12;
            if snapped == 0.0 {
                0.0
            } else {
                snapped
            }
        })
        .collect()
}

/// Sweeps `(c₁, c₂)` over the grid at fixed `c₃`, keeping valid triplets, in
/// row-major order (`c₁` outer).
pub fn sweep_family(c3: f64, step: f64) -> Result<Vec<SweepRecord>> {
    if !(step > 0.0 && step <= 2.0) {
        return Err(Error::InvalidArgument(format!("step must be in (0, 2], got {step}")));
    }
    if !(-1.0..=1.0).contains(&c3) {
        return Err(Error::InvalidArgument(format!("c3 must be in [-1, 1], got {c3}")));
    }
    let axis = grid_axis(step);
    let points: Vec<BellDiagonalTriplet> = axis
        .iter()
        .flat_map(|&c1| axis.iter().map(move |&c2| BellDiagonalTriplet::new(c1, c2, c3)))
        .filter(BellDiagonalTriplet::is_valid)
        .collect();
    // par_iter + collect keeps input order.
    points.into_par_iter().map(evaluate_triplet).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::twirl_pinching;
    use crate::states::phi_plus;

    fn table(c1: f64, c2: f64, c3: f64) -> ClockTable {
        let es = zeeman_hamiltonian(1.0).unwrap();
        let rho = bell_diagonal(BellDiagonalTriplet::new(c1, c2, c3)).unwrap();
        conditional_probabilities(&twirl_pinching(&rho, &es).unwrap()).unwrap()
    }

    #[test]
    fn projectors_resolve_identity() {
        let e = agreement_projectors();
        let sum = &(&e.rr + &e.ll) + &(&e.rl + &e.lr);
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-14);
        let pp = crate::qmat::kron_vec(&plus_ket(), &plus_ket());
        let out = e.rr.apply(&pp);
        for (a, b) in out.iter().zip(&pp) {
            assert!((a - b).norm() < 1e-15);
        }
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!((mixed.expectation(&e.rr).unwrap().re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn agreement_examples() {
        assert!((table(1.0, 0.0, 0.0).p_rr - 0.75).abs() < 1e-12);
        for c3 in [-0.5, 0.0, 0.5] {
            let t = table(0.0, 0.0, c3);
            for p in [t.p_rr, t.p_ll, t.p_rl, t.p_lr] {
                assert!((p - 0.5).abs() < 1e-12);
            }
        }
        assert!((table(1.0, 1.0, -1.0).p_rr - 1.0).abs() < 1e-12);
        let es = zeeman_hamiltonian(1.0).unwrap();
        let phi = conditional_probabilities(&twirl_pinching(&phi_plus(), &es).unwrap()).unwrap();
        assert!((phi.p_rr - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(p_rr_closed_form(BellDiagonalTriplet::new(1.0, 0.0, 0.0)).unwrap(), 0.75);
        assert_eq!(p_rr_closed_form(BellDiagonalTriplet::new(0.0, 0.0, 0.0)).unwrap(), 0.5);
        assert_eq!(p_rr_closed_form(BellDiagonalTriplet::new(1.0, 1.0, -1.0)).unwrap(), 1.0);
        assert!(p_rr_closed_form(BellDiagonalTriplet::new(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn projector_route_matches_closed_form_and_sums() {
        for c3 in grid_axis(0.1) {
            for rec in sweep_family(c3, 0.1).unwrap() {
                let t = rec.triplet;
                assert!((rec.clock.p_rr - p_rr_closed_form(t).unwrap()).abs() <= 1e-12);
                assert!((rec.clock.p_rr + rec.clock.p_lr - 1.0).abs() <= 1e-10);
                assert!((rec.clock.p_ll + rec.clock.p_rl - 1.0).abs() <= 1e-10);
                let d = rec.clock.disagreement();
                assert_eq!(d.p_rr, rec.clock.p_lr);
            }
        }
    }

    #[test]
    fn degenerate_conditional() {
        // Clock pinned to |−⟩: conditioning on "clock right" is undefined.
        let minus = ComplexMatrix::outer(&minus_ket());
        let rho = DensityMatrix::new(kron(&ComplexMatrix::identity(2).scale_real(0.5), &minus)).unwrap();
        assert!(matches!(
            conditional_probabilities(&rho),
            Err(Error::DegenerateConditional { outcome: "clock right", .. })
        ));
    }

    #[test]
    fn grid_axis_is_exact() {
        assert_eq!(grid_axis(1.0), vec![-1.0, 0.0, 1.0]);
        assert_eq!(grid_axis(0.5), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let axis = grid_axis(0.05);
        assert_eq!(axis.len(), 41);
        assert_eq!(axis[27], 0.35);
        assert_eq!(axis[13], -0.35);
    }

    #[test]
    fn sweep_examples() {
        let vertex = sweep_family(-1.0, 0.5).unwrap();
        let psi = vertex
            .iter()
            .find(|r| r.triplet == BellDiagonalTriplet::new(1.0, 1.0, -1.0))
            .expect("vertex present");
        assert!((psi.breakdown.internal - 1.0).abs() < 1e-12);
        assert!((psi.clock.p_rr - 1.0).abs() < 1e-12);

        let flat = sweep_family(0.0, 0.05).unwrap();
        assert!(!flat.is_empty());
        for r in &flat {
            if r.breakdown.internal.abs() <= 1e-12 {
                assert!((r.clock.p_rr - 0.5).abs() <= 1e-12, "{r:?}");
            }
            assert!(r.concurrence_dephased <= 1e-10);
            assert!((r.work_bits - r.breakdown.internal).abs() <= 1e-9);
        }
        assert!(flat.iter().any(|r| r.clock.p_rr > 0.5 && r.concurrence_dephased <= 1e-10));

        assert!(sweep_family(0.0, 0.0).is_err());
        assert!(sweep_family(1.5, 0.1).is_err());
    }

    #[test]
    fn sweep_order_is_row_major() {
        let recs = sweep_family(0.0, 0.25).unwrap();
        for w in recs.windows(2) {
            let (a, b) = (w[0].triplet, w[1].triplet);
            assert!(a.c1 < b.c1 || (a.c1 == b.c1 && a.c2 < b.c2));
        }
        assert_eq!(recs, sweep_family(0.0, 0.25).unwrap());
    }
}
