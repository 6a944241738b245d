//! Information gain and disturbance of measurements on encoded pairs.
//!
//! For a covariant instrument with seed `A₀` the averages over input
//! directions and outcomes reduce to
//!
//! ```text
//! I = Tr[A₀†A₀ M₀₀]
//! D = 1 − Σ_{i,j,k} ⟨ji| A₀ M_jk A₀† |ki⟩
//! ```
//!
//! Finite instruments (a list of Kraus operators, each with a guessed
//! direction) are evaluated by Monte Carlo over Haar-random inputs, which
//! also serves as an independent check on the trace formulas.
//!
//! Disturbance is measured on the first qubit only: the fidelity is
//! `Tr[𝓔(ρ̃) (|ψ⟩⟨ψ| ⊗ 𝟙)]`.

use alloc::vec::Vec;

use rand::Rng;

use crate::encoding::{
    apply_two_copy, encode_ket, haar_sample, haar_unitary, spin_rotation, spin_state, two_copy,
    Direction, EncodingMode,
};
use crate::error::{Error, Result};
use crate::instrument::KrausSeed;
use crate::linalg::{frobenius_distance, ComplexMatrix, ComplexVector, ZERO};
use crate::moments::MomentSet;
use crate::povm4::tetrahedral_group;
use crate::stats::{within_sigma, RunningStats};

/// Completeness tolerance for finite instruments.
pub const COMPLETENESS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Analytic,
    TraceFormula,
    MonteCarlo,
    Optimizer,
    Bound,
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Analytic => "analytic",
            Self::TraceFormula => "trace_formula",
            Self::MonteCarlo => "monte_carlo",
            Self::Optimizer => "optimizer",
            Self::Bound => "bound",
        }
    }
}

impl core::fmt::Display for Provenance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub information: f64,
    pub disturbance: f64,
    pub mode: EncodingMode,
    pub provenance: Provenance,
}

/// `Tr[A₀†A₀ M₀₀]`.
pub fn information(seed: &KrausSeed, moments: &MomentSet) -> Result<f64> {
    seed.require_validated()?;
    Ok(seed.effect().trace_product(moments.get(0, 0)).re)
}

/// `Σ_{i,j,k} ⟨ji| A₀ M_jk A₀† |ki⟩`.
pub fn fidelity(seed: &KrausSeed, moments: &MomentSet) -> Result<f64> {
    seed.require_validated()?;
    let a = seed.matrix();
    let a_dag = a.adjoint();
    let mut total = ZERO;
    for j in 0..2 {
        for k in 0..2 {
            let op = &(a * moments.get(j, k)) * &a_dag;
            for i in 0..2 {
                total += op[(2 * j + i, 2 * k + i)];
            }
        }
    }
    Ok(total.re)
}

pub fn disturbance(seed: &KrausSeed, moments: &MomentSet) -> Result<f64> {
    Ok(1.0 - fidelity(seed, moments)?)
}

pub fn evaluate(seed: &KrausSeed, moments: &MomentSet) -> Result<TradeoffPoint> {
    Ok(TradeoffPoint {
        information: information(seed, moments)?,
        disturbance: disturbance(seed, moments)?,
        mode: moments.mode(),
        provenance: Provenance::TraceFormula,
    })
}

/// A finite measurement: Kraus operators with one guessed direction each.
#[derive(Debug, Clone)]
pub struct Instrument {
    kraus: Vec<ComplexMatrix>,
    guesses: Vec<Direction>,
    completeness_residual: f64,
}

impl Instrument {
    /// Requires 4×4 operators with `Σ A_r†A_r = 𝟙` within
    /// [`COMPLETENESS_TOLERANCE`].
    pub fn new(kraus: Vec<ComplexMatrix>, guesses: Vec<Direction>) -> Result<Self> {
        if kraus.len() != guesses.len() || kraus.is_empty() {
            return Err(Error::GuessCountMismatch {
                kraus: kraus.len(),
                guesses: guesses.len(),
            });
        }
        let residual = completeness_residual(&kraus)?;
        if residual > COMPLETENESS_TOLERANCE {
            return Err(Error::NotComplete(residual));
        }
        Ok(Self {
            kraus,
            guesses,
            completeness_residual: residual,
        })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn guesses(&self) -> &[Direction] {
        &self.guesses
    }

    pub fn completeness_residual(&self) -> f64 {
        self.completeness_residual
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }
}

/// Frobenius distance of `Σ A_r†A_r` from the identity.
pub fn completeness_residual(kraus: &[ComplexMatrix]) -> Result<f64> {
    let mut sum = ComplexMatrix::zeros(4, 4);
    for a in kraus {
        a.expect_shape(4, 4, "4x4 Kraus operator")?;
        sum = &sum + &(&a.adjoint() * a);
    }
    frobenius_distance(&sum, &ComplexMatrix::identity(4))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub information: f64,
    pub information_std_error: f64,
    pub disturbance: f64,
    pub disturbance_std_error: f64,
    pub samples: usize,
    pub mode: EncodingMode,
}

impl MonteCarloEstimate {
    pub fn point(&self) -> TradeoffPoint {
        TradeoffPoint {
            information: self.information,
            disturbance: self.disturbance,
            mode: self.mode,
            provenance: Provenance::MonteCarlo,
        }
    }

    /// Both coordinates agree with `(information, disturbance)` within `k`
    /// standard errors.
    pub fn agrees_with(&self, information: f64, disturbance: f64, k: f64) -> bool {
        within_sigma(
            self.information,
            self.information_std_error,
            information,
            0.0,
            k,
        ) && within_sigma(
            self.disturbance,
            self.disturbance_std_error,
            disturbance,
            0.0,
            k,
        )
    }

    pub fn agrees_with_estimate(&self, other: &Self, k: f64) -> bool {
        within_sigma(
            self.information,
            self.information_std_error,
            other.information,
            other.information_std_error,
            k,
        ) && within_sigma(
            self.disturbance,
            self.disturbance_std_error,
            other.disturbance,
            other.disturbance_std_error,
            k,
        )
    }

    fn from_stats(info: &RunningStats, fid: &RunningStats, mode: EncodingMode) -> Self {
        Self {
            information: info.mean(),
            information_std_error: info.std_error(),
            disturbance: 1.0 - fid.mean(),
            disturbance_std_error: fid.std_error(),
            samples: info.count() as usize,
            mode,
        }
    }
}

/// Per-sample `(Σ_r p(r|g)·|⟨ψ_r|ψ_g⟩|², Σ_r Tr[A_r ρ̃ A_r† (|ψ_g⟩⟨ψ_g|⊗𝟙)])`
/// for a pure input `ket` encoding `psi`.
fn sample_values<'a>(
    ops: impl Iterator<Item = (&'a ComplexMatrix, &'a ComplexVector)>,
    psi: &ComplexVector,
    ket: &ComplexVector,
) -> (f64, f64) {
    let (mut info, mut fid) = (0.0, 0.0);
    for (a, guess) in ops {
        let out = a.apply(ket);
        info += out.norm_sqr() * guess.inner(psi).norm_sqr();
        for i in 0..2 {
            let amp = psi[0].conj() * out[i] + psi[1].conj() * out[2 + i];
            fid += amp.norm_sqr();
        }
    }
    (info, fid)
}

/// Monte Carlo estimate of `(I, D)` for a finite instrument.
pub fn monte_carlo_evaluate<R: Rng + ?Sized>(
    instrument: &Instrument,
    mode: EncodingMode,
    rng: &mut R,
    samples: usize,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let guess_states: Vec<ComplexVector> = instrument.guesses.iter().map(spin_state).collect();
    let (mut info, mut fid) = (RunningStats::new(), RunningStats::new());
    for _ in 0..samples {
        let d = haar_sample(rng);
        let psi = spin_state(&d);
        let ket = encode_ket(&d, mode);
        let (i, f) = sample_values(instrument.kraus.iter().zip(&guess_states), &psi, &ket);
        info.push(i);
        fid.push(f);
    }
    Ok(MonteCarloEstimate::from_stats(&info, &fid, mode))
}

/// Monte Carlo estimate of the covariantized instrument: every outcome `r`
/// is spread over the group as `(U_g U_r†)^{⊗2} A_r (U_r U_g†)^{⊗2}` with
/// guess `U_g|0⟩`. Each sample draws an input direction and a Haar `h`, and
/// averages over the coset `g ∈ h·T` of the tetrahedral rotation group, so
/// every sample is itself a complete instrument.
pub fn monte_carlo_covariantized<R: Rng + ?Sized>(
    instrument: &Instrument,
    mode: EncodingMode,
    rng: &mut R,
    samples: usize,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    // With g = h·t, (U_g U_r†)^{⊗2} = (U_h)^{⊗2} (U_t U_r†)^{⊗2}; the right
    // factor is fixed, and U_h is moved onto the input.
    let group = tetrahedral_group();
    let mut spread = Vec::with_capacity(group.len() * instrument.len());
    for t in &group {
        let guess = t.column(0);
        for (a, d) in instrument.kraus.iter().zip(&instrument.guesses) {
            let c = two_copy(&(t * &spin_rotation(d).adjoint()));
            spread.push((&(&c * a) * &c.adjoint(), guess.clone()));
        }
    }
    let weight = 1.0 / group.len() as f64;
    let (mut info, mut fid) = (RunningStats::new(), RunningStats::new());
    for _ in 0..samples {
        let d = haar_sample(rng);
        let h_inv = haar_unitary(rng).adjoint();
        let psi = h_inv.apply(&spin_state(&d));
        let ket = apply_two_copy(&h_inv, &encode_ket(&d, mode));
        let (i, f) = sample_values(spread.iter().map(|(a, g)| (a, g)), &psi, &ket);
        info.push(weight * i);
        fid.push(weight * f);
    }
    Ok(MonteCarloEstimate::from_stats(&info, &fid, mode))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariantizationReport {
    pub original: MonteCarloEstimate,
    pub covariant: MonteCarloEstimate,
    /// Both coordinates agree within 3 combined standard errors.
    pub agree: bool,
}

/// Checks that covariantizing an instrument leaves `(I, D)` unchanged.
pub fn covariantize_check<R: Rng + ?Sized>(
    instrument: &Instrument,
    mode: EncodingMode,
    rng: &mut R,
    samples: usize,
) -> Result<CovariantizationReport> {
    let original = monte_carlo_evaluate(instrument, mode, rng, samples)?;
    let covariant = monte_carlo_covariantized(instrument, mode, rng, samples)?;
    Ok(CovariantizationReport {
        original,
        covariant,
        agree: original.agrees_with_estimate(&covariant, 3.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instrument::{random_validated_seed, validate_seed};
    use crate::linalg::C64;
    use crate::moments::{moment_set, DEFAULT_RESOLUTION};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn anti() -> MomentSet {
        moment_set(EncodingMode::Antiparallel, DEFAULT_RESOLUTION).unwrap()
    }

    fn second_qubit_projective() -> Instrument {
        let i2 = ComplexMatrix::identity(2);
        let p0 = ComplexVector::basis(2, 0).projector();
        let p1 = ComplexVector::basis(2, 1).projector();
        // Second spin found up means the first points down.
        Instrument::new(
            alloc::vec![i2.kron(&p0), i2.kron(&p1)],
            alloc::vec![Direction::SOUTH, Direction::NORTH],
        )
        .unwrap()
    }

    #[test]
    fn identity_seed_trace_formula() {
        let m = anti();
        let seed = validate_seed(ComplexMatrix::identity(4)).unwrap();
        assert!((information(&seed, &m).unwrap() - 0.5).abs() < 1e-12);
        assert!(disturbance(&seed, &m).unwrap().abs() < 1e-12);
    }

    #[test]
    fn unvalidated_seed_is_rejected() {
        let m = anti();
        let seed = validate_seed(ComplexMatrix::zeros(4, 4)).unwrap();
        assert!(information(&seed, &m).is_err());
        assert!(disturbance(&seed, &m).is_err());
    }

    #[test]
    fn special_seed_trace_formula() {
        let m = anti();
        let s3 = 3f64.sqrt();
        let mut a = ComplexMatrix::zeros(4, 4);
        a[(0, 1)] = C64::new((2.0 + s3).sqrt(), 0.0);
        a[(0, 2)] = C64::new((2.0 - s3).sqrt(), 0.0);
        let p = evaluate(&validate_seed(a).unwrap(), &m).unwrap();
        assert!((p.information - (3.0 + s3) / 6.0).abs() < 1e-12);
        assert!((p.disturbance - (3.0 - s3) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn instrument_validation() {
        let id = ComplexMatrix::identity(4);
        assert!(matches!(
            Instrument::new(alloc::vec![id.clone()], alloc::vec![]),
            Err(Error::GuessCountMismatch { .. })
        ));
        assert!(matches!(
            Instrument::new(alloc::vec![&id * 0.5], alloc::vec![Direction::NORTH]),
            Err(Error::NotComplete(_))
        ));
        assert!(Instrument::new(alloc::vec![id], alloc::vec![Direction::NORTH]).is_ok());
    }

    #[test]
    fn monte_carlo_identity_instrument() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = Instrument::new(
            alloc::vec![ComplexMatrix::identity(4)],
            alloc::vec![Direction::new(1.0, 2.0).unwrap()],
        )
        .unwrap();
        let est =
            monte_carlo_evaluate(&inst, EncodingMode::Antiparallel, &mut rng, 200_000).unwrap();
        assert!(est.agrees_with(0.5, 0.0, 3.0));
        assert!(est.disturbance.abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_second_qubit_measurement() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let est = monte_carlo_evaluate(
            &second_qubit_projective(),
            EncodingMode::Antiparallel,
            &mut rng,
            200_000,
        )
        .unwrap();
        assert!(est.agrees_with(2.0 / 3.0, 0.0, 3.0));
        assert!(est.disturbance.abs() < 1e-12);
        assert!(est.disturbance_std_error < 1e-12);
    }

    #[test]
    fn covariantization_preserves_figures_of_merit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rep = covariantize_check(
            &second_qubit_projective(),
            EncodingMode::Antiparallel,
            &mut rng,
            100_000,
        )
        .unwrap();
        assert!(rep.agree, "{rep:?}");

        let id = Instrument::new(
            alloc::vec![ComplexMatrix::identity(4)],
            alloc::vec![Direction::NORTH],
        )
        .unwrap();
        let rep = covariantize_check(&id, EncodingMode::Parallel, &mut rng, 50_000).unwrap();
        assert!(rep.agree);
        assert!(rep.covariant.disturbance.abs() < 1e-12);
    }

    #[test]
    fn information_range_over_random_seeds() {
        let m = anti();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s3 = 3f64.sqrt();
        for _ in 0..500 {
            let p = evaluate(&random_validated_seed(&mut rng), &m).unwrap();
            assert!(p.information <= (3.0 + s3) / 6.0 + 1e-9);
            assert!(p.information >= (3.0 - s3) / 6.0 - 1e-9);
            assert!((0.0..=1.0 + 1e-9).contains(&(1.0 - p.disturbance)));
        }
    }
}
