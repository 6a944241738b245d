//! Covariant instruments generated by a single seed operator.
//!
//! A seed `A₀` generates Kraus operators `A_h = (U_h⊗U_h) A₀ (U_h⊗U_h)†`
//! with guessed state `U_h|0⟩`, one for every `h ∈ SU(2)`. By Schur's lemma
//! the instrument is trace preserving iff
//! `Tr[A₀†A₀ 𝓜₁] = 1` and `Tr[A₀†A₀ 𝓜₂] = 3`, where `𝓜₁` and `𝓜₂` project
//! onto the singlet and triplet subspaces.

use core::array;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::Rng;

use crate::encoding::{conjugate_two_copy, spin_rotation, subspace_projectors, Direction};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};

/// Tolerance on the two trace-preservation weights.
pub const VALIDATION_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSeed {
    a0: ComplexMatrix,
    validated: bool,
    singlet_weight: f64,
    triplet_weight: f64,
}

impl KrausSeed {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a0
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// `Tr[A₀†A₀ 𝓜₁]`
    pub fn singlet_weight(&self) -> f64 {
        self.singlet_weight
    }

    /// `Tr[A₀†A₀ 𝓜₂]`
    pub fn triplet_weight(&self) -> f64 {
        self.triplet_weight
    }

    /// `A₀†A₀`
    pub fn effect(&self) -> ComplexMatrix {
        &self.a0.adjoint() * &self.a0
    }

    pub(crate) fn require_validated(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::UnvalidatedSeed {
                singlet: self.singlet_weight,
                triplet: self.triplet_weight,
            })
        }
    }
}

/// Computes the trace-preservation weights of a 4×4 seed and marks it
/// validated when they equal `(1, 3)` within [`VALIDATION_TOLERANCE`].
/// Invalid seeds are returned unmarked.
pub fn validate_seed(a0: ComplexMatrix) -> Result<KrausSeed> {
    a0.expect_shape(4, 4, "4x4 seed operator")?;
    let (m1, m2) = subspace_projectors();
    let effect = &a0.adjoint() * &a0;
    let singlet_weight = effect.trace_product(&m1).re;
    let triplet_weight = effect.trace_product(&m2).re;
    let validated = (singlet_weight - 1.0).abs() <= VALIDATION_TOLERANCE
        && (triplet_weight - 3.0).abs() <= VALIDATION_TOLERANCE;
    Ok(KrausSeed {
        a0,
        validated,
        singlet_weight,
        triplet_weight,
    })
}

/// Haar average of `(U⊗U) x (U⊗U)†`: `Tr[x𝓜₁]𝓜₁ + Tr[x𝓜₂]𝓜₂/3`.
pub fn twirl(x: &ComplexMatrix) -> ComplexMatrix {
    let (m1, m2) = subspace_projectors();
    let a = x.trace_product(&m1);
    let b = x.trace_product(&m2) / 3.0;
    &m1.scale(a) + &m2.scale(b)
}

/// Orbit element `(U⊗U) A₀ (U⊗U)†` for the rotation `U` taking `|0⟩` to the
/// spin state of `d`.
pub fn orbit_element(seed: &KrausSeed, d: &Direction) -> Result<ComplexMatrix> {
    seed.require_validated()?;
    if *d == Direction::NORTH {
        return Ok(seed.a0.clone());
    }
    Ok(conjugate_two_copy(&spin_rotation(d), &seed.a0))
}

/// Half-column split of a seed: `v₁…v₄` are the top halves (rows 1–2) of
/// columns 1–4 and `v₅…v₈` the bottom halves (rows 3–4).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorDecomposition {
    v: [ComplexVector; 8],
}

impl VectorDecomposition {
    /// `v_i` with the 1-based index used in the layout above.
    pub fn v(&self, i: usize) -> &ComplexVector {
        assert!((1..=8).contains(&i), "vector index is 1-based, 1..=8");
        &self.v[i - 1]
    }

    pub fn vectors(&self) -> &[ComplexVector; 8] {
        &self.v
    }

    pub fn reassemble(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |r, c| {
            let block = if r < 2 { c } else { 4 + c };
            self.v[block][r % 2]
        })
    }
}

pub fn vector_decompose(seed: &KrausSeed) -> VectorDecomposition {
    let a = &seed.a0;
    VectorDecomposition {
        v: array::from_fn(|i| {
            let (col, top) = (i % 4, i / 4);
            ComplexVector::new(alloc::vec![a[(2 * top, col)], a[(2 * top + 1, col)]])
        }),
    }
}

/// `(Σ|vᵢ|², |v₂−v₃|² + |v₇−v₆|²)`; a trace-preserving seed gives `(4, 2)`.
pub fn constraint_values(vd: &VectorDecomposition) -> (f64, f64) {
    let total = vd.v.iter().map(ComplexVector::norm_sqr).sum();
    let antisym = (vd.v(2) - vd.v(3)).norm_sqr() + (vd.v(7) - vd.v(6)).norm_sqr();
    (total, antisym)
}

/// The functionals `(f, g)` with `F = 1/2 + f/12` and `I = 1/2 + g/12` for
/// the antiparallel encoding.
pub fn fg_functionals(vd: &VectorDecomposition) -> (f64, f64) {
    let n = |i: usize| vd.v(i).norm_sqr();
    let w1 = &(vd.v(7) - vd.v(6)) + vd.v(1);
    let w2 = &(vd.v(8) + vd.v(2)) - vd.v(3);
    let f = n(2) - n(3) + n(7) - n(6) - n(1) - n(8) + w1.norm_sqr() + w2.norm_sqr() - 2.0;
    let g = n(2) - n(3) + n(6) - n(7);
    (f, g)
}

/// Rescales `x` to `x (α𝓜₁ + β𝓜₂)` so that both trace conditions hold.
/// Returns `None` when `x` annihilates one of the subspaces.
pub fn rescale_to_trace_preserving(x: &ComplexMatrix) -> Option<ComplexMatrix> {
    let (m1, m2) = subspace_projectors();
    let effect = &x.adjoint() * x;
    let s = effect.trace_product(&m1).re;
    let t = effect.trace_product(&m2).re;
    if s <= 1e-300 || t <= 1e-300 {
        return None;
    }
    let alpha = 1.0 / s.sqrt();
    let beta = (3.0 / t).sqrt();
    let weight = &m1 * alpha + &m2 * beta;
    Some(x * &weight)
}

/// Random trace-preserving seed: a matrix with independent uniform complex
/// entries in the unit square, rescaled on the singlet and triplet subspaces.
pub fn random_validated_seed<R: Rng + ?Sized>(rng: &mut R) -> KrausSeed {
    loop {
        let x = ComplexMatrix::from_fn(4, 4, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        if let Some(a0) = rescale_to_trace_preserving(&x) {
            let seed = validate_seed(a0).expect("4x4");
            if seed.validated {
                return seed;
            }
        }
    }
}
