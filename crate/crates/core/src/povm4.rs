//! Discrete realizations of a covariant instrument.
//!
//! The continuous orbit `{A_h}` is replaced by finitely many group elements
//! `U_i` with weights `1/n`: `A_i = (U_i⊗U_i) A₀ (U_i⊗U_i)† / √n`, guessing
//! `U_i|0⟩`. Any such set reproduces the covariant `(I, D)` exactly, by
//! invariance of the Haar measure over inputs, provided the operators are
//! complete.
//!
//! Completeness of the four-element tetrahedral set
//! `¼ Σ (U_i⊗U_i) X (U_i⊗U_i)† = twirl(X)` is not automatic. It holds when
//! `X = A₀†A₀` commutes with collective z rotations (true for the whole
//! optimal family, whose effects are diagonal in total `S_z`), because the
//! four Bloch images form a spherical 2-design. It fails for generic `X`,
//! so [`build_discrete`] reports an error instead of renormalizing. The
//! twelve-element rotation group of the tetrahedron is irreducible on the
//! triplet and therefore reproduces the twirl for every seed; it is
//! available as [`Realization::TetrahedralGroup`].

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::encoding::{conjugate_two_copy, Direction};
use crate::error::{Error, Result};
use crate::evaluator::{completeness_residual, Instrument};
use crate::instrument::KrausSeed;
use crate::linalg::{pauli, ComplexMatrix, C64, I};

/// Completeness expected of a correct construction.
pub const COMPLETENESS_TARGET: f64 = 1e-8;
/// Residual above which construction fails.
pub const COMPLETENESS_FAILURE: f64 = 1e-6;

fn combo(identity: f64, x: f64, y: f64, z: f64) -> ComplexMatrix {
    // identity·𝟙 + i(x σx + y σy + z σz)
    let [sx, sy, sz] = pauli();
    let mut m = &ComplexMatrix::identity(2) * identity;
    for (c, s) in [(x, &sx), (y, &sy), (z, &sz)] {
        if c != 0.0 {
            m = &m + &s.scale(I * c);
        }
    }
    m
}

/// `U₀ = 𝟙`, `U₁ = (√3/3)𝟙 − i(√6/3)σy`,
/// `U₂,₃ = (√3/3)𝟙 + i(√6/6)σy ± i(√2/2)σx`.
pub fn tetrahedral_unitaries() -> [ComplexMatrix; 4] {
    let (a, b, c, d) = (
        3f64.sqrt() / 3.0,
        6f64.sqrt() / 3.0,
        6f64.sqrt() / 6.0,
        2f64.sqrt() / 2.0,
    );
    [
        ComplexMatrix::identity(2),
        combo(a, 0.0, -b, 0.0),
        combo(a, d, c, 0.0),
        combo(a, -d, c, 0.0),
    ]
}

/// The same set with `U₁ = (√3/3)𝟙 − iσy` as originally printed. Not
/// unitary; kept for documenting the correction.
pub fn literal_tetrahedral_unitaries() -> [ComplexMatrix; 4] {
    let mut us = tetrahedral_unitaries();
    us[1] = combo(3f64.sqrt() / 3.0, 0.0, -1.0, 0.0);
    us
}

/// The rotation group of the tetrahedron as twelve SU(2) representatives:
/// `𝟙`, `iσx`, `iσy`, `iσz` and `(𝟙 + i(±σx ± σy ± σz))/2`.
pub fn tetrahedral_group() -> [ComplexMatrix; 12] {
    let mut out: Vec<ComplexMatrix> = alloc::vec![
        ComplexMatrix::identity(2),
        combo(0.0, 1.0, 0.0, 0.0),
        combo(0.0, 0.0, 1.0, 0.0),
        combo(0.0, 0.0, 0.0, 1.0),
    ];
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                out.push(combo(0.5, 0.5 * sx, 0.5 * sy, 0.5 * sz));
            }
        }
    }
    out.try_into().expect("twelve elements")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Realization {
    /// Four outcomes, guesses on a regular tetrahedron.
    #[default]
    Tetrahedral4,
    /// Twelve outcomes from the tetrahedral rotation group.
    TetrahedralGroup,
}

impl Realization {
    pub fn unitaries(&self) -> Vec<ComplexMatrix> {
        match self {
            Self::Tetrahedral4 => tetrahedral_unitaries().into(),
            Self::TetrahedralGroup => tetrahedral_group().into(),
        }
    }
}

/// `(1/n) Σ_i (U_i⊗U_i) x (U_i⊗U_i)†`.
pub fn discrete_twirl(unitaries: &[ComplexMatrix], x: &ComplexMatrix) -> ComplexMatrix {
    let n = unitaries.len() as f64;
    unitaries
        .iter()
        .map(|u| conjugate_two_copy(u, x))
        .fold(ComplexMatrix::zeros(4, 4), |acc, m| &acc + &m)
        .scale(C64::new(1.0 / n, 0.0))
}

#[derive(Debug, Clone)]
pub struct DiscretePovm {
    kraus: Vec<ComplexMatrix>,
    guesses: Vec<Direction>,
    completeness_residual: f64,
}

impl DiscretePovm {
    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn guesses(&self) -> &[Direction] {
        &self.guesses
    }

    /// Frobenius distance of `Σ A_i†A_i` from the identity.
    pub fn completeness_residual(&self) -> f64 {
        self.completeness_residual
    }

    pub fn instrument(&self) -> Instrument {
        Instrument::new(self.kraus.clone(), self.guesses.clone())
            .expect("construction checked completeness")
    }
}

/// Four-outcome realization `A_i = ½ (U_i⊗U_i) A₀ (U_i⊗U_i)†`.
pub fn build_discrete(seed: &KrausSeed) -> Result<DiscretePovm> {
    build_discrete_with(seed, Realization::Tetrahedral4)
}

pub fn build_discrete_with(seed: &KrausSeed, realization: Realization) -> Result<DiscretePovm> {
    seed.require_validated()?;
    let unitaries = realization.unitaries();
    let weight = C64::new(1.0 / (unitaries.len() as f64).sqrt(), 0.0);
    let mut kraus = Vec::with_capacity(unitaries.len());
    let mut guesses = Vec::with_capacity(unitaries.len());
    for u in &unitaries {
        kraus.push(conjugate_two_copy(u, seed.matrix()).scale(weight));
        guesses.push(Direction::from_state(&u.column(0))?);
    }
    let residual = completeness_residual(&kraus)?;
    if residual > COMPLETENESS_FAILURE {
        return Err(Error::NotComplete(residual));
    }
    Ok(DiscretePovm {
        kraus,
        guesses,
        completeness_residual: residual,
    })
}

/// Pairwise Bloch dot products of the guess directions.
pub fn pairwise_dots(directions: &[Direction]) -> Vec<f64> {
    let mut out = Vec::new();
    for (i, a) in directions.iter().enumerate() {
        for b in &directions[i + 1..] {
            let (p, q) = (a.bloch(), b.bloch());
            out.push(p[0] * q[0] + p[1] * q[1] + p[2] * q[2]);
        }
    }
    out
}
