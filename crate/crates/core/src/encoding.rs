//! Directions, spin states, two-spin encodings and Haar sampling.
//!
//! A [`Direction`] is a Bloch-sphere point. All quantities in this crate are
//! invariant under the global phase of the spin state, so a direction stands
//! in for a whole coset of SU(2) elements.

use core::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexMatrix, ComplexVector, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    polar: f64,
    azimuth: f64,
}

impl Direction {
    /// The reference direction `(0, 0, 1)`, whose spin state is `|0⟩`.
    pub const NORTH: Self = Self {
        polar: 0.0,
        azimuth: 0.0,
    };

    pub const SOUTH: Self = Self {
        polar: PI,
        azimuth: 0.0,
    };

    /// Polar angle must lie in `[0, π]`; the azimuth is wrapped into `[0, 2π)`.
    pub fn new(polar: f64, azimuth: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&polar) {
            return Err(Error::InvalidPolar(polar));
        }
        let mut azimuth = azimuth - TAU * (azimuth / TAU).floor();
        if azimuth >= TAU {
            azimuth = 0.0;
        }
        Ok(Self { polar, azimuth })
    }

    /// Direction of a (not necessarily normalized) Bloch vector.
    pub fn from_bloch(v: [f64; 3]) -> Result<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::NotNormalized(r * r));
        }
        let polar = (v[2] / r).clamp(-1.0, 1.0).acos();
        Self::new(polar, v[1].atan2(v[0]))
    }

    /// Direction of the pure state `ψ`, ignoring its global phase.
    pub fn from_state(psi: &ComplexVector) -> Result<Self> {
        Self::from_bloch(bloch_vector(psi)?)
    }

    pub fn polar(&self) -> f64 {
        self.polar
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    pub fn bloch(&self) -> [f64; 3] {
        let (s, c) = self.polar.sin_cos();
        let (sp, cp) = self.azimuth.sin_cos();
        [s * cp, s * sp, c]
    }

    pub fn antipode(&self) -> Self {
        let [x, y, z] = self.bloch();
        Self::from_bloch([-x, -y, -z]).unwrap_or(Self::SOUTH)
    }

    /// `(cos(θ/2), e^{iφ} sin(θ/2))`.
    pub fn spin_state(&self) -> ComplexVector {
        spin_state(self)
    }
}

/// Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of a normalized qubit state.
pub fn bloch_vector(psi: &ComplexVector) -> Result<[f64; 3]> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "qubit state",
            found: (psi.dim(), 1),
        });
    }
    let (a, b) = (psi[0], psi[1]);
    let cross = a.conj() * b;
    Ok([2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingMode {
    /// `|n⟩ ⊗ |−n⟩`
    Antiparallel,
    /// `|n⟩ ⊗ |n⟩`
    Parallel,
}

impl EncodingMode {
    pub const ALL: [Self; 2] = [Self::Antiparallel, Self::Parallel];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Antiparallel => "antiparallel",
            Self::Parallel => "parallel",
        }
    }
}

impl core::fmt::Display for EncodingMode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn spin_state(d: &Direction) -> ComplexVector {
    let (s, c) = (d.polar / 2.0).sin_cos();
    ComplexVector::new(alloc::vec![C64::new(c, 0.0), C64::from_polar(s, d.azimuth)])
}

/// The SU(2) rotation `[[c, −e^{−iφ}s], [e^{iφ}s, c]]`, which maps `|0⟩` to
/// `spin_state(d)` and `|1⟩` to `orthogonal_state(spin_state(d))`.
pub fn spin_rotation(d: &Direction) -> ComplexMatrix {
    let (s, c) = (d.polar / 2.0).sin_cos();
    let e = C64::from_polar(1.0, d.azimuth);
    let entries = alloc::vec![C64::new(c, 0.0), -e.conj() * s, e * s, C64::new(c, 0.0)];
    ComplexMatrix::new(2, 2, entries).expect("2x2")
}

/// `(−conj(ψ₂), conj(ψ₁))`.
pub fn orthogonal_state(psi: &ComplexVector) -> Result<ComplexVector> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "qubit state",
            found: (psi.dim(), 1),
        });
    }
    let n = psi.norm_sqr();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(n));
    }
    Ok(ComplexVector::new(alloc::vec![
        -psi[1].conj(),
        psi[0].conj()
    ]))
}

/// Two-qubit encoding ket: `ψ⊗ψ⊥` or `ψ⊗ψ`.
pub fn encode_ket(d: &Direction, mode: EncodingMode) -> ComplexVector {
    let psi = spin_state(d);
    match mode {
        EncodingMode::Antiparallel => {
            let perp = orthogonal_state(&psi).expect("spin_state is normalized");
            psi.kron(&perp)
        }
        EncodingMode::Parallel => psi.kron(&psi),
    }
}

/// Density matrix of the encoded pair.
pub fn encode(d: &Direction, mode: EncodingMode) -> ComplexMatrix {
    encode_ket(d, mode).projector()
}

/// Uniform point on the sphere: `cos(polar)` uniform on `[−1, 1]`, azimuth
/// uniform on `[0, 2π)`.
pub fn haar_sample<R: Rng + ?Sized>(rng: &mut R) -> Direction {
    let u: f64 = rng.random_range(-1.0..=1.0);
    let azimuth: f64 = rng.random_range(0.0..TAU);
    Direction {
        polar: u.clamp(-1.0, 1.0).acos(),
        azimuth,
    }
}

/// Haar-random element of SU(2), as `spin_rotation(d) · R_z(χ)` with `d`
/// uniform on the sphere and `χ` uniform on `[0, 4π)`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let d = haar_sample(rng);
    let chi: f64 = rng.random_range(0.0..2.0 * TAU);
    let twist = ComplexMatrix::diagonal(&[
        C64::from_polar(1.0, -chi / 2.0),
        C64::from_polar(1.0, chi / 2.0),
    ]);
    &spin_rotation(&d) * &twist
}

/// `|Ψ⁻⟩ = (|01⟩ − |10⟩)/√2`.
pub fn psi_minus() -> ComplexVector {
    ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0])
}

/// `|Ψ⁺⟩ = (|01⟩ + |10⟩)/√2`.
pub fn psi_plus() -> ComplexVector {
    ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0])
}

/// Singlet projector `|Ψ⁻⟩⟨Ψ⁻|` and its complement, the triplet projector.
pub fn subspace_projectors() -> (ComplexMatrix, ComplexMatrix) {
    let singlet = psi_minus().projector();
    let triplet = &ComplexMatrix::identity(4) - &singlet;
    (singlet, triplet)
}

/// `U ⊗ U`.
pub fn two_copy(u: &ComplexMatrix) -> ComplexMatrix {
    tensor_product(u, u)
}

/// `(U⊗U)|x⟩` for a 2×2 `U`, without forming the 4×4 product.
pub fn apply_two_copy(u: &ComplexMatrix, x: &ComplexVector) -> ComplexVector {
    let mut out = alloc::vec![C64::new(0.0, 0.0); 4];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..2 {
                for l in 0..2 {
                    acc += u[(i, k)] * u[(j, l)] * x[2 * k + l];
                }
            }
            out[2 * i + j] = acc;
        }
    }
    ComplexVector::new(out)
}

/// `(U⊗U) x (U⊗U)†`.
pub fn conjugate_two_copy(u: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    let uu = two_copy(u);
    &(&uu * x) * &uu.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, I, ONE, ZERO};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn two_copy_action_matches_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let u = haar_unitary(&mut rng);
        let x = encode_ket(&haar_sample(&mut rng), EncodingMode::Antiparallel);
        let fast = apply_two_copy(&u, &x);
        let slow = two_copy(&u).apply(&x);
        for k in 0..4 {
            assert!(close(fast[k], slow[k]));
        }
    }

    #[test]
    fn spin_state_examples() {
        let north = spin_state(&Direction::NORTH);
        assert!(close(north[0], ONE) && close(north[1], ZERO));
        let south = spin_state(&Direction::new(PI, 0.0).unwrap());
        assert!(close(south[0], ZERO) && close(south[1], ONE));
        let eq = spin_state(&Direction::new(PI / 2.0, PI / 2.0).unwrap());
        assert!(close(eq[0], C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(eq[1], I * FRAC_1_SQRT_2));
    }

    #[test]
    fn reference_state_is_sigma_z_eigenstate() {
        let z = &crate::linalg::pauli()[2];
        let psi = spin_state(&Direction::NORTH);
        let image = z.apply(&psi);
        assert!(close(image[0], psi[0]) && close(image[1], psi[1]));
    }

    #[test]
    fn orthogonal_state_examples() {
        let e0 = ComplexVector::basis(2, 0);
        let e1 = ComplexVector::basis(2, 1);
        assert_eq!(orthogonal_state(&e0).unwrap(), e1);
        let p = orthogonal_state(&e1).unwrap();
        assert!(close(p[0], -ONE) && close(p[1], ZERO));
        assert!(matches!(
            orthogonal_state(&e0.scale(C64::new(2.0, 0.0))),
            Err(Error::NotNormalized(_))
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let psi = spin_state(&haar_sample(&mut rng));
            let perp = orthogonal_state(&psi).unwrap();
            assert!(psi.inner(&perp).norm() < 1e-12);
            assert!((perp.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn encode_reference_direction() {
        let anti = encode(&Direction::NORTH, EncodingMode::Antiparallel);
        let par = encode(&Direction::NORTH, EncodingMode::Parallel);
        for i in 0..4 {
            for j in 0..4 {
                let a = if (i, j) == (1, 1) { ONE } else { ZERO };
                let p = if (i, j) == (0, 0) { ONE } else { ZERO };
                assert!(close(anti[(i, j)], a));
                assert!(close(par[(i, j)], p));
            }
        }
    }

    #[test]
    fn encode_is_pure_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for mode in EncodingMode::ALL {
            for _ in 0..50 {
                let rho = encode(&haar_sample(&mut rng), mode);
                assert!((rho.trace() - ONE).norm() < 1e-12);
                assert!(((&rho * &rho).trace() - ONE).norm() < 1e-12);
                assert!(rho.is_hermitian(1e-12));
                assert!(rho.is_positive_semidefinite(1e-12));
            }
        }
    }

    #[test]
    fn spin_rotation_is_su2_and_maps_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let d = haar_sample(&mut rng);
            let u = spin_rotation(&d);
            assert!(u.is_unitary(1e-12));
            assert!((u.determinant() - ONE).norm() < 1e-12);
            let image = u.column(0);
            let psi = spin_state(&d);
            assert!(close(image[0], psi[0]) && close(image[1], psi[1]));
            let perp = orthogonal_state(&psi).unwrap();
            let col1 = u.column(1);
            assert!(close(col1[0], perp[0]) && close(col1[1], perp[1]));
        }
    }

    #[test]
    fn rotation_covariance_of_encoding() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for mode in EncodingMode::ALL {
            let reference = encode(&Direction::NORTH, mode);
            for _ in 0..50 {
                let d = haar_sample(&mut rng);
                let u = spin_rotation(&d);
                let rotated = conjugate_two_copy(&u, &reference);
                assert!(frobenius_distance(&rotated, &encode(&d, mode)).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn encoding_ignores_phase_of_partner_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let d = haar_sample(&mut rng);
            let psi = spin_state(&d);
            let phase = C64::from_polar(1.0, rng.random_range(0.0..TAU));
            let perp = orthogonal_state(&psi).unwrap().scale(phase);
            let rho = psi.kron(&perp).projector();
            let reference = encode(&d, EncodingMode::Antiparallel);
            assert!(frobenius_distance(&rho, &reference).unwrap() < 1e-12);
        }
    }

    #[test]
    fn haar_moments_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let n = 100_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n {
            let c = haar_sample(&mut rng).polar().cos();
            m1 += c;
            m2 += c * c;
        }
        assert!((m1 / n as f64).abs() < 0.02);
        assert!((m2 / n as f64 - 1.0 / 3.0).abs() < 0.02);

        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            assert_eq!(haar_sample(&mut a), haar_sample(&mut b));
        }
    }

    #[test]
    fn projector_examples() {
        let (m1, m2) = subspace_projectors();
        assert!((&m1 * &m2).max_abs() < 1e-15);
        assert!(frobenius_distance(&(&m1 * &m1), &m1).unwrap() < 1e-12);
        assert!(frobenius_distance(&(&m2 * &m2), &m2).unwrap() < 1e-12);
        assert!((m1.trace() - ONE).norm() < 1e-12);
        assert!((m2.trace() - C64::new(3.0, 0.0)).norm() < 1e-12);
        let sm = psi_minus();
        let sp = psi_plus();
        assert!(frobenius_distance(&m1.apply(&sm).projector(), &sm.projector()).unwrap() < 1e-12);
        let img = m2.apply(&sp);
        assert!((&img - &sp).norm() < 1e-12);
    }

    #[test]
    fn direction_round_trips_through_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let d = haar_sample(&mut rng);
            let back =
                Direction::from_state(&spin_state(&d).scale(C64::from_polar(1.0, 0.7))).unwrap();
            let (a, b) = (d.bloch(), back.bloch());
            assert!((0..3).all(|i| (a[i] - b[i]).abs() < 1e-12));
        }
        assert!(Direction::new(-0.1, 0.0).is_err());
        assert!(Direction::new(PI + 0.1, 0.0).is_err());
        let wrapped = Direction::new(1.0, -PI / 2.0).unwrap();
        assert!((wrapped.azimuth() - 1.5 * PI).abs() < 1e-15);
    }
}
