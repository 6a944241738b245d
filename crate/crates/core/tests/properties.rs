use antispin_core::encoding::{encode, encode_ket, haar_unitary, psi_minus, two_copy};
use antispin_core::evaluator::{evaluate, fidelity, information};
use antispin_core::instrument::{
    fg_functionals, random_validated_seed, validate_seed, vector_decompose,
};
use antispin_core::linalg::{tensor_product, ComplexMatrix, C64};
use antispin_core::moments::{moment_set, MomentSet};
use antispin_core::tradeoff::{d_min, f_envelope, information_max, INFORMATION_MIN};
use antispin_core::{Direction, EncodingMode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn moments(mode: EncodingMode) -> &'static MomentSet {
    static ANTI: OnceLock<MomentSet> = OnceLock::new();
    static PAR: OnceLock<MomentSet> = OnceLock::new();
    let cell = match mode {
        EncodingMode::Antiparallel => &ANTI,
        EncodingMode::Parallel => &PAR,
    };
    cell.get_or_init(|| moment_set(mode, 128).unwrap())
}

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n).prop_map(move |v| {
        ComplexMatrix::new(n, n, v.into_iter().map(|(r, i)| C64::new(r, i)).collect()).unwrap()
    })
}

fn direction() -> impl Strategy<Value = Direction> {
    (0.0..=std::f64::consts::PI, 0.0..std::f64::consts::TAU)
        .prop_map(|(p, a)| Direction::new(p, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trace_of_tensor_product_factorizes(a in matrix(2), b in matrix(4)) {
        let t = tensor_product(&a, &b).trace();
        prop_assert!((t - a.trace() * b.trace()).norm() < 1e-10);
    }

    #[test]
    fn trace_is_cyclic(a in matrix(4), b in matrix(4)) {
        prop_assert!(((&a * &b).trace() - (&b * &a).trace()).norm() < 1e-10);
    }

    #[test]
    fn tensor_product_is_associative(a in matrix(2), b in matrix(2), c in matrix(2)) {
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert!((&left - &right).max_abs() < 1e-12);
    }

    #[test]
    fn two_copy_rotations_are_unitary(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(&mut rng);
        prop_assert!(u.is_unitary(1e-12));
        prop_assert!(two_copy(&u).is_unitary(1e-12));
    }

    #[test]
    fn encodings_are_pure_states(d in direction()) {
        for mode in EncodingMode::ALL {
            let rho = encode(&d, mode);
            prop_assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
            prop_assert!((&(&rho * &rho) - &rho).max_abs() < 1e-12);
            prop_assert!(rho.is_positive_semidefinite(1e-12));
        }
    }

    #[test]
    fn singlet_overlap_depends_only_on_mode(d in direction()) {
        let singlet = psi_minus();
        let anti = singlet.inner(&encode_ket(&d, EncodingMode::Antiparallel)).norm_sqr();
        let par = singlet.inner(&encode_ket(&d, EncodingMode::Parallel)).norm_sqr();
        prop_assert!((anti - 0.5).abs() < 1e-12);
        prop_assert!(par < 1e-12);
    }

    #[test]
    fn direction_survives_bloch_round_trip(d in direction()) {
        let back = Direction::from_bloch(d.bloch()).unwrap();
        let (p, q) = (d.bloch(), back.bloch());
        for k in 0..3 {
            prop_assert!((p[k] - q[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn random_seeds_satisfy_dual_formulas(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_validated_seed(&mut rng);
        prop_assert!(s.is_validated());
        let m = moments(EncodingMode::Antiparallel);
        let (f, g) = fg_functionals(&vector_decompose(&s));
        prop_assert!((information(&s, m).unwrap() - (0.5 + g / 12.0)).abs() < 1e-8);
        prop_assert!((fidelity(&s, m).unwrap() - (0.5 + f / 12.0)).abs() < 1e-8);
        prop_assert!(f <= f_envelope(g).unwrap() + 1e-8);
    }

    #[test]
    fn random_seeds_respect_the_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_validated_seed(&mut rng);
        let p = evaluate(&s, moments(EncodingMode::Antiparallel)).unwrap();
        prop_assert!(p.information <= information_max() + 1e-10);
        prop_assert!(p.information >= (3.0 - 3f64.sqrt()) / 6.0 - 1e-10);
        prop_assert!((0.0..=1.0).contains(&p.disturbance));
        if p.information >= INFORMATION_MIN {
            prop_assert!(p.disturbance >= d_min(p.information).unwrap() - 1e-8);
        }
    }

    #[test]
    fn global_phase_leaves_figures_unchanged(seed in any::<u64>(), phase in 0.0..std::f64::consts::TAU) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_validated_seed(&mut rng);
        let rotated = validate_seed(s.matrix().scale(C64::from_polar(1.0, phase))).unwrap();
        for mode in EncodingMode::ALL {
            let (a, b) = (evaluate(&s, moments(mode)).unwrap(), evaluate(&rotated, moments(mode)).unwrap());
            prop_assert!((a.information - b.information).abs() < 1e-12);
            prop_assert!((a.disturbance - b.disturbance).abs() < 1e-12);
        }
    }

    #[test]
    fn d_min_stays_between_endpoints(i in INFORMATION_MIN..information_max()) {
        let d = d_min(i).unwrap();
        prop_assert!(d >= -1e-15);
        prop_assert!(d <= (3.0 - 3f64.sqrt()) / 6.0 + 1e-12);
        prop_assert!(i + d <= 1.0);
    }
}
