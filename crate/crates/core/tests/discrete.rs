use antispin_core::evaluator::{evaluate, monte_carlo_evaluate};
use antispin_core::instrument::{random_validated_seed, twirl};
use antispin_core::linalg::frobenius_distance;
use antispin_core::moments::{moment_set, DEFAULT_RESOLUTION};
use antispin_core::povm4::{
    build_discrete, build_discrete_with, discrete_twirl, tetrahedral_unitaries, Realization,
    COMPLETENESS_TARGET,
};
use antispin_core::tradeoff::{mdm_seed, theta_max};
use antispin_core::EncodingMode;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn tetrahedral_set_reproduces_the_family_on_a_grid() {
    let m = moment_set(EncodingMode::Antiparallel, DEFAULT_RESOLUTION).unwrap();
    let us = tetrahedral_unitaries();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..10 {
        let theta = theta_max() * k as f64 / 9.0;
        let seed = mdm_seed(theta).unwrap();
        let x = seed.effect();
        assert!(frobenius_distance(&discrete_twirl(&us, &x), &twirl(&x)).unwrap() < 1e-10);
        let povm = build_discrete(&seed).unwrap();
        assert!(povm.completeness_residual() <= COMPLETENESS_TARGET);
        let exact = evaluate(&seed, &m).unwrap();
        let mc = monte_carlo_evaluate(&povm.instrument(), m.mode(), &mut rng, 1_000_000).unwrap();
        assert!(
            mc.agrees_with(exact.information, exact.disturbance, 3.0),
            "θ = {theta}: {mc:?} vs {exact:?}"
        );
    }
}

#[test]
fn group_realization_matches_trace_formulas_on_random_seeds() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for mode in EncodingMode::ALL {
        let m = moment_set(mode, DEFAULT_RESOLUTION).unwrap();
        for _ in 0..50 {
            let seed = random_validated_seed(&mut rng);
            let povm = build_discrete_with(&seed, Realization::TetrahedralGroup).unwrap();
            assert!(povm.completeness_residual() <= COMPLETENESS_TARGET);
            let exact = evaluate(&seed, &m).unwrap();
            let mc = monte_carlo_evaluate(&povm.instrument(), mode, &mut rng, 20_000).unwrap();
            // 200 comparisons in total; 4σ keeps the family-wise false alarm
            // rate below 1%.
            assert!(
                mc.agrees_with(exact.information, exact.disturbance, 4.0),
                "{mode}: {mc:?} vs {exact:?}"
            );
        }
    }
}
