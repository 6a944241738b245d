//! Cached moments and multi-threaded optimizer restarts.
//!
//! Starting points are drawn up front from the caller's generator, so the
//! result does not depend on the number of worker threads.

use std::sync::OnceLock;

use antispin_core::moments::{moment_set, DEFAULT_RESOLUTION};
use antispin_core::tradeoff::{
    information_grid, information_max, optimize_from_start, random_start, select_best, target_goal,
    Goal, SeedForms, INFORMATION_MIN,
};
use antispin_core::{BoundCurve, EncodingMode, MomentSet, OptimizationReport, OptimizerConfig};
use rand::Rng;
use rayon::prelude::*;

pub fn moments(mode: EncodingMode) -> &'static MomentSet {
    static ANTI: OnceLock<MomentSet> = OnceLock::new();
    static PAR: OnceLock<MomentSet> = OnceLock::new();
    let cell = match mode {
        EncodingMode::Antiparallel => &ANTI,
        EncodingMode::Parallel => &PAR,
    };
    cell.get_or_init(|| moment_set(mode, DEFAULT_RESOLUTION).expect("default resolution is valid"))
}

fn run<R: Rng + ?Sized>(
    goal: Goal,
    mode: EncodingMode,
    rng: &mut R,
    config: &OptimizerConfig,
) -> antispin_core::Result<OptimizationReport> {
    let m = moments(mode);
    let forms = SeedForms::new(m);
    let starts: Vec<Vec<f64>> = (0..config.restarts.max(1))
        .map(|_| random_start(rng))
        .collect();
    let outcomes = starts
        .par_iter()
        .map(|s| optimize_from_start(&forms, m, goal, s, config))
        .collect::<antispin_core::Result<Vec<_>>>()?;
    Ok(select_best(outcomes, goal, mode, config).expect("at least one restart"))
}

pub fn feasible_range<R: Rng + ?Sized>(
    mode: EncodingMode,
    rng: &mut R,
    config: &OptimizerConfig,
) -> antispin_core::Result<(f64, f64)> {
    match mode {
        EncodingMode::Antiparallel => Ok((INFORMATION_MIN, information_max())),
        EncodingMode::Parallel => {
            let top = run(Goal::MaximizeInformation, mode, rng, config)?;
            Ok((INFORMATION_MIN, top.achieved_information))
        }
    }
}

pub fn optimize<R: Rng + ?Sized>(
    target: f64,
    range: (f64, f64),
    mode: EncodingMode,
    rng: &mut R,
    config: &OptimizerConfig,
) -> antispin_core::Result<OptimizationReport> {
    run(target_goal(target, range)?, mode, rng, config)
}

/// Optimizer sweep of `n` targets spread evenly over the feasible range.
pub fn optimizer_curve<R: Rng + ?Sized>(
    mode: EncodingMode,
    n: usize,
    rng: &mut R,
    config: &OptimizerConfig,
) -> antispin_core::Result<(BoundCurve, Vec<OptimizationReport>)> {
    if n < 2 {
        return Err(antispin_core::Error::TooFewPoints { found: n, min: 2 });
    }
    let domain = feasible_range(mode, rng, config)?;
    let reports = information_grid(domain.0, domain.1, n)
        .into_iter()
        .map(|t| optimize(t, domain, mode, rng, config))
        .collect::<antispin_core::Result<Vec<_>>>()?;
    let mut points: Vec<_> = reports.iter().map(OptimizationReport::point).collect();
    points.sort_by(|a, b| a.information.total_cmp(&b.information));
    points.dedup_by(|b, a| b.information <= a.information);
    let curve = BoundCurve {
        mode,
        points,
        domain,
        converged: reports.iter().all(|r| r.converged),
    };
    Ok((curve, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use antispin_core::tradeoff::d_min;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moments_are_cached() {
        assert!(std::ptr::eq(
            moments(EncodingMode::Parallel),
            moments(EncodingMode::Parallel)
        ));
        assert_eq!(
            moments(EncodingMode::Antiparallel).mode(),
            EncodingMode::Antiparallel
        );
    }

    #[test]
    fn parallel_restarts_are_deterministic() {
        let config = OptimizerConfig {
            restarts: 4,
            ..OptimizerConfig::default()
        };
        let range = (INFORMATION_MIN, information_max());
        let go = || {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            optimize(0.72, range, EncodingMode::Antiparallel, &mut rng, &config).unwrap()
        };
        let (a, b) = (go(), go());
        assert_eq!(a.achieved_disturbance, b.achieved_disturbance);
        assert_eq!(a.seed.matrix(), b.seed.matrix());
        assert!((a.achieved_disturbance - d_min(0.72).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn infeasible_target_is_a_domain_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let range = (INFORMATION_MIN, information_max());
        let config = OptimizerConfig::default();
        assert!(optimize(0.8, range, EncodingMode::Antiparallel, &mut rng, &config).is_err());
    }
}
