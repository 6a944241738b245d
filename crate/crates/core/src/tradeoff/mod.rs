//! The optimal information-disturbance bound and the measurements that
//! reach it.
//!
//! For the antiparallel encoding every covariant seed satisfies
//! `f ≤ g + √(24 − 2g²)` on `g ∈ [2, 2√3]`, equivalently
//!
//! ```text
//! D ≥ d_min(I) = 1 − I − √(−1/3 + 2I − 2I²),   I ∈ [2/3, (3+√3)/6]
//! ```
//!
//! and the one-parameter family
//! `A₀(θ) = |00⟩⟨Ψ⁻| + √3 cosθ |00⟩⟨Ψ⁺| + √3 sinθ |10⟩⟨11|`,
//! `θ ∈ [0, arccos(1/√3)]`, saturates it with
//! `I(θ) = 1/2 + (√3/6) cosθ` and `D(θ) = 1/2 − (√3/6) cosθ − (√6/6) sinθ`.
//!
//! No closed form is used for the parallel encoding; its curve comes from
//! [`optimizer`].

mod optimizer;

pub use optimizer::{
    feasible_range, maximize_information, optimize, optimize_from_start, optimize_in_range,
    random_start, select_best, target_goal, Goal, OptimizationReport, OptimizerConfig,
    RestartOutcome, SeedForms,
};

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::Rng;

use crate::encoding::{psi_minus, psi_plus, EncodingMode};
use crate::error::{Error, Result};
use crate::evaluator::{Provenance, TradeoffPoint};
use crate::instrument::{validate_seed, KrausSeed};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};
use crate::moments::MomentSet;

/// Slack on domain endpoints, so that endpoints computed in floating point
/// are accepted.
const DOMAIN_SLACK: f64 = 1e-12;

/// Least information at which the bound is informative (`D = 0` there).
pub const INFORMATION_MIN: f64 = 2.0 / 3.0;

/// `(3 + √3)/6`, the largest information reachable with antiparallel spins.
pub fn information_max() -> f64 {
    (3.0 + 3f64.sqrt()) / 6.0
}

/// `arccos(1/√3)`, the end of the optimal family where `D = 0`.
pub fn theta_max() -> f64 {
    (1.0 / 3f64.sqrt()).acos()
}

fn check_domain(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_nan() || value < lo - DOMAIN_SLACK || value > hi + DOMAIN_SLACK {
        return Err(Error::OutOfDomain {
            name,
            value,
            lo,
            hi,
        });
    }
    Ok(value.clamp(lo, hi))
}

/// `g + √(24 − 2g²)` on `g ∈ [2, 2√3]`.
pub fn f_max(g: f64) -> Result<f64> {
    let top = 2.0 * 3f64.sqrt();
    let g = check_domain("g", g, 2.0, top)?;
    // 24 − 2g² in factored form, exactly zero at the top end.
    Ok(g + (2.0 * (top - g) * (top + g)).max(0.0).sqrt())
}

/// Largest `f` at a given `g` over all trace-preserving seeds: `f_max(g)`
/// above `g = 2`, and `6` (perfect fidelity) below it, where leaving the
/// first spin untouched is already compatible with the information level.
pub fn f_envelope(g: f64) -> Result<f64> {
    let limit = 2.0 * 3f64.sqrt();
    let g = check_domain("g", g, -limit, limit)?;
    if g <= 2.0 {
        Ok(6.0)
    } else {
        f_max(g)
    }
}

/// `1 − I − √(−1/3 + 2I − 2I²)` on `I ∈ [2/3, (3+√3)/6]`.
pub fn d_min(information: f64) -> Result<f64> {
    let top = information_max();
    let i = check_domain("information", information, INFORMATION_MIN, top)?;
    // −1/3 + 2I − 2I² = 2(I − I₋)(I₊ − I)
    let bottom = (3.0 - 3f64.sqrt()) / 6.0;
    Ok(1.0 - i - (2.0 * (i - bottom) * (top - i)).max(0.0).sqrt())
}

fn mdm_matrix(theta: f64, plus_coefficient: f64) -> ComplexMatrix {
    let e00 = ComplexVector::basis(4, 0);
    let e10 = ComplexVector::basis(4, 2);
    let e11 = ComplexVector::basis(4, 3);
    let (s, c) = theta.sin_cos();
    let singlet = e00.outer(&psi_minus());
    let plus = e00
        .outer(&psi_plus())
        .scale(C64::new(plus_coefficient * c, 0.0));
    let flip = e10.outer(&e11).scale(C64::new(3f64.sqrt() * s, 0.0));
    &(&singlet + &plus) + &flip
}

/// Member `A₀(θ)` of the optimal family, `θ ∈ [0, arccos(1/√3)]`.
pub fn mdm_seed(theta: f64) -> Result<KrausSeed> {
    let theta = check_domain("theta", theta, 0.0, theta_max())?;
    validate_seed(mdm_matrix(theta, 3f64.sqrt()))
}

/// The family with `(√6/2) cosθ` on `|00⟩⟨Ψ⁺|` as originally printed. This
/// breaks trace preservation (triplet weight `3/2·cos²θ + 3 sin²θ`) and is
/// kept only to document the correction.
pub fn literal_mdm_matrix(theta: f64) -> ComplexMatrix {
    mdm_matrix(theta, 6f64.sqrt() / 2.0)
}

/// Distance of `(information, disturbance)` from the bound curve, to first
/// order, via the implicit form `(1 − I − D)² = −1/3 + 2I − 2I²`.
///
/// Unlike `|D − d_min(I)|` this stays well conditioned at the top end,
/// where `d_min` has infinite slope. Points on the other branch
/// (`I + D > 1`) are measured against the conic as well, so callers
/// interested in saturation should also check `I + D ≤ 1`.
pub fn bound_distance(information: f64, disturbance: f64) -> f64 {
    let (i, d) = (information, disturbance);
    let gap = 1.0 - i - d;
    let residual = gap * gap - (-1.0 / 3.0 + 2.0 * i - 2.0 * i * i);
    let grad_i = -2.0 * gap - 2.0 + 4.0 * i;
    let grad_d = -2.0 * gap;
    residual.abs() / grad_i.hypot(grad_d)
}

/// Closed-form `(I(θ), D(θ))` of the optimal family.
pub fn mdm_point(theta: f64) -> Result<TradeoffPoint> {
    let theta = check_domain("theta", theta, 0.0, theta_max())?;
    let (s, c) = theta.sin_cos();
    Ok(TradeoffPoint {
        information: 0.5 + 3f64.sqrt() / 6.0 * c,
        disturbance: 0.5 - 3f64.sqrt() / 6.0 * c - 6f64.sqrt() / 6.0 * s,
        mode: EncodingMode::Antiparallel,
        provenance: Provenance::Analytic,
    })
}

/// `(D_par − D_anti)/D_par`, the relative disturbance saved by sending
/// antiparallel spins at equal information. `None` when `D_par` is too
/// small to divide by.
pub fn disturbance_reduction(parallel: f64, antiparallel: f64) -> Option<f64> {
    (parallel > 1e-9).then(|| (parallel - antiparallel) / parallel)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub mode: EncodingMode,
    /// Sorted by strictly increasing information.
    pub points: Vec<TradeoffPoint>,
    pub domain: (f64, f64),
    /// False when some optimizer target was not reached.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub enum CurveMethod<'a> {
    /// Closed form, antiparallel only.
    Analytic,
    Optimizer {
        moments: &'a MomentSet,
        config: &'a OptimizerConfig,
    },
}

/// `n` evenly spaced information levels from `lo` to `hi`.
pub fn information_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            if k + 1 == n {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

pub fn bound_curve<R: Rng + ?Sized>(
    mode: EncodingMode,
    n_points: usize,
    method: CurveMethod<'_>,
    rng: &mut R,
) -> Result<BoundCurve> {
    if n_points < 2 {
        return Err(Error::TooFewPoints {
            found: n_points,
            min: 2,
        });
    }
    match method {
        CurveMethod::Analytic => {
            if mode != EncodingMode::Antiparallel {
                return Err(Error::AnalyticUnavailable);
            }
            let domain = (INFORMATION_MIN, information_max());
            let points = information_grid(domain.0, domain.1, n_points)
                .into_iter()
                .map(|i| {
                    Ok(TradeoffPoint {
                        information: i,
                        disturbance: d_min(i)?,
                        mode,
                        provenance: Provenance::Bound,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(BoundCurve {
                mode,
                points,
                domain,
                converged: true,
            })
        }
        CurveMethod::Optimizer { moments, config } => {
            if moments.mode() != mode {
                return Err(Error::ModeMismatch {
                    expected: mode,
                    found: moments.mode(),
                });
            }
            let domain = feasible_range(moments, rng, config)?;
            let mut points = Vec::with_capacity(n_points);
            let mut converged = true;
            for target in information_grid(domain.0, domain.1, n_points) {
                let report = optimize_in_range(target, domain, moments, rng, config)?;
                converged &= report.converged;
                points.push(report.point());
            }
            points.sort_by(|a, b| a.information.total_cmp(&b.information));
            points.dedup_by(|b, a| b.information <= a.information);
            Ok(BoundCurve {
                mode,
                points,
                domain,
                converged,
            })
        }
    }
}
