//! Multi-start constrained search for minimal-disturbance seeds.
//!
//! Writing the seed as `a = vec(A₀) ∈ ℂ¹⁶` (row-major), every quantity is a
//! Hermitian quadratic form: `I = a†Q_I a`, `F = a†Q_F a`, and the two trace
//! conditions `a†Q₁a = 1`, `a†Q₂a = 3`. Splitting `a = u + iv` turns each
//! form into a real symmetric 32×32 matrix. The problem
//!
//! ```text
//! maximize F  subject to  I = target,  Tr[A₀†A₀𝓜₁] = 1,  Tr[A₀†A₀𝓜₂] = 3
//! ```
//!
//! is solved by an augmented Lagrangian method with a BFGS inner solver,
//! restarted from random trace-preserving seeds. The final iterate is
//! rescaled onto the trace conditions exactly and re-evaluated with the
//! trace formulas.
//!
//! A single Kraus operator per outcome loses nothing here: the problem is
//! linear in the Choi operator of the seed map with three linear equality
//! constraints, and extreme points of such a feasible set have rank one.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::encoding::{subspace_projectors, EncodingMode};
use crate::error::{Error, Result};
use crate::evaluator::{disturbance, information, Provenance, TradeoffPoint};
use crate::instrument::{rescale_to_trace_preserving, validate_seed, KrausSeed};
use crate::linalg::{tensor_product, ComplexMatrix, C64};
use crate::moments::MomentSet;

use super::{information_max, INFORMATION_MIN};

const DIM: usize = 32;
const MAX_PENALTY: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Stop the outer loop once every constraint residual is below this.
    pub constraint_tolerance: f64,
    pub gradient_tolerance: f64,
    /// A restart counts as converged when `|I − target|` is below this.
    pub information_tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_outer: 40,
            max_inner: 300,
            constraint_tolerance: 1e-9,
            gradient_tolerance: 1e-7,
            information_tolerance: 1e-6,
        }
    }
}

/// Real symmetric form `xᵀSx` on `ℝ³²`.
#[derive(Debug, Clone)]
struct RealForm {
    s: Vec<f64>,
}

impl RealForm {
    /// From a Hermitian 16×16 `Q`: `S = [[Re Q, −Im Q], [Im Q, Re Q]]`.
    fn from_hermitian(q: &ComplexMatrix) -> Self {
        let n = DIM / 2;
        let mut s = vec![0.0; DIM * DIM];
        for i in 0..n {
            for j in 0..n {
                let z = q[(i, j)];
                s[i * DIM + j] = z.re;
                s[i * DIM + n + j] = -z.im;
                s[(n + i) * DIM + j] = z.im;
                s[(n + i) * DIM + n + j] = z.re;
            }
        }
        // Symmetrize against rounding in Q.
        for i in 0..DIM {
            for j in i + 1..DIM {
                let avg = 0.5 * (s[i * DIM + j] + s[j * DIM + i]);
                s[i * DIM + j] = avg;
                s[j * DIM + i] = avg;
            }
        }
        Self { s }
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.s[i * DIM..(i + 1) * DIM]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        let mut sx = [0.0; DIM];
        self.apply(x, &mut sx);
        dot(x, &sx)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The four quadratic forms of the seed problem for one encoding.
#[derive(Debug, Clone)]
pub struct SeedForms {
    mode: EncodingMode,
    information: RealForm,
    fidelity: RealForm,
    singlet: RealForm,
    triplet: RealForm,
}

/// `Tr[A†A K] = a† (𝟙 ⊗ Kᵀ) a` for row-major `a`.
fn effect_form(k: &ComplexMatrix) -> ComplexMatrix {
    tensor_product(&ComplexMatrix::identity(4), &k.transpose())
}

/// `Σ_{ijk} ⟨ji|A M_jk A†|ki⟩ = a† Q a` with
/// `Q[(2k+i, t), (2j+i, s)] = (M_jk)_{st}`.
fn fidelity_form(moments: &MomentSet) -> ComplexMatrix {
    let mut q = ComplexMatrix::zeros(16, 16);
    for j in 0..2 {
        for k in 0..2 {
            let m = moments.get(j, k);
            for i in 0..2 {
                let (row_k, row_j) = (2 * k + i, 2 * j + i);
                for s in 0..4 {
                    for t in 0..4 {
                        q[(4 * row_k + t, 4 * row_j + s)] += m[(s, t)];
                    }
                }
            }
        }
    }
    q
}

impl SeedForms {
    pub fn new(moments: &MomentSet) -> Self {
        let (m1, m2) = subspace_projectors();
        Self {
            mode: moments.mode(),
            information: RealForm::from_hermitian(&effect_form(moments.get(0, 0))),
            fidelity: RealForm::from_hermitian(&fidelity_form(moments)),
            singlet: RealForm::from_hermitian(&effect_form(&m1)),
            triplet: RealForm::from_hermitian(&effect_form(&m2)),
        }
    }

    pub fn mode(&self) -> EncodingMode {
        self.mode
    }

    /// `(I, F, Tr[A†A𝓜₁], Tr[A†A𝓜₂])` of a seed.
    pub fn evaluate(&self, a0: &ComplexMatrix) -> (f64, f64, f64, f64) {
        let x = to_real(a0);
        (
            self.information.value(&x),
            self.fidelity.value(&x),
            self.singlet.value(&x),
            self.triplet.value(&x),
        )
    }
}

fn to_real(a: &ComplexMatrix) -> Vec<f64> {
    let mut x = vec![0.0; DIM];
    for (k, z) in a.entries().iter().enumerate() {
        x[k] = z.re;
        x[16 + k] = z.im;
    }
    x
}

fn to_matrix(x: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |r, c| C64::new(x[4 * r + c], x[16 + 4 * r + c]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Goal {
    /// Maximize fidelity at fixed information.
    MinimizeDisturbance { target: f64 },
    /// Maximize information with no disturbance constraint.
    MaximizeInformation,
}

#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub seed: KrausSeed,
    pub information: f64,
    pub disturbance: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct OptimizationReport {
    pub target_information: f64,
    pub achieved_information: f64,
    pub achieved_disturbance: f64,
    pub seed: KrausSeed,
    pub iterations: usize,
    pub converged: bool,
    pub mode: EncodingMode,
}

impl OptimizationReport {
    pub fn point(&self) -> TradeoffPoint {
        TradeoffPoint {
            information: self.achieved_information,
            disturbance: self.achieved_disturbance,
            mode: self.mode,
            provenance: Provenance::Optimizer,
        }
    }
}

/// Random starting point: uniform complex entries, rescaled onto the trace
/// conditions.
pub fn random_start<R: Rng + ?Sized>(rng: &mut R) -> Vec<f64> {
    loop {
        let x = ComplexMatrix::from_fn(4, 4, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        if let Some(a) = rescale_to_trace_preserving(&x) {
            return to_real(&a);
        }
    }
}

struct Lagrangian<'a> {
    objective: &'a RealForm,
    constraints: Vec<(&'a RealForm, f64)>,
    multipliers: Vec<f64>,
    penalty: f64,
}

impl Lagrangian<'_> {
    fn residuals(&self, x: &[f64]) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|(form, rhs)| form.value(x) - rhs)
            .collect()
    }

    /// Value and gradient of `−obj + Σ λc + (ρ/2)Σc²`.
    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let mut buf = [0.0; DIM];
        self.objective.apply(x, &mut buf);
        let mut value = -dot(x, &buf);
        for (g, b) in grad.iter_mut().zip(&buf) {
            *g = -2.0 * b;
        }
        for ((form, rhs), lambda) in self.constraints.iter().zip(&self.multipliers) {
            form.apply(x, &mut buf);
            let c = dot(x, &buf) - rhs;
            value += lambda * c + 0.5 * self.penalty * c * c;
            let w = 2.0 * (lambda + self.penalty * c);
            for (g, b) in grad.iter_mut().zip(&buf) {
                *g += w * b;
            }
        }
        value
    }
}

/// BFGS with Armijo backtracking. Returns the number of iterations taken.
fn bfgs(f: &Lagrangian<'_>, x: &mut [f64], max_iter: usize, gtol: f64) -> usize {
    let n = x.len();
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    let mut g = vec![0.0; n];
    let mut fx = f.eval(x, &mut g);
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut first = true;
    for iter in 0..max_iter {
        if g.iter().fold(0.0f64, |m, v| m.max(v.abs())) <= gtol {
            return iter;
        }
        for i in 0..n {
            p[i] = -dot(&h[i * n..(i + 1) * n], &g);
        }
        let mut slope = dot(&p, &g);
        if slope >= 0.0 {
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] = if i == j { 1.0 } else { 0.0 };
                }
                p[i] = -g[i];
            }
            slope = -dot(&g, &g);
        }
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            for i in 0..n {
                x_new[i] = x[i] + step * p[i];
            }
            let f_new = f.eval(&x_new, &mut g_new);
            if f_new <= fx + 1e-4 * step * slope {
                fx = f_new;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return iter;
        }
        let s: Vec<f64> = (0..n).map(|i| x_new[i] - x[i]).collect();
        let y: Vec<f64> = (0..n).map(|i| g_new[i] - g[i]).collect();
        x.copy_from_slice(&x_new);
        g.copy_from_slice(&g_new);
        let sy = dot(&s, &y);
        if sy <= 1e-300 {
            continue;
        }
        if first {
            let scale = sy / dot(&y, &y);
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] = if i == j { scale } else { 0.0 };
                }
            }
            first = false;
        }
        // H ← (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ
        let rho = 1.0 / sy;
        let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], &y)).collect();
        let yhy = dot(&y, &hy);
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] +=
                    -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
            }
        }
    }
    max_iter
}

/// One augmented-Lagrangian run from `start`.
pub fn optimize_from_start(
    forms: &SeedForms,
    moments: &MomentSet,
    goal: Goal,
    start: &[f64],
    config: &OptimizerConfig,
) -> Result<RestartOutcome> {
    let mut constraints = vec![(&forms.singlet, 1.0), (&forms.triplet, 3.0)];
    let objective = match goal {
        Goal::MinimizeDisturbance { target } => {
            constraints.push((&forms.information, target));
            &forms.fidelity
        }
        Goal::MaximizeInformation => &forms.information,
    };
    let mut lagrangian = Lagrangian {
        objective,
        multipliers: vec![0.0; constraints.len()],
        constraints,
        penalty: 10.0,
    };
    let mut x = start.to_vec();
    let mut iterations = 0;
    let mut previous = f64::INFINITY;
    for _ in 0..config.max_outer {
        iterations += bfgs(
            &lagrangian,
            &mut x,
            config.max_inner,
            config.gradient_tolerance,
        );
        let residuals = lagrangian.residuals(&x);
        let worst = residuals.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if worst <= config.constraint_tolerance {
            break;
        }
        for (lambda, c) in lagrangian.multipliers.iter_mut().zip(&residuals) {
            *lambda += lagrangian.penalty * c;
        }
        if worst > 0.25 * previous {
            if lagrangian.penalty >= MAX_PENALTY && worst > 0.9 * previous {
                // Stalled: typical where the information constraint is
                // degenerate, at the top of the feasible range.
                break;
            }
            lagrangian.penalty = (lagrangian.penalty * 10.0).min(MAX_PENALTY);
        }
        previous = worst;
    }
    let a0 = rescale_to_trace_preserving(&to_matrix(&x)).unwrap_or_else(|| to_matrix(start));
    let seed = validate_seed(a0)?;
    Ok(RestartOutcome {
        information: information(&seed, moments)?,
        disturbance: disturbance(&seed, moments)?,
        seed,
        iterations,
    })
}

/// Best restart: among those within the information tolerance of the
/// target, the least disturbance; otherwise the one closest to the target.
pub fn select_best(
    outcomes: Vec<RestartOutcome>,
    goal: Goal,
    mode: EncodingMode,
    config: &OptimizerConfig,
) -> Option<OptimizationReport> {
    let iterations = outcomes.iter().map(|o| o.iterations).sum();
    let (best, target, converged) = match goal {
        Goal::MinimizeDisturbance { target } => {
            let miss = |o: &RestartOutcome| (o.information - target).abs();
            let hit = outcomes
                .iter()
                .filter(|o| miss(o) <= config.information_tolerance)
                .min_by(|a, b| a.disturbance.total_cmp(&b.disturbance));
            match hit {
                Some(o) => (o.clone(), target, true),
                None => (
                    outcomes
                        .iter()
                        .min_by(|a, b| miss(a).total_cmp(&miss(b)))?
                        .clone(),
                    target,
                    false,
                ),
            }
        }
        Goal::MaximizeInformation => {
            let o = outcomes
                .iter()
                .max_by(|a, b| a.information.total_cmp(&b.information))?;
            (o.clone(), o.information, true)
        }
    };
    Some(OptimizationReport {
        target_information: target,
        achieved_information: best.information,
        achieved_disturbance: best.disturbance,
        seed: best.seed,
        iterations,
        converged,
        mode,
    })
}

fn run<R: Rng + ?Sized>(
    goal: Goal,
    moments: &MomentSet,
    rng: &mut R,
    config: &OptimizerConfig,
) -> Result<OptimizationReport> {
    let forms = SeedForms::new(moments);
    let restarts = config.restarts.max(1);
    let starts: Vec<Vec<f64>> = (0..restarts).map(|_| random_start(rng)).collect();
    let outcomes = starts
        .iter()
        .map(|s| optimize_from_start(&forms, moments, goal, s, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(select_best(outcomes, goal, moments.mode(), config).expect("at least one restart"))
}

/// Largest information reachable by any trace-preserving seed.
pub fn maximize_information<R: Rng + ?Sized>(
    moments: &MomentSet,
    rng: &mut R,
    config: &OptimizerConfig,
) -> Result<OptimizationReport> {
    run(Goal::MaximizeInformation, moments, rng, config)
}

/// Information levels on which the tradeoff is non-trivial: from `2/3`
/// (reachable without disturbing the first spin) up to the largest
/// reachable information. Known in closed form for antiparallel spins;
/// found by [`maximize_information`] for parallel spins.
pub fn feasible_range<R: Rng + ?Sized>(
    moments: &MomentSet,
    rng: &mut R,
    config: &OptimizerConfig,
) -> Result<(f64, f64)> {
    match moments.mode() {
        EncodingMode::Antiparallel => Ok((INFORMATION_MIN, information_max())),
        EncodingMode::Parallel => {
            let top = maximize_information(moments, rng, config)?.achieved_information;
            Ok((INFORMATION_MIN, top))
        }
    }
}

/// The disturbance goal for `target`, which must lie in `range` (as
/// returned by [`feasible_range`]) up to rounding.
pub fn target_goal(target: f64, range: (f64, f64)) -> Result<Goal> {
    if target.is_nan() || target < range.0 - 1e-12 || target > range.1 + 1e-12 {
        return Err(Error::OutOfDomain {
            name: "target information",
            value: target,
            lo: range.0,
            hi: range.1,
        });
    }
    Ok(Goal::MinimizeDisturbance {
        target: target.clamp(range.0, range.1),
    })
}

/// Minimal disturbance at `target` within `range`.
pub fn optimize_in_range<R: Rng + ?Sized>(
    target: f64,
    range: (f64, f64),
    moments: &MomentSet,
    rng: &mut R,
    config: &OptimizerConfig,
) -> Result<OptimizationReport> {
    run(target_goal(target, range)?, moments, rng, config)
}

pub fn optimize<R: Rng + ?Sized>(
    target: f64,
    moments: &MomentSet,
    rng: &mut R,
    config: &OptimizerConfig,
) -> Result<OptimizationReport> {
    let range = feasible_range(moments, rng, config)?;
    optimize_in_range(target, range, moments, rng, config)
}
