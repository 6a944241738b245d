//! Haar-moment operators `M_jk = ∫ dg ⟨ψ(g)|j⟩ ρ̃(g) ⟨k|ψ(g)⟩`.
//!
//! They fold the average over input directions into four fixed 4×4
//! operators, after which information and disturbance of any covariant
//! instrument are plain traces (see [`crate::evaluator`]).
//!
//! The integrands are trigonometric polynomials of low degree, so a
//! Gauss–Legendre rule in `u = cos(polar)` times a trapezoid rule in the
//! azimuth integrates them to rounding error. For the antiparallel encoding
//!
//! ```text
//! 12·M₀₀ = [[1, 0,  0, 0],
//!           [0, 3, −1, 0],
//!           [0, −1, 1, 0],
//!           [0, 0,  0, 1]]
//! ```

use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::Rng;

use crate::encoding::{encode_ket, haar_sample, spin_state, Direction, EncodingMode};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::stats::RunningStats;

pub const MIN_RESOLUTION: usize = 64;
pub const DEFAULT_RESOLUTION: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet {
    mode: EncodingMode,
    m: [[ComplexMatrix; 2]; 2],
}

impl MomentSet {
    pub fn mode(&self) -> EncodingMode {
        self.mode
    }

    /// `M_jk`, with `j, k ∈ {0, 1}`.
    pub fn get(&self, j: usize, k: usize) -> &ComplexMatrix {
        &self.m[j][k]
    }

    /// `M₀₀ + M₁₁`, the Haar average of the encoded state.
    pub fn average_state(&self) -> ComplexMatrix {
        &self.m[0][0] + &self.m[1][1]
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (alloc::vec::Vec<f64>, alloc::vec::Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // Three-term recurrence for P_n(x) and P_{n-1}(x).
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn zero_table() -> [[ComplexMatrix; 2]; 2] {
    core::array::from_fn(|_| core::array::from_fn(|_| ComplexMatrix::zeros(4, 4)))
}

/// Adds `weight · conj(ψ_j) ψ_k ρ̃` for all `(j, k)`.
fn accumulate(table: &mut [[ComplexMatrix; 2]; 2], d: &Direction, mode: EncodingMode, weight: f64) {
    let psi = spin_state(d);
    let ket = encode_ket(d, mode);
    for j in 0..2 {
        for k in 0..2 {
            let c = psi[j].conj() * psi[k] * weight;
            for r in 0..4 {
                for s in 0..4 {
                    table[j][k][(r, s)] += c * ket[r] * ket[s].conj();
                }
            }
        }
    }
}

/// Product quadrature of the moment operators at the given resolution
/// (number of nodes per angle).
pub fn moment_set(mode: EncodingMode, resolution: usize) -> Result<MomentSet> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::ResolutionTooSmall {
            found: resolution,
            min: MIN_RESOLUTION,
        });
    }
    let (nodes, weights) = gauss_legendre(resolution);
    let mut m = zero_table();
    for (u, wu) in nodes.iter().zip(&weights) {
        let polar = u.clamp(-1.0, 1.0).acos();
        for step in 0..resolution {
            let azimuth = TAU * step as f64 / resolution as f64;
            let d = Direction::new(polar, azimuth)?;
            accumulate(&mut m, &d, mode, wu / 2.0 / resolution as f64);
        }
    }
    Ok(MomentSet { mode, m })
}

/// Monte Carlo estimate of the moment operators.
#[derive(Debug, Clone)]
pub struct MomentEstimate {
    pub mean: [[ComplexMatrix; 2]; 2],
    /// Standard errors, real part in `re` and imaginary part in `im`.
    pub std_error: [[ComplexMatrix; 2]; 2],
    pub samples: usize,
}

impl MomentEstimate {
    /// Largest entrywise deviation from `reference` in units of standard
    /// error, with an absolute floor of `1e-12` on the error.
    pub fn max_sigma_deviation(&self, reference: &MomentSet) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                for r in 0..4 {
                    for s in 0..4 {
                        let diff = self.mean[j][k][(r, s)] - reference.get(j, k)[(r, s)];
                        let se = self.std_error[j][k][(r, s)];
                        worst = worst
                            .max(diff.re.abs() / (se.re + 1e-12))
                            .max(diff.im.abs() / (se.im + 1e-12));
                    }
                }
            }
        }
        worst
    }
}

pub fn monte_carlo_moments<R: Rng + ?Sized>(
    mode: EncodingMode,
    rng: &mut R,
    samples: usize,
) -> Result<MomentEstimate> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let mut stats = [[[(RunningStats::new(), RunningStats::new()); 16]; 2]; 2];
    for _ in 0..samples {
        let d = haar_sample(rng);
        let psi = spin_state(&d);
        let ket = encode_ket(&d, mode);
        for j in 0..2 {
            for k in 0..2 {
                let c = psi[j].conj() * psi[k];
                for r in 0..4 {
                    for s in 0..4 {
                        let v: C64 = c * ket[r] * ket[s].conj();
                        let slot = &mut stats[j][k][4 * r + s];
                        slot.0.push(v.re);
                        slot.1.push(v.im);
                    }
                }
            }
        }
    }
    let build = |f: &dyn Fn(&(RunningStats, RunningStats)) -> C64| {
        core::array::from_fn(|j| {
            core::array::from_fn(|k| {
                ComplexMatrix::from_fn(4, 4, |r, s| f(&stats[j][k][4 * r + s]))
            })
        })
    };
    Ok(MomentEstimate {
        mean: build(&|(re, im)| C64::new(re.mean(), im.mean())),
        std_error: build(&|(re, im)| C64::new(re.std_error(), im.std_error())),
        samples,
    })
}
