//! Maximum quantum success probability of the game.
//!
//! With `ρ_x0 = (I + b_x·σ)/2`, the `a = 1` states fixed by parity
//! concealment and `E_b = α_b (I + v_b·σ)/2`, the success probability is
//!
//! ```text
//! P = 1/3 + (1/12) Σ_b α_b (b_b − b_{b⊕1}) · v_b
//! ```
//!
//! which is bilinear in the preparation and measurement Bloch vectors. The
//! optimizer alternates exact best responses on each side:
//!
//! * measurement step: maximize `Σ α_b d_b·v_b` over `|v_b| ≤ 1`,
//!   `Σ α_b v_b = 0`. The Lagrange multiplier `λ` of the completeness
//!   constraint minimizes `Σ α_b |d_b − λ|` (a weighted geometric median) and
//!   `v_b = (d_b − λ)/|d_b − λ|`.
//! * preparation step: the objective is linear in `(b_0, b_1, b_2)`; it is
//!   raised by projected ascent on the intersection of the six Bloch balls
//!   (three free states, three derived ones), projecting with Dykstra's
//!   algorithm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{complete_preparations, derived_bloch, GameStrategy};
use crate::qubit::{DensityState, Povm, Vec3};
use crate::scalar::Real;
use crate::seed::derive_seed;

/// Outcome weights `α_b` of `E_b = α_b π_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaTriple<T>([T; 3]);

impl<T: Real> AlphaTriple<T> {
    pub fn new(alpha: [T; 3]) -> Result<Self> {
        let tol = T::lit(1e-12);
        let sum = alpha[0] + alpha[1] + alpha[2];
        let in_range = alpha
            .iter()
            .all(|&a| a >= -tol && a <= T::one() + tol && a.is_finite());
        if !in_range || (sum - T::lit(2.0)).abs() > tol {
            return Err(Error::InvalidAlpha {
                alpha: alpha.map(Real::to_f64_lossy),
            });
        }
        Ok(Self(alpha.map(|a| a.max(T::zero()).min(T::one()))))
    }

    /// `(α₀, (2−α₀)/2, (2−α₀)/2)`, the slice plotted against `α₀`.
    pub fn from_alpha0(alpha0: T) -> Result<Self> {
        let rest = (T::lit(2.0) - alpha0) / T::lit(2.0);
        Self::new([alpha0, rest, rest])
    }

    pub fn trine() -> Self {
        let t = T::lit(2.0 / 3.0);
        Self([t; 3])
    }

    pub fn values(&self) -> [T; 3] {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig<T> {
    pub restarts: usize,
    pub seed: u64,
    /// Stop when one alternation round gains less than this.
    pub tol: T,
    pub max_rounds: usize,
}

impl<T: Real> Default for OptimizerConfig<T> {
    fn default() -> Self {
        Self {
            restarts: 50,
            seed: 0,
            tol: T::lit(1e-10),
            max_rounds: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult<T> {
    pub value: T,
    pub strategy: GameStrategy<T>,
    /// Measurement Bloch vectors `v_b` of the best strategy (`E_b = α_b(I + v_b·σ)/2`).
    pub povm_axes: [Vec3<T>; 3],
    pub restarts_used: usize,
    /// True when the best restart met the gain tolerance before `max_rounds`.
    pub converged: bool,
    /// Spread (max − min) of the per-restart values.
    pub best_gap: T,
}

/// The trine construction: `ρ_x0` at Bloch angles `2πx/3`, antipodal `ρ_x1`,
/// and `E_b = (2/3)(I + B_b)/2` with `B_b = (A_b − A_{b⊕1})/√3`, i.e.
/// `B_b = cosθ_b σ_z − sinθ_b σ_x` at `θ_b = (2π/3)(1/4 − b)`.
///
/// Outcome 0 sits at Bloch angle −30°; outcomes 1 and 2 follow clockwise so
/// that each `B_b` points along `A_b − A_{b⊕1}`.
pub fn analytic_optimal_strategy<T: Real>() -> GameStrategy<T> {
    let two_pi_3 = T::lit(2.0) * T::PI() / T::lit(3.0);
    let rho_x0: [DensityState<T>; 3] =
        std::array::from_fn(|x| DensityState::pure_xz(two_pi_3 * T::from_usize_lossy(x)));
    let preps = complete_preparations(&rho_x0, T::tol(1e-9))
        .expect("trine completion is a valid set of pure states");
    let axes: [Vec3<T>; 3] = std::array::from_fn(|b| {
        let theta = two_pi_3 * (T::lit(0.25) - T::from_usize_lossy(b));
        Vec3::new(-theta.sin(), T::zero(), theta.cos())
    });
    let povm = Povm::from_weighted_axes(&AlphaTriple::<T>::trine().values(), &axes);
    GameStrategy::new(preps, povm, T::tol(1e-9)).expect("trine POVM is complete")
}

/// `(1/3)(1 + √3/2)`.
pub fn quantum_ceiling<T: Real>() -> T {
    (T::one() + T::lit(3.0).sqrt() / T::lit(2.0)) / T::lit(3.0)
}

fn objective<T: Real>(alpha: &[T; 3], preps: &[Vec3<T>; 3], axes: &[Vec3<T>; 3]) -> T {
    let mut s = T::zero();
    for b in 0..3 {
        s = s + alpha[b] * (preps[b] - preps[(b + 1) % 3]).dot(&axes[b]);
    }
    T::one() / T::lit(3.0) + s / T::lit(12.0)
}

/// Best measurement axes for fixed directions `d_b`:
/// `argmax Σ α_b d_b·v_b` over `|v_b| ≤ 1`, `Σ α_b v_b = 0`.
pub fn best_response_axes<T: Real>(alpha: &[T; 3], d: &[Vec3<T>; 3]) -> [Vec3<T>; 3] {
    let eps = T::lit(1e-14);
    let active: Vec<usize> = (0..3).filter(|&b| alpha[b] > eps).collect();
    let mut axes = [Vec3::zero(); 3];

    // A data point is the median when the pull of the others does not exceed
    // the weight sitting on it.
    for &b in &active {
        let mut pull = Vec3::zero();
        let mut group_weight = T::zero();
        let mut group = Vec::new();
        for &c in &active {
            let offset = d[c] - d[b];
            if offset.norm() > eps {
                let u = offset.normalized().unwrap();
                axes[c] = u;
                pull += u.scale(alpha[c]);
            } else {
                group_weight = group_weight + alpha[c];
                group.push(c);
            }
        }
        if pull.norm() <= group_weight * (T::one() + T::lit(1e-12)) {
            let shared = pull.scale(-group_weight.recip());
            for c in group {
                axes[c] = shared;
            }
            return finalize_axes(alpha, axes);
        }
    }
    axes = [Vec3::zero(); 3];

    // Weiszfeld iteration from the weighted centroid.
    let total: T = active.iter().map(|&b| alpha[b]).sum();
    let mut lambda: Vec3<T> = active
        .iter()
        .map(|&b| d[b].scale(alpha[b] / total))
        .sum();
    for _ in 0..20_000 {
        let mut num = Vec3::zero();
        let mut den = T::zero();
        for &b in &active {
            let dist = (d[b] - lambda).norm().max(T::lit(1e-300).max(T::min_positive_value()));
            num += d[b].scale(alpha[b] / dist);
            den = den + alpha[b] / dist;
        }
        let next = num.scale(den.recip());
        let step = (next - lambda).norm();
        lambda = next;
        if step <= T::epsilon() * (T::one() + lambda.norm()) {
            break;
        }
    }
    for &b in &active {
        axes[b] = (d[b] - lambda).normalized().unwrap_or(Vec3::zero());
    }
    finalize_axes(alpha, axes)
}

/// Projects onto `Σ α_b v_b = 0`, then scales uniformly into the unit ball.
fn finalize_axes<T: Real>(alpha: &[T; 3], mut axes: [Vec3<T>; 3]) -> [Vec3<T>; 3] {
    let residual: Vec3<T> = (0..3).map(|b| axes[b].scale(alpha[b])).sum();
    let norm2: T = alpha.iter().map(|&a| a * a).sum();
    if norm2 > T::zero() {
        for b in 0..3 {
            axes[b] = axes[b] - residual.scale(alpha[b] / norm2);
        }
    }
    let longest = axes.iter().map(Vec3::norm).fold(T::one(), T::max);
    axes.map(|v| v.scale(longest.recip()))
}

/// Coefficients of the preparation vectors: `∂P/∂b_x ∝ α_x v_x − α_{x⊖1} v_{x⊖1}`.
fn prep_gradient<T: Real>(alpha: &[T; 3], axes: &[Vec3<T>; 3]) -> [Vec3<T>; 3] {
    std::array::from_fn(|x| axes[x].scale(alpha[x]) - axes[(x + 2) % 3].scale(alpha[(x + 2) % 3]))
}

/// Weights of the free vectors in each of the six Bloch-ball constraints.
fn ball_constraints<T: Real>() -> [[T; 3]; 6] {
    let two_thirds = T::lit(2.0 / 3.0);
    std::array::from_fn(|k| {
        std::array::from_fn(|x| {
            if k < 3 {
                if x == k {
                    T::one()
                } else {
                    T::zero()
                }
            } else if x == (k - 3) {
                two_thirds - T::one()
            } else {
                two_thirds
            }
        })
    })
}

/// Euclidean projection onto the set where all six Bloch vectors
/// (`b_x` and the derived `ρ_x1` vectors) lie in the unit ball.
fn project_feasible<T: Real>(z: &[Vec3<T>; 3]) -> [Vec3<T>; 3] {
    // Each constraint is |Σ_x w_x b_x| ≤ 1 with Σ_x w_x² = 1, so its
    // projection moves along w by the excess.
    let sets = ball_constraints::<T>();
    let mut x = *z;
    let mut increments = [[Vec3::<T>::zero(); 3]; 6];
    for _ in 0..200 {
        let mut change = T::zero();
        for (k, w) in sets.iter().enumerate() {
            let y: [Vec3<T>; 3] = std::array::from_fn(|i| x[i] + increments[k][i]);
            let u: Vec3<T> = (0..3).map(|i| y[i].scale(w[i])).sum();
            let excess = u - u.clip_to_ball(T::one());
            let projected: [Vec3<T>; 3] = std::array::from_fn(|i| y[i] - excess.scale(w[i]));
            for i in 0..3 {
                increments[k][i] = y[i] - projected[i];
                change = change.max((projected[i] - x[i]).max_abs());
                x[i] = projected[i];
            }
        }
        if change <= T::lit(1e-13) {
            break;
        }
    }
    x
}

/// Scales all free vectors so every derived state is inside the ball.
fn scale_into_feasible<T: Real>(b: &[Vec3<T>; 3]) -> [Vec3<T>; 3] {
    let derived = derived_bloch(b);
    let longest = b
        .iter()
        .chain(derived.iter())
        .map(Vec3::norm)
        .fold(T::one(), T::max);
    b.map(|v| v.scale(longest.recip()))
}

fn random_in_ball<T: Real, R: Rng>(rng: &mut R) -> Vec3<T> {
    loop {
        let v = Vec3::new(
            T::lit(rng.gen_range(-1.0..1.0)),
            T::lit(rng.gen_range(-1.0..1.0)),
            T::lit(rng.gen_range(-1.0..1.0)),
        );
        if v.norm() <= T::one() {
            return v;
        }
    }
}

struct RestartOutcome<T> {
    value: T,
    preps: [Vec3<T>; 3],
    axes: [Vec3<T>; 3],
    converged: bool,
}

fn run_restart<T: Real>(alpha: &[T; 3], seed: u64, tol: T, max_rounds: usize) -> RestartOutcome<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut preps = scale_into_feasible(&std::array::from_fn(|_| random_in_ball::<T, _>(&mut rng)));
    let diffs = |p: &[Vec3<T>; 3]| -> [Vec3<T>; 3] { std::array::from_fn(|b| p[b] - p[(b + 1) % 3]) };
    let mut axes = best_response_axes(alpha, &diffs(&preps));
    let mut value = objective(alpha, &preps, &axes);
    let mut converged = false;
    let step = T::lit(0.5);
    let mut last_gain = T::infinity();
    for _ in 0..max_rounds {
        let grad = prep_gradient(alpha, &axes);
        let mut next = preps;
        for _ in 0..4 {
            let moved: [Vec3<T>; 3] = std::array::from_fn(|x| next[x] + grad[x].scale(step));
            next = project_feasible(&moved);
        }
        let next = scale_into_feasible(&next);
        let next_axes = best_response_axes(alpha, &diffs(&next));
        let next_value = objective(alpha, &next, &next_axes);
        if next_value >= value {
            let gain = next_value - value;
            preps = next;
            axes = next_axes;
            value = next_value;
            if gain < tol {
                converged = true;
                break;
            }
            // Sublinear creep along a flat ridge: not worth the rounds.
            if gain < T::lit(1000.0) * tol && gain > T::lit(0.99) * last_gain {
                break;
            }
            last_gain = gain;
        } else {
            converged = true;
            break;
        }
    }
    RestartOutcome {
        value,
        preps,
        axes,
        converged,
    }
}

fn strategy_from_vectors<T: Real>(
    alpha: &[T; 3],
    preps: &[Vec3<T>; 3],
    axes: &[Vec3<T>; 3],
) -> Result<GameStrategy<T>> {
    let tol = T::tol(1e-9);
    let rho_x0 = [
        DensityState::from_bloch(preps[0], tol)?,
        DensityState::from_bloch(preps[1], tol)?,
        DensityState::from_bloch(preps[2], tol)?,
    ];
    let full = complete_preparations(&rho_x0, tol)?;
    let povm = Povm::from_weighted_axes(alpha, axes);
    GameStrategy::new(full, povm, tol)
}

/// Maximizes the success probability for fixed outcome weights by
/// alternating best responses from `config.restarts` random starts.
pub fn optimize_quantum<T: Real>(
    alpha: &AlphaTriple<T>,
    config: &OptimizerConfig<T>,
) -> Result<OptimizationResult<T>> {
    if config.restarts == 0 {
        return Err(Error::Domain("at least one restart is required".into()));
    }
    let a = alpha.values();
    let outcomes: Vec<RestartOutcome<T>> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(&a, derive_seed(config.seed, r as u64), config.tol, config.max_rounds))
        .collect();
    let best = outcomes.iter().map(|o| o.value).fold(T::neg_infinity(), T::max);
    let worst = outcomes.iter().map(|o| o.value).fold(T::infinity(), T::min);
    let chosen = outcomes
        .iter()
        .find(|o| o.value >= best - T::lit(1e-12))
        .expect("at least one restart");
    let strategy = strategy_from_vectors(&a, &chosen.preps, &chosen.axes)?;
    Ok(OptimizationResult {
        value: strategy.success_probability(),
        strategy,
        povm_axes: chosen.axes,
        restarts_used: config.restarts,
        converged: chosen.converged,
        best_gap: best - worst,
    })
}

/// Value with the trine preparations held fixed and only the measurement optimized.
pub fn trine_preparation_value<T: Real>(alpha: &AlphaTriple<T>) -> T {
    let two_pi_3 = T::lit(2.0) * T::PI() / T::lit(3.0);
    let preps: [Vec3<T>; 3] = std::array::from_fn(|x| Vec3::xz(two_pi_3 * T::from_usize_lossy(x)));
    let a = alpha.values();
    let d = std::array::from_fn(|b| preps[b] - preps[(b + 1) % 3]);
    objective(&a, &preps, &best_response_axes(&a, &d))
}

/// `(α₀, P_Q)` along the slice `α₁ = α₂`, one optimizer run per grid point.
pub fn quantum_curve<T: Real>(
    grid: &[T],
    restarts: usize,
    seed: u64,
) -> Result<Vec<(T, T)>> {
    grid.par_iter()
        .enumerate()
        .map(|(i, &alpha0)| {
            let alpha = AlphaTriple::from_alpha0(alpha0)?;
            let config = OptimizerConfig {
                restarts,
                seed: derive_seed(seed, i as u64),
                ..OptimizerConfig::default()
            };
            Ok((alpha0, optimize_quantum(&alpha, &config)?.value))
        })
        .collect()
}
