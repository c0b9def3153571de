//! One classical bit plus shared randomness under parity concealment.
//!
//! Alice sends "0" on input `(x, a)` with probability `p_xa`; Bob decodes
//! message "0" with distribution `s` and message "1" with `r`. Concealment
//! of `a` and of `x ⊕₃ 2a` reads
//!
//! * `Σ_x p_x0 = Σ_x p_x1` (`= 3κ₁`)
//! * `p_00 + p_11 = p_01 + p_20 = p_10 + p_21` (`= 2κ₂`)
//!
//! Shared randomness `τ` mixes strategies that each satisfy these
//! constraints, and the success probability is linear in the per-`τ`
//! strategy, so the optimum over mixtures equals the optimum over single
//! strategies. For fixed deterministic decodings the success probability is
//! linear in `p`, and it is linear in `(s, r)` for fixed `p`; hence the
//! optimum is the best of nine linear programs, one per pair of point-mass
//! decodings. The nine pairs refine the four sign cases of
//! `(s₀ − r₀, s₁ − r₁)`.

use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpStatus};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalStrategy<T> {
    /// `p[x][a]`: probability of sending "0".
    pub p: [[T; 2]; 3],
    /// Decoding of message "0".
    pub s: [T; 3],
    /// Decoding of message "1".
    pub r: [T; 3],
}

impl<T: Real> ClassicalStrategy<T> {
    /// `[Σ p_x0 − Σ p_x1, (p00+p11) − (p01+p20), (p01+p20) − (p10+p21)]`.
    pub fn constraint_residuals(&self) -> [T; 3] {
        let p = &self.p;
        [
            (p[0][0] + p[1][0] + p[2][0]) - (p[0][1] + p[1][1] + p[2][1]),
            (p[0][0] + p[1][1]) - (p[0][1] + p[2][0]),
            (p[0][1] + p[2][0]) - (p[1][0] + p[2][1]),
        ]
    }

    /// `(κ₁, κ₂)`.
    pub fn kappas(&self) -> (T, T) {
        let p = &self.p;
        (
            (p[0][0] + p[1][0] + p[2][0]) / T::lit(3.0),
            (p[0][0] + p[1][1]) / T::lit(2.0),
        )
    }

    /// Checks ranges, normalization of `s` and `r`, and both constraints.
    pub fn validate(&self, tol: T) -> Result<()> {
        let in_unit = |v: T| v >= -tol && v <= T::one() + tol;
        let probs_ok = self.p.iter().flatten().all(|&v| in_unit(v))
            && self.s.iter().chain(&self.r).all(|&v| in_unit(v));
        let s_sum: T = self.s.iter().copied().sum();
        let r_sum: T = self.r.iter().copied().sum();
        let residuals = self.constraint_residuals();
        let sums_ok = (s_sum - T::one()).abs() <= tol && (r_sum - T::one()).abs() <= tol;
        if !probs_ok || !sums_ok || residuals.iter().any(|r| r.abs() > tol) {
            let mut all: Vec<f64> = residuals.iter().map(|r| r.to_f64_lossy()).collect();
            all.push((s_sum - T::one()).to_f64_lossy());
            all.push((r_sum - T::one()).to_f64_lossy());
            return Err(Error::ConstraintViolation { residuals: all });
        }
        Ok(())
    }
}

/// Success probability of a strategy that passes validation at `1e-9`.
pub fn classical_value<T: Real>(strategy: &ClassicalStrategy<T>) -> Result<T> {
    strategy.validate(T::tol(1e-9))?;
    Ok(unchecked_value(strategy))
}

fn unchecked_value<T: Real>(strategy: &ClassicalStrategy<T>) -> T {
    let (p, s, r) = (&strategy.p, &strategy.s, &strategy.r);
    let two = T::lit(2.0);
    let mut total = T::zero();
    for b in 0..3 {
        // Inputs won by outcome b: (b, 0) and (b ⊖ 1, 1).
        let send0 = p[b][0] + p[(b + 2) % 3][1];
        total = total + send0 * s[b] + (two - send0) * r[b];
    }
    total / T::lit(6.0)
}

fn point_mass<T: Real>(b: usize) -> [T; 3] {
    std::array::from_fn(|i| if i == b { T::one() } else { T::zero() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOptimum<T> {
    pub value: T,
    pub strategy: ClassicalStrategy<T>,
    /// Outcomes decoded from messages "0" and "1".
    pub decoding: (usize, usize),
}

/// Encoding LP for point-mass decodings `s = δ_{s0}`, `r = δ_{r0}`; the
/// objective omits the constant `1/3`.
pub fn encoding_lp<T: Real>(s0: usize, r0: usize) -> LinearProgram<T> {
    let mut lp = LinearProgram::new();
    let mut idx = [[0usize; 2]; 3];
    for a in 0..2 {
        for x in 0..3 {
            idx[x][a] = lp.add_variable(format!("p{x}{a}"), T::zero(), T::one());
        }
    }
    let (s, r) = (point_mass::<T>(s0), point_mass::<T>(r0));
    let sixth = T::lit(1.0 / 6.0);
    for b in 0..3 {
        let coef = sixth * (s[b] - r[b]);
        for (x, a) in [(b, 0), ((b + 2) % 3, 1)] {
            lp.objective[idx[x][a]] = lp.objective[idx[x][a]] + coef;
        }
    }
    let (one, neg) = (T::one(), -T::one());
    lp.add_equality(
        &[
            (idx[0][0], one),
            (idx[1][0], one),
            (idx[2][0], one),
            (idx[0][1], neg),
            (idx[1][1], neg),
            (idx[2][1], neg),
        ],
        T::zero(),
    );
    lp.add_equality(
        &[(idx[0][0], one), (idx[1][1], one), (idx[0][1], neg), (idx[2][0], neg)],
        T::zero(),
    );
    lp.add_equality(
        &[(idx[0][1], one), (idx[2][0], one), (idx[1][0], neg), (idx[2][1], neg)],
        T::zero(),
    );
    lp
}

/// Best strategy over the given deterministic decoding pairs.
pub fn optimize_classical_over<T: Real>(decodings: &[(usize, usize)]) -> Result<ClassicalOptimum<T>> {
    let mut best: Option<ClassicalOptimum<T>> = None;
    for &(s0, r0) in decodings {
        if s0 > 2 || r0 > 2 {
            return Err(Error::Domain(format!("decoding ({s0}, {r0}) out of range")));
        }
        let sol = solve(&encoding_lp::<T>(s0, r0))?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::LpStatus("not optimal"));
        }
        // Variables were added a-major: p00, p10, p20, p01, p11, p21.
        let p = std::array::from_fn(|x| [sol.x[x], sol.x[3 + x]]);
        let strategy = ClassicalStrategy {
            p,
            s: point_mass(s0),
            r: point_mass(r0),
        };
        let value = unchecked_value(&strategy);
        if best
            .as_ref()
            .map_or(true, |b| value > b.value + T::lit(1e-12))
        {
            best = Some(ClassicalOptimum {
                value,
                strategy,
                decoding: (s0, r0),
            });
        }
    }
    best.ok_or_else(|| Error::Domain("no decodings given".into()))
}

/// All nine decoding pairs, in lexicographic order.
pub fn all_decodings() -> Vec<(usize, usize)> {
    (0..3).flat_map(|s| (0..3).map(move |r| (s, r))).collect()
}

pub fn optimize_classical<T: Real>() -> Result<ClassicalOptimum<T>> {
    optimize_classical_over(&all_decodings())
}

/// Encodings `p ∈ {0,1}⁶` meeting both constraints exactly, as `p[x][a]`.
pub fn deterministic_feasible_encodings() -> Vec<[[u8; 2]; 3]> {
    (0u8..64)
        .map(|bits| std::array::from_fn(|x| std::array::from_fn(|a| (bits >> (2 * x + a)) & 1)))
        .filter(|p: &[[u8; 2]; 3]| {
            let strategy = ClassicalStrategy::<f64> {
                p: p.map(|row| row.map(f64::from)),
                s: point_mass(0),
                r: point_mass(0),
            };
            strategy.constraint_residuals().iter().all(|&r| r == 0.0)
        })
        .collect()
}
