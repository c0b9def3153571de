//! State discrimination with prior versus posterior partition information.
//!
//! With posterior information the optimal guessing probability is
//! `max Σ_ij Tr[G_ij W_ij]` over POVMs `{G_ij}`, `W_ij = (e_i + e'_j)/6`.
//! Its dual is `min Tr[Y]` subject to `Y ≥ W_ij`. For qubits, with
//! `Y = y I + u·σ` and `W_ij = I/6 + w_ij·σ`, the constraint reads
//! `y − 1/6 ≥ |u − w_ij|`, so the best certificate is centered on the
//! minimum enclosing ball of the points `w_ij` and gives `1/3 + 2R`.
//! Complementary slackness yields a matching primal POVM supported on the
//! points on the ball's boundary.

use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpStatus};
use crate::qubit::{born_probability, Effect, PauliOperator, Povm, Vec3};
use crate::scalar::Real;

use super::ensemble::PartitionedEnsemble;

/// Default pairing: state `i` of each partition is guessed on outcome `i`.
pub fn prior_guess<T: Real>(
    ensemble: &PartitionedEnsemble<T>,
    first: &Povm<T>,
    second: &Povm<T>,
) -> Result<T> {
    for povm in [first, second] {
        if povm.len() != 3 {
            return Err(Error::Domain(format!(
                "default pairing needs 3 outcomes per measurement, got {}",
                povm.len()
            )));
        }
    }
    prior_guess_with(ensemble, first, second, &[0, 1, 2], &[0, 1, 2])
}

/// `(1/6) Σ_i (Tr[e_i M_{assign0[i]}] + Tr[e'_i N_{assign1[i]}])`.
pub fn prior_guess_with<T: Real>(
    ensemble: &PartitionedEnsemble<T>,
    first: &Povm<T>,
    second: &Povm<T>,
    assign0: &[usize; 3],
    assign1: &[usize; 3],
) -> Result<T> {
    let mut total = T::zero();
    for (part, povm, assign) in [(&ensemble.part0, first, assign0), (&ensemble.part1, second, assign1)] {
        for (state, &k) in part.iter().zip(assign) {
            let effect = povm.effects().get(k).ok_or_else(|| {
                Error::Domain(format!("outcome {k} out of range for {} outcomes", povm.len()))
            })?;
            total = total + born_probability(state, effect);
        }
    }
    Ok(total / T::lit(6.0))
}

/// Success of measuring `povm` and, once the partition is announced,
/// guessing the likeliest state of that partition for the observed outcome.
pub fn post_guess_value<T: Real>(ensemble: &PartitionedEnsemble<T>, povm: &Povm<T>) -> T {
    let best = |part: &[crate::qubit::DensityState<T>; 3], e: &Effect<T>| {
        part.iter()
            .map(|s| born_probability(s, e))
            .fold(T::neg_infinity(), T::max)
    };
    let total: T = povm
        .effects()
        .iter()
        .map(|e| best(&ensemble.part0, e) + best(&ensemble.part1, e))
        .sum();
    total / T::lit(6.0)
}

/// Smallest ball containing `points`: `(center, radius)`.
pub fn minimum_enclosing_ball<T: Real>(points: &[Vec3<T>]) -> (Vec3<T>, T) {
    let n = points.len();
    if n == 0 {
        return (Vec3::zero(), T::zero());
    }
    let radius_at = |c: &Vec3<T>| points.iter().map(|p| (*p - *c).norm()).fold(T::zero(), T::max);
    let mut best = (points[0], radius_at(&points[0]));
    let mut consider = |c: Option<Vec3<T>>| {
        if let Some(c) = c {
            let r = radius_at(&c);
            if r < best.1 {
                best = (c, r);
            }
        }
    };
    // The optimal ball is the circumscribed ball of at most four points.
    for i in 0..n {
        for j in (i + 1)..n {
            consider(Some((points[i] + points[j]).scale(T::lit(0.5))));
            for k in (j + 1)..n {
                consider(circumcenter3(points[i], points[j], points[k]));
                for l in (k + 1)..n {
                    consider(circumcenter4(points[i], points[j], points[k], points[l]));
                }
            }
        }
    }
    best
}

fn circumcenter3<T: Real>(p0: Vec3<T>, p1: Vec3<T>, p2: Vec3<T>) -> Option<Vec3<T>> {
    let a = p1 - p0;
    let b = p2 - p0;
    let axb = a.cross(&b);
    let d = T::lit(2.0) * axb.dot(&axb);
    if d <= T::epsilon() {
        return None;
    }
    let num = (b.scale(a.dot(&a)) - a.scale(b.dot(&b))).cross(&axb);
    Some(p0 + num.scale(d.recip()))
}

fn circumcenter4<T: Real>(p0: Vec3<T>, p1: Vec3<T>, p2: Vec3<T>, p3: Vec3<T>) -> Option<Vec3<T>> {
    let rows = [p1 - p0, p2 - p0, p3 - p0];
    let rhs = rows.map(|r| r.dot(&r) / T::lit(2.0));
    let det = rows[0].dot(&rows[1].cross(&rows[2]));
    if det.abs() <= T::epsilon() {
        return None;
    }
    // Cramer's rule for rows · c = rhs.
    let x = (rows[1].cross(&rows[2]).scale(rhs[0])
        + rows[2].cross(&rows[0]).scale(rhs[1])
        + rows[0].cross(&rows[1]).scale(rhs[2]))
    .scale(det.recip());
    Some(p0 + x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostGuessBounds<T> {
    pub upper: T,
    pub lower: T,
    /// Dual certificate `Y` with `Y ≥ W_ij` for all `i, j`.
    pub dual_certificate: PauliOperator<T>,
    /// Smallest eigenvalue over the nine `Y − W_ij`.
    pub dual_min_eigenvalue: T,
    /// Strategy attaining `lower`.
    pub primal_povm: Povm<T>,
}

fn pair_operators<T: Real>(ensemble: &PartitionedEnsemble<T>) -> Vec<PauliOperator<T>> {
    let sixth = T::lit(1.0 / 6.0);
    let mut out = Vec::with_capacity(9);
    for a in &ensemble.part0 {
        for b in &ensemble.part1 {
            out.push((a.operator() + b.operator()).scale(sixth));
        }
    }
    out
}

pub fn post_guess_bounds<T: Real>(ensemble: &PartitionedEnsemble<T>) -> Result<PostGuessBounds<T>> {
    let w = pair_operators(ensemble);
    let points: Vec<Vec3<T>> = w.iter().map(|op| op.vec).collect();
    let (center, _) = minimum_enclosing_ball(&points);
    let radius = points.iter().map(|p| (*p - center).norm()).fold(T::zero(), T::max);
    let y = PauliOperator::new(T::lit(1.0 / 6.0) + radius, center);
    let dual_min_eigenvalue = w
        .iter()
        .map(|op| (y - *op).eigenvalues().0)
        .fold(T::infinity(), T::min);

    let primal_povm = boundary_povm(&points, center, radius)?;
    Ok(PostGuessBounds {
        upper: y.trace(),
        lower: post_guess_value(ensemble, &primal_povm),
        dual_certificate: y,
        dual_min_eigenvalue,
        primal_povm,
    })
}

/// POVM `{g_k (I + m_k·σ)/2}` on the boundary directions `m_k = (w_k − u)/R`
/// with `Σ g_k = 2`, `Σ g_k m_k = 0`; falls back to `{I}` if none exists.
fn boundary_povm<T: Real>(points: &[Vec3<T>], center: Vec3<T>, radius: T) -> Result<Povm<T>> {
    let trivial = Povm::new(vec![Effect::isotropic(T::one())]);
    if radius <= T::epsilon() {
        return Ok(trivial);
    }
    let slack = T::tol(1e-9) * (T::one() + radius);
    let directions: Vec<Vec3<T>> = points
        .iter()
        .filter(|p| (**p - center).norm() >= radius - slack)
        .map(|p| (*p - center).scale(radius.recip()))
        .collect();
    let mut lp = LinearProgram::new();
    let vars: Vec<usize> = (0..directions.len())
        .map(|k| lp.add_variable(format!("g{k}"), T::zero(), T::lit(2.0)))
        .collect();
    let total: Vec<(usize, T)> = vars.iter().map(|&v| (v, T::one())).collect();
    lp.add_equality(&total, T::lit(2.0));
    for axis in 0..3 {
        let row: Vec<(usize, T)> = vars.iter().zip(&directions).map(|(&v, d)| (v, d[axis])).collect();
        lp.add_equality(&row, T::zero());
    }
    let sol = solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Ok(trivial);
    }
    let effects: Vec<Effect<T>> = directions
        .iter()
        .zip(&sol.x)
        .filter(|(_, &g)| g > T::zero())
        .map(|(d, &g)| Effect::scaled_projector(g, *d))
        .collect();
    Ok(Povm::new(effects))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuessingReport<T> {
    pub p_prior: T,
    pub p_post_upper: T,
    pub p_post_lower: T,
    pub dual_certificate: PauliOperator<T>,
    pub dual_min_eigenvalue: T,
    /// `p_prior − p_post_upper`; positive certifies incompatibility.
    pub witness_margin: T,
}

pub fn guessing_report<T: Real>(
    ensemble: &PartitionedEnsemble<T>,
    first: &Povm<T>,
    second: &Povm<T>,
) -> Result<GuessingReport<T>> {
    let p_prior = prior_guess(ensemble, first, second)?;
    let post = post_guess_bounds(ensemble)?;
    Ok(GuessingReport {
        p_prior,
        p_post_upper: post.upper,
        p_post_lower: post.lower,
        dual_certificate: post.dual_certificate,
        dual_min_eigenvalue: post.dual_min_eigenvalue,
        witness_margin: p_prior - post.upper,
    })
}

pub fn incompatibility_witness<T: Real>(
    first: &Povm<T>,
    second: &Povm<T>,
    ensemble: &PartitionedEnsemble<T>,
) -> Result<T> {
    Ok(guessing_report(ensemble, first, second)?.witness_margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classicality::ensemble::witness_ensemble;
    use crate::qubit::trine_povm;
    use crate::simulation::simulator_set;
    use std::f64::consts::PI;

    #[test]
    fn prior_examples() {
        let e = witness_ensemble::<f64>();
        let set = simulator_set::<f64>(5).unwrap();
        let (m0, m1) = (&set.members[0].povm, &set.members[1].povm);
        assert!((prior_guess(&e, m0, m1).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(prior_guess(&e, m1, m0).unwrap() < 2.0 / 3.0);

        let flat = Povm::new(vec![Effect::isotropic(1.0 / 3.0); 3]);
        assert!((prior_guess(&e, &flat, &flat).unwrap() - 1.0 / 3.0).abs() < 1e-15);

        let two = Povm::new(vec![Effect::isotropic(0.5); 2]);
        assert!(matches!(prior_guess(&e, &two, m1), Err(Error::Domain(_))));
    }

    #[test]
    fn z_basis_strategy() {
        let e = witness_ensemble::<f64>();
        let z = Povm::from_weighted_axes(&[1.0, 1.0], &[Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)]);
        // Direct Born values from the printed states.
        let c36 = (PI / 5.0).cos();
        let c72 = (2.0 * PI / 5.0).cos();
        let oracle = (1.0 + (1.0 + c72) / 2.0 + 2.0 * (1.0 + c36) / 2.0) / 6.0;
        let v = post_guess_value(&e, &z);
        assert!((v - oracle).abs() < 1e-15);
        assert!(v >= 0.577);
    }

    #[test]
    fn isotropic_certificate_is_feasible() {
        // Each W_ij = (I + ((n_i + n'_j)/2)·σ)/6 has λ_max ≤ 1/3, so Y = I/3 is feasible.
        let e = witness_ensemble::<f64>();
        let y = PauliOperator::new(1.0 / 3.0, Vec3::zero());
        assert!(pair_operators(&e).iter().all(|w| (y - *w).eigenvalues().0 >= 0.0));
        assert!((y.trace() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn witness_ensemble_bounds() {
        let b = post_guess_bounds(&witness_ensemble::<f64>()).unwrap();
        assert!(b.dual_min_eigenvalue >= -1e-10);
        assert!(b.upper < 0.64, "{}", b.upper);
        assert!(b.lower <= b.upper + 1e-9);
        assert!(b.upper - b.lower < 1e-9, "{} {}", b.lower, b.upper);
        assert!(b.primal_povm.validate(1e-9).pass);
        assert!(b.lower >= 1.0 / 3.0 && b.upper <= 2.0 / 3.0);
    }

    #[test]
    fn enclosing_ball_matches_brute_force() {
        let pts = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.2, 0.2, 0.2),
        ];
        let (c, r) = minimum_enclosing_ball(&pts);
        // The circumcircle of the three unit points already contains the origin.
        let third = 1.0 / 3.0;
        assert!((r - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((c - Vec3::new(third, third, third)).max_abs() < 1e-12);

        let (_, r) = minimum_enclosing_ball::<f64>(&[Vec3::new(1.0, 0.0, 0.0), Vec3::new(-1.0, 0.0, 0.0), Vec3::new(0.0, 0.5, 0.0)]);
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn witness_examples() {
        let e = witness_ensemble::<f64>();
        let set = simulator_set::<f64>(5).unwrap();
        let (m0, m1) = (&set.members[0].povm, &set.members[1].povm);
        assert!(incompatibility_witness(m0, m1, &e).unwrap() >= 0.02);
        assert!(incompatibility_witness(m0, m0, &e).unwrap() <= 1e-9);
        let trine = trine_povm([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        assert!(incompatibility_witness(&trine, &trine, &e).unwrap() <= 1e-9);
    }
}
