//! Joint measurability of two coplanar qubit POVMs by polygonal relaxation.
//!
//! A joint POVM `G_ij = g_ij I + h_ij·σ` must reproduce both marginals and
//! satisfy `g_ij ≥ |h_ij|`. When every Bloch vector lies in one plane, the
//! `h_ij` may be taken in that plane and the cone becomes a disc of radius
//! `g_ij`. Replacing the disc by an inscribed polygon gives a feasibility LP
//! whose success proves compatibility; a circumscribed polygon gives one
//! whose failure proves incompatibility. Both polygons use the `k` uniform
//! directions `2πm/k` together with the directions of the effects.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::lp::{solve, LinearProgram, LpStatus};
use crate::qubit::{rotation_matrix, Effect, Povm, Vec3};
use crate::scalar::Real;
use crate::simulation::SimulatorSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compatibility {
    Compatible,
    Incompatible,
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointMeasurabilityReport<T> {
    pub verdict: Compatibility,
    pub inner_feasible: bool,
    pub outer_feasible: bool,
    pub polygon_k: usize,
    /// Unit normal of the common plane before rotation onto `xz`.
    pub plane_normal: Vec3<T>,
}

/// Unit normal of a plane through the origin containing every vector, or
/// `None` if no such plane exists within `tol`.
fn common_plane<T: Real>(vectors: &[Vec3<T>], tol: T) -> Option<Vec3<T>> {
    let mut scatter = vec![vec![T::zero(); 3]; 3];
    for v in vectors {
        for i in 0..3 {
            for j in 0..3 {
                scatter[i][j] = scatter[i][j] + v[i] * v[j];
            }
        }
    }
    let (_, vecs) = symmetric_eigen(&scatter);
    let normal = Vec3::new(vecs[0][0], vecs[1][0], vecs[2][0]).normalized()?;
    let off = vectors.iter().map(|v| v.dot(&normal).abs()).fold(T::zero(), T::max);
    (off <= tol).then_some(normal)
}

/// Rotation taking `normal` onto `+y`.
fn to_xz_frame<T: Real>(normal: Vec3<T>) -> [[T; 3]; 3] {
    let y = Vec3::new(T::zero(), T::one(), T::zero());
    let axis = normal.cross(&y);
    let c = normal.dot(&y).max(-T::one()).min(T::one());
    if axis.norm() <= T::epsilon() {
        // Already along ±y; flip about x if needed.
        let angle = if c > T::zero() { T::zero() } else { T::PI() };
        return rotation_matrix(Vec3::new(T::one(), T::zero(), T::zero()), angle);
    }
    rotation_matrix(axis, c.acos())
}

/// In-plane `(x, z)` coordinates of each effect after the frame rotation.
fn planar<T: Real>(povm: &Povm<T>, frame: &[[T; 3]; 3]) -> Vec<(T, [T; 2])> {
    povm.effects()
        .iter()
        .map(|e| {
            let v = e.vec.transform(frame);
            (e.weight, [v[0], v[2]])
        })
        .collect()
}

/// A face `n·h ≤ d·g` with unit normal `n = (cos φ, sin φ)`.
type Face<T> = (T, T, T);

fn wrap_angle<T: Real>(a: T) -> T {
    let turn = T::lit(2.0) * T::PI();
    let r = a % turn;
    if r < T::zero() {
        r + turn
    } else {
        r
    }
}

/// Sorted distinct angles in `[0, 2π)`: the `k` uniform ones plus `extra`.
fn vertex_angles<T: Real>(k: usize, offset: T, extra: &[T]) -> Vec<T> {
    let step = T::lit(2.0) * T::PI() / T::from_usize_lossy(k);
    let mut angles: Vec<T> = (0..k)
        .map(|m| wrap_angle(offset + step * T::from_usize_lossy(m)))
        .chain(extra.iter().map(|&a| wrap_angle(a)))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() <= T::tol(1e-12));
    angles
}

/// Chords of the unit circle through consecutive vertex angles.
fn inscribed_faces<T: Real>(angles: &[T]) -> Vec<Face<T>> {
    let turn = T::lit(2.0) * T::PI();
    let two = T::lit(2.0);
    (0..angles.len())
        .map(|i| {
            let a = angles[i];
            let b = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + turn };
            let (s, c) = ((a + b) / two).sin_cos();
            (c, s, ((b - a) / two).cos())
        })
        .collect()
}

/// Tangent lines to the unit circle at the given angles.
fn circumscribed_faces<T: Real>(angles: &[T]) -> Vec<Face<T>> {
    angles
        .iter()
        .map(|&a| {
            let (s, c) = a.sin_cos();
            (c, s, T::one())
        })
        .collect()
}

/// In-plane angles of the nonzero effect vectors.
fn effect_angles<T: Real>(effects: &[(T, [T; 2])]) -> Vec<T> {
    effects
        .iter()
        .filter(|(_, v)| v[0].hypot(v[1]) > T::tol(1e-12))
        .map(|(_, v)| v[1].atan2(v[0]))
        .collect()
}

/// Feasibility of the joint POVM with the disc `|h| ≤ g` replaced by the
/// polygon `n·h ≤ d·g` over `normals`.
///
/// Faces are added lazily: the LP is solved with the faces found so far and
/// the most violated face of each `G_ij` is appended until none is violated.
/// A subset of faces is a relaxation, so an infeasible round is final.
fn polygon_feasible<T: Real>(first: &[(T, [T; 2])], second: &[(T, [T; 2])], normals: &[Face<T>]) -> Result<bool> {
    let (m, n) = (first.len(), second.len());
    let k = normals.len();
    let mut faces: Vec<Vec<usize>> = vec![(0..4).map(|q| q * k / 4).collect(); m * n];
    let violation_tol = T::tol(1e-11);
    loop {
        let (lp, g, h) = marginal_lp(first, second);
        let mut lp = lp;
        let free = T::infinity();
        for (cell, list) in faces.iter().enumerate() {
            for &face in list {
                let (c, s, d) = normals[face];
                let slack = lp.add_variable(format!("s{cell}_{face}"), T::zero(), free);
                lp.add_equality(
                    &[(h[cell][0], c), (h[cell][1], s), (g[cell], -d), (slack, T::one())],
                    T::zero(),
                );
            }
        }
        let sol = solve(&lp)?;
        if sol.status != LpStatus::Optimal {
            return Ok(false);
        }
        let mut added = false;
        for cell in 0..m * n {
            let (gv, hx, hz) = (sol.x[g[cell]], sol.x[h[cell][0]], sol.x[h[cell][1]]);
            let (worst, excess) = normals
                .iter()
                .map(|&(c, s, d)| c * hx + s * hz - d * gv)
                .enumerate()
                .fold((0, T::neg_infinity()), |acc, (f, v)| if v > acc.1 { (f, v) } else { acc });
            if excess > violation_tol && !faces[cell].contains(&worst) {
                faces[cell].push(worst);
                added = true;
            }
        }
        if !added {
            return Ok(true);
        }
    }
}

/// LP over `G_ij = (g, hx, hz)` with both marginal constraints; returns the
/// variable indices of `g` and `h` per cell `i·n + j`.
fn marginal_lp<T: Real>(
    first: &[(T, [T; 2])],
    second: &[(T, [T; 2])],
) -> (LinearProgram<T>, Vec<usize>, Vec<[usize; 2]>) {
    let (m, n) = (first.len(), second.len());
    let mut lp = LinearProgram::new();
    let free = T::infinity();
    let mut g = Vec::with_capacity(m * n);
    let mut h = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            // Marginals bound every entry, so only sign bounds are imposed;
            // each finite upper bound would cost the solver an extra row.
            g.push(lp.add_variable(format!("g{i}{j}"), T::zero(), free));
            h.push([
                lp.add_variable(format!("hx{i}{j}"), -free, free),
                lp.add_variable(format!("hz{i}{j}"), -free, free),
            ]);
        }
    }
    for (i, &(w, v)) in first.iter().enumerate() {
        lp.add_equality(&(0..n).map(|j| (g[i * n + j], T::one())).collect::<Vec<_>>(), w);
        for c in 0..2 {
            lp.add_equality(&(0..n).map(|j| (h[i * n + j][c], T::one())).collect::<Vec<_>>(), v[c]);
        }
    }
    for (j, &(w, v)) in second.iter().enumerate() {
        lp.add_equality(&(0..m).map(|i| (g[i * n + j], T::one())).collect::<Vec<_>>(), w);
        for c in 0..2 {
            lp.add_equality(&(0..m).map(|i| (h[i * n + j][c], T::one())).collect::<Vec<_>>(), v[c]);
        }
    }
    (lp, g, h)
}

/// Decides compatibility of two coplanar POVMs with `k`-gon relaxations.
pub fn joint_measurability_check<T: Real>(
    first: &Povm<T>,
    second: &Povm<T>,
    polygon_k: usize,
) -> Result<JointMeasurabilityReport<T>> {
    if polygon_k < 3 {
        return Err(Error::Domain(format!("polygon needs at least 3 sides, got {polygon_k}")));
    }
    let vectors: Vec<Vec3<T>> = first
        .effects()
        .iter()
        .chain(second.effects())
        .map(|e| e.vec)
        .collect();
    let normal = common_plane(&vectors, T::tol(1e-9))
        .ok_or_else(|| Error::NotApplicable("Bloch vectors are not coplanar".into()))?;
    let frame = to_xz_frame(normal);
    let (a, b) = (planar(first, &frame), planar(second, &frame));
    // Effect directions join both polygons so that rank-one marginals, which
    // sit on the circle, are not cut off by the inner one.
    let mut extra = effect_angles(&a);
    extra.extend(effect_angles(&b));
    let inner_faces = inscribed_faces(&vertex_angles(polygon_k, T::zero(), &extra));
    let outer_faces = circumscribed_faces(&vertex_angles(polygon_k, T::zero(), &extra));
    let inner = polygon_feasible(&a, &b, &inner_faces)?;
    let outer = inner || polygon_feasible(&a, &b, &outer_faces)?;
    let verdict = match (inner, outer) {
        (true, _) => Compatibility::Compatible,
        (false, false) => Compatibility::Incompatible,
        (false, true) => Compatibility::Undecided,
    };
    Ok(JointMeasurabilityReport {
        verdict,
        inner_feasible: inner,
        outer_feasible: outer,
        polygon_k,
        plane_normal: normal,
    })
}

/// `E → ηE + (1 − η)Tr[E] I/2`, i.e. `(w, v) → (w, ηv)`.
pub fn noisy<T: Real>(povm: &Povm<T>, eta: T) -> Povm<T> {
    povm.map_effects(|e| Effect::new(e.weight, e.vec.scale(eta)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseThreshold<T> {
    /// Largest visibility found with a compatibility certificate.
    pub compatible_up_to: T,
    /// Smallest visibility found with an incompatibility certificate.
    pub incompatible_from: T,
    pub polygon_k: usize,
}

/// Bisects the visibility `η ∈ [0, 1]` separating compatible from
/// incompatible noisy pairs, each side to resolution `tol`.
pub fn noise_threshold<T: Real>(
    first: &Povm<T>,
    second: &Povm<T>,
    polygon_k: usize,
    tol: T,
) -> Result<NoiseThreshold<T>> {
    let verdict = |eta: T| -> Result<JointMeasurabilityReport<T>> {
        joint_measurability_check(&noisy(first, eta), &noisy(second, eta), polygon_k)
    };
    let bisect = |pred: &dyn Fn(&JointMeasurabilityReport<T>) -> bool| -> Result<T> {
        // Largest η with pred true, assuming pred(0) and monotonicity.
        if pred(&verdict(T::one())?) {
            return Ok(T::one());
        }
        let (mut lo, mut hi) = (T::zero(), T::one());
        while hi - lo > tol {
            let mid = (lo + hi) / T::lit(2.0);
            if pred(&verdict(mid)?) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    };
    let compatible_up_to = bisect(&|r| r.inner_feasible)?;
    let outer_up_to = bisect(&|r| r.outer_feasible)?;
    Ok(NoiseThreshold {
        compatible_up_to,
        incompatible_from: (outer_up_to + tol).min(T::one()),
        polygon_k,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairVerdict {
    pub first: usize,
    pub second: usize,
    pub verdict: Compatibility,
}

/// Verdicts for every unordered pair of simulators, in lexicographic order.
pub fn pairwise_incompatibility<T: Real>(set: &SimulatorSet<T>, polygon_k: usize) -> Result<Vec<PairVerdict>> {
    let n = set.members.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let report = joint_measurability_check(&set.members[a].povm, &set.members[b].povm, polygon_k)?;
            Ok(PairVerdict {
                first: a,
                second: b,
                verdict: report.verdict,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::trine_povm;
    use crate::simulation::simulator_set;
    use std::f64::consts::PI;

    #[test]
    fn self_compatibility() {
        let set = simulator_set::<f64>(5).unwrap();
        let m0 = &set.members[0].povm;
        let r = joint_measurability_check(m0, m0, 64).unwrap();
        assert_eq!(r.verdict, Compatibility::Compatible);
    }

    #[test]
    fn first_two_simulators_incompatible() {
        let set = simulator_set::<f64>(5).unwrap();
        let r = joint_measurability_check(&set.members[0].povm, &set.members[1].povm, 64).unwrap();
        assert_eq!(r.verdict, Compatibility::Incompatible);
    }

    #[test]
    fn heavy_noise_is_compatible() {
        let set = simulator_set::<f64>(5).unwrap();
        let (a, b) = (noisy(&set.members[0].povm, 0.1), noisy(&set.members[1].povm, 0.1));
        assert_eq!(joint_measurability_check(&a, &b, 64).unwrap().verdict, Compatibility::Compatible);
        let t = noise_threshold(&set.members[0].povm, &set.members[1].povm, 64, 1e-4).unwrap();
        assert!(t.compatible_up_to > 0.1 && t.compatible_up_to < 1.0);
        assert!(t.incompatible_from >= t.compatible_up_to);
        assert!(t.incompatible_from - t.compatible_up_to < 0.01, "{t:?}");
    }

    #[test]
    fn tilted_plane_is_handled() {
        let m = rotation_matrix(Vec3::new(0.3, -1.0, 0.7), 1.1);
        let trine = trine_povm([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        let rotated = trine.map_effects(|e| Effect::new(e.weight, e.vec.transform(&m)));
        let r = joint_measurability_check(&rotated, &rotated, 16).unwrap();
        assert_eq!(r.verdict, Compatibility::Compatible);
    }

    #[test]
    fn non_coplanar_is_not_applicable() {
        let a = Povm::from_weighted_axes(&[1.0, 1.0], &[Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)]);
        let b = Povm::from_weighted_axes(&[1.0, 1.0], &[Vec3::new(1.0, 0.0, 0.0), Vec3::new(-1.0, 0.0, 0.0)]);
        let c = Povm::from_weighted_axes(&[1.0, 1.0], &[Vec3::new(0.0, 1.0, 0.0), Vec3::new(0.0, -1.0, 0.0)]);
        let ab = Povm::new(a.effects().iter().map(|e| e.scale(0.5)).chain(b.effects().iter().map(|e| e.scale(0.5))).collect());
        assert!(matches!(joint_measurability_check(&ab, &c, 16), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn sharp_orthogonal_qubits_are_incompatible() {
        // σz and σx measurements: compatible only with visibility ≤ 1/√2.
        let a = Povm::from_weighted_axes(&[1.0, 1.0], &[Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)]);
        let b = Povm::from_weighted_axes(&[1.0, 1.0], &[Vec3::new(1.0, 0.0, 0.0), Vec3::new(-1.0, 0.0, 0.0)]);
        assert_eq!(joint_measurability_check(&a, &b, 64).unwrap().verdict, Compatibility::Incompatible);
        let t = noise_threshold(&a, &b, 256, 1e-4).unwrap();
        let exact = 1.0 / 2f64.sqrt();
        assert!(t.compatible_up_to <= exact + 1e-4 && t.incompatible_from >= exact - 1e-4, "{t:?}");
        assert!(t.incompatible_from - t.compatible_up_to < 2e-3, "{t:?}");
    }
}
