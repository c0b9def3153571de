//! Noncontextual bound as a linear program.
//!
//! The ontic space splits into three regions `Λ₀, Λ₁, Λ₂`. The variables are
//! the region-aggregated preparation masses `A_xa = Σ_{Λ₀} μ_xa`,
//! `B_xa = Σ_{Λ₁} μ_xa`, `C_xa = Σ_{Λ₂} μ_xa`, and the masses `p_i`, `q_i` of
//! the two hidden-parity mixtures `γ₁`, `γ₂` on each region. In region `i`
//! the response function puts weight `α_{σ(i)}` on outcome `σ(i)` and the
//! remaining `1 − α_{σ(i)}` on outcome `σ(i⊖1)`; `σ = id` is the default
//! assignment.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpSolution, LpStatus};
use crate::quantum_opt::AlphaTriple;
use crate::scalar::Real;

/// Variable order of [`build_nc_lp`].
pub const NC_VARIABLES: [&str; 24] = [
    "A00", "A01", "A10", "A11", "A20", "A21", "B00", "B01", "B10", "B11", "B20", "B21", "C00",
    "C01", "C10", "C11", "C20", "C21", "p0", "p1", "p2", "q0", "q1", "q2",
];

/// Labels of the equality rows of [`build_nc_lp`], in order.
pub const NC_ROW_LABELS: [&str; 23] = [
    "g1: A00 + A11 = 2p0",
    "g1: A21 + B21 - C10 = 1 - 2p2",
    "g1: A20 - B01 + C20 = 1 - 2p1",
    "g1: B10 + B21 = 2p1",
    "g1: A00 + B00 - C11 = 1 - 2p2",
    "g1: -A20 + B01 + C01 = 1 - 2p0",
    "g1: C20 + C01 = 2p2",
    "g1: A11 - B00 + C11 = 1 - 2p1",
    "g1: -A21 + B10 + C10 = 1 - 2p0",
    "g2: A00 + A20 - B10 - C10 = 3q0 - 1",
    "g2: A11 + A21 - B01 - C01 = 3q0 - 1",
    "g2: B00 + B10 - C20 - A20 = 3q1 - 1",
    "g2: B21 + B01 - A11 - C11 = 3q1 - 1",
    "g2: C10 + C20 - B00 - A00 = 3q2 - 1",
    "g2: C01 + C21 - B11 - A11 = 3q2 - 1",
    "norm: A00 + B00 + C00 = 1",
    "norm: A01 + B01 + C01 = 1",
    "norm: A10 + B10 + C10 = 1",
    "norm: A11 + B11 + C11 = 1",
    "norm: A20 + B20 + C20 = 1",
    "norm: A21 + B21 + C21 = 1",
    "sum p = 1",
    "sum q = 1",
];

/// All permutations of the three outcomes, identity first.
pub const ASSIGNMENT_PATTERNS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Index of mass `region ∈ {A,B,C}`, input `(x, a)`.
pub fn mass_index(region: usize, x: usize, a: usize) -> usize {
    6 * region + 2 * x + a
}

const P: usize = 18;
const Q: usize = 21;

#[derive(Debug, Clone, PartialEq)]
pub struct NcLpVariables<T> {
    /// `masses[region][x][a]`.
    pub masses: [[[T; 2]; 3]; 3],
    pub p: [T; 3],
    pub q: [T; 3],
}

impl<T: Real> NcLpVariables<T> {
    /// Every mass `1/3`, `p = q = (1/3, 1/3, 1/3)`.
    pub fn uniform() -> Self {
        let t = T::lit(1.0 / 3.0);
        Self {
            masses: [[[t; 2]; 3]; 3],
            p: [t; 3],
            q: [t; 3],
        }
    }

    pub fn from_vector(x: &[T]) -> Result<Self> {
        if x.len() != NC_VARIABLES.len() {
            return Err(Error::Domain(format!("expected 24 values, got {}", x.len())));
        }
        Ok(Self {
            masses: std::array::from_fn(|r| {
                std::array::from_fn(|i| std::array::from_fn(|a| x[mass_index(r, i, a)]))
            }),
            p: [x[P], x[P + 1], x[P + 2]],
            q: [x[Q], x[Q + 1], x[Q + 2]],
        })
    }

    pub fn to_vector(&self) -> Vec<T> {
        let mut v: Vec<T> = self.masses.iter().flatten().flatten().copied().collect();
        v.extend_from_slice(&self.p);
        v.extend_from_slice(&self.q);
        v
    }
}

/// Objective coefficients for region-to-outcome assignment `sigma`.
fn objective_terms<T: Real>(alpha: &[T; 3], sigma: &[usize; 3]) -> Vec<(usize, T)> {
    let sixth = T::lit(1.0 / 6.0);
    // Inputs (x, a) won by outcome b: (b, 0) and (b ⊖ 1, 1).
    let winners = |b: usize| [(b, 0), ((b + 2) % 3, 1)];
    let mut terms = Vec::with_capacity(12);
    for region in 0..3 {
        let main = sigma[region];
        let partner = sigma[(region + 2) % 3];
        for (x, a) in winners(main) {
            terms.push((mass_index(region, x, a), sixth * alpha[main]));
        }
        for (x, a) in winners(partner) {
            terms.push((mass_index(region, x, a), sixth * (T::one() - alpha[main])));
        }
    }
    terms
}

/// The LP under the default assignment.
pub fn build_nc_lp<T: Real>(alpha: &AlphaTriple<T>) -> LinearProgram<T> {
    build_nc_lp_with_assignment(alpha, &ASSIGNMENT_PATTERNS[0])
}

pub fn build_nc_lp_with_assignment<T: Real>(
    alpha: &AlphaTriple<T>,
    sigma: &[usize; 3],
) -> LinearProgram<T> {
    let mut lp = LinearProgram::new();
    for name in NC_VARIABLES {
        lp.add_variable(name, T::zero(), T::one());
    }
    for (var, coef) in objective_terms(&alpha.values(), sigma) {
        lp.objective[var] = lp.objective[var] + coef;
    }

    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let v = |name: &str| lp_index(name);
    let eq = |lp: &mut LinearProgram<T>, terms: &[(&str, T)], rhs: T| {
        let t: Vec<(usize, T)> = terms.iter().map(|&(n, c)| (v(n), c)).collect();
        lp.add_equality(&t, rhs);
    };

    // γ₁ rows, with p moved to the left-hand side.
    eq(&mut lp, &[("A00", one), ("A11", one), ("p0", -two)], T::zero());
    eq(&mut lp, &[("A21", one), ("B21", one), ("C10", -one), ("p2", two)], one);
    eq(&mut lp, &[("A20", one), ("B01", -one), ("C20", one), ("p1", two)], one);
    eq(&mut lp, &[("B10", one), ("B21", one), ("p1", -two)], T::zero());
    eq(&mut lp, &[("A00", one), ("B00", one), ("C11", -one), ("p2", two)], one);
    eq(&mut lp, &[("A20", -one), ("B01", one), ("C01", one), ("p0", two)], one);
    eq(&mut lp, &[("C20", one), ("C01", one), ("p2", -two)], T::zero());
    eq(&mut lp, &[("A11", one), ("B00", -one), ("C11", one), ("p1", two)], one);
    eq(&mut lp, &[("A21", -one), ("B10", one), ("C10", one), ("p0", two)], one);

    // γ₂ rows, with q moved to the left-hand side.
    eq(&mut lp, &[("A00", one), ("A20", one), ("B10", -one), ("C10", -one), ("q0", -three)], -one);
    eq(&mut lp, &[("A11", one), ("A21", one), ("B01", -one), ("C01", -one), ("q0", -three)], -one);
    eq(&mut lp, &[("B00", one), ("B10", one), ("C20", -one), ("A20", -one), ("q1", -three)], -one);
    eq(&mut lp, &[("B21", one), ("B01", one), ("A11", -one), ("C11", -one), ("q1", -three)], -one);
    eq(&mut lp, &[("C10", one), ("C20", one), ("B00", -one), ("A00", -one), ("q2", -three)], -one);
    eq(&mut lp, &[("C01", one), ("C21", one), ("B11", -one), ("A11", -one), ("q2", -three)], -one);

    for x in 0..3 {
        for a in 0..2 {
            let terms: Vec<(usize, T)> = (0..3).map(|r| (mass_index(r, x, a), one)).collect();
            lp.add_equality(&terms, one);
        }
    }
    lp.add_equality(&[(P, one), (P + 1, one), (P + 2, one)], one);
    lp.add_equality(&[(Q, one), (Q + 1, one), (Q + 2, one)], one);
    lp
}

fn lp_index(name: &str) -> usize {
    NC_VARIABLES
        .iter()
        .position(|&n| n == name)
        .unwrap_or_else(|| panic!("unknown variable {name}"))
}

/// Labels of the rows of `lp` violated by more than `tol` at `x`.
pub fn violated_rows<T: Real>(lp: &LinearProgram<T>, x: &[T], tol: T) -> Vec<String> {
    lp.eq_matrix
        .iter()
        .zip(&lp.eq_rhs)
        .enumerate()
        .filter(|(_, (row, &b))| {
            let lhs = row.iter().zip(x).fold(T::zero(), |s, (&c, &v)| s + c * v);
            (lhs - b).abs() > tol
        })
        .map(|(i, _)| NC_ROW_LABELS.get(i).map_or_else(|| format!("c{i}"), |s| s.to_string()))
        .collect()
}

fn optimal<T: Real>(lp: &LinearProgram<T>) -> Result<LpSolution<T>> {
    let sol = solve(lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol),
        LpStatus::Infeasible => Err(Error::LpStatus("infeasible")),
        LpStatus::Unbounded => Err(Error::LpStatus("unbounded")),
    }
}

pub fn nc_value<T: Real>(alpha: &AlphaTriple<T>) -> Result<T> {
    Ok(optimal(&build_nc_lp(alpha))?.value)
}

/// Optimal value together with the maximizing masses.
pub fn nc_solution<T: Real>(alpha: &AlphaTriple<T>) -> Result<(T, NcLpVariables<T>)> {
    let sol = optimal(&build_nc_lp(alpha))?;
    Ok((sol.value, NcLpVariables::from_vector(&sol.x)?))
}

/// Values under all six assignment patterns, in [`ASSIGNMENT_PATTERNS`] order.
pub fn nc_values_all_assignments<T: Real>(alpha: &AlphaTriple<T>) -> Result<[T; 6]> {
    let mut out = [T::zero(); 6];
    for (slot, sigma) in out.iter_mut().zip(ASSIGNMENT_PATTERNS.iter()) {
        *slot = optimal(&build_nc_lp_with_assignment(alpha, sigma))?.value;
    }
    Ok(out)
}

/// `(α₀, P_NC)` along `α₁ = α₂ = (2 − α₀)/2`.
pub fn nc_curve<T: Real>(grid: &[T]) -> Result<Vec<(T, T)>> {
    grid.par_iter()
        .map(|&alpha0| Ok((alpha0, nc_value(&AlphaTriple::from_alpha0(alpha0)?)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalMax<T> {
    pub value: T,
    pub alpha: [T; 3],
    pub points_evaluated: usize,
}

/// Points `(α₀, α₁, 2 − α₀ − α₁)` of the simplex slice on a square grid of
/// spacing `step` centered on `center` with `half_width` cells each side.
fn slice_points<T: Real>(center: [T; 2], step: T, half_width: i64) -> Vec<[T; 3]> {
    let mut points = Vec::new();
    for i in -half_width..=half_width {
        for j in -half_width..=half_width {
            let a0 = center[0] + step * T::lit(i as f64);
            let a1 = center[1] + step * T::lit(j as f64);
            let a2 = T::lit(2.0) - a0 - a1;
            let eps = T::lit(1e-12);
            let inside = |a: T| a >= -eps && a <= T::one() + eps;
            if inside(a0) && inside(a1) && inside(a2) {
                let clamp = |a: T| a.max(T::zero()).min(T::one());
                points.push([clamp(a0), clamp(a1), clamp(T::lit(2.0) - clamp(a0) - clamp(a1))]);
            }
        }
    }
    points
}

fn best_of<T: Real>(points: &[[T; 3]]) -> Result<(T, [T; 3])> {
    let values: Vec<Result<T>> = points
        .par_iter()
        .map(|&a| match AlphaTriple::new(a) {
            Ok(alpha) => nc_value(&alpha),
            Err(_) => Ok(T::neg_infinity()),
        })
        .collect();
    let mut best = (T::neg_infinity(), points[0]);
    for (v, &a) in values.into_iter().zip(points) {
        let v = v?;
        if v > best.0 {
            best = (v, a);
        }
    }
    Ok(best)
}

/// Maximum of `P_NC` over `{α : Σα = 2, α_b ∈ [0,1]}`: a sweep at spacing
/// `step`, then two ten-fold refinements around the best point.
pub fn nc_global_max<T: Real>(step: T) -> Result<GlobalMax<T>> {
    let half = (T::one() / step).round().to_f64_lossy() as i64;
    let coarse = slice_points([T::zero(), T::zero()], step, half);
    let mut evaluated = coarse.len();
    let (mut value, mut alpha) = best_of(&coarse)?;
    let mut h = step;
    for _ in 0..2 {
        h = h / T::lit(10.0);
        let fine = slice_points([alpha[0], alpha[1]], h, 10);
        evaluated += fine.len();
        let (v, a) = best_of(&fine)?;
        if v > value {
            value = v;
            alpha = a;
        }
    }
    Ok(GlobalMax {
        value,
        alpha,
        points_evaluated: evaluated,
    })
}

/// Audit text of the LP at `alpha`: a header line, then the LP dump.
pub fn nc_lp_audit<T: Real>(alpha: &AlphaTriple<T>) -> String {
    let a = alpha.values();
    format!("# alpha = ({}, {}, {})\n{}", a[0], a[1], a[2], build_nc_lp(alpha).to_text())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(a: [f64; 3]) -> AlphaTriple<f64> {
        AlphaTriple::new(a).unwrap()
    }

    #[test]
    fn dimensions() {
        let lp = build_nc_lp(&AlphaTriple::<f64>::trine());
        assert_eq!(lp.num_variables(), 24);
        assert_eq!(lp.num_equalities(), 23);
        assert!(lp.validate().is_ok());
    }

    #[test]
    fn uniform_point_is_feasible_with_value_one_third() {
        let lp = build_nc_lp(&AlphaTriple::<f64>::trine());
        let x = NcLpVariables::uniform().to_vector();
        assert!(violated_rows(&lp, &x, 1e-12).is_empty());
        assert_eq!(lp.bound_violation(&x), 0.0);
        // (1/6)[(2/3)(2/3)·3 + (1/3)(2/3)·3]
        let expected = (1.0 / 6.0) * ((2.0 / 3.0) * (2.0 / 3.0) * 3.0 + (1.0 / 3.0) * (2.0 / 3.0) * 3.0);
        assert!((lp.objective_value(&x) - expected).abs() < 1e-15);
        assert!((expected - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn violated_rows_names_the_broken_constraint() {
        let lp = build_nc_lp(&AlphaTriple::<f64>::trine());
        let mut x = NcLpVariables::uniform().to_vector();
        x[lp_index("C21")] = 0.9;
        let broken = violated_rows(&lp, &x, 1e-9);
        assert_eq!(broken, vec![NC_ROW_LABELS[14].to_string(), NC_ROW_LABELS[20].to_string()]);
    }

    #[test]
    fn anchor_values() {
        assert!((nc_value(&alpha([2.0 / 3.0; 3])).unwrap() - 0.5).abs() < 1e-9);
        assert!((nc_value(&alpha([1.0, 0.5, 0.5])).unwrap() - 7.0 / 12.0).abs() < 1e-9);
        assert!((nc_value(&alpha([0.0, 1.0, 1.0])).unwrap() - 7.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn solution_is_feasible() {
        let (value, vars) = nc_solution(&alpha([0.3, 0.85, 0.85])).unwrap();
        let lp = build_nc_lp(&alpha([0.3, 0.85, 0.85]));
        let x = vars.to_vector();
        assert!(lp.equality_residual(&x) < 1e-9);
        assert!(lp.bound_violation(&x) < 1e-9);
        assert!((lp.objective_value(&x) - value).abs() < 1e-12);
    }

    #[test]
    fn curve_anchor_difference() {
        let curve = nc_curve(&[2.0_f64 / 3.0, 1.0]).unwrap();
        assert!((curve[0].1 - 0.5).abs() < 1e-9);
        assert!((curve[1].1 - curve[0].1 - 1.0 / 12.0).abs() < 1e-8);
    }

    #[test]
    fn assignment_patterns_agree() {
        for a in [[2.0 / 3.0; 3], [1.0, 0.5, 0.5], [0.2, 0.9, 0.9], [0.5, 0.6, 0.9]] {
            let values = nc_values_all_assignments(&alpha(a)).unwrap();
            for v in values {
                assert!((v - values[0]).abs() < 1e-9, "{a:?}: {values:?}");
            }
        }
    }

    #[test]
    fn audit_dump_lists_every_row() {
        let text = nc_lp_audit(&AlphaTriple::<f64>::trine());
        assert!(text.starts_with("# alpha = "));
        assert_eq!(text.lines().filter(|l| l.starts_with('c')).count(), 23);
        assert_eq!(text.lines().filter(|l| l.starts_with("bound:")).count(), 24);
    }

    #[test]
    fn single_precision_anchor() {
        let v = nc_value(&AlphaTriple::<f32>::trine()).unwrap();
        assert!((v - 0.5).abs() < 1e-5);
    }
}
