#![allow(dead_code)]

use ctxgame::classical::ClassicalStrategy;
use ctxgame::game::{complete_preparations, GameStrategy};
use ctxgame::lp::LinearProgram;
use ctxgame::qubit::{DensityState, Effect, PauliOperator, Povm, Vec3};
use num_complex::Complex64;
use rand::Rng;

pub fn unit_vector<R: Rng>(rng: &mut R) -> Vec3<f64> {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v.scale(1.0 / n);
        }
    }
}

pub fn ball_vector<R: Rng>(rng: &mut R) -> Vec3<f64> {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

pub fn random_state<R: Rng>(rng: &mut R) -> DensityState<f64> {
    DensityState::from_bloch(ball_vector(rng), 0.0).unwrap()
}

/// `E_b = S^{-1/2} A_b S^{-1/2}` for random positive `A_b`. With `axis` set,
/// every `A_b` is diagonal along it and so is every `E_b`.
pub fn random_povm<R: Rng>(rng: &mut R, outcomes: usize, axis: Option<Vec3<f64>>) -> Povm<f64> {
    let raw: Vec<PauliOperator<f64>> = (0..outcomes)
        .map(|_| {
            let w = rng.gen_range(0.05..1.0);
            let v = match axis {
                Some(n) => n.scale(rng.gen_range(-1.0..1.0)),
                None => ball_vector(rng),
            };
            PauliOperator::new(w, v.scale(w))
        })
        .collect();
    let total: PauliOperator<f64> = raw.iter().copied().sum();
    let root = total.map_spectrum(|x| 1.0 / x.sqrt());
    Povm::new(raw.iter().map(|a| Effect::from_operator(root.sandwich(a))).collect())
}

/// Random preparations meeting parity concealment, paired with a random
/// three-outcome POVM.
pub fn random_certified_strategy<R: Rng>(rng: &mut R) -> GameStrategy<f64> {
    loop {
        let rho_x0 = [random_state(rng), random_state(rng), random_state(rng)];
        if let Ok(preps) = complete_preparations(&rho_x0, 0.0) {
            return GameStrategy::new(preps, random_povm(rng, 3, None), 1e-9).unwrap();
        }
    }
}

/// Random strategy satisfying both classical constraints, by rejection.
pub fn random_classical_strategy<R: Rng>(rng: &mut R) -> ClassicalStrategy<f64> {
    let simplex = |rng: &mut R| {
        let w: [f64; 3] = std::array::from_fn(|_| -rng.gen_range(1e-12f64..1.0).ln());
        let s: f64 = w.iter().sum();
        w.map(|x| x / s)
    };
    loop {
        let (p00, p11, p01) = (rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>());
        let p20 = p00 + p11 - p01;
        let kappa = (p00 + p11) / 2.0;
        // Σ_x p_x0 = Σ_x p_x1 = 3κ and p10 + p21 = 2κ.
        let p10 = 3.0 * kappa - p00 - p20;
        let p21 = 2.0 * kappa - p10;
        let p = [[p00, p01], [p10, p11], [p20, p21]];
        if p.iter().flatten().all(|&v| (0.0..=1.0).contains(&v)) {
            return ClassicalStrategy {
                p,
                s: simplex(rng),
                r: simplex(rng),
            };
        }
    }
}

pub fn to_matrix(op: &PauliOperator<f64>) -> [[Complex64; 2]; 2] {
    let [x, y, z] = op.vec.0;
    let s = op.scalar;
    [
        [Complex64::new(s + z, 0.0), Complex64::new(x, -y)],
        [Complex64::new(x, y), Complex64::new(s - z, 0.0)],
    ]
}

pub fn matrix_trace_product(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Complex64 {
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for k in 0..2 {
            t += a[i][k] * b[k][i];
        }
    }
    t
}

/// Eigenvalues of a Hermitian 2×2 matrix from its characteristic polynomial.
pub fn matrix_eigenvalues(m: &[[Complex64; 2]; 2]) -> (f64, f64) {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr / 4.0 - det).sqrt();
    let (lo, hi) = (tr / 2.0 - disc, tr / 2.0 + disc);
    (lo.re.min(hi.re), lo.re.max(hi.re))
}

/// Solves a square system by Gaussian elimination with partial pivoting.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                for c in col..n {
                    a[row][c] -= f * a[col][c];
                }
                b[row] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Best objective over all vertices of `{Ax = b, l ≤ x ≤ u}` (finite bounds),
/// or `None` when no vertex is feasible.
pub fn vertex_enumeration(lp: &LinearProgram<f64>) -> Option<f64> {
    let n = lp.objective.len();
    let m = lp.eq_rhs.len();
    let mut best: Option<f64> = None;
    for basis in 0u32..(1 << n) {
        if basis.count_ones() as usize != m {
            continue;
        }
        let free: Vec<usize> = (0..n).filter(|&j| basis >> j & 1 == 1).collect();
        let fixed: Vec<usize> = (0..n).filter(|&j| basis >> j & 1 == 0).collect();
        for pattern in 0u32..(1 << fixed.len()) {
            let mut x = vec![0.0; n];
            for (t, &j) in fixed.iter().enumerate() {
                x[j] = if pattern >> t & 1 == 1 { lp.upper[j] } else { lp.lower[j] };
            }
            let a: Vec<Vec<f64>> = lp.eq_matrix.iter().map(|row| free.iter().map(|&j| row[j]).collect()).collect();
            let rhs: Vec<f64> = lp
                .eq_matrix
                .iter()
                .zip(&lp.eq_rhs)
                .map(|(row, &r)| r - fixed.iter().map(|&j| row[j] * x[j]).sum::<f64>())
                .collect();
            let Some(sol) = solve_square(a, rhs) else { continue };
            for (&j, &v) in free.iter().zip(&sol) {
                x[j] = v;
            }
            if (0..n).all(|j| x[j] >= lp.lower[j] - 1e-9 && x[j] <= lp.upper[j] + 1e-9) {
                let value: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(value, |b: f64| b.max(value)));
            }
        }
    }
    best
}

/// Random box-bounded LP with at most 8 variables and 1–3 equalities; most
/// instances are feasible by construction.
pub fn random_lp<R: Rng>(rng: &mut R) -> LinearProgram<f64> {
    let n = rng.gen_range(2..=8);
    let m = rng.gen_range(1..=3.min(n - 1));
    let mut lp = LinearProgram::new();
    let mut interior = Vec::with_capacity(n);
    for j in 0..n {
        let lower = rng.gen_range(-2.0..1.0);
        let upper = lower + rng.gen_range(0.5..3.0);
        let idx = lp.add_variable(format!("x{j}"), lower, upper);
        lp.set_objective(idx, rng.gen_range(-1.0..1.0));
        interior.push(rng.gen_range(lower..upper));
    }
    let infeasible = rng.gen_bool(0.15);
    for _ in 0..m {
        let row: Vec<(usize, f64)> = (0..n).map(|j| (j, rng.gen_range(-1.0..1.0))).collect();
        let rhs = if infeasible {
            rng.gen_range(-20.0..20.0)
        } else {
            row.iter().map(|&(j, a)| a * interior[j]).sum()
        };
        lp.add_equality(&row, rhs);
    }
    lp
}
