//! The six-input, three-outcome communication game.
//!
//! Alice receives `(x, a) ∈ {0,1,2}×{0,1}` uniformly and sends a qubit
//! `ρ_xa`; Bob measures a three-outcome POVM and wins when he outputs
//! `x ⊕₃ a`. Parity concealment requires the transmitted states to carry no
//! information about `a` or about `x ⊕₃ 2a`, which at the operator level
//! reads
//!
//! * `Σ_x ρ_x0 = Σ_x ρ_x1`
//! * `ρ_j0 + ρ_(j⊕1)1` is the same operator for every `j`
//!   (the pairs with `x ⊕₃ 2a = j`).

use crate::error::{Error, Result};
use crate::qubit::{born_probability, DensityState, Povm, Vec3};
use crate::scalar::Real;

/// Preparations indexed `[x][a]`.
pub type Preparations<T> = [[DensityState<T>; 2]; 3];

/// Outcome that wins on input `(x, a)`.
pub fn winning_outcome(x: usize, a: usize) -> usize {
    (x + a) % 3
}

/// The value `x ⊕₃ 2a` that parity concealment hides.
pub fn hidden_parity(x: usize, a: usize) -> usize {
    (x + 2 * a) % 3
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameStrategy<T> {
    preps: Preparations<T>,
    povm: Povm<T>,
}

impl<T: Real> GameStrategy<T> {
    /// Checks the POVM (three outcomes, valid at `tol`); states are valid by construction.
    pub fn new(preps: Preparations<T>, povm: Povm<T>, tol: T) -> Result<Self> {
        if povm.len() != 3 {
            return Err(Error::Domain(format!(
                "game needs a three-outcome POVM, got {} outcomes",
                povm.len()
            )));
        }
        let report = povm.validate(tol);
        if !report.pass {
            return Err(Error::InvalidPovm {
                residual: report.completeness_residual.to_f64_lossy(),
                min_eigenvalue: report.min_eigenvalue.to_f64_lossy(),
            });
        }
        Ok(Self { preps, povm })
    }

    pub fn preps(&self) -> &Preparations<T> {
        &self.preps
    }

    pub fn povm(&self) -> &Povm<T> {
        &self.povm
    }

    /// `(1/6) Σ_{x,a} Tr[ρ_xa E_{x⊕a}]`.
    pub fn success_probability(&self) -> T {
        let effects = self.povm.effects();
        let mut total = T::zero();
        for x in 0..3 {
            for a in 0..2 {
                total = total + born_probability(&self.preps[x][a], &effects[winning_outcome(x, a)]);
            }
        }
        total / T::lit(6.0)
    }

    pub fn is_constraint_certified(&self, tol: T) -> bool {
        check_parity_concealment(&self.preps, tol).pass
    }
}

pub fn success_probability<T: Real>(strategy: &GameStrategy<T>) -> T {
    strategy.success_probability()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityReport<T> {
    /// Max-abs Pauli-coordinate difference of `(1/3)Σ_x ρ_x0` and `(1/3)Σ_x ρ_x1`.
    pub a_residual: T,
    /// Largest pairwise max-abs difference among the three `x⊕₃2a` partition sums.
    pub partition_residual: T,
    pub pass: bool,
}

pub fn check_parity_concealment<T: Real>(preps: &Preparations<T>, tol: T) -> ParityReport<T> {
    let third = T::lit(1.0 / 3.0);
    let sum_a = |a: usize| {
        preps
            .iter()
            .map(|row| row[a].operator())
            .sum::<crate::qubit::PauliOperator<T>>()
            .scale(third)
    };
    let a_residual = sum_a(0).max_abs_diff(&sum_a(1));

    let mut partitions = [crate::qubit::PauliOperator::zero(); 3];
    for (x, row) in preps.iter().enumerate() {
        for (a, state) in row.iter().enumerate() {
            let j = hidden_parity(x, a);
            partitions[j] = partitions[j] + state.operator();
        }
    }
    let mut partition_residual = T::zero();
    for i in 0..3 {
        for j in (i + 1)..3 {
            partition_residual = partition_residual.max(partitions[i].max_abs_diff(&partitions[j]));
        }
    }
    ParityReport {
        a_residual,
        partition_residual,
        pass: a_residual <= tol && partition_residual <= tol,
    }
}

/// Bloch vectors of `ρ_x1 = (2/3)Σ_y ρ_y0 − ρ_(x⊕₃2)0`.
pub fn derived_bloch<T: Real>(bloch_x0: &[Vec3<T>; 3]) -> [Vec3<T>; 3] {
    let mean = (bloch_x0[0] + bloch_x0[1] + bloch_x0[2]).scale(T::lit(2.0 / 3.0));
    std::array::from_fn(|x| mean - bloch_x0[(x + 2) % 3])
}

/// Completes three `a = 0` states to the unique six-state family meeting both
/// parity-concealment constraints. Fails if a derived `ρ_x1` is not a state.
pub fn complete_preparations<T: Real>(
    rho_x0: &[DensityState<T>; 3],
    tol: T,
) -> Result<Preparations<T>> {
    let derived = derived_bloch(&rho_x0.map(|s| s.bloch()));
    let mut out = [[DensityState::maximally_mixed(); 2]; 3];
    for x in 0..3 {
        out[x][0] = rho_x0[x];
        out[x][1] = DensityState::from_bloch(derived[x], tol).map_err(|_| {
            Error::InfeasiblePreparation {
                index: x,
                norm: derived[x].norm().to_f64_lossy(),
            }
        })?;
    }
    Ok(out)
}
