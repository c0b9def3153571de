//! Coherence detection. A POVM is free with respect to the basis along a
//! unit Bloch direction `n` when `Tr[Λ(ρ)E] = Tr[ρE]` for every state, where
//! `Λ` dephases in that basis; for qubits this holds iff every effect's
//! Bloch vector is parallel or antiparallel to `n`.

use crate::error::{Error, Result};
use crate::qubit::{DensityState, Povm, Vec3};
use crate::scalar::Real;

fn unit<T: Real>(direction: Vec3<T>) -> Result<Vec3<T>> {
    direction
        .normalized()
        .ok_or_else(|| Error::Domain("basis direction has zero length".into()))
}

/// Projects the Bloch vector onto the basis direction.
pub fn dephase<T: Real>(state: &DensityState<T>, basis_direction: Vec3<T>) -> Result<DensityState<T>> {
    let n = unit(basis_direction)?;
    let b = state.bloch();
    DensityState::from_bloch(n.scale(b.dot(&n)), T::tol(1e-12))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreePovmReport<T> {
    pub free: bool,
    /// Largest off-axis Bloch magnitude `|v − (v·n)n|` over the effects.
    pub max_off_axis: T,
    pub worst_effect: usize,
    /// Pure state maximizing `|Tr[(ρ − Λρ)E]|` for the worst effect; its
    /// value equals `max_off_axis`.
    pub witness: Option<DensityState<T>>,
}

pub fn is_free_povm<T: Real>(povm: &Povm<T>, basis_direction: Vec3<T>, tol: T) -> Result<FreePovmReport<T>> {
    let n = unit(basis_direction)?;
    let off: Vec<Vec3<T>> = povm
        .effects()
        .iter()
        .map(|e| e.vec - n.scale(e.vec.dot(&n)))
        .collect();
    let (worst_effect, max_off_axis) = off
        .iter()
        .map(Vec3::norm)
        .enumerate()
        .fold((0, T::zero()), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let free = max_off_axis <= tol;
    let witness = if free {
        None
    } else {
        let dir = off[worst_effect].normalized().expect("nonzero off-axis part");
        Some(DensityState::from_bloch(dir, T::tol(1e-12))?)
    };
    Ok(FreePovmReport {
        free,
        max_off_axis,
        worst_effect,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnyBasisReport<T> {
    pub free: bool,
    /// All effect Bloch vectors pairwise collinear.
    pub collinear: bool,
    /// All pairwise commutators vanish.
    pub commuting: bool,
    /// Every effect is diagonal in the basis of the longest Bloch vector.
    pub diagonal: bool,
    /// A basis direction in which the POVM is free, when one exists.
    pub basis: Option<Vec3<T>>,
}

/// Whether some basis makes the POVM free; three equivalent tests are run
/// and reported separately.
pub fn is_free_in_any_basis<T: Real>(povm: &Povm<T>, tol: T) -> Result<AnyBasisReport<T>> {
    let effects = povm.effects();
    let mut collinear = true;
    let mut commuting = true;
    for (i, a) in effects.iter().enumerate() {
        for b in &effects[i + 1..] {
            collinear &= a.vec.cross(&b.vec).norm() <= tol;
            commuting &= a.operator().commutator_axis(&b.operator()).norm() <= tol;
        }
    }
    let longest = effects
        .iter()
        .map(|e| e.vec)
        .fold(Vec3::zero(), |best, v| if v.norm() > best.norm() { v } else { best });
    let axis = longest
        .normalized()
        .unwrap_or_else(|| Vec3::new(T::zero(), T::zero(), T::one()));
    // Off-axis parts are compared at the scale of |v|·|longest|, matching the
    // cross-product tests above.
    let scaled_tol = if longest.norm() > T::zero() { tol / longest.norm() } else { tol };
    let diagonal = is_free_povm(povm, axis, scaled_tol)?.free;
    let free = collinear && commuting && diagonal;
    Ok(AnyBasisReport {
        free,
        collinear,
        commuting,
        diagonal,
        basis: free.then_some(axis),
    })
}
