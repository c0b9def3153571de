use crate::error::{Error, Result};
use crate::qubit::{DensityState, Povm};
use crate::scalar::Real;

/// Six states in two partitions of three, each state with prior `1/6`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedEnsemble<T> {
    pub part0: [DensityState<T>; 3],
    pub part1: [DensityState<T>; 3],
}

impl<T: Real> PartitionedEnsemble<T> {
    pub fn new(part0: [DensityState<T>; 3], part1: [DensityState<T>; 3]) -> Self {
        Self { part0, part1 }
    }

    pub fn part(&self, k: usize) -> &[DensityState<T>; 3] {
        if k == 0 {
            &self.part0
        } else {
            &self.part1
        }
    }
}

/// `ℰ₀` at Bloch angles `0°, 144°, 216°` and `ℰ₁` at `72°, 216°, 288°`.
pub fn witness_ensemble<T: Real>() -> PartitionedEnsemble<T> {
    let deg = |d: f64| DensityState::pure_xz(T::lit(d.to_radians()));
    PartitionedEnsemble::new(
        [deg(0.0), deg(144.0), deg(216.0)],
        [deg(72.0), deg(216.0), deg(288.0)],
    )
}

/// Pure states along the Bloch vectors of two three-outcome POVMs.
pub fn aligned_ensemble<T: Real>(first: &Povm<T>, second: &Povm<T>) -> Result<PartitionedEnsemble<T>> {
    let states = |povm: &Povm<T>| -> Result<[DensityState<T>; 3]> {
        if povm.len() != 3 {
            return Err(Error::Domain(format!("expected 3 outcomes, got {}", povm.len())));
        }
        let mut out = [DensityState::maximally_mixed(); 3];
        for (slot, e) in out.iter_mut().zip(povm.effects()) {
            let axis = e
                .vec
                .normalized()
                .ok_or_else(|| Error::Domain("effect has no Bloch direction".into()))?;
            *slot = DensityState::from_bloch(axis, T::tol(1e-12))?;
        }
        Ok(out)
    };
    Ok(PartitionedEnsemble::new(states(first)?, states(second)?))
}
