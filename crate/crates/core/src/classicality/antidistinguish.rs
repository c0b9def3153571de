use crate::error::{Error, Result};
use crate::qubit::{DensityState, Effect, Povm, Vec3};
use crate::scalar::Real;

/// `{(2/3)(I − π_b)}` for three pure states whose Bloch vectors sum to zero;
/// outcome `b` never occurs on state `b`.
pub fn antidistinguishing_povm<T: Real>(states: &[DensityState<T>; 3], tol: T) -> Result<Povm<T>> {
    if let Some(b) = states.iter().position(|s| !s.is_pure(tol)) {
        return Err(Error::Domain(format!("state {b} is not pure")));
    }
    let sum: Vec3<T> = states.iter().map(DensityState::bloch).sum();
    if sum.norm() > tol {
        return Err(Error::Domain(format!(
            "Bloch vectors sum to norm {}, not zero",
            sum.norm().to_f64_lossy()
        )));
    }
    let two_thirds = T::lit(2.0 / 3.0);
    let effects: Vec<Effect<T>> = states
        .iter()
        .map(|s| Effect::scaled_projector(two_thirds, -s.bloch()))
        .collect();
    Ok(Povm::new(effects))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{born_probability, rotation_matrix};
    use std::f64::consts::PI;

    fn trine() -> [DensityState<f64>; 3] {
        std::array::from_fn(|b| DensityState::pure_xz(2.0 * PI * b as f64 / 3.0))
    }

    #[test]
    fn trine_is_antidistinguished() {
        let povm = antidistinguishing_povm(&trine(), 1e-9).unwrap();
        assert!(povm.validate(1e-12).pass);
        for (b, s) in trine().iter().enumerate() {
            assert!(born_probability(s, &povm.effects()[b]).abs() < 1e-14);
        }
    }

    #[test]
    fn rotated_trine() {
        let m = rotation_matrix(Vec3::new(1.0, 2.0, -0.5), 0.83);
        let states = trine().map(|s| DensityState::from_bloch(s.bloch().transform(&m), 1e-9).unwrap());
        let povm = antidistinguishing_povm(&states, 1e-9).unwrap();
        for (b, s) in states.iter().enumerate() {
            assert!(born_probability(s, &povm.effects()[b]).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_trine() {
        let up = DensityState::pure_xz(0.0);
        let states = [up, up, up.antipode()];
        assert!(matches!(antidistinguishing_povm(&states, 1e-9), Err(Error::Domain(_))));
        let mixed = [DensityState::maximally_mixed(); 3];
        assert!(antidistinguishing_povm(&mixed, 1e-9).is_err());
    }
}
