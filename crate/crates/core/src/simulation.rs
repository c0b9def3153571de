//! Simulation of odd-outcome equatorial POVMs by three-outcome POVMs.
//!
//! The target is `E_k = (2/n)π_k` with `π_k` the projector at Bloch angle
//! `2πk/n`. For each `o` the simulator `M^o` has elements `h₀π_o`,
//! `h₁π_{o+(n−1)/2}` and `h₁π_{o+(n+1)/2}`; mixing the `M^o` uniformly and
//! relabeling each element by its projector index reproduces the target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::qubit::{born_probability, DensityState, Effect, PauliOperator, Povm, Vec3};
use crate::scalar::Real;

fn check_odd(n: usize) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Domain(format!("n must be odd and at least 3, got {n}")));
    }
    Ok(())
}

fn projector_axis<T: Real>(n: usize, k: usize) -> Vec3<T> {
    Vec3::xz(T::lit(2.0) * T::PI() * T::from_usize_lossy(k % n) / T::from_usize_lossy(n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquatorialPovm<T> {
    n: usize,
    povm: Povm<T>,
}

impl<T: Real> EquatorialPovm<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn povm(&self) -> &Povm<T> {
        &self.povm
    }
}

/// `{(2/n)π_k}`, `k = 0..n`.
pub fn equatorial_povm<T: Real>(n: usize) -> Result<EquatorialPovm<T>> {
    check_odd(n)?;
    let weight = T::lit(2.0) / T::from_usize_lossy(n);
    let axes: Vec<Vec3<T>> = (0..n).map(|k| projector_axis(n, k)).collect();
    Ok(EquatorialPovm {
        n,
        povm: Povm::from_weighted_axes(&vec![weight; n], &axes),
    })
}

/// `(h₀, h₁) = (2cos(π/n), 1)/(1 + cos(π/n))`.
pub fn simulator_weights<T: Real>(n: usize) -> Result<(T, T)> {
    check_odd(n)?;
    let c = (T::PI() / T::from_usize_lossy(n)).cos();
    let d = T::one() + c;
    Ok((T::lit(2.0) * c / d, T::one() / d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatorPovm<T> {
    pub index: usize,
    /// Target outcome `k` of each of the three elements.
    pub labels: [usize; 3],
    pub povm: Povm<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatorSet<T> {
    pub n: usize,
    pub h0: T,
    pub h1: T,
    pub members: Vec<SimulatorPovm<T>>,
}

pub fn simulator_set<T: Real>(n: usize) -> Result<SimulatorSet<T>> {
    let (h0, h1) = simulator_weights::<T>(n)?;
    let half = (n - 1) / 2;
    let members = (0..n)
        .map(|o| {
            let labels = [o, (o + half) % n, (o + half + 1) % n];
            let axes = labels.map(|k| projector_axis::<T>(n, k));
            SimulatorPovm {
                index: o,
                labels,
                povm: Povm::from_weighted_axes(&[h0, h1, h1], &axes),
            }
        })
        .collect();
    Ok(SimulatorSet { n, h0, h1, members })
}

impl<T: Real> SimulatorSet<T> {
    /// `(1/n) Σ_o Σ_{elements labeled k} E`, for each `k`.
    pub fn mixture(&self) -> Vec<Effect<T>> {
        let weight = T::one() / T::from_usize_lossy(self.n);
        let mut out = vec![PauliOperator::zero(); self.n];
        for member in &self.members {
            for (e, &k) in member.povm.effects().iter().zip(&member.labels) {
                out[k] = out[k] + e.operator().scale(weight);
            }
        }
        out.into_iter().map(Effect::from_operator).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport<T> {
    pub n: usize,
    /// Max-abs Pauli-coordinate difference between mixture and target.
    pub element_residual: T,
    /// Largest outcome-probability difference over the sampled states.
    pub distribution_residual: T,
    pub states_checked: usize,
    pub simulators_valid: bool,
    pub pass: bool,
}

/// Element-wise and statistical check of the simulation at tolerance `tol`.
pub fn verify_simulation<T: Real>(n: usize, tol: T) -> Result<SimulationReport<T>> {
    let target = equatorial_povm::<T>(n)?;
    let set = simulator_set::<T>(n)?;
    let mixture = set.mixture();
    let element_residual = mixture
        .iter()
        .zip(target.povm.effects())
        .map(|(m, e)| m.operator().max_abs_diff(&e.operator()))
        .fold(T::zero(), T::max);
    let simulators_valid = set.members.iter().all(|m| m.povm.validate(tol).pass);

    const STATES: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let weight = T::one() / T::from_usize_lossy(n);
    let mut distribution_residual = T::zero();
    for _ in 0..STATES {
        let state = random_state::<T, _>(&mut rng);
        let mut simulated = vec![T::zero(); n];
        for member in &set.members {
            for (e, &k) in member.povm.effects().iter().zip(&member.labels) {
                simulated[k] = simulated[k] + weight * born_probability(&state, e);
            }
        }
        for (k, e) in target.povm.effects().iter().enumerate() {
            let diff = (simulated[k] - born_probability(&state, e)).abs();
            distribution_residual = distribution_residual.max(diff);
        }
    }
    Ok(SimulationReport {
        n,
        element_residual,
        distribution_residual,
        states_checked: STATES,
        simulators_valid,
        pass: simulators_valid && element_residual <= tol && distribution_residual <= tol,
    })
}

fn random_state<T: Real, R: Rng>(rng: &mut R) -> DensityState<T> {
    loop {
        let v = Vec3::new(
            T::lit(rng.gen_range(-1.0..1.0)),
            T::lit(rng.gen_range(-1.0..1.0)),
            T::lit(rng.gen_range(-1.0..1.0)),
        );
        if let Ok(s) = DensityState::from_bloch(v, T::zero()) {
            return s;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalityCertificate<T> {
    /// Rank of the effects as vectors `(w, v) ∈ ℝ⁴`.
    pub rank: usize,
    pub outcomes: usize,
    pub singular_values: Vec<T>,
    pub extremal: bool,
}

/// Rank-one POVMs are extremal iff their effects are linearly independent.
/// Errors with `NotApplicable` when some effect is not rank-one at `tol`.
pub fn is_extremal_rank_one<T: Real>(povm: &Povm<T>, tol: T) -> Result<ExtremalityCertificate<T>> {
    if let Some(b) = povm.effects().iter().position(|e| !e.is_rank_one(tol)) {
        return Err(Error::NotApplicable(format!("effect {b} is not rank-one")));
    }
    let rows: Vec<Vec<T>> = povm
        .effects()
        .iter()
        .map(|e| vec![e.weight, e.vec[0], e.vec[1], e.vec[2]])
        .collect();
    let sv = singular_values(&rows);
    let rank = sv.iter().filter(|&&s| s > T::tol(1e-9)).count();
    Ok(ExtremalityCertificate {
        rank,
        outcomes: povm.len(),
        extremal: rank == povm.len(),
        singular_values: sv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::trine_povm;
    use std::f64::consts::PI;

    #[test]
    fn equatorial_domain() {
        assert!(equatorial_povm::<f64>(4).is_err());
        assert!(equatorial_povm::<f64>(1).is_err());
        assert!(simulator_set::<f64>(6).is_err());
        let e = equatorial_povm::<f64>(3).unwrap();
        let trine = trine_povm([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        for (a, b) in e.povm().effects().iter().zip(trine.effects()) {
            assert!(a.operator().max_abs_diff(&b.operator()) < 1e-15);
        }
    }

    #[test]
    fn five_outcome_weights() {
        let set = simulator_set::<f64>(5).unwrap();
        assert!((set.h0 - 0.894_427_191_0).abs() < 1e-9);
        assert!((set.h1 - 0.552_786_404_5).abs() < 1e-9);
        assert_eq!(set.members[0].labels, [0, 2, 3]);
        assert_eq!(set.members[1].labels, [1, 3, 4]);
    }

    #[test]
    fn three_outcome_simulators_are_the_trine() {
        let set = simulator_set::<f64>(3).unwrap();
        assert!((set.h0 - 2.0 / 3.0).abs() < 1e-15 && (set.h1 - 2.0 / 3.0).abs() < 1e-15);
        let target = equatorial_povm::<f64>(3).unwrap();
        for m in &set.members {
            for (e, &k) in m.povm.effects().iter().zip(&m.labels) {
                assert!(e.operator().max_abs_diff(&target.povm().effects()[k].operator()) < 1e-15);
            }
        }
    }

    #[test]
    fn simulation_identity() {
        for n in [3, 5, 7, 9, 11] {
            let report = verify_simulation::<f64>(n, 1e-12).unwrap();
            assert!(report.pass, "{report:?}");
            let (h0, h1) = simulator_weights::<f64>(n).unwrap();
            assert!((h0 + 2.0 * h1 - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn extremality() {
        let trine = trine_povm([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        assert!(is_extremal_rank_one(&trine, 1e-9).unwrap().extremal);

        let five = is_extremal_rank_one(equatorial_povm::<f64>(5).unwrap().povm(), 1e-9).unwrap();
        assert!(!five.extremal);
        assert_eq!(five.rank, 3);

        let pair = Povm::from_weighted_axes(&[1.0, 1.0], &[Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)]);
        let cert = is_extremal_rank_one(&pair, 1e-9).unwrap();
        assert!(cert.extremal && cert.rank == 2);

        let mixed = Povm::new(vec![Effect::isotropic(0.5); 2]);
        assert!(matches!(is_extremal_rank_one(&mixed, 1e-9), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn simulators_extremal_target_not() {
        for n in [3, 5, 7, 9, 11] {
            for m in simulator_set::<f64>(n).unwrap().members {
                assert!(is_extremal_rank_one(&m.povm, 1e-9).unwrap().extremal);
            }
            let target = is_extremal_rank_one(equatorial_povm::<f64>(n).unwrap().povm(), 1e-9).unwrap();
            assert_eq!(target.extremal, n == 3);
        }
    }
}
