//! Bounds for a qubit prepare-and-measure game under parity-concealment
//! constraints.
//!
//! The crate computes, for the six-input three-outcome game,
//!
//! * the quantum optimum (closed form and an alternating optimizer),
//! * the preparation/measurement noncontextual bound as a linear program,
//! * the one-bit classical bound with shared randomness,
//! * simulation of odd-outcome equatorial POVMs by three-outcome ones, with
//!   extremality, incompatibility and coherence-detection certificates.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod classical;
pub mod classicality;
pub mod error;
pub mod game;
pub mod linalg;
pub mod lp;
pub mod nc_bound;
pub mod quantum_opt;
pub mod qubit;
pub mod scalar;
pub mod seed;
pub mod simulation;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Vec3d = qubit::Vec3<f64>;
pub type PauliOperator64 = qubit::PauliOperator<f64>;
pub type DensityState64 = qubit::DensityState<f64>;
pub type Effect64 = qubit::Effect<f64>;
pub type Povm64 = qubit::Povm<f64>;
pub type GameStrategy64 = game::GameStrategy<f64>;
pub type AlphaTriple64 = quantum_opt::AlphaTriple<f64>;
pub type LinearProgram64 = lp::LinearProgram<f64>;
pub type LpSolution64 = lp::LpSolution<f64>;
pub type ClassicalStrategy64 = classical::ClassicalStrategy<f64>;
pub type NcLpVariables64 = nc_bound::NcLpVariables<f64>;
pub type SimulatorSet64 = simulation::SimulatorSet<f64>;
pub type PartitionedEnsemble64 = classicality::PartitionedEnsemble<f64>;
pub type GuessingReport64 = classicality::GuessingReport<f64>;

pub type DensityState32 = qubit::DensityState<f32>;
pub type Povm32 = qubit::Povm<f32>;
pub type LinearProgram32 = lp::LinearProgram<f32>;
