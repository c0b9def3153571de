//! Certificates of measurement nonclassicality: anti-distinguishability,
//! incompatibility (state discrimination with prior versus posterior
//! partition information, and direct joint-measurability relaxations), and
//! coherence detection.

pub mod antidistinguish;
pub mod coherence;
pub mod ensemble;
pub mod guessing;
pub mod joint;

pub use antidistinguish::antidistinguishing_povm;
pub use coherence::{dephase, is_free_in_any_basis, is_free_povm, AnyBasisReport, FreePovmReport};
pub use ensemble::{aligned_ensemble, witness_ensemble, PartitionedEnsemble};
pub use guessing::{
    guessing_report, incompatibility_witness, minimum_enclosing_ball, post_guess_bounds,
    post_guess_value, prior_guess, prior_guess_with, GuessingReport, PostGuessBounds,
};
pub use joint::{
    joint_measurability_check, noisy, noise_threshold, pairwise_incompatibility, Compatibility,
    JointMeasurabilityReport, NoiseThreshold, PairVerdict,
};
