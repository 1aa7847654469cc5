//! Experiment plumbing behind the `efx-lab` command line: generators, single
//! runs with their guarantees, adversary runs and CSV sweeps.

pub mod adversary;
pub mod gen;
pub mod run;
pub mod sweep;

pub use adversary::{run_adversary, AdversaryReport, FamilySpec};
pub use gen::{default_seed, generate, GenKind, GenParams};
pub use run::{guarantee_bound, run_algorithm, Algorithm, BlackboxKind, RunOutput, RunParams, RunRecord};
pub use sweep::{write_sweep_csv, SweepConfig};
