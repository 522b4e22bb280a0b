//! Verification experiments: each relation is checked on a state and a pair
//! of measurements and produces a [`VerificationReport`].

mod report;
mod selftest;
mod spec;
mod sweep;
mod verify;

pub use report::{
    csv_number, digest_of, Diagnostics, EvalPath, Relation, Status, VerificationReport, ANALYTIC_TOL, GRID_TOL,
    REPORT_SCHEMA,
};
pub use selftest::{selftest, Check};
pub use spec::{position_momentum_rows, ExperimentSpec, GridParams, Measurement, StateSource};
pub use sweep::{linspace, sweep, write_sweep_csv, SweepAxis, SweepRow};
pub use verify::{
    random_rows, standard_rows, verify_birula, verify_guanlei, verify_huang, verify_lemma1, verify_theorem1,
    verify_theorem1_extended, verify_theorem2, verify_theorem3, TestState,
};
