//! Exact time evolution under `H(λ(t))` and the quantities it is checked
//! against: adiabatic fidelity `F`, ground-state overlap `C`, Bures angle
//! `θ` and the integrated initial-state uncertainty `R`.

mod evolve;
mod min_time;
mod schedule;

pub use evolve::{
    default_steps, integrate, verify_chain, ChainReport, Sample, Trajectory, CHAIN_TOL, MAX_NORM_DRIFT,
    MIN_STEPS, STEPS_PER_UNIT,
};
pub use min_time::{
    min_adiabatic_time, scaling_experiment, FinalInfidelity, MinTime, MinTimeOptions, ScalingRow, ScalingTable,
};
pub use schedule::{Schedule, ScheduleShape};
