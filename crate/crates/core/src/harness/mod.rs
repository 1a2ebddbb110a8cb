//! Layer experiments, the physical efficiency study and the numerical
//! property studies behind the acceptance checks.

mod experiments;
mod metrics;
mod studies;

pub use experiments::{
    physical_probe, physical_reference, run_pbm1, run_pbm2, run_physical, run_physical_against, study_flows, ExperimentKind,
    ExperimentSpec, PhysicalRun, LAYER_PROBES, PHYSICAL_PROBE,
};
pub use metrics::{l2_error, ErrorSeries};
pub use studies::{
    cfl_probe, convergence_study, reduction_check, standing_mode_error, vorticity_trace, CflProbe, ConvergenceStudy, ProbePressures,
    ReductionCheck, ReductionSetup, VorticityTrace,
};
