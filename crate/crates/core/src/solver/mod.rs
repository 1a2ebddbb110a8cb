//! Time stepping: scheme parameters, sources and the three steppers.

mod advective;
mod params;
mod source;
mod stepper;

pub use advective::{step_advective_pml, AdvectiveStepper};
pub use params::{cfl_limit, SchemeParams, DEFAULT_CFL_FRACTION};
pub use source::{apply_source, SampledSource, Source, SourceKind, SourceTarget, TimeProfile};
pub use stepper::{step_free, step_pml, Forcing, FreeStepper, PmlStepper, Stepper};
