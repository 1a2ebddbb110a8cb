use crate::error::{Error, Result};
use crate::flow::FlowState;
use crate::grid::StaggeredGrid;

/// Stability limit of the staggered leapfrog scheme,
/// `(1/celerity)·1/sqrt(1/Δx² + 1/Δy²)`.
///
/// ```
/// use advac::grid::StaggeredGrid;
/// use advac::solver::cfl_limit;
///
/// let g = StaggeredGrid::new(10, 10.0, 0, 0).unwrap();
/// assert!((cfl_limit(&g, 1.0) - 0.5f64.sqrt()).abs() < 1e-15);
/// ```
pub fn cfl_limit(grid: &StaggeredGrid, celerity: f64) -> f64 {
    assert!(celerity > 0.0, "celerity must be positive");
    let (dx, dy) = (grid.dx(), grid.dy());
    1.0 / (celerity * (1.0 / (dx * dx) + 1.0 / (dy * dy)).sqrt())
}

/// Time step and medium coefficients of one scheme.
///
/// The pressure update uses `pressure_coeff` in front of the impulse
/// divergence and the impulse update uses `impulse_coeff` in front of the
/// pressure gradient, so the discrete celerity is
/// `sqrt(pressure_coeff·impulse_coeff)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    pub dt: f64,
    pub dx: f64,
    /// `Δt/Δx`.
    pub sigma_ratio: f64,
    pub cfl_fraction: f64,
    pub pressure_coeff: f64,
    pub impulse_coeff: f64,
}

pub const DEFAULT_CFL_FRACTION: f64 = 0.95;

impl SchemeParams {
    /// Builds parameters with `dt = cfl_fraction·limit`, rejecting fractions
    /// outside `(0, 1]`.
    pub fn new(grid: &StaggeredGrid, limit: f64, cfl_fraction: f64, pressure_coeff: f64, impulse_coeff: f64) -> Result<Self> {
        if !(cfl_fraction > 0.0 && cfl_fraction <= 1.0) {
            return Err(Error::Config(format!("cfl_fraction must lie in (0, 1], got {cfl_fraction}")));
        }
        Ok(Self::beyond_limit(grid, limit, cfl_fraction, pressure_coeff, impulse_coeff))
    }

    /// Like [`SchemeParams::new`] without the stability check, for probing
    /// the limit itself.
    pub fn beyond_limit(grid: &StaggeredGrid, limit: f64, cfl_fraction: f64, pressure_coeff: f64, impulse_coeff: f64) -> Self {
        let dt = cfl_fraction * limit;
        Self { dt, dx: grid.dx(), sigma_ratio: dt / grid.dx(), cfl_fraction, pressure_coeff, impulse_coeff }
    }

    /// Medium at rest with sound speed `c0`.
    pub fn acoustic(grid: &StaggeredGrid, c0: f64, cfl_fraction: f64) -> Result<Self> {
        Self::new(grid, cfl_limit(grid, c0), cfl_fraction, c0 * c0, 1.0)
    }

    /// Non-advective scheme of the transformed system: pressure coefficient
    /// `c0²`, impulse coefficient `1 − M0²`, celerity `c0·sqrt(1 − M0²)`.
    pub fn transformed(grid: &StaggeredGrid, flow: &FlowState, cfl_fraction: f64) -> Result<Self> {
        let d = flow.one_minus_mach2();
        let celerity = flow.c0 * d.sqrt();
        Self::new(grid, cfl_limit(grid, celerity), cfl_fraction, flow.c0 * flow.c0, d)
    }

    /// Direct advective scheme, stepped at a fraction of the fastest
    /// characteristic limit `c0·(1 + M0)`.
    pub fn advective(grid: &StaggeredGrid, flow: &FlowState, cfl_fraction: f64) -> Result<Self> {
        let limit = cfl_limit(grid, flow.c0 * (1.0 + flow.mach()));
        Self::new(grid, limit, cfl_fraction, flow.c0 * flow.c0, flow.one_minus_mach2())
    }

    pub fn celerity(&self) -> f64 {
        (self.pressure_coeff * self.impulse_coeff).sqrt()
    }
}
