use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flow::FlowState;
use crate::grid::StaggeredGrid;
use crate::pml::{constant_profile, polynomial_profile, SigmaProfile};
use crate::probe::ProbeSeries;
use crate::run::Simulation;
use crate::solver::{AdvectiveStepper, PmlStepper, SampledSource, SchemeParams, Source, SourceTarget, Stepper, TimeProfile};

use super::metrics::{l2_error, ErrorSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Forcing along the non-characteristic direction inside a layer.
    Pbm1,
    /// Impulse pulse released inside a layer.
    Pbm2,
    /// Layer efficiency against an enlarged-domain reference.
    Physical,
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pbm1" => Ok(Self::Pbm1),
            "pbm2" => Ok(Self::Pbm2),
            "physical" => Ok(Self::Physical),
            _ => Err(Error::Config(format!("unknown experiment '{s}'"))),
        }
    }
}

/// Geometry and run length of one experiment, with unit cell size.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: ExperimentKind,
    /// Half-width of the interior.
    pub x_max: f64,
    /// Layer thickness in cells.
    pub l_pml: usize,
    pub flow: FlowState,
    pub probes: Vec<(f64, f64)>,
    pub steps: u64,
    pub layer_sweep: Vec<usize>,
    pub source_center: (f64, f64),
    pub amplitude: f64,
    /// Constant rate for the layer experiments (default `0.1/Δt`) or the
    /// peak of the quadratic ramp for the physical study (default `8c0/δ`
    /// for the thickest layer of the sweep, held fixed across the sweep).
    pub sigma: Option<f64>,
    /// Half-width of the reference domain of the physical study.
    pub reference_x_max: f64,
    pub cfl_fraction: f64,
}

/// The six observation points of the layer experiments.
pub const LAYER_PROBES: [(f64, f64); 6] = [(45.0, 0.0), (25.0, 0.0), (0.0, 0.0), (-45.0, 0.0), (0.0, 25.0), (0.0, -25.0)];

/// Centre of the last interior cell before the right layer, half a cell
/// away from the interface at `x = 25`.
pub const PHYSICAL_PROBE: (f64, f64) = (24.5, 0.5);

/// The four background flows of the physical study, as `(u0, v0)/c0`.
pub fn study_flows() -> [(f64, f64); 4] {
    let a = 1.0 / (2.0 * 2f64.sqrt());
    let b = 17f64.sqrt();
    [(0.0, 0.0), (0.5, 0.0), (a, a), (2.0 / b, 1.0 / (2.0 * b))]
}

impl ExperimentSpec {
    pub fn pbm1() -> Self {
        Self {
            name: ExperimentKind::Pbm1,
            x_max: 5.0,
            l_pml: 45,
            flow: FlowState::at_rest(1.0),
            probes: LAYER_PROBES.to_vec(),
            steps: 10_000,
            layer_sweep: vec![45],
            source_center: (25.0, 0.0),
            amplitude: 1.0,
            sigma: None,
            reference_x_max: 5.0,
            cfl_fraction: 0.95,
        }
    }

    pub fn pbm2() -> Self {
        Self { name: ExperimentKind::Pbm2, ..Self::pbm1() }
    }

    pub fn physical() -> Self {
        Self {
            name: ExperimentKind::Physical,
            x_max: 25.0,
            l_pml: 20,
            flow: FlowState::at_rest(1.0),
            probes: vec![PHYSICAL_PROBE],
            steps: 300,
            layer_sweep: vec![4, 10, 20],
            source_center: (0.0, 0.0),
            amplitude: 1.0,
            sigma: None,
            reference_x_max: 150.0,
            cfl_fraction: 0.95,
        }
    }

    pub fn for_kind(kind: ExperimentKind) -> Self {
        match kind {
            ExperimentKind::Pbm1 => Self::pbm1(),
            ExperimentKind::Pbm2 => Self::pbm2(),
            ExperimentKind::Physical => Self::physical(),
        }
    }

    /// Unit-spaced grid `[−x_max − N, x_max + N]²` with `N` layer cells.
    pub fn grid(&self, x_max: f64, layers: usize) -> Result<StaggeredGrid> {
        let half = x_max.round() as usize + layers;
        if (x_max - x_max.round()).abs() > 1e-12 {
            return Err(Error::Config(format!("x_max must be a whole number of cells, got {x_max}")));
        }
        let n = 2 * half;
        Ok(StaggeredGrid::new(n, n as f64, layers, layers)?.centered())
    }

    /// Ramp peak shared by every layer count of the physical study.
    pub fn study_sigma_max(&self) -> f64 {
        self.sigma.unwrap_or_else(|| {
            let thickest = self.layer_sweep.iter().copied().max().unwrap_or(self.l_pml).max(1);
            8.0 * self.flow.c0 / thickest as f64
        })
    }

    /// The physical excitation `exp(−ln2·r²/9)·sin(πt)` on the pressure.
    pub fn physical_source(&self) -> Source {
        Source { amplitude: self.amplitude, ..Source::forcing(self.source_center, SourceTarget::Pressure, TimeProfile::Sine { omega: PI }) }
    }

    fn stepper(&self, grid: &StaggeredGrid, flow: &FlowState, profile: impl Fn(&SchemeParams) -> SigmaProfile) -> Result<Box<dyn Stepper + Send>> {
        Ok(if flow.is_at_rest() {
            let params = SchemeParams::acoustic(grid, flow.c0, self.cfl_fraction)?;
            Box::new(PmlStepper::new(params, &profile(&params)))
        } else {
            let params = SchemeParams::advective(grid, flow, self.cfl_fraction)?;
            Box::new(AdvectiveStepper::new(grid, params, &profile(&params), flow))
        })
    }

    fn layer_run(&self, source: Source) -> Result<Vec<ProbeSeries>> {
        let grid = self.grid(self.x_max, self.l_pml)?;
        let flow = FlowState::at_rest(self.flow.c0);
        let stepper = self.stepper(&grid, &flow, |p| constant_profile(&grid, self.sigma.unwrap_or(0.1 / p.dt)))?;
        let source = SampledSource::new(&grid, source, &flow)?;
        let mut sim = Simulation::new(grid, stepper, Some(source), &self.probes)?;
        sim.advance(self.steps)?;
        Ok(sim.into_series())
    }
}

/// Constant forcing `ψ ≡ amplitude` along `(0, 0, ∂_yψ_xy, −∂ₓψ_xy)` at rest
/// with constant layer rates.
pub fn run_pbm1(spec: &ExperimentSpec) -> Result<Vec<ProbeSeries>> {
    let source = Source { amplitude: spec.amplitude, ..Source::forcing(spec.source_center, SourceTarget::Curl, TimeProfile::Constant) };
    spec.layer_run(source)
}

/// Unforced release of `(0, 0, ψ_xy, ψ_xy)`.
pub fn run_pbm2(spec: &ExperimentSpec) -> Result<Vec<ProbeSeries>> {
    let source = Source { amplitude: spec.amplitude, ..Source::initial(spec.source_center, SourceTarget::Impulses) };
    spec.layer_run(source)
}

/// Small-domain probe, reference probe and their difference.
#[derive(Debug, Clone)]
pub struct PhysicalRun {
    pub layers: usize,
    pub probe: ProbeSeries,
    pub reference: ProbeSeries,
    pub error: ErrorSeries,
}

/// Probe series of the physical excitation on a domain of half-width
/// `x_max` with `layers` absorbing cells.
pub fn physical_probe(spec: &ExperimentSpec, x_max: f64, layers: usize, flow: &FlowState) -> Result<ProbeSeries> {
    let grid = spec.grid(x_max, layers)?;
    let stepper = spec.stepper(&grid, flow, |_| polynomial_profile(&grid, spec.study_sigma_max(), 2))?;
    let source = SampledSource::new(&grid, spec.physical_source(), flow)?;
    let mut sim = Simulation::new(grid, stepper, Some(source), &spec.probes[..1])?;
    sim.advance(spec.steps)?;
    Ok(sim.into_series().remove(0))
}

/// The enlarged-domain reference, bounded by walls.
pub fn physical_reference(spec: &ExperimentSpec, flow: &FlowState) -> Result<ProbeSeries> {
    physical_probe(spec, spec.reference_x_max, 0, flow)
}

/// One layer count of the physical study against a precomputed reference.
pub fn run_physical_against(spec: &ExperimentSpec, layers: usize, flow: &FlowState, reference: &ProbeSeries) -> Result<PhysicalRun> {
    let probe = physical_probe(spec, spec.x_max, layers, flow)?;
    let error = l2_error(&probe, reference)?;
    Ok(PhysicalRun { layers, probe, reference: reference.clone(), error })
}

pub fn run_physical(spec: &ExperimentSpec, layers: usize, flow: &FlowState) -> Result<PhysicalRun> {
    let reference = physical_reference(spec, flow)?;
    run_physical_against(spec, layers, flow, &reference)
}
