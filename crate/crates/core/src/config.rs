//! Flat `key = value` simulation configuration.
//!
//! ```text
//! # comments start with '#'
//! grid.J = 100
//! grid.L = 100
//! pml.cells = 20
//! pml.profile = quadratic
//! flow.u0 = 0.5
//! scheme.steps = 300
//! source.kind = forcing
//! source.time = sine
//! source.omega = 3.141592653589793
//! probes = 24.5,0.5; 0,0
//! ```

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::flow::FlowState;
use crate::grid::StaggeredGrid;
use crate::pml::{constant_profile, default_sigma_max, polynomial_profile, SigmaProfile};
use crate::solver::{SchemeParams, Source, SourceKind, SourceTarget, TimeProfile, DEFAULT_CFL_FRACTION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// `σ_max·(d/δ)^exponent`.
    Polynomial,
    /// The same value at every layer station.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepperKind {
    Free,
    Pml,
    Advective,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub cells: usize,
    pub length: f64,
    /// Put the origin at the centre of the domain.
    pub centered: bool,
    pub pml_cells: usize,
    pub profile: ProfileKind,
    pub ramp_exponent: u32,
    /// Peak rate for polynomial profiles, layer rate for constant ones.
    /// Defaults to `8c0/δ` and `0.1/Δt` respectively.
    pub sigma_max: Option<f64>,
    pub flow: FlowState,
    pub cfl_fraction: f64,
    pub steps: u64,
    /// Defaults to advective under flow, layer scheme otherwise.
    pub stepper: Option<StepperKind>,
    pub source: Option<Source>,
    pub probes: Vec<(f64, f64)>,
    pub snapshot_every: Option<u64>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            cells: 100,
            length: 100.0,
            centered: true,
            pml_cells: 0,
            profile: ProfileKind::Polynomial,
            ramp_exponent: 2,
            sigma_max: None,
            flow: FlowState::at_rest(1.0),
            cfl_fraction: DEFAULT_CFL_FRACTION,
            steps: 100,
            stepper: None,
            source: None,
            probes: Vec::new(),
            snapshot_every: None,
        }
    }
}

impl SimulationConfig {
    pub fn grid(&self) -> Result<StaggeredGrid> {
        let g = StaggeredGrid::new(self.cells, self.length, self.pml_cells, self.pml_cells)?;
        Ok(if self.centered { g.centered() } else { g })
    }

    pub fn stepper_kind(&self) -> StepperKind {
        self.stepper.unwrap_or(if self.flow.is_at_rest() { StepperKind::Pml } else { StepperKind::Advective })
    }

    pub fn params(&self, grid: &StaggeredGrid) -> Result<SchemeParams> {
        match self.stepper_kind() {
            StepperKind::Advective => SchemeParams::advective(grid, &self.flow, self.cfl_fraction),
            _ => {
                if !self.flow.is_at_rest() {
                    return Err(Error::Config("the free and layer schemes need a fluid at rest".into()));
                }
                SchemeParams::acoustic(grid, self.flow.c0, self.cfl_fraction)
            }
        }
    }

    pub fn profile(&self, grid: &StaggeredGrid, params: &SchemeParams) -> SigmaProfile {
        match self.profile {
            ProfileKind::Polynomial => {
                let s = self.sigma_max.unwrap_or_else(|| default_sigma_max(grid, self.flow.c0));
                polynomial_profile(grid, s, self.ramp_exponent)
            }
            ProfileKind::Constant => constant_profile(grid, self.sigma_max.unwrap_or(0.1 / params.dt)),
        }
    }

    fn set(&mut self, key: &str, value: &str, src: &mut SourceDraft) -> std::result::Result<(), String> {
        match key {
            "grid.J" => self.cells = num(value)?,
            "grid.L" => self.length = num(value)?,
            "grid.centered" => self.centered = num(value)?,
            "pml.cells" => self.pml_cells = num(value)?,
            "pml.profile" => {
                self.profile = match value {
                    "quadratic" => {
                        self.ramp_exponent = 2;
                        ProfileKind::Polynomial
                    }
                    "polynomial" => ProfileKind::Polynomial,
                    "constant" => ProfileKind::Constant,
                    _ => return Err(format!("unknown profile '{value}'")),
                }
            }
            "pml.exponent" => self.ramp_exponent = num(value)?,
            "pml.sigma_max" => self.sigma_max = Some(num(value)?),
            "flow.u0" => self.flow.u0 = num(value)?,
            "flow.v0" => self.flow.v0 = num(value)?,
            "flow.c0" => self.flow.c0 = num(value)?,
            "flow.rho0" => self.flow.rho0 = num(value)?,
            "scheme.cfl_fraction" => self.cfl_fraction = num(value)?,
            "scheme.steps" => self.steps = num(value)?,
            "scheme.stepper" => {
                self.stepper = Some(match value {
                    "free" => StepperKind::Free,
                    "pml" => StepperKind::Pml,
                    "advective" => StepperKind::Advective,
                    _ => return Err(format!("unknown stepper '{value}'")),
                })
            }
            "probes" => {
                self.probes = value
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(|pair| {
                        let (x, y) = pair.split_once(',').ok_or_else(|| format!("probe '{pair}' is not an x,y pair"))?;
                        Ok((num(x)?, num(y)?))
                    })
                    .collect::<std::result::Result<_, String>>()?
            }
            "snapshot.every" => self.snapshot_every = Some(num(value)?),
            _ => match key.strip_prefix("source.") {
                Some(k) => src.set(k, value)?,
                None => return Err(format!("unknown key '{key}'")),
            },
        }
        Ok(())
    }
}

fn num<T: FromStr>(s: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e| format!("'{}': {e}", s.trim()))
}

#[derive(Default)]
struct SourceDraft {
    any: bool,
    kind: Option<SourceKind>,
    x: Option<f64>,
    y: Option<f64>,
    width: Option<f64>,
    amplitude: Option<f64>,
    target: Option<SourceTarget>,
    time: Option<String>,
    omega: Option<f64>,
    rate: Option<f64>,
    center: Option<f64>,
    pulse_width: Option<f64>,
    hard: bool,
}

impl SourceDraft {
    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        self.any = true;
        match key {
            "kind" => {
                self.kind = Some(match value {
                    "initial" => SourceKind::InitialCondition,
                    "forcing" => SourceKind::TimeForcing,
                    _ => return Err(format!("unknown source kind '{value}'")),
                })
            }
            "x" => self.x = Some(num(value)?),
            "y" => self.y = Some(num(value)?),
            "width" => self.width = Some(num(value)?),
            "amplitude" => self.amplitude = Some(num(value)?),
            "target" => {
                self.target = Some(match value {
                    "p" | "pressure" => SourceTarget::Pressure,
                    "xi" => SourceTarget::Xi,
                    "zeta" => SourceTarget::Zeta,
                    "impulses" => SourceTarget::Impulses,
                    "curl" => SourceTarget::Curl,
                    "mass" => SourceTarget::Mass,
                    _ => return Err(format!("unknown source target '{value}'")),
                })
            }
            "time" => self.time = Some(value.to_string()),
            "omega" => self.omega = Some(num(value)?),
            "rate" => self.rate = Some(num(value)?),
            "center" => self.center = Some(num(value)?),
            "pulse_width" => self.pulse_width = Some(num(value)?),
            "hard" => self.hard = num(value)?,
            _ => return Err(format!("unknown key 'source.{key}'")),
        }
        Ok(())
    }

    fn build(self) -> std::result::Result<Option<Source>, String> {
        if !self.any {
            return Ok(None);
        }
        let time_profile = match self.time.as_deref().unwrap_or("constant") {
            "zero" => TimeProfile::Zero,
            "constant" => TimeProfile::Constant,
            "sine" => TimeProfile::Sine { omega: self.omega.unwrap_or(std::f64::consts::PI) },
            "decay" => TimeProfile::Decay { rate: self.rate.unwrap_or(1.0) },
            "pulse" => TimeProfile::Pulse { center: self.center.unwrap_or(5.0), width: self.pulse_width.unwrap_or(1.0) },
            other => return Err(format!("unknown time profile '{other}'")),
        };
        Ok(Some(Source {
            kind: self.kind.unwrap_or(SourceKind::TimeForcing),
            center: (self.x.unwrap_or(0.0), self.y.unwrap_or(0.0)),
            width: self.width.unwrap_or(9.0),
            amplitude: self.amplitude.unwrap_or(1.0),
            time_profile,
            target: self.target.unwrap_or(SourceTarget::Pressure),
            hard: self.hard,
        }))
    }
}

impl FromStr for SimulationConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut src = SourceDraft::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: n + 1, message: format!("expected 'key = value', got '{line}'") })?;
            cfg.set(key.trim(), value.trim(), &mut src).map_err(|message| Error::Parse { line: n + 1, message })?;
        }
        cfg.source = src.build().map_err(|message| Error::Parse { line: 0, message })?;
        cfg.flow = FlowState::new(cfg.flow.u0, cfg.flow.v0, cfg.flow.c0, cfg.flow.rho0)?;
        cfg.grid()?;
        if !(cfg.cfl_fraction > 0.0 && cfg.cfl_fraction <= 1.0) {
            return Err(Error::Config(format!("cfl_fraction must lie in (0, 1], got {}", cfg.cfl_fraction)));
        }
        Ok(cfg)
    }
}
