//! Time loop with probes, snapshots and a non-finite guard.

use crate::config::{SimulationConfig, StepperKind};
use crate::error::{Error, Result};
use crate::grid::{FieldSet, StaggeredGrid};
use crate::probe::{Probe, ProbeSeries};
use crate::snapshot::Snapshot;
use crate::solver::{AdvectiveStepper, Forcing, FreeStepper, PmlStepper, SampledSource, SourceKind, Stepper};

/// A grid, its fields and a stepper, advanced one level at a time.
pub struct Simulation {
    grid: StaggeredGrid,
    fields: FieldSet,
    stepper: Box<dyn Stepper + Send>,
    forcing: Option<SampledSource>,
    probes: Vec<Probe>,
    series: Vec<ProbeSeries>,
    t0: f64,
}

impl Simulation {
    /// Applies an initial-condition source and records level 0.
    pub fn new(
        grid: StaggeredGrid,
        stepper: Box<dyn Stepper + Send>,
        source: Option<SampledSource>,
        probes: &[(f64, f64)],
    ) -> Result<Self> {
        let mut fields = FieldSet::zeros(&grid);
        let forcing = match source {
            Some(s) if s.kind() == SourceKind::InitialCondition => {
                s.initialize(&mut fields);
                None
            }
            other => other,
        };
        let dt = stepper.params().dt;
        let probes = probes.iter().map(|&loc| Probe::new(&grid, loc)).collect::<Result<Vec<_>>>()?;
        let series = probes.iter().map(|p| ProbeSeries::new(p.location, dt)).collect();
        let mut sim = Self { grid, fields, stepper, forcing, probes, series, t0: 0.0 };
        sim.record();
        Ok(sim)
    }

    pub fn from_config(config: &SimulationConfig) -> Result<Self> {
        let grid = config.grid()?;
        let params = config.params(&grid)?;
        let stepper: Box<dyn Stepper + Send> = match config.stepper_kind() {
            StepperKind::Free => Box::new(FreeStepper::new(params)),
            StepperKind::Pml => Box::new(PmlStepper::new(params, &config.profile(&grid, &params))),
            StepperKind::Advective => {
                Box::new(AdvectiveStepper::new(&grid, params, &config.profile(&grid, &params), &config.flow))
            }
        };
        let source = config.source.clone().map(|s| SampledSource::new(&grid, s, &config.flow)).transpose()?;
        Self::new(grid, stepper, source, &config.probes)
    }

    pub fn grid(&self) -> &StaggeredGrid {
        &self.grid
    }

    pub fn fields(&self) -> &FieldSet {
        &self.fields
    }

    pub fn fields_mut(&mut self) -> &mut FieldSet {
        &mut self.fields
    }

    pub fn dt(&self) -> f64 {
        self.stepper.params().dt
    }

    /// Time of the current pressure level.
    pub fn time(&self) -> f64 {
        self.t0 + self.fields.time_level as f64 * self.dt()
    }

    pub fn series(&self) -> &[ProbeSeries] {
        &self.series
    }

    pub fn into_series(self) -> Vec<ProbeSeries> {
        self.series
    }

    fn record(&mut self) {
        let (step, time) = (self.fields.time_level, self.time());
        for (probe, series) in self.probes.iter().zip(&mut self.series) {
            series.push(step, time, probe.sample(&self.fields));
        }
    }

    /// Advances one level; fails on the first non-finite value.
    pub fn step(&mut self) -> Result<()> {
        let forcing = self.forcing.as_ref().map(|source| Forcing { source, t0: self.t0 });
        self.stepper.step(&self.grid, &mut self.fields, forcing);
        if let Some(field) = self.fields.first_non_finite() {
            return Err(Error::NonFinite { step: self.fields.time_level, field });
        }
        self.record();
        Ok(())
    }

    pub fn advance(&mut self, steps: u64) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }
}

/// Probe series and snapshots of one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub grid: StaggeredGrid,
    pub dt: f64,
    pub probes: Vec<ProbeSeries>,
    pub snapshots: Vec<Snapshot>,
}

/// Runs a configuration to completion.
pub fn run(config: &SimulationConfig) -> Result<RunOutput> {
    let mut sim = Simulation::from_config(config)?;
    let mut snapshots = Vec::new();
    let every = config.snapshot_every.filter(|&e| e > 0);
    if every.is_some() {
        snapshots.push(Snapshot::capture(&sim.grid, &sim.fields, sim.time()));
    }
    for n in 1..=config.steps {
        sim.step()?;
        if every.is_some_and(|e| n % e == 0) {
            snapshots.push(Snapshot::capture(&sim.grid, &sim.fields, sim.time()));
        }
    }
    let (grid, dt) = (sim.grid.clone(), sim.dt());
    Ok(RunOutput { grid, dt, probes: sim.into_series(), snapshots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{Source, SourceTarget, TimeProfile};

    fn config() -> SimulationConfig {
        SimulationConfig {
            cells: 40,
            length: 40.0,
            pml_cells: 8,
            steps: 60,
            source: Some(Source::forcing((1.0, -2.0), SourceTarget::Pressure, TimeProfile::Sine { omega: 1.0 })),
            probes: vec![(0.0, 0.0), (5.0, 5.0)],
            snapshot_every: Some(20),
            ..SimulationConfig::default()
        }
    }

    #[test]
    fn zero_source_gives_zero_series() {
        let mut c = config();
        c.source.as_mut().unwrap().time_profile = TimeProfile::Zero;
        let out = run(&c).unwrap();
        assert_eq!(out.probes.len(), 2);
        for s in &out.probes {
            assert_eq!(s.len(), 61);
            assert!(s.p.iter().chain(&s.xi).chain(&s.zeta).all(|&v| v == 0.0));
        }
        assert_eq!(out.snapshots.len(), 4);
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run(&config()).unwrap();
        let b = run(&config()).unwrap();
        assert_eq!(a.probes, b.probes);
        assert!(a.probes[0].p.iter().any(|&v| v != 0.0));
    }

    #[test]
    fn non_finite_values_abort() {
        let mut c = config();
        c.source.as_mut().unwrap().amplitude = f64::INFINITY;
        match run(&c) {
            Err(Error::NonFinite { step, .. }) => assert_eq!(step, 1),
            other => panic!("expected a non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn linear_in_the_source() {
        let a = run(&config()).unwrap();
        let mut c = config();
        c.source.as_mut().unwrap().amplitude = -2.5;
        let b = run(&c).unwrap();
        for (sa, sb) in a.probes.iter().zip(&b.probes) {
            for (x, y) in sa.p.iter().zip(&sb.p) {
                assert!((-2.5 * x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }
    }
}
