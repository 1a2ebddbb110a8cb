use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::vorticity;
use crate::error::Result;
use crate::flow::{from_tilde, FlowState, LorentzMap, TimeInterpolator};
use crate::grid::{FieldSet, StaggeredGrid, Station};
use crate::pml::SigmaProfile;
use crate::solver::{
    cfl_limit, AdvectiveStepper, Forcing, FreeStepper, SampledSource, SchemeParams, Source, SourceTarget, Stepper, TimeProfile,
};

use super::experiments::ExperimentSpec;

/// Growth of a noise-seeded, wall-bounded free-space run at a given
/// fraction of the stability limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflProbe {
    pub cfl_fraction: f64,
    /// Largest `|p|`, `|ξ|`, `|ζ|` over the first [`CflProbe::EARLY_STEPS`] steps.
    pub early_max: f64,
    pub max: f64,
    pub steps_run: u64,
}

impl CflProbe {
    pub const EARLY_STEPS: u64 = 10;

    pub fn growth(&self) -> f64 {
        self.max / self.early_max
    }
}

fn physical_max(fields: &FieldSet) -> f64 {
    let p = fields.pressure();
    p.iter().chain(&fields.xi).chain(&fields.zeta).fold(0.0, |m, v| m.max(v.abs()))
}

/// Seeds `pₓ` with uniform noise and steps the free scheme at
/// `cfl_fraction` of its limit, stopping early once the growth exceeds 1e12.
pub fn cfl_probe(cells: usize, cfl_fraction: f64, steps: u64, seed: u64) -> Result<CflProbe> {
    let grid = StaggeredGrid::new(cells, cells as f64, 0, 0)?;
    let params = SchemeParams::beyond_limit(&grid, cfl_limit(&grid, 1.0), cfl_fraction, 1.0, 1.0);
    let mut stepper = FreeStepper::new(params);
    let mut fields = FieldSet::zeros(&grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fields.p_x.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
    let mut probe = CflProbe { cfl_fraction, early_max: physical_max(&fields), max: 0.0, steps_run: 0 };
    for n in 1..=steps {
        stepper.step(&grid, &mut fields, None);
        let m = physical_max(&fields);
        probe.steps_run = n;
        if n <= CflProbe::EARLY_STEPS {
            probe.early_max = probe.early_max.max(m);
        }
        probe.max = probe.max.max(m);
        if !m.is_finite() || (n > CflProbe::EARLY_STEPS && m > 1e12 * probe.early_max) {
            break;
        }
    }
    Ok(probe)
}

/// Discrete L2 pressure error of the free scheme against the standing mode
/// `cos(πx)cos(πy)cos(ωt)` on the unit square after `3J` steps at half the
/// stability limit.
pub fn standing_mode_error(cells: usize) -> Result<f64> {
    let grid = StaggeredGrid::new(cells, 1.0, 0, 0)?;
    let params = SchemeParams::acoustic(&grid, 1.0, 0.5 * 2f64.sqrt())?;
    let dt = params.dt;
    let omega = PI * 2f64.sqrt();
    let mut fields = FieldSet::zeros(&grid);
    let fill = |st: Station, f: &dyn Fn(f64, f64) -> f64, out: &mut Vec<f64>| {
        for (k, v) in out.iter_mut().enumerate() {
            let (i, j) = grid.coords(st, k);
            if !grid.is_wall(st, i, j) {
                let (x, y) = grid.position(st, i, j);
                *v = f(x, y);
            }
        }
    };
    let th = dt / 2.0;
    fill(Station::Center, &|x, y| 0.5 * (PI * x).cos() * (PI * y).cos(), &mut fields.p_x);
    fill(Station::Center, &|x, y| 0.5 * (PI * x).cos() * (PI * y).cos(), &mut fields.p_y);
    fill(Station::XEdge, &|x, y| PI / omega * (PI * x).sin() * (PI * y).cos() * (omega * th).sin(), &mut fields.xi);
    fill(Station::YEdge, &|x, y| PI / omega * (PI * x).cos() * (PI * y).sin() * (omega * th).sin(), &mut fields.zeta);
    let steps = 3 * cells as u64;
    let mut stepper = FreeStepper::new(params);
    for _ in 0..steps {
        stepper.step(&grid, &mut fields, None);
    }
    let t = steps as f64 * dt;
    let p = fields.pressure();
    let h = grid.dx();
    let sum: f64 = p
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (i, j) = grid.coords(Station::Center, k);
            let (x, y) = grid.position(Station::Center, i, j);
            let e = v - (PI * x).cos() * (PI * y).cos() * (omega * t).cos();
            e * e * h * h
        })
        .sum();
    Ok(sum.sqrt())
}

/// Errors of successive refinements and the ratios between them.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub cells: Vec<usize>,
    pub errors: Vec<f64>,
}

impl ConvergenceStudy {
    pub fn ratios(&self) -> Vec<f64> {
        self.errors.windows(2).map(|w| w[0] / w[1]).collect()
    }
}

pub fn convergence_study(levels: &[usize]) -> Result<ConvergenceStudy> {
    let errors = levels.iter().map(|&j| standing_mode_error(j)).collect::<Result<_>>()?;
    Ok(ConvergenceStudy { cells: levels.to_vec(), errors })
}

/// Geometry of the reduction check: a mass pulse at the origin of a
/// wall-bounded domain, observed at a few points before any reflection
/// returns.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionSetup {
    pub flow: FlowState,
    /// Half-width of the physical domain.
    pub half_width: f64,
    pub probes: Vec<(f64, f64)>,
    pub pulse: TimeProfile,
    pub end_time: f64,
    pub cfl_fraction: f64,
}

impl Default for ReductionSetup {
    fn default() -> Self {
        Self {
            flow: FlowState::new(0.5, 0.0, 1.0, 1.0).expect("subsonic"),
            half_width: 40.0,
            probes: vec![(10.0, 0.0), (-10.0, 0.0), (0.0, 10.0)],
            pulse: TimeProfile::Pulse { center: 12.0, width: 2.0 },
            end_time: 40.0,
            cfl_fraction: 0.95,
        }
    }
}

/// Pressure at every probe on the time axis of the direct run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePressures {
    pub dt: f64,
    pub times: Vec<f64>,
    /// `values[probe][sample]`.
    pub values: Vec<Vec<f64>>,
}

impl ProbePressures {
    /// `sqrt(Σ (a−b)²·Δt)` over all probes, pairing sample `k` of `self`
    /// with sample `k·stride` of `other`.
    pub fn distance(&self, other: &ProbePressures, stride: usize) -> f64 {
        let mut sum = 0.0;
        for (a, b) in self.values.iter().zip(&other.values) {
            for (k, x) in a.iter().enumerate() {
                let d = x - b[k * stride];
                sum += d * d * self.dt;
            }
        }
        sum.sqrt()
    }
}

impl ReductionSetup {
    fn source(&self) -> Source {
        Source::forcing((0.0, 0.0), SourceTarget::Mass, self.pulse)
    }

    fn grid(&self, half_width: f64, h: f64) -> Result<StaggeredGrid> {
        let n = 2 * (half_width / h).ceil() as usize;
        Ok(StaggeredGrid::new(n, n as f64 * h, 0, 0)?.centered())
    }

    fn probe_weights(grid: &StaggeredGrid, station: Station, x: f64, y: f64) -> Result<[(usize, f64); 4]> {
        grid.bilinear(station, x, y)
            .ok_or_else(|| crate::Error::Config(format!("probe ({x}, {y}) lies outside the grid")))
    }

    /// Direct advective stepping with zero damping.
    pub fn direct(&self, h: f64) -> Result<ProbePressures> {
        let grid = self.grid(self.half_width, h)?;
        let params = SchemeParams::advective(&grid, &self.flow, self.cfl_fraction)?;
        let mut stepper = AdvectiveStepper::new(&grid, params, &SigmaProfile::zero(&grid), &self.flow);
        let source = SampledSource::new(&grid, self.source(), &self.flow)?;
        let weights = self
            .probes
            .iter()
            .map(|&(x, y)| Self::probe_weights(&grid, Station::Center, x, y))
            .collect::<Result<Vec<_>>>()?;
        let steps = (self.end_time / params.dt).floor() as u64;
        let mut fields = FieldSet::zeros(&grid);
        let mut out = ProbePressures { dt: params.dt, times: Vec::new(), values: vec![Vec::new(); self.probes.len()] };
        for n in 0..=steps {
            if n > 0 {
                stepper.step(&grid, &mut fields, Some(Forcing { source: &source, t0: 0.0 }));
            }
            out.times.push(n as f64 * params.dt);
            for (w, series) in weights.iter().zip(&mut out.values) {
                series.push(w.iter().map(|&(k, a)| a * fields.pressure_at(k)).sum());
            }
        }
        Ok(out)
    }

    /// Non-advective stepping of the transformed system at celerity
    /// `c0·sqrt(1 − M0²)`, mapped back to the probes at `times`.
    pub fn transformed(&self, h: f64, times: &[f64]) -> Result<ProbePressures> {
        let map = LorentzMap::new(&self.flow)?;
        let grid = self.grid(self.half_width * map.ax.max(map.ay), h)?;
        let params = SchemeParams::transformed(&grid, &self.flow, self.cfl_fraction)?;
        let dt = params.dt;
        let mut stepper = FreeStepper::new(params);
        let source = SampledSource::mapped(&grid, self.source(), &map)?;
        struct Track {
            p: [(usize, f64); 4],
            xi: [(usize, f64); 4],
            zeta: [(usize, f64); 4],
            delay: f64,
            pressure: TimeInterpolator,
            impulses: TimeInterpolator,
            p_out: Vec<f64>,
            imp_out: Vec<[f64; 2]>,
        }
        impl Track {
            fn done(&self, n: usize) -> bool {
                self.p_out.len() == n && self.imp_out.len() == n
            }
        }
        let mut tracks = Vec::new();
        for &(x, y) in &self.probes {
            let (xt, yt, delay) = map.map_spacetime(x, y, 0.0);
            // The fields are at rest before the first level of each axis.
            let mut pressure = TimeInterpolator::new(1);
            pressure.push(-dt, &[0.0]);
            let mut impulses = TimeInterpolator::new(2);
            impulses.push(-0.5 * dt, &[0.0, 0.0]);
            tracks.push(Track {
                p: Self::probe_weights(&grid, Station::Center, xt, yt)?,
                xi: Self::probe_weights(&grid, Station::XEdge, xt, yt)?,
                zeta: Self::probe_weights(&grid, Station::YEdge, xt, yt)?,
                delay,
                pressure,
                impulses,
                p_out: Vec::with_capacity(times.len()),
                imp_out: Vec::with_capacity(times.len()),
            });
        }
        let read = |w: &[(usize, f64); 4], f: &dyn Fn(usize) -> f64| w.iter().map(|&(k, a)| a * f(k)).sum::<f64>();
        let mut fields = FieldSet::zeros(&grid);
        let mut level = 0u64;
        loop {
            let tp = level as f64 * dt;
            for t in &mut tracks {
                t.pressure.push(tp, &[read(&t.p, &|k| fields.pressure_at(k))]);
                t.impulses.push(tp + 0.5 * dt, &[read(&t.xi, &|k| fields.xi[k]), read(&t.zeta, &|k| fields.zeta[k])]);
                while let Some(&time) = times.get(t.p_out.len()) {
                    let target = (time + t.delay).max(-dt);
                    let Some(v) = t.pressure.at(target) else { break };
                    t.p_out.push(v[0]);
                }
                while let Some(&time) = times.get(t.imp_out.len()) {
                    let target = (time + t.delay).max(-0.5 * dt);
                    let Some(v) = t.impulses.at(target) else { break };
                    t.imp_out.push([v[0], v[1]]);
                }
            }
            if tracks.iter().all(|t| t.done(times.len())) {
                break;
            }
            stepper.step(&grid, &mut fields, Some(Forcing { source: &source, t0: 0.0 }));
            level += 1;
        }
        let values = tracks
            .into_iter()
            .map(|t| t.p_out.iter().zip(&t.imp_out).map(|(&p, &[xi, zeta])| from_tilde(&map, &self.flow, [p, xi, zeta])[0]).collect())
            .collect();
        let dt_out = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
        Ok(ProbePressures { dt: dt_out, times: times.to_vec(), values })
    }
}

/// Outcome of the reduction check at one resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionCheck {
    pub spacing: f64,
    /// L2 distance between the direct and mapped-back pressures.
    pub difference: f64,
    /// Richardson estimates of the error of each scheme at `spacing`.
    pub direct_error: f64,
    pub transformed_error: f64,
}

impl ReductionCheck {
    pub fn tolerance(&self) -> f64 {
        3.0 * self.direct_error.max(self.transformed_error)
    }

    pub fn passes(&self) -> bool {
        self.difference <= self.tolerance()
    }
}

/// Runs both schemes at `h` and `h/2` and compares them at `h`.
pub fn reduction_check(setup: &ReductionSetup, h: f64) -> Result<ReductionCheck> {
    let coarse = setup.direct(h)?;
    let fine = setup.direct(0.5 * h)?;
    let coarse_t = setup.transformed(h, &coarse.times)?;
    let fine_t = setup.transformed(0.5 * h, &fine.times)?;
    let stride = (coarse.dt / fine.dt).round() as usize;
    Ok(ReductionCheck {
        spacing: h,
        difference: coarse.distance(&coarse_t, 1),
        direct_error: 4.0 / 3.0 * coarse.distance(&fine, stride),
        transformed_error: 4.0 / 3.0 * coarse_t.distance(&fine_t, stride),
    })
}

/// Largest interior vorticity after each step of a physical-geometry run.
#[derive(Debug, Clone, PartialEq)]
pub struct VorticityTrace {
    /// `max|ω|` at levels `0..=steps`.
    pub max_abs: Vec<f64>,
}

impl VorticityTrace {
    /// Level reached by the first step.
    pub fn one_step_level(&self) -> f64 {
        self.max_abs.get(1).copied().unwrap_or(0.0)
    }

    pub fn peak(&self) -> f64 {
        self.max_abs.iter().fold(0.0, |m, v| m.max(*v))
    }
}

fn interior_vorticity_max(grid: &StaggeredGrid, fields: &FieldSet, flow: &FlowState) -> f64 {
    let w = vorticity(grid, fields, flow);
    let n = grid.cells();
    let (xs, ys) = (grid.interior_cells_x(), grid.interior_cells_y());
    let mut m = 0.0f64;
    for j in ys.start + 1..ys.end {
        for i in xs.start + 1..xs.end {
            m = m.max(w[j * (n + 1) + i].abs());
        }
    }
    m
}

/// Releases an irrotational pressure pulse (mass-consistent impulses) at
/// the study's source point and records the interior vorticity.
pub fn vorticity_trace(spec: &ExperimentSpec, layers: usize, flow: &FlowState) -> Result<VorticityTrace> {
    let grid = spec.grid(spec.x_max, layers)?;
    let params = SchemeParams::advective(&grid, flow, spec.cfl_fraction)?;
    let profile = crate::pml::polynomial_profile(&grid, spec.study_sigma_max(), 2);
    let mut stepper = AdvectiveStepper::new(&grid, params, &profile, flow);
    let source = SampledSource::new(&grid, Source::initial(spec.source_center, SourceTarget::Mass), flow)?;
    let mut fields = FieldSet::zeros(&grid);
    source.initialize(&mut fields);
    let mut max_abs = vec![interior_vorticity_max(&grid, &fields, flow)];
    for _ in 0..spec.steps {
        stepper.step(&grid, &mut fields, None);
        max_abs.push(interior_vorticity_max(&grid, &fields, flow));
    }
    Ok(VorticityTrace { max_abs })
}
