use crate::grid::{FieldSet, StaggeredGrid};
use crate::pml::SigmaProfile;

use super::params::SchemeParams;
use super::source::SampledSource;

/// A forcing source together with the physical time of level 0.
#[derive(Debug, Clone, Copy)]
pub struct Forcing<'a> {
    pub source: &'a SampledSource,
    pub t0: f64,
}

impl Forcing<'_> {
    pub(crate) fn pressure(&self, fields: &mut FieldSet, level: u64, dt: f64) {
        let t = self.t0 + (level as f64 + 0.5) * dt;
        self.source.force_pressure(fields, t, dt);
    }

    pub(crate) fn impulses(&self, fields: &mut FieldSet, level: u64, dt: f64) {
        let t = self.t0 + (level as f64 + 1.0) * dt;
        self.source.force_impulses(fields, t, dt);
    }
}

/// One explicit leapfrog update from level `n` to `n+1`.
///
/// Pressure forcing is sampled at `t^{n+1/2}` after the pressure update and
/// impulse forcing at `t^{n+1}` after the impulse update.
pub trait Stepper {
    fn params(&self) -> &SchemeParams;
    fn step(&mut self, grid: &StaggeredGrid, fields: &mut FieldSet, forcing: Option<Forcing<'_>>);
}

/// Free-space scheme on split pressures: `pₓ` takes the x-flux and `p_y`
/// the y-flux.
#[derive(Debug, Clone)]
pub struct FreeStepper {
    params: SchemeParams,
}

impl FreeStepper {
    pub fn new(params: SchemeParams) -> Self {
        Self { params }
    }
}

impl Stepper for FreeStepper {
    fn params(&self) -> &SchemeParams {
        &self.params
    }

    fn step(&mut self, grid: &StaggeredGrid, f: &mut FieldSet, forcing: Option<Forcing<'_>>) {
        let n = grid.cells();
        let m = n + 1;
        let ap = self.params.sigma_ratio * self.params.pressure_coeff;
        let ai = self.params.sigma_ratio * self.params.impulse_coeff;
        for j in 0..n {
            for i in 0..n {
                let c = j * n + i;
                f.p_x[c] -= ap * (f.xi[j * m + i + 1] - f.xi[j * m + i]);
                f.p_y[c] -= ap * (f.zeta[c + n] - f.zeta[c]);
            }
        }
        if let Some(s) = &forcing {
            s.pressure(f, f.time_level, self.params.dt);
        }
        for j in 0..n {
            for i in 1..n {
                let c = j * n + i;
                f.xi[j * m + i] -= ai * ((f.p_x[c] + f.p_y[c]) - (f.p_x[c - 1] + f.p_y[c - 1]));
            }
        }
        for j in 1..n {
            for i in 0..n {
                let c = j * n + i;
                f.zeta[c] -= ai * ((f.p_x[c] + f.p_y[c]) - (f.p_x[c - n] + f.p_y[c - n]));
            }
        }
        if let Some(s) = &forcing {
            s.impulses(f, f.time_level, self.params.dt);
        }
        f.time_level += 1;
    }
}

/// Damping factor `(2 − σΔt)/(2 + σΔt)` and gradient coefficient
/// `2a/(2 + σΔt)` for each sample of one profile.
pub(crate) fn factors(sigma: &[f64], dt: f64, a: f64) -> (Vec<f64>, Vec<f64>) {
    sigma
        .iter()
        .map(|&s| {
            let sd = s * dt;
            ((2.0 - sd) / (2.0 + sd), (2.0 * a) / (2.0 + sd))
        })
        .unzip()
}

/// Split-field layer scheme with time-centred damping.
#[derive(Debug, Clone)]
pub struct PmlStepper {
    params: SchemeParams,
    px: (Vec<f64>, Vec<f64>),
    py: (Vec<f64>, Vec<f64>),
    xi: (Vec<f64>, Vec<f64>),
    zeta: (Vec<f64>, Vec<f64>),
}

impl PmlStepper {
    pub fn new(params: SchemeParams, profile: &SigmaProfile) -> Self {
        let ap = params.sigma_ratio * params.pressure_coeff;
        let ai = params.sigma_ratio * params.impulse_coeff;
        Self {
            params,
            px: factors(&profile.sigma_x_at_centers, params.dt, ap),
            py: factors(&profile.sigma_y_at_centers, params.dt, ap),
            xi: factors(&profile.sigma_x_at_edges, params.dt, ai),
            zeta: factors(&profile.sigma_y_at_edges, params.dt, ai),
        }
    }
}

impl Stepper for PmlStepper {
    fn params(&self) -> &SchemeParams {
        &self.params
    }

    fn step(&mut self, grid: &StaggeredGrid, f: &mut FieldSet, forcing: Option<Forcing<'_>>) {
        let n = grid.cells();
        let m = n + 1;
        let (pxf, pxc) = (&self.px.0, &self.px.1);
        let (pyf, pyc) = (&self.py.0, &self.py.1);
        for j in 0..n {
            for i in 0..n {
                let c = j * n + i;
                f.p_x[c] = pxf[i] * f.p_x[c] - pxc[i] * (f.xi[j * m + i + 1] - f.xi[j * m + i]);
                f.p_y[c] = pyf[j] * f.p_y[c] - pyc[j] * (f.zeta[c + n] - f.zeta[c]);
            }
        }
        if let Some(s) = &forcing {
            s.pressure(f, f.time_level, self.params.dt);
        }
        let (xf, xc) = (&self.xi.0, &self.xi.1);
        for j in 0..n {
            for i in 1..n {
                let c = j * n + i;
                let e = j * m + i;
                f.xi[e] = xf[i] * f.xi[e] - xc[i] * ((f.p_x[c] + f.p_y[c]) - (f.p_x[c - 1] + f.p_y[c - 1]));
            }
        }
        let (zf, zc) = (&self.zeta.0, &self.zeta.1);
        for j in 1..n {
            for i in 0..n {
                let c = j * n + i;
                f.zeta[c] = zf[j] * f.zeta[c] - zc[j] * ((f.p_x[c] + f.p_y[c]) - (f.p_x[c - n] + f.p_y[c - n]));
            }
        }
        if let Some(s) = &forcing {
            s.impulses(f, f.time_level, self.params.dt);
        }
        f.time_level += 1;
    }
}

/// One free-space step.
pub fn step_free(grid: &StaggeredGrid, fields: &mut FieldSet, params: &SchemeParams) {
    FreeStepper::new(*params).step(grid, fields, None);
}

/// One layer step.
pub fn step_pml(grid: &StaggeredGrid, fields: &mut FieldSet, params: &SchemeParams, profile: &SigmaProfile) {
    PmlStepper::new(*params, profile).step(grid, fields, None);
}
