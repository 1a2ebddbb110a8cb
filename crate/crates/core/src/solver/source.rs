//! Gaussian excitations: initial data or additive forcing.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::flow::{FlowState, LorentzMap};
use crate::grid::{FieldSet, StaggeredGrid, Station};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    /// Sets the fields at step 0 only.
    InitialCondition,
    /// Adds `dt·profile·ψ(t)` every step.
    TimeForcing,
}

/// Which unknowns receive the excitation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceTarget {
    Pressure,
    Xi,
    Zeta,
    /// Both impulses with the same profile.
    Impulses,
    /// `(ξ, ζ) = (∂_yψ, −∂ₓψ)`, the divergence-free direction, taken as the
    /// discrete curl of the profile sampled at cell corners so that the
    /// discrete divergence vanishes.
    Curl,
    /// Pressure plus the convected impulses `(u0, v0)/c0²` times it, which
    /// keeps the acoustic velocity irrotational under flow.
    Mass,
}

/// Time modulation `ψ(t)`; every profile vanishes for `t < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeProfile {
    Zero,
    Constant,
    /// `sin(ω t)`.
    Sine { omega: f64 },
    /// `exp(−rate·t)`.
    Decay { rate: f64 },
    /// `exp(−((t − center)/width)²)`.
    Pulse { center: f64, width: f64 },
}

impl TimeProfile {
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match *self {
            TimeProfile::Zero => 0.0,
            TimeProfile::Constant => 1.0,
            TimeProfile::Sine { omega } => (omega * t).sin(),
            TimeProfile::Decay { rate } => (-rate * t).exp(),
            TimeProfile::Pulse { center, width } => {
                let s = (t - center) / width;
                (-s * s).exp()
            }
        }
    }
}

/// A Gaussian source `amplitude·exp(−ln2·r²/width)·ψ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    pub kind: SourceKind,
    pub center: (f64, f64),
    pub width: f64,
    pub amplitude: f64,
    pub time_profile: TimeProfile,
    pub target: SourceTarget,
    /// Overwrite instead of add, on the stations where the profile exceeds
    /// half its peak.
    pub hard: bool,
}

impl Source {
    pub fn forcing(center: (f64, f64), target: SourceTarget, time_profile: TimeProfile) -> Self {
        Self { kind: SourceKind::TimeForcing, center, width: 9.0, amplitude: 1.0, time_profile, target, hard: false }
    }

    pub fn initial(center: (f64, f64), target: SourceTarget) -> Self {
        Self {
            kind: SourceKind::InitialCondition,
            center,
            width: 9.0,
            amplitude: 1.0,
            time_profile: TimeProfile::Constant,
            target,
            hard: false,
        }
    }

    pub fn spatial(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.center.0, y - self.center.1);
        self.amplitude * (-LN_2 * (dx * dx + dy * dy) / self.width).exp()
    }

    /// `(∂ₓ, ∂_y)` of [`Source::spatial`].
    pub fn spatial_gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let g = self.spatial(x, y);
        let k = -2.0 * LN_2 / self.width;
        (k * (x - self.center.0) * g, k * (y - self.center.1) * g)
    }
}

/// A source sampled on one grid.
#[derive(Debug, Clone)]
pub struct SampledSource {
    pub source: Source,
    pressure: Option<Vec<f64>>,
    xi: Option<Vec<f64>>,
    zeta: Option<Vec<f64>>,
    /// Per-station time delay of the pressure forcing.
    delay: Option<Vec<f64>>,
}

fn sample(grid: &StaggeredGrid, station: Station, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let (nx, ny) = grid.dims(station);
    let mut out = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            if grid.is_wall(station, i, j) {
                continue;
            }
            let (x, y) = grid.position(station, i, j);
            out[grid.index(station, i, j)] = f(x, y);
        }
    }
    out
}

/// `(ξ, ζ) = (δ_yψ, −δₓψ)` from `ψ` sampled at the cell corners.
fn discrete_curl(grid: &StaggeredGrid, psi: impl Fn(f64, f64) -> f64) -> (Vec<f64>, Vec<f64>) {
    let n = grid.cells();
    let h = grid.dx();
    let [x0, y0] = grid.origin();
    let corner: Vec<f64> = (0..=n)
        .flat_map(|j| (0..=n).map(move |i| (i, j)))
        .map(|(i, j)| psi(x0 + i as f64 * h, y0 + j as f64 * h))
        .collect();
    let c = |i: usize, j: usize| corner[j * (n + 1) + i];
    let mut xi = vec![0.0; grid.len(Station::XEdge)];
    let mut zeta = vec![0.0; grid.len(Station::YEdge)];
    for j in 0..n {
        for i in 1..n {
            xi[grid.index(Station::XEdge, i, j)] = (c(i, j + 1) - c(i, j)) / h;
        }
    }
    for j in 1..n {
        for i in 0..n {
            zeta[grid.index(Station::YEdge, i, j)] = -(c(i + 1, j) - c(i, j)) / h;
        }
    }
    (xi, zeta)
}

impl SampledSource {
    pub fn new(grid: &StaggeredGrid, source: Source, flow: &FlowState) -> Result<Self> {
        let [x0, y0] = grid.origin();
        let (cx, cy) = source.center;
        let l = grid.length();
        if !(cx >= x0 && cx <= x0 + l && cy >= y0 && cy <= y0 + l) {
            return Err(Error::Config(format!("source centre ({cx}, {cy}) lies outside the domain")));
        }
        if !(source.width > 0.0) {
            return Err(Error::Config(format!("source width must be positive, got {}", source.width)));
        }
        let s = &source;
        let c2 = flow.c0 * flow.c0;
        let g = |st| sample(grid, st, |x, y| s.spatial(x, y));
        let (pressure, xi, zeta) = match source.target {
            SourceTarget::Pressure => (Some(g(Station::Center)), None, None),
            SourceTarget::Xi => (None, Some(g(Station::XEdge)), None),
            SourceTarget::Zeta => (None, None, Some(g(Station::YEdge))),
            SourceTarget::Impulses => (None, Some(g(Station::XEdge)), Some(g(Station::YEdge))),
            SourceTarget::Curl => {
                let (xi, zeta) = discrete_curl(grid, |x, y| s.spatial(x, y));
                (None, Some(xi), Some(zeta))
            }
            SourceTarget::Mass => (
                Some(g(Station::Center)),
                Some(sample(grid, Station::XEdge, |x, y| flow.u0 / c2 * s.spatial(x, y))),
                Some(sample(grid, Station::YEdge, |x, y| flow.v0 / c2 * s.spatial(x, y))),
            ),
        };
        Ok(Self { source, pressure, xi, zeta, delay: None })
    }

    /// A mass forcing given in physical space, seen from the transformed
    /// space-time of `map`.
    ///
    /// The transformed grid samples the physical profile at
    /// `(x'/ax, y'/ay)` and delays `ψ` by `tx·x + ty·y`. The mass forcing
    /// `(1, u0/c0², v0/c0²)·f·ψ` becomes a pure pressure forcing there.
    pub fn mapped(grid: &StaggeredGrid, source: Source, map: &LorentzMap) -> Result<Self> {
        if source.target != SourceTarget::Mass || source.kind != SourceKind::TimeForcing || source.hard {
            return Err(Error::Config("only additive mass forcing can be mapped".into()));
        }
        if !(source.width > 0.0) {
            return Err(Error::Config(format!("source width must be positive, got {}", source.width)));
        }
        let physical = |x: f64, y: f64| (x / map.ax, y / map.ay);
        let pressure = sample(grid, Station::Center, |x, y| {
            let (px, py) = physical(x, y);
            source.spatial(px, py)
        });
        let delay = sample(grid, Station::Center, |x, y| {
            let (px, py) = physical(x, y);
            map.tx * px + map.ty * py
        });
        Ok(Self { source, pressure: Some(pressure), xi: None, zeta: None, delay: Some(delay) })
    }

    pub fn kind(&self) -> SourceKind {
        self.source.kind
    }

    /// Writes the initial data (`ψ` ignored); pressure is split evenly
    /// between `pₓ` and `p_y`.
    pub fn initialize(&self, fields: &mut FieldSet) {
        if let Some(w) = &self.pressure {
            for (k, &v) in w.iter().enumerate() {
                fields.p_x[k] = 0.5 * v;
                fields.p_y[k] = 0.5 * v;
            }
        }
        if let Some(w) = &self.xi {
            fields.xi.copy_from_slice(w);
        }
        if let Some(w) = &self.zeta {
            fields.zeta.copy_from_slice(w);
        }
    }

    fn apply(&self, w: &[f64], targets: &mut [&mut Vec<f64>], scale: f64, psi: f64, dt: f64) {
        if self.source.hard {
            let peak = w.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            for (k, &v) in w.iter().enumerate() {
                if v.abs() >= 0.5 * peak && peak > 0.0 {
                    for t in targets.iter_mut() {
                        t[k] = scale * v * psi;
                    }
                }
            }
        } else {
            let a = dt * psi * scale;
            if a == 0.0 {
                return;
            }
            for (k, &v) in w.iter().enumerate() {
                for t in targets.iter_mut() {
                    t[k] += a * v;
                }
            }
        }
    }

    /// Pressure part of the forcing, evaluated at `t`.
    pub fn force_pressure(&self, fields: &mut FieldSet, t: f64, dt: f64) {
        if self.source.kind != SourceKind::TimeForcing {
            return;
        }
        let Some(w) = &self.pressure else { return };
        if let Some(delay) = &self.delay {
            for (k, (&v, &tau)) in w.iter().zip(delay).enumerate() {
                let a = 0.5 * dt * v * self.source.time_profile.eval(t - tau);
                fields.p_x[k] += a;
                fields.p_y[k] += a;
            }
        } else {
            let psi = self.source.time_profile.eval(t);
            self.apply(w, &mut [&mut fields.p_x, &mut fields.p_y], 0.5, psi, dt);
        }
    }

    /// Impulse part of the forcing, evaluated at `t`.
    pub fn force_impulses(&self, fields: &mut FieldSet, t: f64, dt: f64) {
        if self.source.kind != SourceKind::TimeForcing {
            return;
        }
        let psi = self.source.time_profile.eval(t);
        if let Some(w) = &self.xi {
            self.apply(w, &mut [&mut fields.xi], 1.0, psi, dt);
        }
        if let Some(w) = &self.zeta {
            self.apply(w, &mut [&mut fields.zeta], 1.0, psi, dt);
        }
    }
}

/// Adds `dt·profile·ψ(t)` to every target of a forcing source, or writes the
/// initial data of an initial-condition source.
pub fn apply_source(fields: &mut FieldSet, source: &SampledSource, t: f64, dt: f64) {
    match source.kind() {
        SourceKind::InitialCondition => source.initialize(fields),
        SourceKind::TimeForcing => {
            source.force_pressure(fields, t, dt);
            source.force_impulses(fields, t, dt);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pbm_grid() -> StaggeredGrid {
        StaggeredGrid::new(100, 100.0, 45, 45).unwrap().centered()
    }

    #[test]
    fn initial_impulses_pbm2() {
        let g = pbm_grid();
        let s = SampledSource::new(&g, Source::initial((25.0, 0.0), SourceTarget::Impulses), &FlowState::at_rest(1.0)).unwrap();
        let mut f = FieldSet::zeros(&g);
        apply_source(&mut f, &s, 0.0, 0.5);
        assert!(f.p_x.iter().chain(&f.p_y).all(|&v| v == 0.0));
        let k = g.index(Station::XEdge, 75, 50);
        let want = (-LN_2 * 0.25 / 9.0).exp();
        assert!((f.xi[k] - want).abs() < 1e-15);
        let k = g.index(Station::YEdge, 75, 50);
        assert!((f.zeta[k] - (-LN_2 * 0.25 / 9.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn zero_profile_leaves_fields() {
        let g = pbm_grid();
        let s = SampledSource::new(&g, Source::forcing((0.0, 0.0), SourceTarget::Pressure, TimeProfile::Zero), &FlowState::at_rest(1.0))
            .unwrap();
        let mut f = FieldSet::zeros(&g);
        f.p_x[10] = 3.0;
        let before = f.clone();
        apply_source(&mut f, &s, 1.0, 0.5);
        assert_eq!(f, before);
    }

    #[test]
    fn curl_forcing_leaves_pressure_and_is_divergence_free() {
        let g = pbm_grid();
        let s = SampledSource::new(&g, Source::forcing((25.0, 0.0), SourceTarget::Curl, TimeProfile::Constant), &FlowState::at_rest(1.0))
            .unwrap();
        let mut f = FieldSet::zeros(&g);
        apply_source(&mut f, &s, 1.0, 1.0);
        assert!(f.p_x.iter().chain(&f.p_y).all(|&v| v == 0.0));
        assert!(f.xi.iter().any(|&v| v != 0.0));
        // Discrete divergence vanishes up to rounding.
        let n = g.cells();
        let mut div: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let d = f.xi[g.index(Station::XEdge, i + 1, j)] - f.xi[g.index(Station::XEdge, i, j)]
                    + f.zeta[g.index(Station::YEdge, i, j + 1)]
                    - f.zeta[g.index(Station::YEdge, i, j)];
                div = div.max(d.abs());
                peak = peak.max(f.xi[g.index(Station::XEdge, i, j)].abs());
            }
        }
        assert!(div < 1e-14 * peak, "{div} vs {peak}");
    }

    #[test]
    fn source_outside_domain_rejected() {
        let g = pbm_grid();
        let s = Source::forcing((60.0, 0.0), SourceTarget::Pressure, TimeProfile::Constant);
        assert!(SampledSource::new(&g, s, &FlowState::at_rest(1.0)).is_err());
    }

    #[test]
    fn profiles_vanish_before_zero() {
        for p in [
            TimeProfile::Constant,
            TimeProfile::Sine { omega: 1.0 },
            TimeProfile::Decay { rate: 1.0 },
            TimeProfile::Pulse { center: 0.0, width: 1.0 },
        ] {
            assert_eq!(p.eval(-1e-9), 0.0);
        }
        assert!((TimeProfile::Sine { omega: std::f64::consts::PI }.eval(0.5) - 1.0).abs() < 1e-15);
    }
}
