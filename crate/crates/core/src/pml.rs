//! Absorbing-coefficient profiles and continuous-time right-hand sides of the
//! split-field layer equations.
//!
//! Coefficients are stored as damping rates (1/time). A length-based
//! coefficient `σ*` of the dimensionless equations corresponds to the rate
//! `c0·σ*`.

use std::io::Write;

use crate::error::Result;
use crate::flow::FlowState;
use crate::grid::{FieldSet, StaggeredGrid, Station};

/// Samplings of `σ*ₓ` and `σ*_y` at the stations each equation uses.
///
/// Centre samples (`i+1/2`) feed the pressure equations, edge samples (`i`)
/// feed the impulse equations.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaProfile {
    pub sigma_x_at_centers: Vec<f64>,
    pub sigma_x_at_edges: Vec<f64>,
    pub sigma_y_at_centers: Vec<f64>,
    pub sigma_y_at_edges: Vec<f64>,
    pub sigma_max: f64,
    /// `None` for the piecewise-constant profile.
    pub ramp_exponent: Option<u32>,
}

/// Depth into a layer of `n` cells, in cells, for a station at coordinate
/// `s` (in cells from the lower wall) of a `cells`-wide axis.
fn depth(s: f64, n: usize, cells: usize) -> f64 {
    let n = n as f64;
    let far = cells as f64 - n;
    (n - s).max(s - far).max(0.0)
}

fn sample(cells: usize, layer: usize, shape: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
    let centers = (0..cells).map(|i| shape(depth(i as f64 + 0.5, layer, cells))).collect();
    let edges = (0..=cells).map(|i| shape(depth(i as f64, layer, cells))).collect();
    (centers, edges)
}

impl SigmaProfile {
    /// Identically zero coefficients.
    pub fn zero(grid: &StaggeredGrid) -> Self {
        polynomial_profile(grid, 0.0, 2)
    }

    pub fn is_zero(&self) -> bool {
        [&self.sigma_x_at_centers, &self.sigma_x_at_edges, &self.sigma_y_at_centers, &self.sigma_y_at_edges]
            .iter()
            .all(|v| v.iter().all(|&s| s == 0.0))
    }

    /// Writes `index,position,sigma_x_center,sigma_x_edge` rows, one per edge
    /// index; the centre column of the last row is empty.
    pub fn write_csv<W: Write>(&self, grid: &StaggeredGrid, mut w: W) -> Result<()> {
        writeln!(w, "index,position,sigma_x_center,sigma_x_edge")?;
        for (i, edge) in self.sigma_x_at_edges.iter().enumerate() {
            let x = grid.origin()[0] + i as f64 * grid.dx();
            match self.sigma_x_at_centers.get(i) {
                Some(c) => writeln!(w, "{i},{x},{c},{edge}")?,
                None => writeln!(w, "{i},{x},,{edge}")?,
            }
        }
        Ok(())
    }
}

/// `σ*(d) = sigma_max·(d/δ)^exponent` with `d` the depth into the layer.
///
/// ```
/// use advac::grid::StaggeredGrid;
/// use advac::pml::polynomial_profile;
///
/// let g = StaggeredGrid::new(20, 20.0, 4, 4).unwrap();
/// let s = polynomial_profile(&g, 3.0, 2);
/// assert_eq!(s.sigma_x_at_edges[0], 3.0);
/// assert_eq!(s.sigma_x_at_edges[2], 0.75);
/// assert_eq!(s.sigma_x_at_edges[4], 0.0);
/// ```
pub fn polynomial_profile(grid: &StaggeredGrid, sigma_max: f64, ramp_exponent: u32) -> SigmaProfile {
    assert!(sigma_max >= 0.0, "sigma_max must be nonnegative");
    assert!(ramp_exponent >= 1, "ramp exponent must be at least 1");
    let shape = |n: usize| {
        move |d: f64| if n == 0 { 0.0 } else { sigma_max * (d / n as f64).powi(ramp_exponent as i32) }
    };
    let (xc, xe) = sample(grid.cells(), grid.pml_cells_x(), shape(grid.pml_cells_x()));
    let (yc, ye) = sample(grid.cells(), grid.pml_cells_y(), shape(grid.pml_cells_y()));
    SigmaProfile {
        sigma_x_at_centers: xc,
        sigma_x_at_edges: xe,
        sigma_y_at_centers: yc,
        sigma_y_at_edges: ye,
        sigma_max,
        ramp_exponent: Some(ramp_exponent),
    }
}

/// `sigma_value` at every station strictly inside a layer, zero elsewhere.
pub fn constant_profile(grid: &StaggeredGrid, sigma_value: f64) -> SigmaProfile {
    assert!(sigma_value >= 0.0, "sigma must be nonnegative");
    let shape = |d: f64| if d > 0.0 { sigma_value } else { 0.0 };
    let (xc, xe) = sample(grid.cells(), grid.pml_cells_x(), shape);
    let (yc, ye) = sample(grid.cells(), grid.pml_cells_y(), shape);
    SigmaProfile {
        sigma_x_at_centers: xc,
        sigma_x_at_edges: xe,
        sigma_y_at_centers: yc,
        sigma_y_at_edges: ye,
        sigma_max: sigma_value,
        ramp_exponent: None,
    }
}

/// Default peak rate `8·c_ref/δ` for the thinner of the two layers; zero when
/// the grid has no layers.
pub fn default_sigma_max(grid: &StaggeredGrid, c_ref: f64) -> f64 {
    let n = match (grid.pml_cells_x(), grid.pml_cells_y()) {
        (0, 0) => return 0.0,
        (0, n) | (n, 0) => n,
        (a, b) => a.min(b),
    };
    8.0 * c_ref / (n as f64 * grid.dx())
}

/// Time derivatives of the four unknowns, laid out like [`FieldSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRates {
    pub p_x: Vec<f64>,
    pub p_y: Vec<f64>,
    pub xi: Vec<f64>,
    pub zeta: Vec<f64>,
}

impl FieldRates {
    fn zeros(grid: &StaggeredGrid) -> Self {
        let f = FieldSet::zeros(grid);
        Self { p_x: f.p_x, p_y: f.p_y, xi: f.xi, zeta: f.zeta }
    }
}

/// Right-hand side of the layer equations without flow:
/// `∂t pₓ = −σₓpₓ − c0²∂ₓξ`, `∂t p_y = −σ_y p_y − c0²∂_yζ`,
/// `∂t ξ = −σₓξ − ∂ₓp`, `∂t ζ = −σ_y ζ − ∂_y p`.
///
/// Derivatives are the staggered centred differences; wall impulses have zero
/// rate. Only `flow.c0` is used.
pub fn pml_rhs_no_flow(grid: &StaggeredGrid, fields: &FieldSet, profile: &SigmaProfile, flow: &FlowState) -> FieldRates {
    let n = grid.cells();
    let h = grid.dx();
    let c2 = flow.c0 * flow.c0;
    let mut r = FieldRates::zeros(grid);
    for j in 0..n {
        for i in 0..n {
            let k = grid.index(Station::Center, i, j);
            let dxi = (fields.xi[grid.index(Station::XEdge, i + 1, j)] - fields.xi[grid.index(Station::XEdge, i, j)]) / h;
            let dzeta =
                (fields.zeta[grid.index(Station::YEdge, i, j + 1)] - fields.zeta[grid.index(Station::YEdge, i, j)]) / h;
            r.p_x[k] = -profile.sigma_x_at_centers[i] * fields.p_x[k] - c2 * dxi;
            r.p_y[k] = -profile.sigma_y_at_centers[j] * fields.p_y[k] - c2 * dzeta;
        }
    }
    for j in 0..n {
        for i in 1..n {
            let k = grid.index(Station::XEdge, i, j);
            let dp = (fields.pressure_at(grid.index(Station::Center, i, j))
                - fields.pressure_at(grid.index(Station::Center, i - 1, j)))
                / h;
            r.xi[k] = -profile.sigma_x_at_edges[i] * fields.xi[k] - dp;
        }
    }
    for j in 1..n {
        for i in 0..n {
            let k = grid.index(Station::YEdge, i, j);
            let dp = (fields.pressure_at(grid.index(Station::Center, i, j))
                - fields.pressure_at(grid.index(Station::Center, i, j - 1)))
                / h;
            r.zeta[k] = -profile.sigma_y_at_edges[j] * fields.zeta[k] - dp;
        }
    }
    r
}

/// Free-space right-hand side: `∂t pₓ = −c0²∂ₓξ`, `∂t p_y = −c0²∂_yζ`,
/// `∂t ξ = −∂ₓp`, `∂t ζ = −∂_y p`.
pub fn free_rhs(grid: &StaggeredGrid, fields: &FieldSet, flow: &FlowState) -> FieldRates {
    let n = grid.cells();
    let h = grid.dx();
    let c2 = flow.c0 * flow.c0;
    let mut r = FieldRates::zeros(grid);
    let p = fields.pressure();
    for j in 0..n {
        let xrow = &fields.xi[j * (n + 1)..(j + 1) * (n + 1)];
        for i in 0..n {
            r.p_x[j * n + i] = -(c2 * ((xrow[i + 1] - xrow[i]) / h));
            r.p_y[j * n + i] = -(c2 * ((fields.zeta[(j + 1) * n + i] - fields.zeta[j * n + i]) / h));
        }
        for i in 1..n {
            r.xi[j * (n + 1) + i] = -((p[j * n + i] - p[j * n + i - 1]) / h);
        }
    }
    for j in 1..n {
        for i in 0..n {
            r.zeta[j * n + i] = -((p[j * n + i] - p[(j - 1) * n + i]) / h);
        }
    }
    r
}

/// Coefficients of the advective layer system for one flow.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AdvectiveCoefficients {
    pub u0: f64,
    pub v0: f64,
    pub c2: f64,
    /// `1 − M0²`.
    pub d: f64,
    /// Pressure split damping factor `β`.
    pub p_self: f64,
    /// `u0/β`, `v0/β`: impulse feed into `pₓ`, `p_y`.
    pub px_from_xi: f64,
    pub py_from_zeta: f64,
    /// `(1 + (u0² − v0²)/c0²)/β` and `(1 + (v0² − u0²)/c0²)/β`.
    pub xi_self: f64,
    pub zeta_self: f64,
    /// `u0·β/c0²`, `v0·β/c0²`.
    pub xi_from_p: f64,
    pub zeta_from_p: f64,
    /// `u0·v0/(c0²·β)`.
    pub cross: f64,
}

impl AdvectiveCoefficients {
    pub fn new(flow: &FlowState) -> Self {
        let c2 = flow.c0 * flow.c0;
        let d = flow.one_minus_mach2();
        let beta = d.sqrt();
        let (mx2, my2) = (flow.u0 * flow.u0 / c2, flow.v0 * flow.v0 / c2);
        Self {
            u0: flow.u0,
            v0: flow.v0,
            c2,
            d,
            p_self: beta,
            px_from_xi: flow.u0 / beta,
            py_from_zeta: flow.v0 / beta,
            xi_self: (1.0 + mx2 - my2) / beta,
            zeta_self: (1.0 + my2 - mx2) / beta,
            xi_from_p: flow.u0 * beta / c2,
            zeta_from_p: flow.v0 * beta / c2,
            cross: flow.u0 * flow.v0 / (c2 * beta),
        }
    }
}

/// Four-point stencils shared by the advective right-hand side and stepper.
///
/// At the x-edge `(i, j+1/2)` the neighbouring y-edges are `(i−1/2, j)`,
/// `(i+1/2, j)`, `(i−1/2, j+1)`, `(i+1/2, j+1)`; symmetrically at y-edges.
pub(crate) mod stencil {
    use crate::grid::{StaggeredGrid, Station};

    /// Mean of `ζ` at the four y-edges around x-edge `(i, j+1/2)`, with
    /// `1 ≤ i ≤ J−1`.
    #[inline]
    pub fn zeta_at_xedge(g: &StaggeredGrid, zeta: &[f64], i: usize, j: usize) -> f64 {
        let a = g.index(Station::YEdge, i - 1, j);
        let b = g.index(Station::YEdge, i - 1, j + 1);
        0.25 * ((zeta[a] + zeta[a + 1]) + (zeta[b] + zeta[b + 1]))
    }

    /// `(∂ₓζ, ∂_yζ)` at x-edge `(i, j+1/2)`.
    #[inline]
    pub fn grad_zeta_at_xedge(g: &StaggeredGrid, zeta: &[f64], i: usize, j: usize, h: f64) -> (f64, f64) {
        let a = g.index(Station::YEdge, i - 1, j);
        let b = g.index(Station::YEdge, i - 1, j + 1);
        let dx = ((zeta[a + 1] - zeta[a]) + (zeta[b + 1] - zeta[b])) / (2.0 * h);
        let dy = ((zeta[b] - zeta[a]) + (zeta[b + 1] - zeta[a + 1])) / (2.0 * h);
        (dx, dy)
    }

    /// Mean of `ξ` at the four x-edges around y-edge `(i+1/2, j)`, with
    /// `1 ≤ j ≤ J−1`.
    #[inline]
    pub fn xi_at_yedge(g: &StaggeredGrid, xi: &[f64], i: usize, j: usize) -> f64 {
        let a = g.index(Station::XEdge, i, j - 1);
        let b = g.index(Station::XEdge, i, j);
        0.25 * ((xi[a] + xi[a + 1]) + (xi[b] + xi[b + 1]))
    }

    /// `(∂ₓξ, ∂_yξ)` at y-edge `(i+1/2, j)`.
    #[inline]
    pub fn grad_xi_at_yedge(g: &StaggeredGrid, xi: &[f64], i: usize, j: usize, h: f64) -> (f64, f64) {
        let a = g.index(Station::XEdge, i, j - 1);
        let b = g.index(Station::XEdge, i, j);
        let dx = ((xi[a + 1] - xi[a]) + (xi[b + 1] - xi[b])) / (2.0 * h);
        let dy = ((xi[b] - xi[a]) + (xi[b + 1] - xi[a + 1])) / (2.0 * h);
        (dx, dy)
    }

    /// `∂ₓξ` at x-edge `(i, j+1/2)` over the two neighbouring x-edges.
    #[inline]
    pub fn dx_xi_at_xedge(g: &StaggeredGrid, xi: &[f64], i: usize, j: usize, h: f64) -> f64 {
        let k = g.index(Station::XEdge, i, j);
        (xi[k + 1] - xi[k - 1]) / (2.0 * h)
    }

    /// `∂_yζ` at y-edge `(i+1/2, j)` over the two neighbouring y-edges.
    #[inline]
    pub fn dy_zeta_at_yedge(g: &StaggeredGrid, zeta: &[f64], i: usize, j: usize, h: f64) -> f64 {
        let k = g.index(Station::YEdge, i, j);
        let nx = g.cells();
        (zeta[k + nx] - zeta[k - nx]) / (2.0 * h)
    }
}

/// Right-hand side of the advective layer system.
///
/// ```text
/// ∂t pₓ = −β σₓ pₓ − (u0/β) σₓ ξ − c0² ∂ₓξ
/// ∂t p_y = −β σ_y p_y − (v0/β) σ_y ζ − c0² ∂_yζ
/// ∂t ξ = −∂ₓ(2u0 ξ + v0 ζ) − β² ∂ₓp − ∂_y(u0 ζ) − (1 + (u0² − v0²)/c0²)/β σₓ ξ
///        − (u0 β/c0²)(σₓpₓ + σ_y p_y) − u0 v0 (σₓ + σ_y)/(c0² β) ζ
/// ∂t ζ = −∂ₓ(v0 ξ) − ∂_y(u0 ξ + 2v0 ζ) − β² ∂_y p − (1 + (v0² − u0²)/c0²)/β σ_y ζ
///        − (v0 β/c0²)(σₓpₓ + σ_y p_y) − u0 v0 (σₓ + σ_y)/(c0² β) ξ
/// ```
///
/// with `β = sqrt(1 − M0²)` and `σ` the damping rates. A damping term that
/// couples two unknowns is formed at the station of the unknown it reads
/// (`σ·f` sampled where `f` lives) and then averaged to the receiving
/// station, so each coupling pair is the transpose of the other. Wall
/// impulses have zero rate.
pub fn pml_rhs_advective(grid: &StaggeredGrid, fields: &FieldSet, profile: &SigmaProfile, flow: &FlowState) -> FieldRates {
    use stencil::*;
    let n = grid.cells();
    let h = grid.dx();
    let k = AdvectiveCoefficients::new(flow);
    let mut r = FieldRates::zeros(grid);
    let p = fields.pressure();
    let (wxi, wzeta) = cross_weighted(grid, profile, &fields.xi, &fields.zeta);
    let (sxc, sxe) = (&profile.sigma_x_at_centers, &profile.sigma_x_at_edges);
    let (syc, sye) = (&profile.sigma_y_at_centers, &profile.sigma_y_at_edges);
    for j in 0..n {
        for i in 0..n {
            let c = grid.index(Station::Center, i, j);
            let xa = grid.index(Station::XEdge, i, j);
            let ya = grid.index(Station::YEdge, i, j);
            let ya1 = grid.index(Station::YEdge, i, j + 1);
            let xi_c = 0.5 * (sxe[i] * fields.xi[xa] + sxe[i + 1] * fields.xi[xa + 1]);
            let zeta_c = 0.5 * (sye[j] * fields.zeta[ya] + sye[j + 1] * fields.zeta[ya1]);
            r.p_x[c] = -k.p_self * sxc[i] * fields.p_x[c] - k.px_from_xi * xi_c - k.c2 * (fields.xi[xa + 1] - fields.xi[xa]) / h;
            r.p_y[c] = -k.p_self * syc[j] * fields.p_y[c] - k.py_from_zeta * zeta_c - k.c2 * (fields.zeta[ya1] - fields.zeta[ya]) / h;
        }
    }
    for j in 0..n {
        for i in 1..n {
            let e = grid.index(Station::XEdge, i, j);
            let (cl, cr) = (grid.index(Station::Center, i - 1, j), grid.index(Station::Center, i, j));
            let dxxi = dx_xi_at_xedge(grid, &fields.xi, i, j, h);
            let (dxz, dyz) = grad_zeta_at_xedge(grid, &fields.zeta, i, j, h);
            let feed = 0.5 * (sxc[i - 1] * fields.p_x[cl] + sxc[i] * fields.p_x[cr]) + syc[j] * 0.5 * (fields.p_y[cl] + fields.p_y[cr]);
            r.xi[e] = -(2.0 * k.u0 * dxxi + k.v0 * dxz + k.u0 * dyz)
                - k.d * (p[cr] - p[cl]) / h
                - k.xi_self * sxe[i] * fields.xi[e]
                - k.xi_from_p * feed
                - k.cross * zeta_at_xedge(grid, &wzeta, i, j);
        }
    }
    for j in 1..n {
        for i in 0..n {
            let e = grid.index(Station::YEdge, i, j);
            let (cd, cu) = (grid.index(Station::Center, i, j - 1), grid.index(Station::Center, i, j));
            let (dxx, dyx) = grad_xi_at_yedge(grid, &fields.xi, i, j, h);
            let dyz = dy_zeta_at_yedge(grid, &fields.zeta, i, j, h);
            let feed = sxc[i] * 0.5 * (fields.p_x[cd] + fields.p_x[cu]) + 0.5 * (syc[j - 1] * fields.p_y[cd] + syc[j] * fields.p_y[cu]);
            r.zeta[e] = -(k.v0 * dxx + k.u0 * dyx + 2.0 * k.v0 * dyz)
                - k.d * (p[cu] - p[cd]) / h
                - k.zeta_self * sye[j] * fields.zeta[e]
                - k.zeta_from_p * feed
                - k.cross * xi_at_yedge(grid, &wxi, i, j);
        }
    }
    r
}

/// `(σₓ + σ_y)·ξ` and `(σₓ + σ_y)·ζ` at their own stations, the inputs of the
/// cross damping terms.
pub(crate) fn cross_weighted(grid: &StaggeredGrid, profile: &SigmaProfile, xi: &[f64], zeta: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut wxi = vec![0.0; xi.len()];
    let mut wzeta = vec![0.0; zeta.len()];
    cross_weight_into(grid, profile, xi, zeta, &mut wxi, &mut wzeta);
    (wxi, wzeta)
}

pub(crate) fn cross_weight_into(grid: &StaggeredGrid, profile: &SigmaProfile, xi: &[f64], zeta: &[f64], wxi: &mut [f64], wzeta: &mut [f64]) {
    let n = grid.cells();
    for j in 0..n {
        for i in 0..=n {
            let e = j * (n + 1) + i;
            wxi[e] = (profile.sigma_x_at_edges[i] + profile.sigma_y_at_centers[j]) * xi[e];
        }
    }
    for j in 0..=n {
        for i in 0..n {
            let e = j * n + i;
            wzeta[e] = (profile.sigma_x_at_centers[i] + profile.sigma_y_at_edges[j]) * zeta[e];
        }
    }
}
