//! Acoustic vorticity recovered from the impulses.

use crate::flow::FlowState;
use crate::grid::{FieldSet, StaggeredGrid, Station};

/// `ω = ∂u/∂y − ∂v/∂x` at the cell corners, `(J+1)×(J+1)` row-major.
///
/// Velocities are `u = (ξ − ρu0)/ρ0`, `v = (ζ − ρv0)/ρ0` with `ρ = p/c0²`
/// averaged from the two neighbouring centres. Boundary corners are zero.
pub fn vorticity(grid: &StaggeredGrid, fields: &FieldSet, flow: &FlowState) -> Vec<f64> {
    let n = grid.cells();
    let h = grid.dx();
    let p = fields.pressure();
    let c2 = flow.c0 * flow.c0;
    let rho = |i: usize, j: usize| p[grid.index(Station::Center, i, j)] / c2;
    // u on the x-edge (i, j), v on the y-edge (i, j), for interior edges.
    let u = |i: usize, j: usize| {
        let r = 0.5 * (rho(i - 1, j) + rho(i, j));
        (fields.xi[grid.index(Station::XEdge, i, j)] - r * flow.u0) / flow.rho0
    };
    let v = |i: usize, j: usize| {
        let r = 0.5 * (rho(i, j - 1) + rho(i, j));
        (fields.zeta[grid.index(Station::YEdge, i, j)] - r * flow.v0) / flow.rho0
    };
    let mut out = vec![0.0; (n + 1) * (n + 1)];
    for j in 1..n {
        for i in 1..n {
            out[j * (n + 1) + i] = (u(i, j) - u(i, j - 1)) / h - (v(i, j) - v(i - 1, j)) / h;
        }
    }
    out
}
