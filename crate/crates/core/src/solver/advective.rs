use crate::flow::FlowState;
use crate::grid::{FieldSet, StaggeredGrid, Station};
use crate::pml::stencil::*;
use crate::pml::{cross_weight_into, AdvectiveCoefficients, SigmaProfile};

use super::params::SchemeParams;
use super::stepper::{factors, Forcing, Stepper};

const TOLERANCE: f64 = 1e-14;
const MAX_ITERATIONS: usize = 200;

/// Leapfrog scheme for the advective layer system.
///
/// The pressure update is explicit. The impulse update treats the flow
/// convection and the cross damping term with a Crank–Nicolson average of
/// the old and new impulses and solves the resulting linear system by
/// fixed-point iteration. For a fluid at rest the flow terms are skipped and
/// the result coincides with [`PmlStepper`](super::PmlStepper).
#[derive(Debug, Clone)]
pub struct AdvectiveStepper {
    params: SchemeParams,
    k: AdvectiveCoefficients,
    moving: bool,
    profile: SigmaProfile,
    px: (Vec<f64>, Vec<f64>),
    py: (Vec<f64>, Vec<f64>),
    px_gain: Vec<f64>,
    py_gain: Vec<f64>,
    xi: (Vec<f64>, Vec<f64>),
    zeta: (Vec<f64>, Vec<f64>),
    xi_kk: Vec<f64>,
    zeta_kk: Vec<f64>,
    explicit_xi: Vec<f64>,
    explicit_zeta: Vec<f64>,
    mean_xi: Vec<f64>,
    mean_zeta: Vec<f64>,
    weighted_xi: Vec<f64>,
    weighted_zeta: Vec<f64>,
    last_iterations: usize,
}

fn scaled(sigma: &[f64], by: f64) -> Vec<f64> {
    sigma.iter().map(|s| s * by).collect()
}

impl AdvectiveStepper {
    pub fn new(grid: &StaggeredGrid, params: SchemeParams, profile: &SigmaProfile, flow: &FlowState) -> Self {
        let k = AdvectiveCoefficients::new(flow);
        let dt = params.dt;
        let ap = params.sigma_ratio * params.pressure_coeff;
        let ai = params.sigma_ratio * params.impulse_coeff;
        let sxc = scaled(&profile.sigma_x_at_centers, k.p_self);
        let syc = scaled(&profile.sigma_y_at_centers, k.p_self);
        let sxe = scaled(&profile.sigma_x_at_edges, k.xi_self);
        let sye = scaled(&profile.sigma_y_at_edges, k.zeta_self);
        let gain = |s: &[f64], c: f64| -> Vec<f64> { s.iter().map(|&v| 2.0 * dt * c / (2.0 + v * k.p_self * dt)).collect() };
        let kk = |s: &[f64]| -> Vec<f64> { s.iter().map(|&v| 2.0 * dt / (2.0 + v * dt)).collect() };
        Self {
            params,
            k,
            moving: !flow.is_at_rest(),
            profile: profile.clone(),
            px: factors(&sxc, dt, ap),
            py: factors(&syc, dt, ap),
            px_gain: gain(&profile.sigma_x_at_centers, k.px_from_xi),
            py_gain: gain(&profile.sigma_y_at_centers, k.py_from_zeta),
            xi_kk: kk(&sxe),
            zeta_kk: kk(&sye),
            xi: factors(&sxe, dt, ai),
            zeta: factors(&sye, dt, ai),
            explicit_xi: vec![0.0; grid.len(Station::XEdge)],
            explicit_zeta: vec![0.0; grid.len(Station::YEdge)],
            mean_xi: vec![0.0; grid.len(Station::XEdge)],
            mean_zeta: vec![0.0; grid.len(Station::YEdge)],
            weighted_xi: vec![0.0; grid.len(Station::XEdge)],
            weighted_zeta: vec![0.0; grid.len(Station::YEdge)],
            last_iterations: 0,
        }
    }

    /// Fixed-point iterations used by the last step; zero at rest.
    pub fn last_iterations(&self) -> usize {
        self.last_iterations
    }

    fn update_pressure(&self, grid: &StaggeredGrid, f: &mut FieldSet) {
        let n = grid.cells();
        let m = n + 1;
        let (pxf, pxc) = (&self.px.0, &self.px.1);
        let (pyf, pyc) = (&self.py.0, &self.py.1);
        for j in 0..n {
            for i in 0..n {
                let c = j * n + i;
                let (xa, xb) = (j * m + i, j * m + i + 1);
                let (ya, yb) = (c, c + n);
                f.p_x[c] = pxf[i] * f.p_x[c] - pxc[i] * (f.xi[xb] - f.xi[xa]);
                f.p_y[c] = pyf[j] * f.p_y[c] - pyc[j] * (f.zeta[yb] - f.zeta[ya]);
                if self.moving {
                    let (sxe, sye) = (&self.profile.sigma_x_at_edges, &self.profile.sigma_y_at_edges);
                    f.p_x[c] -= self.px_gain[i] * 0.5 * (sxe[i] * f.xi[xa] + sxe[i + 1] * f.xi[xb]);
                    f.p_y[c] -= self.py_gain[j] * 0.5 * (sye[j] * f.zeta[ya] + sye[j + 1] * f.zeta[yb]);
                }
            }
        }
    }

    /// Explicit part of the impulse update: old impulses, the new pressure
    /// gradient and the pressure feed of the layer.
    fn explicit_impulses(&mut self, grid: &StaggeredGrid, f: &FieldSet) {
        let n = grid.cells();
        let m = n + 1;
        let prof = &self.profile;
        let (xf, xc) = (&self.xi.0, &self.xi.1);
        for j in 0..n {
            for i in 1..n {
                let (c, e) = (j * n + i, j * m + i);
                let (pl, pr) = (f.p_x[c - 1] + f.p_y[c - 1], f.p_x[c] + f.p_y[c]);
                let mut v = xf[i] * f.xi[e] - xc[i] * (pr - pl);
                if self.moving {
                    let sxc = &prof.sigma_x_at_centers;
                    let feed = 0.5 * (sxc[i - 1] * f.p_x[c - 1] + sxc[i] * f.p_x[c])
                        + prof.sigma_y_at_centers[j] * 0.5 * (f.p_y[c - 1] + f.p_y[c]);
                    v -= self.xi_kk[i] * self.k.xi_from_p * feed;
                }
                self.explicit_xi[e] = v;
            }
        }
        let (zf, zc) = (&self.zeta.0, &self.zeta.1);
        for j in 1..n {
            for i in 0..n {
                let c = j * n + i;
                let (pd, pu) = (f.p_x[c - n] + f.p_y[c - n], f.p_x[c] + f.p_y[c]);
                let mut v = zf[j] * f.zeta[c] - zc[j] * (pu - pd);
                if self.moving {
                    let syc = &prof.sigma_y_at_centers;
                    let feed = prof.sigma_x_at_centers[i] * 0.5 * (f.p_x[c - n] + f.p_x[c])
                        + 0.5 * (syc[j - 1] * f.p_y[c - n] + syc[j] * f.p_y[c]);
                    v -= self.zeta_kk[j] * self.k.zeta_from_p * feed;
                }
                self.explicit_zeta[c] = v;
            }
        }
    }

    /// One sweep `new = E − kk·A(mean)`; returns the largest change and the
    /// largest magnitude.
    fn sweep(&self, grid: &StaggeredGrid, xi: &mut [f64], zeta: &mut [f64]) -> (f64, f64) {
        let n = grid.cells();
        let h = grid.dx();
        let k = &self.k;
        let (mx, mz) = (&self.mean_xi, &self.mean_zeta);
        let (wx, wz) = (&self.weighted_xi, &self.weighted_zeta);
        let (mut change, mut size) = (0.0f64, 0.0f64);
        for j in 0..n {
            for i in 1..n {
                let e = grid.index(Station::XEdge, i, j);
                let dxxi = dx_xi_at_xedge(grid, mx, i, j, h);
                let (dxz, dyz) = grad_zeta_at_xedge(grid, mz, i, j, h);
                let cross = k.cross * zeta_at_xedge(grid, wz, i, j);
                let v = self.explicit_xi[e] - self.xi_kk[i] * ((2.0 * k.u0 * dxxi + k.v0 * dxz + k.u0 * dyz) + cross);
                change = change.max((v - xi[e]).abs());
                size = size.max(v.abs());
                xi[e] = v;
            }
        }
        for j in 1..n {
            for i in 0..n {
                let e = grid.index(Station::YEdge, i, j);
                let (dxx, dyx) = grad_xi_at_yedge(grid, mx, i, j, h);
                let dyz = dy_zeta_at_yedge(grid, mz, i, j, h);
                let cross = k.cross * xi_at_yedge(grid, wx, i, j);
                let v = self.explicit_zeta[e] - self.zeta_kk[j] * ((k.v0 * dxx + k.u0 * dyx + 2.0 * k.v0 * dyz) + cross);
                change = change.max((v - zeta[e]).abs());
                size = size.max(v.abs());
                zeta[e] = v;
            }
        }
        (change, size)
    }
}

impl Stepper for AdvectiveStepper {
    fn params(&self) -> &SchemeParams {
        &self.params
    }

    fn step(&mut self, grid: &StaggeredGrid, f: &mut FieldSet, forcing: Option<Forcing<'_>>) {
        self.update_pressure(grid, f);
        if let Some(s) = &forcing {
            s.pressure(f, f.time_level, self.params.dt);
        }
        self.explicit_impulses(grid, f);
        if self.moving {
            let old_xi = f.xi.clone();
            let old_zeta = f.zeta.clone();
            self.last_iterations = 0;
            for it in 1..=MAX_ITERATIONS {
                for ((m, a), b) in self.mean_xi.iter_mut().zip(&old_xi).zip(&f.xi) {
                    *m = 0.5 * (a + b);
                }
                for ((m, a), b) in self.mean_zeta.iter_mut().zip(&old_zeta).zip(&f.zeta) {
                    *m = 0.5 * (a + b);
                }
                cross_weight_into(grid, &self.profile, &self.mean_xi, &self.mean_zeta, &mut self.weighted_xi, &mut self.weighted_zeta);
                let (change, size) = self.sweep(grid, &mut f.xi, &mut f.zeta);
                self.last_iterations = it;
                if change <= TOLERANCE * size {
                    break;
                }
            }
        } else {
            let n = grid.cells();
            for j in 0..n {
                for i in 1..n {
                    let e = grid.index(Station::XEdge, i, j);
                    f.xi[e] = self.explicit_xi[e];
                }
            }
            for j in 1..n {
                for i in 0..n {
                    let e = grid.index(Station::YEdge, i, j);
                    f.zeta[e] = self.explicit_zeta[e];
                }
            }
            self.last_iterations = 0;
        }
        if let Some(s) = &forcing {
            s.impulses(f, f.time_level, self.params.dt);
        }
        f.time_level += 1;
    }
}

/// One step of the advective layer scheme.
pub fn step_advective_pml(grid: &StaggeredGrid, fields: &mut FieldSet, params: &SchemeParams, profile: &SigmaProfile, flow: &FlowState) {
    AdvectiveStepper::new(grid, *params, profile, flow).step(grid, fields, None);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pml::polynomial_profile;
    use crate::solver::step_pml;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_fields(g: &StaggeredGrid, seed: u64) -> FieldSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = FieldSet::zeros(g);
        let n = g.cells();
        for v in [&mut f.p_x, &mut f.p_y] {
            v.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
        }
        for j in 0..n {
            for i in 1..n {
                f.xi[g.index(Station::XEdge, i, j)] = rng.gen_range(-1.0..1.0);
            }
        }
        for j in 1..n {
            for i in 0..n {
                f.zeta[g.index(Station::YEdge, i, j)] = rng.gen_range(-1.0..1.0);
            }
        }
        f
    }

    #[test]
    fn iteration_converges_quickly() {
        let g = StaggeredGrid::new(20, 20.0, 5, 5).unwrap();
        let flow = FlowState::new(0.4, 0.3, 1.0, 1.0).unwrap();
        let params = SchemeParams::advective(&g, &flow, 0.9).unwrap();
        let prof = polynomial_profile(&g, 2.0, 2);
        let mut st = AdvectiveStepper::new(&g, params, &prof, &flow);
        let mut f = random_fields(&g, 3);
        st.step(&g, &mut f, None);
        assert!(st.last_iterations() > 1 && st.last_iterations() < 60, "{}", st.last_iterations());
    }

    proptest! {
        #[test]
        fn at_rest_matches_pml_bitwise(seed in 0u64..200) {
            let g = StaggeredGrid::new(10, 10.0, 3, 3).unwrap();
            let flow = FlowState::at_rest(1.0);
            let params = SchemeParams::advective(&g, &flow, 0.95).unwrap();
            let prof = polynomial_profile(&g, 3.0, 2);
            let mut a = random_fields(&g, seed);
            let mut b = a.clone();
            let mut st = AdvectiveStepper::new(&g, params, &prof, &flow);
            for _ in 0..4 {
                st.step(&g, &mut a, None);
                step_pml(&g, &mut b, &params, &prof);
            }
            prop_assert_eq!(a, b);
        }
    }
}
