//! Uniform background flow and the Lorentz-type space-time transform.
//!
//! The map `x' = ax·x`, `y' = ay·y`, `t' = t + tx·x + ty·y` together with the
//! change of unknowns [`to_tilde`] turns the advective system into the plain
//! acoustic system with celerity `c0·sqrt(1 − M0²)`.

use crate::error::{Error, Result};

/// A prescribed, uniform, strictly subsonic background flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub u0: f64,
    pub v0: f64,
    pub w0: f64,
    pub c0: f64,
    pub rho0: f64,
}

impl FlowState {
    /// Two-dimensional flow `(u0, v0)`.
    pub fn new(u0: f64, v0: f64, c0: f64, rho0: f64) -> Result<Self> {
        Self::new_3d(u0, v0, 0.0, c0, rho0)
    }

    pub fn new_3d(u0: f64, v0: f64, w0: f64, c0: f64, rho0: f64) -> Result<Self> {
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::Flow(format!("sound speed must be positive, got {c0}")));
        }
        if !(rho0 > 0.0 && rho0.is_finite()) {
            return Err(Error::Flow(format!("density must be positive, got {rho0}")));
        }
        if ![u0, v0, w0].iter().all(|v| v.is_finite()) {
            return Err(Error::Flow("velocity components must be finite".into()));
        }
        let flow = Self { u0, v0, w0, c0, rho0 };
        let m = flow.mach();
        if m >= 1.0 {
            return Err(Error::Flow(format!("flow must be subsonic, Mach number is {m}")));
        }
        Ok(flow)
    }

    /// Medium at rest with unit density.
    pub fn at_rest(c0: f64) -> Self {
        Self { u0: 0.0, v0: 0.0, w0: 0.0, c0, rho0: 1.0 }
    }

    pub fn mach(&self) -> f64 {
        (self.u0 * self.u0 + self.v0 * self.v0 + self.w0 * self.w0).sqrt() / self.c0
    }

    /// `1 − M0²`, computed from the components so that it is exactly 1 at rest.
    pub fn one_minus_mach2(&self) -> f64 {
        let c2 = self.c0 * self.c0;
        1.0 - (self.u0 * self.u0 + self.v0 * self.v0 + self.w0 * self.w0) / c2
    }

    pub fn is_at_rest(&self) -> bool {
        self.u0 == 0.0 && self.v0 == 0.0 && self.w0 == 0.0
    }
}

/// Coefficients of the space-time map for one flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMap {
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
    pub tx: f64,
    pub ty: f64,
    pub tz: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// `sqrt(1 − v²/c²)` for one component.
fn contraction(v: f64, c0: f64) -> f64 {
    (1.0 - v * v / (c0 * c0)).sqrt()
}

impl LorentzMap {
    /// ```
    /// use advac::flow::{FlowState, LorentzMap};
    ///
    /// let m = LorentzMap::new(&FlowState::new(0.5, 0.5, 1.0, 1.0).unwrap()).unwrap();
    /// assert!((m.alpha - 1.0 / 3.0).abs() < 1e-15);
    /// ```
    pub fn new(flow: &FlowState) -> Result<Self> {
        let m = flow.mach();
        if !(m < 1.0) {
            return Err(Error::Domain(format!("transform needs subsonic flow, Mach number is {m}")));
        }
        let c0 = flow.c0;
        let (su, sv, sw) = (contraction(flow.u0, c0), contraction(flow.v0, c0), contraction(flow.w0, c0));
        let tilt = c0 * c0 * flow.one_minus_mach2();
        let c2 = c0 * c0;
        Ok(Self {
            ax: 1.0 / su,
            ay: 1.0 / sv,
            az: 1.0 / sw,
            tx: flow.u0 / tilt,
            ty: flow.v0 / tilt,
            tz: flow.w0 / tilt,
            alpha: flow.u0 * flow.v0 / (c2 * su * sv),
            beta: flow.u0 * flow.w0 / (c2 * su * sw),
            gamma: flow.v0 * flow.w0 / (c2 * sv * sw),
        })
    }

    pub fn map_spacetime(&self, x: f64, y: f64, t: f64) -> (f64, f64, f64) {
        (self.ax * x, self.ay * y, t + self.tx * x + self.ty * y)
    }

    pub fn inverse_map(&self, xp: f64, yp: f64, tp: f64) -> (f64, f64, f64) {
        let x = xp / self.ax;
        let y = yp / self.ay;
        (x, y, tp - self.tx * x - self.ty * y)
    }

    pub fn map_spacetime_3d(&self, x: f64, y: f64, z: f64, t: f64) -> (f64, f64, f64, f64) {
        (self.ax * x, self.ay * y, self.az * z, t + self.tx * x + self.ty * y + self.tz * z)
    }

    pub fn inverse_map_3d(&self, xp: f64, yp: f64, zp: f64, tp: f64) -> (f64, f64, f64, f64) {
        let (x, y, z) = (xp / self.ax, yp / self.ay, zp / self.az);
        (x, y, z, tp - self.tx * x - self.ty * y - self.tz * z)
    }
}

/// Change of unknowns `(p', ξ', ζ') → (p̃, ξ̃, ζ̃)`.
///
/// ```
/// use advac::flow::{to_tilde, FlowState, LorentzMap};
///
/// let flow = FlowState::new(0.5, 0.0, 1.0, 1.0).unwrap();
/// let map = LorentzMap::new(&flow).unwrap();
/// let [p, xi, zeta] = to_tilde(&map, &flow, [1.0, 1.0, 0.0]);
/// assert!((p - 5.0 / 3.0).abs() < 1e-15);
/// assert!((xi - 1.0 / 0.75f64.sqrt()).abs() < 1e-15);
/// assert_eq!(zeta, 0.0);
/// ```
pub fn to_tilde(map: &LorentzMap, flow: &FlowState, v: [f64; 3]) -> [f64; 3] {
    let [p, xi, zeta] = v;
    let c2 = flow.c0 * flow.c0;
    let d = flow.one_minus_mach2();
    let uv = flow.u0 * flow.v0 / c2;
    [
        p + (flow.u0 * xi + flow.v0 * zeta) / d,
        ((1.0 - flow.v0 * flow.v0 / c2) * xi + uv * zeta) / (d * map.ax),
        (uv * xi + (1.0 - flow.u0 * flow.u0 / c2) * zeta) / (d * map.ay),
    ]
}

/// Inverse of [`to_tilde`].
pub fn from_tilde(map: &LorentzMap, flow: &FlowState, v: [f64; 3]) -> [f64; 3] {
    let [pt, xt, zt] = v;
    let xi = (xt - map.alpha * zt) / map.ax;
    let zeta = (zt - map.alpha * xt) / map.ay;
    [pt - (flow.u0 * xi + flow.v0 * zeta) / flow.one_minus_mach2(), xi, zeta]
}

/// Three-dimensional change of unknowns `(p', ξ', ζ', χ') → (p̃, ξ̃, ζ̃, χ̃)`.
pub fn to_tilde_3d(map: &LorentzMap, flow: &FlowState, v: [f64; 4]) -> [f64; 4] {
    let [p, xi, zeta, chi] = v;
    let c2 = flow.c0 * flow.c0;
    let d = flow.one_minus_mach2();
    let (u, w, s) = (flow.u0, flow.v0, flow.w0);
    let (uv, uw, vw) = (u * w / c2, u * s / c2, w * s / c2);
    [
        p + (u * xi + w * zeta + s * chi) / d,
        ((1.0 - (w * w + s * s) / c2) * xi + uv * zeta + uw * chi) / (d * map.ax),
        (uv * xi + (1.0 - (u * u + s * s) / c2) * zeta + vw * chi) / (d * map.ay),
        (uw * xi + vw * zeta + (1.0 - (u * u + w * w) / c2) * chi) / (d * map.az),
    ]
}

/// Inverse of [`to_tilde_3d`]: `ξ' = sqrt(1 − u0²/c0²)·(ξ̃ − αζ̃ − βχ̃)` and
/// cyclically.
pub fn from_tilde_3d(map: &LorentzMap, flow: &FlowState, v: [f64; 4]) -> [f64; 4] {
    let [pt, xt, zt, ct] = v;
    let xi = (xt - map.alpha * zt - map.beta * ct) / map.ax;
    let zeta = (zt - map.alpha * xt - map.gamma * ct) / map.ay;
    let chi = (ct - map.beta * xt - map.gamma * zt) / map.az;
    let p = pt - (flow.u0 * xi + flow.v0 * zeta + flow.w0 * chi) / flow.one_minus_mach2();
    [p, xi, zeta, chi]
}

/// Applies [`to_tilde`] pointwise to co-located fields.
pub fn to_tilde_fields(map: &LorentzMap, flow: &FlowState, p: &mut [f64], xi: &mut [f64], zeta: &mut [f64]) {
    for ((a, b), c) in p.iter_mut().zip(xi.iter_mut()).zip(zeta.iter_mut()) {
        [*a, *b, *c] = to_tilde(map, flow, [*a, *b, *c]);
    }
}

/// Applies [`from_tilde`] pointwise to co-located fields.
pub fn from_tilde_fields(map: &LorentzMap, flow: &FlowState, p: &mut [f64], xi: &mut [f64], zeta: &mut [f64]) {
    for ((a, b), c) in p.iter_mut().zip(xi.iter_mut()).zip(zeta.iter_mut()) {
        [*a, *b, *c] = from_tilde(map, flow, [*a, *b, *c]);
    }
}

/// Propagation speed in transformed coordinates, `c0·sqrt(1 − M0²)`.
pub fn modified_celerity(flow: &FlowState) -> f64 {
    flow.c0 * flow.one_minus_mach2().sqrt()
}

/// Streams samples taken on a uniform transformed time axis and answers
/// queries at arbitrary transformed times by linear interpolation between
/// the two most recent levels.
///
/// ```
/// use advac::flow::TimeInterpolator;
///
/// let mut ti = TimeInterpolator::new(2);
/// ti.push(0.0, &[0.0, 10.0]);
/// ti.push(1.0, &[2.0, 20.0]);
/// assert_eq!(ti.at(0.25).unwrap(), vec![0.5, 12.5]);
/// assert!(ti.at(1.5).is_none());
/// ```
#[derive(Debug, Clone)]
pub struct TimeInterpolator {
    width: usize,
    prev: Option<(f64, Vec<f64>)>,
    curr: Option<(f64, Vec<f64>)>,
}

impl TimeInterpolator {
    pub fn new(width: usize) -> Self {
        Self { width, prev: None, curr: None }
    }

    /// Records the values of every tracked quantity at transformed time `t`.
    pub fn push(&mut self, t: f64, values: &[f64]) {
        assert_eq!(values.len(), self.width);
        if let Some((tc, _)) = &self.curr {
            assert!(t > *tc, "samples must arrive in increasing time");
        }
        self.prev = self.curr.take();
        self.curr = Some((t, values.to_vec()));
    }

    /// Time span covered by the two stored levels.
    pub fn span(&self) -> Option<(f64, f64)> {
        match (&self.prev, &self.curr) {
            (Some((a, _)), Some((b, _))) => Some((*a, *b)),
            _ => None,
        }
    }

    /// Interpolated values at `t`, or `None` if `t` is outside the stored span.
    pub fn at(&self, t: f64) -> Option<Vec<f64>> {
        let ((t0, v0), (t1, v1)) = (self.prev.as_ref()?, self.curr.as_ref()?);
        if t < *t0 || t > *t1 {
            return None;
        }
        let w = (t - t0) / (t1 - t0);
        Some(v0.iter().zip(v1).map(|(a, b)| a + w * (b - a)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn flow2(u0: f64, v0: f64) -> FlowState {
        FlowState::new(u0, v0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn rejects_bad_flows() {
        assert!(FlowState::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(FlowState::new(0.8, 0.7, 1.0, 1.0).is_err());
        assert!(FlowState::new(0.1, 0.0, 0.0, 1.0).is_err());
        assert!(FlowState::new(0.1, 0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn identity_at_rest() {
        let f = FlowState::at_rest(340.0);
        let m = LorentzMap::new(&f).unwrap();
        assert_eq!((m.ax, m.ay, m.az, m.tx, m.ty, m.tz), (1.0, 1.0, 1.0, 0.0, 0.0, 0.0));
        assert_eq!((m.alpha, m.beta, m.gamma), (0.0, 0.0, 0.0));
        assert_eq!(m.map_spacetime(1.0, 2.0, 3.0), (1.0, 2.0, 3.0));
        assert_eq!(to_tilde(&m, &f, [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0]);
        assert_eq!(from_tilde(&m, &f, [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0]);
        assert_eq!(to_tilde_3d(&m, &f, [1.0, 2.0, 3.0, 4.0]), [1.0, 2.0, 3.0, 4.0]);
        assert_eq!(from_tilde_3d(&m, &f, [1.0, 2.0, 3.0, 4.0]), [1.0, 2.0, 3.0, 4.0]);
        assert_eq!(modified_celerity(&f), 340.0);
    }

    #[test]
    fn map_examples() {
        let m = LorentzMap::new(&flow2(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(m.ax, 1.154700538379, epsilon = 1e-12);
        assert_abs_diff_eq!(m.tx, 0.666666666667, epsilon = 1e-12);
        assert_eq!(m.alpha, 0.0);
        let (x, y, t) = m.map_spacetime(1.0, 2.0, 0.0);
        assert_abs_diff_eq!(x, 1.154700538379, epsilon = 1e-12);
        assert_eq!(y, 2.0);
        assert_abs_diff_eq!(t, 0.666666666667, epsilon = 1e-12);
        let (x, y, t) = m.inverse_map(x, y, t);
        assert_abs_diff_eq!(x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn from_tilde_example() {
        let f = flow2(0.5, 0.5);
        let m = LorentzMap::new(&f).unwrap();
        let [_, xi, zeta] = from_tilde(&m, &f, [0.0, 1.0, 0.0]);
        assert_abs_diff_eq!(xi, 0.866025403784, epsilon = 1e-12);
        assert_abs_diff_eq!(zeta, -0.288675134595, epsilon = 1e-12);
    }

    #[test]
    fn modified_celerity_examples() {
        assert_abs_diff_eq!(modified_celerity(&flow2(0.5, 0.0)), 0.866025403784, epsilon = 1e-12);
        let f = FlowState::new(272.0, 0.0, 340.0, 1.2).unwrap();
        assert_abs_diff_eq!(modified_celerity(&f), 204.0, epsilon = 1e-10);
    }

    #[test]
    fn aligned_formulas_are_the_v0_zero_case() {
        // Flow-aligned transform written out independently.
        for &(u0, c0) in &[(0.5, 1.0), (0.3, 2.0), (-0.7, 1.0), (100.0, 340.0)] {
            let f = FlowState::new(u0, 0.0, c0, 1.0).unwrap();
            let m = LorentzMap::new(&f).unwrap();
            let mach: f64 = u0.abs() / c0;
            let s = (1.0 - mach * mach).sqrt();
            let (x, y, t) = (0.7, -1.3, 2.1);
            let (xp, yp, tp) = m.map_spacetime(x, y, t);
            assert_abs_diff_eq!(xp, x / s, epsilon = 1e-12);
            assert_eq!(yp, y);
            assert_abs_diff_eq!(tp, t + u0 * x / (c0 * c0 * (1.0 - mach * mach)), epsilon = 1e-12);
            let (p, xi, zeta) = (0.4, -1.1, 0.9);
            let got = to_tilde(&m, &f, [p, xi, zeta]);
            let want = [p + u0 * xi / (1.0 - mach * mach), xi / s, zeta];
            for k in 0..3 {
                assert_abs_diff_eq!(got[k], want[k], epsilon = 1e-12);
            }
            assert_eq!(m.alpha, 0.0);
        }
    }

    #[test]
    fn three_d_reduces_to_two_d() {
        let f3 = FlowState::new_3d(0.3, -0.4, 0.0, 1.0, 1.0).unwrap();
        let m = LorentzMap::new(&f3).unwrap();
        let v = [0.3, 1.2, -0.7, 0.45];
        let t3 = to_tilde_3d(&m, &f3, v);
        let t2 = to_tilde(&m, &f3, [v[0], v[1], v[2]]);
        for k in 0..3 {
            assert_abs_diff_eq!(t3[k], t2[k], epsilon = 1e-14);
        }
        assert_abs_diff_eq!(t3[3], v[3], epsilon = 1e-14);
    }

    /// Plane wave of the direct advective system, fed through the transform:
    /// the transformed fields must satisfy the scaled non-advective system.
    #[test]
    fn transformed_plane_wave_solves_reduced_system() {
        let i = Complex64::i();
        for &(u0, v0, kx, ky, sign) in &[
            (0.5, 0.0, 0.7, 0.3, 1.0),
            (0.3, 0.4, -1.1, 0.5, 1.0),
            (-0.2, 0.6, 0.4, -0.9, -1.0),
            (0.35, 0.35, 1.3, 1.7, -1.0),
        ] {
            let c0 = 1.0;
            let f = FlowState::new(u0, v0, c0, 1.0).unwrap();
            let m = LorentzMap::new(&f).unwrap();
            let kn = f64::hypot(kx, ky);
            let omega = u0 * kx + v0 * ky + sign * c0 * kn;
            let doppler = omega - u0 * kx - v0 * ky;
            // Irrotational acoustic wave: ρ0·u ∝ k, impulse = ρ0·u + ρ·u0.
            let p = Complex64::new(1.0, 0.0);
            let xi = p * (kx / doppler + u0 / (c0 * c0));
            let zeta = p * (ky / doppler + v0 / (c0 * c0));
            // Residuals of the direct system with exact derivatives.
            let dt = -i * omega;
            let (dx, dy) = (i * kx, i * ky);
            let r1 = dt * p + c0 * c0 * (dx * xi + dy * zeta);
            let r2 = dt * xi
                + dx * (2.0 * u0 * xi + (1.0 - u0 * u0) * p)
                + dy * (u0 * zeta + v0 * xi - u0 * v0 * p);
            let r3 = dt * zeta
                + dx * (u0 * zeta + v0 * xi - u0 * v0 * p)
                + dy * (2.0 * v0 * zeta + (1.0 - v0 * v0) * p);
            for r in [r1, r2, r3] {
                assert!(r.norm() < 1e-12, "direct residual {r}");
            }
            // Transformed amplitudes (linear map applies to complex amplitudes).
            let tre = to_tilde(&m, &f, [p.re, xi.re, zeta.re]);
            let tim = to_tilde(&m, &f, [p.im, xi.im, zeta.im]);
            let pt = Complex64::new(tre[0], tim[0]);
            let xt = Complex64::new(tre[1], tim[1]);
            let zt = Complex64::new(tre[2], tim[2]);
            // Phase in primed coordinates.
            let kxp = (kx + omega * m.tx) / m.ax;
            let kyp = (ky + omega * m.ty) / m.ay;
            let (dtp, dxp, dyp) = (-i * omega, i * kxp, i * kyp);
            let d = f.one_minus_mach2();
            let s1 = dtp * pt + c0 * c0 * (dxp * (xt - m.alpha * zt) + dyp * (zt - m.alpha * xt));
            let s2 = dtp * xt + d * dxp * pt;
            let s3 = dtp * zt + d * dyp * pt;
            for r in [s1, s2, s3] {
                assert!(r.norm() < 1e-12, "transformed residual {r} for flow ({u0}, {v0})");
            }
        }
    }

    fn subsonic() -> impl Strategy<Value = FlowState> {
        (0.0f64..0.95, 0.0f64..std::f64::consts::TAU, 0.1f64..400.0).prop_map(|(m, th, c0)| {
            FlowState::new(m * c0 * th.cos(), m * c0 * th.sin(), c0, 1.2).unwrap()
        })
    }

    fn subsonic_3d() -> impl Strategy<Value = FlowState> {
        (0.0f64..0.95, 0.0f64..std::f64::consts::TAU, 0.0f64..std::f64::consts::PI, 0.1f64..10.0)
            .prop_map(|(m, th, ph, c0)| {
                let s = m * c0;
                FlowState::new_3d(s * th.cos() * ph.sin(), s * th.sin() * ph.sin(), s * ph.cos(), c0, 1.0)
                    .unwrap()
            })
    }

    proptest! {
        #[test]
        fn spacetime_round_trip(f in subsonic(), x in -100.0f64..100.0, y in -100.0f64..100.0, t in -10.0f64..10.0) {
            let m = LorentzMap::new(&f).unwrap();
            let (a, b, c) = m.map_spacetime(x, y, t);
            let (x2, y2, t2) = m.inverse_map(a, b, c);
            prop_assert!((x2 - x).abs() < 1e-12 * (1.0 + x.abs()));
            prop_assert!((y2 - y).abs() < 1e-12 * (1.0 + y.abs()));
            prop_assert!((t2 - t).abs() < 1e-12 * (1.0 + t.abs() + (m.tx * x).abs() + (m.ty * y).abs()));
            prop_assert!(m.ax >= 1.0 && m.ay >= 1.0 && m.az == 1.0);
        }

        #[test]
        fn unknowns_round_trip(f in subsonic(), v in proptest::array::uniform3(-10.0f64..10.0)) {
            let m = LorentzMap::new(&f).unwrap();
            let back = from_tilde(&m, &f, to_tilde(&m, &f, v));
            let scale = 1.0 + (f.u0.abs() + f.v0.abs()) / f.one_minus_mach2();
            for k in 0..3 {
                prop_assert!((back[k] - v[k]).abs() < 1e-13 * scale * 10.0);
            }
        }

        #[test]
        fn unknowns_round_trip_3d(f in subsonic_3d(), v in proptest::array::uniform4(-10.0f64..10.0)) {
            let m = LorentzMap::new(&f).unwrap();
            let back = from_tilde_3d(&m, &f, to_tilde_3d(&m, &f, v));
            for k in 0..4 {
                prop_assert!((back[k] - v[k]).abs() < 1e-12);
            }
            let (x, y, z, t) = m.inverse_map_3d(1.0, -2.0, 3.0, 0.5);
            let (a, b, c, d) = m.map_spacetime_3d(x, y, z, t);
            prop_assert!((a - 1.0).abs() < 1e-12 && (b + 2.0).abs() < 1e-12);
            prop_assert!((c - 3.0).abs() < 1e-12 && (d - 0.5).abs() < 1e-12);
        }
    }
}
