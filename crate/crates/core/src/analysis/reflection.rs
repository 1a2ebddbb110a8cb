//! Plane-wave reflection at a layer interface `y = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A time-harmonic plane wave meeting an interface between damping rates
/// `sigma1` (incident side) and `sigma2` (transmitted side).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveContext {
    pub kx: f64,
    pub ky: f64,
    pub omega: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl PlaneWaveContext {
    /// A propagating wave at `angle` from the interface normal, with
    /// `kₓ = (ω/c0) sin θ` and `k_y² = ω²/c0² − kₓ²`.
    pub fn from_angle(omega: f64, c0: f64, angle: f64, sigma1: f64, sigma2: f64) -> Self {
        let k = omega / c0;
        Self { kx: k * angle.sin(), ky: k * angle.cos(), omega, sigma1, sigma2 }
    }
}

/// Reflected and transmitted pressure amplitudes, `T = 1 + R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionResult {
    pub r: Complex64,
    pub t: Complex64,
}

/// Solves the continuity of `ζ`,
/// `(i k_yᵗ/(iω+σ2))(1+R) = (i k_yⁱ/(iω+σ1))(1−R)`.
///
/// ```
/// use advac::analysis::{reflection_coefficient, PlaneWaveContext};
///
/// let ctx = PlaneWaveContext { kx: 0.0, ky: 1.0, omega: 1.0, sigma1: 0.5, sigma2: 0.5 };
/// let rt = reflection_coefficient(&ctx, 1.0, 1.0).unwrap();
/// assert_eq!(rt.r.norm(), 0.0);
/// assert_eq!(rt.t.re, 1.0);
/// ```
pub fn reflection_coefficient(ctx: &PlaneWaveContext, ky_i: f64, ky_t: f64) -> Result<ReflectionResult> {
    if ctx.omega == 0.0 {
        return Err(Error::Domain("ω must be nonzero".into()));
    }
    let i = Complex64::new(0.0, 1.0);
    let (d1, d2) = (Complex64::new(ctx.sigma1, ctx.omega), Complex64::new(ctx.sigma2, ctx.omega));
    if d1.norm() == 0.0 || d2.norm() == 0.0 {
        return Err(Error::Domain("iω + σ vanishes".into()));
    }
    let a = i * ky_i / d1;
    let b = i * ky_t / d2;
    if (a + b).norm() == 0.0 {
        return Err(Error::Domain("the interface system is singular".into()));
    }
    let r = (a - b) / (a + b);
    Ok(ReflectionResult { r, t: 1.0 + r })
}
