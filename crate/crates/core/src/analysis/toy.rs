//! Decay of the damped direction and the one-dimensional layer model.

use crate::error::{Error, Result};
use crate::solver::TimeProfile;

/// `φ(t) = φ0·exp(−σ t)`, the solution of `φ' + σφ = 0`.
///
/// ```
/// let v = advac::analysis::damped_mode_ode(1.0, 1.0, 1.0);
/// assert!((v - 0.367879441).abs() < 1e-9);
/// ```
pub fn damped_mode_ode(sigma_star: f64, phi0: f64, t: f64) -> f64 {
    assert!(sigma_star >= 0.0, "σ* must be nonnegative");
    phi0 * (-sigma_star * t).exp()
}

/// Amplitudes of the one-dimensional layer model.
#[derive(Debug, Clone, PartialEq)]
pub struct ToySeries {
    pub times: Vec<f64>,
    /// Coefficient of `δ′`.
    pub u: Vec<f64>,
    /// Coefficient of `δ`.
    pub v: Vec<f64>,
}

/// Integrates `v' + σ2 v = ψ(t)`, `u' + σ1 u = −v` from rest with the
/// explicit trapezoidal rule.
///
/// The model is `∂t u + ∂ₓv + σ1 u = 0`, `∂t v + σ2 v = ψ δ`, whose
/// solution is `v(t)δ + u(t)δ′`; `dt` must not exceed `0.1/max(σ1, σ2)`.
pub fn toy_1d_model(sigma1: f64, sigma2: f64, psi: TimeProfile, t_end: f64, dt: f64) -> Result<ToySeries> {
    if !(sigma1 > 0.0 && sigma2 > 0.0) {
        return Err(Error::Domain(format!("σ1 and σ2 must be positive, got {sigma1} and {sigma2}")));
    }
    if !(dt > 0.0 && dt <= 0.1 / sigma1.max(sigma2)) {
        return Err(Error::Domain(format!("dt = {dt} does not resolve the rates")));
    }
    let rhs = |t: f64, u: f64, v: f64| (-sigma1 * u - v, -sigma2 * v + psi.eval(t));
    let steps = (t_end / dt).ceil() as usize;
    let mut s = ToySeries { times: vec![0.0], u: vec![0.0], v: vec![0.0] };
    let (mut u, mut v) = (0.0, 0.0);
    for n in 0..steps {
        let t = n as f64 * dt;
        let (a1, b1) = rhs(t, u, v);
        let (a2, b2) = rhs(t + dt, u + dt * a1, v + dt * b1);
        u += 0.5 * dt * (a1 + a2);
        v += 0.5 * dt * (b1 + b2);
        s.times.push(t + dt);
        s.u.push(u);
        s.v.push(v);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decay_examples() {
        assert_eq!(damped_mode_ode(0.0, 2.5, 7.0), 2.5);
        assert!((damped_mode_ode(1.0, 1.0, 1.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(toy_1d_model(0.0, 1.0, TimeProfile::Constant, 1.0, 0.01).is_err());
        assert!(toy_1d_model(1.0, -1.0, TimeProfile::Constant, 1.0, 0.01).is_err());
        assert!(toy_1d_model(1.0, 2.0, TimeProfile::Constant, 1.0, 0.1).is_err());
    }

    #[test]
    fn zero_source_stays_at_rest() {
        let s = toy_1d_model(1.0, 2.0, TimeProfile::Zero, 5.0, 0.01).unwrap();
        assert!(s.u.iter().chain(&s.v).all(|&x| x == 0.0));
    }

    #[test]
    fn constant_source_steady_state() {
        let s = toy_1d_model(1.0, 2.0, TimeProfile::Constant, 40.0, 0.005).unwrap();
        assert!((s.v.last().unwrap() - 0.5).abs() < 1e-6);
        // u settles at −ψ0/(σ1σ2), not at zero.
        assert!((s.u.last().unwrap() + 0.5).abs() < 1e-6);
    }

    #[test]
    fn decaying_source_closed_form() {
        let s = toy_1d_model(1.0, 1.0, TimeProfile::Decay { rate: 1.0 }, 40.0, 0.001).unwrap();
        // v = t e^{−t}, u = −t²/2 e^{−t}.
        for k in (0..s.times.len()).step_by(997) {
            let t = s.times[k];
            assert!((s.v[k] - t * (-t).exp()).abs() < 1e-6);
            assert!((s.u[k] + 0.5 * t * t * (-t).exp()).abs() < 1e-6);
        }
        assert!(s.u.last().unwrap().abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn decay_is_monotone(s in 0.0f64..5.0, t in 0.0f64..10.0, dt in 0.0f64..1.0) {
            prop_assert!(damped_mode_ode(s, 1.0, t + dt) <= damped_mode_ode(s, 1.0, t));
        }

        /// Bounded sources give bounded amplitudes; the particular solution
        /// for ψ0 constant, and zero for decaying ψ, is reached by t = 40/min σ.
        #[test]
        fn bounded_source_bounded_response(s1 in 0.2f64..3.0, s2 in 0.2f64..3.0, which in 0usize..3) {
            let psi = [TimeProfile::Constant, TimeProfile::Decay { rate: 0.7 }, TimeProfile::Sine { omega: 1.3 }][which];
            let t_end = 40.0 / s1.min(s2).min(0.7);
            let dt = (0.02 / s1.max(s2)).min(0.005);
            let r = toy_1d_model(s1, s2, psi, t_end, dt).unwrap();
            let bound = 1.0 / s2 * (1.0 + 1.0 / s1);
            prop_assert!(r.u.iter().chain(&r.v).all(|x| x.is_finite() && x.abs() <= bound * 1.01));
            let u_end = *r.u.last().unwrap();
            match which {
                0 => prop_assert!((u_end + 1.0 / (s1 * s2)).abs() < 1e-6 / (s1 * s2)),
                1 => prop_assert!(u_end.abs() < 1e-8),
                _ => {
                    // Steady oscillation: u = Re(−e^{iωt}/((iω+σ1)(iω+σ2))·(−i)).
                    let t = *r.times.last().unwrap();
                    let w = 1.3;
                    let z = num_complex::Complex64::new(0.0, -1.0) * (num_complex::Complex64::new(0.0, w * t)).exp()
                        / ((num_complex::Complex64::new(s1, w)) * num_complex::Complex64::new(s2, w));
                    prop_assert!((u_end + z.re).abs() < 1e-4, "{} vs {}", u_end, -z.re);
                }
            }
        }
    }
}
