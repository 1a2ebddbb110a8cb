use crate::error::{Error, Result};
use crate::probe::ProbeSeries;

/// Pointwise pressure difference of two probe series and its running L2.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSeries {
    pub steps: Vec<u64>,
    pub times: Vec<f64>,
    /// `|a − b|` per sample.
    pub abs: Vec<f64>,
    /// `sqrt(Σ_{k≤n} |a−b|²·Δt)`.
    pub running_l2: Vec<f64>,
}

impl ErrorSeries {
    /// Cumulative L2 over the whole series.
    pub fn l2(&self) -> f64 {
        self.running_l2.last().copied().unwrap_or(0.0)
    }

    /// Writes `step,time,abs_error,l2` rows.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["step", "time", "abs_error", "l2"])?;
        for k in 0..self.abs.len() {
            out.serialize((self.steps[k], self.times[k], self.abs[k], self.running_l2[k]))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Compares the pressure of two series sampled on the same time axis.
///
/// ```
/// use advac::harness::l2_error;
/// use advac::probe::ProbeSeries;
///
/// let mut a = ProbeSeries::new((0.0, 0.0), 0.5);
/// let mut b = a.clone();
/// for k in 0..8 {
///     a.push(k, k as f64 * 0.5, (1.0, 0.0, 0.0));
///     b.push(k, k as f64 * 0.5, (0.0, 0.0, 0.0));
/// }
/// assert_eq!(l2_error(&a, &b).unwrap().l2(), 2.0);
/// ```
pub fn l2_error(a: &ProbeSeries, b: &ProbeSeries) -> Result<ErrorSeries> {
    if a.len() != b.len() {
        return Err(Error::Comparison(format!("lengths differ: {} vs {}", a.len(), b.len())));
    }
    if (a.dt - b.dt).abs() > 1e-12 * a.dt.abs().max(b.dt.abs()) {
        return Err(Error::Comparison(format!("time steps differ: {} vs {}", a.dt, b.dt)));
    }
    let tol = 1e-9 * a.dt.abs().max(f64::MIN_POSITIVE);
    if let Some(k) = (0..a.len()).find(|&k| (a.times[k] - b.times[k]).abs() > tol) {
        return Err(Error::Comparison(format!("time axes differ at sample {k}: {} vs {}", a.times[k], b.times[k])));
    }
    let abs: Vec<f64> = a.p.iter().zip(&b.p).map(|(x, y)| (x - y).abs()).collect();
    let mut sum = 0.0;
    let running_l2 = abs
        .iter()
        .map(|d| {
            sum += d * d * a.dt;
            sum.sqrt()
        })
        .collect();
    Ok(ErrorSeries { steps: a.steps.clone(), times: a.times.clone(), abs, running_l2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(values: &[f64], dt: f64) -> ProbeSeries {
        let mut s = ProbeSeries::new((0.0, 0.0), dt);
        for (k, &v) in values.iter().enumerate() {
            s.push(k as u64, k as f64 * dt, (v, 0.0, 0.0));
        }
        s
    }

    #[test]
    fn mismatched_axes_are_rejected() {
        assert!(l2_error(&series(&[1.0, 2.0], 0.1), &series(&[1.0], 0.1)).is_err());
        assert!(l2_error(&series(&[1.0, 2.0], 0.1), &series(&[1.0, 2.0], 0.2)).is_err());
        let mut b = series(&[1.0, 2.0], 0.1);
        b.times[1] = 0.3;
        assert!(l2_error(&series(&[1.0, 2.0], 0.1), &b).is_err());
    }

    #[test]
    fn constant_difference_closed_form() {
        let n = 37;
        let e = l2_error(&series(&vec![1.0; n], 0.25), &series(&vec![0.0; n], 0.25)).unwrap();
        assert!((e.l2() - (n as f64 * 0.25).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn csv_layout() {
        let e = l2_error(&series(&[1.0], 1.0), &series(&[0.0], 1.0)).unwrap();
        let mut buf = Vec::new();
        e.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "step,time,abs_error,l2\n0,0.0,1.0,1.0\n");
    }

    proptest! {
        #[test]
        fn identical_series_have_zero_error(v in proptest::collection::vec(-1e3f64..1e3, 1..50)) {
            let s = series(&v, 0.3);
            let e = l2_error(&s, &s).unwrap();
            prop_assert!(e.abs.iter().all(|&d| d == 0.0));
            prop_assert_eq!(e.l2(), 0.0);
        }

        #[test]
        fn triangle_inequality(v in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3, -1e3f64..1e3), 1..50)) {
            let a = series(&v.iter().map(|t| t.0).collect::<Vec<_>>(), 0.3);
            let b = series(&v.iter().map(|t| t.1).collect::<Vec<_>>(), 0.3);
            let c = series(&v.iter().map(|t| t.2).collect::<Vec<_>>(), 0.3);
            let ab = l2_error(&a, &b).unwrap().l2();
            let bc = l2_error(&b, &c).unwrap().l2();
            let ac = l2_error(&a, &c).unwrap().l2();
            prop_assert!(ac <= (ab + bc) * (1.0 + 1e-12) + 1e-12);
        }

        #[test]
        fn running_l2_is_monotone(v in proptest::collection::vec(-1e3f64..1e3, 1..50)) {
            let e = l2_error(&series(&v, 0.1), &series(&vec![0.0; v.len()], 0.1)).unwrap();
            prop_assert!(e.running_l2.windows(2).all(|w| w[1] >= w[0]));
        }
    }
}
