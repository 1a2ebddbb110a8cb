//! Point observations of the fields and their CSV form.

use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{FieldSet, StaggeredGrid, Station};

/// Nearest-station sampler for one observation point.
///
/// The point selects the cell `(i, j)` containing it; `p` is read at that
/// cell's centre, `ξ` at its left x-edge and `ζ` at its lower y-edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub location: (f64, f64),
    center: usize,
    xi: usize,
    zeta: usize,
}

impl Probe {
    pub fn new(grid: &StaggeredGrid, location: (f64, f64)) -> Result<Self> {
        let (i, j) = grid
            .cell_containing(location.0, location.1)
            .ok_or_else(|| Error::Config(format!("probe ({}, {}) lies outside the domain", location.0, location.1)))?;
        Ok(Self {
            location,
            center: grid.index(Station::Center, i, j),
            xi: grid.index(Station::XEdge, i, j),
            zeta: grid.index(Station::YEdge, i, j),
        })
    }

    /// `(p, ξ, ζ)` at the probe stations.
    pub fn sample(&self, fields: &FieldSet) -> (f64, f64, f64) {
        (fields.pressure_at(self.center), fields.xi[self.xi], fields.zeta[self.zeta])
    }
}

/// Time series recorded at one probe.
///
/// `times` is the pressure time axis; the impulses of row `k` belong to
/// `times[k] + dt/2`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbeSeries {
    pub location: (f64, f64),
    pub dt: f64,
    pub steps: Vec<u64>,
    pub times: Vec<f64>,
    pub p: Vec<f64>,
    pub xi: Vec<f64>,
    pub zeta: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    step: u64,
    time: f64,
    p: f64,
    xi: f64,
    zeta: f64,
}

impl ProbeSeries {
    pub fn new(location: (f64, f64), dt: f64) -> Self {
        Self { location, dt, ..Self::default() }
    }

    pub fn push(&mut self, step: u64, time: f64, (p, xi, zeta): (f64, f64, f64)) {
        self.steps.push(step);
        self.times.push(time);
        self.p.push(p);
        self.xi.push(xi);
        self.zeta.push(zeta);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn impulse_times(&self) -> Vec<f64> {
        self.times.iter().map(|t| t + 0.5 * self.dt).collect()
    }

    /// Multiplies every value by `a`.
    pub fn scaled(&self, a: f64) -> Self {
        let mut s = self.clone();
        for v in [&mut s.p, &mut s.xi, &mut s.zeta] {
            v.iter_mut().for_each(|x| *x *= a);
        }
        s
    }

    /// Writes a `# probe x=<x> y=<y> dt=<dt>` line followed by
    /// `step,time,p,xi,zeta` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# probe x={:e} y={:e} dt={:e}", self.location.0, self.location.1, self.dt)?;
        let mut out = csv::Writer::from_writer(w);
        for k in 0..self.len() {
            out.serialize(Row { step: self.steps[k], time: self.times[k], p: self.p[k], xi: self.xi[k], zeta: self.zeta[k] })?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(mut r: R) -> Result<Self> {
        let mut series = Self::default();
        let mut first = String::new();
        r.read_line(&mut first)?;
        let body: Box<dyn Read + '_> = if let Some(rest) = first.trim().strip_prefix("# probe") {
            for part in rest.split_whitespace() {
                let (key, value) = part.split_once('=').ok_or_else(|| Error::Parse { line: 1, message: format!("bad field '{part}'") })?;
                let value: f64 = value.parse().map_err(|e| Error::Parse { line: 1, message: format!("{key}: {e}") })?;
                match key {
                    "x" => series.location.0 = value,
                    "y" => series.location.1 = value,
                    "dt" => series.dt = value,
                    _ => return Err(Error::Parse { line: 1, message: format!("unknown field '{key}'") }),
                }
            }
            Box::new(r)
        } else {
            Box::new(first.as_bytes().chain(r))
        };
        for row in csv::Reader::from_reader(body).deserialize() {
            let row: Row = row?;
            series.push(row.step, row.time, (row.p, row.xi, row.zeta));
        }
        if series.dt == 0.0 && series.len() > 1 {
            series.dt = series.times[1] - series.times[0];
        }
        Ok(series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn probe_picks_containing_cell() {
        let g = StaggeredGrid::new(10, 10.0, 0, 0).unwrap().centered();
        let probe = Probe::new(&g, (0.2, -0.7)).unwrap();
        let mut f = FieldSet::zeros(&g);
        f.p_x[g.index(Station::Center, 5, 4)] = 2.0;
        f.p_y[g.index(Station::Center, 5, 4)] = 1.0;
        f.xi[g.index(Station::XEdge, 5, 4)] = 3.0;
        f.zeta[g.index(Station::YEdge, 5, 4)] = 4.0;
        assert_eq!(probe.sample(&f), (3.0, 3.0, 4.0));
        assert!(Probe::new(&g, (5.5, 0.0)).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut s = ProbeSeries::new((1.0, -2.0), 0.5);
        s.push(0, 0.0, (1.0, 2.0, 3.0));
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# probe x=1e0 y=-2e0 dt=5e-1\nstep,time,p,xi,zeta\n0,0.0,1.0,2.0,3.0\n");
        assert_eq!(s.impulse_times(), vec![0.25]);
    }

    #[test]
    fn headerless_csv_infers_dt() {
        let text = "step,time,p,xi,zeta\n0,0.0,1,0,0\n1,0.25,2,0,0\n";
        let s = ProbeSeries::read_csv(text.as_bytes()).unwrap();
        assert_eq!(s.dt, 0.25);
        assert_eq!(s.p, vec![1.0, 2.0]);
    }

    proptest! {
        #[test]
        fn csv_round_trip(vals in proptest::collection::vec((any::<f64>(), -1e3f64..1e3, -1e-3f64..1e-3), 0..20), dt in 1e-3f64..1.0) {
            prop_assume!(vals.iter().all(|v| v.0.is_finite()));
            let mut s = ProbeSeries::new((0.5, 24.5), dt);
            for (k, v) in vals.iter().enumerate() {
                s.push(k as u64, k as f64 * dt, *v);
            }
            let mut buf = Vec::new();
            s.write_csv(&mut buf).unwrap();
            let back = ProbeSeries::read_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
