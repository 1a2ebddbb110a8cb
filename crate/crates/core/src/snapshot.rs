//! Plain-text dumps of the total pressure.
//!
//! ```text
//! # t=1.5e0 J=3 dx=1e0
//! 0e0 1e0 2e0
//! ...
//! ```
//!
//! One row per `j`, values in shortest round-trip exponent notation, so a
//! write followed by a read reproduces every bit.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::grid::{FieldSet, StaggeredGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub cells: usize,
    pub dx: f64,
    /// Row-major `J × J` pressure, x fastest.
    pub pressure: Vec<f64>,
}

impl Snapshot {
    pub fn capture(grid: &StaggeredGrid, fields: &FieldSet, time: f64) -> Self {
        Self { time, cells: grid.cells(), dx: grid.dx(), pressure: fields.pressure() }
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# t={:e} J={} dx={:e}", self.time, self.cells, self.dx)?;
        for row in self.pressure.chunks(self.cells) {
            let mut first = true;
            for v in row {
                if !first {
                    w.write_all(b" ")?;
                }
                first = false;
                write!(w, "{v:e}")?;
            }
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, message: "empty snapshot".into() })??;
        let (time, cells, dx) = parse_header(&header)?;
        let mut pressure = Vec::with_capacity(cells * cells);
        for (k, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let before = pressure.len();
            for tok in line.split_whitespace() {
                let v: f64 = tok.parse().map_err(|_| Error::Parse {
                    line: k + 2,
                    message: format!("bad number {tok:?}"),
                })?;
                pressure.push(v);
            }
            if pressure.len() - before != cells {
                return Err(Error::Parse {
                    line: k + 2,
                    message: format!("expected {cells} values, got {}", pressure.len() - before),
                });
            }
        }
        if pressure.len() != cells * cells {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected {cells} rows, got {}", pressure.len() / cells.max(1)),
            });
        }
        Ok(Self { time, cells, dx, pressure })
    }
}

fn parse_header(line: &str) -> Result<(f64, usize, f64)> {
    let bad = |m: &str| Error::Parse { line: 1, message: m.to_string() };
    let rest = line.strip_prefix('#').ok_or_else(|| bad("header must start with '#'"))?;
    let (mut t, mut j, mut dx) = (None, None, None);
    for item in rest.split_whitespace() {
        match item.split_once('=') {
            Some(("t", v)) => t = v.parse().ok(),
            Some(("J", v)) => j = v.parse().ok(),
            Some(("dx", v)) => dx = v.parse().ok(),
            _ => return Err(bad(&format!("unexpected header item {item:?}"))),
        }
    }
    match (t, j, dx) {
        (Some(t), Some(j), Some(dx)) => Ok((t, j, dx)),
        _ => Err(bad("header needs t, J and dx")),
    }
}
