//! Staggered geometry and field storage.
//!
//! Pressure lives at cell centres `(i+1/2, j+1/2)`, the x-impulse `ξ` at
//! x-edges `(i, j+1/2)` and the y-impulse `ζ` at y-edges `(i+1/2, j)`.
//! Every field is one flat row-major array with `x` varying fastest.

use crate::error::{Error, Result};

/// Which staggered station a field lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Station {
    /// Cell centre `(i+1/2, j+1/2)`, `J × J` entries.
    Center,
    /// x-edge `(i, j+1/2)`, `(J+1) × J` entries.
    XEdge,
    /// y-edge `(i+1/2, j)`, `J × (J+1)` entries.
    YEdge,
}

impl Station {
    pub const ALL: [Station; 3] = [Station::Center, Station::XEdge, Station::YEdge];
}

/// A square, isotropically meshed domain of `J × J` cells with optional
/// absorbing layers along each side.
#[derive(Debug, Clone, PartialEq)]
pub struct StaggeredGrid {
    cells: usize,
    length: f64,
    spacing: f64,
    pml_x: usize,
    pml_y: usize,
    origin: [f64; 2],
}

impl StaggeredGrid {
    /// Builds a grid spanning `[0, L]²`.
    ///
    /// ```
    /// use advac::grid::StaggeredGrid;
    ///
    /// let g = StaggeredGrid::new(100, 100.0, 45, 45).unwrap();
    /// assert_eq!(g.dx(), 1.0);
    /// assert_eq!(g.interior_cells_x(), 45..55);
    /// assert!(StaggeredGrid::new(4, 1.0, 2, 2).is_err());
    /// ```
    pub fn new(cells: usize, length: f64, pml_x: usize, pml_y: usize) -> Result<Self> {
        if cells < 4 {
            return Err(Error::Config(format!("grid needs at least 4 cells, got {cells}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Config(format!("domain length must be positive, got {length}")));
        }
        if 2 * pml_x >= cells || 2 * pml_y >= cells {
            return Err(Error::Config(format!(
                "layers of {pml_x}x{pml_y} cells leave no interior in a {cells}-cell grid"
            )));
        }
        Ok(Self {
            cells,
            length,
            spacing: length / cells as f64,
            pml_x,
            pml_y,
            origin: [0.0, 0.0],
        })
    }

    /// Moves the lower-left corner so that the domain is `[-L/2, L/2]²`.
    pub fn centered(mut self) -> Self {
        self.origin = [-0.5 * self.length, -0.5 * self.length];
        self
    }

    pub fn with_origin(mut self, x0: f64, y0: f64) -> Self {
        self.origin = [x0, y0];
        self
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.spacing
    }

    pub fn dy(&self) -> f64 {
        self.spacing
    }

    pub fn pml_cells_x(&self) -> usize {
        self.pml_x
    }

    pub fn pml_cells_y(&self) -> usize {
        self.pml_y
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    /// Cell range `i` covered by the interior along x.
    pub fn interior_cells_x(&self) -> std::ops::Range<usize> {
        self.pml_x..self.cells - self.pml_x
    }

    pub fn interior_cells_y(&self) -> std::ops::Range<usize> {
        self.pml_y..self.cells - self.pml_y
    }

    /// `(nx, ny)` extents of a station kind.
    pub fn dims(&self, station: Station) -> (usize, usize) {
        let j = self.cells;
        match station {
            Station::Center => (j, j),
            Station::XEdge => (j + 1, j),
            Station::YEdge => (j, j + 1),
        }
    }

    pub fn len(&self, station: Station) -> usize {
        let (nx, ny) = self.dims(station);
        nx * ny
    }

    #[inline]
    pub fn index(&self, station: Station, i: usize, j: usize) -> usize {
        let (nx, ny) = self.dims(station);
        debug_assert!(i < nx && j < ny);
        j * nx + i
    }

    #[inline]
    pub fn coords(&self, station: Station, flat: usize) -> (usize, usize) {
        let (nx, _) = self.dims(station);
        (flat % nx, flat / nx)
    }

    /// Physical position of station `(i, j)`.
    pub fn position(&self, station: Station, i: usize, j: usize) -> (f64, f64) {
        let (ox, oy) = match station {
            Station::Center => (0.5, 0.5),
            Station::XEdge => (0.0, 0.5),
            Station::YEdge => (0.5, 0.0),
        };
        (
            self.origin[0] + (i as f64 + ox) * self.spacing,
            self.origin[1] + (j as f64 + oy) * self.spacing,
        )
    }

    /// Cell `(i, j)` containing `(x, y)`.
    ///
    /// Points on a cell boundary belong to the cell above/right of it; the
    /// far walls belong to the last cell. Returns `None` outside the domain.
    pub fn cell_containing(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let fx = (x - self.origin[0]) / self.spacing;
        let fy = (y - self.origin[1]) / self.spacing;
        let n = self.cells as f64;
        if !(0.0..=n).contains(&fx) || !(0.0..=n).contains(&fy) {
            return None;
        }
        let i = (fx.floor() as usize).min(self.cells - 1);
        let j = (fy.floor() as usize).min(self.cells - 1);
        Some((i, j))
    }

    /// True for impulse stations pinned to zero by the wall condition.
    #[inline]
    pub fn is_wall(&self, station: Station, i: usize, j: usize) -> bool {
        match station {
            Station::Center => false,
            Station::XEdge => i == 0 || i == self.cells,
            Station::YEdge => j == 0 || j == self.cells,
        }
    }

    /// Bilinear interpolation weights for a point among stations of one kind.
    ///
    /// Returns four `(flat index, weight)` pairs, or `None` when the point is
    /// outside the hull of the stations.
    pub fn bilinear(&self, station: Station, x: f64, y: f64) -> Option<[(usize, f64); 4]> {
        let (nx, ny) = self.dims(station);
        let (x0, y0) = self.position(station, 0, 0);
        let fx = (x - x0) / self.spacing;
        let fy = (y - y0) / self.spacing;
        if fx < 0.0 || fy < 0.0 || fx > (nx - 1) as f64 || fy > (ny - 1) as f64 {
            return None;
        }
        let i = (fx.floor() as usize).min(nx - 2);
        let j = (fy.floor() as usize).min(ny - 2);
        let ax = fx - i as f64;
        let ay = fy - j as f64;
        Some([
            (self.index(station, i, j), (1.0 - ax) * (1.0 - ay)),
            (self.index(station, i + 1, j), ax * (1.0 - ay)),
            (self.index(station, i, j + 1), (1.0 - ax) * ay),
            (self.index(station, i + 1, j + 1), ax * ay),
        ])
    }
}

/// The evolving unknowns at one time level.
///
/// At level `n` the pressures hold `p^n` and the impulses hold `ξ^{n+1/2}`,
/// `ζ^{n+1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSet {
    pub p_x: Vec<f64>,
    pub p_y: Vec<f64>,
    pub xi: Vec<f64>,
    pub zeta: Vec<f64>,
    pub time_level: u64,
}

impl FieldSet {
    pub fn zeros(grid: &StaggeredGrid) -> Self {
        Self {
            p_x: vec![0.0; grid.len(Station::Center)],
            p_y: vec![0.0; grid.len(Station::Center)],
            xi: vec![0.0; grid.len(Station::XEdge)],
            zeta: vec![0.0; grid.len(Station::YEdge)],
            time_level: 0,
        }
    }

    /// Total pressure `p_x + p_y`.
    pub fn pressure(&self) -> Vec<f64> {
        self.p_x.iter().zip(&self.p_y).map(|(a, b)| a + b).collect()
    }

    #[inline]
    pub fn pressure_at(&self, flat: usize) -> f64 {
        self.p_x[flat] + self.p_y[flat]
    }

    pub fn max_norm(&self) -> f64 {
        self.p_x
            .iter()
            .chain(&self.p_y)
            .chain(&self.xi)
            .chain(&self.zeta)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Name of the first field holding a NaN or infinity.
    pub fn first_non_finite(&self) -> Option<&'static str> {
        let fields: [(&'static str, &[f64]); 4] =
            [("p_x", &self.p_x), ("p_y", &self.p_y), ("xi", &self.xi), ("zeta", &self.zeta)];
        fields
            .into_iter()
            .find(|(_, v)| v.iter().any(|x| !x.is_finite()))
            .map(|(name, _)| name)
    }

    /// Multiplies every unknown by `a`.
    pub fn scale(&mut self, a: f64) {
        for v in [&mut self.p_x, &mut self.p_y, &mut self.xi, &mut self.zeta] {
            v.iter_mut().for_each(|x| *x *= a);
        }
    }
}
