use crate::error::{Error, Result};

/// Tensor grid on Q_T = (0,L)×(0,1)×(0,T) with `nx`, `ny`, `nt` cells.
///
/// Nodes are `x_i = i·dx` for `i = 0..=nx` (and likewise in y and t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
    pub length: f64,
    pub horizon: f64,
}

/// Smallest admissible cell count in any direction.
pub const MIN_CELLS: usize = 4;

/// Safety factor of the explicit-transport stability bound.
pub const CFL_FACTOR: f64 = 0.9;

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nx: 64,
            ny: 64,
            nt: 64,
            length: 1.0,
            horizon: 0.5,
        }
    }
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, nt: usize, length: f64, horizon: f64) -> Result<Self> {
        let g = GridSpec {
            nx,
            ny,
            nt,
            length,
            horizon,
        };
        g.check()?;
        Ok(g)
    }

    /// Uniform refinement by `factor` in every direction.
    pub fn refined(&self, factor: usize) -> Self {
        GridSpec {
            nx: self.nx * factor,
            ny: self.ny * factor,
            nt: self.nt * factor,
            ..*self
        }
    }

    pub fn check(&self) -> Result<()> {
        for (name, n) in [("Nx", self.nx), ("Ny", self.ny), ("Nt", self.nt)] {
            if n < MIN_CELLS {
                return Err(Error::Config(format!(
                    "{name} = {n} but every cell count must be at least {MIN_CELLS}"
                )));
            }
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::Config(format!("L = {} must be positive", self.length)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!("T = {} must be positive", self.horizon)));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        self.length / self.nx as f64
    }
    pub fn dy(&self) -> f64 {
        1.0 / self.ny as f64
    }
    pub fn dt(&self) -> f64 {
        self.horizon / self.nt as f64
    }
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }
    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy()
    }
    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dt()
    }

    /// Number of nodes in one (x, y) snapshot.
    pub fn nodes_per_snapshot(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    /// Flat index of node (i, j) inside a snapshot; y varies fastest.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.ny + 1) + j
    }

    pub fn label(&self) -> String {
        format!("{}x{}x{}", self.nx, self.ny, self.nt)
    }

    /// Checks `dt ≤ 0.9·min(dx / max(a+ε), dy / max|b|)` and returns the margin
    /// `bound / dt` (≥ 1 when satisfied).
    pub fn cfl_margin(&self, max_transport_x: f64, max_abs_b: f64) -> f64 {
        let bx = if max_transport_x > 0.0 {
            self.dx() / max_transport_x
        } else {
            f64::INFINITY
        };
        let by = if max_abs_b > 0.0 {
            self.dy() / max_abs_b
        } else {
            f64::INFINITY
        };
        CFL_FACTOR * bx.min(by) / self.dt()
    }

    pub fn check_cfl(&self, max_transport_x: f64, max_abs_b: f64) -> Result<f64> {
        let margin = self.cfl_margin(max_transport_x, max_abs_b);
        if margin < 1.0 {
            return Err(Error::Config(format!(
                "time step dt = {:.4e} violates the transport stability bound \
                 (max a+eps = {:.4e}, max |b| = {:.4e}, grid {}): need Nt >= {}",
                self.dt(),
                max_transport_x,
                max_abs_b,
                self.label(),
                (self.nt as f64 / margin).ceil() as usize
            )));
        }
        Ok(margin)
    }
}
