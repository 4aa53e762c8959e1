//! Linear model problem ∂t u − ∂y(a ∂y u) + y ∂x u = 0 on
//! [−1, 1] × [−1, 1] × [−1, 0] with a measurable coefficient Λ⁻¹ ≤ a ≤ Λ.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::kernel::{gamma0, KernelPoint};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::solver::{tridiag, upwind};

/// Cell counts of the seeded-random field in x, y, t.
const RANDOM_CELLS: [usize; 3] = [4, 8, 4];
/// Cell sizes of the checkerboard in x, y, t.
const CHECKER_CELL: [f64; 3] = [0.5, 0.25, 0.25];

#[derive(Debug, Clone, PartialEq)]
enum Pattern {
    Constant,
    Checkerboard,
    Random(Vec<f64>),
}

/// A piecewise-constant coefficient a(z) with ellipticity constant Λ.
#[derive(Debug, Clone, PartialEq)]
pub struct RoughCoefficient {
    pub kind: String,
    pub lambda: f64,
    pattern: Pattern,
}

fn cell(v: f64, lo: f64, size: f64, count: usize) -> usize {
    (((v - lo) / size).floor().max(0.0) as usize).min(count - 1)
}

impl RoughCoefficient {
    pub fn value(&self, x: f64, y: f64, t: f64) -> f64 {
        match &self.pattern {
            Pattern::Constant => 1.0,
            Pattern::Checkerboard => {
                let [sx, sy, st] = CHECKER_CELL;
                let k = cell(x, -1.0, sx, 4) + cell(y, -1.0, sy, 8) + cell(t, -1.0, st, 4);
                if k % 2 == 0 {
                    self.lambda
                } else {
                    1.0 / self.lambda
                }
            }
            Pattern::Random(values) => {
                let [nx, ny, nt] = RANDOM_CELLS;
                let i = cell(x, -1.0, 2.0 / nx as f64, nx);
                let j = cell(y, -1.0, 2.0 / ny as f64, ny);
                let n = cell(t, -1.0, 1.0 / nt as f64, nt);
                values[(n * ny + j) * nx + i]
            }
        }
    }

    /// Smallest and largest value taken.
    pub fn range(&self) -> (f64, f64) {
        match &self.pattern {
            Pattern::Constant => (1.0, 1.0),
            Pattern::Checkerboard => (1.0 / self.lambda, self.lambda),
            Pattern::Random(v) => v
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &a| (lo.min(a), hi.max(a))),
        }
    }
}

/// Named coefficient fields: "constant" (a ≡ 1), "checkerboard" (Λ and
/// 1/Λ on 0.5 × 0.25 × 0.25 cells) and "seeded-random" (log-uniform in
/// [1/Λ, Λ] on a 4 × 8 × 4 partition, drawn from `seed`).
pub fn model_scenarios(kind: &str, lambda: f64, seed: u64) -> Result<RoughCoefficient> {
    let pattern = match kind {
        "constant" => Pattern::Constant,
        "checkerboard" | "seeded-random" if !(lambda > 1.0 && lambda.is_finite()) => {
            return Err(Error::Parameter(format!("Lambda = {lambda} must exceed 1")));
        }
        "checkerboard" => Pattern::Checkerboard,
        "seeded-random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let count = RANDOM_CELLS.iter().product();
            Pattern::Random((0..count).map(|_| lambda.powf(rng.gen_range(-1.0..=1.0))).collect())
        }
        other => {
            return Err(Error::Parameter(format!(
                "unknown coefficient field '{other}' (expected constant, checkerboard or seeded-random)"
            )))
        }
    };
    Ok(RoughCoefficient {
        kind: kind.to_string(),
        lambda: if kind == "constant" { 1.0 } else { lambda },
        pattern,
    })
}

/// Uniform grid with `n` cells per direction on [−1, 1]² × [−1, 0].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoughGrid {
    pub n: usize,
}

impl RoughGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::Parameter(format!("rough grid needs an even cell count >= 4, got {n}")));
        }
        Ok(RoughGrid { n })
    }

    pub fn dx(&self) -> f64 {
        2.0 / self.n as f64
    }
    pub fn dy(&self) -> f64 {
        2.0 / self.n as f64
    }
    pub fn dt(&self) -> f64 {
        1.0 / self.n as f64
    }
    pub fn x(&self, i: usize) -> f64 {
        -1.0 + i as f64 * self.dx()
    }
    pub fn y(&self, j: usize) -> f64 {
        -1.0 + j as f64 * self.dy()
    }
    pub fn t(&self, k: usize) -> f64 {
        -1.0 + k as f64 * self.dt()
    }

    #[inline]
    fn idx(&self, k: usize, i: usize, j: usize) -> usize {
        (k * (self.n + 1) + i) * (self.n + 1) + j
    }
}

/// Nodal values on a [`RoughGrid`], sampled by trilinear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct RoughField {
    pub grid: RoughGrid,
    pub values: Vec<f64>,
}

impl RoughField {
    pub fn from_fn(grid: RoughGrid, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let m = grid.n + 1;
        let mut values = Vec::with_capacity(m * m * m);
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    values.push(f(grid.x(i), grid.y(j), grid.t(k)));
                }
            }
        }
        RoughField { grid, values }
    }

    pub fn at(&self, k: usize, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(k, i, j)]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        RoughField {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    fn locate(&self, v: f64, lo: f64, h: f64) -> (usize, f64) {
        let n = self.grid.n;
        let s = ((v - lo) / h).clamp(0.0, n as f64);
        let c = (s.floor() as usize).min(n - 1);
        (c, s - c as f64)
    }

    fn corners(&self, z: KernelPoint) -> ([f64; 8], [f64; 3]) {
        let g = self.grid;
        let (i, fx) = self.locate(z.x, -1.0, g.dx());
        let (j, fy) = self.locate(z.y, -1.0, g.dy());
        let (k, ft) = self.locate(z.t, -1.0, g.dt());
        let mut c = [0.0; 8];
        for (m, v) in c.iter_mut().enumerate() {
            *v = self.at(k + (m >> 2), i + ((m >> 1) & 1), j + (m & 1));
        }
        (c, [fx, fy, ft])
    }

    /// Trilinear interpolant at z, clamped to the domain.
    pub fn sample(&self, z: KernelPoint) -> f64 {
        let (c, [fx, fy, ft]) = self.corners(z);
        let lerp = |a: f64, b: f64, s: f64| a + (b - a) * s;
        let plane = |o: usize| lerp(lerp(c[o], c[o + 1], fy), lerp(c[o + 2], c[o + 3], fy), fx);
        lerp(plane(0), plane(4), ft)
    }

    /// y-derivative of the trilinear interpolant at z.
    pub fn sample_dy(&self, z: KernelPoint) -> f64 {
        let (c, [fx, _, ft]) = self.corners(z);
        let lerp = |a: f64, b: f64, s: f64| a + (b - a) * s;
        let plane = |o: usize| lerp(c[o + 1] - c[o], c[o + 3] - c[o + 2], fx);
        lerp(plane(0), plane(4), ft) / self.grid.dy()
    }

    /// Maximum nodal distance to `f`, over interior nodes at times after the first level.
    pub fn max_error(&self, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let g = self.grid;
        let mut e: f64 = 0.0;
        for k in 1..=g.n {
            for i in 1..g.n {
                for j in 1..g.n {
                    e = e.max((self.at(k, i, j) - f(g.x(i), g.y(j), g.t(k))).abs());
                }
            }
        }
        e
    }
}

/// How the x boundary is treated.
enum XBoundary<'a> {
    Periodic,
    /// Columns 0 and n are prescribed by the function at every level.
    Dirichlet(&'a (dyn Fn(f64, f64, f64) -> f64 + Sync)),
}

/// Initial datum of the rough runs, periodic in x.
pub fn rough_initial(x: f64, y: f64) -> f64 {
    0.5 * (1.0 + (1.5 * PI * y + PI * x).sin())
}

/// Implicit conservative y-diffusion with a at (x_i, y_{j±1/2}, t_{k+1/2}),
/// explicit upwind transport y∂x, and Dirichlet y boundaries.
fn run(
    coef: &(dyn Fn(f64, f64, f64) -> f64 + Sync),
    grid: RoughGrid,
    initial: &RoughField,
    xb: XBoundary<'_>,
    exec: Execution,
) -> Result<RoughField> {
    let n = grid.n;
    let m = n + 1;
    let (dx, dy, dt) = (grid.dx(), grid.dy(), grid.dt());
    let mut values = initial.values.clone();
    values.truncate(m * m);
    values.resize(m * m * m, 0.0);
    for k in 0..n {
        let th = grid.t(k) + 0.5 * dt;
        let t1 = grid.t(k + 1);
        let (done, rest) = values.split_at_mut((k + 1) * m * m);
        let prev = &done[k * m * m..];
        let next = &mut rest[..m * m];
        let failed = std::sync::atomic::AtomicBool::new(false);
        exec.for_each_chunk(next, m, |i, col| {
            if let XBoundary::Dirichlet(f) = &xb {
                if i == 0 || i == n {
                    for (j, v) in col.iter_mut().enumerate() {
                        *v = f(grid.x(i), grid.y(j), t1);
                    }
                    return;
                }
            }
            let x = grid.x(i);
            let (back, fwd) = match xb {
                XBoundary::Periodic => ((i + n - 1) % n, (i + 1) % n),
                XBoundary::Dirichlet(_) => (i - 1, i + 1),
            };
            let here = &prev[i * m..(i + 1) * m];
            let (pb, pf) = (&prev[back * m..(back + 1) * m], &prev[fwd * m..(fwd + 1) * m]);
            let mut lower = vec![0.0; m];
            let mut diag = vec![1.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            rhs[0] = match &xb {
                XBoundary::Periodic => here[0],
                XBoundary::Dirichlet(f) => f(x, grid.y(0), t1),
            };
            rhs[n] = match &xb {
                XBoundary::Periodic => here[n],
                XBoundary::Dirichlet(f) => f(x, grid.y(n), t1),
            };
            let lam = dt / (dy * dy);
            for j in 1..n {
                let y = grid.y(j);
                let am = coef(x, y - 0.5 * dy, th);
                let ap = coef(x, y + 0.5 * dy, th);
                lower[j] = -lam * am;
                upper[j] = -lam * ap;
                diag[j] = 1.0 + lam * (am + ap);
                rhs[j] = here[j] - dt * upwind(y, pb[j], here[j], pf[j], dx);
            }
            let mut scratch = Vec::new();
            if !tridiag::solve(&lower, &diag, &upper, &mut rhs, &mut scratch) {
                failed.store(true, std::sync::atomic::Ordering::Relaxed);
            }
            col.copy_from_slice(&rhs);
        });
        if failed.into_inner() {
            return Err(Error::Numerical(format!("zero pivot in rough step {}", k + 1)));
        }
        if matches!(xb, XBoundary::Periodic) {
            let (first, last) = (0, n * m);
            next.copy_within(first..first + m, last);
        }
        if let Some(v) = next.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite value {v} in rough step {}", k + 1)));
        }
    }
    Ok(RoughField { grid, values })
}

/// Rough-coefficient run from [`rough_initial`] with periodic x and
/// y boundary values held at the initial data.
pub fn solve_rough(coef: &RoughCoefficient, grid: RoughGrid, exec: Execution) -> Result<RoughField> {
    let init = RoughField::from_fn(grid, |x, y, _| rough_initial(x, y));
    run(&|x, y, t| coef.value(x, y, t), grid, &init, XBoundary::Periodic, exec)
}

/// Pole of the kernel used for the consistency run.
pub const CONSISTENCY_POLE: KernelPoint = KernelPoint { x: 0.0, y: 0.0, t: -1.5 };

/// Max interior error of the a ≡ 1 run against Γ₀(·, ζ₀) with all
/// boundary and initial values taken from Γ₀.
pub fn gamma0_consistency(grid: RoughGrid, exec: Execution) -> Result<f64> {
    let exact = |x: f64, y: f64, t: f64| gamma0(KernelPoint::new(x, y, t), CONSISTENCY_POLE);
    let init = RoughField::from_fn(grid, exact);
    let field = run(&|_, _, _| 1.0, grid, &init, XBoundary::Dirichlet(&exact), exec)?;
    Ok(field.max_error(exact))
}
