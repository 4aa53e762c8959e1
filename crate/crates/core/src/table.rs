//! Sampled 2-D tables read from CSV (`x,t,U`, `x,y,u0`, `y,t,u1`, `x,t,v0`).
//!
//! Rows are in row-major order with the second coordinate varying fastest.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Table2 {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    /// `values[a * second.len() + b]`
    pub values: Vec<f64>,
}

impl Table2 {
    pub fn from_fn(first: Vec<f64>, second: Vec<f64>, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(first.len() * second.len());
        for &a in &first {
            for &b in &second {
                values.push(f(a, b));
            }
        }
        Table2 {
            first,
            second,
            values,
        }
    }

    /// Reads a three-column CSV with the given header names.
    pub fn read_csv(path: &Path, header: [&str; 3]) -> Result<Self> {
        let display = path.display().to_string();
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Io(format!("{display}: {e}")))?;
        let got: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Io(format!("{display}: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        if got != header {
            return Err(Error::Config(format!(
                "{display}: expected header `{}`, found `{}`",
                header.join(","),
                got.join(",")
            )));
        }
        let mut rows = Vec::new();
        for (k, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Io(format!("{display}: {e}")))?;
            let mut row = [0.0; 3];
            for (c, slot) in row.iter_mut().enumerate() {
                let field = rec.get(c).ok_or_else(|| {
                    Error::Config(format!("{display}: row {} has fewer than 3 columns", k + 2))
                })?;
                *slot = field.parse().map_err(|_| {
                    Error::Config(format!("{display}: row {}: `{field}` is not a number", k + 2))
                })?;
            }
            rows.push(row);
        }
        Self::from_rows(&rows).map_err(|m| Error::Config(format!("{display}: {m}")))
    }

    fn from_rows(rows: &[[f64; 3]]) -> std::result::Result<Self, String> {
        let mut second = Vec::new();
        for r in rows {
            if second.last().is_some_and(|&l: &f64| r[1] <= l) {
                break;
            }
            second.push(r[1]);
        }
        let nb = second.len();
        if nb < 2 || rows.len() % nb != 0 {
            return Err("table is not a full tensor grid".into());
        }
        let na = rows.len() / nb;
        if na < 2 {
            return Err("table needs at least two values of the first coordinate".into());
        }
        let mut first = Vec::with_capacity(na);
        for a in 0..na {
            let x = rows[a * nb][0];
            if first.last().is_some_and(|&l: &f64| x <= l) {
                return Err(format!("first coordinate not increasing at row {}", a * nb + 2));
            }
            for b in 0..nb {
                let r = rows[a * nb + b];
                if r[0] != x || r[1] != second[b] {
                    return Err(format!(
                        "row {} breaks the row-major layout (second coordinate varies fastest)",
                        a * nb + b + 2
                    ));
                }
            }
            first.push(x);
        }
        Ok(Table2 {
            first,
            second,
            values: rows.iter().map(|r| r[2]).collect(),
        })
    }

    fn bracket(coords: &[f64], v: f64) -> (usize, f64) {
        let n = coords.len();
        if v <= coords[0] {
            return (0, 0.0);
        }
        if v >= coords[n - 1] {
            return (n - 2, 1.0);
        }
        let k = coords.partition_point(|&c| c <= v).saturating_sub(1).min(n - 2);
        (k, (v - coords[k]) / (coords[k + 1] - coords[k]))
    }

    /// Bilinear interpolation, clamped to the table's extent.
    pub fn eval(&self, a: f64, b: f64) -> f64 {
        let nb = self.second.len();
        let (i, s) = Self::bracket(&self.first, a);
        let (j, r) = Self::bracket(&self.second, b);
        let v = |i: usize, j: usize| self.values[i * nb + j];
        (1.0 - s) * ((1.0 - r) * v(i, j) + r * v(i, j + 1))
            + s * ((1.0 - r) * v(i + 1, j) + r * v(i + 1, j + 1))
    }

    /// Table of the derivative along the first (`axis = 0`) or second
    /// coordinate: centred second-order differences inside, one-sided
    /// second-order at the ends.
    pub fn derivative(&self, axis: usize) -> Table2 {
        let na = self.first.len();
        let nb = self.second.len();
        let mut out = vec![0.0; self.values.len()];
        let (coords, n) = if axis == 0 {
            (&self.first, na)
        } else {
            (&self.second, nb)
        };
        let get = |line: usize, k: usize| {
            if axis == 0 {
                self.values[k * nb + line]
            } else {
                self.values[line * nb + k]
            }
        };
        let lines = if axis == 0 { nb } else { na };
        for line in 0..lines {
            for k in 0..n {
                let d = derivative_1d(coords, n, k, |m| get(line, m));
                let idx = if axis == 0 { k * nb + line } else { line * nb + k };
                out[idx] = d;
            }
        }
        Table2 {
            first: self.first.clone(),
            second: self.second.clone(),
            values: out,
        }
    }
}

pub(crate) fn derivative_1d(c: &[f64], n: usize, k: usize, f: impl Fn(usize) -> f64) -> f64 {
    if n == 2 {
        return (f(1) - f(0)) / (c[1] - c[0]);
    }
    // Three-point Lagrange derivative on a possibly non-uniform stencil.
    let (k0, at) = if k == 0 {
        (0, 0)
    } else if k == n - 1 {
        (n - 3, 2)
    } else {
        (k - 1, 1)
    };
    let x = [c[k0], c[k0 + 1], c[k0 + 2]];
    let y = [f(k0), f(k0 + 1), f(k0 + 2)];
    let xe = x[at];
    let mut d = 0.0;
    for m in 0..3 {
        // derivative of the m-th Lagrange basis polynomial at xe
        let mut s = 0.0;
        for q in 0..3 {
            if q == m {
                continue;
            }
            let mut p = 1.0 / (x[m] - x[q]);
            for o in 0..3 {
                if o != m && o != q {
                    p *= (xe - x[o]) / (x[m] - x[o]);
                }
            }
            s += p;
        }
        d += y[m] * s;
    }
    d
}
