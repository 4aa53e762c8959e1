//! Thomas algorithm for tridiagonal systems.

/// Solves `lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1] = rhs[k]`
/// in place (`rhs` becomes `x`). `lower[0]` and `upper[n-1]` are ignored.
/// Returns `false` if a zero pivot is met.
pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64], scratch: &mut Vec<f64>) -> bool {
    let n = diag.len();
    scratch.clear();
    scratch.resize(n, 0.0);
    let mut beta = diag[0];
    if beta == 0.0 {
        return false;
    }
    rhs[0] /= beta;
    for k in 1..n {
        scratch[k] = upper[k - 1] / beta;
        beta = diag[k] - lower[k] * scratch[k];
        if beta == 0.0 {
            return false;
        }
        rhs[k] = (rhs[k] - lower[k] * rhs[k - 1]) / beta;
    }
    for k in (0..n - 1).rev() {
        let next = rhs[k + 1];
        rhs[k] -= scratch[k + 1] * next;
    }
    true
}

/// Same matrix, two right-hand sides.
pub fn solve2(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs_a: &mut [f64],
    rhs_b: &mut [f64],
    scratch: &mut Vec<f64>,
) -> bool {
    let n = diag.len();
    scratch.clear();
    scratch.resize(n, 0.0);
    let mut beta = diag[0];
    if beta == 0.0 {
        return false;
    }
    rhs_a[0] /= beta;
    rhs_b[0] /= beta;
    for k in 1..n {
        scratch[k] = upper[k - 1] / beta;
        beta = diag[k] - lower[k] * scratch[k];
        if beta == 0.0 {
            return false;
        }
        rhs_a[k] = (rhs_a[k] - lower[k] * rhs_a[k - 1]) / beta;
        rhs_b[k] = (rhs_b[k] - lower[k] * rhs_b[k - 1]) / beta;
    }
    for k in (0..n - 1).rev() {
        let (na, nb) = (rhs_a[k + 1], rhs_b[k + 1]);
        rhs_a[k] -= scratch[k + 1] * na;
        rhs_b[k] -= scratch[k + 1] * nb;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_residual(l: &[f64], d: &[f64], u: &[f64], x: &[f64], b: &[f64]) -> f64 {
        let n = d.len();
        (0..n)
            .map(|k| {
                let mut s = d[k] * x[k];
                if k > 0 {
                    s += l[k] * x[k - 1];
                }
                if k + 1 < n {
                    s += u[k] * x[k + 1];
                }
                (s - b[k]).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn solves_diagonally_dominant_system() {
        let n = 50;
        let l: Vec<f64> = (0..n).map(|k| -1.0 - 0.01 * k as f64).collect();
        let u: Vec<f64> = (0..n).map(|k| -0.5 + 0.003 * k as f64).collect();
        let d: Vec<f64> = (0..n).map(|k| 3.0 + (k as f64).sin()).collect();
        let b: Vec<f64> = (0..n).map(|k| (k as f64 * 0.37).cos()).collect();
        let mut x = b.clone();
        let mut y: Vec<f64> = b.iter().map(|v| 2.0 * v + 1.0).collect();
        let y0 = y.clone();
        let mut s = Vec::new();
        assert!(solve2(&l, &d, &u, &mut x, &mut y, &mut s));
        assert!(dense_residual(&l, &d, &u, &x, &b) < 1e-13);
        assert!(dense_residual(&l, &d, &u, &y, &y0) < 1e-13);
        let mut z = b.clone();
        assert!(solve(&l, &d, &u, &mut z, &mut s));
        assert_eq!(x, z);
    }

    #[test]
    fn zero_pivot_is_reported() {
        let mut r = vec![1.0, 1.0];
        assert!(!solve(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &mut r, &mut Vec::new()));
    }
}
