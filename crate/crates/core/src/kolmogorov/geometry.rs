use super::kernel::KernelPoint;

/// Which of the anisotropic neighborhoods of the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxKind {
    /// B_r = {|x| < r³, |y| < r, |t| < r²}
    Full,
    /// B_r⁻ = B_r ∩ {t < 0}
    Past,
    /// C_r = {|x| < r³, |y| < r} in the (x, y) plane
    Slab,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolicBox {
    pub r: f64,
    pub kind: BoxKind,
}

impl ParabolicBox {
    pub fn full(r: f64) -> Self {
        ParabolicBox { r, kind: BoxKind::Full }
    }

    pub fn past(r: f64) -> Self {
        ParabolicBox { r, kind: BoxKind::Past }
    }

    pub fn slab(r: f64) -> Self {
        ParabolicBox { r, kind: BoxKind::Slab }
    }

    /// Open-box membership; for a slab t is ignored.
    pub fn contains(&self, z: KernelPoint) -> bool {
        let r = self.r;
        let xy = z.x.abs() < r.powi(3) && z.y.abs() < r;
        match self.kind {
            BoxKind::Full => xy && z.t.abs() < r * r,
            BoxKind::Past => xy && z.t < 0.0 && z.t > -r * r,
            BoxKind::Slab => xy,
        }
    }

    /// Exact measure: 8r⁶, 4r⁶ or 4r⁴.
    pub fn volume(&self) -> f64 {
        match self.kind {
            BoxKind::Full => 8.0 * self.r.powi(6),
            BoxKind::Past => 4.0 * self.r.powi(6),
            BoxKind::Slab => 4.0 * self.r.powi(4),
        }
    }

    /// Closed-box extents ([x], [y], [t]); a slab reports t = [0, 0].
    pub fn bounds(&self) -> [(f64, f64); 3] {
        let r = self.r;
        let (x, y) = ((-r.powi(3), r.powi(3)), (-r, r));
        match self.kind {
            BoxKind::Full => [x, y, (-r * r, r * r)],
            BoxKind::Past => [x, y, (-r * r, 0.0)],
            BoxKind::Slab => [x, y, (0.0, 0.0)],
        }
    }

    /// `n` evenly spaced points per axis covering the closed box
    /// (endpoints included), x fastest.
    pub fn lattice(&self, n: usize) -> Vec<KernelPoint> {
        let [bx, by, bt] = self.bounds();
        let nt = if self.kind == BoxKind::Slab { 1 } else { n };
        let at = |(a, b): (f64, f64), k: usize, m: usize| if m == 1 { a } else { a + (b - a) * k as f64 / (m - 1) as f64 };
        let mut pts = Vec::with_capacity(n * n * nt);
        for kt in 0..nt {
            for ky in 0..n {
                for kx in 0..n {
                    pts.push(KernelPoint::new(at(bx, kx, n), at(by, ky, n), at(bt, kt, nt)));
                }
            }
        }
        pts
    }

    /// `n` cell-center points per axis (the midpoint rule), x fastest.
    pub fn midpoints(&self, n: usize) -> Vec<KernelPoint> {
        let [bx, by, bt] = self.bounds();
        let nt = if self.kind == BoxKind::Slab { 1 } else { n };
        let at = |(a, b): (f64, f64), k: usize, m: usize| a + (b - a) * (k as f64 + 0.5) / m as f64;
        let mut pts = Vec::with_capacity(n * n * nt);
        for kt in 0..nt {
            for ky in 0..n {
                for kx in 0..n {
                    pts.push(KernelPoint::new(at(bx, kx, n), at(by, ky, n), if nt == 1 { bt.0 } else { at(bt, kt, nt) }));
                }
            }
        }
        pts
    }

    /// Cell-count measure on a uniform mesh of spacing h over [−1, 1]³
    /// (cells whose centers fall inside, times h³; h² for a slab).
    pub fn cell_count_volume(&self, h: f64) -> f64 {
        let n = (2.0 / h).round() as usize;
        let c = |k: usize| -1.0 + (k as f64 + 0.5) * h;
        let mut count = 0usize;
        let nt = if self.kind == BoxKind::Slab { 1 } else { n };
        for kt in 0..nt {
            for ky in 0..n {
                for kx in 0..n {
                    let t = if nt == 1 { 0.0 } else { c(kt) };
                    if self.contains(KernelPoint::new(c(kx), c(ky), t)) {
                        count += 1;
                    }
                }
            }
        }
        let cell = if self.kind == BoxKind::Slab { h * h } else { h * h * h };
        count as f64 * cell
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        assert_eq!(ParabolicBox::full(0.5).volume(), 8.0 / 64.0);
        assert_eq!(ParabolicBox::past(0.5).volume(), 4.0 / 64.0);
        assert_eq!(ParabolicBox::slab(0.5).volume(), 4.0 / 16.0);
    }

    #[test]
    fn cell_counts_converge_at_first_order() {
        for b in [ParabolicBox::full(0.9), ParabolicBox::past(0.9), ParabolicBox::slab(0.9)] {
            let e1 = (b.cell_count_volume(1.0 / 32.0) - b.volume()).abs();
            let e2 = (b.cell_count_volume(1.0 / 128.0) - b.volume()).abs();
            assert!(e2 < e1 || e2 < 1e-12, "{b:?} {e1} {e2}");
            assert!(e2 / b.volume() < 0.05, "{b:?}");
        }
    }

    #[test]
    fn membership() {
        let b = ParabolicBox::past(0.5);
        assert!(b.contains(KernelPoint::new(0.1, 0.4, -0.2)));
        assert!(!b.contains(KernelPoint::new(0.1, 0.4, 0.1)));
        assert!(!b.contains(KernelPoint::new(0.2, 0.0, -0.1)));
        assert_eq!(b.lattice(3).len(), 27);
        assert_eq!(ParabolicBox::slab(0.5).lattice(3).len(), 9);
    }
}
