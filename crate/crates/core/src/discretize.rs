//! Interval partitions, conditional expectations, partition isometries and
//! cell-averaged kernel matrices: the pipeline that turns a bounded kernel on
//! a rectangle into a finite multiplier matrix.
//!
//! Row/column contract: for a kernel `φ(s, t)` discretized over an `s`-axis
//! partition `A_1..A_n` and a `t`-axis partition `B_1..B_m`, the produced
//! matrix has entry `(i, j) = avg over A_j × B_i` — rows indexed by `B_i`,
//! columns by `A_j`. This matches the orientation in which the matrix acts
//! as a Schur multiplier on `B(ℓ_p^n, ℓ_q^m)`.

use crate::exponent::Exponent;
use crate::matrix::Matrix;
use crate::{Error, Result};

/// An ordered list of pairwise disjoint half-open intervals `[l, r)` with
/// strictly positive lengths (the Lebesgue cell measures).
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    cells: Vec<(f64, f64)>,
}

impl Partition {
    pub fn new(cells: Vec<(f64, f64)>) -> Result<Partition> {
        if cells.is_empty() {
            return Err(Error::InvalidPartition("no cells".into()));
        }
        for &(l, r) in &cells {
            if !(l.is_finite() && r.is_finite() && l < r) {
                return Err(Error::InvalidPartition(format!(
                    "cell [{l}, {r}) is degenerate"
                )));
            }
        }
        let mut sorted = cells.clone();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in sorted.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(Error::InvalidPartition(format!(
                    "cells [{}, {}) and [{}, {}) overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Partition { cells })
    }

    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn measure(&self, k: usize) -> f64 {
        self.cells[k].1 - self.cells[k].0
    }

    pub fn measures(&self) -> Vec<f64> {
        self.cells.iter().map(|&(l, r)| r - l).collect()
    }

    /// Index of the cell of `self` containing `[l, r)` entirely, checked
    /// exactly on endpoints.
    fn containing_cell(&self, l: f64, r: f64) -> Option<usize> {
        self.cells.iter().position(|&(cl, cr)| cl <= l && r <= cr)
    }
}

/// `n` equal half-open cells covering `[a, b)`.
pub fn uniform_partition(a: f64, b: f64, n: usize) -> Result<Partition> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidPartition(format!(
            "degenerate interval [{a}, {b})"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidPartition("zero cells requested".into()));
    }
    let w = b - a;
    let edge = |k: usize| {
        if k == n {
            b
        } else {
            a + (k as f64 * w) / n as f64
        }
    };
    Partition::new((0..n).map(|k| (edge(k), edge(k + 1))).collect())
}

/// A function `Σ c_i χ_{cell_i}`, zero off the partition.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    pub partition: Partition,
    pub coefficients: Vec<f64>,
}

impl StepFunction {
    pub fn new(partition: Partition, coefficients: Vec<f64>) -> Result<StepFunction> {
        if partition.len() != coefficients.len() {
            return Err(Error::InvalidPartition(format!(
                "{} coefficients for {} cells",
                coefficients.len(),
                partition.len()
            )));
        }
        Ok(StepFunction {
            partition,
            coefficients,
        })
    }

    /// The `L^e` norm with respect to Lebesgue measure on the cells.
    pub fn lp_norm(&self, e: Exponent) -> f64 {
        match e {
            Exponent::Infinity => self
                .coefficients
                .iter()
                .fold(0.0f64, |acc, c| acc.max(c.abs())),
            Exponent::Finite(p) => {
                let s: f64 = self
                    .coefficients
                    .iter()
                    .zip(self.partition.measures())
                    .map(|(c, mu)| c.abs().powf(p) * mu)
                    .sum();
                s.powf(1.0 / p)
            }
        }
    }

    /// `∫ f` over one cell of a coarser partition (cells of `self` must nest).
    fn integral_over(&self, l: f64, r: f64) -> f64 {
        self.coefficients
            .iter()
            .zip(self.partition.cells())
            .filter(|(_, &(cl, cr))| l <= cl && cr <= r)
            .map(|(c, &(cl, cr))| c * (cr - cl))
            .sum()
    }

    /// `∫ f` over an arbitrary interval, by exact overlap lengths.
    fn integral_overlap(&self, l: f64, r: f64) -> f64 {
        self.coefficients
            .iter()
            .zip(self.partition.cells())
            .map(|(c, &(cl, cr))| {
                let lo = cl.max(l);
                let hi = cr.min(r);
                if hi > lo {
                    c * (hi - lo)
                } else {
                    0.0
                }
            })
            .sum()
    }
}

/// The cell-averaging projection onto step functions of `coarser`:
/// `f ↦ Σ_i (1/μ(A_i)) (∫_{A_i} f) χ_{A_i}`. Requires every cell of `f` to
/// be contained in a cell of `coarser` (checked exactly on endpoints).
/// The exponent names the `L^e` space the projection acts on; the averaging
/// formula itself does not depend on it.
pub fn conditional_expectation(
    f: &StepFunction,
    coarser: &Partition,
    _e: Exponent,
) -> Result<StepFunction> {
    for &(l, r) in f.partition.cells() {
        if coarser.containing_cell(l, r).is_none() {
            return Err(Error::NonNestedPartitions(format!(
                "cell [{l}, {r}) not contained in any coarse cell"
            )));
        }
    }
    let coefficients = coarser
        .cells()
        .iter()
        .map(|&(l, r)| f.integral_over(l, r) / (r - l))
        .collect();
    StepFunction::new(coarser.clone(), coefficients)
}

/// The isometry `Σ a_i χ_{A_i} ↦ (a_i μ(A_i)^{1/e})_i` onto `ℓ_e^n`, with the
/// convention `μ^{1/∞} = 1`.
pub fn partition_isometry(f: &StepFunction, e: Exponent) -> Vec<f64> {
    f.coefficients
        .iter()
        .zip(f.partition.measures())
        .map(|(a, mu)| match e {
            Exponent::Infinity => *a,
            Exponent::Finite(p) => a * mu.powf(1.0 / p),
        })
        .collect()
}

/// Inverse of [`partition_isometry`].
pub fn partition_isometry_inverse(
    v: &[f64],
    partition: &Partition,
    e: Exponent,
) -> Result<StepFunction> {
    if v.len() != partition.len() {
        return Err(Error::InvalidPartition(format!(
            "{} coordinates for {} cells",
            v.len(),
            partition.len()
        )));
    }
    let coefficients = v
        .iter()
        .zip(partition.measures())
        .map(|(x, mu)| match e {
            Exponent::Infinity => *x,
            Exponent::Finite(p) => x / mu.powf(1.0 / p),
        })
        .collect();
    StepFunction::new(partition.clone(), coefficients)
}

/// Half-open rectangle `[s0, s1) × [t0, t1)` in the `(s, t)` plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub s: (f64, f64),
    pub t: (f64, f64),
}

impl Rect {
    pub fn new(s: (f64, f64), t: (f64, f64)) -> Result<Rect> {
        if s.0 < s.1 && t.0 < t.1 {
            Ok(Rect { s, t })
        } else {
            Err(Error::InvalidPartition(format!(
                "degenerate rectangle [{}, {}) x [{}, {})",
                s.0, s.1, t.0, t.1
            )))
        }
    }

    pub fn square(a: f64, b: f64) -> Result<Rect> {
        Rect::new((a, b), (a, b))
    }
}

/// Kernel families the discretizer understands.
#[derive(Clone, Debug)]
pub enum KernelKind {
    /// `φ(s, t) = 1` when `s + t ≥ 0`, else `0`.
    SignStep,
    Constant(f64),
    /// `φ(s, t) = f(s) g(t)` for step functions `f`, `g`.
    Product(StepFunction, StepFunction),
    /// Piecewise constant on a grid: value `(i, j)` on `A0_j × B0_i`.
    Grid {
        values: Matrix,
        pa: Partition,
        pb: Partition,
    },
    /// `φ(s, t) = exp(−(s−t)² / (2σ²))`.
    Gaussian(f64),
}

/// A bounded kernel on a rectangle.
#[derive(Clone, Debug)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub domain: Rect,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, domain: Rect) -> KernelSpec {
        KernelSpec { kind, domain }
    }

    /// Pointwise evaluation (used by quadrature and tests).
    pub fn eval(&self, s: f64, t: f64) -> f64 {
        match &self.kind {
            KernelKind::SignStep => {
                if s + t >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            KernelKind::Constant(c) => *c,
            KernelKind::Product(f, g) => point_value(f, s) * point_value(g, t),
            KernelKind::Grid { values, pa, pb } => {
                let j = pa.cells().iter().position(|&(l, r)| l <= s && s < r);
                let i = pb.cells().iter().position(|&(l, r)| l <= t && t < r);
                match (i, j) {
                    (Some(i), Some(j)) => values.get(i, j),
                    _ => 0.0,
                }
            }
            KernelKind::Gaussian(sigma) => (-((s - t) * (s - t)) / (2.0 * sigma * sigma)).exp(),
        }
    }
}

fn point_value(f: &StepFunction, x: f64) -> f64 {
    f.partition
        .cells()
        .iter()
        .position(|&(l, r)| l <= x && x < r)
        .map_or(0.0, |k| f.coefficients[k])
}

/// Quadrature order for kernels without closed-form cell integrals.
#[derive(Clone, Copy, Debug)]
pub struct QuadConfig {
    pub order: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { order: 16 }
    }
}

/// Area of `{(s, t) ∈ [s0,s1) × [t0,t1) : s + t ≥ 0}` by exact clipping of
/// the half-plane against the rectangle.
fn halfplane_area(s0: f64, s1: f64, t0: f64, t1: f64) -> f64 {
    // integrand over s: len{t ∈ [t0,t1): t ≥ -s} = clamp(t1 + s, 0, t1 - t0),
    // piecewise linear with breakpoints s = -t1 and s = -t0
    let mut breaks = vec![s0, s1];
    for b in [-t1, -t0] {
        if b > s0 && b < s1 {
            breaks.push(b);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = t1 - t0;
    let mut area = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let len = (t1 + mid).clamp(0.0, h);
        area += len * (b - a);
    }
    area
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P_n'(x) by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[k] = x;
        weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Cell-averaged kernel matrix: entry `(i, j)` is the mean of `φ` over
/// `A_j × B_i`. Closed-form integration for the sign-step, constant, product
/// and grid kinds; tensor Gauss–Legendre quadrature for the Gaussian.
pub fn discretize_kernel(
    k: &KernelSpec,
    pa: &Partition,
    pb: &Partition,
    quad: QuadConfig,
) -> Result<Matrix> {
    let dom = k.domain;
    for &(l, r) in pa.cells() {
        if l < dom.s.0 || r > dom.s.1 {
            return Err(Error::OutOfDomain(format!(
                "s-cell [{l}, {r}) outside [{}, {})",
                dom.s.0, dom.s.1
            )));
        }
    }
    for &(l, r) in pb.cells() {
        if l < dom.t.0 || r > dom.t.1 {
            return Err(Error::OutOfDomain(format!(
                "t-cell [{l}, {r}) outside [{}, {})",
                dom.t.0, dom.t.1
            )));
        }
    }

    let m = pb.len();
    let n = pa.len();
    let mut out = Matrix::zeros(m, n);
    match &k.kind {
        KernelKind::SignStep => {
            for i in 0..m {
                let (t0, t1) = pb.cells()[i];
                for j in 0..n {
                    let (s0, s1) = pa.cells()[j];
                    let avg = halfplane_area(s0, s1, t0, t1) / ((s1 - s0) * (t1 - t0));
                    out.set(i, j, avg);
                }
            }
        }
        KernelKind::Constant(c) => {
            for i in 0..m {
                for j in 0..n {
                    out.set(i, j, *c);
                }
            }
        }
        KernelKind::Product(f, g) => {
            let favg: Vec<f64> = pa
                .cells()
                .iter()
                .map(|&(l, r)| f.integral_overlap(l, r) / (r - l))
                .collect();
            let gavg: Vec<f64> = pb
                .cells()
                .iter()
                .map(|&(l, r)| g.integral_overlap(l, r) / (r - l))
                .collect();
            for i in 0..m {
                for j in 0..n {
                    out.set(i, j, favg[j] * gavg[i]);
                }
            }
        }
        KernelKind::Grid {
            values,
            pa: pa0,
            pb: pb0,
        } => {
            for i in 0..m {
                let (t0, t1) = pb.cells()[i];
                for j in 0..n {
                    let (s0, s1) = pa.cells()[j];
                    let mut acc = 0.0;
                    for (i0, &(bt0, bt1)) in pb0.cells().iter().enumerate() {
                        let t_ov = (bt1.min(t1) - bt0.max(t0)).max(0.0);
                        if t_ov == 0.0 {
                            continue;
                        }
                        for (j0, &(as0, as1)) in pa0.cells().iter().enumerate() {
                            let s_ov = (as1.min(s1) - as0.max(s0)).max(0.0);
                            if s_ov > 0.0 {
                                acc += values.get(i0, j0) * s_ov * t_ov;
                            }
                        }
                    }
                    out.set(i, j, acc / ((s1 - s0) * (t1 - t0)));
                }
            }
        }
        KernelKind::Gaussian(_) => {
            let (nodes, weights) = gauss_legendre(quad.order.max(2));
            for i in 0..m {
                let (t0, t1) = pb.cells()[i];
                for j in 0..n {
                    let (s0, s1) = pa.cells()[j];
                    let mut acc = 0.0;
                    for (xs, ws) in nodes.iter().zip(&weights) {
                        let s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * xs;
                        for (xt, wt) in nodes.iter().zip(&weights) {
                            let t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * xt;
                            acc += ws * wt * k.eval(s, t);
                        }
                    }
                    // GL weights integrate to 4 over [-1,1]^2
                    out.set(i, j, acc / 4.0);
                }
            }
        }
    }
    Ok(out)
}

/// Contiguous merge pattern for [`coarsen_matrix`]: block sizes along rows
/// (cells of the `t`-axis partition) and columns (`s`-axis).
#[derive(Clone, Debug)]
pub struct Grouping {
    pub row_sizes: Vec<usize>,
    pub col_sizes: Vec<usize>,
}

impl Grouping {
    fn validate(sizes: &[usize], total: usize, what: &str) -> Result<()> {
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidGrouping(format!("{what}: zero-size block")));
        }
        let sum: usize = sizes.iter().sum();
        if sum != total {
            return Err(Error::InvalidGrouping(format!(
                "{what}: blocks cover {sum} of {total} cells"
            )));
        }
        Ok(())
    }
}

/// Merge contiguous cells of the fine partitions, replacing each block of
/// entries by its measure-weighted average. Consistent with discretizing the
/// corresponding step kernel directly on the merged partitions.
pub fn coarsen_matrix(
    phi: &Matrix,
    pa_fine: &Partition,
    pb_fine: &Partition,
    grouping: &Grouping,
) -> Result<Matrix> {
    if phi.rows() != pb_fine.len() || phi.cols() != pa_fine.len() {
        return Err(Error::InvalidGrouping(format!(
            "matrix {}x{} does not match partitions {}x{}",
            phi.rows(),
            phi.cols(),
            pb_fine.len(),
            pa_fine.len()
        )));
    }
    Grouping::validate(&grouping.row_sizes, phi.rows(), "rows")?;
    Grouping::validate(&grouping.col_sizes, phi.cols(), "cols")?;

    let mu_b = pb_fine.measures();
    let mu_a = pa_fine.measures();
    let mut out = Matrix::zeros(grouping.row_sizes.len(), grouping.col_sizes.len());
    let mut i0 = 0;
    for (bi, &rb) in grouping.row_sizes.iter().enumerate() {
        let mut j0 = 0;
        for (bj, &cb) in grouping.col_sizes.iter().enumerate() {
            let mut num = 0.0;
            let mut den = 0.0;
            for i in i0..i0 + rb {
                for j in j0..j0 + cb {
                    let w = mu_b[i] * mu_a[j];
                    num += phi.get(i, j) * w;
                    den += w;
                }
            }
            out.set(bi, bj, num / den);
            j0 += cb;
        }
        i0 += rb;
    }
    Ok(out)
}

/// Merge the fine partition itself according to contiguous block sizes.
pub fn merge_partition(fine: &Partition, sizes: &[usize]) -> Result<Partition> {
    Grouping::validate(sizes, fine.len(), "cells")?;
    let mut cells = Vec::with_capacity(sizes.len());
    let mut k = 0;
    for &s in sizes {
        let l = fine.cells()[k].0;
        let r = fine.cells()[k + s - 1].1;
        for w in fine.cells()[k..k + s].windows(2) {
            if w[0].1 != w[1].0 {
                return Err(Error::InvalidGrouping(format!(
                    "cells [{}, {}) and [{}, {}) are not adjacent",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        cells.push((l, r));
        k += s;
    }
    Partition::new(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::lp_norm;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_cells() {
        let p = uniform_partition(0.0, 1.0, 2).unwrap();
        assert_eq!(p.cells(), &[(0.0, 0.5), (0.5, 1.0)]);
        let p1 = uniform_partition(-1.0, 1.0, 1).unwrap();
        assert_abs_diff_eq!(p1.measure(0), 2.0);
        let p4 = uniform_partition(0.0, 1.0, 4).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(p4.measure(k), 0.25);
        }
        assert!(uniform_partition(1.0, 1.0, 2).is_err());
    }

    #[test]
    fn refinement_edges_are_exact() {
        let coarse = uniform_partition(-1.0, 1.0, 4).unwrap();
        let fine = uniform_partition(-1.0, 1.0, 8).unwrap();
        for (k, &(l, r)) in coarse.cells().iter().enumerate() {
            assert_eq!(l, fine.cells()[2 * k].0);
            assert_eq!(r, fine.cells()[2 * k + 1].1);
        }
    }

    #[test]
    fn conditional_expectation_averages() {
        let fine = uniform_partition(0.0, 1.0, 1).unwrap();
        let f = StepFunction::new(fine, vec![1.0]).unwrap();
        let coarse = uniform_partition(0.0, 2.0, 1).unwrap();
        let pf = conditional_expectation(&f, &coarse, Exponent::TWO).unwrap();
        assert_abs_diff_eq!(pf.coefficients[0], 0.5);
    }

    #[test]
    fn conditional_expectation_idempotent_and_cancelling() {
        let p = uniform_partition(0.0, 1.0, 2).unwrap();
        let f = StepFunction::new(p.clone(), vec![2.0, -3.0]).unwrap();
        let same = conditional_expectation(&f, &p, Exponent::ONE).unwrap();
        assert_eq!(same.coefficients, f.coefficients);
        let coarse = uniform_partition(0.0, 1.0, 1).unwrap();
        let g = StepFunction::new(p, vec![1.0, -1.0]).unwrap();
        let pg = conditional_expectation(&g, &coarse, Exponent::ONE).unwrap();
        assert_abs_diff_eq!(pg.coefficients[0], 0.0);
    }

    #[test]
    fn conditional_expectation_rejects_non_nested() {
        let f_part = uniform_partition(0.0, 3.0, 3).unwrap();
        let f = StepFunction::new(f_part, vec![1.0, 1.0, 1.0]).unwrap();
        let coarse = uniform_partition(0.0, 3.0, 2).unwrap();
        assert!(matches!(
            conditional_expectation(&f, &coarse, Exponent::ONE),
            Err(Error::NonNestedPartitions(_))
        ));
    }

    #[test]
    fn isometry_values_and_roundtrip() {
        let p = Partition::new(vec![(0.0, 4.0), (4.0, 5.0)]).unwrap();
        let f = StepFunction::new(p.clone(), vec![1.0, 0.0]).unwrap();
        let v = partition_isometry(&f, Exponent::TWO);
        assert_abs_diff_eq!(v[0], 2.0);
        assert_abs_diff_eq!(v[1], 0.0);
        let vinf = partition_isometry(&f, Exponent::INF);
        assert_eq!(vinf, f.coefficients);
        let back = partition_isometry_inverse(&v, &p, Exponent::TWO).unwrap();
        for (a, b) in back.coefficients.iter().zip(&f.coefficients) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn isometry_preserves_norm() {
        let p = Partition::new(vec![(0.0, 0.5), (0.5, 2.0), (2.0, 3.5)]).unwrap();
        let f = StepFunction::new(p, vec![1.5, -0.5, 2.0]).unwrap();
        for e in [1.0, 1.5, 2.0, 3.0] {
            let ex = Exponent::new(e).unwrap();
            let v = partition_isometry(&f, ex);
            assert_abs_diff_eq!(lp_norm(&v, ex), f.lp_norm(ex), epsilon = 1e-12);
        }
        let v = partition_isometry(&f, Exponent::INF);
        assert_abs_diff_eq!(lp_norm(&v, Exponent::INF), f.lp_norm(Exponent::INF));
    }

    #[test]
    fn signstep_two_by_two() {
        let spec = KernelSpec::new(KernelKind::SignStep, Rect::square(-1.0, 1.0).unwrap());
        let pa = uniform_partition(-1.0, 1.0, 2).unwrap();
        let pb = uniform_partition(-1.0, 1.0, 2).unwrap();
        let m = discretize_kernel(&spec, &pa, &pb, QuadConfig::default()).unwrap();
        assert_abs_diff_eq!(m.get(0, 0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.get(0, 1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.get(1, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.get(1, 1), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn constant_and_product_kernels() {
        let dom = Rect::square(0.0, 1.0).unwrap();
        let pa = uniform_partition(0.0, 1.0, 3).unwrap();
        let pb = uniform_partition(0.0, 1.0, 2).unwrap();
        let c = discretize_kernel(
            &KernelSpec::new(KernelKind::Constant(-2.5), dom),
            &pa,
            &pb,
            QuadConfig::default(),
        )
        .unwrap();
        assert!(c.data().iter().all(|&v| v == -2.5));

        let fp = uniform_partition(0.0, 1.0, 2).unwrap();
        let f = StepFunction::new(fp.clone(), vec![1.0, 3.0]).unwrap();
        let g = StepFunction::new(fp, vec![2.0, 0.0]).unwrap();
        let prod = discretize_kernel(
            &KernelSpec::new(KernelKind::Product(f, g), dom),
            &pa,
            &pb,
            QuadConfig::default(),
        )
        .unwrap();
        // column averages of f on thirds: [1, 2, 3]; row averages of g on halves: [2, 0]
        assert_abs_diff_eq!(prod.get(0, 0), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(prod.get(0, 1), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(prod.get(0, 2), 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(prod.get(1, 2), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn domain_checked() {
        let spec = KernelSpec::new(KernelKind::SignStep, Rect::square(-1.0, 1.0).unwrap());
        let pa = uniform_partition(-2.0, 1.0, 2).unwrap();
        let pb = uniform_partition(-1.0, 1.0, 2).unwrap();
        assert!(matches!(
            discretize_kernel(&spec, &pa, &pb, QuadConfig::default()),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn gaussian_entries_bounded_and_accurate() {
        let dom = Rect::square(-1.0, 1.0).unwrap();
        let spec = KernelSpec::new(KernelKind::Gaussian(0.7), dom);
        let pa = uniform_partition(-1.0, 1.0, 2).unwrap();
        let pb = uniform_partition(-1.0, 1.0, 2).unwrap();
        let m = discretize_kernel(&spec, &pa, &pb, QuadConfig::default()).unwrap();
        assert!(m.data().iter().all(|&v| v > 0.0 && v <= 1.0));
        assert!(m.get(0, 0) > m.get(0, 1));
        // cross-check one entry against a fine Riemann sum
        let (s0, s1) = pa.cells()[1];
        let (t0, t1) = pb.cells()[0];
        let n = 400;
        let mut acc = 0.0;
        for a in 0..n {
            let s = s0 + (a as f64 + 0.5) * (s1 - s0) / n as f64;
            for b in 0..n {
                let t = t0 + (b as f64 + 0.5) * (t1 - t0) / n as f64;
                acc += spec.eval(s, t);
            }
        }
        acc /= (n * n) as f64;
        assert_abs_diff_eq!(m.get(0, 1), acc, epsilon = 1e-6);
    }

    #[test]
    fn coarsen_identity_and_full_merge() {
        let pa = uniform_partition(0.0, 1.0, 2).unwrap();
        let pb = uniform_partition(0.0, 1.0, 2).unwrap();
        let phi = Matrix::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let id = coarsen_matrix(
            &phi,
            &pa,
            &pb,
            &Grouping {
                row_sizes: vec![1, 1],
                col_sizes: vec![1, 1],
            },
        )
        .unwrap();
        assert_eq!(id, phi);
        let all = coarsen_matrix(
            &phi,
            &pa,
            &pb,
            &Grouping {
                row_sizes: vec![2],
                col_sizes: vec![2],
            },
        )
        .unwrap();
        assert_abs_diff_eq!(all.get(0, 0), 2.5);
    }

    #[test]
    fn coarsen_matches_direct_discretization() {
        let spec = KernelSpec::new(KernelKind::SignStep, Rect::square(-1.0, 1.0).unwrap());
        let fine_a = uniform_partition(-1.0, 1.0, 4).unwrap();
        let fine_b = uniform_partition(-1.0, 1.0, 4).unwrap();
        let fine = discretize_kernel(&spec, &fine_a, &fine_b, QuadConfig::default()).unwrap();
        let g = Grouping {
            row_sizes: vec![2, 2],
            col_sizes: vec![2, 2],
        };
        let merged = coarsen_matrix(&fine, &fine_a, &fine_b, &g).unwrap();
        let coarse_a = uniform_partition(-1.0, 1.0, 2).unwrap();
        let coarse_b = uniform_partition(-1.0, 1.0, 2).unwrap();
        let direct =
            discretize_kernel(&spec, &coarse_a, &coarse_b, QuadConfig::default()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(merged.get(i, j), direct.get(i, j), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn invalid_grouping_rejected() {
        let pa = uniform_partition(0.0, 1.0, 2).unwrap();
        let phi = Matrix::zeros(2, 2);
        let bad = Grouping {
            row_sizes: vec![3],
            col_sizes: vec![2],
        };
        assert!(matches!(
            coarsen_matrix(&phi, &pa, &pa, &bad),
            Err(Error::InvalidGrouping(_))
        ));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let integral: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(6)).sum();
        assert_abs_diff_eq!(integral, 2.0 / 7.0, epsilon = 1e-13);
        let total: f64 = w.iter().sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-13);
    }
}
