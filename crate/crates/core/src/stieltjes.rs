//! Riemann–Stieltjes sums against a step CDF, the difference operators on
//! selection points, and the summation-by-parts identities that relate them.
//!
//! Blocks are half-open, `(x_{k−1}, x_k] × (y_{l−1}, y_l]`, except that the
//! first row and column also contain their lower edge so that mass on the
//! axes is not lost. Block indices are 1-based: block `(k, l)` with
//! `1 ≤ k ≤ n`, `1 ≤ l ≤ m` for `n + 1` x-cuts and `m + 1` y-cuts.
//!
//! Selections are product-structured: every block in column `k` uses the
//! same x-coordinate and every block in row `l` the same y-coordinate.

use serde::{Deserialize, Serialize};

use crate::distribution::{BivariateStepCdf, MergedGrid, SampleSet};
use crate::error::{Error, Result};
use crate::testfuncs::TestFunction;

/// Anything that can be evaluated on the unit square.
pub trait Integrand {
    fn value(&self, x: f64, y: f64) -> f64;
}

impl Integrand for TestFunction {
    fn value(&self, x: f64, y: f64) -> f64 {
        self.eval(x, y)
    }
}

impl<F: Fn(f64, f64) -> f64> Integrand for F {
    fn value(&self, x: f64, y: f64) -> f64 {
        self(x, y)
    }
}

/// Rectangular partition of `[0, 1]²` with one selection point per block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    xcuts: Vec<f64>,
    ycuts: Vec<f64>,
    xsel: Vec<f64>,
    ysel: Vec<f64>,
}

fn check_cuts(name: &str, cuts: &[f64]) -> Result<()> {
    if cuts.len() < 2 || cuts[0] != 0.0 || cuts[cuts.len() - 1] != 1.0 {
        return Err(Error::MalformedPartition(format!(
            "{name} must run from 0 to 1 with at least two entries"
        )));
    }
    if cuts.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::MalformedPartition(format!(
            "{name} are not strictly increasing"
        )));
    }
    Ok(())
}

fn check_selection(name: &str, cuts: &[f64], sel: &[f64]) -> Result<()> {
    if sel.len() + 1 != cuts.len() {
        return Err(Error::MalformedPartition(format!(
            "{} {name} for {} blocks",
            sel.len(),
            cuts.len() - 1
        )));
    }
    for (k, &s) in sel.iter().enumerate() {
        if !(cuts[k] <= s && s <= cuts[k + 1]) {
            return Err(Error::MalformedPartition(format!(
                "{name} {s} lies outside [{}, {}]",
                cuts[k],
                cuts[k + 1]
            )));
        }
    }
    Ok(())
}

fn with_origin(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len() + 1);
    if v.first() != Some(&0.0) {
        out.push(0.0);
    }
    out.extend_from_slice(v);
    out
}

impl Partition {
    /// `xsel[k−1]` is the x-coordinate selected in column `k`, `ysel[l−1]`
    /// the y-coordinate selected in row `l`.
    pub fn new(xcuts: Vec<f64>, ycuts: Vec<f64>, xsel: Vec<f64>, ysel: Vec<f64>) -> Result<Self> {
        check_cuts("x-cuts", &xcuts)?;
        check_cuts("y-cuts", &ycuts)?;
        check_selection("x-selections", &xcuts, &xsel)?;
        check_selection("y-selections", &ycuts, &ysel)?;
        Ok(Partition {
            xcuts,
            ycuts,
            xsel,
            ysel,
        })
    }

    /// Selections at the upper-right corner of every block.
    pub fn upper_right(xcuts: Vec<f64>, ycuts: Vec<f64>) -> Result<Self> {
        let xsel = xcuts.iter().skip(1).copied().collect();
        let ysel = ycuts.iter().skip(1).copied().collect();
        Partition::new(xcuts, ycuts, xsel, ysel)
    }

    /// `n × m` equal blocks with upper-right selections.
    pub fn uniform(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::MalformedPartition("zero blocks".into()));
        }
        let cuts = |k: usize| (0..=k).map(|i| i as f64 / k as f64).collect();
        Partition::upper_right(cuts(n), cuts(m))
    }

    /// Cuts at every atom coordinate of `cdf`, upper-right selections.
    pub fn aligned(cdf: &BivariateStepCdf) -> Self {
        Partition::upper_right(with_origin(cdf.xs()), with_origin(cdf.ys()))
            .expect("grid coordinates are sorted and end at 1")
    }

    /// Cuts on a merged grid, upper-right selections.
    pub fn from_grid(grid: &MergedGrid) -> Self {
        Partition::upper_right(with_origin(&grid.xs), with_origin(&grid.ys))
            .expect("grid coordinates are sorted and end at 1")
    }

    pub fn xcuts(&self) -> &[f64] {
        &self.xcuts
    }

    pub fn ycuts(&self) -> &[f64] {
        &self.ycuts
    }

    /// Number of columns `n`.
    pub fn n(&self) -> usize {
        self.xsel.len()
    }

    /// Number of rows `m`.
    pub fn m(&self) -> usize {
        self.ysel.len()
    }

    /// Selection point of block `(k, l)`, 1-based.
    pub fn selection(&self, k: usize, l: usize) -> (f64, f64) {
        (self.xsel[k - 1], self.ysel[l - 1])
    }

    /// Largest block side.
    pub fn diameter(&self) -> f64 {
        let side = |c: &[f64]| c.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        side(&self.xcuts).max(side(&self.ycuts))
    }
}

/// Measures whose atoms can be enumerated.
pub trait Atomic {
    /// `(x, y, weight)` triples.
    fn atom_list(&self) -> Vec<(f64, f64, f64)>;
}

impl Atomic for SampleSet {
    fn atom_list(&self) -> Vec<(f64, f64, f64)> {
        self.atoms().collect()
    }
}

impl Atomic for BivariateStepCdf {
    fn atom_list(&self) -> Vec<(f64, f64, f64)> {
        self.unit_atoms().collect()
    }
}

/// `E φ(X, Y)` for a purely atomic measure. A [`SampleSet`] is evaluated at
/// its raw points, a [`BivariateStepCdf`] at its normalized atoms.
pub fn exact_expectation<P: Integrand + ?Sized, A: Atomic + ?Sized>(phi: &P, s: &A) -> f64 {
    s.atom_list().iter().map(|&(x, y, w)| w * phi.value(x, y)).sum()
}

/// Selection values `φ_{k,l}` for `k ∈ 1..=n`, `l ∈ 1..=m`, padded with a
/// zero row and column at index 0 so indices stay 1-based.
struct PhiTable {
    m: usize,
    v: Vec<f64>,
}

impl PhiTable {
    fn new<P: Integrand + ?Sized>(phi: &P, p: &Partition) -> Self {
        let (n, m) = (p.n(), p.m());
        let mut v = vec![0.0; (n + 1) * (m + 1)];
        for k in 1..=n {
            for l in 1..=m {
                let (x, y) = p.selection(k, l);
                v[k * (m + 1) + l] = phi.value(x, y);
            }
        }
        PhiTable { m, v }
    }

    fn at(&self, k: usize, l: usize) -> f64 {
        self.v[k * (self.m + 1) + l]
    }

    fn delta(&self, i: usize, j: usize) -> f64 {
        self.at(i, j) + self.at(i + 1, j + 1) - self.at(i, j + 1) - self.at(i + 1, j)
    }

    /// `φ_{i,l} − φ_{i+1,l}`.
    fn dx(&self, i: usize, l: usize) -> f64 {
        self.at(i, l) - self.at(i + 1, l)
    }

    /// `φ_{k,j} − φ_{k,j+1}`.
    fn dy(&self, k: usize, j: usize) -> f64 {
        self.at(k, j) - self.at(k, j + 1)
    }
}

/// `F` at every cut pair, with `F(x_0, ·) = F(·, y_0) = 0`.
fn cut_values(cdf: &BivariateStepCdf, p: &Partition) -> Vec<f64> {
    let m = p.m();
    let mut g = vec![0.0; (p.n() + 1) * (m + 1)];
    for (k, &x) in p.xcuts.iter().enumerate().skip(1) {
        for (l, &y) in p.ycuts.iter().enumerate().skip(1) {
            g[k * (m + 1) + l] = cdf.eval_unchecked(x, y);
        }
    }
    g
}

/// `Σ φ(selection) · σ(block)` over all blocks.
pub fn partition_sum<P: Integrand + ?Sized>(phi: &P, cdf: &BivariateStepCdf, p: &Partition) -> f64 {
    let (n, m) = (p.n(), p.m());
    let g = cut_values(cdf, p);
    let at = |k: usize, l: usize| g[k * (m + 1) + l];
    let mut sum = 0.0;
    for k in 1..=n {
        for l in 1..=m {
            let mass = at(k, l) + at(k - 1, l - 1) - at(k - 1, l) - at(k, l - 1);
            let (x, y) = p.selection(k, l);
            sum += phi.value(x, y) * mass;
        }
    }
    sum
}

fn out_of_range(what: &str, idx: usize, lo: usize, hi: usize) -> Error {
    Error::IndexOutOfRange(format!("{what} {idx} not in {lo}..={hi}"))
}

/// Mixed difference over the four blocks meeting at the cut `(x_i, y_j)`:
/// `φ_{i,j} + φ_{i+1,j+1} − φ_{i,j+1} − φ_{i+1,j}`, for `1 ≤ i < n`, `1 ≤ j < m`.
pub fn delta_interior<P: Integrand + ?Sized>(phi: &P, p: &Partition, i: usize, j: usize) -> Result<f64> {
    if i == 0 || i >= p.n() {
        return Err(out_of_range("i", i, 1, p.n().saturating_sub(1)));
    }
    if j == 0 || j >= p.m() {
        return Err(out_of_range("j", j, 1, p.m().saturating_sub(1)));
    }
    let at = |k, l| {
        let (x, y) = p.selection(k, l);
        phi.value(x, y)
    };
    Ok(at(i, j) + at(i + 1, j + 1) - at(i, j + 1) - at(i + 1, j))
}

/// `δ_{i,m} φ = φ_{i,m} − φ_{i+1,m}` along the top row, `1 ≤ i < n`.
pub fn delta_border_x<P: Integrand + ?Sized>(phi: &P, p: &Partition, i: usize) -> Result<f64> {
    if i == 0 || i >= p.n() {
        return Err(out_of_range("i", i, 1, p.n().saturating_sub(1)));
    }
    let (x0, y) = p.selection(i, p.m());
    let (x1, _) = p.selection(i + 1, p.m());
    Ok(phi.value(x0, y) - phi.value(x1, y))
}

/// `δ_{n,j} φ = φ_{n,j} − φ_{n,j+1}` along the right column, `1 ≤ j < m`.
pub fn delta_border_y<P: Integrand + ?Sized>(phi: &P, p: &Partition, j: usize) -> Result<f64> {
    if j == 0 || j >= p.m() {
        return Err(out_of_range("j", j, 1, p.m().saturating_sub(1)));
    }
    let (x, y0) = p.selection(p.n(), j);
    let (_, y1) = p.selection(p.n(), j + 1);
    Ok(phi.value(x, y0) - phi.value(x, y1))
}

/// Partition sum split by summation by parts into interior, top-row,
/// right-column and corner contributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumDecomposition {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub corner: f64,
    pub total: f64,
}

/// `A = Σ F(x_i, y_j) Δ_ij φ`, `B = Σ F(x_i, 1) δ_{i,m} φ`,
/// `C = Σ F(1, y_j) δ_{n,j} φ`, `corner = F(1, 1) φ_{n,m}`.
pub fn decompose_sum<P: Integrand + ?Sized>(
    phi: &P,
    cdf: &BivariateStepCdf,
    p: &Partition,
) -> SumDecomposition {
    let (n, m) = (p.n(), p.m());
    let t = PhiTable::new(phi, p);
    let g = cut_values(cdf, p);
    let at = |k: usize, l: usize| g[k * (m + 1) + l];
    let mut a = 0.0;
    for i in 1..n {
        for j in 1..m {
            a += at(i, j) * t.delta(i, j);
        }
    }
    let b: f64 = (1..n).map(|i| at(i, m) * t.dx(i, m)).sum();
    let c: f64 = (1..m).map(|j| at(n, j) * t.dy(n, j)).sum();
    let corner = at(n, m) * t.at(n, m);
    SumDecomposition {
        a,
        b,
        c,
        corner,
        total: a + b + c + corner,
    }
}

/// The same sum rewritten through `K = F^X + F^Y − F` with first-row and
/// first-column border terms.
pub fn supermodular_form<P: Integrand + ?Sized>(phi: &P, cdf: &BivariateStepCdf, p: &Partition) -> f64 {
    let (n, m) = (p.n(), p.m());
    let t = PhiTable::new(phi, p);
    let g = cut_values(cdf, p);
    let at = |k: usize, l: usize| g[k * (m + 1) + l];
    let mut interior = 0.0;
    for i in 1..n {
        for j in 1..m {
            let k = at(i, m) + at(n, j) - at(i, j);
            interior -= k * t.delta(i, j);
        }
    }
    let row: f64 = (1..n).map(|i| at(i, m) * t.dx(i, 1)).sum();
    let col: f64 = (1..m).map(|j| at(n, j) * t.dy(1, j)).sum();
    interior + row + col + at(n, m) * t.at(n, m)
}

/// Axis of a telescoping identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// `δ_{n,j} = δ_{1,j} − Σ_i Δ_ij`, indexed by `j`.
    X,
    /// `δ_{i,m} = δ_{i,1} − Σ_j Δ_ij`, indexed by `i`.
    Y,
}

/// Both sides of a telescoping identity, each evaluated directly.
pub fn telescope_check<P: Integrand + ?Sized>(
    phi: &P,
    p: &Partition,
    axis: Axis,
    index: usize,
) -> Result<(f64, f64)> {
    let (n, m) = (p.n(), p.m());
    let t = PhiTable::new(phi, p);
    match axis {
        Axis::X => {
            if index == 0 || index >= m {
                return Err(out_of_range("j", index, 1, m.saturating_sub(1)));
            }
            let j = index;
            let sum: f64 = (1..n).map(|i| t.delta(i, j)).sum();
            Ok((t.dy(n, j), t.dy(1, j) - sum))
        }
        Axis::Y => {
            if index == 0 || index >= n {
                return Err(out_of_range("i", index, 1, n.saturating_sub(1)));
            }
            let i = index;
            let sum: f64 = (1..m).map(|j| t.delta(i, j)).sum();
            Ok((t.dx(i, m), t.dx(i, 1) - sum))
        }
    }
}
