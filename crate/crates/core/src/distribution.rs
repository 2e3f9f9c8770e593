//! Discrete bivariate distributions as right-continuous step CDFs on a
//! shared normalized frame.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Tolerance used when validating that normalized weights sum to one.
const MASS_TOL: f64 = 1e-12;

/// A weighted point cloud in the plane, in source units.
///
/// Construction merges duplicate points (summing their weights) and
/// renormalizes the weights to sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    points: Vec<(f64, f64)>,
    weights: Vec<f64>,
}

impl SampleSet {
    pub fn new(points: Vec<(f64, f64)>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return invalid("sample set is empty");
        }
        if points.len() != weights.len() {
            return invalid(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            ));
        }
        if let Some(p) = points.iter().find(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return invalid(format!("non-finite coordinate {p:?}"));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return invalid(format!("weight {w} is negative or not finite"));
        }

        // Merge duplicates, keeping first-appearance order. -0.0 and 0.0 are the same point.
        let key = |v: f64| (v + 0.0).to_bits();
        let mut index: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
        let mut merged_pts = Vec::with_capacity(points.len());
        let mut merged_w: Vec<f64> = Vec::with_capacity(points.len());
        for (&(x, y), &w) in points.iter().zip(&weights) {
            match index.get(&(key(x), key(y))) {
                Some(&k) => merged_w[k] += w,
                None => {
                    index.insert((key(x), key(y)), merged_pts.len());
                    merged_pts.push((x + 0.0, y + 0.0));
                    merged_w.push(w);
                }
            }
        }

        let total: f64 = merged_w.iter().sum();
        if !(total > 0.0) {
            return invalid("all weights are zero");
        }
        for w in &mut merged_w {
            *w /= total;
        }
        Ok(SampleSet {
            points: merged_pts,
            weights: merged_w,
        })
    }

    /// Equal weights on every point.
    pub fn uniform(points: Vec<(f64, f64)>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0; n])
    }

    /// Builds a set from `(x, y, weight)` triples.
    pub fn from_atoms(atoms: &[(f64, f64, f64)]) -> Result<Self> {
        let (points, weights) = atoms.iter().map(|&(x, y, w)| ((x, y), w)).unzip();
        Self::new(points, weights)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(x, y, weight)` triples.
    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&(x, y), &w)| (x, y, w))
    }
}

/// Joint bounding box of one or more sample sets, with an affine map per
/// axis onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommonFrame {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl CommonFrame {
    pub fn unit() -> Self {
        CommonFrame {
            x_lo: 0.0,
            x_hi: 1.0,
            y_lo: 0.0,
            y_hi: 1.0,
        }
    }

    /// Frame for any number of sample sets.
    ///
    /// If every point already lies in the unit square the frame is the unit
    /// square itself, so normalized data passes through unchanged. A
    /// degenerate axis is widened by `max(1, |lo|)` on each side.
    pub fn enclosing<'a, I>(sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a SampleSet>,
    {
        let mut x_lo = f64::INFINITY;
        let mut x_hi = f64::NEG_INFINITY;
        let mut y_lo = f64::INFINITY;
        let mut y_hi = f64::NEG_INFINITY;
        let mut any = false;
        for s in sets {
            if s.is_empty() {
                return invalid("sample set is empty");
            }
            for &(x, y) in s.points() {
                any = true;
                x_lo = x_lo.min(x);
                x_hi = x_hi.max(x);
                y_lo = y_lo.min(y);
                y_hi = y_hi.max(y);
            }
        }
        if !any {
            return invalid("no sample sets given");
        }
        let inside_unit = x_lo >= 0.0 && x_hi <= 1.0 && y_lo >= 0.0 && y_hi <= 1.0;
        if inside_unit {
            return Ok(Self::unit());
        }
        let widen = |lo: f64, hi: f64| {
            if lo < hi {
                (lo, hi)
            } else {
                let w = lo.abs().max(1.0);
                (lo - w, hi + w)
            }
        };
        let (x_lo, x_hi) = widen(x_lo, x_hi);
        let (y_lo, y_hi) = widen(y_lo, y_hi);
        Ok(CommonFrame {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        })
    }

    pub fn map_x(&self, x: f64) -> f64 {
        (x - self.x_lo) / (self.x_hi - self.x_lo)
    }

    pub fn map_y(&self, y: f64) -> f64 {
        (y - self.y_lo) / (self.y_hi - self.y_lo)
    }

    pub fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (self.map_x(x), self.map_y(y))
    }

    /// Inverse of [`CommonFrame::map`].
    pub fn unmap(&self, (u, v): (f64, f64)) -> (f64, f64) {
        (
            self.x_lo + u * (self.x_hi - self.x_lo),
            self.y_lo + v * (self.y_hi - self.y_lo),
        )
    }
}

/// Frame shared by two sample sets: their joint bounding box.
pub fn build_common_frame(a: &SampleSet, b: &SampleSet) -> Result<CommonFrame> {
    CommonFrame::enclosing([a, b])
}

/// A point mass of the step CDF, addressed by grid indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAtom {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Right-continuous step CDF of a purely atomic distribution on `[0, 1]²`.
///
/// `xs` and `ys` are the distinct atom coordinates plus the closing
/// coordinate 1. `F[i][j] = P(X ≤ xs[i], Y ≤ ys[j])`; the marginals are read
/// from the last row and column of the same storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivariateStepCdf {
    frame: CommonFrame,
    xs: Vec<f64>,
    ys: Vec<f64>,
    values: Vec<f64>,
    atoms: Vec<GridAtom>,
}

fn sorted_distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.push(1.0);
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
    v
}

/// Index of the largest grid coordinate `≤ v`, if any.
pub(crate) fn floor_index(grid: &[f64], v: f64) -> Option<usize> {
    grid.partition_point(|&g| g <= v).checked_sub(1)
}

pub fn build_cdf(s: &SampleSet, frame: &CommonFrame) -> Result<BivariateStepCdf> {
    let mapped: Vec<(f64, f64, f64)> = s
        .atoms()
        .filter(|&(_, _, w)| w > 0.0)
        .map(|(x, y, w)| {
            let (u, v) = frame.map((x, y));
            (u, v, w)
        })
        .collect();
    if let Some(&(u, v, _)) = mapped
        .iter()
        .find(|(u, v, _)| !(0.0..=1.0).contains(u) || !(0.0..=1.0).contains(v))
    {
        return invalid(format!("point maps to ({u}, {v}), outside the frame"));
    }
    BivariateStepCdf::from_unit_atoms(*frame, &mapped)
}

impl BivariateStepCdf {
    /// Builds the step CDF from atoms already expressed in `[0, 1]²`.
    /// Weights are renormalized.
    pub fn from_unit_atoms(frame: CommonFrame, atoms: &[(f64, f64, f64)]) -> Result<Self> {
        let total: f64 = atoms.iter().map(|a| a.2).sum();
        if atoms.is_empty() || !(total > 0.0) {
            return invalid("no positive mass");
        }
        for &(u, v, w) in atoms {
            if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
                return invalid(format!("atom ({u}, {v}) outside [0,1]²"));
            }
            if !(w >= 0.0) {
                return invalid(format!("negative weight {w}"));
            }
        }
        let xs = sorted_distinct(atoms.iter().map(|a| a.0).collect());
        let ys = sorted_distinct(atoms.iter().map(|a| a.1).collect());
        let (nx, ny) = (xs.len(), ys.len());

        let mut mass = vec![0.0; nx * ny];
        for &(u, v, w) in atoms {
            let i = floor_index(&xs, u).expect("coordinate is on the grid");
            let j = floor_index(&ys, v).expect("coordinate is on the grid");
            mass[i * ny + j] += w / total;
        }
        let grid_atoms: Vec<GridAtom> = (0..nx)
            .flat_map(|i| (0..ny).map(move |j| (i, j)))
            .filter(|&(i, j)| mass[i * ny + j] > 0.0)
            .map(|(i, j)| GridAtom {
                i,
                j,
                weight: mass[i * ny + j],
            })
            .collect();

        let mut values = mass;
        for i in 0..nx {
            for j in 1..ny {
                values[i * ny + j] += values[i * ny + j - 1];
            }
        }
        for i in 1..nx {
            for j in 0..ny {
                values[i * ny + j] += values[(i - 1) * ny + j];
            }
        }
        let cdf = BivariateStepCdf {
            frame,
            xs,
            ys,
            values,
            atoms: grid_atoms,
        };
        debug_assert!((cdf.at(nx - 1, ny - 1) - 1.0).abs() <= MASS_TOL);
        Ok(cdf)
    }

    pub fn frame(&self) -> &CommonFrame {
        &self.frame
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn atoms(&self) -> &[GridAtom] {
        &self.atoms
    }

    /// Atoms as `(x, y, weight)` in normalized coordinates.
    pub fn unit_atoms(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.atoms
            .iter()
            .map(|a| (self.xs[a.i], self.ys[a.j], a.weight))
    }

    /// `F` at grid indices.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ys.len() + j]
    }

    /// `F` at optional grid indices; `None` is the zero boundary below the grid.
    pub fn at_floor(&self, i: Option<usize>, j: Option<usize>) -> f64 {
        match (i, j) {
            (Some(i), Some(j)) => self.at(i, j),
            _ => 0.0,
        }
    }

    /// `F^X(xs[i])`, read from the closing column.
    pub fn fx(&self, i: usize) -> f64 {
        self.at(i, self.ys.len() - 1)
    }

    /// `F^Y(ys[j])`, read from the closing row.
    pub fn fy(&self, j: usize) -> f64 {
        self.at(self.xs.len() - 1, j)
    }

    pub fn fx_floor(&self, i: Option<usize>) -> f64 {
        i.map_or(0.0, |i| self.fx(i))
    }

    pub fn fy_floor(&self, j: Option<usize>) -> f64 {
        j.map_or(0.0, |j| self.fy(j))
    }

    pub fn floor_x(&self, s: f64) -> Option<usize> {
        floor_index(&self.xs, s)
    }

    pub fn floor_y(&self, t: f64) -> Option<usize> {
        floor_index(&self.ys, t)
    }

    /// `F(s, t)` for `(s, t) ∈ [0, 1]²` (right-continuous).
    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) {
            return invalid(format!("({s}, {t}) is outside [0,1]²"));
        }
        Ok(self.eval_unchecked(s, t))
    }

    /// `F(s, t)` without the domain check; points past 1 clamp to the grid end.
    pub(crate) fn eval_unchecked(&self, s: f64, t: f64) -> f64 {
        self.at_floor(self.floor_x(s), self.floor_y(t))
    }

    /// Quasi-volume of the block `(xs[i_lo], xs[i_hi]] × (ys[j_lo], ys[j_hi]]`.
    /// Index `-1` stands for the zero boundary below the grid.
    pub fn quasi_volume(&self, i_lo: isize, i_hi: isize, j_lo: isize, j_hi: isize) -> Result<f64> {
        let nx = self.xs.len() as isize;
        let ny = self.ys.len() as isize;
        if i_lo >= i_hi || j_lo >= j_hi {
            return invalid(format!(
                "inverted block indices ({i_lo}, {i_hi}) × ({j_lo}, {j_hi})"
            ));
        }
        if i_lo < -1 || j_lo < -1 || i_hi >= nx || j_hi >= ny {
            return Err(Error::IndexOutOfRange(format!(
                "block ({i_lo}, {i_hi}) × ({j_lo}, {j_hi}) on a {nx}×{ny} grid"
            )));
        }
        let idx = |k: isize| usize::try_from(k).ok();
        let f = |i: isize, j: isize| self.at_floor(idx(i), idx(j));
        Ok(f(i_hi, j_hi) + f(i_lo, j_lo) - f(i_hi, j_lo) - f(i_lo, j_hi))
    }

    pub fn marginal_x(&self) -> StepCdf {
        StepCdf {
            xs: self.xs.clone(),
            values: (0..self.xs.len()).map(|i| self.fx(i)).collect(),
            axis: (self.frame.x_lo, self.frame.x_hi),
        }
    }

    pub fn marginal_y(&self) -> StepCdf {
        StepCdf {
            xs: self.ys.clone(),
            values: (0..self.ys.len()).map(|j| self.fy(j)).collect(),
            axis: (self.frame.y_lo, self.frame.y_hi),
        }
    }

    pub(crate) fn ensure_same_frame(&self, other: &BivariateStepCdf) -> Result<()> {
        if self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }
}

/// Right-continuous univariate step CDF on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCdf {
    xs: Vec<f64>,
    values: Vec<f64>,
    /// Source interval the unit axis was mapped from; used to detect
    /// comparisons across different frames.
    axis: (f64, f64),
}

impl StepCdf {
    /// `values[k] = F(xs[k])`. `xs` must be strictly increasing in `[0, 1]`,
    /// `values` nondecreasing in `[0, 1]` and ending at 1.
    pub fn new(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.is_empty() || xs.len() != values.len() {
            return invalid("step CDF needs matching, nonempty breakpoints and values");
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return invalid("step CDF breakpoints must be strictly increasing");
        }
        if !(xs[0] >= 0.0) || !(xs[xs.len() - 1] <= 1.0) {
            return invalid("step CDF breakpoints must lie in [0,1]");
        }
        if values.windows(2).any(|w| w[1] < w[0] - MASS_TOL)
            || values.iter().any(|v| !(*v >= -MASS_TOL && *v <= 1.0 + MASS_TOL))
        {
            return invalid("step CDF values must be nondecreasing probabilities");
        }
        if (values[values.len() - 1] - 1.0).abs() > MASS_TOL || xs[xs.len() - 1] != 1.0 {
            return invalid("step CDF must reach 1 at or before z = 1");
        }
        Ok(StepCdf {
            xs,
            values,
            axis: (0.0, 1.0),
        })
    }

    /// Step CDF of point masses `(z, weight)` on `[0, 1]`; weights are renormalized.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if atoms.is_empty() || !(total > 0.0) || atoms.iter().any(|a| !(a.1 >= 0.0)) {
            return invalid("univariate atoms need nonnegative weights with positive total");
        }
        if atoms.iter().any(|a| !(0.0..=1.0).contains(&a.0)) {
            return invalid("univariate atoms must lie in [0,1]");
        }
        let xs = sorted_distinct(atoms.iter().map(|a| a.0).collect());
        let mut mass = vec![0.0; xs.len()];
        for &(z, w) in atoms {
            mass[floor_index(&xs, z).expect("on grid")] += w / total;
        }
        let mut acc = 0.0;
        let values = mass
            .into_iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect();
        Ok(StepCdf {
            xs,
            values,
            axis: (0.0, 1.0),
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn axis(&self) -> (f64, f64) {
        self.axis
    }

    pub fn eval(&self, z: f64) -> f64 {
        floor_index(&self.xs, z).map_or(0.0, |k| self.values[k])
    }
}

/// Union of the coordinate grids of two step CDFs, with index maps back
/// into each source grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Position of each source coordinate in the merged grid.
    pub a_x: Vec<usize>,
    pub a_y: Vec<usize>,
    pub b_x: Vec<usize>,
    pub b_y: Vec<usize>,
    /// For each merged coordinate, the largest source index at or below it.
    pub x_floor_a: Vec<Option<usize>>,
    pub y_floor_a: Vec<Option<usize>>,
    pub x_floor_b: Vec<Option<usize>>,
    pub y_floor_b: Vec<Option<usize>>,
}

struct AxisMerge {
    merged: Vec<f64>,
    pos_a: Vec<usize>,
    pos_b: Vec<usize>,
    floor_a: Vec<Option<usize>>,
    floor_b: Vec<Option<usize>>,
}

fn merge_axis(a: &[f64], b: &[f64]) -> AxisMerge {
    let mut merged: Vec<f64> = a.iter().chain(b).copied().collect();
    merged.sort_by(|p, q| p.total_cmp(q));
    merged.dedup();
    let pos = |src: &[f64]| -> Vec<usize> {
        src.iter()
            .map(|v| merged.partition_point(|m| m < v))
            .collect()
    };
    let floors = |src: &[f64]| -> Vec<Option<usize>> {
        merged.iter().map(|&m| floor_index(src, m)).collect()
    };
    AxisMerge {
        pos_a: pos(a),
        pos_b: pos(b),
        floor_a: floors(a),
        floor_b: floors(b),
        merged,
    }
}

pub fn merge_grids(a: &BivariateStepCdf, b: &BivariateStepCdf) -> MergedGrid {
    let mx = merge_axis(&a.xs, &b.xs);
    let my = merge_axis(&a.ys, &b.ys);
    MergedGrid {
        xs: mx.merged,
        ys: my.merged,
        a_x: mx.pos_a,
        a_y: my.pos_a,
        b_x: mx.pos_b,
        b_y: my.pos_b,
        x_floor_a: mx.floor_a,
        y_floor_a: my.floor_a,
        x_floor_b: mx.floor_b,
        y_floor_b: my.floor_b,
    }
}

/// The merged grid with the origin coordinate 0 prepended where missing.
///
/// Every step function built on either source grid is constant on the
/// half-open cells `[xs[k], xs[k+1]) × [ys[l], ys[l+1])` of this lattice, and
/// the cells together with the closing lines `x = 1`, `y = 1` cover the
/// closed unit square.
#[derive(Debug, Clone)]
pub(crate) struct Lattice {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl Lattice {
    pub(crate) fn from_grid(grid: &MergedGrid) -> Self {
        let with_origin = |v: &[f64]| {
            let mut out = Vec::with_capacity(v.len() + 1);
            if v.first() != Some(&0.0) {
                out.push(0.0);
            }
            out.extend_from_slice(v);
            out
        };
        Lattice {
            xs: with_origin(&grid.xs),
            ys: with_origin(&grid.ys),
        }
    }

    /// Floor indices of every lattice coordinate in a source grid.
    pub(crate) fn floors(axis: &[f64], src: &[f64]) -> Vec<Option<usize>> {
        axis.iter().map(|&v| floor_index(src, v)).collect()
    }

    /// A point inside the half-open cell starting at lattice coordinate `k`;
    /// the closing coordinate 1 is its own representative.
    pub(crate) fn cell_mid(axis: &[f64], k: usize) -> f64 {
        match axis.get(k + 1) {
            Some(next) => 0.5 * (axis[k] + next),
            None => axis[k],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cdf(atoms: &[(f64, f64, f64)]) -> BivariateStepCdf {
        BivariateStepCdf::from_unit_atoms(CommonFrame::unit(), atoms).unwrap()
    }

    /// Direct counting: total weight with both coordinates at or below `(s, t)`.
    fn count(atoms: &[(f64, f64, f64)], s: f64, t: f64) -> f64 {
        let total: f64 = atoms.iter().map(|a| a.2).sum();
        atoms
            .iter()
            .filter(|a| a.0 <= s && a.1 <= t)
            .map(|a| a.2)
            .sum::<f64>()
            / total
    }

    #[test]
    fn sample_set_rejects_bad_input() {
        assert!(SampleSet::new(vec![], vec![]).is_err());
        assert!(SampleSet::new(vec![(0.0, 0.0)], vec![-1.0]).is_err());
        assert!(SampleSet::new(vec![(0.0, 0.0)], vec![0.0]).is_err());
        assert!(SampleSet::new(vec![(0.0, 0.0)], vec![1.0, 2.0]).is_err());
        assert!(SampleSet::new(vec![(f64::NAN, 0.0)], vec![1.0]).is_err());
    }

    #[test]
    fn sample_set_merges_and_normalizes() {
        let s = SampleSet::new(
            vec![(0.0, 0.0), (1.0, 1.0), (0.0, 0.0), (-0.0, 0.0)],
            vec![1.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.weights(), &[0.75, 0.25]);
        let total: f64 = s.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frame_identity_inside_unit_square() {
        let a = SampleSet::uniform(vec![(0.2, 0.3), (0.6, 0.9)]).unwrap();
        let b = SampleSet::uniform(vec![(0.5, 0.5)]).unwrap();
        let f = build_common_frame(&a, &b).unwrap();
        assert_eq!(f, CommonFrame::unit());
        assert_eq!(f.map((0.2, 0.3)), (0.2, 0.3));
    }

    #[test]
    fn frame_affine_rescale() {
        let a = SampleSet::uniform(vec![(2.0, 4.0)]).unwrap();
        let b = SampleSet::uniform(vec![(0.0, 0.0), (4.0, 8.0)]).unwrap();
        let f = build_common_frame(&a, &b).unwrap();
        assert_eq!((f.x_lo, f.x_hi, f.y_lo, f.y_hi), (0.0, 4.0, 0.0, 8.0));
        assert_eq!(f.map((2.0, 4.0)), (0.5, 0.5));
        assert_eq!(f.unmap((0.5, 0.5)), (2.0, 4.0));
    }

    #[test]
    fn frame_degenerate_axes_are_widened() {
        let a = SampleSet::uniform(vec![(5.0, 5.0)]).unwrap();
        let f = build_common_frame(&a, &a).unwrap();
        // max(1, |5|) = 5 on each side.
        assert_eq!((f.x_lo, f.x_hi, f.y_lo, f.y_hi), (0.0, 10.0, 0.0, 10.0));
        let (u, v) = f.map((5.0, 5.0));
        assert!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0);

        let c = SampleSet::uniform(vec![(-0.5, 3.0), (-0.5, 7.0)]).unwrap();
        let f = build_common_frame(&c, &c).unwrap();
        assert_eq!((f.x_lo, f.x_hi), (-1.5, 0.5));
        assert_eq!(f.map_x(-0.5), 0.5);
    }

    #[test]
    fn build_cdf_rejects_points_outside_frame() {
        let s = SampleSet::uniform(vec![(2.0, 0.5)]).unwrap();
        assert!(build_cdf(&s, &CommonFrame::unit()).is_err());
    }

    #[test]
    fn single_atom_cdf() {
        let c = unit_cdf(&[(0.3, 0.7, 1.0)]);
        assert_eq!(c.eval(0.3, 0.7).unwrap(), 1.0);
        assert_eq!(c.eval(0.29, 1.0).unwrap(), 0.0);
        assert_eq!(c.eval(0.3, 0.69).unwrap(), 0.0);
        assert_eq!(c.eval(1.0, 1.0).unwrap(), 1.0);
        assert!(c.eval(1.1, 0.5).is_err());
        assert!(c.eval(0.5, -0.1).is_err());
    }

    #[test]
    fn anti_diagonal_cdf_matches_counting() {
        let atoms = [(1.0, 0.0, 0.5), (0.0, 1.0, 0.5)];
        let c = unit_cdf(&atoms);
        for &(s, t) in &[(0.5, 0.5), (1.0, 0.5), (1.0, 1.0), (0.2, 0.2), (0.0, 1.0)] {
            assert_eq!(c.eval(s, t).unwrap(), count(&atoms, s, t), "at ({s},{t})");
        }
        assert_eq!(c.eval(0.5, 0.5).unwrap(), 0.0);
        assert_eq!(c.eval(1.0, 0.5).unwrap(), 0.5);
    }

    #[test]
    fn diagonal_cdf_matches_counting() {
        let atoms = [(0.0, 0.0, 0.5), (1.0, 1.0, 0.5)];
        let c = unit_cdf(&atoms);
        for &(s, t) in &[(0.0, 0.0), (0.3, 0.9), (0.99, 0.99), (1.0, 0.5)] {
            assert_eq!(c.eval(s, t).unwrap(), 0.5);
        }
        assert_eq!(c.eval(1.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn quasi_volumes() {
        let c = unit_cdf(&[(0.3, 0.7, 1.0)]);
        // Grid xs = [0.3, 1], ys = [0.7, 1].
        assert_eq!(c.quasi_volume(-1, 0, -1, 0).unwrap(), 1.0);
        assert_eq!(c.quasi_volume(0, 1, 0, 1).unwrap(), 0.0);
        assert!(c.quasi_volume(1, 0, 0, 1).is_err());
        assert!(c.quasi_volume(0, 2, 0, 1).is_err());

        let c = unit_cdf(&[(0.2, 0.2, 0.5), (0.8, 0.8, 0.5)]);
        // Grid [0.2, 0.8, 1]; block (0.5, 1] × (0.5, 1] is (0.2, 1] × (0.2, 1] on this grid.
        assert_eq!(c.quasi_volume(0, 2, 0, 2).unwrap(), 0.5);
    }

    #[test]
    fn marginals() {
        let c = unit_cdf(&[(0.3, 0.7, 1.0)]);
        let mx = c.marginal_x();
        assert_eq!(mx.eval(0.29), 0.0);
        assert_eq!(mx.eval(0.3), 1.0);

        let c = unit_cdf(&[(0.2, 0.8, 0.5), (0.8, 0.2, 0.5)]);
        let mx = c.marginal_x();
        assert_eq!(mx.breakpoints(), &[0.2, 0.8, 1.0]);
        assert_eq!(mx.values(), &[0.5, 1.0, 1.0]);
        assert_eq!(mx.eval(1.0), 1.0);
        for i in 0..c.xs().len() {
            assert_eq!(c.fx(i), c.at(i, c.ys().len() - 1));
        }
    }

    #[test]
    fn product_marginal_is_factor() {
        let xs = [(0.1, 0.25), (0.4, 0.75)];
        let ys = [(0.3, 0.5), (0.9, 0.5)];
        let atoms: Vec<_> = xs
            .iter()
            .flat_map(|&(x, px)| ys.iter().map(move |&(y, py)| (x, y, px * py)))
            .collect();
        let c = unit_cdf(&atoms);
        let factor = StepCdf::from_atoms(&xs).unwrap();
        for z in [0.0, 0.1, 0.2, 0.4, 0.5, 1.0] {
            assert!((c.marginal_x().eval(z) - factor.eval(z)).abs() < 1e-15);
        }
    }

    #[test]
    fn merged_grid_examples() {
        let a = unit_cdf(&[(0.5, 0.5, 1.0)]);
        let b = unit_cdf(&[(0.25, 0.5, 1.0)]);
        let g = merge_grids(&a, &b);
        assert_eq!(g.xs, vec![0.25, 0.5, 1.0]);
        assert_eq!(g.ys, vec![0.5, 1.0]);

        let g = merge_grids(&a, &a);
        assert_eq!(g.xs, a.xs());
        assert_eq!(g.a_x, vec![0, 1]);
        assert_eq!(g.x_floor_a, vec![Some(0), Some(1)]);

        let c = unit_cdf(&[(0.1, 0.1, 0.5), (0.3, 0.2, 0.5)]);
        let d = unit_cdf(&[(0.6, 0.4, 0.5), (0.9, 0.7, 0.5)]);
        let g = merge_grids(&c, &d);
        assert_eq!(g.xs.len(), c.xs().len() + d.xs().len() - 1);
        for (k, &p) in g.a_x.iter().enumerate() {
            assert_eq!(g.x_floor_a[p], Some(k));
        }
        for (k, &p) in g.b_y.iter().enumerate() {
            assert_eq!(g.y_floor_b[p], Some(k));
        }
    }

    #[test]
    fn step_cdf_validation() {
        assert!(StepCdf::new(vec![0.5, 0.4, 1.0], vec![0.1, 0.2, 1.0]).is_err());
        assert!(StepCdf::new(vec![0.5, 1.0], vec![0.6, 0.5]).is_err());
        assert!(StepCdf::new(vec![0.5, 1.0], vec![0.5, 0.9]).is_err());
        assert!(StepCdf::new(vec![0.5, 1.0], vec![0.5, 1.0]).is_ok());
    }
}
