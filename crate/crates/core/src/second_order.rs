//! Second-order bivariate dominance conditions.
//!
//! `H(x, y) = ∫₀^x ∫₀^y F`, `L(x, y) = ∫₀^x ∫₀^y K` and the marginal
//! integrals `H^X`, `H^Y`. Because `F` and `K` are constant on the cells of
//! the merged lattice, `H` and `L` are bilinear on every cell; the
//! difference of two such surfaces is again bilinear per cell and attains
//! its extrema at cell corners. Likewise `H^X` is piecewise linear with
//! breakpoints on the lattice. Corner checks are therefore exact.

use serde::{Deserialize, Serialize};

use crate::distribution::{floor_index, merge_grids, BivariateStepCdf, Lattice, MergedGrid};
use crate::error::Result;
use crate::first_order::k_value;
use crate::univariate::{s_operator, PiecewisePolynomial};
use crate::verdict::{DominanceVerdict, Family, Scan};

/// Bilinear form on one lattice cell in local offsets `(u, v)` from its
/// lower-left corner: `value + x_slope·u + y_slope·v + cross·u·v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearCell {
    pub value: f64,
    pub x_slope: f64,
    pub y_slope: f64,
    /// Equals the integrand on the cell.
    pub cross: f64,
}

/// Double integral from the origin of a function that is constant on the
/// cells of a lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilinearSheet {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    corners: Vec<f64>,
    /// Integrand per cell, `(xs.len() − 1) × (ys.len() − 1)`.
    integrand: Vec<f64>,
}

impl BilinearSheet {
    /// Integrates `cell_value(k, l)` over the lattice `xs × ys`, which must
    /// start at 0.
    fn integrate<C>(xs: Vec<f64>, ys: Vec<f64>, cell_value: C) -> Self
    where
        C: Fn(usize, usize) -> f64,
    {
        let (nx, ny) = (xs.len(), ys.len());
        let mut integrand = vec![0.0; (nx - 1) * (ny - 1)];
        for k in 0..nx - 1 {
            for l in 0..ny - 1 {
                integrand[k * (ny - 1) + l] = cell_value(k, l);
            }
        }
        let mut corners = vec![0.0; nx * ny];
        for k in 1..nx {
            let dx = xs[k] - xs[k - 1];
            for l in 1..ny {
                let dy = ys[l] - ys[l - 1];
                corners[k * ny + l] = corners[(k - 1) * ny + l] + corners[k * ny + l - 1]
                    - corners[(k - 1) * ny + l - 1]
                    + integrand[(k - 1) * (ny - 1) + l - 1] * dx * dy;
            }
        }
        BilinearSheet {
            xs,
            ys,
            corners,
            integrand,
        }
    }

    pub fn corner(&self, k: usize, l: usize) -> f64 {
        self.corners[k * self.ys.len() + l]
    }

    /// Row-major corner values.
    pub fn corners(&self) -> &[f64] {
        &self.corners
    }

    pub fn integrand(&self, k: usize, l: usize) -> f64 {
        self.integrand[k * (self.ys.len() - 1) + l]
    }

    pub fn cell(&self, k: usize, l: usize) -> BilinearCell {
        let dx = self.xs[k + 1] - self.xs[k];
        let dy = self.ys[l + 1] - self.ys[l];
        let v00 = self.corner(k, l);
        BilinearCell {
            value: v00,
            x_slope: (self.corner(k + 1, l) - v00) / dx,
            y_slope: (self.corner(k, l + 1) - v00) / dy,
            cross: self.integrand(k, l),
        }
    }

    /// Surface value at `(x, y) ∈ [0, 1]²`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let k = floor_index(&self.xs, x).unwrap_or(0).min(self.xs.len() - 2);
        let l = floor_index(&self.ys, y).unwrap_or(0).min(self.ys.len() - 2);
        let c = self.cell(k, l);
        let (u, v) = (x - self.xs[k], y - self.ys[l]);
        c.value + c.x_slope * u + c.y_slope * v + c.cross * u * v
    }
}

fn sheet_of<C>(cdf: &BivariateStepCdf, grid: &MergedGrid, value: C) -> BilinearSheet
where
    C: Fn(&BivariateStepCdf, Option<usize>, Option<usize>) -> f64,
{
    let lat = Lattice::from_grid(grid);
    let fx = Lattice::floors(&lat.xs, cdf.xs());
    let fy = Lattice::floors(&lat.ys, cdf.ys());
    BilinearSheet::integrate(lat.xs, lat.ys, |k, l| value(cdf, fx[k], fy[l]))
}

/// `H(x, y) = ∫₀^x ∫₀^y F(s, t) ds dt` on `{0} ∪ grid`.
pub fn h_surface(cdf: &BivariateStepCdf, grid: &MergedGrid) -> BilinearSheet {
    sheet_of(cdf, grid, |c, i, j| c.at_floor(i, j))
}

/// `L(x, y) = ∫₀^x ∫₀^y K(s, t) ds dt` on `{0} ∪ grid`, integrating `K`
/// cell by cell rather than through `H`.
pub fn l_surface(cdf: &BivariateStepCdf, grid: &MergedGrid) -> BilinearSheet {
    sheet_of(cdf, grid, k_value)
}

/// `H^X(x) = ∫₀^x F^X(s) ds`.
pub fn h_marginal_x(cdf: &BivariateStepCdf) -> PiecewisePolynomial {
    s_operator(&cdf.marginal_x(), 2).expect("order 2 is within the degree cap")
}

/// `H^Y(y) = ∫₀^y F^Y(t) dt`.
pub fn h_marginal_y(cdf: &BivariateStepCdf) -> PiecewisePolynomial {
    s_operator(&cdf.marginal_y(), 2).expect("order 2 is within the degree cap")
}

fn check_marginal(
    family: Family,
    axis: &[f64],
    a: &PiecewisePolynomial,
    b: &PiecewisePolynomial,
    tol: f64,
) -> DominanceVerdict {
    let diff = |z: f64| a.eval(z) - b.eval(z);
    let mut scan = Scan::new(family, tol);
    for &z in axis {
        scan.observe(z, None, diff(z));
    }
    scan.finish_with(false, |(z, _)| {
        // Prefer a violating interior point of an adjacent piece.
        let k = floor_index(axis, z)?;
        let mut mids = vec![];
        if k > 0 {
            mids.push(0.5 * (axis[k - 1] + axis[k]));
        }
        if k + 1 < axis.len() {
            mids.push(0.5 * (axis[k] + axis[k + 1]));
        }
        mids.into_iter()
            .map(|m| ((m, None), diff(m)))
            .max_by(|p, q| p.1.total_cmp(&q.1))
    })
}

fn check_sheets(family: Family, a: &BilinearSheet, b: &BilinearSheet, tol: f64) -> DominanceVerdict {
    let (xs, ys) = (&a.xs, &a.ys);
    let ny = ys.len();
    let diff: Vec<f64> = a.corners.iter().zip(&b.corners).map(|(p, q)| p - q).collect();
    let mut scan = Scan::new(family, tol);
    for (k, &x) in xs.iter().enumerate() {
        for (l, &y) in ys.iter().enumerate() {
            scan.observe(x, Some(y), diff[k * ny + l]);
        }
    }
    scan.finish_with(false, |(x, y)| {
        // Move to the centre of the adjacent cell with the largest violation;
        // a bilinear function's centre value is the mean of its corners.
        let k = floor_index(xs, x)?;
        let l = floor_index(ys, y?)?;
        let mut best: Option<((f64, Option<f64>), f64)> = None;
        for ck in [k.wrapping_sub(1), k] {
            for cl in [l.wrapping_sub(1), l] {
                if ck + 1 >= xs.len() || cl + 1 >= ny {
                    continue;
                }
                let centre = 0.25
                    * (diff[ck * ny + cl]
                        + diff[(ck + 1) * ny + cl]
                        + diff[ck * ny + cl + 1]
                        + diff[(ck + 1) * ny + cl + 1]);
                let at = (
                    0.5 * (xs[ck] + xs[ck + 1]),
                    Some(0.5 * (ys[cl] + ys[cl + 1])),
                );
                if best.is_none_or(|b| centre > b.1) {
                    best = Some((at, centre));
                }
            }
        }
        best
    })
}

/// Every second-order family for one ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderConditions {
    pub hx: DominanceVerdict,
    pub hy: DominanceVerdict,
    pub h: DominanceVerdict,
    pub l: DominanceVerdict,
}

impl SecondOrderConditions {
    pub fn evaluate(f1: &BivariateStepCdf, f2: &BivariateStepCdf, tol: f64) -> Result<Self> {
        f1.ensure_same_frame(f2)?;
        let grid = merge_grids(f1, f2);
        let lat = Lattice::from_grid(&grid);
        let hx = check_marginal(Family::HX, &lat.xs, &h_marginal_x(f1), &h_marginal_x(f2), tol);
        let hy = check_marginal(Family::HY, &lat.ys, &h_marginal_y(f1), &h_marginal_y(f2), tol);
        let h = check_sheets(Family::H, &h_surface(f1, &grid), &h_surface(f2, &grid), tol);
        let l = check_sheets(Family::L, &l_surface(f1, &grid), &l_surface(f2, &grid), tol);
        Ok(SecondOrderConditions { hx, hy, h, l })
    }

    pub fn submodular(&self) -> DominanceVerdict {
        DominanceVerdict::all([&self.h, &self.hx, &self.hy])
    }

    pub fn supermodular(&self) -> DominanceVerdict {
        DominanceVerdict::all([&self.l, &self.hx, &self.hy])
    }
}

/// `H^X`, `H^Y` and `H` conditions for the increasing concave submodular class.
pub fn check_second_order_submodular(
    f1: &BivariateStepCdf,
    f2: &BivariateStepCdf,
    tol: f64,
) -> Result<DominanceVerdict> {
    Ok(SecondOrderConditions::evaluate(f1, f2, tol)?.submodular())
}

/// `H^X`, `H^Y` and `L` conditions for the increasing concave supermodular class.
pub fn check_second_order_supermodular(
    f1: &BivariateStepCdf,
    f2: &BivariateStepCdf,
    tol: f64,
) -> Result<DominanceVerdict> {
    Ok(SecondOrderConditions::evaluate(f1, f2, tol)?.supermodular())
}
