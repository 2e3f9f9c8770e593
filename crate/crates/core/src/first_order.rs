//! First-order bivariate dominance conditions.
//!
//! For the increasing submodular class the sufficient condition is
//! `F₁ ≤ F₂` everywhere. For the increasing supermodular class it is
//! `F₁^X ≤ F₂^X`, `F₁^Y ≤ F₂^Y` and `K₁ ≤ K₂` with
//! `K = F^X + F^Y − F`.
//!
//! Every function compared here is a step function on the atom grid of its
//! distribution. On the merged lattice `{0} ∪ xs₁ ∪ xs₂` (and likewise in
//! `y`) each of them is constant on the half-open cells
//! `[x_k, x_{k+1}) × [y_l, y_{l+1})`, and those cells together with the
//! closing lines `x = 1`, `y = 1` cover the closed unit square. Checking
//! the lattice points therefore decides the inequalities over the whole
//! square exactly.

use serde::{Deserialize, Serialize};

use crate::distribution::{floor_index, merge_grids, BivariateStepCdf, Lattice, MergedGrid};
use crate::error::Result;
use crate::verdict::{DominanceVerdict, Family, Scan};

/// `K(s, t) = F^X(s) + F^Y(t) − F(s, t)` sampled on a merged grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSheet {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    values: Vec<f64>,
}

impl KSheet {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ys.len() + j]
    }

    /// Row-major `K` values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub(crate) fn k_value(
    cdf: &BivariateStepCdf,
    i: Option<usize>,
    j: Option<usize>,
) -> f64 {
    cdf.fx_floor(i) + cdf.fy_floor(j) - cdf.at_floor(i, j)
}

pub fn k_sheet(cdf: &BivariateStepCdf, grid: &MergedGrid) -> KSheet {
    let fx = Lattice::floors(&grid.xs, cdf.xs());
    let fy = Lattice::floors(&grid.ys, cdf.ys());
    let values = fx
        .iter()
        .flat_map(|&i| fy.iter().map(move |&j| (i, j)))
        .map(|(i, j)| k_value(cdf, i, j))
        .collect();
    KSheet {
        xs: grid.xs.clone(),
        ys: grid.ys.clone(),
        values,
    }
}

/// Two distributions viewed on their common lattice.
pub(crate) struct Pair<'a> {
    pub a: &'a BivariateStepCdf,
    pub b: &'a BivariateStepCdf,
    pub lat: Lattice,
    pub ax: Vec<Option<usize>>,
    pub ay: Vec<Option<usize>>,
    pub bx: Vec<Option<usize>>,
    pub by: Vec<Option<usize>>,
}

impl<'a> Pair<'a> {
    pub(crate) fn new(a: &'a BivariateStepCdf, b: &'a BivariateStepCdf) -> Result<Self> {
        a.ensure_same_frame(b)?;
        let lat = Lattice::from_grid(&merge_grids(a, b));
        Ok(Pair {
            ax: Lattice::floors(&lat.xs, a.xs()),
            ay: Lattice::floors(&lat.ys, a.ys()),
            bx: Lattice::floors(&lat.xs, b.xs()),
            by: Lattice::floors(&lat.ys, b.ys()),
            a,
            b,
            lat,
        })
    }

    /// Scans `diff(k, l)` over every lattice point. Step functions are
    /// constant on the cell starting at each point, so the witness is moved
    /// to the cell's midpoint.
    fn scan_surface<D>(&self, family: Family, tol: f64, diff: D) -> DominanceVerdict
    where
        D: Fn(usize, usize) -> f64,
    {
        let xs = &self.lat.xs;
        let ys = &self.lat.ys;
        let mut scan = Scan::new(family, tol);
        for (k, &x) in xs.iter().enumerate() {
            for (l, &y) in ys.iter().enumerate() {
                scan.observe(x, Some(y), diff(k, l));
            }
        }
        let ((_, _), best) = scan.argmax();
        scan.finish_with(false, |(x, y)| {
            let k = floor_index(xs, x)?;
            let l = floor_index(ys, y?)?;
            Some((
                (Lattice::cell_mid(xs, k), Some(Lattice::cell_mid(ys, l))),
                best,
            ))
        })
    }

    fn scan_axis<D>(&self, family: Family, axis: &[f64], tol: f64, diff: D) -> DominanceVerdict
    where
        D: Fn(usize) -> f64,
    {
        let mut scan = Scan::new(family, tol);
        for (k, &x) in axis.iter().enumerate() {
            scan.observe(x, None, diff(k));
        }
        let ((_, _), best) = scan.argmax();
        scan.finish_with(false, |(x, _)| {
            let k = floor_index(axis, x)?;
            Some(((Lattice::cell_mid(axis, k), None), best))
        })
    }

    pub(crate) fn check_f(&self, tol: f64) -> DominanceVerdict {
        self.scan_surface(Family::F, tol, |k, l| {
            self.a.at_floor(self.ax[k], self.ay[l]) - self.b.at_floor(self.bx[k], self.by[l])
        })
    }

    pub(crate) fn check_marginal_x(&self, tol: f64) -> DominanceVerdict {
        self.scan_axis(Family::MarginalX, &self.lat.xs, tol, |k| {
            self.a.fx_floor(self.ax[k]) - self.b.fx_floor(self.bx[k])
        })
    }

    pub(crate) fn check_marginal_y(&self, tol: f64) -> DominanceVerdict {
        self.scan_axis(Family::MarginalY, &self.lat.ys, tol, |l| {
            self.a.fy_floor(self.ay[l]) - self.b.fy_floor(self.by[l])
        })
    }

    pub(crate) fn check_k(&self, tol: f64) -> DominanceVerdict {
        self.scan_surface(Family::K, tol, |k, l| {
            k_value(self.a, self.ax[k], self.ay[l]) - k_value(self.b, self.bx[k], self.by[l])
        })
    }
}

/// `F₁ ≤ F₂ + tol` on the whole square.
pub fn check_first_order_submodular(
    f1: &BivariateStepCdf,
    f2: &BivariateStepCdf,
    tol: f64,
) -> Result<DominanceVerdict> {
    Ok(Pair::new(f1, f2)?.check_f(tol))
}

/// Marginal and `K` conditions; the witness names the first failing family
/// in the order `K`, x-marginal, y-marginal.
pub fn check_first_order_supermodular(
    f1: &BivariateStepCdf,
    f2: &BivariateStepCdf,
    tol: f64,
) -> Result<DominanceVerdict> {
    let c = FirstOrderConditions::evaluate(f1, f2, tol)?;
    Ok(c.supermodular())
}

/// Every first-order family for one ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderConditions {
    pub f: DominanceVerdict,
    pub marginal_x: DominanceVerdict,
    pub marginal_y: DominanceVerdict,
    pub k: DominanceVerdict,
}

impl FirstOrderConditions {
    pub fn evaluate(f1: &BivariateStepCdf, f2: &BivariateStepCdf, tol: f64) -> Result<Self> {
        let pair = Pair::new(f1, f2)?;
        Ok(FirstOrderConditions {
            f: pair.check_f(tol),
            marginal_x: pair.check_marginal_x(tol),
            marginal_y: pair.check_marginal_y(tol),
            k: pair.check_k(tol),
        })
    }

    pub fn submodular(&self) -> DominanceVerdict {
        self.f.clone()
    }

    pub fn supermodular(&self) -> DominanceVerdict {
        DominanceVerdict::all([&self.k, &self.marginal_x, &self.marginal_y])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::CommonFrame;

    const TOL: f64 = 1e-9;

    fn cdf(atoms: &[(f64, f64, f64)]) -> BivariateStepCdf {
        BivariateStepCdf::from_unit_atoms(CommonFrame::unit(), atoms).unwrap()
    }

    fn anti() -> BivariateStepCdf {
        cdf(&[(1.0, 0.0, 0.5), (0.0, 1.0, 0.5)])
    }

    fn diag() -> BivariateStepCdf {
        cdf(&[(0.0, 0.0, 0.5), (1.0, 1.0, 0.5)])
    }

    /// Brute-force K at an arbitrary point by direct counting.
    fn k_count(atoms: &[(f64, f64, f64)], s: f64, t: f64) -> f64 {
        let fx: f64 = atoms.iter().filter(|a| a.0 <= s).map(|a| a.2).sum();
        let fy: f64 = atoms.iter().filter(|a| a.1 <= t).map(|a| a.2).sum();
        let f: f64 = atoms.iter().filter(|a| a.0 <= s && a.1 <= t).map(|a| a.2).sum();
        fx + fy - f
    }

    #[test]
    fn k_sheet_examples() {
        let c = cdf(&[(0.0, 0.0, 1.0)]);
        let g = merge_grids(&c, &c);
        let k = k_sheet(&c, &g);
        assert!(k.values().iter().all(|&v| v == 1.0));

        let atoms = [(1.0, 0.0, 0.5), (0.0, 1.0, 0.5)];
        assert_eq!(k_count(&atoms, 0.5, 0.5), 1.0);
        let a = anti();
        let g = merge_grids(&a, &a);
        let k = k_sheet(&a, &g);
        // Grid is {0, 1}²; (0.5, 0.5) falls on the cell starting at (0, 0).
        assert_eq!(k.at(0, 0), 1.0);

        let d = diag();
        let k = k_sheet(&d, &merge_grids(&d, &d));
        assert_eq!(k.at(0, 0), 0.5);
        assert_eq!(k_count(&[(0.0, 0.0, 0.5), (1.0, 1.0, 0.5)], 0.5, 0.5), 0.5);
    }

    #[test]
    fn k_is_nonnegative_and_consistent() {
        let c = cdf(&[(0.1, 0.9, 0.2), (0.4, 0.3, 0.3), (0.7, 0.6, 0.5)]);
        let k = k_sheet(&c, &merge_grids(&c, &c));
        for (i, _) in k.xs.iter().enumerate() {
            for (j, _) in k.ys.iter().enumerate() {
                let expect = c.fx(i) + c.fy(j) - c.at(i, j);
                assert!((k.at(i, j) - expect).abs() < 1e-12);
                assert!(k.at(i, j) >= -1e-12);
            }
        }
    }

    #[test]
    fn submodular_identity_and_examples() {
        let a = anti();
        assert!(check_first_order_submodular(&a, &a, TOL).unwrap().holds);

        let v = check_first_order_submodular(&anti(), &diag(), TOL).unwrap();
        assert!(v.holds);

        let v = check_first_order_submodular(&diag(), &anti(), TOL).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!((w.x, w.y), (0.5, Some(0.5)));
        assert_eq!(w.margin, 0.5);
        assert_eq!(w.family, Family::F);
    }

    #[test]
    fn supermodular_examples() {
        let d = diag();
        assert!(check_first_order_supermodular(&d, &d, TOL).unwrap().holds);
        assert!(check_first_order_supermodular(&diag(), &anti(), TOL).unwrap().holds);

        let v = check_first_order_supermodular(&anti(), &diag(), TOL).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.family, Family::K);
        assert_eq!((w.x, w.y), (0.5, Some(0.5)));
        assert_eq!(w.margin, 0.5);
    }

    #[test]
    fn marginal_failure_alone_fails_the_class() {
        // Same joint shape, but f1's x-marginal sits left of f2's: K agrees
        // with the x-marginal ordering broken only through F^X.
        let f1 = cdf(&[(0.1, 0.5, 0.5), (0.6, 1.0, 0.5)]);
        let f2 = cdf(&[(0.2, 0.5, 0.5), (0.6, 1.0, 0.5)]);
        let c = FirstOrderConditions::evaluate(&f1, &f2, TOL).unwrap();
        assert!(!c.marginal_x.holds);
        let w = c.marginal_x.witness.unwrap();
        assert_eq!(w.y, None);
        assert!((w.x - 0.15).abs() < 1e-15);
        assert!(!c.supermodular().holds);
    }

    #[test]
    fn region_below_first_atom_is_covered() {
        // f1 has no x-mass below 0.5 but y-mass at 0.2; f2 puts y-mass at 0.8.
        // K differs on [0, 0.5) × [0.2, 0.8) where only the marginal in y matters.
        let f1 = cdf(&[(0.5, 0.2, 1.0)]);
        let f2 = cdf(&[(0.5, 0.8, 1.0)]);
        let c = FirstOrderConditions::evaluate(&f1, &f2, TOL).unwrap();
        assert!(!c.k.holds);
        let w = c.k.witness.unwrap();
        assert!(w.x < 0.5);
    }

    #[test]
    fn frames_must_match() {
        let a = anti();
        let other = BivariateStepCdf::from_unit_atoms(
            CommonFrame {
                x_lo: 0.0,
                x_hi: 2.0,
                y_lo: 0.0,
                y_hi: 1.0,
            },
            &[(0.5, 0.5, 1.0)],
        )
        .unwrap();
        assert!(check_first_order_submodular(&a, &other, TOL).is_err());
        assert!(check_first_order_supermodular(&a, &other, TOL).is_err());
    }
}
