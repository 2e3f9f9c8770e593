//! Dominance verdicts and witnesses shared by every checker.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The family of inequalities a verdict refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Family {
    /// `F1 ≤ F2` pointwise.
    F,
    MarginalX,
    MarginalY,
    /// `K1 ≤ K2` with `K = F^X + F^Y − F`.
    K,
    /// Integrated CDF surface.
    H,
    /// Integrated `K` surface.
    L,
    HX,
    HY,
    /// Univariate `S_j` comparison of two step CDFs.
    S(u32),
    /// `S_j` comparison of the x-marginals.
    SX(u32),
    /// `S_j` comparison of the y-marginals.
    SY(u32),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::F => f.write_str("F"),
            Family::MarginalX => f.write_str("marginal_x"),
            Family::MarginalY => f.write_str("marginal_y"),
            Family::K => f.write_str("K"),
            Family::H => f.write_str("H"),
            Family::L => f.write_str("L"),
            Family::HX => f.write_str("HX"),
            Family::HY => f.write_str("HY"),
            Family::S(j) => write!(f, "S{j}"),
            Family::SX(j) => write!(f, "S{j}_x"),
            Family::SY(j) => write!(f, "S{j}_y"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fam = match s {
            "F" => Family::F,
            "marginal_x" => Family::MarginalX,
            "marginal_y" => Family::MarginalY,
            "K" => Family::K,
            "H" => Family::H,
            "L" => Family::L,
            "HX" => Family::HX,
            "HY" => Family::HY,
            _ => {
                let bad = || Error::InvalidInput(format!("unknown condition family `{s}`"));
                let rest = s.strip_prefix('S').ok_or_else(bad)?;
                let (digits, ctor): (&str, fn(u32) -> Family) =
                    if let Some(d) = rest.strip_suffix("_x") {
                        (d, Family::SX)
                    } else if let Some(d) = rest.strip_suffix("_y") {
                        (d, Family::SY)
                    } else {
                        (rest, Family::S)
                    };
                let j: u32 = digits.parse().map_err(|_| bad())?;
                ctor(j)
            }
        };
        Ok(fam)
    }
}

impl From<Family> for String {
    fn from(f: Family) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Family {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A point where a checked inequality fails, with the size of the violation there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub family: Family,
    pub x: f64,
    /// Absent for one-dimensional families.
    pub y: Option<f64>,
    /// `lhs − rhs` at the witness point; always above the tolerance.
    pub margin: f64,
}

/// Outcome of checking `lhs ≤ rhs + tol` over the whole domain.
///
/// `holds` means the first distribution dominates the second for the
/// family being checked, i.e. the expectation ordering
/// `E[φ(X₁, Y₁)] ≥ E[φ(X₂, Y₂)]` is the licensed conclusion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub holds: bool,
    /// Supremum of `lhs − rhs` over the domain.
    pub margin: f64,
    pub witness: Option<Witness>,
    /// `lhs < rhs − tol` somewhere.
    pub strict_somewhere: bool,
    pub tolerance: f64,
    /// The supremum was located by sampling rather than exactly.
    pub approximate: bool,
}

impl DominanceVerdict {
    /// Conjunction of several verdicts. The witness is taken from the first
    /// failing member, so the order of `parts` is the reporting priority.
    pub fn all<'a, I>(parts: I) -> DominanceVerdict
    where
        I: IntoIterator<Item = &'a DominanceVerdict>,
    {
        let mut out = DominanceVerdict {
            holds: true,
            margin: f64::NEG_INFINITY,
            witness: None,
            strict_somewhere: false,
            tolerance: 0.0,
            approximate: false,
        };
        for v in parts {
            out.holds &= v.holds;
            out.margin = out.margin.max(v.margin);
            if out.witness.is_none() {
                out.witness = v.witness;
            }
            out.strict_somewhere |= v.strict_somewhere;
            out.tolerance = out.tolerance.max(v.tolerance);
            out.approximate |= v.approximate;
        }
        out
    }
}

/// Accumulates `lhs − rhs` observations and turns them into a verdict.
#[derive(Debug, Clone)]
pub(crate) struct Scan {
    family: Family,
    tol: f64,
    best: f64,
    best_at: (f64, Option<f64>),
    worst: f64,
}

impl Scan {
    pub(crate) fn new(family: Family, tol: f64) -> Self {
        Scan {
            family,
            tol,
            best: f64::NEG_INFINITY,
            best_at: (0.0, None),
            worst: f64::INFINITY,
        }
    }

    pub(crate) fn observe(&mut self, x: f64, y: Option<f64>, diff: f64) {
        if diff > self.best {
            self.best = diff;
            self.best_at = (x, y);
        }
        self.worst = self.worst.min(diff);
    }

    /// Location and value of the largest observed difference.
    pub(crate) fn argmax(&self) -> ((f64, Option<f64>), f64) {
        (self.best_at, self.best)
    }

    /// Builds the verdict. `refine` may move the witness to a more
    /// representative violating point; it receives the argmax location and
    /// returns `(point, violation)` or `None` to keep the argmax.
    pub(crate) fn finish_with<R>(self, approximate: bool, refine: R) -> DominanceVerdict
    where
        R: FnOnce((f64, Option<f64>)) -> Option<((f64, Option<f64>), f64)>,
    {
        let holds = !(self.best > self.tol);
        let witness = if holds {
            None
        } else {
            let ((x, y), margin) = match refine(self.best_at) {
                Some((p, v)) if v > self.tol => (p, v),
                _ => (self.best_at, self.best),
            };
            Some(Witness { family: self.family, x, y, margin })
        };
        DominanceVerdict {
            holds,
            margin: if self.best.is_finite() { self.best } else { 0.0 },
            witness,
            strict_somewhere: self.worst < -self.tol,
            tolerance: self.tol,
            approximate,
        }
    }

    #[cfg(test)]
    pub(crate) fn finish(self, approximate: bool) -> DominanceVerdict {
        self.finish_with(approximate, |_| None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        let all = [
            Family::F,
            Family::MarginalX,
            Family::MarginalY,
            Family::K,
            Family::H,
            Family::L,
            Family::HX,
            Family::HY,
            Family::S(3),
            Family::SX(1),
            Family::SY(12),
        ];
        for f in all {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("S".parse::<Family>().is_err());
        assert!("Q".parse::<Family>().is_err());
    }

    #[test]
    fn scan_reports_argmax_and_strictness() {
        let mut s = Scan::new(Family::F, 1e-9);
        s.observe(0.1, Some(0.2), -0.5);
        s.observe(0.3, Some(0.4), 0.25);
        let v = s.finish(false);
        assert!(!v.holds);
        assert!(v.strict_somewhere);
        let w = v.witness.unwrap();
        assert_eq!((w.x, w.y, w.margin), (0.3, Some(0.4), 0.25));
    }

    #[test]
    fn conjunction_takes_first_failure() {
        let ok = Scan::new(Family::MarginalX, 1e-9).finish(false);
        let mut bad = Scan::new(Family::K, 1e-9);
        bad.observe(0.5, Some(0.5), 0.5);
        let bad = bad.finish(false);
        let all = DominanceVerdict::all([&ok, &bad]);
        assert!(!all.holds);
        assert_eq!(all.witness.unwrap().family, Family::K);
    }
}
