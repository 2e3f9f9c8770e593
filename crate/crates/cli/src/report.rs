//! Machine-readable and human-readable report formats.

use std::fmt::Write as _;

use bivdom::{CommonFrame, DominanceVerdict, Family};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameOut {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl From<&CommonFrame> for FrameOut {
    fn from(f: &CommonFrame) -> Self {
        FrameOut {
            x_lo: f.x_lo,
            x_hi: f.x_hi,
            y_lo: f.y_lo,
            y_hi: f.y_hi,
        }
    }
}

/// Witness location in source units. Families defined on one axis leave the
/// other coordinate empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointOut {
    pub x: Option<f64>,
    pub y: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictOut {
    pub family: String,
    pub holds: bool,
    pub witness: Option<PointOut>,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValueOut {
    pub family: String,
    pub p: f64,
    #[serde(rename = "B")]
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub frame: FrameOut,
    pub tolerance: f64,
    pub verdicts: Vec<VerdictOut>,
    pub conclusions: Vec<String>,
    pub pvalues: Option<Vec<PValueOut>>,
    pub seed: Option<u64>,
}

fn on_y_axis(f: Family) -> bool {
    matches!(f, Family::MarginalY | Family::HY | Family::SY(_))
}

fn on_x_axis(f: Family) -> bool {
    matches!(f, Family::MarginalX | Family::HX | Family::SX(_))
}

/// Converts a verdict computed on the unit frame under the label `family`,
/// mapping the witness back to source units along the axis `family` lives on.
pub fn verdict_out(family: Family, v: &DominanceVerdict, frame: &CommonFrame) -> VerdictOut {
    let witness = v.witness.as_ref().map(|w| {
        let ux = |u: f64| frame.x_lo + u * (frame.x_hi - frame.x_lo);
        let uy = |u: f64| frame.y_lo + u * (frame.y_hi - frame.y_lo);
        if on_y_axis(family) {
            PointOut {
                x: None,
                y: Some(uy(w.x)),
            }
        } else if on_x_axis(family) {
            PointOut {
                x: Some(ux(w.x)),
                y: None,
            }
        } else {
            PointOut {
                x: Some(ux(w.x)),
                y: w.y.map(uy),
            }
        }
    });
    VerdictOut {
        family: family.to_string(),
        holds: v.holds,
        witness,
        margin: v.margin,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let f = &self.frame;
        writeln!(s, "command: {}", self.command).unwrap();
        writeln!(s, "frame: [{}, {}] x [{}, {}]", f.x_lo, f.x_hi, f.y_lo, f.y_hi).unwrap();
        writeln!(s, "tolerance: {}", self.tolerance).unwrap();
        if let Some(seed) = self.seed {
            writeln!(s, "seed: {seed}").unwrap();
        }
        for v in &self.verdicts {
            let status = if v.holds { "holds" } else { "fails" };
            write!(s, "  {:<12} {:<6} margin {}", v.family, status, v.margin).unwrap();
            if let Some(w) = &v.witness {
                write!(s, "  witness ({}, {})", opt(w.x), opt(w.y)).unwrap();
            }
            s.push('\n');
        }
        if let Some(ps) = &self.pvalues {
            for p in ps {
                writeln!(s, "  p[{}] = {} (B = {})", p.family, p.p, p.b).unwrap();
            }
        }
        if self.conclusions.is_empty() {
            writeln!(s, "conclusions: none").unwrap();
        } else {
            writeln!(s, "conclusions: {}", self.conclusions.join(", ")).unwrap();
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["family", "holds", "witness_x", "witness_y", "margin", "p"])
            .unwrap();
        for v in &self.verdicts {
            let p = self
                .pvalues
                .iter()
                .flatten()
                .find(|p| p.family == v.family)
                .map_or(String::new(), |p| p.p.to_string());
            let (wx, wy) = v.witness.map_or((None, None), |w| (w.x, w.y));
            let cell = |c: Option<f64>| c.map_or(String::new(), |c| c.to_string());
            w.write_record([
                v.family.clone(),
                v.holds.to_string(),
                cell(wx),
                cell(wy),
                v.margin.to_string(),
                p,
            ])
            .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}
