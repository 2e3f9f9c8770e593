//! Command-line front end for `bivdom`: ingest point files, run dominance
//! checks, evaluate expectations, export surfaces, run verification
//! campaigns and bootstrap the sup statistics.

pub mod infer;
pub mod ingest;
pub mod report;

use std::path::{Path, PathBuf};

use bivdom::first_order::FirstOrderConditions;
use bivdom::second_order::{h_surface, l_surface, SecondOrderConditions};
use bivdom::verify::{run_campaign, CampaignConfig, GeneratorKind, Target};
use bivdom::{
    build_cdf, merge_grids, sd_check, BivariateStepCdf, CommonFrame, DominanceVerdict, Family,
    TestFunction, DEFAULT_TOL,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::infer::bootstrap_pvalues;
use crate::ingest::{ingest, Ingested};
use crate::report::{verdict_out, FrameOut, PValueOut, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{origin}: line {line}: {msg}")]
    Parse {
        origin: String,
        line: u64,
        msg: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bivdom::Error),
}

#[derive(Debug, Parser)]
#[command(name = "bivdom", version, about = "Bivariate stochastic dominance for discrete distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Absolute tolerance applied to every comparison.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Class {
    Sub,
    Super,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Surface {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "K", alias = "k")]
    K,
    #[value(name = "H", alias = "h")]
    H,
    #[value(name = "L", alias = "l")]
    L,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the first distribution dominates the second.
    Check(CheckArgs),
    /// Exact expectation of a registered test function.
    Expectation(ExpectationArgs),
    /// Dump F, K, H or L on the evaluation lattice as a CSV matrix.
    Surface(SurfaceArgs),
    /// Run a randomized verification campaign.
    Verify(VerifyArgs),
    /// Check plus bootstrap p-values for each condition family.
    Infer(InferArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Candidate dominating distribution.
    pub first: PathBuf,
    /// Candidate dominated distribution.
    pub second: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub order: u8,
    #[arg(long, value_enum, default_value_t = Class::Both)]
    pub class: Class,
    /// Compare the marginals with the univariate order-N conditions instead.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub uni_j: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct ExpectationArgs {
    /// Registry descriptor, e.g. `cobb_douglas:0.5,0.5`.
    #[arg(long)]
    pub phi: String,
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    #[arg(long, value_enum)]
    pub which: Surface,
    pub file: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// first-sub, first-super, second-sub or second-super.
    #[arg(long, default_value = "first-sub")]
    pub target: String,
    /// monotone_shift, et_swap or unconstrained.
    #[arg(long, default_value = "monotone_shift")]
    pub generator: String,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 20)]
    pub phis: usize,
    #[arg(long, default_value_t = 2)]
    pub min_atoms: usize,
    #[arg(long, default_value_t = 8)]
    pub max_atoms: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct InferArgs {
    #[command(flatten)]
    pub check: CheckArgs,
    /// Number of bootstrap replicates.
    #[arg(long)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Rendered output and process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub exit: u8,
}

struct Pair {
    a: Ingested,
    b: Ingested,
    frame: CommonFrame,
    f1: BivariateStepCdf,
    f2: BivariateStepCdf,
}

fn load_pair(first: &Path, second: &Path) -> Result<Pair, CliError> {
    let a = ingest(first)?;
    let b = ingest(second)?;
    let frame = CommonFrame::enclosing([&a.set, &b.set])?;
    let f1 = build_cdf(&a.set, &frame)?;
    let f2 = build_cdf(&b.set, &frame)?;
    Ok(Pair { a, b, frame, f1, f2 })
}

/// Verdicts for the requested conditions plus the conclusions they support.
pub struct Evaluation {
    pub verdicts: Vec<(Family, DominanceVerdict)>,
    pub conclusions: Vec<String>,
    pub holds: bool,
}

pub fn evaluate(
    f1: &BivariateStepCdf,
    f2: &BivariateStepCdf,
    args: &CheckArgs,
    tol: f64,
) -> Result<Evaluation, CliError> {
    let mut verdicts = vec![];
    let mut conclusions = vec![];
    let mut holds = true;
    let mut conclude = |name: String, v: &DominanceVerdict| {
        holds &= v.holds;
        if v.holds {
            conclusions.push(name);
        }
    };
    let sub = args.class != Class::Super;
    let sup = args.class != Class::Sub;
    if let Some(j) = args.uni_j {
        let x = sd_check(&f1.marginal_x(), &f2.marginal_x(), j, tol)?;
        let y = sd_check(&f1.marginal_y(), &f2.marginal_y(), j, tol)?;
        conclude(format!("univariate_sd{j}_x"), &x);
        conclude(format!("univariate_sd{j}_y"), &y);
        verdicts.push((Family::SX(j), x));
        verdicts.push((Family::SY(j), y));
    } else if args.order == 1 {
        let c = FirstOrderConditions::evaluate(f1, f2, tol)?;
        if sub {
            conclude("first_order_submodular".into(), &c.submodular());
            verdicts.push((Family::F, c.f.clone()));
        }
        if sup {
            conclude("first_order_supermodular".into(), &c.supermodular());
            verdicts.push((Family::K, c.k.clone()));
        }
        verdicts.push((Family::MarginalX, c.marginal_x));
        verdicts.push((Family::MarginalY, c.marginal_y));
    } else {
        let c = SecondOrderConditions::evaluate(f1, f2, tol)?;
        if sub {
            conclude("second_order_submodular".into(), &c.submodular());
            verdicts.push((Family::H, c.h.clone()));
        }
        if sup {
            conclude("second_order_supermodular".into(), &c.supermodular());
            verdicts.push((Family::L, c.l.clone()));
        }
        verdicts.push((Family::HX, c.hx));
        verdicts.push((Family::HY, c.hy));
    }
    if f1 == f2 {
        conclusions.push("identical_distributions".into());
    }
    Ok(Evaluation {
        verdicts,
        conclusions,
        holds,
    })
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--tol must be positive, got {tol}")))
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
    }
}

fn cmd_check(args: &CheckArgs, tol: f64, format: Format) -> Result<Outcome, CliError> {
    let pair = load_pair(&args.first, &args.second)?;
    let e = evaluate(&pair.f1, &pair.f2, args, tol)?;
    let report = Report {
        command: "check".into(),
        frame: FrameOut::from(&pair.frame),
        tolerance: tol,
        verdicts: e
            .verdicts
            .iter()
            .map(|(fam, v)| verdict_out(*fam, v, &pair.frame))
            .collect(),
        conclusions: e.conclusions,
        pvalues: None,
        seed: None,
    };
    Ok(Outcome {
        output: render(&report, format),
        exit: if e.holds { 0 } else { 1 },
    })
}

fn cmd_infer(args: &InferArgs, tol: f64, format: Format) -> Result<Outcome, CliError> {
    if args.bootstrap == 0 {
        return Err(CliError::Usage("--bootstrap must be at least 1".into()));
    }
    let pair = load_pair(&args.check.first, &args.check.second)?;
    let e = evaluate(&pair.f1, &pair.f2, &args.check, tol)?;
    let observed: Vec<f64> = e.verdicts.iter().map(|(_, v)| v.margin).collect();
    let margins = |a: &BivariateStepCdf, b: &BivariateStepCdf| {
        let e = evaluate(a, b, &args.check, tol)?;
        Ok(e.verdicts.iter().map(|(_, v)| v.margin).collect())
    };
    let ps = bootstrap_pvalues(
        (&pair.a.set, pair.a.rows),
        (&pair.b.set, pair.b.rows),
        &pair.frame,
        args.bootstrap,
        args.seed,
        &observed,
        margins,
    )?;
    let report = Report {
        command: "infer".into(),
        frame: FrameOut::from(&pair.frame),
        tolerance: tol,
        verdicts: e
            .verdicts
            .iter()
            .map(|(fam, v)| verdict_out(*fam, v, &pair.frame))
            .collect(),
        conclusions: e.conclusions,
        pvalues: Some(
            e.verdicts
                .iter()
                .zip(ps)
                .map(|((fam, _), p)| PValueOut {
                    family: fam.to_string(),
                    p,
                    b: args.bootstrap,
                })
                .collect(),
        ),
        seed: Some(args.seed),
    };
    Ok(Outcome {
        output: render(&report, format),
        exit: if e.holds { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct ExpectationOut {
    command: &'static str,
    phi: String,
    frame: FrameOut,
    expectations: Vec<ExpectationRow>,
}

#[derive(Serialize)]
struct ExpectationRow {
    path: String,
    value: f64,
}

fn cmd_expectation(args: &ExpectationArgs, format: Format) -> Result<Outcome, CliError> {
    let phi = TestFunction::parse(&args.phi).map_err(|e| CliError::Usage(e.to_string()))?;
    let sets = args
        .files
        .iter()
        .map(|p| ingest(p))
        .collect::<Result<Vec<_>, _>>()?;
    let frame = CommonFrame::enclosing(sets.iter().map(|s| &s.set))?;
    let mut rows = vec![];
    for (path, s) in args.files.iter().zip(&sets) {
        let cdf = build_cdf(&s.set, &frame)?;
        rows.push(ExpectationRow {
            path: path.display().to_string(),
            value: bivdom::exact_expectation(&phi, &cdf),
        });
    }
    let output = match format {
        Format::Json => {
            let out = ExpectationOut {
                command: "expectation",
                phi: phi.descriptor(),
                frame: FrameOut::from(&frame),
                expectations: rows,
            };
            serde_json::to_string_pretty(&out).expect("serializable") + "\n"
        }
        Format::Text => rows
            .iter()
            .map(|r| format!("{}: E[{}] = {}\n", r.path, phi.descriptor(), r.value))
            .collect(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(["path", "phi", "value"]).unwrap();
            for r in &rows {
                w.write_record([r.path.clone(), phi.descriptor(), r.value.to_string()])
                    .unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
    };
    Ok(Outcome { output, exit: 0 })
}

#[derive(Serialize)]
struct SurfaceOut {
    which: String,
    frame: FrameOut,
    xs: Vec<f64>,
    ys: Vec<f64>,
    values: Vec<Vec<f64>>,
}

/// Surface values on `{0} ∪ grid` in normalized coordinates; rows follow x.
pub fn surface_matrix(cdf: &BivariateStepCdf, which: Surface) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let grid = merge_grids(cdf, cdf);
    let h = h_surface(cdf, &grid);
    let (xs, ys) = (h.xs.clone(), h.ys.clone());
    let values = match which {
        Surface::H => (0..xs.len())
            .map(|k| (0..ys.len()).map(|l| h.corner(k, l)).collect())
            .collect(),
        Surface::L => {
            let l = l_surface(cdf, &grid);
            (0..xs.len())
                .map(|k| (0..ys.len()).map(|m| l.corner(k, m)).collect())
                .collect()
        }
        Surface::F | Surface::K => xs
            .iter()
            .map(|&x| {
                ys.iter()
                    .map(|&y| {
                        let f = cdf.eval(x, y).expect("lattice lies in the unit square");
                        if which == Surface::F {
                            f
                        } else {
                            cdf.eval(x, 1.0).unwrap() + cdf.eval(1.0, y).unwrap() - f
                        }
                    })
                    .collect()
            })
            .collect(),
    };
    (xs, ys, values)
}

fn cmd_surface(args: &SurfaceArgs, format: Format) -> Result<Outcome, CliError> {
    let s = ingest(&args.file)?;
    let frame = CommonFrame::enclosing([&s.set])?;
    let cdf = build_cdf(&s.set, &frame)?;
    let (xs, ys, values) = surface_matrix(&cdf, args.which);
    let name = format!("{:?}", args.which);
    let output = if format == Format::Json {
        let out = SurfaceOut {
            which: name,
            frame: FrameOut::from(&frame),
            xs,
            ys,
            values,
        };
        serde_json::to_string_pretty(&out).expect("serializable") + "\n"
    } else {
        let mut w = csv::Writer::from_writer(vec![]);
        let mut header = vec![format!("{name}: x\\y")];
        header.extend(ys.iter().map(|y| y.to_string()));
        w.write_record(&header).unwrap();
        for (x, row) in xs.iter().zip(&values) {
            let mut rec = vec![x.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    };
    Ok(Outcome { output, exit: 0 })
}

fn cmd_verify(args: &VerifyArgs, tol: f64, format: Format) -> Result<Outcome, CliError> {
    let target: Target = args.target.parse().map_err(|e: bivdom::Error| CliError::Usage(e.to_string()))?;
    let generator: GeneratorKind = args
        .generator
        .parse()
        .map_err(|e: bivdom::Error| CliError::Usage(e.to_string()))?;
    let cfg = CampaignConfig {
        seed: args.seed,
        trials: args.trials,
        atoms: (args.min_atoms, args.max_atoms),
        generator,
        target,
        phis_per_trial: args.phis,
        tol,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let r = run_campaign(&cfg)?;
    let output = match format {
        Format::Json => serde_json::to_string_pretty(&r).expect("serializable") + "\n",
        Format::Text => {
            let mut s = format!(
                "campaign {} / {} seed {}\ntrials: {}\nconditions satisfied: {}\nexpectation checks: {}\nviolations: {}\n",
                cfg.target,
                cfg.generator,
                cfg.seed,
                r.trials_run,
                r.conditions_satisfied,
                r.expectation_checks,
                r.violations.len()
            );
            if let Some(m) = r.min_margin {
                s += &format!("min margin: {m}\n");
            }
            for v in &r.violations {
                s += &format!("  trial {}: {} e1 = {} e2 = {}\n", v.trial, v.phi, v.e1, v.e2);
            }
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(["trial", "seed", "phi", "e1", "e2"]).unwrap();
            for v in &r.violations {
                w.write_record([
                    v.trial.to_string(),
                    v.seed.to_string(),
                    v.phi.clone(),
                    v.e1.to_string(),
                    v.e2.to_string(),
                ])
                .unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
    };
    Ok(Outcome {
        output,
        exit: if r.is_clean() { 0 } else { 1 },
    })
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    check_tol(cli.tol)?;
    match &cli.command {
        Command::Check(a) => cmd_check(a, cli.tol, cli.format),
        Command::Infer(a) => cmd_infer(a, cli.tol, cli.format),
        Command::Expectation(a) => cmd_expectation(a, cli.format),
        Command::Surface(a) => cmd_surface(a, cli.format),
        Command::Verify(a) => cmd_verify(a, cli.tol, cli.format),
    }
}
