//! Randomized campaigns checking that the dominance conditions order
//! expectations over the matching utility classes.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{build_cdf, build_common_frame, BivariateStepCdf, CommonFrame, SampleSet};
use crate::error::{invalid, Error, Result};
use crate::first_order::{check_first_order_submodular, check_first_order_supermodular};
use crate::second_order::{check_second_order_submodular, check_second_order_supermodular};
use crate::stieltjes::{exact_expectation, Partition};
use crate::testfuncs::TestFunction;
use crate::verdict::DominanceVerdict;

/// How a trial builds its ordered pair `(f1, f2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `f1` is a coordinatewise upward shift of `f2`.
    MonotoneShift,
    /// `f1` is `f2` after correlation-increasing mass swaps.
    EtSwap,
    /// Independent random sets.
    Unconstrained,
}

/// Which condition set and utility class a campaign exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// First-order conditions, increasing submodular `φ`.
    FirstSub,
    /// First-order conditions, increasing supermodular `φ`.
    FirstSuper,
    /// Second-order conditions, increasing concave `M--` `φ`.
    SecondSub,
    /// Second-order conditions, increasing concave `M++` `φ`.
    SecondSuper,
}

impl Target {
    pub const ALL: [Target; 4] = [
        Target::FirstSub,
        Target::FirstSuper,
        Target::SecondSub,
        Target::SecondSuper,
    ];

    fn name(self) -> &'static str {
        match self {
            Target::FirstSub => "first-sub",
            Target::FirstSuper => "first-super",
            Target::SecondSub => "second-sub",
            Target::SecondSuper => "second-super",
        }
    }

    /// Runs the condition set for `f1` dominating `f2`.
    pub fn check(
        self,
        f1: &BivariateStepCdf,
        f2: &BivariateStepCdf,
        tol: f64,
    ) -> Result<DominanceVerdict> {
        match self {
            Target::FirstSub => check_first_order_submodular(f1, f2, tol),
            Target::FirstSuper => check_first_order_supermodular(f1, f2, tol),
            Target::SecondSub => check_second_order_submodular(f1, f2, tol),
            Target::SecondSuper => check_second_order_supermodular(f1, f2, tol),
        }
    }

    fn submodular(self) -> bool {
        matches!(self, Target::FirstSub | Target::SecondSub)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown target `{s}`")))
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::MonotoneShift => "monotone_shift",
            GeneratorKind::EtSwap => "et_swap",
            GeneratorKind::Unconstrained => "unconstrained",
        })
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monotone_shift" => Ok(GeneratorKind::MonotoneShift),
            "et_swap" => Ok(GeneratorKind::EtSwap),
            "unconstrained" => Ok(GeneratorKind::Unconstrained),
            _ => invalid(format!("unknown generator `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: usize,
    /// Inclusive range for the number of atoms per distribution.
    pub atoms: (usize, usize),
    pub generator: GeneratorKind,
    pub target: Target,
    pub phis_per_trial: usize,
    pub tol: f64,
}

impl CampaignConfig {
    pub fn new(target: Target, generator: GeneratorKind, trials: usize, phis_per_trial: usize) -> Self {
        CampaignConfig {
            seed: 0,
            trials,
            atoms: (2, 8),
            generator,
            target,
            phis_per_trial,
            tol: crate::DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.atoms.0 == 0 || self.atoms.0 > self.atoms.1 {
            return invalid(format!("atom range {:?} must satisfy 1 ≤ lo ≤ hi", self.atoms));
        }
        if !(self.tol > 0.0) {
            return invalid(format!("tolerance {} must be positive", self.tol));
        }
        Ok(())
    }
}

/// A failed expectation ordering with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: usize,
    pub seed: u64,
    pub f1_atoms: Vec<(f64, f64, f64)>,
    pub f2_atoms: Vec<(f64, f64, f64)>,
    pub phi: String,
    pub e1: f64,
    pub e2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub trials_run: usize,
    /// Trials whose pair satisfied the target's conditions.
    pub conditions_satisfied: usize,
    /// ET-swap trials where no eligible pair existed.
    pub unchanged_pairs: usize,
    pub expectation_checks: usize,
    pub violations: Vec<Violation>,
    /// Smallest `E₁φ − E₂φ` over checked pairs.
    pub min_margin: Option<f64>,
}

impl CampaignReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub f1: BivariateStepCdf,
    pub f2: BivariateStepCdf,
    pub satisfied: bool,
    pub unchanged: bool,
    pub checks: usize,
    pub min_margin: Option<f64>,
    pub violations: Vec<Violation>,
}

fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn random_set<R: Rng>(rng: &mut R, n_atoms: usize) -> Result<SampleSet> {
    if n_atoms == 0 {
        return invalid("at least one atom is required");
    }
    let atoms: Vec<(f64, f64, f64)> = (0..n_atoms)
        .map(|_| (rng.gen::<f64>(), rng.gen::<f64>(), 1.0 - rng.gen::<f64>()))
        .collect();
    SampleSet::from_atoms(&atoms)
}

/// `n_atoms` uniform points in `[0, 1)²` with normalized positive weights.
pub fn gen_random_sampleset(seed: u64, n_atoms: usize) -> Result<SampleSet> {
    random_set(&mut ChaCha8Rng::seed_from_u64(seed), n_atoms)
}

/// Moves each atom by the given nonnegative increments, clamping at 1.
pub fn shift_atoms(s: &SampleSet, increments: &[(f64, f64)]) -> Result<SampleSet> {
    if increments.len() != s.len() {
        return invalid(format!("{} increments for {} atoms", increments.len(), s.len()));
    }
    if increments.iter().any(|&(dx, dy)| !(dx >= 0.0 && dy >= 0.0)) {
        return invalid("shift increments must be nonnegative");
    }
    let atoms: Vec<(f64, f64, f64)> = s
        .atoms()
        .zip(increments)
        .map(|((x, y, w), &(dx, dy))| ((x + dx).min(1.0), (y + dy).min(1.0), w))
        .collect();
    SampleSet::from_atoms(&atoms)
}

const MAX_SHIFT: f64 = 0.3;

fn shift_with<R: Rng>(s: &SampleSet, rng: &mut R) -> SampleSet {
    let inc: Vec<(f64, f64)> = (0..s.len())
        .map(|_| (MAX_SHIFT * rng.gen::<f64>(), MAX_SHIFT * rng.gen::<f64>()))
        .collect();
    shift_atoms(s, &inc).expect("increments are nonnegative and match")
}

/// Random coordinatewise upward shift of every atom.
pub fn monotone_shift(s: &SampleSet, seed: u64) -> SampleSet {
    shift_with(s, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Result of [`et_swap`].
#[derive(Debug, Clone, PartialEq)]
pub struct Swapped {
    pub set: SampleSet,
    /// Number of swaps performed; zero means the input came back unchanged.
    pub swaps: usize,
}

fn swap_with<R: Rng>(s: &SampleSet, rng: &mut R, eps: f64, count: usize) -> Result<Swapped> {
    if !(eps > 0.0) {
        return invalid(format!("swap mass {eps} must be positive"));
    }
    let mut atoms: Vec<(f64, f64, f64)> = s.atoms().collect();
    let mut swaps = 0;
    for _ in 0..count {
        // (a, d) and (b, c) with a < b, c < d.
        let eligible: Vec<(usize, usize)> = (0..atoms.len())
            .flat_map(|p| (0..atoms.len()).map(move |q| (p, q)))
            .filter(|&(p, q)| {
                let ((a, d, wp), (b, c, wq)) = (atoms[p], atoms[q]);
                a < b && c < d && wp >= eps && wq >= eps
            })
            .collect();
        let Some(&(p, q)) = eligible.choose(rng) else {
            break;
        };
        let ((a, d, _), (b, c, _)) = (atoms[p], atoms[q]);
        atoms[p].2 -= eps;
        atoms[q].2 -= eps;
        for target in [(a, c), (b, d)] {
            match atoms.iter_mut().find(|t| (t.0, t.1) == target) {
                Some(t) => t.2 += eps,
                None => atoms.push((target.0, target.1, eps)),
            }
        }
        swaps += 1;
    }
    if swaps == 0 {
        return Ok(Swapped {
            set: s.clone(),
            swaps,
        });
    }
    atoms.retain(|t| t.2 > 0.0);
    Ok(Swapped {
        set: SampleSet::from_atoms(&atoms)?,
        swaps,
    })
}

/// Up to `count` correlation-increasing swaps of mass `eps`: weight moves
/// from `(a, d)` and `(b, c)` to `(a, c)` and `(b, d)`, where `a < b` and
/// `c < d`. Marginals are preserved and the joint CDF can only increase.
pub fn et_swap(s: &SampleSet, seed: u64, eps: f64, count: usize) -> Result<Swapped> {
    swap_with(s, &mut ChaCha8Rng::seed_from_u64(seed), eps, count)
}

fn random_member<R: Rng>(rng: &mut R, submodular: bool) -> TestFunction {
    // (0, 1] for Cobb–Douglas exponents, [1, 4] for complement powers.
    let unit = |rng: &mut R| 1.0 - rng.gen::<f64>();
    if submodular {
        if rng.gen_bool(0.5) {
            TestFunction::modular_complement(rng.gen_range(0.0..=1.0))
        } else {
            TestFunction::neg_complement_power(rng.gen_range(1.0..=4.0), rng.gen_range(1.0..=4.0))
        }
    } else {
        TestFunction::cobb_douglas(unit(rng), unit(rng))
    }
    .expect("parameters are drawn inside the valid ranges")
}

/// A random increasing test function from the class matching `target`,
/// a two-term cone combination one time in three.
pub fn random_phi<R: Rng>(rng: &mut R, target: Target) -> TestFunction {
    let sub = target.submodular();
    if rng.gen_range(0..3) == 0 {
        let fs = vec![random_member(rng, sub), random_member(rng, sub)];
        let ws = vec![rng.gen::<f64>() + 0.01, rng.gen::<f64>() + 0.01];
        TestFunction::cone_combine(fs, ws).expect("members share their class")
    } else {
        random_member(rng, sub)
    }
}

/// Random step CDF on the unit frame with `n_atoms` atoms.
pub fn random_cdf<R: Rng>(rng: &mut R, n_atoms: usize) -> Result<BivariateStepCdf> {
    let s = random_set(rng, n_atoms)?;
    build_cdf(&s, &CommonFrame::unit())
}

fn random_axis<R: Rng>(rng: &mut R, max_blocks: usize) -> (Vec<f64>, Vec<f64>) {
    let blocks = rng.gen_range(1..=max_blocks.max(1));
    let mut cuts: Vec<f64> = (1..blocks).map(|_| rng.gen::<f64>()).collect();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let sel = cuts.windows(2).map(|w| rng.gen_range(w[0]..=w[1])).collect();
    (cuts, sel)
}

/// Random partition with up to `max_blocks` blocks per axis and selection
/// points drawn uniformly from each block.
pub fn random_partition<R: Rng>(rng: &mut R, max_blocks: usize) -> Partition {
    let (xc, xs) = random_axis(rng, max_blocks);
    let (yc, ys) = random_axis(rng, max_blocks);
    Partition::new(xc, yc, xs, ys).expect("cuts are sorted and selections lie inside")
}

fn to_cdfs(a: &SampleSet, b: &SampleSet) -> Result<(BivariateStepCdf, BivariateStepCdf)> {
    let frame = build_common_frame(a, b)?;
    debug_assert_eq!(frame, CommonFrame::unit());
    Ok((build_cdf(a, &frame)?, build_cdf(b, &frame)?))
}

/// Runs trial `index` of a campaign in isolation.
pub fn run_trial(cfg: &CampaignConfig, index: usize) -> Result<TrialOutcome> {
    cfg.validate()?;
    let mut rng = trial_rng(cfg.seed, index);
    let n = rng.gen_range(cfg.atoms.0..=cfg.atoms.1);
    let base = random_set(&mut rng, n)?;
    let mut unchanged = false;
    let (s1, s2) = match cfg.generator {
        GeneratorKind::MonotoneShift => (shift_with(&base, &mut rng), base),
        GeneratorKind::EtSwap => {
            let eps = 0.3 / n as f64;
            let count = rng.gen_range(1..=3);
            let swapped = swap_with(&base, &mut rng, eps, count)?;
            unchanged = swapped.swaps == 0;
            (swapped.set, base)
        }
        GeneratorKind::Unconstrained => {
            let m = rng.gen_range(cfg.atoms.0..=cfg.atoms.1);
            (random_set(&mut rng, m)?, base)
        }
    };
    let (f1, f2) = to_cdfs(&s1, &s2)?;
    let satisfied = cfg.target.check(&f1, &f2, cfg.tol)?.holds;

    let mut outcome = TrialOutcome {
        f1,
        f2,
        satisfied,
        unchanged,
        checks: 0,
        min_margin: None,
        violations: vec![],
    };
    if !satisfied {
        return Ok(outcome);
    }
    for _ in 0..cfg.phis_per_trial {
        let phi = random_phi(&mut rng, cfg.target);
        let e1 = exact_expectation(&phi, &outcome.f1);
        let e2 = exact_expectation(&phi, &outcome.f2);
        let margin = e1 - e2;
        outcome.checks += 1;
        outcome.min_margin = Some(outcome.min_margin.map_or(margin, |m: f64| m.min(margin)));
        if e1 < e2 - cfg.tol {
            outcome.violations.push(Violation {
                trial: index,
                seed: cfg.seed,
                f1_atoms: outcome.f1.unit_atoms().collect(),
                f2_atoms: outcome.f2.unit_atoms().collect(),
                phi: phi.descriptor(),
                e1,
                e2,
            });
        }
    }
    Ok(outcome)
}

/// Runs every trial, in parallel, and merges outcomes in trial order.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<_>>()?;
    let mut report = CampaignReport {
        config: cfg.clone(),
        trials_run: outcomes.len(),
        conditions_satisfied: 0,
        unchanged_pairs: 0,
        expectation_checks: 0,
        violations: vec![],
        min_margin: None,
    };
    for o in outcomes {
        report.conditions_satisfied += o.satisfied as usize;
        report.unchanged_pairs += o.unchanged as usize;
        report.expectation_checks += o.checks;
        if let Some(m) = o.min_margin {
            report.min_margin = Some(report.min_margin.map_or(m, |r: f64| r.min(m)));
        }
        report.violations.extend(o.violations);
    }
    Ok(report)
}

/// Pair for which `F₁ ≤ F₂` everywhere yet `E₁[xy] < E₂[xy]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCounterexample {
    pub f1: BivariateStepCdf,
    pub f2: BivariateStepCdf,
    pub phi: TestFunction,
    pub e1: f64,
    pub e2: f64,
}

/// `f1` puts mass ½ on `(1, 0)` and `(0, 1)`, `f2` on `(0, 0)` and `(1, 1)`;
/// `φ = xy`.
pub fn boundary_counterexample() -> BoundaryCounterexample {
    let anti = [(1.0, 0.0, 0.5), (0.0, 1.0, 0.5)];
    let diag = [(0.0, 0.0, 0.5), (1.0, 1.0, 0.5)];
    let f1 = BivariateStepCdf::from_unit_atoms(CommonFrame::unit(), &anti).expect("valid atoms");
    let f2 = BivariateStepCdf::from_unit_atoms(CommonFrame::unit(), &diag).expect("valid atoms");
    let phi = TestFunction::cobb_douglas(1.0, 1.0).expect("valid exponents");
    let e1 = exact_expectation(&phi, &f1);
    let e2 = exact_expectation(&phi, &f2);
    BoundaryCounterexample { f1, f2, phi, e1, e2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Family;

    const TOL: f64 = 1e-9;

    fn sorted(s: &SampleSet) -> Vec<(f64, f64, f64)> {
        let mut v: Vec<_> = s.atoms().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn random_sets() {
        assert_eq!(gen_random_sampleset(7, 5).unwrap(), gen_random_sampleset(7, 5).unwrap());
        assert_ne!(gen_random_sampleset(7, 5).unwrap(), gen_random_sampleset(8, 5).unwrap());
        let one = gen_random_sampleset(3, 1).unwrap();
        assert_eq!(one.weights(), &[1.0]);
        let s = gen_random_sampleset(11, 40).unwrap();
        assert!((s.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(gen_random_sampleset(1, 0).is_err());
    }

    #[test]
    fn shift_examples() {
        let s = gen_random_sampleset(5, 6).unwrap();
        let zero = vec![(0.0, 0.0); 6];
        assert_eq!(shift_atoms(&s, &zero).unwrap(), s);

        let top = shift_atoms(&s, &[(1.0, 1.0); 6]).unwrap();
        assert_eq!(top.atoms().collect::<Vec<_>>(), vec![(1.0, 1.0, 1.0)]);
        assert!(shift_atoms(&s, &[(0.1, 0.1)]).is_err());
        assert!(shift_atoms(&s, &[(-0.1, 0.0); 6]).is_err());

        for seed in 0..100 {
            let base = gen_random_sampleset(seed, 1 + seed as usize % 7).unwrap();
            let shifted = monotone_shift(&base, seed + 1000);
            let (f1, f2) = to_cdfs(&shifted, &base).unwrap();
            assert!(check_first_order_submodular(&f1, &f2, TOL).unwrap().holds);
        }
    }

    #[test]
    fn swap_example() {
        let before = SampleSet::from_atoms(&[(0.2, 0.8, 0.5), (0.8, 0.2, 0.5)]).unwrap();
        let after = et_swap(&before, 1, 0.5, 1).unwrap();
        assert_eq!(after.swaps, 1);
        assert_eq!(sorted(&after.set), vec![(0.2, 0.2, 0.5), (0.8, 0.8, 0.5)]);

        let xy = |x: f64, y: f64| x * y;
        assert!((exact_expectation(&xy, &before) - 0.16).abs() < 1e-15);
        assert!((exact_expectation(&xy, &after.set) - 0.34).abs() < 1e-15);

        let (f1, f2) = to_cdfs(&after.set, &before).unwrap();
        assert_eq!(f1.marginal_x().values(), f2.marginal_x().values());
        assert!(check_first_order_supermodular(&f1, &f2, TOL).unwrap().holds);
    }

    #[test]
    fn swap_without_eligible_pair() {
        let diag = SampleSet::from_atoms(&[(0.2, 0.2, 0.5), (0.8, 0.8, 0.5)]).unwrap();
        let out = et_swap(&diag, 1, 0.1, 3).unwrap();
        assert_eq!(out.swaps, 0);
        assert_eq!(out.set, diag);
        assert!(et_swap(&diag, 1, 0.0, 1).is_err());
    }

    #[test]
    fn swaps_preserve_marginals() {
        for seed in 0..50 {
            let base = gen_random_sampleset(seed, 6).unwrap();
            let out = et_swap(&base, seed, 0.05, 3).unwrap();
            let (f1, f2) = to_cdfs(&out.set, &base).unwrap();
            let grid = crate::distribution::merge_grids(&f1, &f2);
            for &x in &grid.xs {
                assert!((f1.eval(x, 1.0).unwrap() - f2.eval(x, 1.0).unwrap()).abs() <= 1e-15);
            }
            for &y in &grid.ys {
                assert!((f1.eval(1.0, y).unwrap() - f2.eval(1.0, y).unwrap()).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn phi_families_match_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let f = random_phi(&mut rng, Target::FirstSub);
            assert!(f.belongs_to(crate::testfuncs::ModularityClass::SubSub));
            let f = random_phi(&mut rng, Target::SecondSuper);
            assert!(f.belongs_to(crate::testfuncs::ModularityClass::SuperSuper));
            assert!(f.is_increasing() && f.is_concave());
        }
    }

    #[test]
    fn small_campaigns_are_clean_and_deterministic() {
        let cases = [
            (Target::FirstSub, GeneratorKind::MonotoneShift),
            (Target::FirstSuper, GeneratorKind::EtSwap),
            (Target::SecondSub, GeneratorKind::MonotoneShift),
            (Target::SecondSuper, GeneratorKind::EtSwap),
        ];
        for (target, generator) in cases {
            let cfg = CampaignConfig::new(target, generator, 30, 5);
            let r = run_campaign(&cfg).unwrap();
            assert!(r.is_clean(), "{target}: {:?}", r.violations);
            assert_eq!(r.trials_run, 30);
            assert_eq!(r.conditions_satisfied, 30);
            assert_eq!(r, run_campaign(&cfg).unwrap());
        }
    }

    #[test]
    fn unconstrained_pairs_are_filtered() {
        let mut cfg = CampaignConfig::new(Target::FirstSub, GeneratorKind::Unconstrained, 50, 3);
        cfg.atoms = (5, 8);
        let r = run_campaign(&cfg).unwrap();
        assert!(r.conditions_satisfied < r.trials_run);
        assert!(r.is_clean());
    }

    #[test]
    fn trials_replay_from_the_config() {
        let cfg = CampaignConfig::new(Target::FirstSuper, GeneratorKind::Unconstrained, 20, 4);
        let a = run_trial(&cfg, 13).unwrap();
        let b = run_trial(&cfg, 13).unwrap();
        assert_eq!(a, b);
        let mut bad = cfg.clone();
        bad.atoms = (0, 3);
        assert!(run_campaign(&bad).is_err());
        bad.atoms = (1, 3);
        bad.tol = 0.0;
        assert!(run_campaign(&bad).is_err());
        let mut empty = cfg;
        empty.trials = 0;
        let r = run_campaign(&empty).unwrap();
        assert_eq!((r.trials_run, r.is_clean()), (0, true));
    }

    #[test]
    fn boundary_pair() {
        let b = boundary_counterexample();
        assert_eq!((b.e1, b.e2), (0.0, 0.5));
        assert!(check_first_order_submodular(&b.f1, &b.f2, TOL).unwrap().holds);
        let v = check_first_order_supermodular(&b.f1, &b.f2, TOL).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!((w.family, w.x, w.y), (Family::K, 0.5, Some(0.5)));
    }
}
