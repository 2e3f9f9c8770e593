//! Recentred bootstrap for sup-type dominance statistics.
//!
//! For each condition family the statistic is `T = sup (lhs − rhs)` over the
//! evaluation lattice, which is the verdict margin. Each replicate resamples
//! both inputs with replacement at their original row counts, keeps the
//! observed frame, and recomputes `T*`. The p-value is
//! `(1 + #{T* − T ≥ T}) / (B + 1)`; small values are evidence against the
//! condition.

use bivdom::{build_cdf, BivariateStepCdf, CommonFrame, SampleSet};
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::CliError;

/// Draws `rows` points from `s` with probability proportional to weight.
pub fn resample<R: Rng>(s: &SampleSet, rows: usize, rng: &mut R) -> SampleSet {
    let dist = WeightedIndex::new(s.weights()).expect("weights are normalized and positive");
    let points: Vec<(f64, f64)> = (0..rows).map(|_| s.points()[dist.sample(rng)]).collect();
    SampleSet::uniform(points).expect("resample is nonempty")
}

/// Bootstrap p-values, one per statistic returned by `stats`.
pub fn bootstrap_pvalues<S>(
    a: (&SampleSet, usize),
    b: (&SampleSet, usize),
    frame: &CommonFrame,
    replicates: usize,
    seed: u64,
    observed: &[f64],
    stats: S,
) -> Result<Vec<f64>, CliError>
where
    S: Fn(&BivariateStepCdf, &BivariateStepCdf) -> Result<Vec<f64>, CliError> + Sync,
{
    if replicates == 0 {
        return Err(CliError::Usage("--bootstrap must be at least 1".into()));
    }
    let draws: Vec<Vec<f64>> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let sa = resample(a.0, a.1, &mut rng);
            let sb = resample(b.0, b.1, &mut rng);
            let fa = build_cdf(&sa, frame)?;
            let fb = build_cdf(&sb, frame)?;
            stats(&fa, &fb)
        })
        .collect::<Result<_, _>>()?;
    Ok(observed
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let exceed = draws.iter().filter(|d| d[k] - t >= t).count();
            (1 + exceed) as f64 / (replicates + 1) as f64
        })
        .collect())
}
