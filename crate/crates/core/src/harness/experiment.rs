//! Monte Carlo experiments.
//!
//! Replication `r` draws from its own stream keyed by `(seed, r)`, so results
//! do not depend on how replications are scheduled across workers.

use std::collections::BTreeMap;

use crate::error::{DeconvError, Result};
use crate::estimator::{SampleBatch, DEFAULT_K_N};
use crate::harness::{ise, replication_rng, sample_noise, TargetDensity};
use crate::noise::{NoiseKind, NoiseModel};
use crate::selection::{PenaltyConfig, SelectionPlan};

pub const DEFAULT_GRID_POINTS: usize = 512;
/// An experiment fails when more than this fraction of replications fail.
pub const MAX_FAILURE_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub density: TargetDensity,
    /// True noise family.
    pub noise: NoiseKind,
    /// Signal-to-noise ratio `1/σ²`.
    pub s2n: f64,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub k_n: usize,
    pub grid_points: usize,
    pub penalty: PenaltyConfig,
    /// Noise family the estimator assumes, when it differs from the truth.
    pub assumed_noise: Option<NoiseKind>,
    pub m_cap: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(
        density: TargetDensity,
        noise: NoiseKind,
        s2n: f64,
        n: usize,
        reps: usize,
        seed: u64,
    ) -> Self {
        Self {
            density,
            noise,
            s2n,
            n,
            reps,
            seed,
            k_n: DEFAULT_K_N,
            grid_points: DEFAULT_GRID_POINTS,
            penalty: PenaltyConfig::default(),
            assumed_noise: None,
            m_cap: None,
        }
    }

    pub fn assuming(mut self, kind: NoiseKind) -> Self {
        self.assumed_noise = Some(kind);
        self
    }

    /// `σ = 1/√s2n`, or 0 without noise.
    pub fn sigma(&self) -> f64 {
        match self.noise {
            NoiseKind::None => 0.0,
            _ => 1.0 / self.s2n.sqrt(),
        }
    }

    pub fn assumed_kind(&self) -> NoiseKind {
        self.assumed_noise.unwrap_or(self.noise)
    }

    /// Noise model handed to the estimator.
    pub fn assumed_model(&self) -> Result<NoiseModel> {
        match self.assumed_kind() {
            NoiseKind::None => Ok(NoiseModel::none()),
            kind => NoiseModel::new(kind, self.sigma()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(DeconvError::InvalidArgument(msg));
        if self.noise != NoiseKind::None && !(self.s2n.is_finite() && self.s2n > 0.0) {
            return bad(format!("s2n must be positive, got {}", self.s2n));
        }
        if self.n < 2 {
            return bad(format!("sample size must be at least 2, got {}", self.n));
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.k_n == 0 {
            return bad("k_n must be at least 1".into());
        }
        if self.grid_points < 2 {
            return bad(format!(
                "grid needs at least 2 points, got {}",
                self.grid_points
            ));
        }
        self.penalty.validate()
    }
}

/// Aggregated ISE statistics over the successful replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    /// Successful replications; the histogram counts sum to this.
    pub reps: usize,
    pub failed: usize,
    pub mean_ise: f64,
    pub median_ise: f64,
    pub sd_ise: f64,
    pub selected_m_histogram: BTreeMap<usize, usize>,
}

impl SummaryStats {
    pub fn from_outcomes(ises: &[f64], selected: &[usize], failed: usize) -> Self {
        assert_eq!(ises.len(), selected.len());
        let reps = ises.len();
        let mean = if reps == 0 {
            f64::NAN
        } else {
            ises.iter().sum::<f64>() / reps as f64
        };
        let sd = if reps > 1 {
            (ises.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = ises.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = match reps {
            0 => f64::NAN,
            r if r % 2 == 1 => sorted[r / 2],
            r => 0.5 * (sorted[r / 2 - 1] + sorted[r / 2]),
        };
        let mut histogram = BTreeMap::new();
        for &m in selected {
            *histogram.entry(m).or_insert(0) += 1;
        }
        Self {
            reps,
            failed,
            mean_ise: mean,
            median_ise: median,
            sd_ise: sd,
            selected_m_histogram: histogram,
        }
    }

    /// Most frequently selected dimension, the smallest one on ties.
    pub fn modal_m(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (&m, &count) in &self.selected_m_histogram {
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((m, count));
            }
        }
        best.map(|(m, _)| m)
    }
}

/// Full output of an experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub stats: SummaryStats,
    /// ISE of each successful replication, in replication order.
    pub ises: Vec<f64>,
    pub selected: Vec<usize>,
    /// `(m, MISE of the fixed-m estimator)` for every candidate, when requested.
    pub fixed_m_mise: Vec<(usize, f64)>,
}

struct Replication {
    ise: f64,
    m: usize,
    per_m: Vec<f64>,
}

fn run_replication(
    spec: &ExperimentSpec,
    plan: &SelectionPlan,
    r: usize,
    all_dims: bool,
) -> Result<Replication> {
    let mut rng = replication_rng(spec.seed, r as u64);
    let x = spec.density.sample(spec.n, &mut rng);
    let eps = sample_noise(spec.noise, spec.n, &mut rng);
    let sigma = spec.sigma();
    let z: Vec<f64> = x.iter().zip(&eps).map(|(x, e)| x + sigma * e).collect();
    let sample = SampleBatch::new(z)?;
    let fits = plan.fit_all(&sample)?;
    let best = crate::selection::argmin_crit(fits.iter().map(|(s, _)| s))
        .ok_or_else(|| DeconvError::NoCandidates("empty candidate list".into()))?;
    let per_m = if all_dims {
        fits.iter()
            .map(|(_, c)| ise(c, spec.density, spec.grid_points))
            .collect()
    } else {
        Vec::new()
    };
    let (score, coeffs) = &fits[best];
    let chosen_ise = if all_dims {
        per_m[best]
    } else {
        ise(coeffs, spec.density, spec.grid_points)
    };
    Ok(Replication {
        ise: chosen_ise,
        m: score.m,
        per_m,
    })
}

/// Worker cap from `DECONV_THREADS`, if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var("DECONV_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
}

#[cfg(feature = "parallel")]
fn map_replications<T: Send>(
    reps: usize,
    workers: Option<usize>,
    job: impl Fn(usize) -> T + Sync + Send,
) -> Vec<T> {
    use rayon::prelude::*;
    match workers {
        Some(1) => (0..reps).map(job).collect(),
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| (0..reps).into_par_iter().map(&job).collect()),
            Err(_) => (0..reps).map(job).collect(),
        },
        None => (0..reps).into_par_iter().map(job).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_replications<T: Send>(
    reps: usize,
    _workers: Option<usize>,
    job: impl Fn(usize) -> T + Sync + Send,
) -> Vec<T> {
    (0..reps).map(job).collect()
}

/// Runs an experiment on up to `workers` threads (all available when `None`).
/// With `all_dims`, every candidate dimension is also scored against the truth.
pub fn run_experiment_detailed(
    spec: &ExperimentSpec,
    workers: Option<usize>,
    all_dims: bool,
) -> Result<ExperimentReport> {
    spec.validate()?;
    let plan = SelectionPlan::new(
        spec.assumed_model()?,
        spec.n,
        &spec.penalty,
        spec.k_n,
        spec.m_cap,
    )?;
    let outcomes = map_replications(spec.reps, workers, |r| {
        run_replication(spec, &plan, r, all_dims)
    });

    let mut ises = Vec::with_capacity(spec.reps);
    let mut selected = Vec::with_capacity(spec.reps);
    let mut per_m_sums = vec![0.0; plan.candidates().len()];
    let mut failed = 0;
    let mut first_failure = None;
    for outcome in outcomes {
        match outcome {
            Ok(rep) => {
                ises.push(rep.ise);
                selected.push(rep.m);
                for (sum, v) in per_m_sums.iter_mut().zip(&rep.per_m) {
                    *sum += v;
                }
            }
            Err(e) => {
                failed += 1;
                first_failure.get_or_insert(e);
            }
        }
    }
    if failed as f64 > MAX_FAILURE_FRACTION * spec.reps as f64 || ises.is_empty() {
        return Err(DeconvError::TooManyFailures {
            failed,
            reps: spec.reps,
            first: first_failure.map(|e| e.to_string()).unwrap_or_default(),
        });
    }
    let fixed_m_mise = if all_dims {
        plan.candidates()
            .iter()
            .zip(&per_m_sums)
            .map(|(&(m, _), &s)| (m, s / ises.len() as f64))
            .collect()
    } else {
        Vec::new()
    };
    Ok(ExperimentReport {
        stats: SummaryStats::from_outcomes(&ises, &selected, failed),
        ises,
        selected,
        fixed_m_mise,
    })
}

/// Runs an experiment with the worker cap taken from `DECONV_THREADS`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<SummaryStats> {
    Ok(run_experiment_detailed(spec, workers_from_env(), false)?.stats)
}

/// MISE with the assumed (wrong) noise over MISE with the true noise, both on
/// the same replication streams.
pub fn misspecification_ratio(spec: &ExperimentSpec, workers: Option<usize>) -> Result<f64> {
    if spec.assumed_noise.is_none() {
        return Err(DeconvError::InvalidArgument(
            "misspecification needs an assumed noise kind".into(),
        ));
    }
    let wrong = run_experiment_detailed(spec, workers, false)?;
    let right_spec = ExperimentSpec {
        assumed_noise: None,
        ..spec.clone()
    };
    let right = run_experiment_detailed(&right_spec, workers, false)?;
    Ok(wrong.stats.mean_ise / right.stats.mean_ise)
}
