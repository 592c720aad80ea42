//! Penalties and the data-driven choice of the model dimension.
//!
//! `m̂ = argmin_m [γ_n(ĝ_m) + pen(m)]` over the admissible dimensions, ties
//! going to the smallest `m`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{DeconvError, Result};
use crate::estimator::{contrast, estimate_coefficients, CoefficientSet, SampleBatch};
use crate::noise::{gaussian_half_integral, NoiseKind, NoiseModel};

const MAX_EXP_ARG: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyMode {
    /// `2a(λ₁ + μσ^δπ^δλ₂) m^{max(0, min(3δ/2 - 1/2, δ))} Γ(m) / n`.
    Theoretical,
    /// The calibrated Laplace and Gaussian penalties used in simulations.
    Practical,
}

impl fmt::Display for PenaltyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PenaltyMode::Theoretical => "theoretical",
            PenaltyMode::Practical => "practical",
        })
    }
}

impl FromStr for PenaltyMode {
    type Err = DeconvError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "theoretical" | "theory" => Ok(PenaltyMode::Theoretical),
            "practical" => Ok(PenaltyMode::Practical),
            other => Err(DeconvError::InvalidArgument(format!(
                "unknown penalty mode '{other}' (expected practical or theoretical)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    pub mode: PenaltyMode,
    /// Universal constant of the theoretical penalty; must exceed 1.
    pub a: f64,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            mode: PenaltyMode::Practical,
            a: 1.5,
        }
    }
}

impl PenaltyConfig {
    pub fn theoretical(a: f64) -> Result<Self> {
        let cfg = Self {
            mode: PenaltyMode::Theoretical,
            a,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == PenaltyMode::Theoretical && !(self.a > 1.0 && self.a.is_finite()) {
            return Err(DeconvError::InvalidArgument(format!(
                "theoretical penalty needs a > 1, got {}",
                self.a
            )));
        }
        Ok(())
    }
}

/// Penalized criterion of one candidate dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelScore {
    pub m: usize,
    pub contrast: f64,
    pub pen: f64,
    pub crit: f64,
}

impl ModelScore {
    pub fn new(m: usize, contrast: f64, pen: f64) -> Self {
        Self {
            m,
            contrast,
            pen,
            crit: contrast + pen,
        }
    }
}

/// `pen(m)` for a sample of size `n`.
pub fn penalty(model: &NoiseModel, m: usize, n: usize, cfg: &PenaltyConfig) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(DeconvError::InvalidArgument(format!(
            "penalty needs m >= 1 and n >= 1, got m = {m}, n = {n}"
        )));
    }
    cfg.validate()?;
    match cfg.mode {
        PenaltyMode::Practical => practical_penalty(model, m, n),
        PenaltyMode::Theoretical => theoretical_penalty(model, m, n, cfg.a),
    }
}

fn practical_penalty(model: &NoiseModel, m: usize, n: usize) -> Result<f64> {
    let l = m as f64;
    let sigma = model.sigma();
    let lead = 6.0 * PI * l / n as f64;
    let log_term = l.ln().powf(2.5) / l;
    let s2 = (PI * sigma * l).powi(2);
    Ok(match model.kind() {
        NoiseKind::None => lead * (1.0 + log_term),
        NoiseKind::Laplace => lead * (1.0 + log_term + s2 / 3.0 + s2 * s2 / 20.0),
        NoiseKind::Gaussian => {
            let a = (sigma * l).powi(2);
            if a * PI * PI > MAX_EXP_ARG {
                return Err(DeconvError::Overflow { m });
            }
            lead * (1.0 + log_term + s2 / 3.0) * (gaussian_half_integral(a)? / PI)
        }
    })
}

fn theoretical_penalty(model: &NoiseModel, m: usize, n: usize, a: f64) -> Result<f64> {
    let c = model.smoothness_constants()?;
    let l = m as f64;
    let (gamma, mu, delta, sigma) = (model.gamma(), model.mu(), model.delta(), model.sigma());
    let growth = 2.0 * mu * sigma.powf(delta) * PI.powf(delta) * l.powf(delta);
    if growth > MAX_EXP_ARG {
        return Err(DeconvError::Overflow { m });
    }
    let gamma_m = l.powf(2.0 * gamma + 1.0 - delta) * growth.exp();
    let weight = c.lambda1 + mu * sigma.powf(delta) * PI.powf(delta) * c.lambda2;
    Ok(2.0 * a * weight * l.powf(c.penalty_exponent) * gamma_m / n as f64)
}

/// Candidate dimensions and their penalties for a fixed `(model, n)`.
///
/// Penalties depend on the data only through `n`, so a plan is built once
/// and reused across replications.
#[derive(Debug, Clone)]
pub struct SelectionPlan {
    model: NoiseModel,
    n: usize,
    k_n: usize,
    candidates: Vec<(usize, f64)>,
}

impl SelectionPlan {
    pub fn new(
        model: NoiseModel,
        n: usize,
        cfg: &PenaltyConfig,
        k_n: usize,
        m_cap: Option<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(DeconvError::InvalidArgument("sample is empty".into()));
        }
        if k_n == 0 {
            return Err(DeconvError::InvalidArgument(
                "k_n must be at least 1".into(),
            ));
        }
        if m_cap == Some(0) {
            return Err(DeconvError::InvalidArgument(
                "m cap must be at least 1".into(),
            ));
        }
        cfg.validate()?;
        let mut candidates = Vec::new();
        for m in model.admissible_dimensions(n, m_cap) {
            match penalty(&model, m, n, cfg) {
                Ok(p) if p.is_finite() => candidates.push((m, p)),
                Ok(_) | Err(DeconvError::Overflow { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if candidates.is_empty() {
            return Err(DeconvError::NoCandidates(format!(
                "every dimension up to {} overflows for {} noise with sigma = {}",
                model.m_max(n, m_cap),
                model.kind(),
                model.sigma()
            )));
        }
        Ok(Self {
            model,
            n,
            k_n,
            candidates,
        })
    }

    pub fn model(&self) -> &NoiseModel {
        &self.model
    }

    pub fn k_n(&self) -> usize {
        self.k_n
    }

    /// `(m, pen(m))` for each candidate, ascending in `m`.
    pub fn candidates(&self) -> &[(usize, f64)] {
        &self.candidates
    }

    /// Scores every candidate and keeps each fitted coefficient set.
    pub fn fit_all(&self, sample: &SampleBatch) -> Result<Vec<(ModelScore, CoefficientSet)>> {
        if sample.len() != self.n {
            return Err(DeconvError::InvalidArgument(format!(
                "plan was built for n = {}, sample has {} observations",
                self.n,
                sample.len()
            )));
        }
        self.candidates
            .iter()
            .map(|&(m, pen)| {
                let coeffs = estimate_coefficients(sample, &self.model, m, self.k_n)?;
                Ok((ModelScore::new(m, contrast(&coeffs), pen), coeffs))
            })
            .collect()
    }

    pub fn select(&self, sample: &SampleBatch) -> Result<Selection> {
        let fits = self.fit_all(sample)?;
        Ok(Selection::from_fits(fits))
    }
}

/// Outcome of model selection: the chosen score and coefficients plus the
/// whole score curve.
#[derive(Debug, Clone)]
pub struct Selection {
    pub chosen: ModelScore,
    pub coefficients: CoefficientSet,
    pub scores: Vec<ModelScore>,
}

impl Selection {
    fn from_fits(fits: Vec<(ModelScore, CoefficientSet)>) -> Self {
        let best = argmin_crit(fits.iter().map(|(s, _)| s)).expect("plan has candidates");
        let scores = fits.iter().map(|(s, _)| *s).collect();
        let (chosen, coefficients) = fits.into_iter().nth(best).expect("index in range");
        Self {
            chosen,
            coefficients,
            scores,
        }
    }
}

/// Position of the smallest criterion, the first one on ties.
pub fn argmin_crit<'a>(scores: impl IntoIterator<Item = &'a ModelScore>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.into_iter().enumerate() {
        match best {
            Some((_, c)) if s.crit >= c => {}
            _ => best = Some((i, s.crit)),
        }
    }
    best.map(|(i, _)| i)
}

/// Selects `m̂` for one sample.
pub fn select(
    sample: &SampleBatch,
    model: &NoiseModel,
    cfg: &PenaltyConfig,
    k_n: usize,
    m_cap: Option<usize>,
) -> Result<Selection> {
    SelectionPlan::new(*model, sample.len(), cfg, k_n, m_cap)?.select(sample)
}
