//! Error-density models and the variance proxy `Δ₁(m)`.
//!
//! A noise model is one of the built-in families together with the
//! smoothness parameters `(γ, μ, δ, κ₀)` that bound its characteristic
//! function from below,
//! `|f*(x)| ≥ κ₀ (1 + x²)^{-γ/2} exp(-μ |x|^δ)`,
//! and the known noise level `σ` (observations are `Z = X + σ ε`).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{DeconvError, Result};
use crate::quadrature::integrate_doubling;

/// Lower clamp on the largest model dimension.
pub const M_MAX_FLOOR: usize = 8;
/// Upper clamp on the largest model dimension.
pub const M_MAX_CEILING: usize = 50;
/// Models whose variance proxy `Δ₁(m)/n` exceeds this are never considered.
pub const MAX_VARIANCE_RATIO: f64 = 1e3;

const QUAD_REL_TOL: f64 = 1e-10;
const QUAD_MAX_NODES: usize = 1 << 20;
// e^{709.78} is the largest finite double.
const MAX_EXP_ARG: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseKind {
    None,
    Laplace,
    Gaussian,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::None => "none",
            NoiseKind::Laplace => "laplace",
            NoiseKind::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = DeconvError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "nonoise" => Ok(NoiseKind::None),
            "laplace" | "lap" => Ok(NoiseKind::Laplace),
            "gaussian" | "gauss" | "normal" => Ok(NoiseKind::Gaussian),
            other => Err(DeconvError::InvalidArgument(format!(
                "unknown noise kind '{other}' (expected none, laplace or gaussian)"
            ))),
        }
    }
}

/// A noise family, its smoothness parameters and the noise level `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    kind: NoiseKind,
    sigma: f64,
    gamma: f64,
    mu: f64,
    delta: f64,
    kappa0: f64,
}

impl NoiseModel {
    /// Direct observation, `Z = X`.
    pub fn none() -> Self {
        Self {
            kind: NoiseKind::None,
            sigma: 0.0,
            gamma: 0.0,
            mu: 0.0,
            delta: 0.0,
            kappa0: 1.0,
        }
    }

    /// Unit-variance Laplace noise, `f*(x) = 1/(1 + x²/2)`.
    pub fn laplace(sigma: f64) -> Result<Self> {
        Self::new(NoiseKind::Laplace, sigma)
    }

    /// Standard Gaussian noise, `f*(x) = exp(-x²/2)`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(NoiseKind::Gaussian, sigma)
    }

    /// Built-in family with its preset smoothness parameters. A zero noise
    /// level collapses to [`NoiseModel::none`].
    pub fn new(kind: NoiseKind, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(DeconvError::InvalidNoise(format!(
                "noise level must be finite and nonnegative, got {sigma}"
            )));
        }
        if sigma == 0.0 {
            return Ok(Self::none());
        }
        Ok(match kind {
            NoiseKind::None => {
                return Err(DeconvError::InvalidNoise(format!(
                    "kind 'none' requires sigma = 0, got {sigma}"
                )))
            }
            NoiseKind::Laplace => Self {
                kind,
                sigma,
                gamma: 2.0,
                mu: 0.0,
                delta: 0.0,
                kappa0: 0.5,
            },
            NoiseKind::Gaussian => Self {
                kind,
                sigma,
                gamma: 0.0,
                mu: 0.5,
                delta: 2.0,
                kappa0: 1.0,
            },
        })
    }

    /// A model with explicit smoothness parameters. The characteristic
    /// function is still the one of `kind`; only the constants that enter the
    /// theoretical penalty change.
    pub fn with_smoothness(
        kind: NoiseKind,
        sigma: f64,
        gamma: f64,
        mu: f64,
        delta: f64,
        kappa0: f64,
    ) -> Result<Self> {
        let model = Self {
            kind,
            sigma,
            gamma,
            mu,
            delta,
            kappa0,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(DeconvError::InvalidNoise(msg));
        for (name, v) in [
            ("sigma", self.sigma),
            ("gamma", self.gamma),
            ("mu", self.mu),
            ("delta", self.delta),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be finite and nonnegative, got {v}"));
            }
        }
        if !(self.kappa0.is_finite() && self.kappa0 > 0.0) {
            return bad(format!("kappa0 must be positive, got {}", self.kappa0));
        }
        if self.kind == NoiseKind::None
            && (self.sigma != 0.0 || self.gamma != 0.0 || self.mu != 0.0 || self.delta != 0.0)
        {
            return bad("kind 'none' requires sigma = gamma = mu = delta = 0".into());
        }
        if self.delta == 0.0 && self.mu != 0.0 {
            return bad(format!("delta = 0 requires mu = 0, got mu = {}", self.mu));
        }
        if self.delta > 0.0 && self.mu == 0.0 {
            return bad(format!("delta = {} > 0 requires mu > 0", self.delta));
        }
        Ok(())
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    /// Characteristic function of the unscaled noise `ε`.
    pub fn cf(&self, x: f64) -> f64 {
        match self.kind {
            NoiseKind::None => 1.0,
            NoiseKind::Laplace => 1.0 / (1.0 + 0.5 * x * x),
            NoiseKind::Gaussian => (-0.5 * x * x).exp(),
        }
    }

    /// Characteristic function of `σ ε`, i.e. `f*(σ x)`.
    pub fn scaled_cf(&self, x: f64) -> f64 {
        self.cf(self.sigma * x)
    }

    /// `1 / f*(σ x)`, evaluated without forming the (possibly tiny) CF.
    pub fn inverse_scaled_cf(&self, x: f64) -> f64 {
        let u = self.sigma * x;
        match self.kind {
            NoiseKind::None => 1.0,
            NoiseKind::Laplace => 1.0 + 0.5 * u * u,
            NoiseKind::Gaussian => (0.5 * u * u).exp(),
        }
    }

    /// Squared L² norm of the unscaled noise density, where one exists.
    pub fn density_l2_norm_sq(&self) -> Option<f64> {
        match self.kind {
            NoiseKind::None => None,
            // ∫ e^{-2√2|x|}/2 dx = 1/(2√2)
            NoiseKind::Laplace => Some(1.0 / (2.0 * std::f64::consts::SQRT_2)),
            // ∫ e^{-x²}/(2π) dx = 1/(2√π)
            NoiseKind::Gaussian => Some(1.0 / (2.0 * PI.sqrt())),
        }
    }

    /// Variance proxy `Δ₁(m) = (m/2π) ∫_{-π}^{π} |f*(mσx)|^{-2} dx`.
    pub fn delta1(&self, m: usize) -> Result<f64> {
        check_dimension(m)?;
        let l = m as f64;
        match self.kind {
            NoiseKind::None => Ok(l),
            NoiseKind::Laplace => {
                let s = (PI * self.sigma * l).powi(2);
                Ok(l * (1.0 + s / 3.0 + s * s / 20.0))
            }
            NoiseKind::Gaussian => {
                let a = (self.sigma * l).powi(2);
                if a * PI * PI > MAX_EXP_ARG {
                    return Err(DeconvError::Overflow { m });
                }
                let half = gaussian_half_integral(a)?;
                Ok(l / PI * half)
            }
        }
    }

    /// `ln Δ₁(m)`, finite for every `m` and `σ`.
    pub fn ln_delta1(&self, m: usize) -> Result<f64> {
        check_dimension(m)?;
        match self.kind {
            NoiseKind::None | NoiseKind::Laplace => Ok(self.delta1(m)?.ln()),
            NoiseKind::Gaussian => {
                let l = m as f64;
                let a = (self.sigma * l).powi(2);
                Ok((l / PI).ln() + ln_gaussian_half_integral(a)?)
            }
        }
    }

    /// Largest admissible model dimension for sample size `n`.
    ///
    /// The theoretical bound is clamped into `[8, 50]`, then capped by
    /// `user_cap` when given.
    pub fn m_max(&self, n: usize, user_cap: Option<usize>) -> usize {
        let theoretical = self.theoretical_m_max(n);
        let floor = theoretical.max(M_MAX_FLOOR);
        let ceiling = user_cap.map_or(M_MAX_CEILING, |c| c.min(M_MAX_CEILING));
        floor.min(ceiling).max(1)
    }

    /// The unclamped bound on `L_m = m` that keeps `Γ(m)/n` bounded.
    pub fn theoretical_m_max(&self, n: usize) -> usize {
        let n = n.max(2) as f64;
        let (gamma, mu, delta) = (self.gamma, self.mu, self.delta);
        let bound = if delta == 0.0 {
            n.powf(1.0 / (2.0 * gamma + 1.0)) / PI
        } else {
            let scale = 2.0 * mu * self.sigma.powf(delta);
            let lead = n.ln() / scale;
            let mut slope = 2.0 * gamma + 1.0 - delta;
            if delta > 1.0 / 3.0 {
                slope += (1.5 * delta - 0.5).min(delta);
            }
            let inner = lead + slope / (delta * scale) * lead.ln();
            if inner > 0.0 {
                inner.powf(1.0 / delta) / PI
            } else {
                0.0
            }
        };
        if bound.is_finite() && bound > 0.0 {
            bound.min(usize::MAX as f64 / 2.0).floor() as usize
        } else {
            0
        }
    }

    /// Dimensions `1..=m_max` whose variance proxy stays representable and
    /// below `MAX_VARIANCE_RATIO · n`.
    pub fn admissible_dimensions(&self, n: usize, user_cap: Option<usize>) -> Vec<usize> {
        let top = self.m_max(n, user_cap);
        (1..=top)
            .filter(|&m| match self.delta1(m) {
                Ok(d) => d / n as f64 <= MAX_VARIANCE_RATIO,
                Err(_) => false,
            })
            .collect()
    }

    pub fn smoothness_constants(&self) -> Result<SmoothnessConstants> {
        self.validate()?;
        let (gamma, mu, delta, sigma, kappa0) =
            (self.gamma, self.mu, self.delta, self.sigma, self.kappa0);
        let r = if delta == 0.0 {
            1.0
        } else if delta <= 1.0 {
            2.0 * mu * delta * sigma.powf(delta)
        } else {
            2.0 * mu * sigma.powf(delta)
        };
        if r <= 0.0 {
            return Err(DeconvError::InvalidNoise(format!(
                "R(mu, delta, sigma) = {r} must be positive (sigma = {sigma})"
            )));
        }
        let lambda1 =
            (sigma * sigma * PI * PI + 1.0).powf(gamma) / (PI.powf(delta) * kappa0 * kappa0 * r);
        let lambda2 = if delta < 1.0 / 3.0 {
            0.0
        } else if delta <= 1.0 {
            let norm = self
                .density_l2_norm_sq()
                .map(f64::sqrt)
                .ok_or_else(|| DeconvError::InvalidNoise("noise density has no L2 norm".into()))?;
            lambda1.sqrt() * (1.0 + sigma * sigma * PI * PI).powf(gamma / 2.0) * norm
                / kappa0
                / (2.0 * PI).sqrt()
        } else {
            lambda1
        };
        Ok(SmoothnessConstants {
            lambda1,
            lambda2,
            r,
            penalty_exponent: (1.5 * delta - 0.5).min(delta).max(0.0),
        })
    }
}

/// Constants of the theoretical penalty derived from a noise model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessConstants {
    pub lambda1: f64,
    pub lambda2: f64,
    /// `R(μ, δ, σ)`.
    pub r: f64,
    /// `max(0, min(3δ/2 - 1/2, δ))`.
    pub penalty_exponent: f64,
}

fn check_dimension(m: usize) -> Result<()> {
    if m == 0 {
        return Err(DeconvError::InvalidArgument(
            "model dimension m must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `∫_0^π e^{a x²} dx`.
pub(crate) fn gaussian_half_integral(a: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(PI);
    }
    integrate_doubling(|x| (a * x * x).exp(), 0.0, PI, QUAD_REL_TOL, QUAD_MAX_NODES)
}

/// `ln ∫_0^π e^{a x²} dx`, computed as `aπ² + ln ∫_0^π e^{-a s (2π - s)} ds`.
pub(crate) fn ln_gaussian_half_integral(a: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(PI.ln());
    }
    let tail = integrate_doubling(
        |s| (-a * s * (2.0 * PI - s)).exp(),
        0.0,
        PI,
        QUAD_REL_TOL,
        QUAD_MAX_NODES,
    )?;
    Ok(a * PI * PI + tail.ln())
}
