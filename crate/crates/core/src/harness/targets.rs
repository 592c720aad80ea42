//! The six test densities and the noise samplers.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma, Open01, StandardNormal};

use crate::error::{DeconvError, Result};
use crate::noise::NoiseKind;

const LN_FACT_4: f64 = 3.178_053_830_347_945_6; // ln 24
const LN_FACT_12: f64 = 19.987_214_495_661_885; // ln 479001600
const MIXED_GAMMA_SCALE: f64 = 5.48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetDensity {
    /// (a) `χ²(3)/√6`.
    Chi2Type,
    /// (b) unit-variance Laplace.
    Laplace,
    /// (c) `W/√5.48`, `W ~ 0.4 Γ(5,1) + 0.6 Γ(13,1)`.
    MixedGamma,
    /// (d) standard Cauchy.
    Cauchy,
    /// (e) standard normal.
    Gaussian,
    /// (f) `√2 V`, `V ~ 0.5 N(-3,1) + 0.5 N(2,1)`.
    MixedGaussian,
}

impl TargetDensity {
    pub const ALL: [TargetDensity; 6] = [
        TargetDensity::Chi2Type,
        TargetDensity::Laplace,
        TargetDensity::MixedGamma,
        TargetDensity::Cauchy,
        TargetDensity::Gaussian,
        TargetDensity::MixedGaussian,
    ];

    /// Single-letter label `a`..`f`.
    pub fn letter(self) -> char {
        match self {
            TargetDensity::Chi2Type => 'a',
            TargetDensity::Laplace => 'b',
            TargetDensity::MixedGamma => 'c',
            TargetDensity::Cauchy => 'd',
            TargetDensity::Gaussian => 'e',
            TargetDensity::MixedGaussian => 'f',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TargetDensity::Chi2Type => "chi2",
            TargetDensity::Laplace => "laplace",
            TargetDensity::MixedGamma => "mixed-gamma",
            TargetDensity::Cauchy => "cauchy",
            TargetDensity::Gaussian => "gaussian",
            TargetDensity::MixedGaussian => "mixed-gaussian",
        }
    }

    /// Interval on which the ISE is evaluated.
    pub fn interval(self) -> (f64, f64) {
        match self {
            TargetDensity::Chi2Type => (-1.0, 16.0),
            TargetDensity::Laplace => (-5.0, 5.0),
            TargetDensity::MixedGamma => (-1.5, 26.0),
            TargetDensity::Cauchy => (-10.0, 10.0),
            TargetDensity::Gaussian => (-4.0, 4.0),
            TargetDensity::MixedGaussian => (-8.0, 7.0),
        }
    }

    pub fn pdf(self, x: f64) -> f64 {
        match self {
            TargetDensity::Chi2Type => {
                let s = 6f64.sqrt();
                let u = s * x;
                if u <= 0.0 {
                    0.0
                } else {
                    // χ²(3): √u e^{-u/2} / √(2π)
                    s * u.sqrt() * (-0.5 * u).exp() / (2.0 * PI).sqrt()
                }
            }
            TargetDensity::Laplace => (-SQRT_2 * x.abs()).exp() / SQRT_2,
            TargetDensity::MixedGamma => {
                let s = MIXED_GAMMA_SCALE.sqrt();
                let w = s * x;
                if w <= 0.0 {
                    0.0
                } else {
                    let lw = w.ln();
                    let g5 = (4.0 * lw - w - LN_FACT_4).exp();
                    let g13 = (12.0 * lw - w - LN_FACT_12).exp();
                    s * (0.4 * g5 + 0.6 * g13)
                }
            }
            TargetDensity::Cauchy => 1.0 / (PI * (1.0 + x * x)),
            TargetDensity::Gaussian => std_normal_pdf(x),
            TargetDensity::MixedGaussian => {
                let v = x / SQRT_2;
                (0.5 * std_normal_pdf(v + 3.0) + 0.5 * std_normal_pdf(v - 2.0)) / SQRT_2
            }
        }
    }

    /// Draws `n` independent values of `X`.
    pub fn sample<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> Vec<f64> {
        match self {
            TargetDensity::Chi2Type => {
                let chi2 = Gamma::new(1.5, 2.0).expect("valid gamma");
                let s = 6f64.sqrt();
                (0..n).map(|_| chi2.sample(rng) / s).collect()
            }
            TargetDensity::Laplace => (0..n).map(|_| unit_laplace(rng)).collect(),
            TargetDensity::MixedGamma => {
                let g5 = Gamma::new(5.0, 1.0).expect("valid gamma");
                let g13 = Gamma::new(13.0, 1.0).expect("valid gamma");
                let s = MIXED_GAMMA_SCALE.sqrt();
                (0..n)
                    .map(|_| {
                        let w = if rng.random::<f64>() < 0.4 {
                            g5.sample(rng)
                        } else {
                            g13.sample(rng)
                        };
                        w / s
                    })
                    .collect()
            }
            TargetDensity::Cauchy => (0..n)
                .map(|_| {
                    let u: f64 = Open01.sample(rng);
                    (PI * (u - 0.5)).tan()
                })
                .collect(),
            TargetDensity::Gaussian => (0..n).map(|_| StandardNormal.sample(rng)).collect(),
            TargetDensity::MixedGaussian => (0..n)
                .map(|_| {
                    let centre = if rng.random::<f64>() < 0.5 { -3.0 } else { 2.0 };
                    let z: f64 = StandardNormal.sample(rng);
                    SQRT_2 * (centre + z)
                })
                .collect(),
        }
    }
}

impl fmt::Display for TargetDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetDensity {
    type Err = DeconvError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        TargetDensity::ALL
            .into_iter()
            .find(|d| s == d.name() || s.len() == 1 && s.starts_with(d.letter()))
            .ok_or_else(|| {
                DeconvError::InvalidArgument(format!(
                    "unknown density '{s}' (expected a-f or chi2, laplace, mixed-gamma, cauchy, gaussian, mixed-gaussian)"
                ))
            })
    }
}

fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Unit-variance Laplace by inverse CDF.
fn unit_laplace<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = Open01.sample(rng);
    let u = u - 0.5;
    -u.signum() * (1.0 - 2.0 * u.abs()).ln() / SQRT_2
}

/// Draws `n` values of the unscaled noise `ε`.
pub fn sample_noise<R: Rng + ?Sized>(kind: NoiseKind, n: usize, rng: &mut R) -> Vec<f64> {
    match kind {
        NoiseKind::None => vec![0.0; n],
        NoiseKind::Laplace => (0..n).map(|_| unit_laplace(rng)).collect(),
        NoiseKind::Gaussian => (0..n).map(|_| StandardNormal.sample(rng)).collect(),
    }
}
