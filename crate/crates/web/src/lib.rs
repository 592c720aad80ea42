//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export wraps a plain Rust function of the same name (prefixed
//! `run_`) so the logic is testable off the browser.

use deconv_core::estimator::{evaluate, SampleBatch, DEFAULT_K_N};
use deconv_core::harness::{replication_rng, sample_noise, uniform_grid, TargetDensity};
use deconv_core::noise::{NoiseKind, NoiseModel};
use deconv_core::selection::{penalty, select, PenaltyConfig, Selection};
use deconv_core::{DeconvError, Result};
use wasm_bindgen::prelude::*;

const GRID_POINTS: usize = 400;
/// Largest sample the demo accepts, to keep the page responsive.
pub const MAX_N: usize = 20_000;

/// A fitted estimate together with its score curve.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Fit {
    m_hat: usize,
    xs: Vec<f64>,
    estimate: Vec<f64>,
    truth: Vec<f64>,
    ms: Vec<f64>,
    contrast: Vec<f64>,
    pen: Vec<f64>,
    crit: Vec<f64>,
}

#[wasm_bindgen]
impl Fit {
    #[wasm_bindgen(getter = mHat)]
    pub fn m_hat(&self) -> usize {
        self.m_hat
    }
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn estimate(&self) -> Vec<f64> {
        self.estimate.clone()
    }
    /// True density on `xs`; empty for user data.
    #[wasm_bindgen(getter)]
    pub fn truth(&self) -> Vec<f64> {
        self.truth.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn ms(&self) -> Vec<f64> {
        self.ms.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn contrast(&self) -> Vec<f64> {
        self.contrast.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn pen(&self) -> Vec<f64> {
        self.pen.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn crit(&self) -> Vec<f64> {
        self.crit.clone()
    }
}

/// Variance proxy and penalty per candidate dimension.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Profile {
    ms: Vec<f64>,
    delta1: Vec<f64>,
    pen: Vec<f64>,
}

#[wasm_bindgen]
impl Profile {
    #[wasm_bindgen(getter)]
    pub fn ms(&self) -> Vec<f64> {
        self.ms.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn delta1(&self) -> Vec<f64> {
        self.delta1.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn pen(&self) -> Vec<f64> {
        self.pen.clone()
    }
}

fn parse<T: std::str::FromStr<Err = DeconvError>>(s: &str) -> Result<T> {
    s.parse()
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_N).contains(&n) {
        return Err(DeconvError::InvalidArgument(format!(
            "sample size must be between 2 and {MAX_N}, got {n}"
        )));
    }
    Ok(())
}

fn fit_from(selection: Selection, lo: f64, hi: f64, truth: Option<TargetDensity>) -> Fit {
    let xs = uniform_grid(lo, hi, GRID_POINTS);
    let estimate = evaluate(&selection.coefficients, &xs);
    let truth = truth.map_or_else(Vec::new, |d| xs.iter().map(|&x| d.pdf(x)).collect());
    let s = &selection.scores;
    Fit {
        m_hat: selection.chosen.m,
        estimate,
        truth,
        ms: s.iter().map(|v| v.m as f64).collect(),
        contrast: s.iter().map(|v| v.contrast).collect(),
        pen: s.iter().map(|v| v.pen).collect(),
        crit: s.iter().map(|v| v.crit).collect(),
        xs,
    }
}

/// Draws `n` noisy observations from a test density and fits them.
pub fn run_simulate_fit(density: &str, noise: &str, s2n: f64, n: usize, seed: u64) -> Result<Fit> {
    let density: TargetDensity = parse(density)?;
    let kind: NoiseKind = parse(noise)?;
    check_n(n)?;
    if !(s2n.is_finite() && s2n > 0.0) {
        return Err(DeconvError::InvalidArgument(format!(
            "s2n must be positive, got {s2n}"
        )));
    }
    let sigma = match kind {
        NoiseKind::None => 0.0,
        _ => 1.0 / s2n.sqrt(),
    };
    let model = NoiseModel::new(kind, sigma)?;
    let mut rng = replication_rng(seed, 0);
    let x = density.sample(n, &mut rng);
    let e = sample_noise(kind, n, &mut rng);
    let sample = SampleBatch::new(x.iter().zip(&e).map(|(x, e)| x + sigma * e).collect())?;
    let selection = select(
        &sample,
        &model,
        &PenaltyConfig::default(),
        DEFAULT_K_N,
        None,
    )?;
    let (lo, hi) = density.interval();
    Ok(fit_from(selection, lo, hi, Some(density)))
}

/// Fits observations given as text, one or more numbers per line separated
/// by whitespace or commas.
pub fn run_fit_text(text: &str, noise: &str, sigma: f64) -> Result<Fit> {
    let kind: NoiseKind = parse(noise)?;
    let model = NoiseModel::new(kind, sigma)?;
    let mut z = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for tok in line.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let v: f64 = tok.parse().map_err(|_| DeconvError::Data {
                path: "input".into(),
                message: format!("line {}: '{tok}' is not a number", i + 1),
            })?;
            z.push(v);
        }
    }
    check_n(z.len())?;
    let sample = SampleBatch::new(z)?;
    let (lo, hi) = sample
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let selection = select(
        &sample,
        &model,
        &PenaltyConfig::default(),
        DEFAULT_K_N,
        None,
    )?;
    Ok(fit_from(selection, lo - 1.0, hi + 1.0, None))
}

pub fn run_penalty_profile(noise: &str, sigma: f64, n: usize) -> Result<Profile> {
    let kind: NoiseKind = parse(noise)?;
    let model = NoiseModel::new(kind, sigma)?;
    check_n(n)?;
    let cfg = PenaltyConfig::default();
    let mut profile = Profile {
        ms: Vec::new(),
        delta1: Vec::new(),
        pen: Vec::new(),
    };
    for m in model.admissible_dimensions(n, None) {
        if let (Ok(d), Ok(p)) = (model.delta1(m), penalty(&model, m, n, &cfg)) {
            profile.ms.push(m as f64);
            profile.delta1.push(d);
            profile.pen.push(p);
        }
    }
    Ok(profile)
}

fn js(err: DeconvError) -> JsError {
    JsError::new(&err.to_string())
}

#[wasm_bindgen(js_name = simulateFit)]
pub fn simulate_fit(
    density: &str,
    noise: &str,
    s2n: f64,
    n: usize,
    seed: u32,
) -> std::result::Result<Fit, JsError> {
    run_simulate_fit(density, noise, s2n, n, u64::from(seed)).map_err(js)
}

#[wasm_bindgen(js_name = fitText)]
pub fn fit_text(text: &str, noise: &str, sigma: f64) -> std::result::Result<Fit, JsError> {
    run_fit_text(text, noise, sigma).map_err(js)
}

#[wasm_bindgen(js_name = penaltyProfile)]
pub fn penalty_profile(noise: &str, sigma: f64, n: usize) -> std::result::Result<Profile, JsError> {
    run_penalty_profile(noise, sigma, n).map_err(js)
}
