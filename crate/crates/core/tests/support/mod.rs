//! Exact-math checks shared by the unit-style tests and the acceptance run.

use std::f64::consts::PI;

use deconv_core::estimator::{
    coefficient_rule, coefficients_with_residue, compute_coefficients, contrast,
    laplace_closed_form_coefficients, sinc, SampleBatch,
};
use deconv_core::harness::{replication_rng, sample_noise, TargetDensity};
use deconv_core::noise::{NoiseKind, NoiseModel};
use deconv_core::quadrature::{QuadratureRule, NODES_PER_PANEL};
use num_complex::Complex64;
use rand::Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!("check failed: {}", stringify!($cond)));
        }
    };
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

trait Num<T> {
    fn num(self) -> Result<T, String>;
}

impl<T> Num<T> for deconv_core::Result<T> {
    fn num(self) -> Result<T, String> {
        self.map_err(|e| e.to_string())
    }
}

#[allow(dead_code)]
pub type NamedCheck = (&'static str, fn() -> Check);

#[allow(dead_code)]
pub const CHECKS: [NamedCheck; 6] = [
    (
        "no-noise degeneracy",
        no_noise_quadrature_equals_direct_projection,
    ),
    (
        "parseval partial sums",
        parseval_partial_sums_approach_variance_proxy,
    ),
    (
        "variance proxy bound",
        variance_proxy_obeys_smoothness_bound,
    ),
    (
        "laplace closed form",
        laplace_closed_form_matches_fine_quadrature,
    ),
    (
        "contrast identity",
        contrast_equals_direct_two_term_evaluation,
    ),
    ("coefficient realness", coefficients_are_real),
];

fn random_sample(seed: u64, n: usize) -> SampleBatch {
    let mut rng = replication_rng(seed, 0);
    let z = (0..n).map(|_| rng.random_range(-6.0..6.0)).collect();
    SampleBatch::new(z).expect("finite sample")
}

fn noisy_sample(seed: u64, n: usize, sigma: f64) -> SampleBatch {
    let mut rng = replication_rng(seed, 7);
    let x = TargetDensity::Chi2Type.sample(n, &mut rng);
    let e = sample_noise(NoiseKind::Laplace, n, &mut rng);
    SampleBatch::new(x.iter().zip(&e).map(|(x, e)| x + sigma * e).collect()).expect("finite sample")
}

fn simpson_complex(f: impl Fn(f64) -> Complex64, a: f64, b: f64, intervals: usize) -> Complex64 {
    let h = (b - a) / intervals as f64;
    let mut sum = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += f(a + k as f64 * h) * w;
    }
    sum * (h / 3.0)
}

pub fn no_noise_quadrature_equals_direct_projection() -> Check {
    let model = NoiseModel::none();
    for seed in 0..100 {
        let n = 5 + (seed as usize % 40);
        let m = 1 + (seed as usize % 6);
        let k_n = 32;
        let sample = random_sample(seed, n);
        let rule = coefficient_rule(&sample, m, k_n);
        let got = compute_coefficients(&sample, &model, m, k_n, &rule).num()?;
        let root = (m as f64).sqrt();
        for j in -(k_n as i64)..=(k_n as i64) {
            let direct = sample
                .values()
                .iter()
                .map(|&z| root * sinc(m as f64 * z - j as f64))
                .sum::<f64>()
                / n as f64;
            ensure!(
                (got.get(j) - direct).abs() < 1e-8,
                "seed {seed}, m {m}, j {j}: {} vs {direct}",
                got.get(j)
            );
        }
    }
    Ok(())
}

pub fn laplace_closed_form_matches_fine_quadrature() -> Check {
    let rule = QuadratureRule::composite((1 << 16) / NODES_PER_PANEL, NODES_PER_PANEL);
    for (seed, sigma, m) in [
        (1, 1.0, 1),
        (2, 0.5, 3),
        (3, 1.0 / 10f64.sqrt(), 2),
        (4, 0.2, 6),
    ] {
        let sample = noisy_sample(seed, 200, sigma);
        let model = NoiseModel::laplace(sigma).num()?;
        let generic = compute_coefficients(&sample, &model, m, 256, &rule).num()?;
        let closed = laplace_closed_form_coefficients(&sample, sigma, m, 256).num()?;
        for j in generic.indices() {
            ensure!(
                (generic.get(j) - closed.get(j)).abs() < 1e-8,
                "sigma {sigma}, m {m}, j {j}: {} vs {}",
                generic.get(j),
                closed.get(j)
            );
        }
    }
    Ok(())
}

pub fn coefficients_are_real() -> Check {
    for kind in [NoiseKind::Laplace, NoiseKind::Gaussian] {
        let model = NoiseModel::new(kind, 0.3).num()?;
        let sample = noisy_sample(11, 300, 0.3);
        for m in [1, 2, 5] {
            let rule = coefficient_rule(&sample, m, 128);
            let (_, (j, residue)) =
                coefficients_with_residue(&sample, &model, m, 128, &rule).num()?;
            ensure!(residue < 1e-10, "{kind} m {m}: residue {residue} at j {j}");
        }
    }
    Ok(())
}

pub fn parseval_partial_sums_approach_variance_proxy() -> Check {
    let sigma = 1.0;
    let model = NoiseModel::laplace(sigma).num()?;
    let k = 4096;
    for z in [0.0, 0.37, 5.0] {
        // With a single observation the coefficients are u_{φ_{m,j}}(z).
        let sample = SampleBatch::new(vec![z]).num()?;
        for m in [1, 2, 4] {
            let delta1 = model.delta1(m).num()?;
            let rule = coefficient_rule(&sample, m, k);
            let u = compute_coefficients(&sample, &model, m, k, &rule).num()?;
            let mut partial = u.get(0).powi(2);
            for kk in 1..=k as i64 {
                let next = partial + u.get(kk).powi(2) + u.get(-kk).powi(2);
                ensure!(next >= partial);
                ensure!(
                    next <= delta1 * (1.0 + 1e-6),
                    "z {z}, m {m}, K {kk}: {next} exceeds {delta1}"
                );
                partial = next;
            }
            ensure!(
                partial >= 0.99 * delta1,
                "z {z}, m {m}: {partial} not within 1% of {delta1}"
            );
        }
    }
    Ok(())
}

pub fn variance_proxy_obeys_smoothness_bound() -> Check {
    for kind in [NoiseKind::Laplace, NoiseKind::Gaussian] {
        for sigma in [0.5, 1.0] {
            let model = NoiseModel::new(kind, sigma).num()?;
            let (gamma, mu, delta, kappa0) =
                (model.gamma(), model.mu(), model.delta(), model.kappa0());
            let r = model.smoothness_constants().num()?.r;
            for m in 1..=20 {
                let l = m as f64;
                let ln_bound = -(PI * kappa0 * kappa0 * r).ln()
                    + (1.0 - delta) * (PI * l).ln()
                    + gamma * (sigma * sigma * l * l * PI * PI + 1.0).ln()
                    + 2.0 * mu * sigma.powf(delta) * PI.powf(delta) * l.powf(delta);
                let ln_d = model.ln_delta1(m).num()?;
                ensure!(
                    ln_d <= ln_bound,
                    "{kind} sigma {sigma} m {m}: {ln_d} > {ln_bound}"
                );
            }
        }
    }
    Ok(())
}

pub fn contrast_equals_direct_two_term_evaluation() -> Check {
    let sigma = 0.5;
    let model = NoiseModel::laplace(sigma).num()?;
    let sample = noisy_sample(5, 50, sigma);
    let (m, k_n) = (2usize, 48usize);
    let l = m as f64;
    let coeffs = laplace_closed_form_coefficients(&sample, sigma, m, k_n).num()?;

    // ĝ*(x) = Σ_j â_j L^{-1/2} e^{ixj/L} on [-πL, πL].
    let g_star = |x: f64| {
        coeffs.indices().fold(Complex64::new(0.0, 0.0), |acc, j| {
            acc + Complex64::from_polar(coeffs.get(j) / l.sqrt(), x * j as f64 / l)
        })
    };
    let intervals = 200_000;
    let norm_sq = simpson_complex(
        |x| Complex64::new(g_star(x).norm_sqr(), 0.0),
        -PI * l,
        PI * l,
        intervals,
    )
    .re / (2.0 * PI);
    let cross = simpson_complex(
        |x| {
            let psi = sample
                .values()
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &z| {
                    acc + Complex64::from_polar(1.0, x * z)
                });
            psi * g_star(-x) / model.scaled_cf(x)
        },
        -PI * l,
        PI * l,
        intervals,
    ) / (2.0 * PI);
    ensure!(cross.im.abs() < 1e-8);
    let direct = norm_sq - 2.0 / sample.len() as f64 * cross.re;
    let closed = contrast(&coeffs);
    ensure!((direct - closed).abs() < 1e-8, "{direct} vs {closed}");
    Ok(())
}
