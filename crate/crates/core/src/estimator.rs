//! Projection estimator on the sinc spaces `S_m`.
//!
//! With `φ(x) = sin(πx)/(πx)` and `φ_{m,j}(x) = √m φ(mx - j)`, the
//! minimum-contrast estimator on `span{φ_{m,j} : |j| ≤ K_n}` has coefficients
//!
//! ```text
//! â_{m,j} = (√m / 2π) ∫_{-π}^{π} e^{ijx} ψ̂_n(mx) / f*(σmx) dx,
//! ψ̂_n(t)  = n⁻¹ Σ_i e^{-itZ_i}.
//! ```
//!
//! The generic path evaluates the empirical characteristic function once on
//! the quadrature nodes and then forms every coefficient as a weighted sum.
//! For Laplace noise `1/f*` is a quadratic polynomial and the integral has
//! a closed form, which is what the simulation harness uses.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{DeconvError, Result};
use crate::noise::{NoiseKind, NoiseModel};
use crate::quadrature::QuadratureRule;

/// Truncation `K_n = 2^8` used unless overridden.
pub const DEFAULT_K_N: usize = 256;

/// Imaginary residue above which a coefficient is reported as a numerical failure.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-6;

/// Observations `Z_i = X_i + σ ε_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    z: Vec<f64>,
}

impl SampleBatch {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if z.is_empty() {
            return Err(DeconvError::InvalidArgument("sample is empty".into()));
        }
        if let Some(i) = z.iter().position(|v| !v.is_finite()) {
            return Err(DeconvError::InvalidArgument(format!(
                "observation {i} is not finite ({})",
                z[i]
            )));
        }
        Ok(Self { z })
    }

    pub fn values(&self) -> &[f64] {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.z.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }
}

/// Estimated coefficients `â_{m,j}` for `j = -K_n..=K_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    m: usize,
    k_n: usize,
    a: Vec<f64>,
}

impl CoefficientSet {
    pub fn new(m: usize, k_n: usize, a: Vec<f64>) -> Result<Self> {
        if m == 0 || k_n == 0 {
            return Err(DeconvError::InvalidArgument(format!(
                "need m >= 1 and k_n >= 1, got m = {m}, k_n = {k_n}"
            )));
        }
        if a.len() != 2 * k_n + 1 {
            return Err(DeconvError::InvalidArgument(format!(
                "expected {} coefficients for k_n = {k_n}, got {}",
                2 * k_n + 1,
                a.len()
            )));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(DeconvError::InvalidArgument(
                "coefficients must be finite".into(),
            ));
        }
        Ok(Self { m, k_n, a })
    }

    pub fn zeros(m: usize, k_n: usize) -> Self {
        Self {
            m,
            k_n,
            a: vec![0.0; 2 * k_n + 1],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k_n(&self) -> usize {
        self.k_n
    }

    /// All coefficients, index `0` holding `j = -K_n`.
    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    /// Coefficient of `φ_{m,j}`; zero outside `|j| ≤ K_n`.
    pub fn get(&self, j: i64) -> f64 {
        let k = self.k_n as i64;
        if j.abs() > k {
            0.0
        } else {
            self.a[(j + k) as usize]
        }
    }

    pub fn set(&mut self, j: i64, value: f64) {
        let k = self.k_n as i64;
        assert!(j.abs() <= k, "index {j} outside |j| <= {k}");
        self.a[(j + k) as usize] = value;
    }

    /// `‖ĝ_m‖²`, by orthonormality of the `φ_{m,j}`.
    pub fn norm_sq(&self) -> f64 {
        self.a.iter().map(|v| v * v).sum()
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        let k = self.k_n as i64;
        -k..=k
    }
}

/// `sin(πt)/(πt)` with `sinc(0) = 1`.
pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        let x = PI * t;
        x.sin() / x
    }
}

/// `ψ̂_n(t) = n⁻¹ Σ_i e^{-itZ_i}` at each `t`.
pub fn empirical_cf(sample: &SampleBatch, t: &[f64]) -> Vec<Complex64> {
    let n = sample.len() as f64;
    t.iter()
        .map(|&ti| {
            let sum = sample
                .values()
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &z| {
                    let (s, c) = (ti * z).sin_cos();
                    acc + Complex64::new(c, -s)
                });
            sum / n
        })
        .collect()
}

/// `ψ̂_n(m x_q)` on every node of a composite rule, walking the equal-width
/// panels with a phase recurrence.
fn empirical_cf_on_rule(sample: &SampleBatch, scale: f64, rule: &QuadratureRule) -> Vec<Complex64> {
    // Exact phases are recomputed every RESYNC panels to bound drift.
    const RESYNC: usize = 32;
    let order = rule.order();
    let panels = rule.panels();
    let width = rule.panel_width();
    let offsets = rule.local_offsets();
    let mut acc = vec![Complex64::new(0.0, 0.0); rule.len()];
    let mut local = vec![Complex64::new(0.0, 0.0); order];
    for &z in sample.values() {
        let theta = scale * z;
        for (slot, &o) in local.iter_mut().zip(offsets) {
            *slot = Complex64::from_polar(1.0, -theta * o);
        }
        let step = Complex64::from_polar(1.0, -theta * width);
        let mut centre = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            if p % RESYNC == 0 {
                let c = -PI + (p as f64 + 0.5) * width;
                centre = Complex64::from_polar(1.0, -theta * c);
            } else {
                centre *= step;
            }
            let base = p * order;
            for (k, l) in local.iter().enumerate() {
                acc[base + k] += centre * l;
            }
        }
    }
    let n = sample.len() as f64;
    for v in &mut acc {
        *v /= n;
    }
    acc
}

/// Composite rule resolving the coefficient integrand for `(sample, m, k_n)`.
pub fn coefficient_rule(sample: &SampleBatch, m: usize, k_n: usize) -> QuadratureRule {
    QuadratureRule::for_frequency(k_n as f64 + m as f64 * sample.max_abs())
}

fn check_indices(m: usize, k_n: usize) -> Result<()> {
    if m == 0 || k_n == 0 {
        return Err(DeconvError::InvalidArgument(format!(
            "need m >= 1 and k_n >= 1, got m = {m}, k_n = {k_n}"
        )));
    }
    Ok(())
}

/// Coefficients by quadrature against the empirical characteristic function.
///
/// Cost is `O(n Q + K_n Q)` for `Q` quadrature nodes.
pub fn compute_coefficients(
    sample: &SampleBatch,
    model: &NoiseModel,
    m: usize,
    k_n: usize,
    rule: &QuadratureRule,
) -> Result<CoefficientSet> {
    let (set, residue) = coefficients_with_residue(sample, model, m, k_n, rule)?;
    if residue.1 > IMAGINARY_RESIDUE_LIMIT {
        return Err(DeconvError::ImaginaryResidue {
            m,
            j: residue.0,
            residue: residue.1,
        });
    }
    Ok(set)
}

/// Like [`compute_coefficients`] but also returns the largest imaginary
/// residue and the index where it occurs, without failing on it.
pub fn coefficients_with_residue(
    sample: &SampleBatch,
    model: &NoiseModel,
    m: usize,
    k_n: usize,
    rule: &QuadratureRule,
) -> Result<(CoefficientSet, (i64, f64))> {
    check_indices(m, k_n)?;
    let l = m as f64;
    let psi = empirical_cf_on_rule(sample, l, rule);
    let weighted: Vec<Complex64> = psi
        .iter()
        .zip(rule.nodes())
        .zip(rule.weights())
        .map(|((&p, &x), &w)| p * (w * model.inverse_scaled_cf(l * x)))
        .collect();

    let k = k_n as i64;
    let step: Vec<Complex64> = rule
        .nodes()
        .iter()
        .map(|&x| Complex64::from_polar(1.0, x))
        .collect();
    let mut phase: Vec<Complex64> = rule
        .nodes()
        .iter()
        .map(|&x| Complex64::from_polar(1.0, -(k as f64) * x))
        .collect();
    let scale = l.sqrt() / (2.0 * PI);
    let mut a = Vec::with_capacity(2 * k_n + 1);
    let mut worst = (0i64, 0.0f64);
    for j in -k..=k {
        if j != -k {
            for (ph, st) in phase.iter_mut().zip(&step) {
                *ph *= st;
            }
            // resync against drift once per 64 indices
            if (j + k) % 64 == 0 {
                for (ph, &x) in phase.iter_mut().zip(rule.nodes()) {
                    *ph = Complex64::from_polar(1.0, j as f64 * x);
                }
            }
        }
        let sum = phase
            .iter()
            .zip(&weighted)
            .fold(Complex64::new(0.0, 0.0), |acc, (ph, w)| acc + ph * w);
        let value = sum * scale;
        if value.im.abs() > worst.1 {
            worst = (j, value.im.abs());
        }
        a.push(value.re);
    }
    Ok((CoefficientSet::new(m, k_n, a)?, worst))
}

/// Exact coefficients for Laplace noise, where `1/f*(σmx) = 1 + (σmx)²/2`.
pub fn laplace_closed_form_coefficients(
    sample: &SampleBatch,
    sigma: f64,
    m: usize,
    k_n: usize,
) -> Result<CoefficientSet> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(DeconvError::InvalidArgument(format!(
            "Laplace closed form needs sigma > 0, got {sigma}"
        )));
    }
    polynomial_closed_form(sample, 0.5 * (sigma * m as f64).powi(2), m, k_n)
}

/// Coefficients when `1/f*(σmx) = 1 + c x²`; `c = 0` is direct projection.
fn polynomial_closed_form(
    sample: &SampleBatch,
    c: f64,
    m: usize,
    k_n: usize,
) -> Result<CoefficientSet> {
    check_indices(m, k_n)?;
    let l = m as f64;
    let k = k_n as i64;
    let mut acc = vec![0.0; 2 * k_n + 1];
    for &z in sample.values() {
        let shift = l * z;
        let (s_theta, c_theta) = (PI * shift).sin_cos();
        // sin(π(j - lz)) = -(-1)^j sin(πlz), cos(π(j - lz)) = (-1)^j cos(πlz)
        let mut parity = if k % 2 == 0 { 1.0 } else { -1.0 };
        for (slot, j) in acc.iter_mut().zip(-k..=k) {
            let w = j as f64 - shift;
            let (cos_int, x2_cos_int) = if w.abs() < 1.0 {
                cosine_moments_series(w)
            } else {
                let sin_pw = -parity * s_theta;
                let cos_pw = parity * c_theta;
                let inv = 1.0 / w;
                let s = 2.0 * sin_pw * inv;
                let t = 2.0
                    * (PI * PI * sin_pw * inv + 2.0 * PI * cos_pw * inv * inv
                        - 2.0 * sin_pw * inv * inv * inv);
                (s, t)
            };
            *slot += cos_int + c * x2_cos_int;
            parity = -parity;
        }
    }
    let scale = l.sqrt() / (2.0 * PI * sample.len() as f64);
    for v in &mut acc {
        *v *= scale;
    }
    CoefficientSet::new(m, k_n, acc)
}

/// `(∫_{-π}^{π} cos(wx) dx, ∫_{-π}^{π} x² cos(wx) dx)` by power series, for `|w| < 1`.
fn cosine_moments_series(w: f64) -> (f64, f64) {
    let u = PI * w;
    let u2 = u * u;
    // term_k = (-1)^k u^{2k} / (2k)!
    let mut term = 1.0;
    let mut s = 0.0;
    let mut t = 0.0;
    for k in 0..24 {
        let kk = k as f64;
        s += term / (2.0 * kk + 1.0);
        t += term / (2.0 * kk + 3.0);
        term *= -u2 / ((2.0 * kk + 1.0) * (2.0 * kk + 2.0));
    }
    (2.0 * PI * s, 2.0 * PI.powi(3) * t)
}

/// Coefficients of `ĝ_m` for `model`, using the closed form where one exists.
pub fn estimate_coefficients(
    sample: &SampleBatch,
    model: &NoiseModel,
    m: usize,
    k_n: usize,
) -> Result<CoefficientSet> {
    match model.kind() {
        NoiseKind::None => polynomial_closed_form(sample, 0.0, m, k_n),
        NoiseKind::Laplace => laplace_closed_form_coefficients(sample, model.sigma(), m, k_n),
        NoiseKind::Gaussian => {
            let rule = coefficient_rule(sample, m, k_n);
            compute_coefficients(sample, model, m, k_n, &rule)
        }
    }
}

/// `γ_n(ĝ_m) = -Σ_j â²_{m,j}`.
pub fn contrast(c: &CoefficientSet) -> f64 {
    -c.norm_sq()
}

/// `ĝ(x) = Σ_j â_{m,j} √m sinc(mx - j)` on each grid point.
pub fn evaluate(c: &CoefficientSet, grid: &[f64]) -> Vec<f64> {
    let l = c.m() as f64;
    let root = l.sqrt();
    let k = c.k_n() as i64;
    grid.iter()
        .map(|&x| {
            let mx = l * x;
            let s = (PI * mx).sin();
            let mut parity = if k % 2 == 0 { 1.0 } else { -1.0 };
            let mut total = 0.0;
            for (&a, j) in c.as_slice().iter().zip(-k..=k) {
                if a != 0.0 {
                    let t = mx - j as f64;
                    // sin(π(mx - j)) = (-1)^j sin(πmx)
                    let basis = if t.abs() < 1.0 {
                        sinc(t)
                    } else {
                        parity * s / (PI * t)
                    };
                    total += a * basis;
                }
                parity = -parity;
            }
            root * total
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn batch(z: &[f64]) -> SampleBatch {
        SampleBatch::new(z.to_vec()).unwrap()
    }

    #[test]
    fn sample_batch_validation() {
        assert!(SampleBatch::new(vec![]).is_err());
        assert!(SampleBatch::new(vec![1.0, f64::NAN]).is_err());
        assert_eq!(batch(&[-3.0, 2.0]).max_abs(), 3.0);
    }

    #[test]
    fn empirical_cf_examples() {
        let one = empirical_cf(&batch(&[0.0]), &[0.0, 1.7, -40.0]);
        for v in one {
            assert_eq!(v, Complex64::new(1.0, 0.0));
        }
        let tau = 0.83;
        let sym = empirical_cf(&batch(&[-1.0, 1.0]), &[tau])[0];
        assert_relative_eq!(sym.re, tau.cos(), max_relative = 1e-15);
        assert!(sym.im.abs() < 1e-16);

        let z = [1.0, 2.0, 3.0];
        let got = empirical_cf(&batch(&z), &[0.7])[0];
        let mut re = 0.0;
        let mut im = 0.0;
        for zi in z {
            re += (0.7 * zi).cos();
            im -= (0.7 * zi).sin();
        }
        assert_relative_eq!(got.re, re / 3.0, max_relative = 1e-15);
        assert_relative_eq!(got.im, im / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn recurrence_cf_matches_direct() {
        let s = batch(&[0.3, -2.7, 11.5, 4.25, -0.01]);
        let rule = QuadratureRule::composite(200, 8);
        let fast = empirical_cf_on_rule(&s, 3.0, &rule);
        let t: Vec<f64> = rule.nodes().iter().map(|x| 3.0 * x).collect();
        let direct = empirical_cf(&s, &t);
        for (a, b) in fast.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn generic_coefficients_single_point_no_noise() {
        let s = batch(&[0.0]);
        let rule = coefficient_rule(&s, 1, 4);
        let c = compute_coefficients(&s, &NoiseModel::none(), 1, 4, &rule).unwrap();
        assert!((c.get(0) - 1.0).abs() < 1e-12);
        assert!(c.get(1).abs() < 1e-12);
    }

    #[test]
    fn laplace_single_point_coefficient() {
        let s = batch(&[0.0]);
        let expected = 1.0 + PI * PI / 6.0;
        let lap = NoiseModel::laplace(1.0).unwrap();
        let rule = coefficient_rule(&s, 1, 8);
        let generic = compute_coefficients(&s, &lap, 1, 8, &rule).unwrap();
        let closed = laplace_closed_form_coefficients(&s, 1.0, 1, 8).unwrap();
        assert_relative_eq!(generic.get(0), expected, max_relative = 1e-12);
        assert_relative_eq!(closed.get(0), expected, max_relative = 1e-14);
        assert_relative_eq!(expected, 2.644_93, max_relative = 1e-5);
    }

    #[test]
    fn laplace_closed_form_rejects_zero_sigma() {
        assert!(laplace_closed_form_coefficients(&batch(&[0.0]), 0.0, 1, 4).is_err());
    }

    #[test]
    fn series_and_closed_moments_agree_near_switch() {
        // absolute tolerance: the closed form loses relative accuracy where sin(πw) is tiny
        for w in [0.999_999_9, -0.999_999_9, 0.75, -0.5] {
            let (s, t) = cosine_moments_series(w);
            let sp = (PI * w).sin();
            let cp = (PI * w).cos();
            let s2 = 2.0 * sp / w;
            let t2 = 2.0 * (PI * PI * sp / w + 2.0 * PI * cp / (w * w) - 2.0 * sp / w.powi(3));
            assert!((s - s2).abs() < 1e-12, "{w}: {s} vs {s2}");
            assert!((t - t2).abs() < 1e-12, "{w}: {t} vs {t2}");
        }
        let (s0, t0) = cosine_moments_series(0.0);
        assert_relative_eq!(s0, 2.0 * PI);
        assert_relative_eq!(t0, 2.0 * PI.powi(3) / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn contrast_examples() {
        assert_eq!(contrast(&CoefficientSet::zeros(1, 3)), 0.0);
        let mut c = CoefficientSet::zeros(1, 3);
        c.set(0, 1.0);
        assert_eq!(contrast(&c), -1.0);
    }

    #[test]
    fn evaluate_examples() {
        let zero = CoefficientSet::zeros(2, 5);
        assert!(evaluate(&zero, &[-1.0, 0.0, 3.3]).iter().all(|&v| v == 0.0));

        let mut c = CoefficientSet::zeros(1, 3);
        c.set(0, 1.0);
        assert_relative_eq!(evaluate(&c, &[0.0])[0], 1.0);
        c.set(1, 1.0);
        assert_relative_eq!(evaluate(&c, &[0.5])[0], 4.0 / PI, max_relative = 1e-14);
    }

    #[test]
    fn evaluate_matches_naive_sum() {
        let mut c = CoefficientSet::zeros(3, 6);
        for (i, j) in (-6..=6).enumerate() {
            c.set(j, ((i * 7 % 5) as f64 - 2.0) * 0.1);
        }
        let grid: Vec<f64> = (0..101).map(|i| -4.0 + 0.08 * i as f64).collect();
        let fast = evaluate(&c, &grid);
        for (x, v) in grid.iter().zip(fast) {
            let naive: f64 = (-6..=6)
                .map(|j| c.get(j) * 3f64.sqrt() * sinc(3.0 * x - j as f64))
                .sum();
            assert!((v - naive).abs() < 1e-12, "x = {x}: {v} vs {naive}");
        }
    }

    #[test]
    fn coefficient_set_validation() {
        assert!(CoefficientSet::new(1, 2, vec![0.0; 4]).is_err());
        assert!(CoefficientSet::new(0, 2, vec![0.0; 5]).is_err());
        assert!(CoefficientSet::new(1, 2, vec![0.0, 1.0, f64::INFINITY, 0.0, 0.0]).is_err());
        let c = CoefficientSet::new(1, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(c.get(-2), 1.0);
        assert_eq!(c.get(2), 5.0);
        assert_eq!(c.get(3), 0.0);
    }
}
