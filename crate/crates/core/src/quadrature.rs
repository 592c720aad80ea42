//! Composite Gauss–Legendre quadrature.
//!
//! The coefficient integrals live on `[-π, π]` and oscillate at a frequency
//! set by the truncation `K_n` and the spread of the sample, so the rule is
//! built from equal-width panels with a fixed number of Gauss nodes each.
//! Equal widths let callers walk the panels with a phase recurrence instead
//! of evaluating a complex exponential at every node.

use std::f64::consts::PI;

use crate::error::{DeconvError, Result};

/// Nodes per panel used for the coefficient integrals.
pub const NODES_PER_PANEL: usize = 8;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi's approximation of the i-th root, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if order == 0 {
        return (1.0, 0.0);
    }
    let n = order as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A composite rule on `[-π, π]` made of `panels` equal panels.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    order: usize,
    panels: usize,
    // Offsets of the Gauss nodes from the panel centre, and their weights.
    local_offsets: Vec<f64>,
    local_weights: Vec<f64>,
}

impl QuadratureRule {
    /// Composite rule with `panels` panels of `order` Gauss nodes on `[-π, π]`.
    pub fn composite(panels: usize, order: usize) -> Self {
        assert!(panels >= 1 && order >= 1);
        let (t, w) = gauss_legendre(order);
        let width = 2.0 * PI / panels as f64;
        let half = 0.5 * width;
        let local_offsets: Vec<f64> = t.iter().map(|&ti| half * ti).collect();
        let local_weights: Vec<f64> = w.iter().map(|&wi| half * wi).collect();
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let centre = panel_centre(p, panels);
            for (&off, &wt) in local_offsets.iter().zip(&local_weights) {
                nodes.push(centre + off);
                weights.push(wt);
            }
        }
        // Mirror the second half onto the first so the rule is exactly symmetric.
        let len = nodes.len();
        for i in 0..len / 2 {
            nodes[len - 1 - i] = -nodes[i];
            weights[len - 1 - i] = weights[i];
        }
        if len % 2 == 1 {
            nodes[len / 2] = 0.0;
        }
        Self {
            nodes,
            weights,
            order,
            panels,
            local_offsets,
            local_weights,
        }
    }

    /// Rule sized for coefficient integrals whose integrand oscillates at
    /// angular frequency up to `max_frequency` on `[-π, π]`.
    pub fn for_frequency(max_frequency: f64) -> Self {
        Self::composite(panels_for_frequency(max_frequency), NODES_PER_PANEL)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(crate) fn panel_width(&self) -> f64 {
        2.0 * PI / self.panels as f64
    }

    pub(crate) fn local_offsets(&self) -> &[f64] {
        &self.local_offsets
    }

    #[allow(dead_code)]
    pub(crate) fn local_weights(&self) -> &[f64] {
        &self.local_weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn panel_centre(p: usize, panels: usize) -> f64 {
    -PI + (p as f64 + 0.5) * 2.0 * PI / panels as f64
}

/// Panels needed on `[-π, π]` so that each 8-node panel spans at most
/// `MAX_PHASE_PER_PANEL` radians of the fastest oscillation.
pub fn panels_for_frequency(max_frequency: f64) -> usize {
    const MIN_PANELS: usize = 64;
    const MAX_PANELS: usize = (1 << 20) / NODES_PER_PANEL;
    let needed = (2.0 * PI * max_frequency.abs() / MAX_PHASE_PER_PANEL).ceil();
    if !needed.is_finite() {
        return MAX_PANELS;
    }
    (needed as usize).clamp(MIN_PANELS, MAX_PANELS)
}

/// Phase budget per 8-node panel; at 3 rad the 8-point rule resolves
/// `e^{iωx}` to about 1e-13.
pub const MAX_PHASE_PER_PANEL: f64 = 3.0;

/// Integrates `f` over `[a, b]` with composite Gauss–Legendre panels,
/// doubling the panel count until successive estimates agree to `rel_tol`.
pub fn integrate_doubling<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_nodes: usize,
) -> Result<f64> {
    const ORDER: usize = 8;
    let (t, w) = gauss_legendre(ORDER);
    let estimate = |panels: usize| -> f64 {
        let width = (b - a) / panels as f64;
        let half = 0.5 * width;
        let mut total = 0.0;
        for p in 0..panels {
            let centre = a + (p as f64 + 0.5) * width;
            let mut s = 0.0;
            for (&ti, &wi) in t.iter().zip(&w) {
                s += wi * f(centre + half * ti);
            }
            total += half * s;
        }
        total
    };
    let mut panels = 4;
    let mut prev = estimate(panels);
    let mut change = f64::INFINITY;
    while panels * 2 * ORDER <= max_nodes {
        panels *= 2;
        let next = estimate(panels);
        change = if next == 0.0 {
            (next - prev).abs()
        } else {
            ((next - prev) / next).abs()
        };
        prev = next;
        if change < rel_tol {
            return Ok(next);
        }
        if !next.is_finite() {
            break;
        }
    }
    Err(DeconvError::NoConvergence {
        nodes: panels * ORDER,
        change,
    })
}
