//! Gauss rules on `[-1, 1]` for densities with square-root endpoint behavior.
//!
//! An integral `∫ g(x) dx` over `[lo, hi]` is mapped to `t ∈ [-1, 1]` and
//! evaluated as `h Σ w_i g(x_i) / ρ(t_i)`, where `ρ` is the rule's weight
//! function. With `ρ(t) = sqrt(1 - t²)` (the default) a density of the form
//! `sqrt((hi - x)(x - lo)) * smooth(x)` turns into a smooth integrand.

use std::f64::consts::PI;

/// Default number of nodes.
pub const DEFAULT_NODES: usize = 512;

/// Default entrywise tolerance of the node-doubling check.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RuleKind {
    /// Weight `sqrt(1 - t²)`: Chebyshev polynomials of the second kind.
    SqrtWeight,
    /// Weight `1 / sqrt(1 - t²)`: Chebyshev polynomials of the first kind.
    /// Suited to densities blowing up like `1 / sqrt` at an endpoint.
    InvSqrtWeight,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Convergence tolerance used by integrators that check refinement.
    pub tol: f64,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::sqrt_weight(DEFAULT_NODES)
    }
}

impl QuadratureRule {
    pub fn new(kind: RuleKind, n: usize) -> Self {
        assert!(n > 0, "a quadrature rule needs at least one node");
        let (nodes, weights) = match kind {
            RuleKind::SqrtWeight => (1..=n)
                .map(|i| {
                    let th = i as f64 * PI / (n + 1) as f64;
                    (th.cos(), PI / (n + 1) as f64 * th.sin().powi(2))
                })
                .unzip(),
            RuleKind::InvSqrtWeight => (1..=n)
                .map(|i| {
                    let th = (2 * i - 1) as f64 * PI / (2 * n) as f64;
                    (th.cos(), PI / n as f64)
                })
                .unzip(),
        };
        QuadratureRule {
            kind,
            nodes,
            weights,
            tol: DEFAULT_TOL,
        }
    }

    pub fn sqrt_weight(n: usize) -> Self {
        Self::new(RuleKind::SqrtWeight, n)
    }

    pub fn inv_sqrt_weight(n: usize) -> Self {
        Self::new(RuleKind::InvSqrtWeight, n)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same kind and tolerance with twice the nodes.
    pub fn refined(&self) -> Self {
        Self::new(self.kind, 2 * self.len()).with_tolerance(self.tol)
    }

    /// Rule weight function at `t`.
    pub fn weight_fn(&self, t: f64) -> f64 {
        let s = (1.0 - t * t).max(0.0).sqrt();
        match self.kind {
            RuleKind::SqrtWeight => s,
            RuleKind::InvSqrtWeight => 1.0 / s,
        }
    }

    /// `(x_i, c_i)` on `[lo, hi]` such that `∫ g dx ≈ Σ c_i g(x_i)`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (mid + half * t, half * w / self.weight_fn(t)))
    }

    /// Plain scalar integral of `g` over `[lo, hi]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut g: F) -> f64 {
        self.mapped(lo, hi).map(|(x, c)| c * g(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `∫ t^k sqrt(1 - t²) dt` over `[-1, 1]` by the beta function.
    fn sqrt_moment(k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        // ∫ t^{2j} sqrt(1-t^2) = B(j + 1/2, 3/2) = π (2j)! / (4^j j! (j+1)! 2)
        let j = k / 2;
        let mut v = PI / 2.0;
        for i in 1..=j {
            v *= (2 * i - 1) as f64 / (2 * i + 2) as f64;
        }
        v
    }

    #[test]
    fn weights_are_positive() {
        for kind in [RuleKind::SqrtWeight, RuleKind::InvSqrtWeight] {
            assert!(QuadratureRule::new(kind, 37).weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn exact_for_polynomials_against_sqrt_weight() {
        let n = 8;
        let rule = QuadratureRule::sqrt_weight(n);
        for k in 0..(2 * n as u32) {
            let q: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(t, w)| w * t.powi(k as i32))
                .sum();
            assert!((q - sqrt_moment(k)).abs() < 1e-15, "degree {k}: {q} vs {}", sqrt_moment(k));
        }
    }

    #[test]
    fn semicircle_area_on_shifted_interval() {
        // ∫_{lo}^{hi} sqrt((hi-x)(x-lo)) dx = π (hi-lo)² / 8
        let (lo, hi) = (0.1, 0.9);
        let area = QuadratureRule::sqrt_weight(4).integrate(lo, hi, |x| ((hi - x) * (x - lo)).sqrt());
        assert!((area - PI * 0.64 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_sqrt_endpoint_singularity() {
        // ∫_0^1 sqrt(x)/sqrt(1-x) dx = π/2
        let v = QuadratureRule::inv_sqrt_weight(16).integrate(0.0, 1.0, |x| (x / (1.0 - x)).sqrt());
        assert!((v - PI / 2.0).abs() < 1e-13, "{v}");
    }
}
