//! Gauss–Jacobi rules by the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{DunklError, Result};
use crate::specfn::gamma::ln_gamma;

/// An n-point Gauss rule for ∫_{-1}^{1} (1−u)^α (1+u)^β g(u) du.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    alpha: f64,
    beta: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    /// Gauss–Jacobi rule with exponents α, β > −1.
    pub fn jacobi(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(DunklError::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "need at least one node",
            });
        }
        if !(alpha > -1.0 && alpha.is_finite()) {
            return Err(DunklError::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must exceed -1",
            });
        }
        if !(beta > -1.0 && beta.is_finite()) {
            return Err(DunklError::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "must exceed -1",
            });
        }
        let s = alpha + beta;
        let mu0 = ((s + 1.0) * 2f64.ln() + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
            - ln_gamma(s + 2.0))
        .exp();

        let mut jm = DMatrix::<f64>::zeros(n, n);
        jm[(0, 0)] = (beta - alpha) / (s + 2.0);
        for i in 1..n {
            let fi = i as f64;
            let d = 2.0 * fi + s;
            jm[(i, i)] = (beta * beta - alpha * alpha) / (d * (d + 2.0));
            let off2 = if i == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + s).powi(2) * (3.0 + s))
            } else {
                4.0 * fi * (fi + alpha) * (fi + beta) * (fi + s) / (d * d * (d + 1.0) * (d - 1.0))
            };
            let off = off2.sqrt();
            jm[(i, i - 1)] = off;
            jm[(i - 1, i)] = off;
        }
        let eig = SymmetricEigen::try_new(jm, f64::EPSILON, 0)
            .ok_or(DunklError::Quadrature { order: n })?;
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|j| (eig.eigenvalues[j], mu0 * eig.eigenvectors[(0, j)].powi(2)))
            .collect();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        Ok(Self {
            alpha,
            beta,
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Gauss–Legendre rule.
    pub fn legendre(n: usize) -> Self {
        Self::jacobi(n, 0.0, 0.0).expect("legendre rule")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights on [a, b] for ∫_a^b (b−x)^α (x−a)^β g(x) dx.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let jac = half.powf(1.0 + self.alpha + self.beta);
        let nodes = self.nodes.iter().map(|u| a + half * (u + 1.0)).collect();
        let weights = self.weights.iter().map(|w| w * jac).collect();
        (nodes, weights)
    }

    /// Σ w_i g(u_i) on the reference interval.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * g(u))
            .sum()
    }
}

/// Nodes and weights of ∫_a^b |x|^{2k} g(x) dx for a panel whose only
/// possible contact with the origin is at one of its endpoints.
pub fn weighted_panel(
    rule_plain: &GaussRule,
    rule_at_zero: Option<&GaussRule>,
    k: f64,
    a: f64,
    b: f64,
) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(a < b);
    match rule_at_zero {
        Some(r) if k > 0.0 && a == 0.0 => {
            // weight (x − 0)^{2k}: Jacobi exponent sits at the left end
            debug_assert_eq!(r.alpha(), 0.0);
            r.mapped(a, b)
        }
        Some(r) if k > 0.0 && b == 0.0 => {
            // weight (0 − x)^{2k}: mirror of the rule above
            let (n, w) = r.mapped(0.0, -a);
            let nodes: Vec<f64> = n.iter().rev().map(|x| -x).collect();
            let weights: Vec<f64> = w.iter().rev().copied().collect();
            (nodes, weights)
        }
        _ => {
            let (n, w) = rule_plain.mapped(a, b);
            let weights = n
                .iter()
                .zip(&w)
                .map(|(x, w)| w * x.abs().powf(2.0 * k))
                .collect();
            (n, weights)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfn::gamma::gamma;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let r = GaussRule::legendre(16);
        for p in 0..31 {
            let got = r.integrate(|u| u.powi(p));
            let exact = if p % 2 == 1 {
                0.0
            } else {
                2.0 / (p as f64 + 1.0)
            };
            assert!((got - exact).abs() < 1e-14, "p = {p}");
        }
    }

    #[test]
    fn jacobi_moments_match_beta_function() {
        // ∫ (1−u)^α (1+u)^β (1+u)^m du = 2^{α+β+m+1} B(α+1, β+m+1)
        for &(alpha, beta) in &[
            (-0.7, 0.3),
            (-0.3, 0.7),
            (0.5, 1.5),
            (1.5, 2.5),
            (-0.5, -0.5),
        ] {
            let r = GaussRule::jacobi(20, alpha, beta).unwrap();
            for m in 0..30 {
                let mf = m as f64;
                let exact = 2f64.powf(alpha + beta + mf + 1.0)
                    * gamma(alpha + 1.0)
                    * gamma(beta + mf + 1.0)
                    / gamma(alpha + beta + mf + 2.0);
                let got = r.integrate(|u| (1.0 + u).powi(m));
                assert!(
                    (got - exact).abs() <= 1e-12 * exact,
                    "α={alpha} β={beta} m={m}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn nodes_sorted_and_inside() {
        let r = GaussRule::jacobi(64, -0.3, 0.7).unwrap();
        assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(r.nodes()[0] > -1.0 && r.nodes()[63] < 1.0);
        assert!(r.weights().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn mapped_rule_on_interval() {
        // ∫_1^3 (3−x)^{0.5} (x−1)^{1.5} dx = 2^3 B(1.5, 2.5)
        let r = GaussRule::jacobi(8, 0.5, 1.5).unwrap();
        let (n, w) = r.mapped(1.0, 3.0);
        let got: f64 = w.iter().sum();
        let exact = 8.0 * gamma(1.5) * gamma(2.5) / gamma(4.0);
        assert!((got - exact).abs() < 1e-13);
        assert!(n.iter().all(|x| *x > 1.0 && *x < 3.0));
    }

    #[test]
    fn weighted_panel_at_origin() {
        let k = 0.35;
        let plain = GaussRule::legendre(12);
        let zero = GaussRule::jacobi(12, 0.0, 2.0 * k).unwrap();
        let exact = 2f64.powf(2.0 * k + 1.0) / (2.0 * k + 1.0);
        let (_, w) = weighted_panel(&plain, Some(&zero), k, 0.0, 2.0);
        assert!((w.iter().sum::<f64>() - exact).abs() < 1e-13);
        let (n, w) = weighted_panel(&plain, Some(&zero), k, -2.0, 0.0);
        assert!((w.iter().sum::<f64>() - exact).abs() < 1e-13);
        assert!(n.windows(2).all(|p| p[0] < p[1]) && n.iter().all(|x| *x < 0.0));
        let (_, w) = weighted_panel(&plain, Some(&zero), k, 2.0, 3.0);
        let exact = (3f64.powf(2.0 * k + 1.0) - 2f64.powf(2.0 * k + 1.0)) / (2.0 * k + 1.0);
        assert!((w.iter().sum::<f64>() - exact).abs() < 1e-13);
    }
}
