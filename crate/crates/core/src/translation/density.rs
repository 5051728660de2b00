//! The signed measure ν_{x,y} representing one-dimensional Dunkl
//! translations: (τ_y f)(x) = ∫ f(z) dν_{x,y}(z).

use std::sync::Arc;

use crate::error::{DunklError, Result};
use crate::quadrature::GaussRule;
use crate::specfn::gamma::ln_gamma;

/// Nodes per quadrature panel on the support.
pub const DEFAULT_ORDER: usize = 40;

/// Γ(k+½) / (√π 2^{2k} Γ(k)).
fn prefactor(k: f64) -> f64 {
    (ln_gamma(k + 0.5)
        - 0.5 * std::f64::consts::PI.ln()
        - 2.0 * k * std::f64::consts::LN_2
        - ln_gamma(k))
    .exp()
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(DunklError::InvalidParameter {
            name: "k",
            value: k,
            reason: "density form needs k > 0",
        })
    }
}

/// The density ν(x, y, z) of ν_{x,y} with respect to |z|^{2k} dz, for
/// x, y ≠ 0. Signed; zero off the support ||x|−|y|| ≤ |z| ≤ |x|+|y|.
/// Singular at the support endpoints when k < 1.
pub fn nu_density(k: f64, x: f64, y: f64, z: f64) -> Result<f64> {
    check_k(k)?;
    if x == 0.0 || y == 0.0 {
        return Err(DunklError::Config(
            "density form needs x and y nonzero; the measure is a Dirac mass".into(),
        ));
    }
    let (ax, ay, az) = (x.abs(), y.abs(), z.abs());
    let (a, b) = ((ax - ay).abs(), ax + ay);
    if az < a || az > b || z == 0.0 {
        return Ok(0.0);
    }
    let rational = (x + y + z) * (-x + y + z) * (x - y + z) / (x * y * z);
    let p = (ax + ay + az) * (-ax + ay + az) * (ax - ay + az) * (ax + ay - az);
    Ok(prefactor(k) * rational * p.powf(k - 1.0) / (x * y * z).abs().powf(2.0 * k - 1.0))
}

/// Which form the one-dimensional measure ν_{x,y} takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranslationKind {
    /// Absolutely continuous with respect to μ.
    Density,
    /// x = 0: the point mass at y.
    DiracAtY,
    /// y = 0: the point mass at x.
    DiracAtX,
    /// k = 0: the point mass at x + y.
    Shift,
}

/// Gauss rules reused across many measures with the same k.
#[derive(Debug, Clone)]
pub struct TranslationRules {
    k: f64,
    /// (k−1) exponent at the left end.
    left: GaussRule,
    /// (k−1) exponent at the right end.
    right: GaussRule,
    /// (2k−1) exponent at the left end, for supports touching 0.
    origin: GaussRule,
    plain: GaussRule,
}

impl TranslationRules {
    pub fn new(k: f64, order: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Self {
            k,
            left: GaussRule::jacobi(order, 0.0, k - 1.0)?,
            right: GaussRule::jacobi(order, k - 1.0, 0.0)?,
            origin: GaussRule::jacobi(order, 0.0, 2.0 * k - 1.0)?,
            plain: GaussRule::legendre(order),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

/// ν_{x,y} discretized as signed point masses: ∫ f dν ≈ Σ wᵢ f(zᵢ).
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationMeasure {
    k: f64,
    x: f64,
    y: f64,
    kind: TranslationKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Mapped rule on [lo, hi]: nodes and the weights including the Jacobi
/// factor (hi−u)^α (u−lo)^β in original units.
fn mapped(rule: &GaussRule, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let half = 0.5 * (hi - lo);
    let scale = half.powf(1.0 + rule.alpha() + rule.beta());
    rule.nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&s, &w)| (lo + half * (s + 1.0), w * scale))
        .unzip()
}

impl TranslationMeasure {
    pub fn new(k: f64, x: f64, y: f64) -> Result<Self> {
        if k == 0.0 {
            return Self::shift(x, y);
        }
        let rules = Arc::new(TranslationRules::new(k, DEFAULT_ORDER)?);
        Self::with_rules(&rules, x, y)
    }

    fn point(k: f64, x: f64, y: f64, kind: TranslationKind, at: f64) -> Self {
        Self {
            k,
            x,
            y,
            kind,
            nodes: vec![at],
            weights: vec![1.0],
        }
    }

    fn shift(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(DunklError::Config(
                "translation points must be finite".into(),
            ));
        }
        Ok(Self::point(0.0, x, y, TranslationKind::Shift, x + y))
    }

    pub fn with_rules(rules: &TranslationRules, x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(DunklError::Config(
                "translation points must be finite".into(),
            ));
        }
        let k = rules.k;
        if x == 0.0 {
            return Ok(Self::point(k, x, y, TranslationKind::DiracAtY, y));
        }
        if y == 0.0 {
            return Ok(Self::point(k, x, y, TranslationKind::DiracAtX, x));
        }
        let (a, b) = ((x.abs() - y.abs()).abs(), x.abs() + y.abs());
        let c = prefactor(k) / (x * y * (x * y).abs().powf(2.0 * k - 1.0));
        // ν(z)|z|^{2k} = c |z| q(z) P(|z|)^{k−1} with P(u) = (b²−u²)(u²−a²)
        // and q(z) = (x+y+z)(−x+y+z)(x−y+z)/z.
        let d2 = (x - y) * (x - y);
        let pole = (x * x - y * y) * (x - y);
        let q = |z: f64| z * z + (x + y) * z - d2 - if a == 0.0 { 0.0 } else { pole / z };

        let mut us = Vec::new();
        let mut ws = Vec::new();
        let mid = 0.5 * (a + b);
        if a == 0.0 {
            // u·u^{2k−2} = u^{2k−1} carried by the rule
            let (n, w) = mapped(&rules.origin, 0.0, mid);
            for (u, w) in n.into_iter().zip(w) {
                us.push(u);
                ws.push(w * ((b - u) * (b + u)).powf(k - 1.0));
            }
            let (n, w) = mapped(&rules.right, mid, b);
            for (u, w) in n.into_iter().zip(w) {
                us.push(u);
                ws.push(w * u * u.powf(2.0 * k - 2.0) * (b + u).powf(k - 1.0));
            }
        } else {
            // geometric panels toward a resolve the factor (u+a)^{k−1} when a ≪ b
            let mut breaks = vec![a];
            let mut step = 2.0 * a;
            while breaks[breaks.len() - 1] + step < mid - 0.5 * step {
                breaks.push(breaks[breaks.len() - 1] + step);
                step *= 3.0;
            }
            breaks.push(mid);
            breaks.push(b);
            let last = breaks.len() - 2;
            for p in 0..=last {
                let (lo, hi) = (breaks[p], breaks[p + 1]);
                let rule = if p == 0 {
                    &rules.left
                } else if p == last {
                    &rules.right
                } else {
                    &rules.plain
                };
                let (n, w) = mapped(rule, lo, hi);
                for (u, w) in n.into_iter().zip(w) {
                    let lf = if p == 0 { 1.0 } else { (u - a).powf(k - 1.0) };
                    let rf = if p == last {
                        1.0
                    } else {
                        (b - u).powf(k - 1.0)
                    };
                    us.push(u);
                    ws.push(w * u * lf * rf * ((u + a) * (b + u)).powf(k - 1.0));
                }
            }
        }
        let mut nodes = Vec::with_capacity(2 * us.len());
        let mut weights = Vec::with_capacity(2 * us.len());
        for (&u, &w) in us.iter().zip(&ws) {
            for z in [-u, u] {
                nodes.push(z);
                weights.push(c * w * q(z));
            }
        }
        Ok(Self {
            k,
            x,
            y,
            kind: TranslationKind::Density,
            nodes,
            weights,
        })
    }

    pub fn kind(&self) -> TranslationKind {
        self.kind
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// The support [−b, −a] ∪ [a, b] with a = ||x|−|y||, b = |x|+|y|.
    pub fn support(&self) -> [(f64, f64); 2] {
        let (a, b) = (
            (self.x.abs() - self.y.abs()).abs(),
            self.x.abs() + self.y.abs(),
        );
        [(-b, -a), (a, b)]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<T, F>(&self, f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: Fn(f64) -> T,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (&z, &w)| acc + f(z) * w)
    }

    /// ν_{x,y}(ℝ), which is 1.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// |ν_{x,y}|(ℝ). The density keeps one sign on each half of the
    /// support, so summing |wᵢ| is as accurate as the signed quadrature.
    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }
}

/// |ν_{x,y}|(ℝ); 1 for the Dirac cases.
pub fn total_variation(k: f64, x: f64, y: f64) -> Result<f64> {
    Ok(TranslationMeasure::new(k, x, y)?.total_variation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfn::dunkl_kernel_1d;

    #[test]
    fn density_vanishes_off_support() {
        assert_eq!(nu_density(0.7, 1.0, 2.0, 0.5).unwrap(), 0.0);
        assert_eq!(nu_density(0.7, 1.0, 2.0, 3.5).unwrap(), 0.0);
        assert_ne!(nu_density(0.7, 1.0, 2.0, 2.0).unwrap(), 0.0);
        assert!(nu_density(0.7, 0.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn unit_mass() {
        for &k in &[0.2, 0.7, 1.0, 2.5] {
            for &(x, y) in &[
                (1.0, 2.0),
                (-1.0, 2.0),
                (3.0, -0.5),
                (1.5, 1.5),
                (1.5, -1.5),
                (1e-3, 1.0),
                (2.0, 2.0 + 1e-9),
            ] {
                let m = TranslationMeasure::new(k, x, y).unwrap();
                assert!(
                    (m.mass() - 1.0).abs() < 1e-10,
                    "k={k} x={x} y={y}: {}",
                    m.mass()
                );
                assert!(m.total_variation() >= 1.0 - 1e-10);
            }
        }
    }

    #[test]
    fn sign_pattern() {
        // x y > 0: the half of the support on the far side of the origin
        // carries negative mass; x y < 0: the measure is positive
        let k = 0.7;
        for &(x, y) in &[(0.5, 0.3), (1.0, 1.0), (-2.0, -2.5)] {
            let m = TranslationMeasure::new(k, x, y).unwrap();
            assert!(m.weights().iter().any(|&w| w < 0.0), "x={x} y={y}");
            assert!(m.total_variation() > 1.0 + 1e-3);
        }
        for &(x, y) in &[(0.5, -0.3), (-1.0, 1.0), (2.0, -2.5)] {
            let m = TranslationMeasure::new(k, x, y).unwrap();
            assert!(m.weights().iter().all(|&w| w >= 0.0), "x={x} y={y}");
        }
    }

    #[test]
    fn translates_the_kernel() {
        // τ_y E(·, λ)(x) = E(x, λ) E(y, λ)
        for &k in &[0.3, 0.7, 1.8] {
            for &(x, y) in &[(1.0, 2.0), (-0.7, 1.3), (2.0, -2.0), (0.4, 0.4)] {
                let m = TranslationMeasure::new(k, x, y).unwrap();
                for &lam in &[-1.1, 0.6] {
                    let v: f64 = m.integrate(|z| dunkl_kernel_1d(k, z, lam));
                    let want = dunkl_kernel_1d(k, x, lam) * dunkl_kernel_1d(k, y, lam);
                    assert!(
                        (v - want).abs() < 1e-10 * want,
                        "k={k} x={x} y={y} λ={lam}: {v} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn density_symmetries() {
        let k = 0.7;
        for &(x, y, z) in &[
            (1.0, 2.0, 1.5),
            (-1.0, 2.0, -2.5),
            (2.0, -0.7, 1.6),
            (0.9, 1.1, -1.3),
        ] {
            let a = nu_density(k, x, -y, z).unwrap();
            let b = nu_density(k, -z, -y, -x).unwrap();
            let c = nu_density(k, z, y, x).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
            assert!((a - c).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn dirac_cases() {
        let m = TranslationMeasure::new(0.7, 0.0, 2.0).unwrap();
        assert_eq!(m.kind(), TranslationKind::DiracAtY);
        assert_eq!(m.integrate(|z| z * z), 4.0);
        let m = TranslationMeasure::new(0.7, 1.5, 0.0).unwrap();
        assert_eq!(m.kind(), TranslationKind::DiracAtX);
        assert_eq!(m.total_variation(), 1.0);
        let m = TranslationMeasure::new(0.0, 1.5, -0.5).unwrap();
        assert_eq!(m.kind(), TranslationKind::Shift);
        assert_eq!(m.nodes(), &[1.0]);
    }
}
