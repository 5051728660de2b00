//! Panel quadrature grids carrying the weight |x|^{2k} and functions sampled
//! on them.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{DunklError, Result};
use crate::quadrature::{weighted_panel, GaussRule};
use crate::specfn::MultiplicityVector;

#[derive(Debug, Clone, PartialEq)]
struct Panel {
    lo: f64,
    hi: f64,
    start: usize,
    len: usize,
    bary: Vec<f64>,
}

/// One-dimensional composite Gauss grid for ∫ g(x) |x|^{2k} dx.
///
/// Panels touching the origin use a Gauss–Jacobi rule with the exponent 2k
/// at that endpoint; all other panels are Gauss–Legendre with the weight
/// folded into the quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisGrid {
    k: f64,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: Vec<Panel>,
}

fn barycentric_weights(u: &[f64]) -> Vec<f64> {
    (0..u.len())
        .map(|j| {
            let mut p = 1.0;
            for (i, &ui) in u.iter().enumerate() {
                if i != j {
                    p *= u[j] - ui;
                }
            }
            1.0 / p
        })
        .collect()
}

impl AxisGrid {
    /// Grid with panels between consecutive breakpoints. The origin is
    /// inserted as a breakpoint when it lies strictly inside the range.
    pub fn from_breakpoints(k: f64, breaks: &[f64], order: usize) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(DunklError::InvalidParameter {
                name: "k",
                value: k,
                reason: "must be finite and non-negative",
            });
        }
        if order < 2 {
            return Err(DunklError::InvalidParameter {
                name: "order",
                value: order as f64,
                reason: "need at least two nodes per panel",
            });
        }
        if breaks.len() < 2
            || breaks.windows(2).any(|w| !(w[0] < w[1]))
            || breaks.iter().any(|b| !b.is_finite())
        {
            return Err(DunklError::Config(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        let mut bp: Vec<f64> = breaks.to_vec();
        if bp[0] < 0.0 && bp[bp.len() - 1] > 0.0 && !bp.contains(&0.0) {
            let pos = bp.iter().position(|&b| b > 0.0).unwrap();
            bp.insert(pos, 0.0);
        }
        let plain = GaussRule::legendre(order);
        let at_zero = if k > 0.0 {
            Some(GaussRule::jacobi(order, 0.0, 2.0 * k)?)
        } else {
            None
        };
        let bary_plain = barycentric_weights(plain.nodes());
        let bary_zero = at_zero.as_ref().map(|r| barycentric_weights(r.nodes()));

        let mut nodes = Vec::with_capacity(order * (bp.len() - 1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        let mut panels = Vec::with_capacity(bp.len() - 1);
        for w in bp.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (n, wt) = weighted_panel(&plain, at_zero.as_ref(), k, a, b);
            let bary = match (&bary_zero, a == 0.0 || b == 0.0) {
                (Some(bz), true) => {
                    if b == 0.0 {
                        bz.iter().rev().copied().collect()
                    } else {
                        bz.clone()
                    }
                }
                _ => bary_plain.clone(),
            };
            panels.push(Panel {
                lo: a,
                hi: b,
                start: nodes.len(),
                len: n.len(),
                bary,
            });
            nodes.extend(n);
            weights.extend(wt);
        }
        Ok(Self {
            k,
            order,
            nodes,
            weights,
            panels,
        })
    }

    /// Uniform panels on [−R, R] (`panels_per_side` on each half).
    pub fn uniform(k: f64, radius: f64, panels_per_side: usize, order: usize) -> Result<Self> {
        crate::error::check_positive("radius", radius)?;
        let m = panels_per_side.max(1);
        let mut bp = Vec::with_capacity(2 * m + 1);
        for i in 0..=2 * m {
            bp.push(radius * (i as f64 - m as f64) / m as f64);
        }
        bp[m] = 0.0;
        Self::from_breakpoints(k, &bp, order)
    }

    /// Uniform panels on [−inner, inner] followed by geometrically growing
    /// panels out to ±outer.
    pub fn graded(
        k: f64,
        inner: f64,
        outer: f64,
        inner_panels_per_side: usize,
        outer_panels_per_side: usize,
        order: usize,
    ) -> Result<Self> {
        crate::error::check_positive("inner", inner)?;
        if !(outer > inner) {
            return Self::uniform(k, inner, inner_panels_per_side, order);
        }
        let m = inner_panels_per_side.max(1);
        let g = outer_panels_per_side.max(1);
        let mut right = Vec::new();
        for i in 1..=m {
            right.push(inner * i as f64 / m as f64);
        }
        let ratio = (outer / inner).powf(1.0 / g as f64);
        let mut r = inner;
        for _ in 0..g {
            r *= ratio;
            right.push(r);
        }
        *right.last_mut().unwrap() = outer;
        let mut bp: Vec<f64> = right.iter().rev().map(|v| -v).collect();
        bp.push(0.0);
        bp.extend(right);
        Self::from_breakpoints(k, &bp, order)
    }

    /// Same breakpoints with every panel split in half.
    pub fn refined(&self) -> Self {
        let mut bp = Vec::with_capacity(2 * self.panels.len() + 1);
        for p in &self.panels {
            bp.push(p.lo);
            bp.push(0.5 * (p.lo + p.hi));
        }
        bp.push(self.panels.last().unwrap().hi);
        Self::from_breakpoints(self.k, &bp, self.order).expect("refined breakpoints stay valid")
    }

    /// Same breakpoints with a different per-panel order.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::from_breakpoints(self.k, &self.breakpoints(), order)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.panels[0].lo
    }

    pub fn hi(&self) -> f64 {
        self.panels[self.panels.len() - 1].hi
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut bp: Vec<f64> = self.panels.iter().map(|p| p.lo).collect();
        bp.push(self.hi());
        bp
    }

    /// Panel-local Lagrange basis at `x`: index of the first node and the
    /// basis values. `None` outside the grid range.
    pub fn basis(&self, x: f64) -> Option<(usize, Vec<f64>)> {
        if !(x >= self.lo() && x <= self.hi()) {
            return None;
        }
        let idx = self
            .panels
            .partition_point(|p| p.hi < x)
            .min(self.panels.len() - 1);
        let p = &self.panels[idx];
        let xs = &self.nodes[p.start..p.start + p.len];
        if let Some(j) = xs.iter().position(|&v| v == x) {
            let mut e = vec![0.0; p.len];
            e[j] = 1.0;
            return Some((p.start, e));
        }
        let terms: Vec<f64> = xs
            .iter()
            .zip(&p.bary)
            .map(|(&xj, &wj)| wj / (x - xj))
            .collect();
        let denom: f64 = terms.iter().sum();
        Some((p.start, terms.into_iter().map(|t| t / denom).collect()))
    }
}

/// Tensor product of axis grids, row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorGrid {
    axes: Vec<AxisGrid>,
}

impl TensorGrid {
    pub fn new(axes: Vec<AxisGrid>) -> Result<Self> {
        if axes.is_empty() {
            return Err(DunklError::Config(
                "tensor grid needs at least one axis".into(),
            ));
        }
        Ok(Self { axes })
    }

    pub fn single(axis: AxisGrid) -> Self {
        Self { axes: vec![axis] }
    }

    /// The same axis grid construction repeated for every multiplicity.
    pub fn uniform(
        mult: &MultiplicityVector,
        radius: f64,
        panels_per_side: usize,
        order: usize,
    ) -> Result<Self> {
        let axes = mult
            .k()
            .iter()
            .map(|&k| AxisGrid::uniform(k, radius, panels_per_side, order))
            .collect::<Result<Vec<_>>>()?;
        Self::new(axes)
    }

    pub fn axes(&self) -> &[AxisGrid] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(AxisGrid::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multiplicity(&self) -> MultiplicityVector {
        MultiplicityVector::new(self.axes.iter().map(AxisGrid::k).collect())
            .expect("axis multiplicities are valid")
    }

    pub fn refined(&self) -> Self {
        Self {
            axes: self.axes.iter().map(AxisGrid::refined).collect(),
        }
    }

    fn multi_index(&self, mut idx: usize, out: &mut [usize]) {
        for j in (0..self.axes.len()).rev() {
            let n = self.axes[j].len();
            out[j] = idx % n;
            idx /= n;
        }
    }

    pub fn node(&self, idx: usize) -> Vec<f64> {
        let mut mi = vec![0; self.dim()];
        self.multi_index(idx, &mut mi);
        mi.iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.nodes[i])
            .collect()
    }

    pub fn weight(&self, idx: usize) -> f64 {
        let mut mi = vec![0; self.dim()];
        self.multi_index(idx, &mut mi);
        mi.iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.weights[i])
            .product()
    }

    pub fn nodes(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }
}

/// See [`GridFunction::edge_magnitudes`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMagnitudes {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub sup: f64,
}

impl EdgeMagnitudes {
    /// Largest edge value relative to the sup (0 for the zero function).
    pub fn ratio(&self) -> f64 {
        if self.sup == 0.0 {
            return 0.0;
        }
        self.lo
            .iter()
            .chain(&self.hi)
            .fold(0.0f64, |a, &b| a.max(b))
            / self.sup
    }
}

/// A function sampled on a [`TensorGrid`]; the grid weights integrate
/// against dμ.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Arc<TensorGrid>,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Arc<TensorGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(DunklError::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn sample<F: Fn(&[f64]) -> Complex64>(grid: Arc<TensorGrid>, f: F) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.node(i))).collect();
        Self { grid, values }
    }

    pub fn sample_real<F: Fn(&[f64]) -> f64>(grid: Arc<TensorGrid>, f: F) -> Self {
        Self::sample(grid, |p| Complex64::new(f(p), 0.0))
    }

    pub fn zeros(grid: Arc<TensorGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn grid(&self) -> &Arc<TensorGrid> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn nodes(&self) -> Vec<Vec<f64>> {
        self.grid.nodes()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.grid.weights()
    }

    pub fn multiplicity(&self) -> MultiplicityVector {
        self.grid.multiplicity()
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    /// ∫ f dμ.
    pub fn integral(&self) -> Complex64 {
        self.weighted_sum(|_, v| v)
    }

    /// ∫ |f|^p dμ raised to 1/p.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.weighted_sum(|_, v| Complex64::new(v.norm().powf(p), 0.0))
            .re
            .powf(1.0 / p)
    }

    /// ∫ |f(x)| (1 + |x|)^δ dμ(x).
    pub fn weighted_l1(&self, delta: f64) -> f64 {
        self.weighted_sum(|x, v| {
            let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            Complex64::new(v.norm() * (1.0 + r).powf(delta), 0.0)
        })
        .re
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn weighted_sum<F: Fn(&[f64], Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.values.len() {
            let x = self.grid.node(i);
            acc += f(&x, self.values[i]) * self.grid.weight(i);
        }
        acc
    }

    /// Largest |f| on the outermost panel at each end of every axis, with the
    /// overall sup. Used to decide whether truncating f to its grid loses
    /// anything.
    pub fn edge_magnitudes(&self) -> EdgeMagnitudes {
        let axes = self.grid.axes();
        let n = axes.len();
        let shape: Vec<usize> = axes.iter().map(|a| a.len()).collect();
        let mut lo = vec![0.0f64; n];
        let mut hi = vec![0.0f64; n];
        let mut sup = 0.0f64;
        let inner: Vec<(f64, f64)> = axes
            .iter()
            .map(|a| {
                let b = a.breakpoints();
                (b[1], b[b.len() - 2])
            })
            .collect();
        for (idx, v) in self.values.iter().enumerate() {
            let m = v.norm();
            sup = sup.max(m);
            let mut rem = idx;
            for j in (0..n).rev() {
                let i = rem % shape[j];
                rem /= shape[j];
                let xj = axes[j].nodes()[i];
                if xj <= inner[j].0 {
                    lo[j] = lo[j].max(m);
                }
                if xj >= inner[j].1 {
                    hi[j] = hi[j].max(m);
                }
            }
        }
        EdgeMagnitudes { lo, hi, sup }
    }

    /// Panel-wise polynomial interpolation; zero outside the grid box.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim(), "point dimension");
        let mut bases = Vec::with_capacity(x.len());
        for (xj, axis) in x.iter().zip(self.grid.axes()) {
            match axis.basis(*xj) {
                Some(b) => bases.push(b),
                None => return Complex64::new(0.0, 0.0),
            }
        }
        let strides: Vec<usize> = {
            let axes = self.grid.axes();
            let mut s = vec![1; axes.len()];
            for j in (0..axes.len().saturating_sub(1)).rev() {
                s[j] = s[j + 1] * axes[j + 1].len();
            }
            s
        };
        self.contract(&bases, &strides, 0, 0)
    }

    fn contract(
        &self,
        bases: &[(usize, Vec<f64>)],
        strides: &[usize],
        axis: usize,
        offset: usize,
    ) -> Complex64 {
        let (start, ref b) = bases[axis];
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &bi) in b.iter().enumerate() {
            if bi == 0.0 {
                continue;
            }
            let off = offset + (start + i) * strides[axis];
            let v = if axis + 1 == bases.len() {
                self.values[off]
            } else {
                self.contract(bases, strides, axis + 1, off)
            };
            acc += v * bi;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_integrates_weighted_monomials() {
        let k = 0.7;
        let g = AxisGrid::uniform(k, 2.0, 3, 12).unwrap();
        // ∫_{-2}^{2} |x|^{2k} x² dx = 2·2^{2k+3}/(2k+3)
        let got: f64 = g
            .nodes()
            .iter()
            .zip(g.weights())
            .map(|(x, w)| w * x * x)
            .sum();
        let exact = 2.0 * 2f64.powf(2.0 * k + 3.0) / (2.0 * k + 3.0);
        assert!((got - exact).abs() < 1e-13 * exact);
    }

    #[test]
    fn origin_inserted() {
        let g = AxisGrid::from_breakpoints(0.3, &[-1.0, 0.5, 2.0], 8).unwrap();
        assert_eq!(g.breakpoints(), vec![-1.0, 0.0, 0.5, 2.0]);
    }

    #[test]
    fn graded_grid_breakpoints() {
        let g = AxisGrid::graded(0.0, 1.0, 100.0, 2, 4, 8).unwrap();
        let bp = g.breakpoints();
        assert_eq!(bp.first().copied(), Some(-100.0));
        assert_eq!(bp.last().copied(), Some(100.0));
        assert!(bp.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let g = Arc::new(TensorGrid::single(
            AxisGrid::uniform(0.7, 1.0, 2, 10).unwrap(),
        ));
        let f = GridFunction::sample_real(g, |x| 1.0 - 3.0 * x[0] + x[0].powi(5));
        for &x in &[-0.99, -0.3, 0.0, 0.01, 0.5, 0.77, 1.0] {
            let v = f.eval(&[x]).re;
            assert!((v - (1.0 - 3.0 * x + x.powi(5))).abs() < 1e-12, "x = {x}");
        }
        assert_eq!(f.eval(&[1.5]).re, 0.0);
    }

    #[test]
    fn tensor_integral_and_interpolation() {
        let m = MultiplicityVector::new(vec![0.5, 0.0]).unwrap();
        let g = Arc::new(TensorGrid::uniform(&m, 1.0, 2, 8).unwrap());
        // ∫∫_{[-1,1]²} |x| dx dy = 2
        let f = GridFunction::sample_real(g.clone(), |_| 1.0);
        assert!((f.integral().re - 2.0).abs() < 1e-13);
        let h = GridFunction::sample_real(g, |p| p[0] * p[1] + p[1].powi(3));
        let v = h.eval(&[0.3, -0.6]).re;
        assert!((v - (0.3 * -0.6 + (-0.6f64).powi(3))).abs() < 1e-12);
    }

    #[test]
    fn refinement_doubles_nodes() {
        let g = AxisGrid::uniform(0.3, 1.0, 2, 8).unwrap();
        assert_eq!(g.refined().len(), 2 * g.len());
    }
}
