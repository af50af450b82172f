//! Gauss-Legendre rules and the composite meshes built from them.
//!
//! Every rule remembers, for each node, its distance to both ends of the
//! domain. Kernels with endpoint singularities such as `(1-x)^{-α}` read
//! those gaps instead of recomputing `1 - x` in floating point.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(hi > lo);
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

/// A single quadrature node with its weight and endpoint gaps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: f64,
    pub w: f64,
    /// `x - lo`
    pub from_lo: f64,
    /// `hi - x`
    pub to_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<Node>,
    domain: Interval,
}

impl QuadratureRule {
    fn from_gaps(domain: Interval, mut nodes: Vec<Node>) -> Self {
        nodes.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
        QuadratureRule { nodes, domain }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Node {
        self.nodes[i]
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(|n| n.x)
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(|n| n.w)
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().map(|n| n.w * f(n.x)).sum()
    }

    pub fn integrate_nodes<T, F>(&self, mut f: F) -> T
    where
        T: core::iter::Sum<T> + core::ops::Mul<f64, Output = T>,
        F: FnMut(&Node) -> T,
    {
        self.nodes.iter().map(|n| f(n) * n.w).sum()
    }

    /// Affine image on `target`.
    pub fn mapped(&self, target: Interval) -> Self {
        let s = target.len() / self.domain.len();
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                x: target.lo + s * n.from_lo,
                w: n.w * s,
                from_lo: s * n.from_lo,
                to_hi: s * n.to_hi,
            })
            .collect();
        QuadratureRule { nodes, domain: target }
    }

    /// Union of rules on adjacent domains, `self` to the left of `right`.
    pub fn concat(&self, right: &QuadratureRule) -> Self {
        let domain = Interval::new(self.domain.lo, right.domain.hi);
        let to_right = right.domain.len();
        let from_left = self.domain.len();
        let mut nodes: Vec<Node> = self
            .nodes
            .iter()
            .map(|n| Node { to_hi: n.to_hi + to_right, ..*n })
            .collect();
        nodes.extend(right.nodes.iter().map(|n| Node { from_lo: n.from_lo + from_left, ..*n }));
        QuadratureRule { nodes, domain }
    }
}

/// Gauss-Legendre nodes `t` and weights on `[-1, 1]`, nodes ascending.
/// Also returns `1 - |t|` computed without cancellation for the outer nodes.
fn reference_gauss(m: usize) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(m);
    let half = m.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess, then Newton on P_m.
        let k = (i + 1) as f64;
        let mf = m as f64;
        let mut t = (PI * (k - 0.25) / (mf + 0.5)).cos()
            * (1.0 - (mf - 1.0) / (8.0 * mf * mf * mf));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, t);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        // 1 - t = 2 sin²(θ/2) where t = cos θ
        let theta = t.acos();
        let gap = 2.0 * (0.5 * theta).sin().powi(2);
        out.push((t, w, gap));
    }
    let mut full = Vec::with_capacity(m);
    for &(t, w, g) in out.iter() {
        if t.abs() < 1e-15 && m % 2 == 1 {
            full.push((0.0, w, 1.0));
        } else {
            full.push((t, w, g));
            full.push((-t, w, g));
        }
    }
    full.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    full
}

fn legendre(m: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Panel nodes on `[0, len]` as (gap from left, gap from right, weight).
fn panel(m: usize, len: f64) -> Vec<(f64, f64, f64)> {
    reference_gauss(m)
        .into_iter()
        .map(|(t, w, g)| {
            let half = 0.5 * len;
            if t < 0.0 {
                (half * g, len - half * g, w * half)
            } else if t > 0.0 {
                (len - half * g, half * g, w * half)
            } else {
                (half, half, w * half)
            }
        })
        .collect()
}

/// m-point Gauss-Legendre rule on `interval`.
pub fn gauss_legendre(m: usize, interval: Interval) -> QuadratureRule {
    assert!(m >= 1, "gauss_legendre needs at least one node");
    let nodes = panel(m, interval.len())
        .into_iter()
        .map(|(a, b, w)| Node { x: interval.lo + a, w, from_lo: a, to_hi: b })
        .collect();
    QuadratureRule::from_gaps(interval, nodes)
}

/// `panels` equal Gauss panels of order `m` on `interval`.
pub fn composite_gauss(m: usize, panels: usize, interval: Interval) -> QuadratureRule {
    let width = interval.len() / panels as f64;
    let mut nodes = Vec::with_capacity(m * panels);
    let base = panel(m, width);
    for p in 0..panels {
        let left = p as f64 * width;
        let right = (panels - 1 - p) as f64 * width;
        for &(a, b, w) in base.iter() {
            nodes.push(Node { x: interval.lo + left + a, w, from_lo: left + a, to_hi: right + b });
        }
    }
    QuadratureRule::from_gaps(interval, nodes)
}

/// Composite Gauss on `[0, end]` with panel widths `first, first·growth, ...`;
/// the last panel is clipped to `end`.
pub fn geometric_panels(m: usize, first: f64, growth: f64, end: f64) -> QuadratureRule {
    let mut edges = alloc::vec![0.0];
    let mut w = first;
    while *edges.last().unwrap() < end {
        let next = (edges.last().unwrap() + w).min(end);
        edges.push(next);
        w *= growth;
    }
    let mut nodes = Vec::new();
    for k in 0..edges.len() - 1 {
        let (a0, a1) = (edges[k], edges[k + 1]);
        for (a, b, wt) in panel(m, a1 - a0) {
            nodes.push(Node { x: a0 + a, w: wt, from_lo: a0 + a, to_hi: end - a1 + b });
        }
    }
    QuadratureRule::from_gaps(Interval::new(0.0, end), nodes)
}

/// Gaps from the graded endpoint and weights for a mesh on `[0, len]`
/// with panels `[len q^{k+1}, len q^k]`, `k < levels`, and a closing panel
/// `[0, len q^levels]` under the substitution `x = len q^levels t²`.
///
/// The quadratic closing panel turns `x^{s}` into `t^{2s+1}`, so the common
/// `x^{-1/2}` endpoint behavior is integrated exactly.
fn graded_gaps(len: f64, levels: usize, m: usize, q: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity((levels + 1) * m);
    let base = reference_gauss(m);
    for k in 0..levels {
        let a = len * q.powi(k as i32 + 1);
        let b = len * q.powi(k as i32);
        let half = 0.5 * (b - a);
        for &(t, w, g) in base.iter() {
            let x = if t <= 0.0 { a + half * g } else { b - half * g };
            out.push((x, w * half));
        }
    }
    let c = len * q.powi(levels as i32);
    for &(t, w, _) in base.iter() {
        let s = 0.5 * (t + 1.0);
        out.push((c * s * s, c * s * w));
    }
    out
}

/// Composite Gauss rule on `[0, 1]` graded geometrically toward 0.
///
/// Panels `[ratio^{k+1}, ratio^k]` for `k < levels`, each with
/// `base_rule_order` nodes, plus a closing panel on `[0, ratio^levels]`.
pub fn graded_mesh(levels: usize, base_rule_order: usize, grading_ratio: f64) -> QuadratureRule {
    assert!(levels >= 1 && base_rule_order >= 1);
    assert!(grading_ratio > 0.0 && grading_ratio < 1.0);
    let nodes = graded_gaps(1.0, levels, base_rule_order, grading_ratio)
        .into_iter()
        .map(|(x, w)| Node { x, w, from_lo: x, to_hi: 1.0 - x })
        .collect();
    QuadratureRule::from_gaps(Interval::UNIT, nodes)
}

/// Rule on `[0, 1]` graded toward both ends, split at 1/2.
pub fn graded_two_sided(levels_lo: usize, levels_hi: usize, m: usize, ratio: f64) -> QuadratureRule {
    let mut nodes = Vec::new();
    for (x, w) in graded_gaps(0.5, levels_lo, m, ratio) {
        nodes.push(Node { x, w, from_lo: x, to_hi: 1.0 - x });
    }
    for (g, w) in graded_gaps(0.5, levels_hi, m, ratio) {
        nodes.push(Node { x: 1.0 - g, w, from_lo: 1.0 - g, to_hi: g });
    }
    QuadratureRule::from_gaps(Interval::UNIT, nodes)
}

/// Rule on `[lo, hi]` graded toward both ends, keeping exact endpoint gaps.
pub fn graded_two_sided_on(interval: Interval, levels: usize, m: usize, ratio: f64) -> QuadratureRule {
    let half = 0.5 * interval.len();
    let mut nodes = Vec::new();
    for (g, w) in graded_gaps(half, levels, m, ratio) {
        nodes.push(Node { x: interval.lo + g, w, from_lo: g, to_hi: interval.len() - g });
    }
    for (g, w) in graded_gaps(half, levels, m, ratio) {
        nodes.push(Node { x: interval.hi - g, w, from_lo: interval.len() - g, to_hi: g });
    }
    QuadratureRule::from_gaps(interval, nodes)
}

/// Rule on `(0, 1)` from the substitution `x = e^{-s}`, `s ∈ (0, s_max]`.
///
/// The `s` variable carries a mesh graded toward `s = 0` (the `x = 1` end)
/// followed by unit panels, so singularities at both ends are resolved.
pub fn exponential_rule(s_max: f64, levels: usize, m: usize) -> QuadratureRule {
    let mut nodes = Vec::new();
    let head = graded_gaps(1.0, levels, m, 0.25);
    let tail = composite_gauss(m, (s_max - 1.0).ceil().max(1.0) as usize, Interval::new(1.0, s_max.max(2.0)));
    let mut push = |s: f64, ws: f64| {
        let x = (-s).exp();
        // 1 - e^{-s} without cancellation
        let gap = -(-s).exp_m1();
        nodes.push(Node { x, w: ws * x, from_lo: x, to_hi: gap });
    };
    for (s, w) in head {
        push(s, w);
    }
    for n in tail.nodes() {
        push(n.x, n.w);
    }
    QuadratureRule::from_gaps(Interval::UNIT, nodes)
}
