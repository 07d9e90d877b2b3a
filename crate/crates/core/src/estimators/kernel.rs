//! Gaussian kernel sums.

use crate::special::normal_pdf;

/// Beyond this many smoothing scales a term is below `e^-40` of the peak and is skipped.
pub(crate) const CUTOFF: f64 = 9.0;

/// `K((x)/c)/c` with `K` the centred Gaussian density of standard deviation `scale`.
pub fn gaussian_kernel(x: f64, scale: f64, bandwidth: f64) -> f64 {
    let h = scale * bandwidth;
    normal_pdf(x / h) / h
}

/// Plain kernel density estimate `(1/(n c)) Σ K((t − x_i)/c)`, no pruning.
pub fn kernel_density_estimate(sample: &[f64], t: f64, scale: f64, bandwidth: f64) -> f64 {
    sample
        .iter()
        .map(|&x| gaussian_kernel(t - x, scale, bandwidth))
        .sum::<f64>()
        / sample.len() as f64
}

/// Indices `lo..hi` of a sorted slice whose keys are within `radius` of `x`.
pub(crate) fn window<T>(sorted: &[T], key: impl Fn(&T) -> f64, x: f64, radius: f64) -> (usize, usize) {
    let lo = sorted.partition_point(|v| key(v) < x - radius);
    let hi = sorted.partition_point(|v| key(v) <= x + radius);
    (lo, hi.max(lo))
}

/// A weighted Gaussian mixture `factor · Σ w_i φ((t − c_i)/h)/h` with its
/// trapezoidal cumulative integral tabulated from 0 on a fixed step.
#[derive(Debug, Clone)]
pub(crate) struct MixtureCurve {
    /// (center, weight), sorted by center.
    terms: Vec<(f64, f64)>,
    factor: f64,
    h: f64,
    step: f64,
    /// Density at the nodes `k · step`.
    nodes: Vec<f64>,
    /// Integral over `[0, k · step]`.
    cumulative: Vec<f64>,
}

impl MixtureCurve {
    pub(crate) fn new(mut terms: Vec<(f64, f64)>, factor: f64, h: f64, step: f64) -> Self {
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut c = MixtureCurve {
            terms,
            factor,
            h,
            step,
            nodes: Vec::new(),
            cumulative: Vec::new(),
        };
        let f0 = c.density(0.0);
        c.nodes.push(f0);
        c.cumulative.push(0.0);
        c
    }

    pub(crate) fn density(&self, t: f64) -> f64 {
        let (lo, hi) = window(&self.terms, |v| v.0, t, CUTOFF * self.h);
        let s: f64 = self.terms[lo..hi]
            .iter()
            .map(|&(c, w)| w * normal_pdf((t - c) / self.h))
            .sum();
        self.factor * s / self.h
    }

    fn node_time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    /// Extends the tables so that node `k` exists.
    pub(crate) fn extend_to_node(&mut self, k: usize) {
        while self.nodes.len() <= k {
            let j = self.nodes.len();
            let f = self.density(self.node_time(j));
            let prev = *self.nodes.last().unwrap();
            let area = 0.5 * self.step * (prev + f);
            let c = *self.cumulative.last().unwrap() + area;
            self.nodes.push(f);
            self.cumulative.push(c);
        }
    }

    pub(crate) fn extend_to(&mut self, t: f64) {
        let k = (t / self.step).ceil().max(0.0) as usize;
        self.extend_to_node(k);
    }

    fn exact_node(&self, t: f64) -> Option<usize> {
        let k = (t / self.step).round();
        (k >= 0.0 && (k as usize) < self.nodes.len() && self.node_time(k as usize) == t)
            .then_some(k as usize)
    }

    /// Density, served from the node table when `t` is a node.
    pub(crate) fn density_at(&self, t: f64) -> f64 {
        match self.exact_node(t) {
            Some(k) => self.nodes[k],
            None => self.density(t),
        }
    }

    /// Trapezoidal integral over `[0, t]` on the nodes `0, step, …, ⌊t/step⌋·step, t`.
    /// The tables must already reach past `t`.
    pub(crate) fn integral_to(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if let Some(k) = self.exact_node(t) {
            return self.cumulative[k];
        }
        let k = ((t / self.step).floor() as usize).min(self.nodes.len() - 1);
        let tk = self.node_time(k);
        self.cumulative[k] + 0.5 * (t - tk) * (self.nodes[k] + self.density(t))
    }

    pub(crate) fn covers(&self, t: f64) -> bool {
        self.node_time(self.nodes.len() - 1) >= t
    }
}
