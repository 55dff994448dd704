//! Gauss-type quadrature rules on `[-1, 1]` and a node-doubling driver.
//!
//! Each rule integrates `g(s)` against a fixed weight:
//! - [`Rule::ChebyshevFirst`] with weight `1/√(1-s²)`
//! - [`Rule::ChebyshevSecond`] with weight `√(1-s²)`
//! - [`Rule::ChebyshevFourth`] with weight `√((1-s)/(1+s))`
//! - [`Rule::Legendre`] with weight `1`

use crate::{Error, Result, C64};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    ChebyshevFirst,
    ChebyshevSecond,
    ChebyshevFourth,
    Legendre,
}

/// Nodes and weights of an `n`-point rule.
pub fn nodes(rule: Rule, n: usize) -> Vec<(f64, f64)> {
    match rule {
        Rule::ChebyshevFirst => {
            (1..=n).map(|k| (((2 * k - 1) as f64 * PI / (2 * n) as f64).cos(), PI / n as f64)).collect()
        }
        Rule::ChebyshevSecond => (1..=n)
            .map(|k| {
                let th = k as f64 * PI / (n + 1) as f64;
                (th.cos(), PI / (n + 1) as f64 * th.sin().powi(2))
            })
            .collect(),
        Rule::ChebyshevFourth => (1..=n)
            .map(|k| {
                let th = 2.0 * k as f64 * PI / (2 * n + 1) as f64;
                (th.cos(), 4.0 * PI / (2 * n + 1) as f64 * (th / 2.0).sin().powi(2))
            })
            .collect(),
        Rule::Legendre => legendre(n),
    }
}

fn legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Node budget and stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub node_count: usize,
    pub max_doublings: u32,
    pub target_rel_err: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { node_count: 64, max_doublings: 6, target_rel_err: 1e-12 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 8 {
            return Err(Error::Argument(format!("node_count {} is below 8", self.node_count)));
        }
        if !(self.target_rel_err > 0.0) {
            return Err(Error::Argument("target_rel_err must be positive".into()));
        }
        Ok(())
    }

    /// Node counts visited by the doubling driver, in order.
    pub fn levels(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.max_doublings).map(move |j| self.node_count << j)
    }
}

/// A converged integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: C64,
    pub est_error: f64,
    pub nodes_used: usize,
    /// Successive-difference ratio of the last three levels, when available.
    pub contraction: Option<f64>,
}

/// Repeats `eval(n)` on the node counts of `spec`, doubling until two
/// successive values agree to `target_rel_err` relative to `max(1, |I|)`.
pub fn integrate<F>(spec: &QuadratureSpec, mut eval: F) -> Result<Estimate>
where
    F: FnMut(usize) -> Result<C64>,
{
    spec.validate()?;
    let mut prev: Option<C64> = None;
    let mut prev_diff: Option<f64> = None;
    let mut last_diff = f64::INFINITY;
    let mut last = C64::new(0.0, 0.0);
    for n in spec.levels() {
        let v = eval(n)?;
        if let Some(p) = prev {
            let diff = (v - p).norm();
            let contraction = prev_diff.map(|d| if d > 0.0 { diff / d } else { 0.0 });
            if diff <= spec.target_rel_err * v.norm().max(1.0) {
                return Ok(Estimate { value: v, est_error: diff, nodes_used: n, contraction });
            }
            prev_diff = Some(diff);
            last_diff = diff;
            last = p;
        }
        prev = Some(v);
    }
    Err(Error::Quadrature { last: prev.unwrap_or(last), previous: last, residual: last_diff })
}
