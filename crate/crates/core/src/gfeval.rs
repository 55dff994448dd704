//! The integral formulas for `z[Q(x,0)-Q(0,0)]`, `z[(y+1)Q(0,y)-Q(0,0)]`,
//! `Q(0,0)`, and the full `Q(x, y)` through the functional equation
//! `L·Q = zQ(x,0) + z(y+1)Q(0,y) - zQ(0,0) - xy`.
//!
//! The `x`-integral runs over `[x₁, x₂]` against `√((t-x₁)(x₂-t))`, handled
//! by second-kind Chebyshev nodes. The `y`-integrals run over `[0, y₂]` where
//! the bracket's `w̃(0)` term adds a `1/t` pole to `√(t(y₂-t))`, leaving the
//! weight `√((y₂-t)/t)` of fourth-kind Chebyshev nodes.

use crate::cgf::{CgfEvaluator, Which};
use crate::elliptic::EllipticContext;
use crate::kernel::{kernel_eval, kernel_scale, Side};
use crate::quad::{self, Rule};
use crate::{Error, Ext, Result, C64};
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

pub use crate::quad::QuadratureSpec;

/// Distance to `[x₁, x₂]` (or `[0, y₂]`) under which evaluation is refused.
const SEGMENT_GUARD: f64 = 1e-6;
/// `|L|` relative to its monomial scale under which `q_full` refuses to divide.
const KERNEL_GUARD: f64 = 1e-8;

/// A value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GfValue {
    pub value: C64,
    pub est_error: f64,
    pub nodes_used: usize,
}

impl GfValue {
    fn exact(value: C64) -> Self {
        GfValue { value, est_error: 0.0, nodes_used: 0 }
    }
}

/// Node data for one quadrature level: `factor[k]` multiplies the
/// argument-dependent part of the bracket at node `k`.
#[derive(Debug, Clone)]
struct NodeSet {
    w: Vec<f64>,
    factor: Vec<f64>,
    /// For `y`: `t / (w̃(t) - w̃(0))`, computed without cancellation.
    ratio: Vec<f64>,
}

/// Immutable evaluation context for one `z`: constants, both gluing
/// functions, their values at the special points, and lazily built nodes.
#[derive(Debug)]
pub struct GfContext {
    pub ctx: Arc<EllipticContext>,
    pub w: CgfEvaluator,
    pub wt: CgfEvaluator,
    pub spec: QuadratureSpec,
    /// `w(0)`.
    pub w_at_0: f64,
    /// `w̃(0)`, tracked.
    pub wt_at_0: f64,
    /// `w̃(-1)`.
    pub wt_at_m1: f64,
    x_levels: Vec<OnceLock<Result<NodeSet>>>,
    y_levels: Vec<OnceLock<Result<NodeSet>>>,
    q00: OnceLock<Result<GfValue>>,
}

impl GfContext {
    pub fn new(z: f64, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let ctx = Arc::new(EllipticContext::new(z)?);
        Self::from_context(ctx, spec)
    }

    pub fn from_context(ctx: Arc<EllipticContext>, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let w = CgfEvaluator::new(ctx.clone(), Which::W)?;
        let wt = CgfEvaluator::new(ctx.clone(), Which::WTilde)?;
        let zero = C64::new(0.0, 0.0);
        let w_at_0 = w.eval(zero)?.unwrap().re;
        let wt_at_0 = wt.eval(zero)?.unwrap().re;
        let wt_at_m1 = wt.eval(C64::new(-1.0, 0.0))?.unwrap().re;
        let levels = spec.max_doublings as usize + 1;
        Ok(GfContext {
            ctx,
            w,
            wt,
            spec,
            w_at_0,
            wt_at_0,
            wt_at_m1,
            x_levels: (0..levels).map(|_| OnceLock::new()).collect(),
            y_levels: (0..levels).map(|_| OnceLock::new()).collect(),
            q00: OnceLock::new(),
        })
    }

    pub fn z(&self) -> f64 {
        self.ctx.z()
    }

    fn level_index(&self, n: usize) -> usize {
        (n / self.spec.node_count).trailing_zeros() as usize
    }

    fn x_nodes(&self, n: usize) -> Result<&NodeSet> {
        let slot = &self.x_levels[self.level_index(n)];
        slot.get_or_init(|| self.build_x_nodes(n)).as_ref().map_err(Clone::clone)
    }

    fn y_nodes(&self, n: usize) -> Result<&NodeSet> {
        let slot = &self.y_levels[self.level_index(n)];
        slot.get_or_init(|| self.build_y_nodes(n)).as_ref().map_err(Clone::clone)
    }

    fn build_x_nodes(&self, n: usize) -> Result<NodeSet> {
        let [x1, x2, x3, x4] = self.ctx.geom.x;
        let (m, h) = ((x1 + x2) / 2.0, (x2 - x1) / 2.0);
        let mut set = NodeSet { w: Vec::with_capacity(n), factor: Vec::with_capacity(n), ratio: Vec::new() };
        for (s, weight) in quad::nodes(Rule::ChebyshevSecond, n) {
            let t = m + h * s;
            let w = self.w.eval_real_segment(t)?;
            let dw = self.w.derivative_at(C64::new(t, 0.0), C64::new(w, 0.0))?.re;
            set.w.push(w);
            set.factor.push(weight * ((x3 - t) * (x4 - t)).sqrt() / (2.0 * t) * dw * h * h / PI);
        }
        Ok(set)
    }

    fn build_y_nodes(&self, n: usize) -> Result<NodeSet> {
        let geom = &self.ctx.geom;
        let (y2, y3) = (geom.y2, geom.y3);
        let r = &self.wt.rational;
        let cubic = &self.wt.cubic;
        let s0 = self.wt_at_0;
        let k = cubic.K;
        let mut set = NodeSet { w: Vec::with_capacity(n), factor: Vec::with_capacity(n), ratio: Vec::with_capacity(n) };
        for (s, weight) in quad::nodes(Rule::ChebyshevFourth, n) {
            let t = y2 / 2.0 * (1.0 + s);
            let w = self.wt.eval_real_segment(t)?;
            let dw = self.wt.derivative_at(C64::new(t, 0.0), C64::new(w, 0.0))?.re;
            // w̃ - S = (F̃ - c₀)(w̃-K)² / Q(w̃, S) with F̃ - c₀ = C t(t+1)²/E²,
            // Q(a,b) = a² + ab + b² - 2K(a+b) + K²/3 + G₂/2 - c₀(a+b-2K).
            let e = (t - r.x2) * (t - r.x3);
            let q = w * w + w * s0 + s0 * s0 - 2.0 * k * (w + s0) + k * k / 3.0 + cubic.G2 / 2.0
                - r.c0 * (w + s0 - 2.0 * k);
            let ratio = q * e * e / (r.scale * (t + 1.0).powi(2) * (w - k).powi(2));
            set.w.push(w);
            set.ratio.push(ratio);
            set.factor.push(weight * (y3 - t).sqrt() / (t + 1.0) * dw * (y2 / 2.0) / PI);
        }
        Ok(set)
    }

    /// `(1/π)∫_{x₁}^{x₂} t√(-d)/(2a) [∂w/(w-w(x)) - ∂w/(w-w(0))] dt` on `n` nodes.
    fn x_integral(&self, wx: C64, n: usize) -> Result<C64> {
        let set = self.x_nodes(n)?;
        let w0 = self.w_at_0;
        let mut acc = C64::new(0.0, 0.0);
        for (&w, &f) in set.w.iter().zip(&set.factor) {
            acc += f * (wx - w0) / ((w - wx) * (w - w0));
        }
        Ok(acc)
    }

    /// `(1/π)∫_0^{y₂} t√(-d̃)/(2ã) [∂w̃/(w̃-wy) - ∂w̃/(w̃-w̃(0))] dt` on `n` nodes.
    fn y_integral(&self, wy: C64, n: usize) -> Result<C64> {
        let set = self.y_nodes(n)?;
        let s0 = self.wt_at_0;
        let mut acc = C64::new(0.0, 0.0);
        for ((&w, &f), &r) in set.w.iter().zip(&set.factor).zip(&set.ratio) {
            acc += f * r * (wy - s0) / (w - wy);
        }
        Ok(acc)
    }

    fn integrate(&self, eval: impl Fn(usize) -> Result<C64>) -> Result<GfValue> {
        let est = quad::integrate(&self.spec, eval)?;
        Ok(GfValue { value: est.value, est_error: est.est_error, nodes_used: est.nodes_used })
    }

    /// `z[Q(x,0,z) - Q(0,0,z)]` for `x ∉ [x₃, x₄]`.
    pub fn q_x_shifted(&self, x: C64) -> Result<GfValue> {
        let [x1, x2, x3, x4] = self.ctx.geom.x;
        if x.im.abs() < 1e-12 && x.re >= x3 && x.re <= x4 {
            return Err(Error::Argument(format!("x = {x} lies on the cut [{x3}, {x4}]")));
        }
        if segment_distance(x, x1, x2) < SEGMENT_GUARD {
            return Err(Error::Argument(format!("x = {x} is within {SEGMENT_GUARD:e} of [{x1}, {x2}]")));
        }
        if x.norm() == 0.0 {
            return Ok(GfValue::exact(x));
        }
        let y0 = self.ctx.geom.y_branches(x).0.unwrap();
        let wx = self.w.eval(x)?.finite().ok_or_else(|| Error::Argument(format!("w has a pole at {x}")))?;
        let integral = self.integrate(|n| self.x_integral(wx, n))?;
        Ok(GfValue { value: x * y0 + integral.value, ..integral })
    }

    /// `z[(y+1)Q(0,y,z) - Q(0,0,z)]` for `y ∉ [y₃, ∞[`.
    pub fn q_y_shifted(&self, y: C64) -> Result<GfValue> {
        let y3 = self.ctx.geom.y3;
        if y.im.abs() < 1e-12 && y.re >= y3 {
            return Err(Error::Argument(format!("y = {y} lies on the cut [{y3}, ∞[")));
        }
        if y.norm() == 0.0 {
            return Ok(GfValue::exact(y));
        }
        if segment_distance(y, 0.0, self.ctx.geom.y2) < SEGMENT_GUARD {
            return Err(Error::Argument(format!("y = {y} is within {SEGMENT_GUARD:e} of [0, {}]", self.ctx.geom.y2)));
        }
        let x0 = self.ctx.geom.x_branches(y).0.unwrap();
        let wy = self.wt.eval(y)?.finite().ok_or_else(|| Error::Argument(format!("w̃ has a pole at {y}")))?;
        let integral = self.integrate(|n| self.y_integral(wy, n))?;
        Ok(GfValue { value: x0 * y + integral.value, ..integral })
    }

    /// `Q(0,0,z) = -(1/(πz))∫_0^{y₂} t√(-d̃)/(2ã) [∂w̃/(w̃-w̃(-1)) - ∂w̃/(w̃-w̃(0))] dt`.
    pub fn q_00(&self) -> Result<GfValue> {
        self.q00
            .get_or_init(|| {
                let z = self.z();
                let wm1 = C64::new(self.wt_at_m1, 0.0);
                let v = self.integrate(|n| self.y_integral(wm1, n))?;
                Ok(GfValue { value: -v.value / z, est_error: v.est_error / z, nodes_used: v.nodes_used })
            })
            .clone()
    }

    /// `Q(x, y, z)` for `|x|, |y| ≤ 1` away from the kernel's zero set.
    pub fn q_full(&self, x: C64, y: C64) -> Result<GfValue> {
        let q00 = self.q_00()?;
        if x.norm() == 0.0 && y.norm() == 0.0 {
            return Ok(q00);
        }
        if x.norm() > 1.0 + 1e-12 || y.norm() > 1.0 + 1e-12 {
            return Err(Error::Argument(format!("(x, y) = ({x}, {y}) is outside the closed unit bidisc")));
        }
        let z = self.z();
        let l = kernel_eval(x, y, z);
        if l.norm() <= KERNEL_GUARD * kernel_scale(x, y, z) {
            return Err(Error::KernelZero { x, y });
        }
        let qx = self.q_x_shifted(x)?;
        let qy = self.q_y_shifted(y)?;
        let num = qx.value + qy.value + z * q00.value - x * y;
        Ok(GfValue {
            value: num / l,
            est_error: (qx.est_error + qy.est_error + z * q00.est_error) / l.norm(),
            nodes_used: qx.nodes_used.max(qy.nodes_used).max(q00.nodes_used),
        })
    }

    /// `|zQ(X₀(y),0) + z(y+1)Q(0,y) - zQ(0,0) - X₀(y)y|` for `y` off both cuts.
    pub fn continuation_residual_y(&self, y: C64) -> Result<f64> {
        let x0 = self.ctx.geom.x_branches(y).0;
        let x0 = x0.finite().ok_or_else(|| Error::Argument(format!("X₀({y}) is infinite")))?;
        let qx = self.q_x_shifted(x0)?;
        let qy = self.q_y_shifted(y)?;
        let zq = self.z() * self.q_00()?.value;
        Ok((qx.value + qy.value + zq - x0 * y).norm())
    }

    /// `|zQ(x,0) + z(Y₀(x)+1)Q(0,Y₀(x)) - zQ(0,0) - xY₀(x)|` for `x` off both cuts.
    pub fn continuation_residual_x(&self, x: C64) -> Result<f64> {
        let y0 = self.ctx.geom.y_branches(x).0;
        let y0 = y0.finite().ok_or_else(|| Error::Argument(format!("Y₀({x}) is infinite")))?;
        let qx = self.q_x_shifted(x)?;
        let qy = self.q_y_shifted(y0)?;
        let zq = self.z() * self.q_00()?.value;
        Ok((qx.value + qy.value + zq - x * y0).norm())
    }

    /// Boundary condition on the X-curve at `t = X₀⁺(y)`, `y ∈ ]0, y₂[`:
    /// `|z[Q(t,0) - Q(t̄,0)] - [tY₀(t) - t̄Y₀(t̄)]|`.
    pub fn boundary_residual(&self, y: f64) -> Result<f64> {
        let t = self.ctx.geom.cut_values_x(y, Side::Upper)?;
        let t = t.finite().ok_or_else(|| Error::Argument("X₀⁺(0) is infinite".into()))?;
        let tb = t.conj();
        let lhs = self.q_x_shifted(t)?.value - self.q_x_shifted(tb)?.value;
        let y_t = self.ctx.geom.y_branches(t).0.unwrap();
        let y_tb = self.ctx.geom.y_branches(tb).0.unwrap();
        Ok((lhs - (t * y_t - tb * y_tb)).norm())
    }

    /// The functional equation at the kernel zero `(0, -1)`:
    /// `|zQ(0,0) + z[Q(0,0)-Q(0,0)] + z[0·Q(0,-1) - Q(0,0)] + 0|`.
    pub fn kernel_point_residual(&self) -> Result<f64> {
        let zq = self.z() * self.q_00()?.value;
        let qx = self.q_x_shifted(C64::new(0.0, 0.0))?.value;
        let qy = self.q_y_shifted(C64::new(-1.0, 0.0))?.value;
        Ok((zq + qx + qy).norm())
    }

    /// `w` at the cut values `X₀^±(y)`: `|w(X₀⁺(y)) - w(X₀⁻(y))|`.
    pub fn gluing_residual(&self, y: f64) -> Result<f64> {
        let geom = &self.ctx.geom;
        let up = geom.cut_values_x(y, Side::Upper)?;
        let lo = geom.cut_values_x(y, Side::Lower)?;
        match (up, lo) {
            (Ext::Finite(a), Ext::Finite(b)) => {
                let wa = self.w.eval(a)?;
                let wb = self.w.eval(b)?;
                match (wa, wb) {
                    (Ext::Finite(a), Ext::Finite(b)) => Ok((a - b).norm()),
                    _ => Err(Error::Argument(format!("w has a pole on the X-curve at y = {y}"))),
                }
            }
            _ => Ok(0.0),
        }
    }
}

/// Distance from `p` to the real segment `[lo, hi]`.
pub fn segment_distance(p: C64, lo: f64, hi: f64) -> f64 {
    let re = p.re.clamp(lo, hi);
    (p - re).norm()
}
