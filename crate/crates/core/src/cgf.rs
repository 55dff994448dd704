//! Conformal gluing functions `w` (pole at `x₂`) and `w̃` (pole at `x₃`).
//!
//! Both are roots of the cubic
//! `P(w, F) = w³ - w²(F+2K) + w(2KF + K²/3 + G₂/2) - (K²F + 19G₂K/18 + G₃ - 46K³/27)`
//! with `F = F(t)` for `w` and `F = F̃(t)` for `w̃`. The cubic is affine in
//! `F`: `P(w, F) = P₀(w) - F(w-K)²`. The branch is fixed by continuation from
//! an anchor next to the pole, where the wanted root is the largest.
//!
//! Independently, `w(t) = ℘₁,₃(x⁻¹(t) - (ω₁+ω₂)/2)` and `w̃(t) = w(X₀(t))`.

use crate::elliptic::EllipticContext;
use crate::poly::{companion_roots, complex_companion_roots, cubic_roots};
use crate::{Error, Ext, Result, C64};
use std::sync::Arc;

/// Which gluing function an evaluator computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// `w`, built from `F`.
    W,
    /// `w̃`, built from `F̃`.
    WTilde,
}

/// The rational functions `F` and `F̃` with their derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GluingRational {
    /// `(1 - 24z + 16z²)/3`.
    pub c0: f64,
    /// `4(1-4z)²/z`.
    pub scale: f64,
    pub x2: f64,
    pub x3: f64,
}

impl GluingRational {
    pub fn new(z: f64, x2: f64, x3: f64) -> Self {
        GluingRational { c0: (1.0 - 24.0 * z + 16.0 * z * z) / 3.0, scale: 4.0 * (1.0 - 4.0 * z).powi(2) / z, x2, x3 }
    }

    /// `F(t) = c₀ - C t² / ((t-x₂)(t-1)²(t-x₃))`.
    pub fn f(&self, t: C64) -> Ext {
        let den = (t - self.x2) * (t - 1.0) * (t - 1.0) * (t - self.x3);
        if den.norm() == 0.0 {
            return Ext::Infinity;
        }
        Ext::Finite(self.c0 - self.scale * t * t / den)
    }

    /// `F'(t)`, from the explicit quotient rule.
    pub fn f_prime(&self, t: C64) -> Ext {
        let p = t - self.x2;
        let q = (t - 1.0) * (t - 1.0);
        let r = t - self.x3;
        let den = p * q * r;
        if den.norm() == 0.0 {
            return Ext::Infinity;
        }
        let dden = q * r + p * 2.0 * (t - 1.0) * r + p * q;
        Ext::Finite(-self.scale * (2.0 * t * den - t * t * dden) / (den * den))
    }

    /// `F̃(t) = c₀ + C t(t+1)² / ((t-x₂)(t-x₃))²`.
    pub fn f_tilde(&self, t: C64) -> Ext {
        let e = (t - self.x2) * (t - self.x3);
        if e.norm() == 0.0 {
            return Ext::Infinity;
        }
        Ext::Finite(self.c0 + self.scale * t * (t + 1.0) * (t + 1.0) / (e * e))
    }

    /// `F̃'(t)`.
    pub fn f_tilde_prime(&self, t: C64) -> Ext {
        let e = (t - self.x2) * (t - self.x3);
        if e.norm() == 0.0 {
            return Ext::Infinity;
        }
        let n = t * (t + 1.0) * (t + 1.0);
        let dn = (t + 1.0) * (t + 1.0) + 2.0 * t * (t + 1.0);
        let de = (t - self.x3) + (t - self.x2);
        Ext::Finite(self.scale * (dn * e - 2.0 * n * de) / (e * e * e))
    }

    pub fn value(&self, which: Which, t: C64) -> Ext {
        match which {
            Which::W => self.f(t),
            Which::WTilde => self.f_tilde(t),
        }
    }

    /// All finite `t` with `F(t) = v` (or `F̃(t) = v`), from the quartic
    /// obtained by clearing denominators.
    pub fn preimages(&self, which: Which, v: C64) -> Vec<C64> {
        let one = C64::new(1.0, 0.0);
        let lin = |r: f64| vec![one, C64::new(-r, 0.0)];
        let (den, num) = match which {
            Which::W => (
                poly_mul(&poly_mul(&lin(self.x2), &lin(self.x3)), &poly_mul(&lin(1.0), &lin(1.0))),
                vec![one, C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
            ),
            Which::WTilde => {
                let e = poly_mul(&lin(self.x2), &lin(self.x3));
                (poly_mul(&e, &e), poly_mul(&lin(0.0), &poly_mul(&lin(-1.0), &lin(-1.0))))
            }
        };
        // W: (c₀ - v)·den - C·t² = 0;  W̃: (v - c₀)·den - C·t(t+1)² = 0
        let lead = match which {
            Which::W => self.c0 - v,
            Which::WTilde => v - self.c0,
        };
        let mut coeffs: Vec<C64> = den.iter().map(|c| c * lead).collect();
        let off = coeffs.len() - num.len();
        for (k, c) in num.iter().enumerate() {
            coeffs[off + k] -= c * self.scale;
        }
        complex_companion_roots(&coeffs)
    }

    pub fn derivative(&self, which: Which, t: C64) -> Ext {
        match which {
            Which::W => self.f_prime(t),
            Which::WTilde => self.f_tilde_prime(t),
        }
    }
}

/// The cubic `P(w, F)` for fixed `K, G₂, G₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_snake_case)]
pub struct GluingCubic {
    pub K: f64,
    pub G2: f64,
    pub G3: f64,
}

impl GluingCubic {
    fn tail(&self) -> f64 {
        19.0 * self.G2 * self.K / 18.0 + self.G3 - 46.0 * self.K.powi(3) / 27.0
    }

    fn linear(&self) -> f64 {
        self.K * self.K / 3.0 + self.G2 / 2.0
    }

    /// Monic coefficients `(c₂, c₁, c₀)` of `w³ + c₂w² + c₁w + c₀`.
    pub fn coefficients(&self, f: C64) -> (C64, C64, C64) {
        let k = self.K;
        (-(f + 2.0 * k), 2.0 * k * f + self.linear(), -(k * k * f + self.tail()))
    }

    /// `P₀(w) = P(w, 0)`.
    pub fn p0(&self, w: C64) -> C64 {
        ((w - 2.0 * self.K) * w + self.linear()) * w - self.tail()
    }

    /// `P(w, F)` in the affine form `P₀(w) - F(w-K)²`; at `F = ∞` the
    /// leading part `(w-K)²` is returned.
    pub fn value(&self, w: C64, f: Ext) -> C64 {
        let d = w - self.K;
        match f {
            Ext::Finite(f) => self.p0(w) - f * d * d,
            Ext::Infinity => d * d,
        }
    }

    /// `|P(w, F)|`.
    pub fn residual(&self, w: C64, f: Ext) -> f64 {
        self.value(w, f).norm()
    }

    /// `∂P/∂w`.
    pub fn dw(&self, w: C64, f: C64) -> C64 {
        3.0 * w * w - 2.0 * w * (f + 2.0 * self.K) + (2.0 * self.K * f + self.linear())
    }

    /// The values of `F` at which two roots of the cubic collide: a double
    /// root `w` solves `2P₀(w) = P₀'(w)(w-K)`, and then `F = P₀(w)/(w-K)²`.
    pub fn critical_values(&self) -> Vec<C64> {
        let k = self.K;
        let l = self.linear();
        let coeffs = [-1.0, 3.0 * k, l - 4.0 * k * k, l * k - 2.0 * self.tail()];
        companion_roots(&coeffs)
            .into_iter()
            .filter(|w| (w - k).norm() > 1e-12)
            .map(|w| self.p0(w) / ((w - k) * (w - k)))
            .collect()
    }

    /// The three roots at finite `F`.
    ///
    /// Solved in `u = w - K`, where `F` enters a single coefficient:
    /// `u³ + (K - F)u² + P₀'(K)u + P₀(K)`. The largest root is polished
    /// first and the other two come from the deflated quadratic, which keeps
    /// the pair near `K` accurate when `|F|` is large.
    pub fn roots(&self, f: C64) -> [C64; 3] {
        let k = C64::new(self.K, 0.0);
        let p0 = self.p0(k);
        let p1 = 3.0 * k * k - 4.0 * k * k + self.linear();
        let a = k - f;
        let g = |u: C64| ((u + a) * u + p1) * u + p0;
        let dg = |u: C64| (3.0 * u + 2.0 * a) * u + p1;
        let polish = |mut u: C64| {
            let mut val = g(u);
            for _ in 0..6 {
                let d = dg(u);
                if d.norm() == 0.0 || val.norm() == 0.0 {
                    break;
                }
                let cand = u - val / d;
                let cv = g(cand);
                if cv.norm() < val.norm() {
                    u = cand;
                    val = cv;
                } else {
                    break;
                }
            }
            u
        };
        let seeds = cubic_roots(a, p1, p0);
        let big = seeds.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
        let big = polish(big);
        if big.norm() == 0.0 {
            return seeds.map(|u| u + k);
        }
        let prod = -p0 / big;
        let sum = (p1 - prod) / big;
        let (u1, u2) = crate::poly::quadratic_roots(C64::new(1.0, 0.0), -sum, prod);
        [big + k, polish(u1) + k, polish(u2) + k]
    }

    /// The double root `D` and simple root `S` at `F = c₀`, where the cubic
    /// degenerates; `D` is the root of `∂P/∂w` that also solves `P`.
    pub fn degenerate_roots(&self, c0: f64) -> (f64, f64) {
        let f = C64::new(c0, 0.0);
        let (r1, r2) = crate::poly::quadratic_roots(
            C64::new(3.0, 0.0),
            -2.0 * (f + 2.0 * self.K),
            2.0 * self.K * f + self.linear(),
        );
        let d = if self.residual(r1, Ext::Finite(f)) <= self.residual(r2, Ext::Finite(f)) { r1.re } else { r2.re };
        (d, c0 + 2.0 * self.K - 2.0 * d)
    }
}

/// Outcome of one evaluation, with the data needed to audit it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgfValue {
    pub t: C64,
    pub value: Ext,
    pub cubic_residual: f64,
}

/// Evaluates `w` or `w̃` by continuation of a root of the cubic.
#[derive(Debug, Clone)]
pub struct CgfEvaluator {
    pub which: Which,
    pub ctx: Arc<EllipticContext>,
    pub rational: GluingRational,
    pub cubic: GluingCubic,
    pub pole: f64,
    /// `(t₀, w(t₀))` next to the pole.
    pub anchor: (C64, C64),
    /// Vertical offset of the hub through which paths leave the anchor.
    pub hub_height: f64,
    /// Double root of the cubic at `F = c₀`: `w(0) = w̃(-1) = D`.
    pub double_root: f64,
    /// Simple root of the cubic at `F = c₀`.
    pub simple_root: f64,
    /// Poles of `F` and the points where roots of the cubic can collide;
    /// path steps are kept well inside the distance to this set.
    pub singular: Vec<C64>,
}

/// Smallest admissible step along a path, relative to the segment length.
const MIN_STEP: f64 = 1e-13;
/// Distance to the target under which a stalled path accepts the nearest root.
const ENDPOINT_SNAP: f64 = 1e-6;

impl CgfEvaluator {
    pub fn new(ctx: Arc<EllipticContext>, which: Which) -> Result<Self> {
        let [_, x2, x3, _] = ctx.geom.x;
        let rational = GluingRational::new(ctx.z(), x2, x3);
        let cubic = GluingCubic { K: ctx.consts.K, G2: ctx.consts.G2, G3: ctx.consts.G3 };
        let pole = match which {
            Which::W => x2,
            Which::WTilde => x3,
        };
        let (double_root, simple_root) = cubic.degenerate_roots(rational.c0);
        let mut singular = vec![C64::new(x2, 0.0), C64::new(x3, 0.0)];
        if which == Which::W {
            singular.push(C64::new(1.0, 0.0));
        }
        for v in cubic.critical_values() {
            singular.extend(rational.preimages(which, v));
        }
        // the anchor must sit closer to the pole than to anything else singular
        let room = singular.iter().map(|s| (s - pole).norm()).filter(|&d| d > 1e-9 * (x3 - x2)).fold(x3 - x2, f64::min);
        let t0 = C64::new(pole + 1e-3 * room, 0.0);
        let f0 = rational.value(which, t0).finite().ok_or(Error::Tracking(t0))?;
        let w0 = cubic.roots(f0).into_iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).ok_or(Error::Tracking(t0))?;
        Ok(CgfEvaluator {
            which,
            rational,
            cubic,
            pole,
            anchor: (t0, w0),
            hub_height: 0.5 * (x3 - x2),
            double_root,
            simple_root,
            singular,
            ctx,
        })
    }

    pub fn f_value(&self, t: C64) -> Ext {
        self.rational.value(self.which, t)
    }

    /// Points where the value is known in closed form: the pole, the
    /// degenerate point where `F = c₀` has a double root, and points where
    /// `F` is infinite (the value is `K` there).
    fn special_value(&self, t: C64) -> Option<Ext> {
        let close = |p: f64| (t - p).norm() <= 1e-14 * p.abs().max(1.0);
        if close(self.pole) {
            return Some(Ext::Infinity);
        }
        let degenerate = match self.which {
            Which::W => 0.0,
            Which::WTilde => -1.0,
        };
        if close(degenerate) {
            return Some(Ext::real(self.double_root));
        }
        if self.f_value(t).is_infinite() {
            return Some(Ext::real(self.cubic.K));
        }
        None
    }

    /// `w(t)` (or `w̃(t)`) by continuation along the anchor-hub-target path.
    pub fn eval(&self, t: C64) -> Result<Ext> {
        if let Some(v) = self.special_value(t) {
            return Ok(v);
        }
        let w = self.track(t)?;
        // real on the real axis off the cut, by conjugation symmetry; near a
        // double root the tracked value otherwise carries a √ε imaginary part
        if t.im == 0.0 && !self.on_cut(t.re) {
            return Ok(Ext::real(w.re));
        }
        Ok(Ext::Finite(w))
    }

    fn on_cut(&self, t: f64) -> bool {
        let [_, _, x3, x4] = self.ctx.geom.x;
        match self.which {
            Which::W => (x3..=x4).contains(&t),
            Which::WTilde => t >= self.ctx.geom.y3,
        }
    }

    /// [`eval`](Self::eval) with the cubic residual at the returned root.
    pub fn eval_checked(&self, t: C64) -> Result<CgfValue> {
        let value = self.eval(t)?;
        let cubic_residual = match value {
            Ext::Finite(w) => self.cubic.residual(w, self.f_value(t)),
            Ext::Infinity => 0.0,
        };
        Ok(CgfValue { t, value, cubic_residual })
    }

    /// `∂ₜw = F'(t)(w-K)² / ∂P/∂w`.
    pub fn derivative(&self, t: C64) -> Result<C64> {
        let w = self.eval(t)?.finite().ok_or(Error::Argument(format!("pole at t = {t}")))?;
        self.derivative_at(t, w)
    }

    /// The derivative given the branch value `w` at `t`.
    ///
    /// Where `w` nearly collides with another root of the cubic, `F'` and
    /// `∂P/∂w` vanish together (`w` is conformal, so `F' = 0` only at double
    /// roots). There, and where `F` itself is infinite, the derivative comes
    /// from Cauchy's integral over a small circle on which `w` is analytic.
    pub fn derivative_at(&self, t: C64, w: C64) -> Result<C64> {
        match self.implicit_derivative(t, w) {
            Some(d) => Ok(d),
            None => self.cauchy_derivative(t),
        }
    }

    /// The implicit-function derivative, `None` near a collision of roots.
    /// The tracker uses this directly so it never recurses into `eval`.
    fn implicit_derivative(&self, t: C64, w: C64) -> Option<C64> {
        let (Ext::Finite(f), Ext::Finite(df)) = (self.f_value(t), self.rational.derivative(self.which, t)) else {
            return None;
        };
        if separation(&self.cubic.roots(f), w) <= 1e-3 * (1.0 + w.norm()) {
            return None;
        }
        let d = w - self.cubic.K;
        Some(df * d * d / self.cubic.dw(w, f))
    }

    /// Distance from `t` to the nearest singularity of the gluing function:
    /// its pole and its cut.
    fn analytic_radius(&self, t: C64) -> f64 {
        let [_, x2, x3, x4] = self.ctx.geom.x;
        let dist = |lo: f64, hi: f64| (t - t.re.clamp(lo, hi)).norm();
        match self.which {
            Which::W => (t - x2).norm().min(dist(x3, x4)),
            Which::WTilde => (t - x3).norm().min(dist(self.ctx.geom.y3, f64::INFINITY)),
        }
    }

    fn cauchy_derivative(&self, t: C64) -> Result<C64> {
        const NODES: usize = 32;
        let r = 0.25 * self.analytic_radius(t).min(1.0);
        if !(r > 0.0) {
            return Err(Error::DoubleRoot(t));
        }
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..NODES {
            let e = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / NODES as f64);
            let v = self.eval(t + r * e)?.finite().ok_or(Error::DoubleRoot(t))?;
            acc += v * e.conj();
        }
        Ok(acc / (NODES as f64 * r))
    }

    /// The real root on a real stretch where exactly one root is real, which
    /// is the tracked branch on the integration segments `[x₁, x₂]` (for `w`)
    /// and `]0, y₂]` (for `w̃`). Falls back to tracking when the roots do
    /// not separate cleanly.
    pub fn eval_real_segment(&self, t: f64) -> Result<f64> {
        let tc = C64::new(t, 0.0);
        if let Some(v) = self.special_value(tc) {
            return v.finite().map(|v| v.re).ok_or(Error::Tracking(tc));
        }
        let f = self.f_value(tc).unwrap();
        let mut roots = self.cubic.roots(f);
        roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
        let scale = 1.0 + roots[0].norm();
        if roots[0].im.abs() < 1e-9 * scale && roots[1].im.abs() > 1e-6 * scale {
            Ok(roots[0].re)
        } else {
            Ok(self.track(tc)?.re)
        }
    }

    fn roots_at(&self, t: C64) -> Result<[C64; 3]> {
        match self.f_value(t) {
            Ext::Finite(f) => Ok(self.cubic.roots(f)),
            Ext::Infinity => Err(Error::Tracking(t)),
        }
    }

    fn track(&self, target: C64) -> Result<C64> {
        let (t0, w0) = self.anchor;
        let sign = if target.im >= 0.0 { 1.0 } else { -1.0 };
        let hub = t0 + C64::new(0.0, sign * self.hub_height);
        let mut cur = w0;
        let mut cur_roots = self.roots_at(t0)?;
        for (a, b, last) in [(t0, hub, false), (hub, target, true)] {
            let len = (b - a).norm();
            if len == 0.0 {
                continue;
            }
            let mut s = 0.0;
            let mut h: f64 = 1.0 / 16.0;
            while s < 1.0 {
                let tp = a + (b - a) * s;
                let clearance = self.singular.iter().map(|p| (tp - p).norm()).fold(f64::INFINITY, f64::min);
                h = h.min(1.0 - s).min((0.5 * clearance).max(MIN_STEP * len) / len);
                let sep = separation(&cur_roots, cur);
                let pred = cur + self.implicit_derivative(tp, cur).unwrap_or(C64::new(0.0, 0.0)) * (b - a) * h;
                let tn = a + (b - a) * (s + h);
                let next_roots = self.roots_at(tn);
                if let Ok(roots) = next_roots {
                    let (nxt, d0, d1) = nearest(&roots, pred);
                    if d0 < 0.25 * d1 && (nxt - cur).norm() < sep / 3.0 {
                        cur = nxt;
                        cur_roots = roots;
                        s += h;
                        h *= 2.0;
                        continue;
                    }
                }
                h /= 2.0;
                if h < MIN_STEP {
                    let remaining = (1.0 - s) * len;
                    if last && remaining < ENDPOINT_SNAP * (1.0 + target.norm()) {
                        let roots = self.roots_at(target)?;
                        let pred =
                            cur + self.implicit_derivative(tp, cur).unwrap_or(C64::new(0.0, 0.0)) * (target - tp);
                        return Ok(nearest(&roots, pred).0);
                    }
                    return Err(Error::Tracking(tp));
                }
            }
        }
        Ok(cur)
    }

    /// The elliptic representation at `t`: `℘₁,₃(x⁻¹(t) - (ω₁+ω₂)/2)` for `w`,
    /// and the same at `X₀(t)` for `w̃`.
    pub fn elliptic(&self, t: Ext) -> Result<Ext> {
        let ctx = &self.ctx;
        let offset = match (self.which, t) {
            (Which::W, t) => ctx.x_inverse_offset(t)?,
            (Which::WTilde, Ext::Infinity) => ctx.x_inverse_offset(Ext::real(0.0))?,
            (Which::WTilde, Ext::Finite(t)) => {
                let x0 = ctx.geom.x_branches(t).0;
                // X₀(x₃) = x₂: the kernel at x = x₂ equals z·x₂²·(t - x₃)²,
                // so X₀(t) - x₂ = -z·x₂²(t-x₃)² / (ã(t)(x₂ + X₀) + b̃(t))
                let gap = x0.finite().map(|x0| {
                    let [_, x2, x3, _] = ctx.geom.x;
                    let den = ctx.geom.a_tilde(t) * (x2 + x0) + ctx.geom.b_tilde(t);
                    -ctx.z() * x2 * x2 * (t - x3) * (t - x3) / den
                });
                ctx.x_inverse_offset_with_gap(x0, gap)?
            }
        };
        Ok(ctx.wp13.wp_value(offset))
    }

    /// For each sampled `u ∈ [x₁, x₂]`, the smallest `|w(t) - w(u)|` over a
    /// grid of the domain bounded by the X-curve, away from `[x₁, x₂]`.
    pub fn gluing_injectivity_check(&self, samples: usize, grid: usize) -> Result<InjectivityReport> {
        if samples == 0 {
            return Ok(InjectivityReport { samples: 0, min_margin: None, worst: None });
        }
        let geom = &self.ctx.geom;
        let [x1, x2, _, _] = geom.x;
        let curve = geom.curve_points(crate::kernel::Curve::X, 4000)?;
        let poly: Vec<C64> = curve.iter().filter_map(|p| p.point.finite()).collect();
        let right = poly.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
        let (lo_re, hi_re, half_im) = (x1 - 2.0, right, 2.0);
        let step = ((hi_re - lo_re) / grid as f64).max(2.0 * half_im / grid as f64);
        let mut values = Vec::new();
        for i in 0..grid {
            for j in 0..grid {
                let p = C64::new(
                    lo_re + (hi_re - lo_re) * (i as f64 + 0.5) / grid as f64,
                    -half_im + 2.0 * half_im * (j as f64 + 0.5) / grid as f64,
                );
                let dist_seg = if p.re < x1 {
                    (p - x1).norm()
                } else if p.re > x2 {
                    (p - x2).norm()
                } else {
                    p.im.abs()
                };
                if dist_seg < step / 2.0 || !inside_left_of(&poly, p) {
                    continue;
                }
                if let Ok(Ext::Finite(w)) = self.eval(p) {
                    values.push((p, w));
                }
            }
        }
        let mut min_margin = f64::INFINITY;
        let mut worst = None;
        for k in 0..samples {
            let u = x1 + (x2 - x1) * (k as f64 + 0.5) / samples as f64;
            let wu = self.eval_real_segment(u)?;
            for &(p, w) in &values {
                let m = (w - wu).norm();
                if m < min_margin {
                    min_margin = m;
                    worst = Some((u, p));
                }
            }
        }
        Ok(InjectivityReport { samples, min_margin: Some(min_margin), worst })
    }
}

/// Result of [`CgfEvaluator::gluing_injectivity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct InjectivityReport {
    pub samples: usize,
    pub min_margin: Option<f64>,
    /// The `(u, t)` pair attaining the minimum.
    pub worst: Option<(f64, C64)>,
}

/// Odd crossing count of the rightward ray from `p` with the polyline.
fn inside_left_of(poly: &[C64], p: C64) -> bool {
    let mut crossings = 0;
    for pair in poly.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if x > p.re {
                crossings += 1;
            }
        }
    }
    crossings % 2 == 1
}

fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Distance from `w` to the nearest other root in `roots`.
fn separation(roots: &[C64; 3], w: C64) -> f64 {
    let mut d: Vec<f64> = roots.iter().map(|r| (r - w).norm()).collect();
    d.sort_by(f64::total_cmp);
    d[1]
}

/// The root nearest to `p`, its distance, and the distance of the runner-up.
fn nearest(roots: &[C64; 3], p: C64) -> (C64, f64, f64) {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| (roots[i] - p).norm().total_cmp(&(roots[j] - p).norm()));
    (roots[idx[0]], (roots[idx[0]] - p).norm(), (roots[idx[1]] - p).norm())
}
