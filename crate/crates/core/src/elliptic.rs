//! Periods, Weierstrass `℘` functions on rectangular lattices, the Möbius map
//! `f` and the constants of the gluing cubic.
//!
//! Three lattices appear, all sharing the imaginary period `ω₁`:
//! - `℘` with real period `ω₂` and invariants `g₂, g₃`;
//! - `℘₁,₃` with real period `ω₃ = 3ω₂/4` and invariants `g₂,₁,₃, g₃,₁,₃`;
//! - `℘₁,₄` with real period `ω₂/4` and invariants `9G₂, -27G₃`.

use crate::kernel::KernelGeometry;
use crate::poly::{companion_roots, DoubleDouble};
use crate::quad::{self, QuadratureSpec, Rule};
use crate::{Error, Ext, Result, C64};
use std::f64::consts::PI;

/// Laurent coefficients kept in the series of `℘` at the origin.
const LAURENT_TERMS: usize = 30;

/// Weierstrass `℘` for the lattice `wr·ℤ + i·wi·ℤ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub wr: f64,
    pub wi: f64,
    pub g2: f64,
    pub g3: f64,
    coeffs: Vec<f64>,
}

impl Lattice {
    pub fn new(wr: f64, wi: f64, g2: f64, g3: f64) -> Self {
        Lattice { wr, wi, g2, g3, coeffs: laurent_coefficients(g2, g3, LAURENT_TERMS) }
    }

    /// Builds the lattice with invariants obtained from its periods through
    /// Eisenstein series.
    pub fn from_periods(wr: f64, wi: f64) -> Self {
        let (g2, g3) = invariants_from_periods(wr, wi);
        Self::new(wr, wi, g2, g3)
    }

    /// The real period as a complex number.
    pub fn real_period(&self) -> C64 {
        C64::new(self.wr, 0.0)
    }

    /// The imaginary period as a complex number.
    pub fn imag_period(&self) -> C64 {
        C64::new(0.0, self.wi)
    }

    /// Representative of `u` modulo the lattice, closest to the origin cell.
    pub fn reduce(&self, u: C64) -> C64 {
        C64::new(u.re - (u.re / self.wr).round() * self.wr, u.im - (u.im / self.wi).round() * self.wi)
    }

    /// `(℘(u), ℘'(u))`; both infinite at lattice points.
    ///
    /// Evaluated through Jacobi theta series on whichever orientation of the
    /// rectangle gives the nome `q ≤ e^{-π}`, so a handful of terms reach
    /// full precision anywhere in the reduced cell.
    pub fn wp(&self, u: C64) -> (Ext, Ext) {
        let v = self.reduce(u);
        if v.norm() < 1e-12 * self.wr.min(self.wi) {
            return (Ext::Infinity, Ext::Infinity);
        }
        let (p, dp) = if self.wi >= self.wr {
            theta_wp(self.wr, self.wi, v)
        } else {
            // ℘(u; wr, i·wi) = -℘(-iu; wi, i·wr)
            let (p, dp) = theta_wp(self.wi, self.wr, C64::new(v.im, -v.re));
            (-p, C64::new(0.0, 1.0) * dp)
        };
        (Ext::Finite(p), Ext::Finite(dp))
    }

    /// `(℘(u), ℘'(u))` from the Laurent series at the origin and repeated
    /// duplication; an independent route used to cross-check [`wp`](Self::wp).
    pub fn wp_series(&self, u: C64) -> (Ext, Ext) {
        let mut v = self.reduce(u);
        let scale = self.wr.min(self.wi);
        if v.norm() < 1e-12 * scale {
            return (Ext::Infinity, Ext::Infinity);
        }
        let mut halvings = 0;
        while v.norm() > 0.25 * scale {
            v /= 2.0;
            halvings += 1;
        }
        let v2 = v * v;
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for k in (2..self.coeffs.len()).rev() {
            p = p * v2 + self.coeffs[k];
            dp = dp * v2 + self.coeffs[k] * (2 * k - 2) as f64;
        }
        // p = Σ c_k v^{2k-4}, dp = Σ c_k (2k-2) v^{2k-4}
        let mut wp = 1.0 / v2 + p * v2;
        let mut wpd = -2.0 / (v2 * v) + dp * v;
        for _ in 0..halvings {
            let lam = (6.0 * wp * wp - self.g2 / 2.0) / wpd;
            let next = lam * lam / 4.0 - 2.0 * wp;
            let nextd = -(lam * (next - wp) + wpd);
            wp = next;
            wpd = nextd;
        }
        (Ext::Finite(wp), Ext::Finite(wpd))
    }

    /// `℘(u)` only.
    pub fn wp_value(&self, u: C64) -> Ext {
        self.wp(u).0
    }

    /// The half-period values `(℘(wr/2), ℘((wr + i·wi)/2), ℘(i·wi/2))`.
    pub fn half_period_values(&self) -> [f64; 3] {
        let h = |u: C64| self.wp_value(u).unwrap().re;
        [h(C64::new(self.wr / 2.0, 0.0)), h(C64::new(self.wr / 2.0, self.wi / 2.0)), h(C64::new(0.0, self.wi / 2.0))]
    }

    /// `℘̆(u) + Σ_{k=1}^{n-1} [℘̆(u + k·wr/n) - ℘̆(k·wr/n)]`, which is the `℘`
    /// of the lattice whose real period is divided by `n`.
    pub fn subdivide(&self, u: C64, n: usize) -> Ext {
        if n == 0 {
            return Ext::Infinity;
        }
        let mut acc = match self.wp_value(u) {
            Ext::Finite(v) => v,
            Ext::Infinity => return Ext::Infinity,
        };
        for k in 1..n {
            let shift = C64::new(k as f64 * self.wr / n as f64, 0.0);
            match (self.wp_value(u + shift), self.wp_value(shift)) {
                (Ext::Finite(a), Ext::Finite(b)) => acc += a - b,
                _ => return Ext::Infinity,
            }
        }
        Ext::Finite(acc)
    }

    /// Some `u` with `℘(u) = v`, not yet folded into a fundamental domain.
    ///
    /// Seeded by `R_F(v-e₁, v-e₂, v-e₃)` and polished by Newton's method.
    pub fn inverse_raw(&self, v: Ext, e: [f64; 3]) -> Result<C64> {
        let v = match v {
            Ext::Infinity => return Ok(C64::new(0.0, 0.0)),
            Ext::Finite(v) => v,
        };
        let mut u = carlson_rf(v - e[0], v - e[1], v - e[2]);
        let tol = 1e-13 * v.norm().max(1.0);
        let mut best = (f64::INFINITY, u);
        for _ in 0..40 {
            let (p, dp) = match self.wp(u) {
                (Ext::Finite(p), Ext::Finite(dp)) => (p, dp),
                _ => break,
            };
            let res = (p - v).norm();
            if res < best.0 {
                best = (res, u);
            }
            if res <= tol || dp.norm() == 0.0 {
                break;
            }
            let step = (p - v) / dp;
            u -= step;
            if step.norm() < 1e-16 * u.norm().max(1.0) {
                break;
            }
        }
        let (res, u) = best;
        if res <= 1e-9 * v.norm().max(1.0) {
            Ok(u)
        } else {
            Err(Error::Inversion(v))
        }
    }

    /// Folds `u` by periodicity and evenness into the half-parallelogram
    /// `]0, wr/2[ × [0, wi[` closed by the segments `[0, i·wi/2]` and
    /// `wr/2 + [0, i·wi/2]`.
    pub fn fold_half(&self, u: C64) -> C64 {
        let edge = 1e-10 * self.wr.max(self.wi);
        let mut re = u.re.rem_euclid(self.wr);
        let mut im = u.im.rem_euclid(self.wi);
        if re > self.wr / 2.0 + edge {
            re = self.wr - re;
            im = (self.wi - im).rem_euclid(self.wi);
        }
        let on_edge = re.abs() < edge || (re - self.wr / 2.0).abs() < edge || (re - self.wr).abs() < edge;
        if on_edge && im > self.wi / 2.0 {
            im = self.wi - im;
        }
        if (re - self.wr).abs() < edge {
            re = 0.0;
        }
        C64::new(re, im)
    }
}

/// The four Jacobi thetas at `v` for the nome `q = e^{-πτ}`.
fn thetas(v: C64, tau: f64) -> [C64; 4] {
    let mut t = [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
    for n in 0..40 {
        let nf = n as f64;
        let half = (-PI * tau * (nf + 0.5) * (nf + 0.5)).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let odd = (2.0 * nf + 1.0) * v;
        let d1 = 2.0 * sign * half * odd.sin();
        let d2 = 2.0 * half * odd.cos();
        t[0] += d1;
        t[1] += d2;
        let mut size = d1.norm() + d2.norm();
        if n > 0 {
            let full = (-PI * tau * nf * nf).exp();
            let c = 2.0 * full * (2.0 * nf * v).cos();
            t[2] += c;
            t[3] += sign * c;
            size += c.norm();
        }
        if n > 1 && size < 1e-18 * (t[2].norm() + t[3].norm()) {
            break;
        }
    }
    t
}

/// `(℘, ℘')` for the lattice `wr·ℤ + i·wi·ℤ` with `wi ≥ wr`, at a reduced `u`.
fn theta_wp(wr: f64, wi: f64, u: C64) -> (C64, C64) {
    let tau = wi / wr;
    let s = PI / wr;
    let [_, a2, a3, a4] = thetas(C64::new(0.0, 0.0), tau);
    let [t1, t2, t3, t4] = thetas(s * u, tau);
    let r = a2 * a3 * t4 / t1;
    let p = s * s * (r * r - (a2.powi(4) + a3.powi(4)) / 3.0);
    let k = a2 * a3 * a4;
    let dp = -2.0 * s.powi(3) * k * k * t2 * t3 * t4 / (t1 * t1 * t1);
    (p, dp)
}

fn laurent_coefficients(g2: f64, g3: f64, n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for k in 4..=n {
        let s: f64 = (2..=k - 2).map(|m| c[m] * c[k - m]).sum();
        c[k] = 3.0 / ((2 * k + 1) as f64 * (k - 3) as f64) * s;
    }
    c
}

/// Invariants `(g₂, g₃)` of the lattice `wr·ℤ + i·wi·ℤ` from `E₄` and `E₆`.
pub fn invariants_from_periods(wr: f64, wi: f64) -> (f64, f64) {
    let (base, ratio) = if wr <= wi { (C64::new(wr, 0.0), wi / wr) } else { (C64::new(0.0, wi), wr / wi) };
    let q = (-2.0 * PI * ratio).exp();
    let sigma = |n: u64, k: i32| -> f64 { (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| (d as f64).powi(k)).sum() };
    let mut e4 = 1.0;
    let mut e6 = 1.0;
    let mut qn = 1.0;
    for n in 1..40u64 {
        qn *= q;
        if qn < 1e-30 {
            break;
        }
        e4 += 240.0 * sigma(n, 3) * qn;
        e6 -= 504.0 * sigma(n, 5) * qn;
    }
    let t = 2.0 * PI / base;
    let g2 = t.powi(4) * e4 / 12.0;
    let g3 = t.powi(6) * e6 / 216.0;
    (g2.re, g3.re)
}

/// Carlson's symmetric integral `R_F(x, y, z)` for complex arguments off
/// the negative real axis, by the duplication theorem.
pub fn carlson_rf(x: C64, y: C64, z: C64) -> C64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..200 {
        let a = (x + y + z) / 3.0;
        let dev = [(a - x).norm(), (a - y).norm(), (a - z).norm()].into_iter().fold(0.0, f64::max);
        if dev < 1e-4 * a.norm() || a.norm() == 0.0 {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = (x + lam) / 4.0;
        y = (y + lam) / 4.0;
        z = (z + lam) / 4.0;
    }
    let a = (x + y + z) / 3.0;
    let dx = 1.0 - x / a;
    let dy = 1.0 - y / a;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// `(g₂, g₃)` of `℘` as closed-form polynomials in `z`.
pub fn invariants_g(z: f64) -> (f64, f64) {
    let z2 = z * z;
    let g2 = 4.0 / 3.0 * (1.0 - 16.0 * z2 + 16.0 * z2 * z2);
    let g3 = -8.0 / 27.0 * (1.0 - 8.0 * z2) * (1.0 - 16.0 * z2 - 8.0 * z2 * z2);
    (g2, g3)
}

/// The Möbius map `f(t) = d''(x₄)/6 + d'(x₄)/(t - x₄)` and its inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub x4: f64,
    /// `d''(x₄)/6`, the value at infinity.
    pub t_inf: f64,
    /// `d'(x₄)`.
    pub slope: f64,
}

impl Mobius {
    pub fn new(geom: &KernelGeometry) -> Self {
        let z = geom.z;
        let x4 = geom.x[3];
        let q = z * x4 * x4 - x4 + z;
        let dq = 2.0 * z * x4 - 1.0;
        let d1 = 2.0 * q * dq - 8.0 * z * z * x4;
        let d2 = 2.0 * dq * dq + 4.0 * z * q - 8.0 * z * z;
        Mobius { x4, t_inf: d2 / 6.0, slope: d1 }
    }

    pub fn apply(&self, t: Ext) -> Ext {
        match t {
            Ext::Infinity => Ext::real(self.t_inf),
            Ext::Finite(t) => {
                let den = t - self.x4;
                if den.norm() == 0.0 {
                    Ext::Infinity
                } else {
                    Ext::Finite(self.t_inf + self.slope / den)
                }
            }
        }
    }

    pub fn invert(&self, u: Ext) -> Ext {
        match u {
            Ext::Infinity => Ext::real(self.x4),
            Ext::Finite(u) => {
                let den = u - self.t_inf;
                if den.norm() == 0.0 {
                    Ext::Infinity
                } else {
                    Ext::Finite(self.x4 + self.slope / den)
                }
            }
        }
    }
}

/// The three periods with the quadrature effort that produced them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Periods {
    /// Purely imaginary, positive imaginary part.
    pub omega1: C64,
    pub omega2: f64,
    /// `ω₃` as integrated, before it is replaced by `3ω₂/4`.
    pub omega3: f64,
    /// Largest node count used by any of the three integrals.
    pub nodes_used: usize,
}

const PERIOD_SPEC: QuadratureSpec = QuadratureSpec { node_count: 32, max_doublings: 14, target_rel_err: 1e-14 };

fn rule_sum(rule: Rule, n: usize, g: impl Fn(f64) -> f64) -> Result<C64> {
    Ok(C64::new(quad::nodes(rule, n).into_iter().map(|(s, w)| w * g(s)).sum(), 0.0))
}

/// `ω₁ = i∫_{x₁}^{x₂} dx/√(-d)`, `ω₂ = ∫_{x₂}^{x₃} dx/√d`, `ω₃ = ∫_{-∞}^{x₁} dx/√d`.
///
/// `x ↦ 1/x` preserves `dx/√d` and swaps `x₁ ↔ x₄`, `x₂ ↔ x₃`, so `ω₂` is
/// twice the integral over `[x₂, 1]` and the half-line in `ω₃` folds onto
/// `[-1, 0]`. For small `z` the pair `x₁, x₂` sits within `O(z²)` of each
/// other, far closer than the interval lengths; the substitution
/// `x = x₁ + (x₂-x₁)cosh²v` (or `x₂ - (x₂-x₁)cosh²v` below `x₁`) turns
/// `dx/√|(x-x₁)(x-x₂)|` into `2dv` and leaves a smooth integrand in `v`.
/// On `[x₁, x₂]` the Chebyshev weight absorbs both endpoints.
pub fn periods(geom: &KernelGeometry) -> Result<Periods> {
    let z = geom.z;
    let [x1, x2, x3, x4] = geom.x;
    let gap = x2 - x1;
    let far = |x: f64| 2.0 / (z * ((x3 - x) * (x4 - x)).sqrt());
    // v at which `x₁ + gap·cosh²v` (or `x₂ - gap·cosh²v`) reaches distance `r` from the pair
    let reach = |r: f64| (r / gap).sqrt().acosh();

    let (m1, h1) = ((x1 + x2) / 2.0, gap / 2.0);
    let w1 = quad::integrate(&PERIOD_SPEC, |n| {
        rule_sum(Rule::ChebyshevFirst, n, |s| {
            let x = m1 + h1 * s;
            1.0 / (z * ((x3 - x) * (x4 - x)).sqrt())
        })
    })?;

    let up = |v: f64| x1 + gap * v.cosh().powi(2);
    let down = |v: f64| x2 - gap * v.cosh().powi(2);
    let legendre = |lo: f64, hi: f64, g: &dyn Fn(f64) -> f64| {
        let (m, h) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        quad::integrate(&PERIOD_SPEC, |n| rule_sum(Rule::Legendre, n, |s| h * g(m + h * s)))
    };
    let w2 = legendre(0.0, reach(1.0 - x1), &|v| 2.0 * far(up(v)))?;
    let near = legendre(0.0, reach(x2 + 1.0), &|v| far(down(v)))?;
    let folded = legendre(reach(x2), reach(x2 + 1.0), &|v| far(down(v)))?;

    let nodes_used = [w1.nodes_used, w2.nodes_used, near.nodes_used, folded.nodes_used].into_iter().max().unwrap_or(0);
    Ok(Periods {
        omega1: C64::new(0.0, w1.value.re),
        omega2: w2.value.re,
        omega3: near.value.re + folded.value.re,
        nodes_used,
    })
}

/// Constants of the gluing cubic.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_snake_case)]
pub struct CubicConstants {
    pub G2: f64,
    pub G3: f64,
    /// Positive root of `K⁴ - G₂K²/2 - G₃K - G₂²/48`, from the companion matrix.
    pub K: f64,
    /// The same root from the radical formula in `r₀, r₁, r₂`.
    pub K_radical: f64,
    pub g2_13: f64,
    pub g3_13: f64,
}

impl CubicConstants {
    /// `K⁴ - G₂K²/2 - G₃K - G₂²/48` at `k`.
    pub fn quartic(&self, k: f64) -> f64 {
        k.powi(4) - self.G2 * k * k / 2.0 - self.G3 * k - self.G2 * self.G2 / 48.0
    }
}

/// `G₂`, `G₃`, `K` by two independent routes, and the invariants of `℘₁,₃`.
#[allow(non_snake_case)]
pub fn cubic_constants(z: f64) -> Result<CubicConstants> {
    crate::kernel::check_z(z)?;
    let z2 = z * z;
    let G2 = 4.0 / 27.0 * (1.0 + 224.0 * z2 + 256.0 * z2 * z2);
    let G3 = 8.0 / 729.0 * (1.0 + 16.0 * z2) * (1.0 - 24.0 * z + 16.0 * z2) * (1.0 + 24.0 * z + 16.0 * z2);

    let coeffs = [1.0, 0.0, -G2 / 2.0, -G3, -G2 * G2 / 48.0];
    let positive: Vec<f64> =
        companion_roots(&coeffs).into_iter().filter(|r| r.im.abs() < 1e-9 && r.re > 0.0).map(|r| r.re).collect();
    if positive.len() != 1 {
        return Err(Error::Consistency(format!(
            "expected one positive real root of the K quartic, found {}",
            positive.len()
        )));
    }
    let mut k = positive[0];
    for _ in 0..3 {
        let p = k.powi(4) - G2 * k * k / 2.0 - G3 * k - G2 * G2 / 48.0;
        let dp = 4.0 * k.powi(3) - G2 * k - G3;
        k -= p / dp;
    }

    let disc = cubic_discriminant(z)?;
    let cube = C64::new(disc.cbrt(), 0.0);
    let r = |j: f64| {
        let rot = C64::from_polar(1.0, 2.0 * j * PI / 3.0);
        ((G2 - rot * cube) / 3.0).sqrt()
    };
    // with principal roots √r₁√r₂ = |r₁| > 0, and the product of the three
    // roots carries the sign of G₃, so √r₀ enters with that sign
    let k_rad = ((G3.signum() * r(0.0) + r(1.0) + r(2.0)) / 2.0).re;
    if (k - k_rad).abs() > 1e-11 * k.max(1.0) {
        return Err(Error::Consistency(format!("K from the quartic ({k}) and from radicals ({k_rad}) disagree")));
    }
    Ok(CubicConstants {
        G2,
        G3,
        K: k,
        K_radical: k_rad,
        g2_13: 40.0 * k * k / 3.0 - G2,
        g3_13: -280.0 * k.powi(3) / 27.0 + 14.0 * k * G2 / 9.0 + G3,
    })
}

/// `G₂³ - 27G₃²` at `z`, evaluated in double-double arithmetic.
///
/// Near `z = 1/4` the two terms agree to many digits, so the direct f64
/// difference of the rounded invariants loses most of its precision.
pub fn cubic_discriminant(z: f64) -> Result<f64> {
    crate::kernel::check_z(z)?;
    // G₂ = (4/27)A, G₃ = (8/729)B, so G₂³ - 27G₃² = (64/19683)(A³ - B²)
    // with integer-coefficient A, B evaluated exactly enough in pairs.
    let zz = DoubleDouble::new(z);
    let z2 = zz * zz;
    let one = DoubleDouble::new(1.0);
    let a = one + z2.scale(224.0) + (z2 * z2).scale(256.0);
    let s = one + z2.scale(16.0);
    let b = s * (s * s - z2.scale(576.0));
    let d = a * a * a - b * b;
    Ok(d.value() * 64.0 / 19683.0)
}

/// Everything elliptic for one `z`; immutable after construction.
#[derive(Debug, Clone)]
pub struct EllipticContext {
    pub geom: KernelGeometry,
    pub periods: Periods,
    /// `3ω₂/4`, used downstream in place of the integrated `ω₃`.
    pub omega3: f64,
    pub g2: f64,
    pub g3: f64,
    /// `f(x₁), f(x₂), f(x₃)`: `℘` at `ω₂/2`, `(ω₁+ω₂)/2`, `ω₁/2`.
    pub e: [f64; 3],
    /// The same three half-period values evaluated on the lattice itself,
    /// which differ from `e` only by the rounding in the periods.
    pub lattice_e: [f64; 3],
    pub mobius: Mobius,
    pub consts: CubicConstants,
    /// Lattice `(ω₂, ω₁)`.
    pub wp: Lattice,
    /// Lattice `(ω₃, ω₁)`.
    pub wp13: Lattice,
    /// Lattice `(ω₂/4, ω₁)`.
    pub wp14: Lattice,
}

impl EllipticContext {
    pub fn new(z: f64) -> Result<Self> {
        let geom = KernelGeometry::new(z)?;
        let periods = periods(&geom)?;
        let ratio = periods.omega3 / periods.omega2;
        if (ratio - 0.75).abs() > 1e-9 {
            return Err(Error::Consistency(format!("ω₃/ω₂ = {ratio}, expected 3/4")));
        }
        let omega3 = 0.75 * periods.omega2;
        let (g2, g3) = invariants_g(z);
        let mobius = Mobius::new(&geom);
        let e = geom.x[..3].iter().map(|&x| mobius.apply(Ext::real(x)).unwrap().re).collect::<Vec<_>>();
        let consts = cubic_constants(z)?;
        let wi = periods.omega1.im;
        let wp = Lattice::new(periods.omega2, wi, g2, g3);
        let lattice_e = wp.half_period_values();
        Ok(EllipticContext {
            geom,
            periods,
            omega3,
            g2,
            g3,
            e: [e[0], e[1], e[2]],
            lattice_e,
            mobius,
            consts,
            wp,
            wp13: Lattice::new(omega3, wi, consts.g2_13, consts.g3_13),
            wp14: Lattice::new(periods.omega2 / 4.0, wi, 9.0 * consts.G2, -27.0 * consts.G3),
        })
    }

    pub fn z(&self) -> f64 {
        self.geom.z
    }

    /// `(ω₁ + ω₂)/2`.
    pub fn half_diagonal(&self) -> C64 {
        (self.periods.omega1 + self.periods.omega2) / 2.0
    }

    /// `℘⁻¹(u)` folded into the half-parallelogram where `℘` is injective.
    pub fn wp_inverse(&self, u: Ext) -> Result<C64> {
        let raw = self.wp.inverse_raw(u, self.e)?;
        Ok(self.wp.fold_half(raw))
    }

    /// `x⁻¹(t) - (ω₁+ω₂)/2`, computed without inverting `℘` near its
    /// critical value `f(x₂)`.
    ///
    /// Translation by the half-period gives
    /// `℘(u - h) = e + (e - e₀)(e - e₂)/(℘(u) - e)` with `e = ℘(h)`, and
    /// `℘(u) - e = f(t) - f(x₂)` is formed from the Möbius map directly. Near
    /// `x₂` this inverts `℘` next to its pole, which is well conditioned,
    /// instead of next to a zero of `℘'`.
    pub fn x_inverse_offset(&self, t: Ext) -> Result<C64> {
        let gap = t.finite().map(|t| t - self.geom.x[1]);
        self.x_inverse_offset_with_gap(t, gap)
    }

    /// [`x_inverse_offset`](Self::x_inverse_offset) given `t - x₂` computed
    /// by the caller, for points so close to `x₂` that the subtraction would
    /// lose digits.
    pub fn x_inverse_offset_with_gap(&self, t: Ext, gap: Option<C64>) -> Result<C64> {
        let h = self.half_diagonal();
        let x2 = self.geom.x[1];
        let m = &self.mobius;
        let diff = match (t, gap) {
            (Ext::Finite(t), Some(gap)) => {
                let den = (t - m.x4) * (x2 - m.x4);
                if den.norm() == 0.0 {
                    // f(x₄) = ∞, and x⁻¹(x₄) = 0
                    return Ok(-h);
                }
                Ext::Finite(-m.slope * gap / den)
            }
            _ => Ext::real(-m.slope / (x2 - m.x4)),
        };
        let [e0, e1, e2] = self.lattice_e;
        let shifted = match diff {
            Ext::Finite(d) if d.norm() > 0.0 => Ext::Finite(e1 + (e1 - e0) * (e1 - e2) / d),
            _ => Ext::Infinity,
        };
        let d0 = self.wp.inverse_raw(shifted, [e0, e1, e2])?;
        // pick the representative with h + δ in the folded domain of x⁻¹
        let target = self.wp.fold_half(h + d0) - h;
        let (wr, wi) = (self.wp.wr, self.wp.wi);
        for cand in [d0, -d0] {
            let gap = target - cand;
            let (mr, mi) = ((gap.re / wr).round(), (gap.im / wi).round());
            if (gap - C64::new(mr * wr, mi * wi)).norm() < 1e-8 * wr.max(wi) {
                return Ok(cand + C64::new(mr * wr, mi * wi));
            }
        }
        Ok(target)
    }

    /// `x⁻¹(t) = ℘⁻¹(f(t))`.
    pub fn x_inverse(&self, t: Ext) -> Result<C64> {
        self.wp_inverse(self.mobius.apply(t))
    }

    /// `℘₁,₄(u)` from `℘` on the `(ω₂, ω₁)` lattice.
    pub fn wp14_from_wp(&self, u: C64) -> Ext {
        let (p, dp) = match self.wp.wp(u) {
            (Ext::Finite(p), Ext::Finite(dp)) => (p, dp),
            _ => return Ext::Infinity,
        };
        let z2 = self.z() * self.z();
        let quarter = (1.0 + 4.0 * z2) / 3.0;
        let quarter_d = -8.0 * z2;
        let half = self.e[0];
        let dq = p - quarter;
        let dh = p - half;
        if dq.norm() == 0.0 || dh.norm() == 0.0 {
            return Ext::Infinity;
        }
        Ext::Finite(
            -2.0 * p + (dp * dp + quarter_d * quarter_d) / (2.0 * dq * dq) + dp * dp / (4.0 * dh * dh)
                - 2.0 * half
                - 4.0 * quarter,
        )
    }

    /// `℘₁,₄(u)` from `℘₁,₃`, using `℘₁,₃(ω₃/3) = K`.
    pub fn wp14_from_wp13(&self, u: C64) -> Ext {
        let (p, dp) = match self.wp13.wp(u) {
            (Ext::Finite(p), Ext::Finite(dp)) => (p, dp),
            _ => return Ext::Infinity,
        };
        let k = self.consts.K;
        let dk2 = 4.0 * k.powi(3) - self.consts.g2_13 * k - self.consts.g3_13;
        let diff = p - k;
        if diff.norm() == 0.0 {
            return Ext::Infinity;
        }
        Ext::Finite(-p + (dp * dp + dk2) / (2.0 * diff * diff) - 4.0 * k)
    }
}
