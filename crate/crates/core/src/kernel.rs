//! The kernel `L(x, y, z) = z y (y+1) x² - y x + z (y+1)` and its branches.
//!
//! As a quadratic in `y` the kernel reads `a y² + b y + c` with
//! `a = z x²`, `b = z x² - x + z`, `c = z`; as a quadratic in `x` it reads
//! `ã x² + b̃ x + c̃` with `ã = z y (y+1)`, `b̃ = -y`, `c̃ = z (y+1)`.
//! The discriminants `d = b² - 4ac` and `d̃ = b̃² - 4ãc̃` vanish at the branch
//! points `x₁ < x₂ < x₃ < x₄` and `y₁ = 0 < y₂ < y₃ < y₄ = ∞`.

use crate::poly::quadratic_roots;
use crate::{Error, Ext, Result, C64};
use std::io::{self, Write};

/// Distance to a finite branch point below which the double-root formula is used.
const BRANCH_GUARD: f64 = 1e-9;

/// The weight `z` with its default tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParam {
    pub z: f64,
    pub tol: f64,
}

impl ModelParam {
    pub fn new(z: f64) -> Result<Self> {
        Self::with_tol(z, 1e-7)
    }

    pub fn with_tol(z: f64, tol: f64) -> Result<Self> {
        check_z(z)?;
        if !(tol > 0.0) {
            return Err(Error::Argument(format!("tolerance {tol} must be positive")));
        }
        Ok(ModelParam { z, tol })
    }
}

/// Rejects weights outside `]0, 1/4[`.
pub fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z < 0.25 {
        Ok(())
    } else {
        Err(Error::Domain(z))
    }
}

/// Which side of a real cut a boundary value is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        }
    }
}

/// The two curves traced by the branches on the cuts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    /// `X₀^±([y₁, y₂])`, passing through infinity at `y = 0`.
    X,
    /// `Y₀^±([x₁, x₂])`, a closed curve.
    Y,
}

/// One sample of a curve with the cut coordinate that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub point: Ext,
    pub side: Side,
    pub param: f64,
}

/// Branch points and coefficient evaluators for a fixed `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelGeometry {
    pub z: f64,
    /// `x₁ < x₂ < x₃ < x₄`.
    pub x: [f64; 4],
    pub y2: f64,
    pub y3: f64,
}

impl KernelGeometry {
    pub fn new(z: f64) -> Result<Self> {
        check_z(z)?;
        let sp = (1.0 + 4.0 * z).sqrt();
        let sm = (1.0 - 4.0 * z).sqrt();
        // rationalized so the small roots keep full relative precision
        let x1 = 2.0 * z / (1.0 + 2.0 * z + sp);
        let x2 = 2.0 * z / (1.0 - 2.0 * z + sm);
        let x3 = (1.0 - 2.0 * z + sm) / (2.0 * z);
        let x4 = (1.0 + 2.0 * z + sp) / (2.0 * z);
        let s16 = (1.0 - 16.0 * z * z).sqrt();
        let y2 = 8.0 * z * z / (1.0 - 8.0 * z * z + s16);
        let y3 = (1.0 - 8.0 * z * z + s16) / (8.0 * z * z);
        Ok(KernelGeometry { z, x: [x1, x2, x3, x4], y2, y3 })
    }

    pub fn from_param(p: &ModelParam) -> Result<Self> {
        Self::new(p.z)
    }

    /// `[y₁, y₂, y₃, y₄]` with `y₄` at infinity.
    pub fn y_points(&self) -> [Ext; 4] {
        [Ext::real(0.0), Ext::real(self.y2), Ext::real(self.y3), Ext::Infinity]
    }

    pub fn a(&self, x: C64) -> C64 {
        self.z * x * x
    }

    pub fn b(&self, x: C64) -> C64 {
        self.z * x * x - x + self.z
    }

    pub fn c(&self) -> C64 {
        C64::new(self.z, 0.0)
    }

    pub fn a_tilde(&self, y: C64) -> C64 {
        self.z * y * (y + 1.0)
    }

    pub fn b_tilde(&self, y: C64) -> C64 {
        -y
    }

    pub fn c_tilde(&self, y: C64) -> C64 {
        self.z * (y + 1.0)
    }

    pub fn d(&self, x: C64) -> C64 {
        let b = self.b(x);
        b * b - 4.0 * self.a(x) * self.c()
    }

    pub fn d_tilde(&self, y: C64) -> C64 {
        let b = self.b_tilde(y);
        b * b - 4.0 * self.a_tilde(y) * self.c_tilde(y)
    }

    /// `z² (x-x₁)(x-x₂)(x-x₃)(x-x₄)`.
    pub fn d_factored(&self, x: C64) -> C64 {
        self.x.iter().fold(C64::new(self.z * self.z, 0.0), |acc, &xk| acc * (x - xk))
    }

    /// `-4 z² y (y-y₂)(y-y₃)`.
    pub fn d_tilde_factored(&self, y: C64) -> C64 {
        -4.0 * self.z * self.z * y * (y - self.y2) * (y - self.y3)
    }

    /// Both roots in `Y` of `L(x, Y) = 0`, ordered by modulus.
    ///
    /// At `x = 0` the equation is linear: `Y₀ = -1` and `Y₁` is infinite.
    pub fn y_branches(&self, x: C64) -> (Ext, Ext) {
        let a = self.a(x);
        if a.norm() == 0.0 {
            return (Ext::Finite(-self.c() / self.b(x)), Ext::Infinity);
        }
        if self.near_x_branch_point(x).is_some() {
            let v = -self.b(x) / (2.0 * a);
            return (Ext::Finite(v), Ext::Finite(v));
        }
        let (r1, r2) = quadratic_roots(a, self.b(x), self.c());
        order(r1, r2)
    }

    /// Both roots in `X` of `L(X, y) = 0`, ordered by modulus.
    ///
    /// At `y = -1`, `X₀ = 0` and `X₁` is infinite; at `y = 0` both are infinite.
    pub fn x_branches(&self, y: C64) -> (Ext, Ext) {
        if y.norm() == 0.0 {
            return (Ext::Infinity, Ext::Infinity);
        }
        let a = self.a_tilde(y);
        if a.norm() == 0.0 {
            return (Ext::Finite(-self.c_tilde(y) / self.b_tilde(y)), Ext::Infinity);
        }
        if self.near_y_branch_point(y) {
            let v = -self.b_tilde(y) / (2.0 * a);
            return (Ext::Finite(v), Ext::Finite(v));
        }
        let (r1, r2) = quadratic_roots(a, self.b_tilde(y), self.c_tilde(y));
        order(r1, r2)
    }

    fn near_x_branch_point(&self, x: C64) -> Option<usize> {
        self.x.iter().position(|&xk| (x - xk).norm() < BRANCH_GUARD * xk.abs().max(1.0))
    }

    fn near_y_branch_point(&self, y: C64) -> bool {
        [self.y2, self.y3].iter().any(|&yk| (y - yk).norm() < BRANCH_GUARD * yk.max(1.0))
    }

    /// Boundary value `X₀^±(y)` on `[y₁, y₂]` or `[y₃, y₄]`.
    ///
    /// On `[y₁, y₂]` the upper value is `(-b̃ - i√(-d̃)) / 2ã`; the sign flips
    /// on `[y₃, y₄]`. At `y = 0` the value is infinite.
    pub fn cut_values_x(&self, y: f64, side: Side) -> Result<Ext> {
        let (first, second) = (y >= 0.0 && y <= self.y2, y >= self.y3);
        if !(first || second) {
            return Err(Error::Argument(format!("y = {y} is not on [0, {}] or [{}, ∞[", self.y2, self.y3)));
        }
        if y == 0.0 {
            return Ok(Ext::Infinity);
        }
        let yc = C64::new(y, 0.0);
        let a = self.a_tilde(yc);
        let mid = -self.b_tilde(yc) / (2.0 * a);
        if self.near_y_branch_point(yc) {
            return Ok(Ext::Finite(mid));
        }
        let root = (4.0 * self.z * self.z * y * (self.y2 - y) * (self.y3 - y)).max(0.0).sqrt();
        let upper_minus = first == (side == Side::Upper);
        let im = if upper_minus { -root } else { root };
        Ok(Ext::Finite(mid + C64::new(0.0, im) / (2.0 * a)))
    }

    /// Boundary value `Y₀^±(x)` on `[x₁, x₂]` or `[x₃, x₄]`, mirroring
    /// [`cut_values_x`](Self::cut_values_x).
    pub fn cut_values_y(&self, x: f64, side: Side) -> Result<C64> {
        let [x1, x2, x3, x4] = self.x;
        let (first, second) = (x >= x1 && x <= x2, x >= x3 && x <= x4);
        if !(first || second) {
            return Err(Error::Argument(format!("x = {x} is not on [{x1}, {x2}] or [{x3}, {x4}]")));
        }
        let xc = C64::new(x, 0.0);
        let a = self.a(xc);
        let mid = -self.b(xc) / (2.0 * a);
        if self.near_x_branch_point(xc).is_some() {
            return Ok(mid);
        }
        let root = (-self.d_factored(xc).re).max(0.0).sqrt();
        let upper_minus = first == (side == Side::Upper);
        let im = if upper_minus { -root } else { root };
        Ok(mid + C64::new(0.0, im) / (2.0 * a))
    }

    /// `2n` boundary values along the cut that generates `which`: the upper
    /// side in increasing cut coordinate, then the lower side back.
    pub fn curve_points(&self, which: Curve, n: usize) -> Result<Vec<CurvePoint>> {
        if n < 2 {
            return Err(Error::Argument(format!("curve sampling needs n >= 2, got {n}")));
        }
        let (lo, hi) = match which {
            Curve::X => (0.0, self.y2),
            Curve::Y => (self.x[0], self.x[1]),
        };
        let params: Vec<f64> =
            (0..n).map(|k| if k == n - 1 { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect();
        let eval = |p: f64, side: Side| -> Result<Ext> {
            match which {
                Curve::X => self.cut_values_x(p, side),
                Curve::Y => self.cut_values_y(p, side).map(Ext::Finite),
            }
        };
        let mut out = Vec::with_capacity(2 * n);
        for &p in &params {
            out.push(CurvePoint { point: eval(p, Side::Upper)?, side: Side::Upper, param: p });
        }
        for &p in params.iter().rev() {
            out.push(CurvePoint { point: eval(p, Side::Lower)?, side: Side::Lower, param: p });
        }
        Ok(out)
    }
}

fn order(r1: C64, r2: C64) -> (Ext, Ext) {
    let key = |r: C64| (r.norm(), r.re, r.im);
    if key(r2) < key(r1) {
        (Ext::Finite(r2), Ext::Finite(r1))
    } else {
        (Ext::Finite(r1), Ext::Finite(r2))
    }
}

/// `L(x, y, z)` in polynomial form.
pub fn kernel_eval(x: C64, y: C64, z: f64) -> C64 {
    z * y * (y + 1.0) * x * x - y * x + z * (y + 1.0)
}

/// Sum of the moduli of the kernel's monomial groups, used to judge `|L|`.
pub fn kernel_scale(x: C64, y: C64, z: f64) -> f64 {
    (z * y * (y + 1.0) * x * x).norm() + (y * x).norm() + (z * (y + 1.0)).norm()
}

/// Writes curve samples as CSV with header `re,im,side,param`.
pub fn write_curve_csv<W: Write>(points: &[CurvePoint], mut out: W) -> io::Result<()> {
    writeln!(out, "re,im,side,param")?;
    for p in points {
        match p.point {
            Ext::Finite(v) => writeln!(out, "{:.16e},{:.16e},{},{:.16e}", v.re, v.im, p.side.name(), p.param)?,
            Ext::Infinity => writeln!(out, "inf,inf,{},{:.16e}", p.side.name(), p.param)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_points_at_one_eighth() {
        let g = KernelGeometry::new(0.125).unwrap();
        let want = [0.1010205, 0.1715729, 5.8284271, 9.8989795];
        for (got, want) in g.x.iter().zip(want) {
            assert!((got - want).abs() < 1e-7);
        }
        assert!((g.x[0] * g.x[3] - 1.0).abs() < 1e-12);
        assert!((g.x[1] * g.x[2] - 1.0).abs() < 1e-12);
        assert!((g.y2 * g.y3 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_z_outside_window() {
        for z in [0.0, -0.1, 0.25, 0.3, f64::NAN] {
            assert!(matches!(KernelGeometry::new(z), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn kernel_at_one_one() {
        let v = kernel_eval(C64::new(1.0, 0.0), C64::new(1.0, 0.0), 0.125);
        assert!((v - C64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn special_branch_values() {
        let g = KernelGeometry::new(0.1).unwrap();
        let (x0, x1) = g.x_branches(C64::new(-1.0, 0.0));
        assert_eq!(x0, Ext::Finite(C64::new(0.0, 0.0)));
        assert!(x1.is_infinite());
        let (x0, x1) = g.x_branches(C64::new(0.0, 0.0));
        assert!(x0.is_infinite() && x1.is_infinite());
        let (y0, y1) = g.y_branches(C64::new(0.0, 0.0));
        assert_eq!(y0, Ext::Finite(C64::new(-1.0, 0.0)));
        assert!(y1.is_infinite());
    }

    #[test]
    fn cut_endpoint_is_real_double_root() {
        let g = KernelGeometry::new(0.125).unwrap();
        let v = g.cut_values_x(g.y2, Side::Upper).unwrap().unwrap();
        let want = -g.b_tilde(C64::new(g.y2, 0.0)) / (2.0 * g.a_tilde(C64::new(g.y2, 0.0)));
        assert!((v - want).norm() < 1e-15);
        let v = g.cut_values_y(g.x[0], Side::Lower).unwrap();
        assert!(v.im == 0.0);
    }

    #[test]
    fn cut_values_match_limits_from_above() {
        let g = KernelGeometry::new(0.1).unwrap();
        let y = g.y2 / 2.0;
        let above = g.x_branches(C64::new(y, 1e-10)).0.unwrap();
        let up = g.cut_values_x(y, Side::Upper).unwrap().unwrap();
        assert!((above - up).norm() < 1e-6);
        let x = 0.5 * (g.x[0] + g.x[1]);
        let above = g.y_branches(C64::new(x, 1e-12)).0.unwrap();
        let up = g.cut_values_y(x, Side::Upper).unwrap();
        assert!((above - up).norm() < 1e-6);
    }

    #[test]
    fn csv_has_infinity_row() {
        let g = KernelGeometry::new(0.125).unwrap();
        let pts = g.curve_points(Curve::X, 2).unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "re,im,side,param");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("inf,inf,upper"));
    }
}
