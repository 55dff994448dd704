//! Small polynomial root finders and a compensated float pair.

use crate::C64;
use nalgebra::DMatrix;

/// Both roots of `a r² + b r + c` with `a ≠ 0`, computed without cancellation.
///
/// The root of larger modulus comes from `-(b ± √Δ) / 2a` with the sign that
/// avoids cancellation; the other is recovered from the product `c / a`.
pub fn quadratic_roots(a: C64, b: C64, c: C64) -> (C64, C64) {
    let sd = (b * b - 4.0 * a * c).sqrt();
    let plus = b + sd;
    let minus = b - sd;
    let q = if plus.norm() >= minus.norm() { -plus / 2.0 } else { -minus / 2.0 };
    if q.norm() == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    (q / a, c / q)
}

/// Value of the monic cubic `w³ + a w² + b w + c`.
pub fn cubic_value(a: C64, b: C64, c: C64, w: C64) -> C64 {
    ((w + a) * w + b) * w + c
}

/// The three roots of the monic cubic `w³ + a w² + b w + c`.
///
/// Cardano's formula seeds the roots, then each is polished by Newton steps
/// that are kept only while they reduce the residual.
pub fn cubic_roots(a: C64, b: C64, c: C64) -> [C64; 3] {
    let a3 = a / 3.0;
    let p = b - a * a3;
    let q = c - a3 * b + 2.0 * a3 * a3 * a3;
    let h = -q / 2.0;
    let sd = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u3 = if (h + sd).norm() >= (h - sd).norm() { h + sd } else { h - sd };
    let mut roots = [-a3; 3];
    if u3.norm() > 0.0 {
        let u = u3.cbrt();
        let omega = C64::new(-0.5, 0.75f64.sqrt());
        let mut uk = u;
        for r in roots.iter_mut() {
            *r = uk - p / (3.0 * uk) - a3;
            uk *= omega;
        }
    }
    for r in roots.iter_mut() {
        let mut val = cubic_value(a, b, c, *r);
        for _ in 0..4 {
            let d = (3.0 * *r + 2.0 * a) * *r + b;
            if d.norm() == 0.0 || val.norm() == 0.0 {
                break;
            }
            let cand = *r - val / d;
            let cv = cubic_value(a, b, c, cand);
            if cv.norm() < val.norm() {
                *r = cand;
                val = cv;
            } else {
                break;
            }
        }
    }
    roots
}

/// Roots of a real polynomial given by its coefficients, highest degree
/// first, as eigenvalues of the companion matrix.
pub fn companion_roots(coeffs: &[f64]) -> Vec<C64> {
    let lead = coeffs[0];
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// Roots of a complex polynomial, highest degree first, as eigenvalues of
/// the companion matrix. Leading zeros are dropped.
pub fn complex_companion_roots(coeffs: &[C64]) -> Vec<C64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let start = coeffs.iter().position(|c| c.norm() > 1e-14 * scale);
    let Some(start) = start else {
        return Vec::new();
    };
    let coeffs = &coeffs[start..];
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let mut m = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -coeffs[j + 1] / coeffs[0];
    }
    for i in 1..n {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    m.eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
}

/// Unevaluated sum `hi + lo` carrying about 106 bits, for the few places
/// where a difference of nearly equal quantities must be exact to f64.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub fn new(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }

    pub fn scale(self, k: f64) -> Self {
        self * DoubleDouble::new(k)
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (o.hi - bb);
        renormalize(s, err + self.lo + o.lo)
    }
}

impl std::ops::Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p);
        renormalize(p, err + self.hi * o.lo + self.lo * o.hi)
    }
}

fn renormalize(hi: f64, lo: f64) -> DoubleDouble {
    let s = hi + lo;
    DoubleDouble { hi: s, lo: lo - (s - hi) }
}
