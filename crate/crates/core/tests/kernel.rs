mod common;

use common::*;
use gessel::kernel::{kernel_eval, write_curve_csv, Curve, KernelGeometry, ModelParam, Side};
use gessel::{Error, Ext, C64};
use proptest::prelude::*;

/// Real roots of `d(x) = (zx² - x + z)² - 4z²x²` by sign changes on a grid
/// and bisection, ignoring the closed formulas entirely.
fn discriminant_roots(z: f64) -> Vec<f64> {
    let d = |x: f64| (z * x * x - x + z).powi(2) - 4.0 * z * z * x * x;
    let hi = 2.0 / z;
    let n = 400_000;
    let mut out = Vec::new();
    let mut prev = (0.0, d(0.0));
    for k in 1..=n {
        let x = hi * k as f64 / n as f64;
        let v = d(x);
        if v.signum() != prev.1.signum() {
            let (mut a, mut b) = (prev.0, x);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if d(m).signum() == d(a).signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev = (x, v);
    }
    out
}

#[test]
fn branch_points_agree_with_bisection() {
    for z in [0.02, 0.125, 0.2, 0.24] {
        let g = KernelGeometry::new(z).unwrap();
        let roots = discriminant_roots(z);
        assert_eq!(roots.len(), 4, "z = {z}: {roots:?}");
        for (r, x) in roots.iter().zip(g.x) {
            assert!((r - x).abs() < 1e-12 * x, "z = {z}: {r} vs {x}");
        }
    }
}

#[test]
fn branch_points_at_one_eighth() {
    let g = KernelGeometry::new(0.125).unwrap();
    let want = [0.1010205, 0.1715729, 5.8284271, 9.8989795];
    for (x, w) in g.x.iter().zip(want) {
        assert!((x - w).abs() < 1e-7, "{x} vs {w}");
    }
    assert!((g.x[0] * g.x[3] - 1.0).abs() < 1e-12);
    assert!((g.x[1] * g.x[2] - 1.0).abs() < 1e-12);
    assert!((g.y2 * g.y3 - 1.0).abs() < 1e-12);
}

#[test]
fn y_branch_points_are_zeros_of_the_y_discriminant() {
    for k in 1..50 {
        let z = 0.25 * k as f64 / 50.0;
        let g = KernelGeometry::new(z).unwrap();
        for y in [g.y2, g.y3] {
            // d̃(y)/y = y - 4z²(y+1)²
            let v = y - 4.0 * z * z * (y + 1.0).powi(2);
            assert!(v.abs() < 1e-12 * y.max(1.0), "z = {z}, y = {y}: {v}");
        }
    }
}

#[test]
fn ordering_is_strict_over_the_window() {
    for k in 1..200 {
        let z = 0.25 * k as f64 / 200.0;
        let g = KernelGeometry::new(z).unwrap();
        let [x1, x2, x3, x4] = g.x;
        assert!(0.0 < x1 && x1 < x2 && x2 < 1.0 && 1.0 < x3 && x3 < x4, "z = {z}: {:?}", g.x);
        assert!(0.0 < g.y2 && g.y2 < 1.0 && 1.0 < g.y3, "z = {z}");
    }
}

#[test]
fn domain_errors_name_the_interval() {
    for z in [0.0, 0.25, 0.3, -0.1, f64::NAN] {
        let e = KernelGeometry::new(z).unwrap_err();
        assert!(matches!(e, Error::Domain(_)));
        assert!(e.to_string().contains("]0,1/4["));
    }
    assert!(ModelParam::with_tol(0.1, 0.0).is_err());
    assert!(ModelParam::new(0.1).is_ok());
}

#[test]
fn kernel_at_one_one() {
    let v = kernel_eval(C64::new(1.0, 0.0), C64::new(1.0, 0.0), 0.125);
    assert!((v - C64::new(-0.5, 0.0)).norm() < 1e-15);
}

#[test]
fn branches_at_special_points() {
    let g = KernelGeometry::new(0.125).unwrap();
    let (x0, x1) = g.x_branches(C64::new(-1.0, 0.0));
    assert_eq!(x0, Ext::real(0.0));
    assert!(x1.is_infinite());
    let (a, b) = g.x_branches(C64::new(0.0, 0.0));
    assert!(a.is_infinite() && b.is_infinite());
    let (y0, y1) = g.y_branches(C64::new(0.0, 0.0));
    assert_eq!(y0, Ext::real(-1.0));
    assert!(y1.is_infinite());

    // both X-branches vanish at y = ∞ like |y|^(-1/2), and Y₀ at x = ∞
    for r in [1e2, 1e4, 1e6, 1e8] {
        let y = C64::new(r, r);
        let (a, b) = g.x_branches(y);
        let m = a.norm().max(b.norm());
        assert!(m * y.norm().sqrt() < 1.5, "{r}: {m}");
    }
    let y0 = g.y_branches(C64::new(1e6, -3e5)).0.norm();
    assert!(y0 < 1e-10, "{y0}");
}

fn off_y_cuts(g: &KernelGeometry, y: C64) -> bool {
    seg_dist(y, 0.0, g.y2) > 1e-6 && seg_dist(y, g.y3, 1e300) > 1e-6 && (y + 1.0).norm() > 1e-6
}

fn off_x_cuts(g: &KernelGeometry, x: C64) -> bool {
    let [x1, x2, x3, x4] = g.x;
    seg_dist(x, x1, x2) > 1e-6 && seg_dist(x, x3, x4) > 1e-6 && x.norm() > 1e-6
}

#[test]
fn x_branches_on_a_dense_sample() {
    let g = KernelGeometry::new(0.125).unwrap();
    let mut rng = rng(11);
    let mut n = 0;
    while n < 1000 {
        let y = in_disc(&mut rng, 10.0);
        if !off_y_cuts(&g, y) {
            continue;
        }
        n += 1;
        let (a, b) = g.x_branches(y);
        let (a, b) = (a.unwrap(), b.unwrap());
        assert!(a.norm() <= b.norm(), "y = {y}");
        let scale = 1.0 + y.norm().powi(2) * (1.0 + b.norm().powi(2));
        assert!(kernel_eval(a, y, g.z).norm() < 1e-10 * scale, "y = {y}");
        assert!(kernel_eval(b, y, g.z).norm() < 1e-10 * scale, "y = {y}");
        let vieta = g.c_tilde(y) / g.a_tilde(y);
        assert!((a * b - vieta).norm() < 1e-12 * vieta.norm(), "y = {y}");
    }
}

#[test]
fn y_branches_on_a_dense_sample() {
    let g = KernelGeometry::new(0.125).unwrap();
    let mut rng = rng(12);
    let mut n = 0;
    while n < 1000 {
        let x = in_disc(&mut rng, 12.0);
        if !off_x_cuts(&g, x) {
            continue;
        }
        n += 1;
        let (a, b) = g.y_branches(x);
        let (a, b) = (a.unwrap(), b.unwrap());
        assert!(a.norm() <= b.norm(), "x = {x}");
        assert!((a * b - 1.0 / (x * x)).norm() < 1e-12 / x.norm_sqr(), "x = {x}");
        let scale = 1.0 + x.norm().powi(2) * (1.0 + b.norm().powi(2));
        assert!(kernel_eval(x, a, g.z).norm() < 1e-10 * scale, "x = {x}");
    }
}

#[test]
fn cut_values_on_the_y_cut() {
    let g = KernelGeometry::new(0.125).unwrap();
    let mid = 0.5 * g.y2;
    let up = g.cut_values_x(mid, Side::Upper).unwrap().unwrap();
    let lo = g.cut_values_x(mid, Side::Lower).unwrap().unwrap();
    assert!(up.im.abs() > 1e-3);
    assert!((up - lo.conj()).norm() < 1e-14 * up.norm());
    // the branch Y₀ maps the boundary value back to the cut
    let y = g.y_branches(up).0.unwrap();
    assert!((y - mid).norm() < 1e-10, "{y}");

    let at_end = g.cut_values_x(g.y2, Side::Upper).unwrap().unwrap();
    let double = -g.b_tilde(C64::new(g.y2, 0.0)) / (2.0 * g.a_tilde(C64::new(g.y2, 0.0)));
    assert_eq!(at_end.im, 0.0);
    assert!((at_end - double).norm() < 1e-14);

    assert!(g.cut_values_x(0.0, Side::Upper).unwrap().is_infinite());
    assert!(g.cut_values_x(0.5 * (g.y2 + g.y3), Side::Upper).is_err());
    assert!(g.cut_values_x(-0.5, Side::Lower).is_err());
}

#[test]
fn cut_values_on_the_x_cut() {
    let g = KernelGeometry::new(0.125).unwrap();
    let [x1, x2, x3, _] = g.x;
    let mid = 0.5 * (x1 + x2);
    let up = g.cut_values_y(mid, Side::Upper).unwrap();
    let lo = g.cut_values_y(mid, Side::Lower).unwrap();
    assert!(up.im.abs() > 1e-3);
    assert!((up - lo.conj()).norm() < 1e-14 * up.norm());

    // brute-force pairing: `mid` must be a root of L(·, Y₀⁺) and the smaller one
    let (a, b, c) = (g.a_tilde(up), g.b_tilde(up), g.c_tilde(up));
    let disc = (b * b - 4.0 * a * c).sqrt();
    let roots = [(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)];
    let hit = roots.iter().map(|r| (r - mid).norm()).fold(f64::INFINITY, f64::min);
    assert!(hit < 1e-10, "{roots:?}");
    let x0 = g.x_branches(up).0.unwrap();
    assert!((x0 - mid).norm() < 1e-10, "{x0}");

    let at_end = g.cut_values_y(x1, Side::Lower).unwrap();
    let double = -g.b(C64::new(x1, 0.0)) / (2.0 * g.a(C64::new(x1, 0.0)));
    assert!((at_end - double).norm() < 1e-14);
    assert!(g.cut_values_y(0.5 * (x2 + x3), Side::Upper).is_err());
}

#[test]
fn cut_values_match_one_sided_limits() {
    let g = KernelGeometry::new(0.1).unwrap();
    let eps = 1e-9;
    for k in 1..10 {
        let y = g.y2 * k as f64 / 10.0;
        let above = g.x_branches(C64::new(y, eps)).0.unwrap();
        let below = g.x_branches(C64::new(y, -eps)).0.unwrap();
        let up = g.cut_values_x(y, Side::Upper).unwrap().unwrap();
        let lo = g.cut_values_x(y, Side::Lower).unwrap().unwrap();
        assert!((above - up).norm() < 1e-6 * up.norm(), "y = {y}");
        assert!((below - lo).norm() < 1e-6 * lo.norm(), "y = {y}");
    }
}

#[test]
fn curves_have_the_expected_shape() {
    let g = KernelGeometry::new(0.125).unwrap();
    let [x1, x2, x3, _] = g.x;
    for n in [2, 100] {
        for which in [Curve::X, Curve::Y] {
            let pts = g.curve_points(which, n).unwrap();
            assert_eq!(pts.len(), 2 * n);
            // the lower half is the mirror image of the upper half
            for k in 0..n {
                let (a, b) = (pts[k], pts[2 * n - 1 - k]);
                assert_eq!(a.param, b.param);
                assert_eq!((a.side, b.side), (Side::Upper, Side::Lower));
                match (a.point, b.point) {
                    (Ext::Finite(p), Ext::Finite(q)) => assert!((p - q.conj()).norm() < 1e-13 * p.norm().max(1.0)),
                    (Ext::Infinity, Ext::Infinity) => {}
                    _ => panic!("mismatched infinity at {k}"),
                }
            }
        }
    }

    let y = g.curve_points(Curve::Y, 100).unwrap();
    let first = y[0].point.unwrap();
    let last = y[y.len() - 1].point.unwrap();
    assert!((first - last).norm() < 1e-12);
    assert!(y.iter().any(|p| p.point.norm() > 1.0));

    let x = g.curve_points(Curve::X, 100).unwrap();
    assert!(x.iter().any(|p| p.point.is_infinite()));
    // one real crossing, at y₂, between x₂ and x₃
    let crossing = g.cut_values_x(g.y2, Side::Upper).unwrap().unwrap().re;
    assert!(x2 < crossing && crossing < x3);
    let finite: Vec<C64> = x.iter().filter_map(|p| p.point.finite()).collect();
    for p in [x1, x2, 0.5 * (x1 + x2)] {
        let crossings = finite
            .windows(2)
            .filter(|s| (s[0].im > 0.0) != (s[1].im > 0.0))
            .filter(|s| s[0].re + (0.0 - s[0].im) * (s[1].re - s[0].re) / (s[1].im - s[0].im) > p)
            .count();
        assert_eq!(crossings % 2, 1, "{p} is not enclosed");
    }
    assert!(g.curve_points(Curve::X, 1).is_err());
}

#[test]
fn curve_csv_layout() {
    let g = KernelGeometry::new(0.125).unwrap();
    let pts = g.curve_points(Curve::X, 3).unwrap();
    let mut buf = Vec::new();
    write_curve_csv(&pts, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re,im,side,param");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("inf,inf,upper,"));
    assert!(lines.iter().any(|l| l.contains(",lower,")));
    let mut again = Vec::new();
    write_curve_csv(&g.curve_points(Curve::X, 3).unwrap(), &mut again).unwrap();
    assert_eq!(text.as_bytes(), &again[..]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coefficient_decompositions_agree(
        z in 0.001f64..0.2499,
        xr in -5.0f64..5.0, xi in -5.0f64..5.0,
        yr in -5.0f64..5.0, yi in -5.0f64..5.0,
    ) {
        let g = KernelGeometry::new(z).unwrap();
        let (x, y) = (C64::new(xr, xi), C64::new(yr, yi));
        let l = kernel_eval(x, y, z);
        let by_y = g.a(x) * y * y + g.b(x) * y + g.c();
        let by_x = g.a_tilde(y) * x * x + g.b_tilde(y) * x + g.c_tilde(y);
        let scale = 1.0 + x.norm_sqr() * (y.norm_sqr() + y.norm()) + x.norm() * y.norm() + y.norm();
        prop_assert!((l - by_y).norm() < 1e-13 * scale);
        prop_assert!((l - by_x).norm() < 1e-13 * scale);
    }

    #[test]
    fn discriminants_factor(z in 0.001f64..0.2499, r in -12.0f64..12.0, i in -12.0f64..12.0) {
        let g = KernelGeometry::new(z).unwrap();
        let p = C64::new(r, i);
        let [x1, x2, x3, x4] = g.x;
        let ours = z * z * (p - x1) * (p - x2) * (p - x3) * (p - x4);
        let scale = z * z * (p.norm() + x4).powi(4);
        prop_assert!((g.d(p) - ours).norm() < 1e-12 * scale);
        prop_assert!((g.d(p) - g.d_factored(p)).norm() < 1e-12 * scale);
        let y = p / 2.0;
        let yscale = y.norm() * (1.0 + 4.0 * z * z * (y.norm() + g.y3).powi(2)) + y.norm_sqr();
        prop_assert!((g.d_tilde(y) - g.d_tilde_factored(y)).norm() < 1e-12 * yscale);
    }

    #[test]
    fn products_of_branch_points(z in 1e-4f64..0.2499) {
        let g = KernelGeometry::new(z).unwrap();
        prop_assert!((g.x[0] * g.x[3] - 1.0).abs() < 1e-12);
        prop_assert!((g.x[1] * g.x[2] - 1.0).abs() < 1e-12);
        prop_assert!((g.y2 * g.y3 - 1.0).abs() < 1e-12);
    }
}
