mod common;

use common::*;
use gessel::gfeval::{segment_distance, GfContext, QuadratureSpec};
use gessel::kernel::{kernel_eval, kernel_scale};
use gessel::oracle::{tail_bound, WalkCountTable};
use gessel::{Error, C64};
use proptest::prelude::*;
use std::sync::OnceLock;

const KMAX: usize = 160;

fn table() -> &'static WalkCountTable {
    static T: OnceLock<WalkCountTable> = OnceLock::new();
    T.get_or_init(|| WalkCountTable::enumerate(KMAX))
}

fn context(z: f64) -> GfContext {
    GfContext::new(z, QuadratureSpec::default()).unwrap()
}

fn shared(z: f64) -> &'static GfContext {
    static A: OnceLock<GfContext> = OnceLock::new();
    static B: OnceLock<GfContext> = OnceLock::new();
    match z {
        0.05 => A.get_or_init(|| context(0.05)),
        0.1 => B.get_or_init(|| context(0.1)),
        _ => panic!("no shared context for z = {z}"),
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Series value with the number of terms chosen so that the tail is below 1e-20.
fn series(x: C64, y: C64, z: f64) -> C64 {
    let kcut = (1..=KMAX).find(|&k| tail_bound(z, k) < 1e-20).expect("z too large for the table");
    table().truncated_series(x, y, z, kcut).unwrap()
}

#[test]
fn x_integral_matches_the_series() {
    for (x, z) in [(c(0.3, 0.0), 0.05), (c(-0.5, 0.0), 0.1), (c(0.4, 0.5), 0.1), (c(-0.2, -0.9), 0.05)] {
        let got = shared(z).q_x_shifted(x).unwrap();
        let zero = c(0.0, 0.0);
        let want = z * (series(x, zero, z) - series(zero, zero, z));
        assert!((got.value - want).norm() < 1e-12, "x = {x}, z = {z}: {} vs {want}", got.value);
        assert!(got.est_error < 1e-10);
    }
}

#[test]
fn y_integral_matches_the_series() {
    for (y, z) in [(c(0.4, 0.0), 0.05), (c(-0.6, 0.3), 0.1), (c(0.0, 1.0), 0.05)] {
        let got = shared(z).q_y_shifted(y).unwrap();
        let zero = c(0.0, 0.0);
        let want = z * ((y + 1.0) * series(zero, y, z) - series(zero, zero, z));
        assert!((got.value - want).norm() < 1e-12, "y = {y}, z = {z}: {} vs {want}", got.value);
    }
}

#[test]
fn y_integral_at_minus_one_is_minus_z_q00() {
    for z in [0.05, 0.1] {
        let g = shared(z);
        let v = g.q_y_shifted(c(-1.0, 0.0)).unwrap().value;
        let q00 = g.q_00().unwrap().value;
        assert!((v + z * q00).norm() < 1e-13, "z = {z}");
    }
}

#[test]
fn q00_matches_the_series() {
    for z in [0.05, 0.1, 0.2] {
        let g = context(z);
        let got = g.q_00().unwrap();
        let kcut = if z == 0.2 { KMAX } else { 100 };
        let zero = c(0.0, 0.0);
        let want = table().truncated_series(zero, zero, z, kcut).unwrap();
        let tol = 1e-12 + tail_bound(z, kcut);
        assert!((got.value - want).norm() < tol, "z = {z}: {} vs {want}", got.value);
        assert_eq!(got.value.im, 0.0);
    }
}

#[test]
fn kernel_point_identity() {
    for z in [0.05, 0.2] {
        let r = context(z).kernel_point_residual().unwrap();
        assert!(r < 1e-13, "z = {z}: {r}");
    }
}

#[test]
fn full_series_at_sample_points() {
    let g = shared(0.05);
    let got = g.q_full(c(0.5, 0.0), c(0.5, 0.0)).unwrap().value;
    let want = table().truncated_series(c(0.5, 0.0), c(0.5, 0.0), 0.05, 40).unwrap();
    assert!((got - want).norm() < 1e-12 + tail_bound(0.05, 40), "{got} vs {want}");

    let g = shared(0.1);
    let got = g.q_full(c(1.0, 0.0), c(1.0, 0.0)).unwrap().value;
    let want = table().truncated_series(c(1.0, 0.0), c(1.0, 0.0), 0.1, 120).unwrap();
    assert!((got - want).norm() < 1e-11, "{got} vs {want}");

    let origin = g.q_full(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
    assert_eq!(origin, g.q_00().unwrap());
}

#[test]
fn continuation_beyond_the_unit_disc() {
    let g = shared(0.1);
    for y in [c(0.7, 0.2), c(-1.0, 0.0), c(1.5, 0.8), c(-2.5, -0.4)] {
        let r = g.continuation_residual_y(y).unwrap();
        assert!(r < 1e-11, "y = {y}: {r}");
    }
    for x in [c(2.0, 0.0), c(-3.0, 1.0), c(0.2, -1.4)] {
        let r = g.continuation_residual_x(x).unwrap();
        assert!(r < 1e-11, "x = {x}: {r}");
    }
}

#[test]
fn boundary_and_gluing_on_the_x_curve() {
    let g = shared(0.1);
    let y2 = g.ctx.geom.y2;
    for k in 1..10 {
        let y = y2 * k as f64 / 10.0;
        assert!(g.boundary_residual(y).unwrap() < 1e-12, "y = {y}");
        assert!(g.gluing_residual(y).unwrap() < 1e-10, "y = {y}");
    }
}

#[test]
fn q00_is_positive_and_increasing() {
    let mut last = 1.0;
    for k in 1..=12 {
        let z = 0.02 * k as f64;
        let v = context(z).q_00().unwrap().value;
        assert_eq!(v.im, 0.0);
        assert!(v.re > last, "z = {z}: {} after {last}", v.re);
        last = v.re;
    }
}

#[test]
fn conjugation_equivariance() {
    let g = shared(0.1);
    let mut rng = rng(41);
    for _ in 0..10 {
        let x = in_disc(&mut rng, 1.0);
        let y = in_disc(&mut rng, 1.0);
        let (Ok(a), Ok(b)) = (g.q_full(x, y), g.q_full(x.conj(), y.conj())) else {
            continue;
        };
        assert!((a.value - b.value.conj()).norm() < 1e-12 * (1.0 + a.value.norm()), "({x}, {y})");
    }
}

#[test]
fn refusals() {
    let g = shared(0.1);
    assert!(matches!(g.q_full(c(0.0, 0.0), c(-1.0, 0.0)), Err(Error::KernelZero { .. })));
    assert!(matches!(g.q_full(c(1.2, 0.0), c(0.0, 0.0)), Err(Error::Argument(_))));
    let [x1, x2, x3, x4] = g.ctx.geom.x;
    assert!(g.q_x_shifted(c(0.5 * (x1 + x2), 0.0)).is_err());
    assert!(g.q_x_shifted(c(0.5 * (x3 + x4), 0.0)).is_err());
    assert!(g.q_y_shifted(c(0.5 * g.ctx.geom.y2, 0.0)).is_err());
    assert!(g.q_y_shifted(c(g.ctx.geom.y3 + 1.0, 0.0)).is_err());
    // just off the segment is fine
    assert!(g.q_x_shifted(c(0.5 * (x1 + x2), 1e-3)).is_ok());

    let msg = GfContext::new(0.3, QuadratureSpec::default()).unwrap_err().to_string();
    assert!(msg.contains("]0,1/4["), "{msg}");
    assert!(GfContext::new(0.0, QuadratureSpec::default()).is_err());
    let small = QuadratureSpec { node_count: 4, ..QuadratureSpec::default() };
    assert!(GfContext::new(0.1, small).is_err());
    let bad_tol = QuadratureSpec { target_rel_err: 0.0, ..QuadratureSpec::default() };
    assert!(GfContext::new(0.1, bad_tol).is_err());
}

#[test]
fn nodes_used_is_a_level_of_the_doubling_driver() {
    let spec = QuadratureSpec { node_count: 16, max_doublings: 6, target_rel_err: 1e-12 };
    let g = GfContext::new(0.1, spec).unwrap();
    let v = g.q_full(c(0.3, 0.1), c(-0.2, 0.4)).unwrap();
    assert!(spec.levels().any(|n| n == v.nodes_used), "{}", v.nodes_used);
    assert!(v.nodes_used <= 16 << 6);
    // too few doublings to reach the tolerance
    let tight = QuadratureSpec { node_count: 8, max_doublings: 0, target_rel_err: 1e-15 };
    assert!(matches!(GfContext::new(0.2, tight).unwrap().q_00(), Err(Error::Quadrature { .. })));
}

#[test]
fn shared_between_threads() {
    let g = shared(0.05);
    let want = g.q_full(c(0.2, 0.3), c(0.1, -0.4)).unwrap();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..4).map(|_| s.spawn(|| g.q_full(c(0.2, 0.3), c(0.1, -0.4)).unwrap())).collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), want);
        }
    });
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn full_value_matches_the_series(
        xr in 0.0f64..1.0, xa in 0.0f64..std::f64::consts::TAU,
        yr in 0.0f64..1.0, ya in 0.0f64..std::f64::consts::TAU,
    ) {
        let z = 0.05;
        let g = shared(z);
        let (x, y) = (C64::from_polar(xr, xa), C64::from_polar(yr, ya));
        let [x1, x2, _, _] = g.ctx.geom.x;
        prop_assume!(segment_distance(x, x1, x2) > 1e-3);
        prop_assume!(segment_distance(y, 0.0, g.ctx.geom.y2) > 1e-3);
        let l = kernel_eval(x, y, z);
        prop_assume!(l.norm() > 1e-2 * kernel_scale(x, y, z));
        let got = g.q_full(x, y).unwrap().value;
        let want = series(x, y, z);
        prop_assert!((got - want).norm() < 1e-10, "({}, {}): {} vs {}", x, y, got, want);
    }
}
