//! Independent oracles and sampling helpers shared by the integration tests.
#![allow(dead_code)]

use gessel::C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Steps W, NE, E, SW.
pub const STEPS: [(i64, i64); 4] = [(-1, 0), (1, 1), (1, 0), (-1, -1)];

/// Counts of quadrant walks of length `k` by endpoint, by brute force over
/// all `4^k` step words.
pub fn exhaustive_counts(k: u32) -> HashMap<(i64, i64), u64> {
    let mut out = HashMap::new();
    for word in 0..4u64.pow(k) {
        let (mut i, mut j) = (0i64, 0i64);
        let mut w = word;
        let mut ok = true;
        for _ in 0..k {
            let (di, dj) = STEPS[(w % 4) as usize];
            w /= 4;
            i += di;
            j += dj;
            if i < 0 || j < 0 {
                ok = false;
                break;
            }
        }
        if ok {
            *out.entry((i, j)).or_insert(0) += 1;
        }
    }
    out
}

/// Uniform point of the closed disc of radius `r`.
pub fn in_disc(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    let rho = r * rng.gen::<f64>().sqrt();
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(rho, th)
}

/// Uniform point of the box `[re0, re1] × [im0, im1]`.
pub fn in_box(rng: &mut ChaCha8Rng, re: (f64, f64), im: (f64, f64)) -> C64 {
    C64::new(rng.gen_range(re.0..re.1), rng.gen_range(im.0..im.1))
}

/// Distance from `p` to the real segment `[lo, hi]`.
pub fn seg_dist(p: C64, lo: f64, hi: f64) -> f64 {
    (p - p.re.clamp(lo, hi)).norm()
}

/// Five-point central difference of `f` at `t` along the real axis.
pub fn five_point(f: impl Fn(C64) -> C64, t: C64, h: f64) -> C64 {
    (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h)
}
