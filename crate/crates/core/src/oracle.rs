//! Exact counts `q(i, j, k)` of Gessel walks of length `k` ending at `(i, j)`.

use crate::{Error, Result, C64};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Dense triangular table of walk counts for lengths `0..=kmax`.
#[derive(Debug, Clone)]
pub struct WalkCountTable {
    kmax: usize,
    /// `counts[k][i * (k+1) + j]` for `i, j <= k`.
    counts: Vec<Vec<BigUint>>,
    floats: Vec<Vec<f64>>,
}

impl WalkCountTable {
    /// Counts by dynamic programming over the steps W, NE, E, SW.
    pub fn enumerate(kmax: usize) -> Self {
        let mut counts: Vec<Vec<BigUint>> = Vec::with_capacity(kmax + 1);
        counts.push(vec![BigUint::from(1u32)]);
        for k in 0..kmax {
            let prev = &counts[k];
            let w = k + 1;
            let nw = k + 2;
            let mut next = vec![BigUint::zero(); nw * nw];
            for i in 0..=k {
                for j in 0..=k {
                    let c = &prev[i * w + j];
                    if c.is_zero() {
                        continue;
                    }
                    // E and NE
                    next[(i + 1) * nw + j] += c;
                    next[(i + 1) * nw + j + 1] += c;
                    if i > 0 {
                        // W
                        next[(i - 1) * nw + j] += c;
                        if j > 0 {
                            // SW
                            next[(i - 1) * nw + j - 1] += c;
                        }
                    }
                }
            }
            counts.push(next);
        }
        let floats =
            counts.iter().map(|row| row.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()).collect();
        WalkCountTable { kmax, counts, floats }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// `q(i, j, k)`, zero outside the reachable triangle.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Result<BigUint> {
        if k > self.kmax {
            return Err(Error::Range { kmax: self.kmax, requested: k });
        }
        if i > k || j > k {
            return Ok(BigUint::zero());
        }
        Ok(self.counts[k][i * (k + 1) + j].clone())
    }

    /// Total number of walks of length `k`.
    pub fn total(&self, k: usize) -> Result<BigUint> {
        if k > self.kmax {
            return Err(Error::Range { kmax: self.kmax, requested: k });
        }
        Ok(self.counts[k].iter().sum())
    }

    /// Nonzero entries `(i, j, k, q)` in order of `k`, then `i`, then `j`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, &BigUint)> + '_ {
        self.counts.iter().enumerate().flat_map(|(k, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(idx, c)| (idx / (k + 1), idx % (k + 1), k, c))
        })
    }

    /// `Σ_{k ≤ K} Σ_{i,j} q(i, j, k) x^i y^j z^k` in floating point.
    pub fn truncated_series(&self, x: C64, y: C64, z: f64, kcut: usize) -> Result<C64> {
        if kcut > self.kmax {
            return Err(Error::Range { kmax: self.kmax, requested: kcut });
        }
        let xp: Vec<C64> = powers(x, kcut);
        let yp: Vec<C64> = powers(y, kcut);
        let mut total = C64::new(0.0, 0.0);
        let mut zk = 1.0;
        for k in 0..=kcut {
            let row = &self.floats[k];
            let mut layer = C64::new(0.0, 0.0);
            for i in 0..=k {
                let mut inner = C64::new(0.0, 0.0);
                for j in 0..=k {
                    let c = row[i * (k + 1) + j];
                    if c != 0.0 {
                        inner += yp[j] * c;
                    }
                }
                layer += xp[i] * inner;
            }
            total += layer * zk;
            zk *= z;
        }
        Ok(total)
    }
}

fn powers(v: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..=n {
        out.push(p);
        p *= v;
    }
    out
}

/// Bound `(4z)^{K+1} / (1-4z)` on the series remainder beyond length `K`
/// in the closed unit bidisc.
pub fn tail_bound(z: f64, kcut: usize) -> f64 {
    (4.0 * z).powi(kcut as i32 + 1) / (1.0 - 4.0 * z)
}

/// `q(0, 0, 2k) = 16^k (5/6)_k (1/2)_k / ((2)_k (5/3)_k)` in exact arithmetic.
///
/// The rising factorials reduce to
/// `4^k Π_{m<k} (6m+5)(2m+1) / Π_{m<k} (m+2)(3m+5)`.
pub fn gessel_closed_form(k: usize) -> Result<BigUint> {
    let mut num = BigUint::from(1u32) << (2 * k);
    let mut den = BigUint::from(1u32);
    for m in 0..k as u64 {
        num *= (6 * m + 5) * (2 * m + 1);
        den *= (m + 2) * (3 * m + 5);
    }
    let (q, r) = (&num / &den, &num % &den);
    if !r.is_zero() {
        return Err(Error::Consistency(format!("q(0,0,{}) is not an integer", 2 * k)));
    }
    Ok(q)
}
