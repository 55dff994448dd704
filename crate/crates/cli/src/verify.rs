//! The identity suite behind `verify`, and the invariants `constants`
//! re-checks before it reports.

use crate::config::RunConfig;
use crate::error::CliError;
use crate::json::num;
use gessel::cgf::{CgfEvaluator, Which};
use gessel::elliptic::{cubic_discriminant, EllipticContext};
use gessel::gfeval::{segment_distance, GfContext};
use gessel::oracle::{gessel_closed_form, tail_bound, WalkCountTable};
use gessel::{Ext, C64};
use serde_json::{Map, Value};
use std::f64::consts::TAU;
use std::sync::Arc;

/// Longest walk the series check enumerates.
const SERIES_KMAX: usize = 150;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: Option<String>,
}

impl Check {
    /// Strict, so a zero tolerance fails every check.
    pub fn pass(&self) -> bool {
        self.residual < self.tolerance
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::from(self.name));
        m.insert("residual".into(), num(self.residual));
        m.insert("tolerance".into(), num(self.tolerance));
        m.insert("pass".into(), Value::from(self.pass()));
        if let Some(d) = &self.detail {
            m.insert("detail".into(), Value::from(d.as_str()));
        }
        Value::Object(m)
    }
}

struct Suite<'a> {
    cfg: &'a RunConfig,
    checks: Vec<Check>,
}

impl Suite<'_> {
    fn add(&mut self, name: &'static str, residual: f64) {
        self.add_with(name, residual, None);
    }

    fn add_with(&mut self, name: &'static str, residual: f64, detail: Option<String>) {
        // NaN must not pass
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        self.checks.push(Check { name, residual, tolerance: self.cfg.tolerance(name), detail });
    }
}

/// Invariants of the branch points, periods and cubic constants.
pub fn constant_checks(ctx: &EllipticContext, cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite { cfg, checks: Vec::new() };
    let g = &ctx.geom;
    let [x1, x2, x3, x4] = g.x;
    s.add("branch_point_products", (x1 * x4 - 1.0).abs().max((x2 * x3 - 1.0).abs()).max((g.y2 * g.y3 - 1.0).abs()));
    let mut disc = 0.0f64;
    for k in 0..16 {
        let x = C64::from_polar(0.3 + 0.4 * k as f64, 0.7 * k as f64);
        disc = disc.max((g.d(x) - g.d_factored(x)).norm() / (1.0 + g.d(x).norm()));
    }
    s.add("discriminant_factorization", disc);
    s.add("period_ratio", (ctx.periods.omega3 / ctx.periods.omega2 - 0.75).abs());
    let c = &ctx.consts;
    s.add("k_quartic", c.quartic(c.K).abs() / c.G2.powi(2).max(1.0));
    s.add("k_two_routes", (c.K - c.K_radical).abs());
    let z = ctx.z();
    let closed = 4f64.powi(14) / 3f64.powi(6) * z * z * (z - 0.25).powi(4) * (z + 0.25).powi(4);
    s.add("cubic_discriminant", (cubic_discriminant(z)? - closed).abs() / closed);
    let (p, dp) = ctx.wp.wp(C64::new(ctx.periods.omega2 / 4.0, 0.0));
    let quarter = match (p, dp) {
        (Ext::Finite(p), Ext::Finite(dp)) => (p - (1.0 + 4.0 * z * z) / 3.0).norm() + (dp + 8.0 * z * z).norm(),
        _ => f64::INFINITY,
    };
    s.add("wp_quarter_period", quarter);
    let third = ctx.wp13.wp_value(C64::new(ctx.omega3 / 3.0, 0.0)).finite().map_or(f64::INFINITY, |v| (v - c.K).norm());
    s.add("wp13_third_period", third);
    Ok(s.checks)
}

/// Sample points for a gluing function, kept away from its pole and cut.
fn cgf_samples(ev: &CgfEvaluator) -> Vec<C64> {
    let g = &ev.ctx.geom;
    let [_, x2, x3, x4] = g.x;
    let mut out = Vec::new();
    for r in [0.5, 1.5] {
        for k in 0..12 {
            let t = C64::from_polar(r, TAU * k as f64 / 12.0 + 0.1);
            let bad = match ev.which {
                Which::W => (t - x2).norm() < 0.02 || segment_distance(t, x3, x4) < 0.02,
                Which::WTilde => (t - x3).norm() < 0.02 || segment_distance(t, g.y3, f64::INFINITY) < 0.02,
            };
            if !bad {
                out.push(t);
            }
        }
    }
    out
}

/// Every identity check for the configured `z`.
pub fn run(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let z = cfg.z()?;
    let gf = GfContext::new(z, cfg.quadrature)?;
    let ctx: Arc<EllipticContext> = gf.ctx.clone();
    let mut checks = constant_checks(&ctx, cfg)?;
    let mut s = Suite { cfg, checks: Vec::new() };

    let (mut residual, mut cross, mut conj) = (0.0f64, 0.0f64, 0.0f64);
    for ev in [&gf.w, &gf.wt] {
        for t in cgf_samples(ev) {
            let v = ev.eval_checked(t)?;
            let w = v.value.finite().ok_or(gessel::Error::Consistency(format!("pole at sample {t}")))?;
            residual = residual.max(v.cubic_residual / (1.0 + w.norm().powi(3)));
            if let Ext::Finite(e) = ev.elliptic(Ext::Finite(t))? {
                cross = cross.max((w - e).norm());
            } else {
                cross = f64::INFINITY;
            }
            let wc = ev.eval(t.conj())?.finite().map_or(f64::INFINITY, |b| (b - w.conj()).norm());
            conj = conj.max(wc);
        }
    }
    s.add("cubic_residual", residual);
    s.add("gluing_cross_path", cross);
    s.add("conjugation", conj);

    let y2 = ctx.geom.y2;
    let (mut glue, mut bvp) = (0.0f64, 0.0f64);
    for k in 1..20 {
        let y = y2 * k as f64 / 20.0;
        glue = glue.max(gf.gluing_residual(y)?);
        bvp = bvp.max(gf.boundary_residual(y)?);
    }
    s.add("gluing_on_x_curve", glue);
    s.add("boundary_value", bvp);

    let [x1, x2, x3, x4] = ctx.geom.x;
    let mut cont_y = 0.0f64;
    for k in 0..8 {
        let y = C64::from_polar(1.2, TAU * k as f64 / 8.0 + 0.3);
        if segment_distance(y, 0.0, y2) > 1e-2 && segment_distance(y, ctx.geom.y3, f64::INFINITY) > 1e-2 {
            cont_y = cont_y.max(gf.continuation_residual_y(y)?);
        }
    }
    s.add("continuation_y", cont_y);
    let mut cont_x = 0.0f64;
    for k in 0..8 {
        let x = C64::from_polar(2.0, TAU * k as f64 / 8.0 + 0.3);
        if segment_distance(x, x1, x2) > 1e-2 && segment_distance(x, x3, x4) > 1e-2 {
            cont_x = cont_x.max(gf.continuation_residual_x(x)?);
        }
    }
    s.add("continuation_x", cont_x);
    s.add("kernel_point", gf.kernel_point_residual()?);

    let kcut = (1..=SERIES_KMAX).find(|&k| tail_bound(z, k) < 1e-12).unwrap_or(SERIES_KMAX);
    let table = WalkCountTable::enumerate(kcut.max(40));
    let zero = C64::new(0.0, 0.0);
    let series = table.truncated_series(zero, zero, z, kcut)?;
    let tail = tail_bound(z, kcut);
    let diff = (gf.q_00()?.value - series).norm();
    s.add_with(
        "q00_vs_series",
        (diff - tail).max(0.0),
        Some(format!("|Q00 - series| = {diff:.3e} with {kcut} terms, tail bound {tail:.3e}")),
    );
    let mut mismatches = 0;
    for k in 0..=20 {
        if gessel_closed_form(k)? != table.get(0, 0, 2 * k)? {
            mismatches += 1;
        }
    }
    s.add_with("diagonal_closed_form", mismatches as f64, Some("mismatches for lengths up to 40".into()));

    checks.extend(s.checks);
    Ok(checks)
}
