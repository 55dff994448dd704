use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::json::{complex, ext, num, report};
use crate::verify;
use gessel::cgf::{CgfEvaluator, Which};
use gessel::elliptic::EllipticContext;
use gessel::gfeval::GfContext;
use gessel::kernel::{write_curve_csv, Curve};
use gessel::oracle::WalkCountTable;
use gessel::{Ext, C64};
use serde_json::{Map, Value};
use std::path::Path;
use std::sync::Arc;

/// Largest `kmax` accepted by `coeffs`; the dense table grows like `kmax³`.
const COEFFS_KMAX: usize = 200;

fn emit(m: Map<String, Value>) {
    println!("{}", serde_json::to_string_pretty(&Value::Object(m)).expect("JSON values serialize"));
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn failed_checks(checks: &[verify::Check]) -> Result<(), CliError> {
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass()).map(|c| c.name.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Checks { failed, total: checks.len() })
    }
}

pub fn constants(cfg: &RunConfig) -> Result<(), CliError> {
    let ctx = EllipticContext::new(cfg.z()?)?;
    // nothing is reported unless the invariants hold
    failed_checks(&verify::constant_checks(&ctx, cfg)?)?;
    let g = &ctx.geom;
    let c = &ctx.consts;
    let mut m = report("constants", cfg.to_json());
    for (k, v) in [
        ("z", ctx.z()),
        ("x1", g.x[0]),
        ("x2", g.x[1]),
        ("x3", g.x[2]),
        ("x4", g.x[3]),
        ("y1", 0.0),
        ("y2", g.y2),
        ("y3", g.y3),
        ("omega1_im", ctx.periods.omega1.im),
        ("omega2", ctx.periods.omega2),
        ("omega3", ctx.omega3),
        ("omega3_integrated", ctx.periods.omega3),
        ("omega3_over_omega2", ctx.periods.omega3 / ctx.periods.omega2),
        ("g2", ctx.g2),
        ("g3", ctx.g3),
        ("G2", c.G2),
        ("G3", c.G3),
        ("K", c.K),
        ("K_radical", c.K_radical),
        ("g2_13", c.g2_13),
        ("g3_13", c.g3_13),
    ] {
        m.insert(k.into(), num(v));
    }
    m.insert("y4".into(), Value::from("infinity"));
    m.insert("period_nodes_used".into(), Value::from(ctx.periods.nodes_used));
    emit(m);
    Ok(())
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let checks = verify::run(cfg)?;
    let mut m = report("verify", cfg.to_json());
    m.insert("checks".into(), Value::Array(checks.iter().map(verify::Check::to_json).collect()));
    m.insert("passed".into(), Value::from(checks.iter().all(verify::Check::pass)));
    emit(m);
    failed_checks(&checks)
}

pub fn curves(cfg: &RunConfig, n: usize, out: &Path) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("curves needs n >= 2, got {n}")));
    }
    let geom = gessel::kernel::KernelGeometry::new(cfg.z()?)?;
    std::fs::create_dir_all(out).map_err(io(out))?;
    let mut files = Vec::new();
    for (curve, name) in [(Curve::X, "x_curve.csv"), (Curve::Y, "y_curve.csv")] {
        let points = geom.curve_points(curve, n)?;
        let path = out.join(name);
        let mut buf = Vec::new();
        write_curve_csv(&points, &mut buf).map_err(io(&path))?;
        std::fs::write(&path, buf).map_err(io(&path))?;
        let mut f = Map::new();
        f.insert("path".into(), Value::from(path.display().to_string()));
        f.insert("rows".into(), Value::from(points.len()));
        f.insert("infinite_rows".into(), Value::from(points.iter().filter(|p| p.point.is_infinite()).count()));
        files.push(Value::Object(f));
    }
    let mut m = report("curves", cfg.to_json());
    m.insert("n".into(), Value::from(n));
    m.insert("files".into(), Value::Array(files));
    emit(m);
    Ok(())
}

pub fn gf(cfg: &RunConfig, x: C64, y: C64) -> Result<(), CliError> {
    let z = cfg.z()?;
    let ctx = GfContext::new(z, cfg.quadrature)?;
    let v = ctx.q_full(x, y)?;
    let mut inputs = Map::new();
    inputs.insert("z".into(), num(z));
    inputs.insert("x".into(), complex(x));
    inputs.insert("y".into(), complex(y));
    let mut m = report("gf", cfg.to_json());
    m.insert("inputs".into(), Value::Object(inputs));
    m.insert("value".into(), complex(v.value));
    m.insert("est_error".into(), num(v.est_error));
    m.insert("nodes_used".into(), Value::from(v.nodes_used));
    emit(m);
    Ok(())
}

pub fn cgf(cfg: &RunConfig, which: Which, t: C64) -> Result<(), CliError> {
    let ctx = Arc::new(EllipticContext::new(cfg.z()?)?);
    let ev = CgfEvaluator::new(ctx, which)?;
    let v = ev.eval_checked(t)?;
    let mut m = report("cgf", cfg.to_json());
    m.insert(
        "which".into(),
        Value::from(match which {
            Which::W => "w",
            Which::WTilde => "wt",
        }),
    );
    m.insert("t".into(), complex(t));
    m.insert("value".into(), ext(v.value));
    m.insert("cubic_residual".into(), num(v.cubic_residual));
    let mut failed = Vec::new();
    if cfg.crosscheck {
        let e = ev.elliptic(Ext::Finite(t))?;
        let diff = match (v.value, e) {
            (Ext::Finite(a), Ext::Finite(b)) => (a - b).norm(),
            (Ext::Infinity, Ext::Infinity) => 0.0,
            _ => f64::INFINITY,
        };
        let tol = cfg.tolerance("gluing_cross_path");
        let mut c = Map::new();
        c.insert("value".into(), ext(e));
        c.insert("difference".into(), num(diff));
        c.insert("tolerance".into(), num(tol));
        c.insert("pass".into(), Value::from(diff < tol));
        m.insert("elliptic_crosscheck".into(), Value::Object(c));
        if !(diff < tol) {
            failed.push("elliptic_crosscheck".to_string());
        }
    } else {
        m.insert("elliptic_crosscheck".into(), Value::Null);
    }
    emit(m);
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Checks { failed, total: 1 })
    }
}

pub fn coeffs(cfg: &RunConfig, kmax: usize, at: Option<(usize, usize)>) -> Result<(), CliError> {
    if kmax > COEFFS_KMAX {
        return Err(CliError::Usage(format!("kmax {kmax} exceeds the limit {COEFFS_KMAX}")));
    }
    let table = WalkCountTable::enumerate(kmax);
    match (cfg.format, at) {
        (Format::Csv, Some((i, j))) => {
            println!("i,j,k,count");
            for k in 0..=kmax {
                println!("{i},{j},{k},{}", table.get(i, j, k)?);
            }
        }
        (Format::Csv, None) => {
            println!("i,j,k,count");
            for (i, j, k, c) in table.nonzero() {
                println!("{i},{j},{k},{c}");
            }
        }
        (Format::Json, Some((i, j))) => {
            let counts = (0..=kmax).map(|k| table.get(i, j, k).map(|c| Value::from(c.to_string())));
            let mut m = report("coeffs", cfg.to_json());
            m.insert("kmax".into(), Value::from(kmax));
            m.insert("i".into(), Value::from(i));
            m.insert("j".into(), Value::from(j));
            m.insert("counts".into(), Value::Array(counts.collect::<Result<_, _>>()?));
            emit(m);
        }
        (Format::Json, None) => {
            let counts = table.nonzero().map(|(i, j, k, c)| {
                let mut e = Map::new();
                e.insert("i".into(), Value::from(i));
                e.insert("j".into(), Value::from(j));
                e.insert("k".into(), Value::from(k));
                e.insert("count".into(), Value::from(c.to_string()));
                Value::Object(e)
            });
            let mut m = report("coeffs", cfg.to_json());
            m.insert("kmax".into(), Value::from(kmax));
            m.insert("counts".into(), Value::Array(counts.collect()));
            emit(m);
        }
    }
    Ok(())
}
