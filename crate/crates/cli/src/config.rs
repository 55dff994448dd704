//! Run configuration: defaults, then a `key = value` file, then flags.
//!
//! Recognized keys: `z`, `nodes`, `max_doublings`, `target_rel_err`, `tol`,
//! `tol.<check>` (per-check tolerance for `verify`), `format` (`json` or
//! `csv`) and `crosscheck` (`true` or `false`). Blank lines and lines
//! starting with `#` are ignored.

use crate::error::CliError;
use crate::json::num;
use gessel::gfeval::QuadratureSpec;
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?}, expected json or csv")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub z: Option<f64>,
    pub quadrature: QuadratureSpec,
    /// Default identity tolerance.
    pub tol: f64,
    /// Per-check overrides of `tol`.
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    pub crosscheck: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            z: None,
            quadrature: QuadratureSpec { node_count: 64, max_doublings: 6, ..QuadratureSpec::default() },
            tol: 1e-7,
            tolerances: BTreeMap::new(),
            format: Format::Json,
            crosscheck: true,
        }
    }
}

/// Flag values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub z: Option<f64>,
    pub nodes: Option<usize>,
    pub max_doublings: Option<u32>,
    pub target_rel_err: Option<f64>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub crosscheck: Option<bool>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = path {
            let text =
                std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
            cfg.apply_file(path, &text)?;
        }
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path, text: &str) -> Result<(), CliError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| CliError::Config { path: path.to_path_buf(), line: idx + 1, msg };
            let (key, value) =
                line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
                value.parse().map_err(|_| format!("bad value {value:?} for {key}"))
            }
            let res = match key {
                "z" => parse(key, value).map(|v| self.z = Some(v)),
                "nodes" => parse(key, value).map(|v| self.quadrature.node_count = v),
                "max_doublings" => parse(key, value).map(|v| self.quadrature.max_doublings = v),
                "target_rel_err" => parse(key, value).map(|v| self.quadrature.target_rel_err = v),
                "tol" => parse(key, value).map(|v| self.tol = v),
                "format" => value.parse().map(|v| self.format = v),
                "crosscheck" => parse(key, value).map(|v| self.crosscheck = v),
                _ => match key.strip_prefix("tol.") {
                    Some(name) if !name.is_empty() => parse(key, value).map(|v| {
                        self.tolerances.insert(name.to_string(), v);
                    }),
                    _ => Err(format!("unknown key {key:?}")),
                },
            };
            res.map_err(err)?;
        }
        Ok(())
    }

    fn apply(&mut self, f: &Overrides) {
        if let Some(z) = f.z {
            self.z = Some(z);
        }
        if let Some(n) = f.nodes {
            self.quadrature.node_count = n;
        }
        if let Some(d) = f.max_doublings {
            self.quadrature.max_doublings = d;
        }
        if let Some(t) = f.target_rel_err {
            self.quadrature.target_rel_err = t;
        }
        if let Some(t) = f.tol {
            // a flag sets every tolerance
            self.tol = t;
            self.tolerances.clear();
        }
        if let Some(fmt) = f.format {
            self.format = fmt;
        }
        if let Some(c) = f.crosscheck {
            self.crosscheck = c;
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        self.quadrature.validate()?;
        // zero is allowed: it makes every check fail, which exercises reporting
        for (name, &t) in
            std::iter::once(("tol", &self.tol)).chain(self.tolerances.iter().map(|(k, v)| (k.as_str(), v)))
        {
            if !(t >= 0.0) {
                return Err(CliError::Usage(format!("tolerance {name} = {t} must be non-negative")));
            }
        }
        Ok(())
    }

    /// The weight, required by every command but `coeffs`.
    pub fn z(&self) -> Result<f64, CliError> {
        let z = self.z.ok_or_else(|| CliError::Usage("--z is required (or set z in the config file)".into()))?;
        gessel::kernel::check_z(z)?;
        Ok(z)
    }

    pub fn tolerance(&self, check: &str) -> f64 {
        self.tolerances.get(check).copied().unwrap_or(self.tol)
    }

    /// The effective configuration echoed into every report.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("z".into(), self.z.map_or(Value::Null, num));
        m.insert("nodes".into(), Value::from(self.quadrature.node_count));
        m.insert("max_doublings".into(), Value::from(self.quadrature.max_doublings));
        m.insert("target_rel_err".into(), num(self.quadrature.target_rel_err));
        m.insert("tol".into(), num(self.tol));
        let tols: Map<String, Value> = self.tolerances.iter().map(|(k, &v)| (k.clone(), num(v))).collect();
        m.insert("tolerances".into(), Value::Object(tols));
        m.insert("format".into(), Value::from(self.format.name()));
        m.insert("crosscheck".into(), Value::from(self.crosscheck));
        Value::Object(m)
    }
}
