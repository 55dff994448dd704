//! JSON values with every float written to 17 significant digits.

use gessel::{Ext, C64};
use serde_json::{Map, Number, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// A float as a JSON number with 17 significant digits; non-finite values
/// become the strings `"inf"`, `"-inf"` and `"nan"`.
pub fn num(v: f64) -> Value {
    if !v.is_finite() {
        let s = if v.is_nan() {
            "nan"
        } else if v > 0.0 {
            "inf"
        } else {
            "-inf"
        };
        return Value::String(s.into());
    }
    let text = format!("{v:.16e}");
    // arbitrary_precision keeps the digits exactly as written
    Value::Number(text.parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn complex(v: C64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(v.re));
    m.insert("im".into(), num(v.im));
    Value::Object(m)
}

/// A point of the Riemann sphere; infinity is the string `"infinity"`.
pub fn ext(v: Ext) -> Value {
    match v {
        Ext::Finite(c) => complex(c),
        Ext::Infinity => Value::String("infinity".into()),
    }
}

/// Starts a report object with the schema version, command and config.
pub fn report(command: &str, config: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    m.insert("command".into(), Value::from(command));
    m.insert("config".into(), config);
    m
}
