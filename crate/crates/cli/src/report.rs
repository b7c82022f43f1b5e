//! JSON report assembly and number rendering.

use crate::config::RunConfig;
use powser::numfmt::{digits_for_bits, sci, sci_f64};
use rug::{Complex, Float};
use serde_json::{json, Map, Value};
use std::time::Duration;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Single JSON document per command run.
pub struct ReportBundle {
    pub command: &'static str,
    pub args: Value,
    pub results: Value,
    pub error_budget: Value,
}

impl ReportBundle {
    pub fn to_json(&self, config: &RunConfig, timings: Option<Duration>) -> String {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("version".into(), json!(VERSION));
        m.insert("config".into(), config.echo());
        m.insert("args".into(), self.args.clone());
        m.insert("results".into(), self.results.clone());
        m.insert("error_budget".into(), self.error_budget.clone());
        if let Some(d) = timings {
            m.insert("timings".into(), json!({ "wall_seconds": d.as_secs_f64() }));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("json");
        s.push('\n');
        s
    }
}

/// Decimal rendering with enough digits for `bits`.
pub struct Fmt {
    digits: usize,
}

impl Fmt {
    pub fn new(bits: u32) -> Self {
        Fmt { digits: digits_for_bits(bits) }
    }

    pub fn f(&self, x: &Float) -> String {
        sci(x, self.digits)
    }

    pub fn re(&self, z: &Complex) -> String {
        self.f(z.real())
    }

    pub fn im(&self, z: &Complex) -> String {
        self.f(z.imag())
    }

    pub fn c(&self, z: &Complex) -> Value {
        json!({ "re": self.re(z), "im": self.im(z) })
    }
}

/// f64 as JSON; non-finite values become strings so the document stays valid.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(sci_f64(x))
    }
}
