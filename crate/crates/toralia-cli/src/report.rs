//! Report values and their two renderings. Keys are sorted (serde_json's
//! default map), floats go through `ryu`, so equal input gives equal bytes.

use serde_json::{json, Map, Value};
use toralia::numeric::{C64, M2};

pub fn cx(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn m2(m: &M2) -> Value {
    json!([[cx(m[(0, 0)]), cx(m[(0, 1)])], [cx(m[(1, 0)]), cx(m[(1, 1)])]])
}

pub fn dmat(m: &nalgebra::DMatrix<C64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|k| cx(m[(i, k)])).collect())).collect())
}

/// One suite line.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    /// `true`: pass when `value < limit`; `false`: pass when `value > limit`
    /// (negative controls).
    pub upper: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, upper: true }
    }

    pub fn above(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, upper: false }
    }

    pub fn passed(&self) -> bool {
        self.value.is_finite() && if self.upper { self.value < self.limit } else { self.value > self.limit }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "value": self.value,
            "limit": self.limit,
            "bound": if self.upper { "upper" } else { "lower" },
            "passed": self.passed(),
        })
    }
}

pub fn checks_value(checks: &[Check]) -> Value {
    let mut m = Map::new();
    for c in checks {
        m.insert(c.name.clone(), c.to_value());
    }
    Value::Object(m)
}

pub fn render(v: &Value, as_json: bool) -> String {
    if as_json {
        let mut s = serde_json::to_string_pretty(v).expect("report serialises");
        s.push('\n');
        return s;
    }
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

/// `a.b.c = value` lines; complex pairs and matrices stay inline as JSON.
fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use toralia::numeric::c;

    #[test]
    fn text_rendering_is_flat_and_sorted() {
        let v = json!({"b": {"z": cx(c(1.0, -2.0))}, "a": "x", "l": [{"k": 1}, {"k": 2}]});
        assert_eq!(render(&v, false), "a = x\nb.z = [1.0,-2.0]\nl[0].k = 1\nl[1].k = 2\n");
    }

    #[test]
    fn checks_pass_in_their_direction() {
        assert!(Check::below("a", 1e-9, 1e-8).passed());
        assert!(!Check::below("a", 1e-9, 1e-20).passed());
        assert!(Check::above("a", 0.5, 1e-3).passed());
        assert!(!Check::above("a", f64::NAN, 1e-3).passed());
    }
}
