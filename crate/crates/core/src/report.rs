//! Result rows and their text and JSON renderings.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub id: String,
    pub status: Status,
    pub defect: Option<f64>,
    /// A serialized counterexample bundle for failing checks.
    pub witness: Option<Value>,
    pub detail: String,
}

impl Row {
    pub fn new(id: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Row {
            id: id.into(),
            status,
            defect: None,
            witness: None,
            detail: detail.into(),
        }
    }

    pub fn check(id: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(id, Status::from_bool(ok), detail)
    }

    pub fn with_defect(mut self, d: f64) -> Self {
        self.defect = Some(d);
        self
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub data: Value,
    pub rows: Vec<Row>,
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_value),
        Value::Object(m) => m.values_mut().for_each(round_value),
        _ => {}
    }
}

/// 12 significant digits, in scientific notation for very small or large
/// magnitudes.
pub fn number_text(x: f64) -> String {
    let r = round_sig(x);
    let m = r.abs();
    if m != 0.0 && m.is_finite() && !(1e-4..1e12).contains(&m) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => number_text(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// `[re, im]` pairs, as produced for complex vectors.
fn as_complex(v: &Value) -> Option<(f64, f64)> {
    match v.as_array()?.as_slice() {
        [x, y] => Some((x.as_f64()?, y.as_f64()?)),
        _ => None,
    }
}

fn complex_text(re: f64, im: f64) -> String {
    let (r, i) = (number_text(re), number_text(im.abs()));
    match (round_sig(re) == 0.0, round_sig(im) == 0.0) {
        (_, true) => r,
        (true, false) if im < 0.0 => format!("-{i}i"),
        (true, false) => format!("{i}i"),
        (false, false) if im < 0.0 => format!("{r}-{i}i"),
        (false, false) => format!("{r}+{i}i"),
    }
}

fn flatten_into(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_into(&key, x, out);
            }
        }
        Value::Array(xs) if !xs.is_empty() && xs.iter().all(|x| as_complex(x).is_some()) => {
            let items: Vec<String> = xs
                .iter()
                .filter_map(as_complex)
                .map(|(r, i)| complex_text(r, i))
                .collect();
            out.push((prefix.into(), format!("[{}]", items.join(", "))));
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten_into(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(scalar_text).collect();
            out.push((prefix.into(), format!("[{}]", items.join(", "))));
        }
        other => out.push((prefix.into(), scalar_text(other))),
    }
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            data: Value::Object(Map::new()),
            rows: Vec::new(),
        }
    }

    pub fn with_data(mut self, data: Value) -> Self {
        self.data = data;
        self
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn has_failure(&self) -> bool {
        self.rows.iter().any(|r| r.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.has_failure())
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("plain data serializes");
        round_value(&mut v);
        serde_json::to_string_pretty(&v).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        let mut kv = Vec::new();
        flatten_into("", &self.data, &mut kv);
        let width = kv.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in kv {
            out.push_str(&format!("  {k:<width$}  {v}\n"));
        }
        if !self.rows.is_empty() {
            let idw = self.rows.iter().map(|r| r.id.len()).max().unwrap_or(0).max(2);
            out.push_str(&format!("  {:<6} {:<idw$}  {:<18}  detail\n", "status", "id", "defect"));
            for r in &self.rows {
                let defect = r.defect.map_or("-".to_string(), number_text);
                out.push_str(&format!(
                    "  {:<6} {:<idw$}  {:<18}  {}\n",
                    r.status.as_str(),
                    r.id,
                    defect,
                    r.detail
                ));
                if let Some(w) = &r.witness {
                    out.push_str(&format!("         witness: {w}\n"));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_report_is_valid_json() {
        let r = Report::new("none");
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["rows"], json!([]));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn failing_row_carries_witness() {
        let mut r = Report::new("x");
        r.push(Row::check("p", false, "broken").with_witness(json!({"name": "w"})).with_defect(0.5));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["rows"][0]["status"], "fail");
        assert_eq!(v["rows"][0]["witness"]["name"], "w");
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_text().contains("witness"));
    }

    #[test]
    fn complex_vectors_render_inline() {
        let r = Report::new("x").with_data(json!({"phi": [[1.0, 0.0], [0.5, -2.0], [0.0, 1.0]]}));
        assert!(r.to_text().contains("[1, 0.5-2i, 1i]"), "{}", r.to_text());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(2.0 / 3.0 * 1e-9), 6.66666666667e-10);
        let r = Report::new("x").with_data(json!({"v": 1.0 / 3.0, "n": 1}));
        assert!(r.to_json().contains("0.333333333333,") || r.to_json().contains("0.333333333333\n"));
        assert!(r.to_text().contains("0.333333333333"));
        assert_eq!(number_text(1.0 / 9.0 * 1e-15), "1.11111111111e-16");
        assert_eq!(number_text(0.0), "0");
        assert_eq!(number_text(2.5), "2.5");
    }
}
