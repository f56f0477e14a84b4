use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::summary::RunSummary;
use crate::Result;

/// Top-level summary keys that legitimately differ between identical runs.
const IGNORED: &[&str] = &["timing"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffRow {
    /// Dotted path into the summary, e.g. `stages.2.energy`.
    pub key: String,
    pub a: Option<String>,
    pub b: Option<String>,
    /// `(b − a) / |a|` when both sides are numbers.
    pub relative: Option<f64>,
}

/// Leaves of the two summaries that differ, in key order. Each argument is a
/// run directory or a summary file.
pub fn compare(dir_a: &Path, dir_b: &Path) -> Result<Vec<DiffRow>> {
    let a = RunSummary::read_value(dir_a)?;
    let b = RunSummary::read_value(dir_b)?;
    let mut la = Vec::new();
    let mut lb = Vec::new();
    flatten("", &a, &mut la);
    flatten("", &b, &mut lb);
    let fa: std::collections::BTreeMap<_, _> = la.into_iter().collect();
    let fb: std::collections::BTreeMap<_, _> = lb.into_iter().collect();
    let mut keys: Vec<&String> = fa.keys().chain(fb.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut rows = Vec::new();
    for key in keys {
        let (va, vb) = (fa.get(key), fb.get(key));
        if va == vb {
            continue;
        }
        let relative = match (va.and_then(Value::as_f64), vb.and_then(Value::as_f64)) {
            (Some(x), Some(y)) if x != 0.0 => Some((y - x) / x.abs()),
            _ => None,
        };
        rows.push(DiffRow {
            key: key.clone(),
            a: va.map(render),
            b: vb.map(render),
            relative,
        });
    }
    Ok(rows)
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                if prefix.is_empty() && IGNORED.contains(&k.as_str()) {
                    continue;
                }
                flatten(&join(k), child, out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), child, out);
            }
        }
        leaf => out.push((prefix.to_string(), leaf.clone())),
    }
}

/// Fixed-width table of the rows, or a single line when there is no difference.
pub fn format_diff(rows: &[DiffRow]) -> String {
    if rows.is_empty() {
        return "no differences\n".into();
    }
    let w = rows.iter().map(|r| r.key.len()).max().unwrap_or(3).max(3);
    let mut s = format!("{:<w$}  {:>24}  {:>24}  {:>10}\n", "key", "a", "b", "rel");
    for r in rows {
        let rel = r.relative.map(|x| format!("{x:+.3e}")).unwrap_or_default();
        s.push_str(&format!(
            "{:<w$}  {:>24}  {:>24}  {:>10}\n",
            r.key,
            r.a.as_deref().unwrap_or("-"),
            r.b.as_deref().unwrap_or("-"),
            rel
        ));
    }
    s
}
