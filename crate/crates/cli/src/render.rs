use anyhow::Result;
use serde_json::{Map, Value};

/// Recursively sorts object keys so equal values print identically.
pub fn canonical(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, canonical(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        other => other,
    }
}

pub fn json_text(value: &Value) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

const CELL_WIDTH: usize = 96;

fn cell(value: &Value) -> String {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    };
    if text.chars().count() > CELL_WIDTH {
        let cut: String = text.chars().take(CELL_WIDTH - 3).collect();
        format!("{cut}...")
    } else {
        text
    }
}

/// Two-column `key  value` rendering of an object; arrays of objects become
/// blocks separated by blank lines.
pub fn table_text(value: &Value) -> String {
    match value {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter().map(|(k, v)| format!("{k:<width$}  {}\n", cell(v))).collect()
        }
        Value::Array(items) => items.iter().map(table_text).collect::<Vec<_>>().join("\n"),
        other => format!("{}\n", cell(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_at_every_level() {
        let v = canonical(json!({"b": 1, "a": {"z": 0, "y": [{"d": 1, "c": 2}]}}));
        assert_eq!(v.to_string(), r#"{"a":{"y":[{"c":2,"d":1}],"z":0},"b":1}"#);
    }

    #[test]
    fn long_cells_are_cut() {
        let t = table_text(&json!({"k": "x".repeat(200)}));
        assert!(t.ends_with("...\n") && t.len() < 110);
    }
}
