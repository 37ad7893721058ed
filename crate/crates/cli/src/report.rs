//! Report envelope and rendering.

use serde_json::{json, Value};

use crate::Format;

pub const SCHEMA: u32 = 1;

/// `{"schema", "command", "params", "inputs", "results"}`. Keys serialize in
/// sorted order, so equal inputs give byte-identical output.
pub fn envelope(command: &str, params: Value, inputs: Vec<Value>, results: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "params": params,
        "inputs": inputs,
        "results": results,
    })
}

fn text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text(v, &key, out);
            }
        }
        other => {
            out.push_str(prefix);
            out.push_str(": ");
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
}

pub fn emit(v: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("serializable")),
        Format::Text => {
            let mut s = String::new();
            text(&v["results"], "", &mut s);
            if let Some(t) = v.get("wall_time_ms") {
                s.push_str(&format!("wall_time_ms: {t}\n"));
            }
            print!("{s}");
        }
    }
}
