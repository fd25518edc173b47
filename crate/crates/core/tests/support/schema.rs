//! Validator for the subset of draft-07 JSON Schema used by the files in
//! `assets/schemas`: type, enum, const, required, properties,
//! additionalProperties, items, oneOf, local `$ref`, numeric and length
//! bounds.

use serde_json::Value;

pub fn validate(schema: &Value, value: &Value) -> Result<(), String> {
    check(schema, schema, value, "$")
}

fn type_ok(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.as_i64().is_some() || v.as_u64().is_some(),
        _ => false,
    }
}

fn resolve<'a>(root: &'a Value, r: &str) -> Result<&'a Value, String> {
    let ptr = r.strip_prefix('#').ok_or_else(|| format!("only local refs are supported: {r}"))?;
    root.pointer(ptr).ok_or_else(|| format!("dangling ref {r}"))
}

fn check(root: &Value, s: &Value, v: &Value, at: &str) -> Result<(), String> {
    let Some(s) = s.as_object() else { return Ok(()) };
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        return check(root, resolve(root, r)?, v, at);
    }
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => type_ok(t, v),
            Value::Array(ts) => ts.iter().filter_map(Value::as_str).any(|t| type_ok(t, v)),
            _ => true,
        };
        if !ok {
            return Err(format!("{at}: expected type {t}, got {v}"));
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            return Err(format!("{at}: expected {c}, got {v}"));
        }
    }
    if let Some(e) = s.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            return Err(format!("{at}: {v} not in {}", Value::Array(e.clone())));
        }
    }
    if let Some(x) = v.as_f64() {
        if let Some(m) = s.get("minimum").and_then(Value::as_f64) {
            if x < m {
                return Err(format!("{at}: {x} < {m}"));
            }
        }
        if let Some(m) = s.get("maximum").and_then(Value::as_f64) {
            if x > m {
                return Err(format!("{at}: {x} > {m}"));
            }
        }
    }
    if let Some(t) = v.as_str() {
        let n = t.chars().count() as u64;
        if s.get("minLength").and_then(Value::as_u64).is_some_and(|m| n < m) {
            return Err(format!("{at}: string shorter than minLength"));
        }
        if s.get("maxLength").and_then(Value::as_u64).is_some_and(|m| n > m) {
            return Err(format!("{at}: string longer than maxLength"));
        }
    }
    if let Some(a) = v.as_array() {
        let n = a.len() as u64;
        if s.get("minItems").and_then(Value::as_u64).is_some_and(|m| n < m) {
            return Err(format!("{at}: fewer than minItems"));
        }
        if s.get("maxItems").and_then(Value::as_u64).is_some_and(|m| n > m) {
            return Err(format!("{at}: more than maxItems"));
        }
        if let Some(items) = s.get("items") {
            for (i, x) in a.iter().enumerate() {
                check(root, items, x, &format!("{at}[{i}]"))?;
            }
        }
    }
    if let Some(o) = v.as_object() {
        if let Some(req) = s.get("required").and_then(Value::as_array) {
            for k in req.iter().filter_map(Value::as_str) {
                if !o.contains_key(k) {
                    return Err(format!("{at}: missing required {k}"));
                }
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (k, x) in o {
            match props.and_then(|p| p.get(k)) {
                Some(ps) => check(root, ps, x, &format!("{at}.{k}"))?,
                None => match s.get("additionalProperties") {
                    Some(Value::Bool(false)) => return Err(format!("{at}: unexpected property {k}")),
                    Some(extra @ Value::Object(_)) => check(root, extra, x, &format!("{at}.{k}"))?,
                    _ => {}
                },
            }
        }
    }
    if let Some(alts) = s.get("oneOf").and_then(Value::as_array) {
        let passing = alts.iter().filter(|alt| check(root, alt, v, at).is_ok()).count();
        if passing != 1 {
            return Err(format!("{at}: {passing} oneOf branches match"));
        }
    }
    Ok(())
}

pub fn load(name: &str) -> Value {
    let path = format!("{}/../core/assets/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    serde_json::from_str(&text).expect("schema is JSON")
}

#[cfg(test)]
mod self_tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn catches_basic_violations() {
        let s = json!({
            "type": "object",
            "required": ["a"],
            "additionalProperties": false,
            "properties": { "a": { "type": "integer", "minimum": 1 }, "b": { "enum": ["x"] } }
        });
        assert!(validate(&s, &json!({"a": 2})).is_ok());
        assert!(validate(&s, &json!({"a": 0})).is_err());
        assert!(validate(&s, &json!({})).is_err());
        assert!(validate(&s, &json!({"a": 1, "c": 1})).is_err());
        assert!(validate(&s, &json!({"a": 1, "b": "y"})).is_err());
        assert!(validate(&s, &json!({"a": 1.5})).is_err());
    }
}
