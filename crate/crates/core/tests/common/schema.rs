//! Validator for the JSON Schema keywords used by the shipped schemas:
//! `type`, `enum`, `properties`, `required`, `additionalProperties: false`,
//! `items`, `minItems`, `maxItems`, `minimum`, `maximum` and `oneOf`.

use serde_json::Value;

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64() || v.as_f64().is_some_and(|x| x.fract() == 0.0),
        other => panic!("unsupported type keyword {other}"),
    }
}

pub fn validate(schema: &Value, v: &Value, path: &str) -> Result<(), String> {
    let s = schema
        .as_object()
        .ok_or_else(|| format!("{path}: schema is not an object"))?;
    for key in s.keys() {
        let known = [
            "$schema",
            "title",
            "description",
            "type",
            "enum",
            "properties",
            "required",
            "additionalProperties",
            "items",
            "minItems",
            "maxItems",
            "minimum",
            "maximum",
            "oneOf",
        ];
        if !known.contains(&key.as_str()) {
            panic!("validator does not support keyword {key}");
        }
    }
    if let Some(t) = s.get("type") {
        let t = t.as_str().expect("single type name");
        if !type_matches(t, v) {
            return Err(format!("{path}: expected {t}, got {v}"));
        }
    }
    if let Some(options) = s.get("enum") {
        if !options.as_array().unwrap().contains(v) {
            return Err(format!("{path}: {v} not in {options}"));
        }
    }
    if let Some(min) = s.get("minimum").and_then(Value::as_f64) {
        if v.as_f64().is_some_and(|x| x < min) {
            return Err(format!("{path}: {v} below {min}"));
        }
    }
    if let Some(max) = s.get("maximum").and_then(Value::as_f64) {
        if v.as_f64().is_some_and(|x| x > max) {
            return Err(format!("{path}: {v} above {max}"));
        }
    }
    if let Some(obj) = v.as_object() {
        if let Some(req) = s.get("required").and_then(Value::as_array) {
            for r in req {
                let r = r.as_str().unwrap();
                if !obj.contains_key(r) {
                    return Err(format!("{path}: missing {r}"));
                }
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (k, val) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => validate(sub, val, &format!("{path}.{k}"))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected property {k}"))
                }
                None => {}
            }
        }
    }
    if let Some(arr) = v.as_array() {
        if let Some(n) = s.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < n {
                return Err(format!("{path}: fewer than {n} items"));
            }
        }
        if let Some(n) = s.get("maxItems").and_then(Value::as_u64) {
            if arr.len() as u64 > n {
                return Err(format!("{path}: more than {n} items"));
            }
        }
        if let Some(items) = s.get("items") {
            for (i, item) in arr.iter().enumerate() {
                validate(items, item, &format!("{path}[{i}]"))?;
            }
        }
    }
    if let Some(options) = s.get("oneOf").and_then(Value::as_array) {
        let hits = options
            .iter()
            .filter(|o| validate(o, v, path).is_ok())
            .count();
        if hits != 1 {
            return Err(format!("{path}: matches {hits} oneOf branches"));
        }
    }
    Ok(())
}

pub fn load(name: &str) -> Value {
    let text = std::fs::read_to_string(super::schema_path(name)).expect("schema file");
    serde_json::from_str(&text).expect("schema parses")
}

pub fn assert_valid(name: &str, text: &str) {
    let v: Value = serde_json::from_str(text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    if let Err(e) = validate(&load(name), &v, "$") {
        panic!("{name} schema violation: {e}\n{text}");
    }
}
