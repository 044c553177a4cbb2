//! Resource and Schmidt-vector files.
//!
//! A resource file is one flat JSON object, either
//! `{"name": …, "p": [...], "q": [...]}` or
//! `{"name": …, "energies": [...], "beta": …, "population": [...]}`.
//! A Schmidt file is `{"name": …, "schmidt": [...]}`.

use std::path::Path;

use relmaj::entangle::SchmidtVector;
use relmaj::thermo::{gibbs, Resource};
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("cannot read {file}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
}

fn field(path: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Field { path: path.into(), message: message.into() }
}

fn object(document: &str) -> Result<Map<String, Value>, ParseError> {
    match serde_json::from_str::<Value>(document) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(field("$", "expected a JSON object")),
        Err(e) => Err(field("$", format!("malformed JSON: {e}"))),
    }
}

fn numbers(m: &Map<String, Value>, key: &str) -> Result<Vec<f64>, ParseError> {
    let path = format!("$.{key}");
    let Some(Value::Array(items)) = m.get(key) else {
        return Err(field(path, "expected an array of numbers"));
    };
    items
        .iter()
        .enumerate()
        .map(|(k, v)| {
            v.as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| field(format!("{path}[{k}]"), "expected a finite number"))
        })
        .collect()
}

fn number(m: &Map<String, Value>, key: &str) -> Result<f64, ParseError> {
    m.get(key)
        .and_then(Value::as_f64)
        .filter(|x| x.is_finite())
        .ok_or_else(|| field(format!("$.{key}"), "expected a finite number"))
}

fn name(m: &Map<String, Value>) -> Result<String, ParseError> {
    match m.get("name") {
        None => Ok("unnamed".into()),
        Some(Value::String(s)) => Ok(s.clone()),
        Some(_) => Err(field("$.name", "expected a string")),
    }
}

fn reject_unknown(m: &Map<String, Value>, allowed: &[&str]) -> Result<(), ParseError> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(field(format!("$.{k}"), "unknown field")),
        None => Ok(()),
    }
}

/// Parse and validate a resource document.
pub fn parse_resource(document: &str) -> Result<Resource, ParseError> {
    let m = object(document)?;
    let name = name(&m)?;
    let direct = m.contains_key("p") || m.contains_key("q");
    let thermal = ["energies", "beta", "population"].iter().any(|k| m.contains_key(*k));
    match (direct, thermal) {
        (true, true) => Err(field("$", "give either p/q or energies/beta/population, not both")),
        (false, false) => Err(field("$", "missing p/q or energies/beta/population")),
        (true, false) => {
            reject_unknown(&m, &["name", "p", "q"])?;
            let (p, q) = (numbers(&m, "p")?, numbers(&m, "q")?);
            if p.len() != q.len() {
                return Err(field("$.q", format!("length {} does not match p ({})", q.len(), p.len())));
            }
            Resource::new(p, q, name).map_err(|e| field("$", e.to_string()))
        }
        (false, true) => {
            reject_unknown(&m, &["name", "energies", "beta", "population"])?;
            let energies = numbers(&m, "energies")?;
            let beta = number(&m, "beta")?;
            let population = numbers(&m, "population")?;
            if population.len() != energies.len() {
                return Err(field(
                    "$.population",
                    format!("length {} does not match energies ({})", population.len(), energies.len()),
                ));
            }
            let g = gibbs(&energies, beta).map_err(|e| field("$.beta", e.to_string()))?;
            Resource::new(population, g.into_vec(), name).map_err(|e| field("$", e.to_string()))
        }
    }
}

#[derive(Serialize)]
struct ResourceDoc<'a> {
    name: &'a str,
    p: &'a [f64],
    q: &'a [f64],
}

/// The `{name, p, q}` form; floats are written in shortest round-trip form.
pub fn serialize_resource(resource: &Resource) -> String {
    let doc = ResourceDoc { name: resource.label(), p: resource.r(), q: resource.g() };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn parse_schmidt(document: &str) -> Result<(String, SchmidtVector), ParseError> {
    let m = object(document)?;
    reject_unknown(&m, &["name", "schmidt"])?;
    let name = name(&m)?;
    let v = SchmidtVector::new(numbers(&m, "schmidt")?).map_err(|e| field("$.schmidt", e.to_string()))?;
    Ok((name, v))
}

fn read(path: &Path) -> Result<String, ParseError> {
    std::fs::read_to_string(path)
        .map_err(|source| ParseError::Io { file: path.display().to_string(), source })
}

pub fn load_resource(path: &Path) -> Result<Resource, ParseError> {
    parse_resource(&read(path)?)
}

pub fn load_schmidt(path: &Path) -> Result<(String, SchmidtVector), ParseError> {
    parse_schmidt(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_shapes() {
        let r = parse_resource(r#"{"name":"pure-bit","p":[1,0],"q":[0.5,0.5]}"#).unwrap();
        assert_eq!(r.r(), &[1.0, 0.0]);
        let t = parse_resource(
            r#"{"name":"qutrit","energies":[0,1,2],"beta":0.693147,"population":[0.6,0.3,0.1]}"#,
        )
        .unwrap();
        for (g, want) in t.g().iter().zip([4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0]) {
            assert!((g - want).abs() < 1e-6);
        }
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_resource(r#"{"p":[0.5,0.6],"q":[0.5,0.5]}"#).unwrap_err().to_string();
        assert!(e.starts_with("$:") && e.contains("normalized"), "{e}");
        let e = parse_resource(r#"{"p":[0.5,"x"],"q":[0.5,0.5]}"#).unwrap_err().to_string();
        assert!(e.starts_with("$.p[1]"), "{e}");
        let e = parse_resource(r#"{"p":[1],"q":[1],"beta":1}"#).unwrap_err().to_string();
        assert!(e.contains("not both"), "{e}");
        let e = parse_resource(r#"{"p":[1,0],"q":[1,0]}"#).unwrap_err().to_string();
        assert!(e.contains("strictly positive"), "{e}");
    }
}
