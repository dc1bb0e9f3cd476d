use std::fs;
use std::path::Path;
use std::sync::Arc;

use polyext_core::linalg::{QMatrix, QVector};
use polyext_core::space::SpaceJson;
use polyext_core::{builtin_space, ConvertOptions, Error, Operator, PolyhedralSpace};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::error::Category;

/// A failure before any analysis runs.
#[derive(Debug)]
pub enum InputError {
    Io(String),
    Json(String),
    UnknownSpace(String),
    /// Well-formed JSON with the wrong shape or values.
    Invalid(String),
    Core(Error),
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError::Core(e)
    }
}

/// Reads `arg` as a file if one exists at that path, otherwise as inline
/// JSON.
fn text_of(arg: &str) -> Result<String, InputError> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| InputError::Io(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_json<T: DeserializeOwned>(what: &str, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| match e.classify() {
        Category::Data => InputError::Invalid(format!("{what}: {e}")),
        _ => InputError::Json(format!("{what}: {e}")),
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpaceInput {
    Name(String),
    Inline(SpaceJson),
}

impl SpaceInput {
    fn resolve(self, opts: &ConvertOptions) -> Result<PolyhedralSpace, InputError> {
        match self {
            SpaceInput::Name(name) => named(&name),
            SpaceInput::Inline(raw) => Ok(raw.into_space(opts)?),
        }
    }
}

fn named(name: &str) -> Result<PolyhedralSpace, InputError> {
    builtin_space(name).ok_or_else(|| {
        InputError::UnknownSpace(format!(
            "unknown space {name:?} (built-ins: hexagon, octagon, linf<n>, l1<n>, n <= 9)"
        ))
    })
}

/// A built-in name, a file, or inline JSON.
pub fn space(arg: &str, opts: &ConvertOptions) -> Result<PolyhedralSpace, InputError> {
    if let Some(s) = builtin_space(arg) {
        return Ok(s);
    }
    let text = text_of(arg)?;
    let trimmed = text.trim_start();
    if !trimmed.starts_with('{') && !trimmed.starts_with('"') {
        return named(text.trim());
    }
    parse_json::<SpaceInput>("space", &text)?.resolve(opts)
}

pub fn point(arg: &str) -> Result<QVector, InputError> {
    parse_json("point", &text_of(arg)?)
}

#[derive(Deserialize)]
struct OperatorInput {
    domain: SpaceInput,
    codomain: SpaceInput,
    matrix: QMatrix,
}

pub fn operator(arg: &str, opts: &ConvertOptions) -> Result<Operator, InputError> {
    let raw: OperatorInput = parse_json("operator", &text_of(arg)?)?;
    let domain = Arc::new(raw.domain.resolve(opts)?);
    let codomain = Arc::new(raw.codomain.resolve(opts)?);
    Ok(Operator::new(domain, codomain, raw.matrix)?)
}
