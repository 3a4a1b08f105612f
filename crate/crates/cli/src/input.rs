//! Input documents read by the commands.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use modreedy::ambient::{Carrier, Kind, ModelAssignment, Selector};
use modreedy::diagram::{DiagramDoc, DiagramMapDoc};
use modreedy::reedy::{ReedyDoc, ReedyStructure};
use modreedy::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;

/// A Reedy category given inline or by a built-in name such as `grid(1,1)`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ShapeSpec {
    Builtin(String),
    Doc(ReedyDoc),
}

impl ShapeSpec {
    pub fn build(&self) -> Result<ReedyStructure> {
        match self {
            ShapeSpec::Builtin(name) => builtin(name),
            ShapeSpec::Doc(doc) => ReedyStructure::from_doc(doc),
        }
    }
}

/// `arrow`, `chain(n)`, `grid(m,n)` or `simplex_op(n)`.
pub fn builtin(name: &str) -> Result<ReedyStructure> {
    let bad = || Error::Format(format!("unknown built-in shape `{name}` (expected arrow|chain(n)|grid(m,n)|simplex_op(n))"));
    if name == "arrow" {
        return Ok(ReedyStructure::chain(1));
    }
    let (head, rest) = name.split_once('(').ok_or_else(bad)?;
    let args: Vec<usize> = rest
        .strip_suffix(')')
        .ok_or_else(bad)?
        .split(',')
        .map(|a| a.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match (head, args.as_slice()) {
        ("chain", &[n]) => Ok(ReedyStructure::chain(n)),
        ("grid", &[m, n]) => Ok(ReedyStructure::grid(m, n)),
        ("simplex_op", &[n]) => ReedyStructure::simplex_op(n),
        _ => Err(bad()),
    }
}

/// A Reedy file argument: a path to a JSON document, or a built-in name.
pub fn reedy_arg(arg: &str) -> Result<ReedyStructure> {
    if Path::new(arg).exists() {
        let shape: ShapeSpec = read_json(Path::new(arg))?;
        shape.build()
    } else {
        builtin(arg).map_err(|_| Error::Format(format!("`{arg}` is neither a readable file nor a built-in shape")))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Per-object structures; objects not listed get the selector's own kind.
pub fn assignment<C: Carrier + Clone>(c: &C, r: &ReedyStructure, sel: &Selector, models: &BTreeMap<String, Kind>) -> Result<ModelAssignment<C>> {
    let cat = r.cat();
    if let Some(extra) = models.keys().find(|k| cat.object_ix(k).is_err()) {
        return Err(Error::UnknownObject(extra.clone()));
    }
    let kinds = cat.objects().iter().map(|o| models.get(o).copied().unwrap_or(sel.kind())).collect();
    Ok(ModelAssignment { carrier: Arc::new(c.clone()), models: kinds })
}

#[derive(Clone, Debug, Deserialize)]
pub struct AssignmentFile {
    pub ambient: String,
    #[serde(default)]
    pub models: BTreeMap<String, Kind>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct DiagramFile {
    pub reedy: ShapeSpec,
    pub ambient: String,
    pub diagram: DiagramDoc,
}

#[derive(Clone, Debug, Deserialize)]
pub struct MapFile {
    pub reedy: ShapeSpec,
    pub ambient: String,
    #[serde(default)]
    pub models: BTreeMap<String, Kind>,
    pub map: DiagramMapDoc,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SquareDoc {
    pub left: DiagramMapDoc,
    pub right: DiagramMapDoc,
    pub top: DiagramMapDoc,
    pub bottom: DiagramMapDoc,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SquareFile {
    pub reedy: ShapeSpec,
    pub ambient: String,
    pub square: SquareDoc,
}
