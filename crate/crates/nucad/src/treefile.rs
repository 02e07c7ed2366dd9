//! JSON tree files.
//!
//! A file holds a header (format tag, variable names, formula text) and one
//! record per cell in preorder. Polynomials are stored as canonical text in
//! the declared variables and rationals as `p/q`, so reading a file and
//! writing it again reproduces it byte for byte.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use nucad_core::formula::{parse_formula, parse_poly, ParseError};
use nucad_core::label::LabelError;
use nucad_core::nucad::TreeError;
use nucad_core::onecell::CellError;
use nucad_core::{Bound, FactorSet, Label, LevelBounds, NuCadTree, OpenCell, Poly, Rational, TreeNode};

pub const FORMAT: &str = "nucad-tree 1";

#[derive(Debug, thiserror::Error)]
pub enum TreeFileError {
    #[error("malformed tree file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format `{0}`")]
    Format(String),
    #[error("formula: {0}")]
    Formula(ParseError),
    #[error("cell {label}: polynomial `{text}`: {err}")]
    Poly {
        label: String,
        text: String,
        err: ParseError,
    },
    #[error("cell {label}: bad rational `{text}`")]
    Rational { label: String, text: String },
    #[error("cell {label}: {what}")]
    Record { label: String, what: String },
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRecord {
    format: String,
    variables: Vec<String>,
    formula: String,
    cells: Vec<CellRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellRecord {
    label: String,
    parent: Option<String>,
    leaf: bool,
    bounds: Vec<LevelRecord>,
    sample: Vec<String>,
    p: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truth: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelRecord {
    lower: BoundRecord,
    upper: BoundRecord,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum BoundRecord {
    Infinite(String),
    Root { poly: String, index: usize },
}

pub fn rational_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or an integer `p`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (BigInt::from_str(n.trim()).ok()?, BigInt::from_str(d.trim()).ok()?),
        None => (BigInt::from_str(text).ok()?, BigInt::from(1)),
    };
    if d == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(n, d))
}

fn bound_record(b: &Bound, infinity: &str, names: &[String]) -> BoundRecord {
    match b {
        Bound::Infinite => BoundRecord::Infinite(infinity.into()),
        Bound::Root { poly, index } => BoundRecord::Root {
            poly: poly.to_text(names),
            index: *index,
        },
    }
}

pub fn to_string(tree: &NuCadTree) -> String {
    let names = tree.formula().variables();
    let cells = tree
        .nodes()
        .iter()
        .map(|(label, node)| CellRecord {
            label: label.to_string(),
            parent: label.parent().map(|p| p.to_string()),
            leaf: node.is_leaf(),
            bounds: node
                .cell
                .bounds()
                .iter()
                .map(|b| LevelRecord {
                    lower: bound_record(&b.lower, "-inf", names),
                    upper: bound_record(&b.upper, "+inf", names),
                })
                .collect(),
            sample: node.cell.sample().iter().map(rational_text).collect(),
            p: node.cell.p().iter().map(|p| p.to_text(names)).collect(),
            truth: node.truth,
        })
        .collect();
    let file = FileRecord {
        format: FORMAT.into(),
        variables: names.to_vec(),
        formula: tree.formula().to_text(),
        cells,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("tree records serialize");
    s.push('\n');
    s
}

pub fn from_str(text: &str) -> Result<NuCadTree, TreeFileError> {
    let file: FileRecord = serde_json::from_str(text)?;
    if file.format != FORMAT {
        return Err(TreeFileError::Format(file.format));
    }
    let formula = parse_formula(&file.formula).map_err(TreeFileError::Formula)?;
    if formula.variables() != file.variables.as_slice() {
        return Err(TreeFileError::Record {
            label: String::new(),
            what: "variables differ from the formula's".into(),
        });
    }
    let names = &file.variables;
    let mut nodes = BTreeMap::new();
    for rec in file.cells {
        let label: Label = rec.label.parse()?;
        let shown = rec.label.clone();
        let bad = |what: &str| TreeFileError::Record {
            label: shown.clone(),
            what: what.into(),
        };
        if rec.parent != label.parent().map(|p| p.to_string()) {
            return Err(bad("parent does not match label"));
        }
        if rec.leaf != rec.truth.is_some() {
            return Err(bad("leaf cells and only leaf cells carry a truth value"));
        }
        let poly = |text: &str| -> Result<Poly, TreeFileError> {
            parse_poly(text, names).map_err(|err| TreeFileError::Poly {
                label: shown.clone(),
                text: text.into(),
                err,
            })
        };
        let bound = |r: &BoundRecord, infinity: &str| -> Result<Bound, TreeFileError> {
            match r {
                BoundRecord::Infinite(s) if s == infinity => Ok(Bound::Infinite),
                BoundRecord::Infinite(s) => Err(bad(&format!("expected `{infinity}`, found `{s}`"))),
                BoundRecord::Root { poly: text, index } => Ok(Bound::Root {
                    poly: poly(text)?,
                    index: *index,
                }),
            }
        };
        let bounds = rec
            .bounds
            .iter()
            .map(|b| {
                Ok(LevelBounds {
                    lower: bound(&b.lower, "-inf")?,
                    upper: bound(&b.upper, "+inf")?,
                })
            })
            .collect::<Result<Vec<_>, TreeFileError>>()?;
        let sample = rec
            .sample
            .iter()
            .map(|s| {
                parse_rational(s).ok_or_else(|| TreeFileError::Rational {
                    label: shown.clone(),
                    text: s.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p: FactorSet = rec.p.iter().map(|t| poly(t)).collect::<Result<_, _>>()?;
        let cell = OpenCell::from_parts(bounds, sample, p, label.clone())?;
        if nodes
            .insert(label, TreeNode { cell, truth: rec.truth })
            .is_some()
        {
            return Err(bad("duplicate label"));
        }
    }
    Ok(NuCadTree::from_nodes(formula, nodes)?)
}

pub fn read(path: &std::path::Path) -> Result<NuCadTree, ReadError> {
    let text = std::fs::read_to_string(path).map_err(|e| ReadError::Io(path.display().to_string(), e))?;
    Ok(from_str(&text)?)
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Parse(#[from] TreeFileError),
}
