//! Input files: structure documents and query documents. Paths inside a
//! query are resolved against the directory of the query file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use massey_core::algebra::json::{coalgebra_from_doc, parse_doc, StructureDoc};
use massey_core::algebra::{build_standard_coalgebra, Coalgebra, StandardCoalgebra};
use massey_core::ce::CochainDoc;
use massey_core::deform::LocalBaseAlgebra;
use massey_core::exact::{parse_scalar, Scalar};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::NotFound(path.to_path_buf()),
        _ => CliError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn read_doc(path: &Path) -> Result<StructureDoc> {
    let text = read_text(path)?;
    parse_doc(&text).map_err(|e| CliError::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn read_cochain(path: &Path) -> Result<CochainDoc> {
    read_json(path)
}

/// A query file together with the directory its paths are relative to.
pub struct Query<T> {
    pub body: T,
    pub dir: PathBuf,
}

impl<T: DeserializeOwned> Query<T> {
    pub fn load(path: &Path) -> Result<Self> {
        let body = read_json(path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Query { body, dir })
    }
}

impl<T> Query<T> {
    pub fn resolve(&self, rel: &str) -> PathBuf {
        self.dir.join(rel)
    }
}

pub fn scalars(v: &[String]) -> Result<Vec<Scalar>> {
    Ok(v.iter().map(|s| parse_scalar(s)).collect::<massey_core::Result<Vec<_>>>()?)
}

pub fn scalar_map(m: &BTreeMap<String, Vec<String>>) -> Result<BTreeMap<String, Vec<Scalar>>> {
    m.iter().map(|(k, v)| Ok((k.clone(), scalars(v)?))).collect()
}

/// A coalgebra from a builder or a `"kind": "coalgebra"` file.
#[derive(Debug, Deserialize)]
#[serde(tag = "builder", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoalgebraSpec {
    Classical {
        degrees: Vec<i64>,
    },
    OneParam {
        order: usize,
    },
    Singular {
        order: usize,
    },
    Pair {
        order: usize,
    },
    /// Coefficients `[k, i, j, "c"]`, 1-based.
    Explicit {
        degrees: Vec<i64>,
        r: usize,
        coefficients: Vec<(usize, usize, usize, String)>,
    },
    File {
        path: String,
    },
}

impl CoalgebraSpec {
    pub fn build<T>(&self, q: &Query<T>) -> Result<Coalgebra> {
        let kind = match self {
            CoalgebraSpec::Classical { degrees } => StandardCoalgebra::Classical {
                degrees: degrees.clone(),
            },
            CoalgebraSpec::OneParam { order } => StandardCoalgebra::OneParam { order: *order },
            CoalgebraSpec::Singular { order } => StandardCoalgebra::Singular { order: *order },
            CoalgebraSpec::Pair { order } => StandardCoalgebra::Pair { order: *order },
            CoalgebraSpec::Explicit {
                degrees,
                r,
                coefficients,
            } => StandardCoalgebra::ExplicitTable {
                degrees: degrees.clone(),
                r: *r,
                coefficients: coefficients
                    .iter()
                    .map(|(k, i, j, c)| Ok((*k, *i, *j, parse_scalar(c)?)))
                    .collect::<massey_core::Result<Vec<_>>>()?,
            },
            CoalgebraSpec::File { path } => {
                let f = coalgebra_from_doc(&read_doc(&q.resolve(path))?)?;
                let report = f.validate();
                if !report.is_valid() {
                    return Err(massey_core::Error::InvalidStructure(report).into());
                }
                return Ok(f);
            }
        };
        Ok(build_standard_coalgebra(&kind)?)
    }
}

/// `⟨…⟩_F` in a DGLA: the CE complex of a `lie-algebra` file, or a `dgla`
/// file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DglaQuery {
    pub algebra: String,
    pub coalgebra: CoalgebraSpec,
    pub classes: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub b: Option<BTreeMap<String, Vec<String>>>,
    /// A defining system to check instead of searching.
    #[serde(default)]
    pub witness: Option<BTreeMap<String, Vec<String>>>,
}

/// A local base from a builder (truncated at `--order` or `order`) or a
/// `"kind": "local-base"` file.
#[derive(Debug, Deserialize)]
#[serde(tag = "builder", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BaseSpec {
    OneParam {
        #[serde(default)]
        order: Option<usize>,
    },
    Singular {
        #[serde(default)]
        order: Option<usize>,
    },
    Pair {
        #[serde(default)]
        order: Option<usize>,
    },
    File {
        path: String,
    },
}

impl BaseSpec {
    pub fn build<T>(&self, q: &Query<T>, cli_order: Option<usize>) -> Result<LocalBaseAlgebra> {
        let order = |o: &Option<usize>| {
            cli_order
                .or(*o)
                .ok_or_else(|| CliError::Usage("the base needs a truncation order (--order N)".into()))
        };
        Ok(match self {
            BaseSpec::OneParam { order: o } => LocalBaseAlgebra::one_param(order(o)?)?,
            BaseSpec::Singular { order: o } => LocalBaseAlgebra::singular(order(o)?)?,
            BaseSpec::Pair { order: o } => LocalBaseAlgebra::pair(order(o)?)?,
            BaseSpec::File { path } => {
                if cli_order.is_some() {
                    return Err(CliError::Usage("--order does not apply to a base read from a file".into()));
                }
                LocalBaseAlgebra::from_doc(&read_doc(&q.resolve(path))?)?
            }
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateQuery {
    pub algebra: String,
    pub base: BaseSpec,
    /// Coordinates in `H²(g; g)` for each first-order generator of `𝔪`.
    pub classes: BTreeMap<String, Vec<String>>,
    /// A deformation to check instead of integrating: one 2-cochain per
    /// basis element of `𝔪`.
    #[serde(default)]
    pub deformation: Option<BTreeMap<String, CochainDoc>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub degree: i64,
    pub coords: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgcaQuery {
    pub algebra: String,
    pub classes: Vec<ClassSpec>,
    #[serde(default)]
    pub b: Option<Vec<String>>,
    #[serde(default)]
    pub witness: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatricQuery {
    pub algebra: String,
    /// One `p_i × p_{i+1}` matrix of classes per factor.
    pub classes: Vec<Vec<Vec<ClassSpec>>>,
    #[serde(default)]
    pub b: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default)]
    pub witness: Option<BTreeMap<String, Vec<String>>>,
}
