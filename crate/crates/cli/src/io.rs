//! Deterministic, atomic file output and the parameter/fit document
//! formats shared by the subcommands.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use blrain::fit::{FitResult, ObjectiveSpec};
use blrain::ModelParams;

use crate::config::RunConfig;

/// Write bytes to a temporary sibling and rename into place, so partially
/// written outputs never appear under the final name.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating output directory `{}`", parent.display()))?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)
        .with_context(|| format!("writing `{}`", tmp.display()))?;
    std::fs::rename(&tmp, path)
        .with_context(|| format!("renaming into `{}`", path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("serializing output")?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

/// CSV builder that embeds the resolved configuration and seed as comment
/// lines for provenance.
pub struct CsvDoc {
    buf: String,
}

impl CsvDoc {
    pub fn new(config: &RunConfig, header: &str) -> Result<Self> {
        let mut buf = String::new();
        writeln!(buf, "# config: {}", serde_json::to_string(config)?)?;
        writeln!(buf, "# seed: {}", config.seed)?;
        writeln!(buf, "{header}")?;
        Ok(Self { buf })
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn write(self, path: &Path) -> Result<()> {
        atomic_write(path, self.buf.as_bytes())
    }
}

/// Format a float with shortest round-trip representation (deterministic).
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::from("")
    }
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Units {
    pub time: String,
    pub depth: String,
}

impl Default for Units {
    fn default() -> Self {
        Self { time: "hours".into(), depth: "mm".into() }
    }
}

/// One calendar month's parameter set.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MonthParams {
    pub month: u8,
    #[serde(flatten)]
    pub params: ModelParams,
}

/// Parameter file: explicit units plus one tagged document per month.
/// Files written by `fit` carry the resolved config and seed as provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsFile {
    #[serde(default)]
    pub units: Units,
    pub months: Vec<MonthParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ParamsFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading params file `{}`", path.display()))?;
        let file: ParamsFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing params file `{}`", path.display()))?;
        let expected = Units::default();
        if file.units != expected {
            bail!(
                "params file `{}` declares units {:?}; expected hours/mm",
                path.display(),
                file.units
            );
        }
        Ok(file)
    }

}

/// One month's fit, self-contained: the objective specification makes the
/// document reusable for profiling and uncertainty sampling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitDocument {
    pub config: RunConfig,
    pub seed: u64,
    pub spec: ObjectiveSpec,
    pub result: FitResult,
}

/// Parameters for a set of months, with optional fit context per month.
pub struct ParamsSource {
    pub entries: Vec<(u8, ModelParams, Option<FitDocument>)>,
}

impl ParamsSource {
    /// Accepts a params file, a single fit-result JSON, or a directory of
    /// `fit_*.json` documents.
    pub fn load(path: &Path) -> Result<Self> {
        if path.is_dir() {
            let mut names: Vec<PathBuf> = std::fs::read_dir(path)
                .with_context(|| format!("reading params directory `{}`", path.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.file_name()
                        .and_then(|n| n.to_str())
                        .is_some_and(|n| n.starts_with("fit_") && n.ends_with(".json"))
                })
                .collect();
            names.sort();
            if names.is_empty() {
                bail!("directory `{}` contains no fit_*.json documents", path.display());
            }
            let mut entries = Vec::new();
            for name in names {
                let doc = load_fit_document(&name)?;
                entries.push((doc.result.month, doc.result.params, Some(doc)));
            }
            return Ok(Self { entries });
        }
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading params file `{}`", path.display()))?;
        match serde_json::from_str::<FitDocument>(&text) {
            Ok(doc) => Ok(Self { entries: vec![(doc.result.month, doc.result.params, Some(doc))] }),
            Err(_) => {
                let file = ParamsFile::load(path)?;
                Ok(Self {
                    entries: file
                        .months
                        .iter()
                        .map(|m| (m.month, m.params, None))
                        .collect(),
                })
            }
        }
    }

    pub fn get(&self, month: u8) -> Option<&(u8, ModelParams, Option<FitDocument>)> {
        self.entries.iter().find(|(m, _, _)| *m == month)
    }
}

pub fn load_fit_document(path: &Path) -> Result<FitDocument> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading fit document `{}`", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing fit document `{}`", path.display()))
}
