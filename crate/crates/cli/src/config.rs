//! Optional TOML configuration mirroring the command-line flags.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

/// `diamag` may be written as a number or as `"auto"` / `"zero"`.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum DiamagValue {
    Number(f64),
    Text(String),
}

impl DiamagValue {
    pub fn as_flag(&self) -> String {
        match self {
            DiamagValue::Number(v) => v.to_string(),
            DiamagValue::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub wa: Option<f64>,
    pub wb: Option<f64>,
    pub lambda: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub diamag: Option<DiamagValue>,
    pub coupling: Option<String>,
    pub temp: Option<f64>,
    pub gamma_a: Option<f64>,
    pub gamma_b: Option<f64>,
    pub state: Option<String>,
    pub scenario: Option<String>,
    pub axis: Option<Vec<String>>,
    pub jobs: Option<usize>,
    pub output: Option<String>,
    pub dump_cov: Option<bool>,
    pub t_final: Option<f64>,
    pub dt: Option<f64>,
    pub every: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
