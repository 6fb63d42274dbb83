//! Run configuration: a flat TOML file plus `key=value` overrides.

use std::path::PathBuf;

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    Bec,
    Noiseless,
    #[serde(alias = "ge")]
    GilbertElliott,
    Generic,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Bec => "bec",
            ChannelKind::Noiseless => "noiseless",
            ChannelKind::GilbertElliott => "gilbert-elliott",
            ChannelKind::Generic => "generic",
        }
    }
}

/// A point given either as a scalar or as a list of coordinates.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Scalar(f64),
    List(Vec<f64>),
}

impl Point {
    pub fn coords(&self) -> Vec<f64> {
        match self {
            Point::Scalar(x) => vec![*x],
            Point::List(v) => v.clone(),
        }
    }
}

/// Every key is optional except `channel`; unset keys fall back to the
/// channel's published settings. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub channel: ChannelKind,
    pub algorithm: Option<u8>,

    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub theta0: Option<Point>,
    pub outer_iters: Option<usize>,
    pub max_backtracks: Option<usize>,
    pub b: Option<f64>,
    pub y0: Option<f64>,

    // Channel parameters.
    pub epsilon: Option<f64>,
    pub crossovers: Option<Vec<f64>>,
    pub state_matrix: Option<Vec<Vec<f64>>>,
    /// Input family of the generic channel: `rll` or `iid`.
    pub input: Option<String>,
    /// `[lower, upper]` of the parameter interval.
    pub domain: Option<[f64; 2]>,

    // Sequence constants.
    pub k0: Option<usize>,
    pub n_poly: Option<[f64; 3]>,
    pub rho: Option<f64>,
    #[serde(alias = "M")]
    pub big_m: Option<f64>,
    pub m: Option<f64>,

    // Start-up audit and bound.
    pub grid_points: Option<usize>,
    pub proxy_k: Option<usize>,
    pub delta0: Option<f64>,
    /// Run even when the start-up audit fails.
    #[serde(default)]
    pub force: bool,

    pub trace_csv: Option<PathBuf>,
    pub report_json: Option<PathBuf>,
}

impl RunConfig {
    /// Default settings for `channel`.
    pub fn for_channel(channel: ChannelKind) -> Self {
        Self {
            channel,
            algorithm: None,
            alpha: None,
            beta: None,
            theta0: None,
            outer_iters: None,
            max_backtracks: None,
            b: None,
            y0: None,
            epsilon: None,
            crossovers: None,
            state_matrix: None,
            input: None,
            domain: None,
            k0: None,
            n_poly: None,
            rho: None,
            big_m: None,
            m: None,
            grid_points: None,
            proxy_k: None,
            delta0: None,
            force: false,
            trace_csv: None,
            report_json: None,
        }
    }

    /// Parses `text` after applying `overrides`; overrides win.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            CliError::Config(format!("config: {}", e.message().trim()))
        })?;
        for o in overrides {
            let (key, value) = o
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("override `{o}` is not of the form key=value")))?;
            table.insert(key.trim().to_string(), parse_value(value.trim()));
        }
        serde_path_to_error::deserialize(toml::Value::Table(table)).map_err(|e| {
            let path = e.path().to_string();
            let msg = e.inner().message().trim().to_string();
            if path == "." || msg.contains('`') {
                CliError::Config(format!("config: {msg}"))
            } else {
                CliError::Config(format!("config: field `{path}`: {msg}"))
            }
        })
    }

    pub fn load(path: &std::path::Path, overrides: &[String]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, overrides)
    }
}

/// A TOML literal if the text is one, otherwise a bare string.
fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
