use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use signed_beliefs::dynamics::{Asymmetry, Rule, StopRule, UpdateParams};
use signed_beliefs::experiments::InitialBeliefs;
use signed_beliefs::selection::{load_matrix_csv, make_selection, SelectionKind, SelectionModel};
use signed_beliefs::SignedGraph;

use crate::error::CliError;

pub const CONFIG_VERSION: u32 = 1;

/// Everything a run depends on. Flags fill it in, then a `--config` file
/// overrides whatever keys it sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub graph: Option<PathBuf>,
    /// `uniform-neighbor`, `complete`, `ring-half`, or a CSV matrix path.
    pub selection: String,
    pub rule: Rule,
    pub alpha: f64,
    pub beta: f64,
    pub asym: Asymmetry,
    pub bound: f64,
    /// Defaults to uniform on `[-A, A]` (bounded rule) or `[-1, 1]`.
    pub x0: Option<InitialBeliefs>,
    pub horizon: u64,
    pub record_every: u64,
    pub seed: u64,
    pub trials: u64,
    /// Defaults to `1e-9` and `1e6 * max(1, ||x0||_inf)`.
    pub stop: Option<StopRule>,
    pub betas: Option<Vec<f64>>,
    pub p_grid: Option<Vec<f64>>,
    pub er_n: Option<usize>,
    pub dimension: Option<u32>,
    pub labeling: Option<Vec<usize>>,
    pub schedule: Option<PathBuf>,
    pub n: Option<usize>,
    pub require_connected: bool,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            version: CONFIG_VERSION,
            graph: None,
            selection: "uniform-neighbor".into(),
            rule: Rule::Symmetric,
            alpha: 0.5,
            beta: 0.0,
            asym: Asymmetry::default(),
            bound: 1.0,
            x0: None,
            horizon: 10_000,
            record_every: 1,
            seed: 0,
            trials: 100,
            stop: None,
            betas: None,
            p_grid: None,
            er_n: None,
            dimension: None,
            labeling: None,
            schedule: None,
            n: None,
            require_connected: false,
            out: None,
        }
    }
}

/// Overlays `overrides` onto `base` key by key.
pub fn merge(base: &mut Value, overrides: Value) {
    if let (Value::Object(b), Value::Object(o)) = (base, overrides) {
        for (k, v) in o {
            b.insert(k, v);
        }
    }
}

/// Reads a config file. A run manifest is accepted too: its `config` entry
/// is used, minus the output path so a rerun does not overwrite the original.
pub fn read_config_file(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", path.display())))?;
    match value {
        Value::Object(mut map) if map.contains_key("config") && map.contains_key("tool") => {
            let mut config = map.remove("config").unwrap_or(Value::Null);
            if let Value::Object(c) = &mut config {
                c.remove("out");
            }
            Ok(config)
        }
        Value::Object(_) => Ok(value),
        _ => Err(CliError::Input(format!("{}: config must be a JSON object", path.display()))),
    }
}

impl RunConfig {
    pub fn from_value(value: Value) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| CliError::Input(format!("invalid config: {e}")))?;
        if cfg.version != CONFIG_VERSION {
            return Err(CliError::Input(format!("unsupported config version {} (expected {CONFIG_VERSION})", cfg.version)));
        }
        Ok(cfg)
    }

    pub fn load_graph(&self) -> Result<SignedGraph, CliError> {
        let path = self.graph.as_ref().ok_or_else(|| CliError::Input("--graph is required".into()))?;
        Ok(signed_beliefs::graph::load_graph(path)?)
    }

    pub fn selection_kind(&self) -> Result<SelectionKind, CliError> {
        Ok(match self.selection.as_str() {
            "uniform-neighbor" => SelectionKind::UniformNeighbor,
            "complete" => SelectionKind::Complete,
            "ring-half" => SelectionKind::RingHalf,
            path => SelectionKind::Custom(load_matrix_csv(path)?),
        })
    }

    pub fn selection_for(&self, g: &SignedGraph) -> Result<SelectionModel, CliError> {
        Ok(make_selection(&self.selection_kind()?, g)?)
    }

    pub fn params(&self) -> Result<UpdateParams, CliError> {
        let params = UpdateParams { alpha: self.alpha, beta: self.beta, asym: self.asym, bound: self.bound, rule: self.rule };
        params.validate()?;
        Ok(params)
    }

    pub fn initial(&self) -> InitialBeliefs {
        self.x0.clone().unwrap_or_else(|| {
            let a = if self.rule == Rule::AsymmetricConstrained { self.bound } else { 1.0 };
            InitialBeliefs::Uniform { low: -a, high: a }
        })
    }
}

pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| format!("invalid list entry '{}'", s.trim())))
        .collect()
}

/// `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts[..] {
        [start, stop, count] => {
            let start: f64 = start.trim().parse().map_err(|_| format!("invalid grid start '{start}'"))?;
            let stop: f64 = stop.trim().parse().map_err(|_| format!("invalid grid stop '{stop}'"))?;
            let count: usize = count.trim().parse().map_err(|_| format!("invalid grid count '{count}'"))?;
            match count {
                0 => Err("grid count must be positive".into()),
                1 => Ok(vec![start]),
                _ => Ok((0..count).map(|k| start + (stop - start) * k as f64 / (count - 1) as f64).collect()),
            }
        }
        [_] => parse_list(text),
        _ => Err(format!("invalid grid '{text}'")),
    }
}

pub fn parse_asym(text: &str) -> Result<Asymmetry, String> {
    match parse_list::<f64>(text)?[..] {
        [a, b, c] => Ok(Asymmetry { a, b, c }),
        _ => Err("--asym expects three comma-separated probabilities a,b,c".into()),
    }
}
