use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Experiment {
    Threshold,
    PfailCurve,
    Capacity,
    AnalogVsBinary,
    SqecChain,
    HrmSweep,
    ClusterVerify,
    DecompCheck,
    Breed,
    Cubic,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Threshold,
        Experiment::PfailCurve,
        Experiment::Capacity,
        Experiment::AnalogVsBinary,
        Experiment::SqecChain,
        Experiment::HrmSweep,
        Experiment::ClusterVerify,
        Experiment::DecompCheck,
        Experiment::Breed,
        Experiment::Cubic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Threshold => "threshold",
            Experiment::PfailCurve => "pfail_curve",
            Experiment::Capacity => "capacity",
            Experiment::AnalogVsBinary => "analog_vs_binary",
            Experiment::SqecChain => "sqec_chain",
            Experiment::HrmSweep => "hrm_sweep",
            Experiment::ClusterVerify => "cluster_verify",
            Experiment::DecompCheck => "decomp_check",
            Experiment::Breed => "breed",
            Experiment::Cubic => "cubic",
        }
    }

    /// Parameter keys accepted by this experiment, with their defaults.
    /// Keys without a default are required.
    pub fn schema(self) -> &'static [Param] {
        use Kind::{Int, Real};
        // struct literals so that the tables are promoted to statics
        macro_rules! p {
            ($key:literal, $kind:expr, $default:expr) => {
                Param { key: $key, kind: $kind, default: $default }
            };
        }
        match self {
            Experiment::Threshold => &[p!("p_ft", Real, None)],
            Experiment::PfailCurve | Experiment::Capacity => &[
                p!("sigma_min", Real, None),
                p!("sigma_max", Real, None),
                p!("sigma_step", Real, None),
            ],
            Experiment::AnalogVsBinary => &[
                p!("sigma_min", Real, None),
                p!("sigma_max", Real, None),
                p!("sigma_step", Real, None),
                p!("audit_trials", Int, Some("0")),
            ],
            Experiment::SqecChain => &[p!("var_data", Real, None), p!("var_ancilla", Real, None)],
            Experiment::HrmSweep => &[
                p!("var", Real, None),
                p!("zeta_min", Real, None),
                p!("zeta_max", Real, None),
                p!("zeta_step", Real, None),
            ],
            Experiment::ClusterVerify => &[
                p!("r", Real, None),
                p!("graphs", Int, Some("50")),
                p!("max_modes", Int, Some("8")),
                p!("edge_prob", Real, Some("0.5")),
                p!("chain_pairs", Int, Some("4")),
            ],
            Experiment::DecompCheck => &[
                p!("dim", Int, Some("60")),
                p!("t", Real, Some("0.1")),
                p!("steps_min", Int, Some("4")),
                p!("steps_max", Int, Some("32")),
            ],
            Experiment::Breed => &[
                p!("alpha", Real, None),
                p!("r", Real, None),
                p!("rounds", Int, None),
                p!("epsilon", Real, Some("0.1")),
                p!("half_width", Real, Some("16")),
                p!("dx", Real, Some("0.02")),
            ],
            Experiment::Cubic => &[
                p!("gamma", Real, None),
                p!("resource_db", Real, None),
                p!("half_width", Real, Some("8")),
                p!("dx", Real, Some("0.02")),
            ],
        }
    }

    /// Trial count used when neither the config nor the caller sets one.
    pub fn default_trials(self) -> u64 {
        match self {
            Experiment::AnalogVsBinary | Experiment::SqecChain | Experiment::HrmSweep => 100_000,
            Experiment::Cubic => 8,
            _ => 1,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown experiment `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Real,
    Int,
}

#[derive(Clone, Copy, Debug)]
pub struct Param {
    pub key: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
}

/// A validated experiment configuration.
///
/// The text format is one `key = value` pair per line; blank lines and
/// lines starting with `#` are ignored. The reserved keys are `experiment`,
/// `seed`, `trials` and `out`; every other key must belong to the chosen
/// experiment's schema.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    params: BTreeMap<String, f64>,
    pub seed: u64,
    pub trials: u64,
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    /// Builds a config from key-value pairs, filling defaults.
    pub fn new<'a>(experiment: Experiment, pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut cfg = ExperimentConfig {
            experiment,
            params: BTreeMap::new(),
            seed: 0,
            trials: experiment.default_trials(),
            output_path: None,
        };
        let schema = experiment.schema();
        let mut seen = BTreeMap::new();
        for (key, value) in pairs {
            if seen.insert(key.to_owned(), ()).is_some() {
                return Err(Error::Schema(format!("key `{key}` given more than once")));
            }
            match key {
                "experiment" => {
                    let named: Experiment = value.parse()?;
                    if named != experiment {
                        return Err(Error::Schema(format!(
                            "key `experiment` names `{named}` but `{experiment}` was requested"
                        )));
                    }
                }
                "seed" => cfg.seed = parse_int(key, value)?,
                "trials" => cfg.trials = parse_int(key, value)?,
                "out" => cfg.output_path = Some(value.to_owned()),
                _ => {
                    let param = schema.iter().find(|p| p.key == key).ok_or_else(|| {
                        Error::Schema(format!("key `{key}` is not accepted by experiment `{experiment}`"))
                    })?;
                    cfg.params.insert(key.to_owned(), parse_value(param, value)?);
                }
            }
        }
        for param in schema {
            if !cfg.params.contains_key(param.key) {
                let default = param
                    .default
                    .ok_or_else(|| Error::Schema(format!("missing required key `{}`", param.key)))?;
                cfg.params.insert(param.key.to_owned(), parse_value(param, default)?);
            }
        }
        cfg.validate_trials()?;
        Ok(cfg)
    }

    /// Parses the text format. When `experiment` is `None` the file must
    /// name it with the `experiment` key.
    pub fn parse(text: &str, experiment: Option<Experiment>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(Error::Parse { line: i + 1, message: "empty key".into() });
            }
            pairs.push((key, value));
        }
        let experiment = match experiment {
            Some(e) => e,
            None => pairs
                .iter()
                .find(|(k, _)| *k == "experiment")
                .ok_or_else(|| Error::Schema("missing required key `experiment`".into()))?
                .1
                .parse()?,
        };
        Self::new(experiment, pairs)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Result<Self> {
        self.trials = trials;
        self.validate_trials()?;
        Ok(self)
    }

    fn validate_trials(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Schema("key `trials` must be at least 1".into()));
        }
        Ok(())
    }

    pub fn real(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::Schema(format!("missing required key `{key}`")))
    }

    pub fn int(&self, key: &str) -> Result<u64> {
        // integer keys are validated on parse, so the cast is exact
        Ok(self.real(key)? as u64)
    }

    /// Canonical text of everything that affects the results: experiment,
    /// seed, trials and all parameters in key order. The output path is
    /// excluded.
    pub fn canonical(&self) -> String {
        let mut s = format!("experiment={}\nseed={}\ntrials={}\n", self.experiment, self.seed, self.trials);
        for (k, v) in &self.params {
            s.push_str(&format!("{k}={v:e}\n"));
        }
        s
    }

    /// Hex SHA-256 of [`ExperimentConfig::canonical`].
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn parse_int(key: &str, value: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| Error::Schema(format!("key `{key}`: `{value}` is not a non-negative integer")))
}

fn parse_value(param: &Param, value: &str) -> Result<f64> {
    match param.kind {
        Kind::Int => parse_int(param.key, value).map(|v| v as f64),
        Kind::Real => value
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Schema(format!("key `{}`: `{value}` is not a finite number", param.key))),
    }
}
