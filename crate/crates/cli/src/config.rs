//! Run configuration: a TOML file with command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Operators,
    Bargmann,
    Berezin,
    Szego,
    All,
}

impl Suite {
    pub fn includes(&self, other: Suite) -> bool {
        *self == Suite::All || *self == other
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "operators" => Ok(Suite::Operators),
            "bargmann" => Ok(Suite::Bargmann),
            "berezin" => Ok(Suite::Berezin),
            "szego" => Ok(Suite::Szego),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite '{s}' (operators, bargmann, berezin, szego, all)")),
        }
    }
}

/// `H_A` with `A = [[beta1, kappa], [kappa, beta2]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HaConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub kappa: f64,
}

impl Default for HaConfig {
    fn default() -> Self {
        HaConfig {
            beta1: 0.5,
            beta2: 0.3,
            kappa: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HBetaConfig {
    pub beta: f64,
}

impl Default for HBetaConfig {
    fn default() -> Self {
        HBetaConfig { beta: 0.5 }
    }
}

/// `(kappa, l)` shared by `H_{kappa,l}`, the `tau` family and the model domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KlConfig {
    pub kappa: f64,
    pub l_re: f64,
    pub l_im: f64,
    pub tau: f64,
}

impl Default for KlConfig {
    fn default() -> Self {
        KlConfig {
            kappa: 2.0,
            l_re: 0.3,
            l_im: 0.4,
            tau: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    BerezinA,
    BerezinAStar,
    BerezinAb,
    BerezinBa,
    Kernel,
    Szego,
}

/// Rectangular grid from `corner1` to `corner2` with `steps = [nx, ny]` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub kind: GridKind,
    pub corner1: [f64; 2],
    pub corner2: [f64; 2],
    pub steps: [usize; 2],
    /// Second kernel argument for `kind = "kernel"`.
    pub anchor: [f64; 2],
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            kind: GridKind::BerezinA,
            corner1: [-1.0, -1.0],
            corner2: [1.0, 1.0],
            steps: [3, 3],
            anchor: [0.3, 0.2],
        }
    }
}

impl GridConfig {
    /// Points in row-major order, real part outer.
    pub fn points(&self) -> Vec<[f64; 2]> {
        let axis = |k: usize| -> Vec<f64> {
            let n = self.steps[k];
            (0..n)
                .map(|i| {
                    if n == 1 {
                        self.corner1[k]
                    } else {
                        self.corner1[k] + (self.corner2[k] - self.corner1[k]) * i as f64 / (n - 1) as f64
                    }
                })
                .collect()
        };
        let (xs, ys) = (axis(0), axis(1));
        xs.iter().flat_map(|&x| ys.iter().map(move |&y| [x, y])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub report: PathBuf,
    pub grid: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            report: PathBuf::from("report.json"),
            grid: PathBuf::from("grid.csv"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Random vectors (or point pairs) per randomized check.
    pub samples: usize,
    pub trunc_n: usize,
    pub quad_m: usize,
    pub ha: HaConfig,
    pub hbeta: HBetaConfig,
    pub kl: KlConfig,
    pub grid: GridConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: Suite::All,
            seed: 1,
            samples: 20,
            trunc_n: 10,
            quad_m: 20,
            ha: HaConfig::default(),
            hbeta: HBetaConfig::default(),
            kl: KlConfig::default(),
            grid: GridConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: Box<toml::de::Error> },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn from_toml_str(s: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(s).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            source: Box::new(e),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_toml_str(&text, path)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.trunc_n < 4 {
            return bad(format!("trunc_n must be at least 4, got {}", self.trunc_n));
        }
        if self.quad_m == 0 {
            return bad("quad_m must be positive".into());
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        let all = [
            self.ha.beta1,
            self.ha.beta2,
            self.ha.kappa,
            self.hbeta.beta,
            self.kl.kappa,
            self.kl.l_re,
            self.kl.l_im,
            self.kl.tau,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return bad("space parameters must be finite".into());
        }
        if !(0.0..=1.0).contains(&self.hbeta.beta) {
            return bad(format!("hbeta.beta must lie in [0, 1], got {}", self.hbeta.beta));
        }
        if self.kl.kappa <= 0.0 || self.kl.tau <= 0.0 {
            return bad("kl.kappa and kl.tau must be positive".into());
        }
        for k in 0..2 {
            if self.grid.steps[k] >= 2 && self.grid.corner1[k] == self.grid.corner2[k] {
                return bad(format!("grid axis {k} has {} steps but zero extent", self.grid.steps[k]));
            }
        }
        if self.grid.corner1.iter().chain(&self.grid.corner2).any(|x| !x.is_finite()) {
            return bad("grid corners must be finite".into());
        }
        Ok(())
    }
}
