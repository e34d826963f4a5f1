//! Subcommand parameters, shared by the flag parser and the JSON config.
//!
//! Every parameter is optional at this level so that a config file and the
//! command line can each supply part of it; flags win. Defaults and
//! validation happen when a command runs.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::sequences::WeightSpec;
use crate::torus::ExperimentDescriptor;

fn split_list<T: FromStr>(text: &str, what: &str) -> std::result::Result<Vec<T>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| format!("'{s}' is not a valid {what}")))
        .collect()
}

/// Comma-separated reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        split_list(s, "number").map(FloatList)
    }
}

/// Comma-separated integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntList(pub Vec<i64>);

impl FromStr for IntList {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        split_list(s, "integer").map(IntList)
    }
}

/// The weight sequence, as flags.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct WeightArgs {
    /// mobius, liouville, polynomial-phase, rademacher, scaled-rademacher, gaussian or file
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    /// Coefficient of the polynomial-phase generator
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Exponent of the polynomial-phase generator
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    /// Scale of the scaled-rademacher generator
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    /// Sequence file for the file generator
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
}

impl WeightArgs {
    pub fn to_spec(&self, seed: u64) -> Result<WeightSpec> {
        let generator = self
            .generator
            .as_deref()
            .ok_or_else(|| Error::invalid("generator: a weight generator is required"))?;
        let need = |v: Option<f64>, field: &str| {
            v.ok_or_else(|| Error::invalid(format!("{field}: required by the {generator} generator")))
        };
        Ok(match generator {
            "mobius" => WeightSpec::Mobius,
            "liouville" => WeightSpec::Liouville,
            "polynomial-phase" => WeightSpec::PolynomialPhase {
                alpha: need(self.alpha, "alpha")?,
                power: self
                    .power
                    .ok_or_else(|| Error::invalid("power: required by the polynomial-phase generator"))?,
            },
            "rademacher" => WeightSpec::Rademacher { seed },
            "scaled-rademacher" => WeightSpec::ScaledRademacher {
                scale: need(self.scale, "scale")?,
                seed,
            },
            "gaussian" => WeightSpec::Gaussian { seed },
            "file" => WeightSpec::File {
                path: self
                    .input
                    .as_ref()
                    .ok_or_else(|| Error::invalid("input: required by the file generator"))?
                    .display()
                    .to_string(),
            },
            other => return Err(Error::invalid(format!("generator: unknown generator '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct GenerateParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    /// Sequence length (defaults to the last checkpoint)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct AverageParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    /// Monomial phase coefficients t0,t1,...,td
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<FloatList>,
    /// Also write a log-log plot of the moduli
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct ScanSpectrumParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    /// Number of grid frequencies M
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Rows kept in the output (all when omitted)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<usize>,
    /// Polish the strongest peaks by local search
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct EstimateOrderParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    /// Largest degree examined
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<usize>,
    /// Grid points per coefficient (default depends on the degree)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Skip coordinate-descent refinement
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_refine: Option<bool>,
    /// Extra starting phases t0,...,td; repeatable
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<Vec<FloatList>>,
    /// Number of trailing checkpoints in the decay fit
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_window: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct TorusArgs {
    /// Torus dimension
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Rotation of the first coordinate
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Base point x1,...,xm
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<FloatList>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulateTorusParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub torus: TorusArgs,
    /// Number of orbit points
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyTowerParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub torus: TorusArgs,
    /// Character frequencies k1,...,km
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<IntList>,
    /// Largest time checked
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct MultiAverageParams {
    /// Experiment descriptor (JSON)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<PathBuf>,
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentDescriptor>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct PadicArgs {
    /// Prime p
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Number of base-p digits K
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    /// Multiplier a (decimal integer)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    /// Translation b (decimal integer)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    /// Starting point (decimal integer)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<String>,
    /// Digit level k
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulatePadicParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub padic: PadicArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    /// Time polynomial in the binomial basis a0,a1,...; repeatable
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<IntList>>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct CensusParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub padic: PadicArgs,
    /// Number of orbit points counted
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct DistributionArgs {
    /// rademacher, scaled-rademacher or standard-gaussian
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<String>,
    /// Scale of scaled-rademacher
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct LskCheckParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub distribution: DistributionArgs,
    /// Seeds, comma separated (defaults to --seed)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<IntList>,
    /// Degrees, comma separated
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<IntList>,
    /// Grid points per coefficient
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct SubnormalCheckParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub distribution: DistributionArgs,
    /// Explicit lambda values, comma separated
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<FloatList>,
    /// Symmetric grid bound when no lambdas are given
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    /// Grid size when no lambdas are given
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_steps: Option<usize>,
}

/// One subcommand with its parameter block.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum CommandConfig {
    /// Write a weight sequence to a file
    Generate(GenerateParams),
    /// Weighted exponential averages against one phase polynomial
    Average(AverageParams),
    /// Order-1 averages on a grid of frequencies
    ScanSpectrum(ScanSpectrumParams),
    /// Sup estimates per degree and the resulting oscillation order
    EstimateOrder(EstimateOrderParams),
    /// Orbit of a skew shift on the torus
    SimulateTorus(SimulateTorusParams),
    /// Build a quasi-eigenfunction tower and check its factorization
    VerifyTower(VerifyTowerParams),
    /// Weighted multiple ergodic averages from an experiment descriptor
    MultiAverage(MultiAverageParams),
    /// Weighted averages of a cylinder character along p-adic affine orbits
    SimulatePadic(SimulatePadicParams),
    /// Residue census of a p-adic affine orbit
    Census(CensusParams),
    /// Empirical sup of random polynomial sums and their growth exponent
    LskCheck(LskCheckParams),
    /// Subnormality margins of a distribution
    SubnormalCheck(SubnormalCheckParams),
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Generate(_) => "generate",
            CommandConfig::Average(_) => "average",
            CommandConfig::ScanSpectrum(_) => "scan-spectrum",
            CommandConfig::EstimateOrder(_) => "estimate-order",
            CommandConfig::SimulateTorus(_) => "simulate-torus",
            CommandConfig::VerifyTower(_) => "verify-tower",
            CommandConfig::MultiAverage(_) => "multi-average",
            CommandConfig::SimulatePadic(_) => "simulate-padic",
            CommandConfig::Census(_) => "census",
            CommandConfig::LskCheck(_) => "lsk-check",
            CommandConfig::SubnormalCheck(_) => "subnormal-check",
        }
    }

    /// `self` with every parameter that `overlay` sets replaced.
    pub fn overlaid(&self, overlay: &CommandConfig) -> Result<CommandConfig> {
        if self.name() != overlay.name() {
            return Err(Error::invalid(format!(
                "command: the config describes '{}' but '{}' was invoked",
                self.name(),
                overlay.name()
            )));
        }
        let mut base = serde_json::to_value(self).expect("config serialises");
        let top = serde_json::to_value(overlay).expect("config serialises");
        if let (Some(Value::Object(b)), Some(Value::Object(t))) = (base.get_mut("params"), top.get("params")) {
            for (k, v) in t {
                if !v.is_null() {
                    b.insert(k.clone(), v.clone());
                }
            }
        }
        serde_json::from_value(base).map_err(|e| Error::invalid(format!("config: {e}")))
    }
}

/// A complete experiment: command, parameters and global settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: CommandConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<usize>>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}
