//! The `oscillab` command line.
//!
//! Each subcommand reads its parameters from flags and, optionally, a JSON
//! config (`--config`); flags override the config. Reports go to the
//! `--out` directory together with `manifest.json`. Exit status is 0 on
//! success, 1 when an input fails validation and 2 when the computation
//! itself fails.

pub mod config;
pub mod emit;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, CommandFactory, Parser};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::oscillation::{classify_exact_order, estimate_oscillation_profile, refine_local, ProfileOptions};
use crate::padic::{
    orbit_residue_census, padic_weighted_average, PadicAffineSystem, PadicNumber, DEFAULT_PRECISION,
};
use crate::polyphase::{fourier_bohr_scan, weighted_exponential_average, PhasePolynomial};
use crate::probabilistic::{growth_exponent, lsk_survey, subnormality_margin, Distribution};
use crate::sequences::{write_sequence, Checkpoints, WeightSpec};
use crate::torus::{
    build_tower, tower_phase_polynomial, verify_factorization, CharacterObservable, ExperimentDescriptor,
    QuasiEigenTower, SkewShiftSystem, TimePolynomial, TorusPoint,
};

pub use config::{CommandConfig, ExperimentConfig};
use config::*;
use emit::{emit_report, Format, Report};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_OUT: &str = "out";

#[derive(Debug, Parser)]
#[command(name = "oscillab", version, about = "Oscillating sequences and weighted ergodic averages")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: CommandConfig,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// JSON experiment config; flags override its fields
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for reports and the manifest
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for random weights
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Checkpoints "n1,n2,..."
    #[arg(long, global = true)]
    pub checkpoints: Option<String>,
}

/// Merges the config file (if any) with the flags.
pub fn resolve(cli: &Cli) -> Result<(ExperimentConfig, Vec<PathBuf>)> {
    let mut inputs = Vec::new();
    let base = match &cli.global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::invalid(format!("config: cannot read {}: {e}", path.display())))?;
            inputs.push(path.clone());
            Some(ExperimentConfig::from_json(&text)?)
        }
        None => None,
    };
    let checkpoints = match &cli.global.checkpoints {
        Some(text) => Some(Checkpoints::parse(text)?.as_slice().to_vec()),
        None => None,
    };
    let merged = match base {
        Some(base) => ExperimentConfig {
            command: base.command.overlaid(&cli.command)?,
            out: cli.global.out.clone().or(base.out),
            seed: cli.global.seed.or(base.seed),
            threads: cli.global.threads.or(base.threads),
            checkpoints: checkpoints.or(base.checkpoints),
        },
        None => ExperimentConfig {
            command: cli.command.clone(),
            out: cli.global.out.clone(),
            seed: cli.global.seed,
            threads: cli.global.threads,
            checkpoints,
        },
    };
    Ok((merged, inputs))
}

/// Files touched by one run, plus a one-paragraph summary.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunSummary {
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub summary: String,
}

struct Context<'a> {
    config: &'a ExperimentConfig,
    out: PathBuf,
    seed: u64,
    run: RunSummary,
}

impl Context<'_> {
    fn checkpoints(&self, default: impl FnOnce() -> Result<Checkpoints>) -> Result<Checkpoints> {
        match &self.config.checkpoints {
            Some(v) => Checkpoints::new(v.clone()),
            None => default(),
        }
    }

    fn emit(&mut self, report: Report<'_>, format: Format, name: &str) -> Result<()> {
        let path = self.out.join(name);
        emit_report(report, format, &path)?;
        self.run.outputs.push(path);
        Ok(())
    }

    fn write(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.out.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        self.run.outputs.push(path);
        Ok(())
    }

    fn note_weights(&mut self, spec: &WeightSpec) {
        if let WeightSpec::File { path } = spec {
            self.run.inputs.push(PathBuf::from(path));
        }
    }
}

fn default_checkpoints() -> Result<Checkpoints> {
    Checkpoints::geometric(1000.0, 8)
}

fn required<T: Clone>(v: &Option<T>, field: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::invalid(format!("{field}: required")))
}

fn golden_ratio_conjugate() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

fn parse_distribution(args: &DistributionArgs) -> Result<Distribution> {
    match args.distribution.as_deref().unwrap_or("rademacher") {
        "rademacher" => Ok(Distribution::Rademacher),
        "scaled-rademacher" => Ok(Distribution::ScaledRademacher {
            scale: required(&args.scale, "scale")?,
        }),
        "standard-gaussian" | "gaussian" => Ok(Distribution::StandardGaussian),
        other => Err(Error::invalid(format!("distribution: unknown distribution '{other}'"))),
    }
}

fn torus_system(args: &TorusArgs) -> Result<(SkewShiftSystem, TorusPoint)> {
    let m = required(&args.m, "m")?;
    let sys = SkewShiftSystem::new(m, args.alpha.unwrap_or_else(golden_ratio_conjugate))?;
    let x = args.x.clone().map(|l| l.0).unwrap_or_else(|| vec![0.0; m]);
    if x.len() != m {
        return Err(Error::invalid(format!("x: expected {m} coordinates, got {}", x.len())));
    }
    Ok((sys, TorusPoint::from_f64s(&x)))
}

fn padic_system(args: &PadicArgs) -> Result<(PadicAffineSystem, PadicNumber, usize)> {
    let p = required(&args.p, "p")?;
    let precision = args.precision.unwrap_or(DEFAULT_PRECISION);
    let int = |v: &Option<String>, field: &str, default: Option<&str>| -> Result<BigInt> {
        let text = v.as_deref().or(default).ok_or_else(|| Error::invalid(format!("{field}: required")))?;
        text.trim()
            .parse()
            .map_err(|_| Error::invalid(format!("{field}: '{text}' is not a decimal integer")))
    };
    let sys = PadicAffineSystem::from_integers(p, precision, &int(&args.a, "a", None)?, &int(&args.b, "b", None)?)?;
    let x0 = PadicNumber::from_bigint(p, precision, &int(&args.x0, "x0", Some("0"))?)?;
    let level = args.level.unwrap_or(1);
    if level > precision {
        return Err(Error::invalid(format!("level: {level} exceeds the precision K = {precision}")));
    }
    Ok((sys, x0, level))
}

fn minimality_note(sys: &PadicAffineSystem) -> String {
    match sys.is_minimal() {
        Ok(true) => "minimal".into(),
        Ok(false) => "not minimal".into(),
        Err(e) => format!("minimality unknown ({e})"),
    }
}

fn run_command(ctx: &mut Context<'_>) -> Result<()> {
    let seed = ctx.seed;
    match &ctx.config.command {
        CommandConfig::Generate(p) => {
            let spec = p.weights.to_spec(seed)?;
            ctx.note_weights(&spec);
            let n = match p.n {
                Some(n) => n,
                None => ctx.checkpoints(default_checkpoints)?.last(),
            };
            let seq = spec.generate(n)?;
            let path = ctx.out.join("sequence.txt");
            write_sequence(&path, &seq)?;
            ctx.run.outputs.push(path);
            ctx.run.summary = format!("wrote {n} values of {}", seq.provenance());
        }
        CommandConfig::Average(p) => {
            let spec = p.weights.to_spec(seed)?;
            ctx.note_weights(&spec);
            let cps = ctx.checkpoints(default_checkpoints)?;
            let coeffs = p.coeffs.clone().map(|l| l.0).unwrap_or_else(|| vec![0.0]);
            let phase = PhasePolynomial::from_monomial(&coeffs).map_err(|e| Error::invalid(format!("coeffs: {e}")))?;
            let seq = spec.generate(cps.last())?;
            let series = weighted_exponential_average(&seq, &phase, &cps)?;
            ctx.emit(Report::Series(&series), Format::Csv, "average.csv")?;
            if p.svg.unwrap_or(false) {
                ctx.emit(Report::Series(&series), Format::Svg, "average.svg")?;
            }
            ctx.run.summary = format!("|A_N| = {:.6e} at N = {}", series.last().norm(), cps.last());
        }
        CommandConfig::ScanSpectrum(p) => {
            let spec = p.weights.to_spec(seed)?;
            ctx.note_weights(&spec);
            let n = ctx.checkpoints(|| Checkpoints::new(vec![100_000]))?.last();
            let m = p.grid.unwrap_or(1024);
            let seq = spec.generate(n)?;
            let peaks = fourier_bohr_scan(&seq, m, n).map_err(|e| Error::invalid(format!("grid: {e}")))?;
            let shown = &peaks[..p.top.unwrap_or(peaks.len()).min(peaks.len())];
            ctx.emit(Report::Spectrum(shown), Format::Csv, "spectrum.csv")?;
            let mut refined = Vec::new();
            if p.refine.unwrap_or(true) {
                for peak in peaks.iter().take(8) {
                    let r = refine_local(&seq, 1, &[0.0, peak.frequency], n, 1.0 / m as f64)?;
                    refined.push(json!({
                        "start": peak.frequency,
                        "frequency": r.coefficient_values()[1],
                        "modulus": r.sup,
                    }));
                }
            }
            let best = refined
                .iter()
                .filter_map(|r| r["modulus"].as_f64())
                .fold(peaks[0].modulus, f64::max);
            let summary = json!({
                "n": n,
                "grid": m,
                "max_grid_modulus": peaks[0].modulus,
                "refined": refined,
                "max_modulus": best,
            });
            ctx.write("spectrum.json", &format!("{}\n", serde_json::to_string_pretty(&summary).expect("json")))?;
            ctx.run.summary = format!("max order-1 average {best:.6e} at N = {n} over {m} frequencies");
        }
        CommandConfig::EstimateOrder(p) => {
            let spec = p.weights.to_spec(seed)?;
            ctx.note_weights(&spec);
            let cps = ctx.checkpoints(default_checkpoints)?;
            let seq = spec.generate(cps.last())?;
            let options = ProfileOptions {
                grid_per_dim: p.grid,
                refine: !p.no_refine.unwrap_or(false),
                slope_window: p.slope_window,
                candidates: p.candidate.clone().unwrap_or_default().into_iter().map(|l| l.0).collect(),
                ..ProfileOptions::default()
            };
            let report = estimate_oscillation_profile(&seq, p.d_max.unwrap_or(2), &cps, &options)?;
            ctx.emit(Report::Oscillation(&report), Format::Json, "oscillation.json")?;
            ctx.emit(Report::Oscillation(&report), Format::Csv, "oscillation.csv")?;
            ctx.emit(Report::Oscillation(&report), Format::Svg, "oscillation.svg")?;
            let verdicts: Vec<String> = report
                .degrees
                .iter()
                .map(|r| format!("d={}: {}", r.degree, serde_json::to_value(r.verdict).expect("json").as_str().unwrap_or("")))
                .collect();
            ctx.run.summary = format!("order {} ({})", classify_exact_order(&report), verdicts.join(", "));
        }
        CommandConfig::SimulateTorus(p) => {
            let (sys, x) = torus_system(&p.torus)?;
            let steps = p.steps.unwrap_or(100);
            let mut csv = String::from("n");
            for j in 1..=sys.dim() {
                csv.push_str(&format!(",x{j}"));
            }
            csv.push('\n');
            let mut point = x.clone();
            for n in 0..steps {
                let coords: Vec<String> = point.to_f64s().iter().map(|c| format!("{c:?}")).collect();
                csv.push_str(&format!("{n},{}\n", coords.join(",")));
                point = sys.step(&point);
            }
            let closed = sys.orbit_point(&x, steps)?;
            ctx.write("orbit.csv", &csv)?;
            ctx.run.summary = format!(
                "{steps} orbit points; closed form at n = {steps} {} the iterated map",
                if closed == point { "matches" } else { "DIFFERS FROM" }
            );
        }
        CommandConfig::VerifyTower(p) => {
            let (sys, x) = torus_system(&p.torus)?;
            let character = CharacterObservable::new(required(&p.character, "character")?.0);
            if character.frequencies.len() != sys.dim() {
                return Err(Error::invalid(format!(
                    "character: expected {} frequencies, got {}",
                    sys.dim(),
                    character.frequencies.len()
                )));
            }
            let tower = if character.is_trivial() {
                QuasiEigenTower::constant(sys.dim(), 0)
            } else {
                build_tower(&sys, &character)?
            };
            let n_max = p.n_max.unwrap_or(1000);
            let q = tower_phase_polynomial(&sys, &tower, &x)?;
            let deviation = verify_factorization(&sys, &tower, &x, n_max)?;
            let body = json!({
                "order": tower.order(),
                "levels": tower.levels(),
                "identities_hold": tower.identities_hold(),
                "newton": q.newton_coefficients().iter().map(|c| c.to_f64()).collect::<Vec<_>>(),
                "monomial": q.monomial_coefficients(),
                "n_max": n_max,
                "deviation": deviation,
            });
            ctx.write("tower.json", &format!("{}\n", serde_json::to_string_pretty(&body).expect("json")))?;
            ctx.run.summary = format!(
                "order {}, identities {}, max deviation {:.3e} for n <= {n_max}",
                tower.order(),
                if tower.identities_hold() { "hold" } else { "FAIL" },
                deviation.max()
            );
        }
        CommandConfig::MultiAverage(p) => {
            let descriptor = match (&p.experiment, &p.descriptor) {
                (Some(e), _) => e.clone(),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::invalid(format!("descriptor: cannot read {}: {e}", path.display())))?;
                    ctx.run.inputs.push(path.clone());
                    ExperimentDescriptor::from_json(&text)?
                }
                (None, None) => return Err(Error::invalid("descriptor: required")),
            };
            descriptor.validate()?;
            if let WeightSpec::File { path } = &descriptor.weights {
                ctx.run.inputs.push(PathBuf::from(path));
            }
            let series = descriptor.run()?;
            ctx.emit(Report::Series(&series), Format::Csv, "multi_average.csv")?;
            ctx.emit(Report::Series(&series), Format::Svg, "multi_average.svg")?;
            ctx.run.summary = format!(
                "|A_N| = {:.6e} at N = {}",
                series.last().norm(),
                series.checkpoints.last().expect("non-empty")
            );
        }
        CommandConfig::SimulatePadic(p) => {
            let (sys, x0, level) = padic_system(&p.padic)?;
            let spec = p.weights.to_spec(seed)?;
            ctx.note_weights(&spec);
            let cps = ctx.checkpoints(default_checkpoints)?;
            let qs = p
                .q
                .clone()
                .unwrap_or_else(|| vec![IntList(vec![0, 1])])
                .into_iter()
                .map(|l| TimePolynomial::from_binomial(l.0))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::invalid(format!("q: {e}")))?;
            let seq = spec.generate(cps.last())?;
            let series = padic_weighted_average(&sys, level, &x0, &qs, &seq, &cps)?;
            ctx.emit(Report::Series(&series), Format::Csv, "padic_average.csv")?;
            ctx.run.summary = format!(
                "{}; |A_N| = {:.6e} at N = {}",
                minimality_note(&sys),
                series.last().norm(),
                cps.last()
            );
        }
        CommandConfig::Census(p) => {
            let (sys, x0, level) = padic_system(&p.padic)?;
            let classes = (sys.prime() as u128).pow(level as u32);
            let steps = p.steps.unwrap_or(classes.min(u64::MAX as u128) as u64);
            let census: BTreeMap<u64, u64> = orbit_residue_census(&sys, &x0, level, steps)?;
            ctx.emit(Report::Census(&census), Format::Csv, "census.csv")?;
            ctx.run.summary = format!(
                "{}; {} of {classes} classes visited in {steps} steps",
                minimality_note(&sys),
                census.len()
            );
        }
        CommandConfig::LskCheck(p) => {
            let distribution = parse_distribution(&p.distribution)?;
            let seeds: Vec<u64> = match &p.seeds {
                Some(list) => list
                    .0
                    .iter()
                    .map(|&s| u64::try_from(s).map_err(|_| Error::invalid(format!("seeds: {s} is negative"))))
                    .collect::<Result<_>>()?,
                None => vec![seed],
            };
            let degrees: Vec<usize> = match &p.degrees {
                Some(list) => list
                    .0
                    .iter()
                    .map(|&d| usize::try_from(d).map_err(|_| Error::invalid(format!("degrees: {d} is negative"))))
                    .collect::<Result<_>>()?,
                None => vec![1, 2],
            };
            let cps = ctx.checkpoints(|| Checkpoints::new((10..=16).map(|k| 1usize << k).collect()))?;
            let records = lsk_survey(distribution, &seeds, &degrees, &cps, p.grid.unwrap_or(16))?;
            ctx.emit(Report::Lsk(&records), Format::Csv, "lsk.csv")?;
            ctx.emit(Report::Lsk(&records), Format::Svg, "lsk.svg")?;
            let mut exponents = Vec::new();
            for &s in &seeds {
                for &d in &degrees {
                    let series: Vec<(f64, f64)> = records
                        .iter()
                        .filter(|r| r.seed == s && r.d == d)
                        .map(|r| (r.n as f64, r.sup))
                        .collect();
                    let slope = growth_exponent(&series).ok();
                    exponents.push(json!({"seed": s, "d": d, "exponent": slope}));
                }
            }
            let max_ratio = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
            let body = json!({"exponents": exponents, "max_ratio": max_ratio});
            ctx.write("lsk_summary.json", &format!("{}\n", serde_json::to_string_pretty(&body).expect("json")))?;
            ctx.run.summary = format!(
                "{} runs; max sup/sqrt(N log N) = {max_ratio:.4}",
                seeds.len() * degrees.len()
            );
        }
        CommandConfig::SubnormalCheck(p) => {
            let distribution = parse_distribution(&p.distribution)?;
            let lambdas = match &p.lambdas {
                Some(l) => l.0.clone(),
                None => {
                    let max = p.lambda_max.unwrap_or(5.0);
                    let steps = p.lambda_steps.unwrap_or(101);
                    if steps < 2 {
                        return Err(Error::invalid("lambda_steps: must be at least 2"));
                    }
                    (0..steps)
                        .map(|i| -max + 2.0 * max * i as f64 / (steps - 1) as f64)
                        .collect()
                }
            };
            let margins = subnormality_margin(&distribution, &lambdas).map_err(|e| Error::invalid(format!("lambdas: {e}")))?;
            ctx.emit(Report::Margins(&margins), Format::Csv, "margins.csv")?;
            let worst = margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
            ctx.run.summary = format!(
                "{} on the grid (smallest margin {worst:.6e})",
                if worst >= 0.0 { "subnormal" } else { "not subnormal" }
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a ExperimentConfig,
    inputs: Vec<String>,
    outputs: Vec<String>,
    wall_time_seconds: f64,
    summary: &'a str,
}

/// Runs one experiment and writes its manifest.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunSummary> {
    run_with_inputs(config, Vec::new())
}

fn run_with_inputs(config: &ExperimentConfig, inputs: Vec<PathBuf>) -> Result<RunSummary> {
    let started = Instant::now();
    let out = config.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    let mut ctx = Context {
        config,
        out: out.clone(),
        seed: config.seed.unwrap_or(DEFAULT_SEED),
        run: RunSummary {
            inputs,
            ..RunSummary::default()
        },
    };
    let threads = config.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("threads: {e}")))?;
    pool.install(|| run_command(&mut ctx))?;
    let manifest_path = out.join("manifest.json");
    let manifest = Manifest {
        tool: "oscillab",
        version: env!("CARGO_PKG_VERSION"),
        command: config.command.name(),
        config,
        inputs: ctx.run.inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: ctx.run.outputs.iter().map(|p| p.display().to_string()).collect(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        summary: &ctx.run.summary,
    };
    let body = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    std::fs::write(&manifest_path, body + "\n").map_err(|e| Error::io(&manifest_path, e))?;
    ctx.run.outputs.push(manifest_path);
    Ok(ctx.run)
}

/// 1 for inputs that fail validation, 2 for failures of the computation.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Parse { .. } | Error::Unsupported(_) => 1,
        Error::Range(_) | Error::Resource(_) | Error::Io { .. } => 2,
    }
}

/// Parses `args`, runs the experiment and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (config, inputs) = match resolve(&cli) {
        Ok(resolved) => resolved,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match run_with_inputs(&config, inputs) {
        Ok(run) => {
            println!("{}", run.summary);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Every long flag of every subcommand, one `subcommand: --flag …` line
/// each, sorted.
pub fn flag_inventory() -> String {
    let cmd = Cli::command();
    let mut out = String::new();
    let globals: Vec<String> = cmd
        .get_arguments()
        .filter_map(|a| a.get_long().map(|l| format!("--{l}")))
        .collect();
    out.push_str(&format!("(global): {}\n", globals.join(" ")));
    for sub in cmd.get_subcommands() {
        let mut flags: Vec<String> = sub
            .get_arguments()
            .filter(|a| !a.is_global_set())
            .filter_map(|a| a.get_long().map(|l| format!("--{l}")))
            .collect();
        flags.sort();
        out.push_str(&format!("{}: {}\n", sub.get_name(), flags.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let config = ExperimentConfig {
            command: CommandConfig::EstimateOrder(EstimateOrderParams {
                weights: WeightArgs {
                    generator: Some("polynomial-phase".into()),
                    alpha: Some(0.414_213_562_373_095_1),
                    power: Some(3),
                    ..WeightArgs::default()
                },
                d_max: Some(3),
                candidate: Some(vec![FloatList(vec![0.0, 0.25])]),
                ..EstimateOrderParams::default()
            }),
            out: Some(PathBuf::from("reports")),
            seed: Some(7),
            threads: None,
            checkpoints: Some(vec![100, 200, 400]),
        };
        let text = config.to_json();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), config);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["command"], "estimate-order");
        assert_eq!(v["params"]["d_max"], 3);
    }

    #[test]
    fn flags_override_config() {
        let base = CommandConfig::Census(CensusParams {
            padic: PadicArgs {
                p: Some(3),
                a: Some("4".into()),
                b: Some("1".into()),
                level: Some(2),
                ..PadicArgs::default()
            },
            steps: Some(9),
        });
        let flags = CommandConfig::Census(CensusParams {
            padic: PadicArgs {
                level: Some(1),
                ..PadicArgs::default()
            },
            steps: None,
        });
        let CommandConfig::Census(merged) = base.overlaid(&flags).unwrap() else {
            panic!("variant changed")
        };
        assert_eq!(merged.padic.level, Some(1));
        assert_eq!(merged.padic.p, Some(3));
        assert_eq!(merged.steps, Some(9));
        let other = CommandConfig::Generate(GenerateParams::default());
        assert!(base.overlaid(&other).unwrap_err().to_string().contains("command"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::invalid("x")), 1);
        assert_eq!(exit_code(&Error::Resource("x".into())), 2);
    }
}
