//! Command-line surface: argument parsing, table assembly and output files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rpig_core::model::{OffspringLaw, Player, PrimitiveDistribution};
use rpig_core::presets::{preset, PresetId};
use rpig_core::transforms::{avoidance_distribution, conditional_distribution_with};
use rpig_core::vgf::{self, FixedPointOptions};
use rpig_core::Error as CoreError;
use serde::Serialize;

use crate::csv_out::{opt_real, real, Table, ANALYZE_HEADER, SIMULATE_HEADER};
use crate::error::{AppError, Result};
use crate::manifest::{sha256_hex, RunManifest, Tolerances};
use crate::mc::{self, McEstimate};
use crate::model_file::{self, ModelFile};

#[derive(Debug, Parser)]
#[command(
    name = "rpig",
    version,
    about = "Value distributions of random perfect-information games"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value CDF and its per-player split over a grid of thresholds.
    Analyze(AnalyzeArgs),
    /// Value CDF over a grid of Player I activation probabilities.
    SweepQ(SweepArgs),
    /// Monte Carlo estimates against exact finite-depth targets.
    Simulate(SimulateArgs),
    /// Conditional-law report or avoidance model.
    Transform(TransformArgs),
    /// Re-run the command recorded in a manifest and check the output digest.
    Rerun(RerunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    GeometricEscape,
    NaryUniform,
    ClassicalGw,
    FiniteUniformLeaf,
}

#[derive(Clone, Debug, Args)]
pub struct ModelArgs {
    #[arg(
        long,
        required_unless_present = "model_file",
        conflicts_with = "model_file"
    )]
    pub preset: Option<PresetName>,
    #[arg(long)]
    pub model_file: Option<PathBuf>,
    /// Geometric offspring parameter.
    #[arg(long)]
    pub l: Option<f64>,
    /// Player I activation probability.
    #[arg(long)]
    pub q: Option<f64>,
    /// Children per node of the n-ary preset.
    #[arg(long)]
    pub n: Option<u32>,
    /// Offspring pmf `p0,p1,...`; overrides `--l` for presets taking an
    /// offspring law.
    #[arg(long, value_delimiter = ',')]
    pub offspring_pmf: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Args)]
pub struct TolArgs {
    #[arg(long, default_value_t = 1e-13)]
    pub tol_step: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub tol_resid: f64,
}

#[derive(Clone, Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, conflicts_with = "k_grid", required_unless_present = "k_grid")]
    pub k: Option<f64>,
    /// `lo:hi:step` or a comma list.
    #[arg(long)]
    pub k_grid: Option<String>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub k: f64,
    #[arg(long)]
    pub q_grid: String,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Cdf,
    StarRoot,
    SimpleStrategy,
}

#[derive(Clone, Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub k: f64,
    /// Truncation depths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<u32>,
    #[arg(long, default_value_t = 100_000)]
    pub n_samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Experiment::Cdf)]
    pub experiment: Experiment,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Report the law conditioned on `v >= k`.
    #[arg(
        long,
        conflicts_with = "avoidance",
        required_unless_present = "avoidance"
    )]
    pub conditional: Option<f64>,
    /// Emit the avoidance model as a model file.
    #[arg(long)]
    pub avoidance: bool,
    /// Grid size for the sampled conditional vgf.
    #[arg(long, default_value_t = 11)]
    pub grid_points: usize,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct RerunArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write here instead of the recorded output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `lo:hi:step` (from `lo` while below `hi + step / 2`) or a comma list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || AppError::Usage(format!("bad grid `{text}`"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(bad());
        };
        let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
        if !(step > 0.0 && lo.is_finite() && hi.is_finite()) {
            return Err(bad());
        }
        (0u64..)
            .map(|i| lo + i as f64 * step)
            .take_while(|x| *x < hi + 0.5 * step)
            .collect()
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(num)
            .collect::<Result<_>>()?
    };
    if values.is_empty() {
        return Err(AppError::Usage(format!("grid `{text}` is empty")));
    }
    Ok(values)
}

impl ModelArgs {
    fn offspring(&self) -> Result<OffspringLaw> {
        match (&self.offspring_pmf, self.l) {
            (Some(pmf), _) => Ok(OffspringLaw::FinitePmf(pmf.clone())),
            (None, Some(l)) => Ok(OffspringLaw::geometric(l)),
            (None, None) => Err(AppError::Usage("need --offspring-pmf or --l".into())),
        }
    }

    fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
        v.ok_or_else(|| AppError::Usage(format!("preset needs --{flag}")))
    }

    pub fn preset_id(&self) -> Result<Option<PresetId>> {
        let Some(name) = self.preset else {
            return Ok(None);
        };
        let q = || Self::need(self.q, "q");
        Ok(Some(match name {
            PresetName::GeometricEscape => PresetId::GeometricEscape {
                l: Self::need(self.l, "l")?,
                q: q()?,
            },
            PresetName::NaryUniform => PresetId::NaryUniform {
                n: Self::need(self.n, "n")?,
                q: q()?,
            },
            PresetName::ClassicalGw => PresetId::ClassicalGw {
                offspring: self.offspring()?,
            },
            PresetName::FiniteUniformLeaf => PresetId::FiniteUniformLeaf {
                offspring: self.offspring()?,
                q: q()?,
            },
        }))
    }

    pub fn load(&self) -> Result<PrimitiveDistribution> {
        match (self.preset_id()?, &self.model_file) {
            (Some(id), _) => Ok(preset(&id)?),
            (None, Some(path)) => model_file::read_model(path),
            (None, None) => Err(AppError::Usage("need --preset or --model-file".into())),
        }
    }

    /// Short description used in manifests and CSV cells.
    pub fn label(&self) -> String {
        if let Some(path) = &self.model_file {
            return format!("file:{}", path.display());
        }
        let name = self
            .preset
            .and_then(|p| p.to_possible_value())
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        let mut params = Vec::new();
        if let Some(l) = self.l {
            params.push(format!("l={l}"));
        }
        if let Some(n) = self.n {
            params.push(format!("n={n}"));
        }
        if let Some(q) = self.q {
            params.push(format!("q={q}"));
        }
        if let Some(pmf) = &self.offspring_pmf {
            params.push(format!(
                "pmf={}",
                pmf.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("/")
            ));
        }
        format!("preset:{name}({})", params.join(";"))
    }
}

impl TolArgs {
    fn options(&self) -> FixedPointOptions {
        FixedPointOptions {
            step_tol: self.tol_step,
            resid_tol: self.tol_resid,
            ..FixedPointOptions::default()
        }
    }

    fn record(&self) -> Tolerances {
        Tolerances {
            step: self.tol_step,
            resid: self.tol_resid,
        }
    }
}

/// Output bytes plus what the manifest needs to know about the run.
pub struct Produced {
    pub bytes: Vec<u8>,
    pub out: Option<PathBuf>,
    pub model_source: String,
    pub grid: String,
    pub master_seed: Option<u64>,
    pub tolerances: Tolerances,
    pub model_hash: u64,
}

fn analyze_row(
    p: &PrimitiveDistribution,
    k: f64,
    q_c: Option<f64>,
    opts: FixedPointOptions,
) -> Result<Vec<String>> {
    let fp = vgf::smallest_fixed_point(p, k, opts)?;
    let split = vgf::conditional_split(p, k, fp.alpha);
    Ok(vec![
        real(k),
        real(p.activation(Player::I)),
        real(fp.alpha),
        real(fp.beta()),
        opt_real(split.alpha_i),
        opt_real(split.alpha_ii),
        opt_real(split.beta_i),
        opt_real(split.beta_ii),
        real(vgf::d_param(p, k)),
        opt_real(q_c),
        fp.method.as_str().into(),
        fp.iterations.to_string(),
        real(fp.residual),
        vgf::positivity(p, k).beta_positive.to_string(),
    ])
}

pub fn analyze_table(
    p: &PrimitiveDistribution,
    ks: &[f64],
    opts: FixedPointOptions,
) -> Result<Table> {
    let independent = p.is_activation_independent();
    let rows: Vec<Vec<String>> = mc::install(|| {
        ks.par_iter()
            .map(|&k| {
                analyze_row(
                    p,
                    k,
                    independent.then(|| vgf::critical_activation(p, k)),
                    opts,
                )
            })
            .collect::<Result<_>>()
    })??;
    let mut table = Table::new(&ANALYZE_HEADER);
    rows.into_iter().for_each(|r| table.push(r));
    table.footer("esssup", real(vgf::essential_supremum(p, 1e-12)));
    Ok(table)
}

pub fn sweep_q_table(
    family: &PrimitiveDistribution,
    k: f64,
    qs: &[f64],
    opts: FixedPointOptions,
) -> Result<Table> {
    if !family.is_activation_independent() {
        return Err(CoreError::NotApplicable(
            "q sweeps need an activation-independent model".into(),
        )
        .into());
    }
    let q_c = vgf::critical_activation(family, k);
    let rows: Vec<Vec<String>> = mc::install(|| {
        qs.par_iter()
            .map(|&q| {
                let p = family.with_activation(q)?;
                analyze_row(&p, k, Some(q_c), opts)
            })
            .collect::<Result<_>>()
    })??;
    let mut table = Table::new(&ANALYZE_HEADER);
    rows.into_iter().for_each(|r| table.push(r));
    table.footer("q_c", real(q_c));
    Ok(table)
}

fn estimate_row(
    experiment: &str,
    model: &str,
    statistic: &str,
    k: f64,
    t: u32,
    e: Option<McEstimate>,
) -> Vec<String> {
    let mut row = vec![
        experiment.to_string(),
        model.to_string(),
        statistic.to_string(),
        real(k),
        t.to_string(),
    ];
    match e {
        Some(e) => row.extend([
            e.n.to_string(),
            real(e.mean),
            real(e.stderr),
            opt_real(e.exact_target),
            opt_real(e.z_score),
        ]),
        None => row.extend(["0", "na", "na", "na", "na"].map(String::from)),
    }
    row
}

pub fn simulate_table(
    p: &PrimitiveDistribution,
    args: &SimulateArgs,
    label: &str,
) -> Result<Table> {
    let mut table = Table::new(&SIMULATE_HEADER);
    let (k, n, seed) = (args.k, args.n_samples, args.seed);
    for &t in &args.t {
        match args.experiment {
            Experiment::Cdf => {
                let e = mc::estimate_truncated_cdf(p, k, t, n, seed)?;
                table.push(estimate_row("cdf", label, "alpha_t", k, t, Some(e)));
            }
            Experiment::StarRoot => {
                let r = mc::estimate_star_root(p, k, t, n, seed)?;
                table.push(estimate_row(
                    "star-root",
                    label,
                    "activation_I",
                    k,
                    t,
                    Some(r.activation_i),
                ));
                table.push(estimate_row(
                    "star-root",
                    label,
                    "mean_children_I",
                    k,
                    t,
                    r.mean_children_i,
                ));
                table.push(estimate_row(
                    "star-root",
                    label,
                    "mean_children_II",
                    k,
                    t,
                    r.mean_children_ii,
                ));
            }
            Experiment::SimpleStrategy => {
                let r = mc::simple_strategy_experiment(p, k, t, n, seed)?;
                table.push(estimate_row(
                    "simple-strategy",
                    label,
                    "win_probability_I",
                    k,
                    t,
                    Some(r.estimate),
                ));
                if table.footer.is_empty() {
                    table.footer("derived_mean", real(r.derived_mean));
                    table.footer("derived_survival", real(r.survival));
                }
            }
        }
    }
    Ok(table)
}

#[derive(Serialize)]
struct PerPlayer<T> {
    #[serde(rename = "I")]
    i: T,
    #[serde(rename = "II")]
    ii: T,
}

#[derive(Serialize)]
struct PmfTable {
    n_max: u32,
    #[serde(rename = "I")]
    i: Vec<f64>,
    #[serde(rename = "II")]
    ii: Vec<f64>,
}

#[derive(Serialize)]
struct ConditionalReport {
    k: f64,
    alpha: f64,
    beta: f64,
    activation: PerPlayer<f64>,
    conditional_mean: PerPlayer<Option<f64>>,
    offspring_mean: f64,
    d: f64,
    pmf: Option<PmfTable>,
    /// `[x, f*(k, x)]` pairs.
    vgf: Vec<[f64; 2]>,
}

/// The three quantities showing `P(v >= k) = 0`.
pub fn degenerate_certificate(p: &PrimitiveDistribution, k: f64) -> String {
    let r = vgf::positivity(p, k);
    format!(
        "P(v >= {k}) = 0: p(capacity < k) = {} > 0, p(capacity >= k, no children) = {} = 0, d(k) = {} <= 1",
        r.cond_gamma_lt_k, r.cond_leaf_mass, r.d_of_k
    )
}

pub fn conditional_report(
    p: &PrimitiveDistribution,
    k: f64,
    grid_points: usize,
    opts: FixedPointOptions,
) -> Result<String> {
    let star = conditional_distribution_with(p, k, opts)?;
    let n_max = p
        .blocks()
        .iter()
        .map(|b| b.offspring.max_support())
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().max().unwrap_or(0));
    let pmf = match n_max {
        Some(n_max) => {
            let row = |i| {
                (0..=n_max)
                    .map(|n| star.pmf(i, k, n, n_max))
                    .collect::<rpig_core::Result<Vec<_>>>()
            };
            Some(PmfTable {
                n_max,
                i: row(Player::I)?,
                ii: row(Player::II)?,
            })
        }
        None => None,
    };
    let steps = grid_points.max(2) - 1;
    let report = ConditionalReport {
        k,
        alpha: star.alpha(),
        beta: star.beta(),
        activation: PerPlayer {
            i: star.activation(Player::I),
            ii: star.activation(Player::II),
        },
        conditional_mean: PerPlayer {
            i: star.conditional_mean(Player::I).ok(),
            ii: star.conditional_mean(Player::II).ok(),
        },
        offspring_mean: star.offspring_mean(),
        d: vgf::d_param(p, k),
        pmf,
        vgf: (0..=steps)
            .map(|j| {
                let x = j as f64 / steps as f64;
                [x, star.vgf(k, x)]
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    Ok(text)
}

/// Computes the output of a command without writing anything.
pub fn produce(command: &Command) -> Result<Produced> {
    let base = |model: &ModelArgs,
                tol: Tolerances,
                grid: String,
                seed,
                out: &Option<PathBuf>,
                p: &PrimitiveDistribution| {
        Produced {
            bytes: Vec::new(),
            out: out.clone(),
            model_source: model.label(),
            grid,
            master_seed: seed,
            tolerances: tol,
            model_hash: p.model_hash(),
        }
    };
    match command {
        Command::Analyze(a) => {
            let p = a.model.load()?;
            let (ks, grid) = match (&a.k_grid, a.k) {
                (Some(g), _) => (parse_grid(g)?, format!("k={g}")),
                (None, Some(k)) => (vec![k], format!("k={k}")),
                (None, None) => return Err(AppError::Usage("need --k or --k-grid".into())),
            };
            let table = analyze_table(&p, &ks, a.tol.options())?;
            Ok(Produced {
                bytes: table.to_bytes(),
                ..base(&a.model, a.tol.record(), grid, None, &a.out, &p)
            })
        }
        Command::SweepQ(s) => {
            let p = s.model.load()?;
            let qs = parse_grid(&s.q_grid)?;
            let table = sweep_q_table(&p, s.k, &qs, s.tol.options())?;
            let grid = format!("k={};q={}", s.k, s.q_grid);
            Ok(Produced {
                bytes: table.to_bytes(),
                ..base(&s.model, s.tol.record(), grid, None, &s.out, &p)
            })
        }
        Command::Simulate(s) => {
            let p = s.model.load()?;
            let label = s.model.label();
            let table = simulate_table(&p, s, &label)?;
            let t: Vec<String> = s.t.iter().map(|t| t.to_string()).collect();
            let grid = format!(
                "k={};t={};n={};experiment={:?}",
                s.k,
                t.join(","),
                s.n_samples,
                s.experiment
            );
            let tol = Tolerances {
                step: 0.0,
                resid: 0.0,
            };
            Ok(Produced {
                bytes: table.to_bytes(),
                ..base(&s.model, tol, grid, Some(s.seed), &s.out, &p)
            })
        }
        Command::Transform(x) => {
            let p = x.model.load()?;
            let (bytes, grid) = if x.avoidance {
                (
                    ModelFile::from(&avoidance_distribution(&p)?)
                        .to_json()
                        .into_bytes(),
                    "avoidance".to_string(),
                )
            } else {
                let k = x
                    .conditional
                    .ok_or_else(|| AppError::Usage("need --conditional or --avoidance".into()))?;
                (
                    conditional_report(&p, k, x.grid_points, x.tol.options())?.into_bytes(),
                    format!("conditional k={k}"),
                )
            };
            Ok(Produced {
                bytes,
                ..base(&x.model, x.tol.record(), grid, None, &x.out, &p)
            })
        }
        Command::Rerun(_) => Err(AppError::Usage("rerun cannot be nested".into())),
    }
}

fn emit(produced: &Produced, command: Vec<String>) -> Result<()> {
    let Some(out) = &produced.out else {
        io::stdout().write_all(&produced.bytes)?;
        return Ok(());
    };
    fs::write(out, &produced.bytes)?;
    RunManifest {
        command,
        model_source: produced.model_source.clone(),
        grid: produced.grid.clone(),
        master_seed: produced.master_seed,
        tolerances: produced.tolerances.clone(),
        toolkit_version: env!("CARGO_PKG_VERSION").into(),
        model_hash: format!("{:016x}", produced.model_hash),
        output: out.clone(),
        output_sha256: sha256_hex(&produced.bytes),
    }
    .write()?;
    Ok(())
}

fn with_out(mut command: Vec<String>, out: &Path) -> Vec<String> {
    match command.iter().position(|a| a == "--out") {
        Some(i) if i + 1 < command.len() => command[i + 1] = out.display().to_string(),
        _ => {
            if let Some(i) = command.iter().position(|a| a.starts_with("--out=")) {
                command.remove(i);
            }
            command.extend(["--out".to_string(), out.display().to_string()]);
        }
    }
    command
}

/// Runs a parsed command; `args` are the arguments after the program name,
/// recorded verbatim in the manifest.
pub fn execute(cli: &Cli, args: &[String]) -> Result<()> {
    if let Command::Rerun(r) = &cli.command {
        let manifest = RunManifest::read(&r.manifest)?;
        let command = match &r.out {
            Some(out) => with_out(manifest.command.clone(), out),
            None => manifest.command.clone(),
        };
        let argv = std::iter::once("rpig".to_string()).chain(command.iter().cloned());
        let inner = Cli::try_parse_from(argv).map_err(|e| AppError::Usage(e.to_string()))?;
        let produced = produce(&inner.command)?;
        if sha256_hex(&produced.bytes) != manifest.output_sha256 {
            return Err(AppError::NotReproduced(
                manifest.output.display().to_string(),
            ));
        }
        return emit(&produced, command);
    }
    let produced = match produce(&cli.command) {
        Err(AppError::Core(CoreError::DegenerateConditioning { k })) => {
            if let Command::Transform(x) = &cli.command {
                if let Ok(p) = x.model.load() {
                    eprintln!("{}", degenerate_certificate(&p, k));
                }
            }
            return Err(CoreError::DegenerateConditioning { k }.into());
        }
        other => other?,
    };
    emit(&produced, args.to_vec())
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, &argv[1.min(argv.len())..]) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
