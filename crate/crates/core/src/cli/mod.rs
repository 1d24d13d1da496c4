//! Command-line front end: argument definitions and the five subcommands.
//!
//! Every command that writes files also writes a run manifest next to its
//! main output. Flags override values from `--config`, which override the
//! built-in defaults.

pub mod manifest;

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde::Deserialize;

use crate::alist::to_alist;
use crate::bch::HForm;
use crate::checkpoint::{CodeIdentity, ParamFile, TrainingState};
use crate::code::LinearCode;
use crate::codespec::{bch_from_nk, parse_code_spec};
use crate::decoder::{DecoderParams, Tying, Variant};
use crate::error::{Error, Result};
use crate::eval::{compare_curves, export_histograms, read_ber_csv, run_ber, write_ber_csv, Curve, EvalConfig};
use crate::train::{Init, LossMode, TrainConfig, Trainer};

pub use manifest::{sibling, unix_now, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "noms", version, about = "Train and evaluate belief-propagation decoders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the dimensions and degree profile of a code.
    CodeInfo(CodeInfoArgs),
    /// Train a NOMS, OMS or neural SPA decoder.
    Train(TrainArgs),
    /// Monte-Carlo BER/FER simulation over an SNR grid.
    Evaluate(EvaluateArgs),
    /// Per-iteration histograms of learned offsets.
    Histogram(HistogramArgs),
    /// SNR gaps and BER ratios between curves.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CodeArgs {
    /// `bch:N:K`, `spc:N`, `uncoded:N` or a path to an alist file.
    #[arg(long)]
    pub code: Option<String>,
    /// Shorthand for `--code bch:N:K`.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    pub bch: Option<Vec<usize>>,
    /// Parity-check matrix layout for BCH codes.
    #[arg(long, value_parser = ["systematic", "cyclic"])]
    pub h_form: Option<String>,
}

#[derive(Debug, Args)]
pub struct CodeInfoArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Also write H in alist format.
    #[arg(long)]
    pub alist: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LossArg {
    Final,
    AllIterations,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// JSON file with `code`, `h_form`, `variant` and a `train` section.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub variant: Option<Variant>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub minibatches: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub tying: Option<Tying>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Training Eb/N0 values in dB: `lo:hi:step`, `lo:hi` or a comma list.
    #[arg(long)]
    pub snr_set: Option<String>,
    /// `normal` or a constant offset value.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub eval_every: Option<usize>,
    #[arg(long)]
    pub heldout_frames: Option<usize>,
    #[arg(long, value_enum)]
    pub loss: Option<LossArg>,
    /// Continue from a checkpoint. Only `--minibatches` and `--eval-every`
    /// may change; everything else comes from the checkpoint.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    /// Output parameter file; logs and snapshots are written next to it.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Learned parameter file. Without it a fixed decoder is built from
    /// `--variant`, `--beta` and `--iterations`.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub variant: Option<Variant>,
    /// Offset for `oms`, or the constant initial offset for `noms`.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Eb/N0 grid in dB: `lo:hi:step`, `lo:hi` or a comma list.
    #[arg(long)]
    pub snr: Option<String>,
    #[arg(long)]
    pub min_frame_errors: Option<u64>,
    #[arg(long)]
    pub min_frames: Option<u64>,
    #[arg(long)]
    pub max_frames: Option<u64>,
    #[arg(long)]
    pub round_frames: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent random streams; also the thread count.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Transmit the all-zeros codeword instead of random codewords.
    #[arg(long)]
    pub all_zeros: bool,
    #[arg(long)]
    pub label: Option<String>,
    /// CSV output.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct HistogramArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// Override the code recorded in the parameter file.
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Tag in the file names; defaults to the minibatch count.
    #[arg(long)]
    pub stage: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// BER CSV files written by `evaluate`; the first curve is the reference.
    #[arg(long = "input", required = true, num_args = 1)]
    pub inputs: Vec<PathBuf>,
    /// Label of the reference curve, if not the first.
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long, default_value = "1e-2,1e-3,1e-4,1e-5")]
    pub targets: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub code: Option<String>,
    pub h_form: Option<HForm>,
    pub variant: Option<Variant>,
    pub train: Option<TrainConfig>,
    pub eval: Option<EvalConfig>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
            None => Ok(ConfigFile::default()),
        }
    }
}

/// Parses `lo:hi:step`, `lo:hi` (step 1) or a comma-separated list.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Argument(format!("cannot read SNR list {s:?}"));
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(num).collect::<Result<_>>()?;
        let (lo, hi, step) = match parts[..] {
            [lo, hi] => (lo, hi, 1.0),
            [lo, hi, step] => (lo, hi, step),
            _ => return Err(bad()),
        };
        if step <= 0.0 || hi < lo {
            return Err(bad());
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| lo + i as f64 * step).collect());
    }
    s.split(',').map(num).collect()
}

fn parse_init(s: &str) -> Result<Init> {
    match s {
        "normal" | "standard-normal" => Ok(Init::StandardNormal),
        v => v
            .parse()
            .map(Init::Constant)
            .map_err(|_| Error::Argument(format!("init must be `normal` or a number, got {v:?}"))),
    }
}

impl CodeArgs {
    /// Canonical spec string, falling back to `default` (a config file or
    /// parameter file entry).
    fn spec(&self, default: Option<&str>) -> Result<String> {
        if let Some(nk) = &self.bch {
            return Ok(format!("bch:{}:{}", nk[0], nk[1]));
        }
        self.code
            .clone()
            .or_else(|| default.map(str::to_string))
            .ok_or_else(|| Error::Argument("no code given (use --code or --bch)".into()))
    }

    fn form(&self, default: Option<HForm>) -> Result<HForm> {
        match &self.h_form {
            Some(f) => f.parse(),
            None => Ok(default.unwrap_or_default()),
        }
    }

    /// Builds the code; returns it with the spec string that rebuilds it.
    pub fn resolve(&self, default: Option<&str>, default_form: Option<HForm>) -> Result<(LinearCode, String)> {
        let spec = self.spec(default)?;
        let form = self.form(default_form)?;
        let code = match &self.bch {
            Some(nk) => bch_from_nk(nk[0], nk[1], form)?,
            None => parse_code_spec(&spec, form)?,
        };
        let source = if form == HForm::Cyclic && spec.to_ascii_lowercase().starts_with("bch:") {
            format!("{spec}@cyclic")
        } else {
            spec
        };
        Ok((code, source))
    }
}

/// Rebuilds a code from a `source` string as written by [`CodeArgs::resolve`].
pub fn code_from_source(source: &str) -> Result<LinearCode> {
    match source.strip_suffix("@cyclic") {
        Some(spec) => parse_code_spec(spec, HForm::Cyclic),
        None => parse_code_spec(source, HForm::Systematic),
    }
}

fn code_for_params(args: &CodeArgs, file: &ParamFile) -> Result<(LinearCode, String)> {
    if args.code.is_some() || args.bch.is_some() {
        return args.resolve(None, None);
    }
    let source = file.code.source.clone().ok_or_else(|| {
        Error::Argument("parameter file does not record its code; pass --code".into())
    })?;
    Ok((code_from_source(&source)?, source))
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?
        .install(f)
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => Ok(fs::create_dir_all(d)?),
        _ => Ok(()),
    }
}

fn write_rows<T: serde::Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(crate::eval::csv_error)?;
    for r in rows {
        w.serialize(r).map_err(crate::eval::csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs a parsed command. `argv` is recorded in manifests.
pub fn execute(cli: Cli, argv: Vec<String>) -> Result<()> {
    match cli.command {
        Command::CodeInfo(a) => code_info(&a),
        Command::Train(a) => train_cmd(&a, argv),
        Command::Evaluate(a) => evaluate_cmd(&a, argv),
        Command::Histogram(a) => histogram_cmd(&a, argv),
        Command::Compare(a) => compare_cmd(&a, argv),
    }
}

fn profile(p: &std::collections::BTreeMap<usize, usize>) -> String {
    p.iter().map(|(d, c)| format!("{d}x{c}")).collect::<Vec<_>>().join(" ")
}

fn code_info(a: &CodeInfoArgs) -> Result<()> {
    let (code, source) = a.code.resolve(None, None)?;
    let g = code.graph();
    let id = CodeIdentity::of(&code);
    println!("name: {}", code.name());
    println!("source: {source}");
    println!("n: {}", code.n());
    println!("k: {}", code.k());
    println!("rate: {:.6}", code.rate());
    println!("checks: {} (rank {})", g.num_checks(), code.parity_check().rank());
    println!("edges: {}", g.num_edges());
    println!("check degrees: {}", profile(&g.check_degree_profile()));
    println!("variable degrees: {}", profile(&g.var_degree_profile()));
    println!("h_checksum: {}", id.h_checksum);
    for (k, v) in code.metadata() {
        println!("{k}: {v}");
    }
    if let Some(path) = &a.alist {
        fs::write(path, to_alist(code.parity_check()))?;
        println!("alist written to {}", path.display());
    }
    Ok(())
}

fn training_file(code: &LinearCode, source: &str, trainer: &Trainer<'_>, manifest: &Path) -> ParamFile {
    let mut f = ParamFile::new(code, trainer.params().clone());
    f.code.source = Some(source.to_string());
    f.training = Some(TrainingState {
        variant: trainer.params().variant,
        config: trainer.config().clone(),
        adam: trainer.adam().clone(),
        next_minibatch: trainer.next_minibatch(),
    });
    f.manifest = Some(manifest.display().to_string());
    f
}

fn train_cmd(a: &TrainArgs, argv: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::start(argv, "train");
    let manifest_path = sibling(&a.out, ".manifest.json");
    let file = ConfigFile::load(a.config.as_deref())?;
    ensure_parent(&a.out)?;

    let resumed = a.resume.as_deref().map(ParamFile::load).transpose()?;
    let (code, source, cfg, start) = match &resumed {
        Some(pf) => {
            let state = pf
                .training
                .clone()
                .ok_or_else(|| Error::Format("checkpoint has no training state".into()))?;
            let (code, source) = code_for_params(&a.code, pf)?;
            pf.params_for(&code)?;
            let mut cfg = state.config;
            if let Some(m) = a.minibatches {
                cfg.minibatches = m;
            }
            if let Some(e) = a.eval_every {
                cfg.eval_every = e;
            }
            (code, source, cfg, Some((pf.params.clone(), state.adam, state.next_minibatch)))
        }
        None => {
            let (code, source) = a.code.resolve(file.code.as_deref(), file.h_form)?;
            let mut cfg = file.train.clone().unwrap_or_default();
            macro_rules! set {
                ($($flag:ident => $field:ident),*) => {$(
                    if let Some(v) = a.$flag.clone() { cfg.$field = v; }
                )*};
            }
            set!(iterations => iterations, minibatches => minibatches, batch_size => batch_size,
                 lr => learning_rate, tying => tying, seed => seed, eval_every => eval_every,
                 heldout_frames => heldout_frames);
            if let Some(s) = &a.snr_set {
                cfg.snr_set_db = parse_snr_list(s)?;
            }
            if let Some(s) = &a.init {
                cfg.init = parse_init(s)?;
            }
            if let Some(l) = a.loss {
                cfg.loss = match l {
                    LossArg::Final => LossMode::Final,
                    LossArg::AllIterations => LossMode::AllIterations,
                };
            }
            (code, source, cfg, None)
        }
    };
    let variant = a.variant.or(file.variant).unwrap_or(Variant::Noms);
    let mut trainer = match start {
        Some((params, adam, next)) => Trainer::resume(&code, cfg, params, adam, next)?,
        None => Trainer::new(&code, variant, cfg)?,
    };
    manifest.config = serde_json::to_value(trainer.config())?;
    manifest.seed = Some(trainer.config().seed);
    let mut id = CodeIdentity::of(&code);
    id.source = Some(source.clone());
    manifest.code = Some(id);
    info!(
        "training {} on {} ({} trainable values), minibatches {}..{}",
        trainer.params().variant,
        code.name(),
        trainer.params().num_trainable(),
        trainer.next_minibatch() + 1,
        trainer.config().minibatches
    );

    let mut snapshots = Vec::new();
    let outcome = with_threads(a.threads, || {
        trainer.run(|t| {
            let b = t.next_minibatch();
            let last = t.heldout_log().last().map_or(f64::NAN, |h| h.loss);
            info!("minibatch {b}: held-out loss {last:.6}");
            let path = sibling(&a.out, &format!(".mb{b}.json"));
            training_file(&code, &source, t, &manifest_path).save(&path)?;
            snapshots.push(path);
            Ok(())
        })
    });

    let log_path = sibling(&a.out, ".log.csv");
    let heldout_path = sibling(&a.out, ".heldout.csv");
    training_file(&code, &source, &trainer, &manifest_path).save(&a.out)?;
    write_rows(&log_path, trainer.log())?;
    write_rows(&heldout_path, trainer.heldout_log())?;
    for p in [&a.out, &log_path, &heldout_path].into_iter().chain(&snapshots) {
        manifest.output(p);
    }
    manifest.write(&manifest_path)?;
    match outcome {
        Ok(_) => {
            if let Some(h) = trainer.heldout_log().last() {
                info!("done: held-out loss {:.6} after minibatch {}", h.loss, h.minibatch);
            }
            Ok(())
        }
        Err(e) => {
            warn!("saved the last finite parameters to {}", a.out.display());
            Err(e)
        }
    }
}

fn evaluate_cmd(a: &EvaluateArgs, argv: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::start(argv, "evaluate");
    let file = ConfigFile::load(a.config.as_deref())?;
    let mut cfg = file.eval.clone().unwrap_or_default();
    if let Some(s) = &a.snr {
        cfg.snr_list_db = parse_snr_list(s)?;
    }
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = a.$field { cfg.$field = v; }
        )*};
    }
    set!(min_frame_errors, min_frames, max_frames, round_frames, seed, workers);
    cfg.all_zeros |= a.all_zeros;
    cfg.validate()?;

    let (code, source, params, default_label) = match &a.params {
        Some(path) => {
            let pf = ParamFile::load(path)?;
            let (code, source) = code_for_params(&a.code, &pf)?;
            let params = pf.params_for(&code)?.clone();
            if a.iterations.is_some_and(|t| t != params.iterations) {
                return Err(Error::Argument(format!(
                    "parameter file is unrolled for {} iterations",
                    params.iterations
                )));
            }
            let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("params").to_string();
            (code, source, params, label)
        }
        None => {
            let (code, source) = a.code.resolve(file.code.as_deref(), file.h_form)?;
            let variant = a.variant.or(file.variant).unwrap_or(Variant::Spa);
            let t = a.iterations.or(file.train.as_ref().map(|c| c.iterations)).unwrap_or(5);
            let need_beta = || a.beta.ok_or_else(|| Error::Argument(format!("--beta is required for {variant}")));
            let params = match variant {
                Variant::Spa => DecoderParams::spa(t),
                Variant::MinSum => DecoderParams::min_sum(t),
                Variant::Oms => DecoderParams::oms(t, need_beta()?),
                Variant::Noms => DecoderParams::noms_constant(t, code.graph(), Tying::PerEdge, need_beta()?),
                Variant::Nspa => DecoderParams::nspa_unit(t, code.graph()),
            };
            (code, source, params, variant.to_string())
        }
    };
    let label = a.label.clone().unwrap_or(default_label);
    manifest.config = serde_json::json!({ "eval": cfg, "params": params.variant, "iterations": params.iterations, "label": label });
    manifest.seed = Some(cfg.seed);
    let mut id = CodeIdentity::of(&code);
    id.source = Some(source);
    manifest.code = Some(id);

    info!("evaluating {label} on {} at {} SNR points", code.name(), cfg.snr_list_db.len());
    let points = with_threads(cfg.workers, || run_ber(&code, &params, &cfg))?;
    println!("{:>8} {:>12} {:>10} {:>12} {:>12} {:>12}", "Eb/N0", "frames", "frame_err", "BER", "FER", "censored");
    for p in &points {
        println!(
            "{:>8.2} {:>12} {:>10} {:>12.4e} {:>12.4e} {:>12}",
            p.ebn0_db, p.frames, p.frame_errors, p.ber, p.fer, p.censored
        );
    }
    ensure_parent(&a.out)?;
    write_ber_csv(&[Curve { label, points }], File::create(&a.out)?)?;
    manifest.output(&a.out);
    manifest.write(&sibling(&a.out, ".manifest.json"))
}

fn histogram_cmd(a: &HistogramArgs, argv: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::start(argv, "histogram");
    let pf = ParamFile::load(&a.params)?;
    let (code, source) = code_for_params(&a.code, &pf)?;
    let params = pf.params_for(&code)?;
    let stage = a.stage.clone().unwrap_or_else(|| match &pf.training {
        Some(t) => t.next_minibatch.to_string(),
        None => "final".to_string(),
    });
    let hists = export_histograms(params, code.graph(), a.bins)?;
    fs::create_dir_all(&a.out)?;
    for h in &hists {
        let path = a.out.join(format!("iteration_{}_{stage}.csv", h.iteration));
        h.write_csv(File::create(&path)?)?;
        println!("iteration {}: {}", h.iteration, path.display());
        manifest.output(&path);
    }
    manifest.config = serde_json::json!({ "params": a.params, "bins": a.bins, "stage": stage });
    let mut id = CodeIdentity::of(&code);
    id.source = Some(source);
    manifest.code = Some(id);
    manifest.write(&a.out.join(format!("histogram_{stage}.manifest.json")))
}

fn compare_cmd(a: &CompareArgs, argv: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::start(argv, "compare");
    let targets = a
        .targets
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Argument(format!("bad BER target {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut curves = Vec::new();
    for p in &a.inputs {
        curves.extend(read_ber_csv(File::open(p)?)?);
    }
    if let Some(r) = &a.reference {
        let i = curves
            .iter()
            .position(|c| &c.label == r)
            .ok_or_else(|| Error::Argument(format!("no curve labelled {r:?}")))?;
        let c = curves.remove(i);
        curves.insert(0, c);
    }
    let report = compare_curves(&curves, &targets)?;
    print!("{}", report.to_text());
    if let Some(out) = &a.out {
        ensure_parent(out)?;
        report.write_csv(File::create(out)?)?;
        manifest.config = serde_json::json!({ "inputs": a.inputs, "targets": targets, "reference": curves[0].label });
        manifest.output(out);
        manifest.write(&sibling(out, ".manifest.json"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_lists() {
        assert_eq!(parse_snr_list("1:8:1").unwrap(), (1..=8).map(f64::from).collect::<Vec<_>>());
        assert_eq!(parse_snr_list("1:2:0.5").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(parse_snr_list("3, 5").unwrap(), vec![3.0, 5.0]);
        assert_eq!(parse_snr_list("4").unwrap(), vec![4.0]);
        assert!(parse_snr_list("5:1").is_err());
        assert!(parse_snr_list("1:2:0").is_err());
        assert!(parse_snr_list("x").is_err());
    }

    #[test]
    fn init_values() {
        assert_eq!(parse_init("normal").unwrap(), Init::StandardNormal);
        assert_eq!(parse_init("0.5").unwrap(), Init::Constant(0.5));
        assert!(parse_init("gauss").is_err());
    }

    #[test]
    fn code_sources_round_trip() {
        let args = CodeArgs { bch: Some(vec![63, 45]), h_form: Some("cyclic".into()), ..Default::default() };
        let (code, source) = args.resolve(None, None).unwrap();
        assert_eq!(source, "bch:63:45@cyclic");
        let again = code_from_source(&source).unwrap();
        assert_eq!(code.parity_check().checksum(), again.parity_check().checksum());
        assert!(CodeArgs::default().resolve(None, None).is_err());
    }

    #[test]
    fn config_file_fills_missing_fields() {
        let cfg: ConfigFile =
            serde_json::from_str(r#"{"code":"bch:63:36","train":{"minibatches":10}}"#).unwrap();
        let train = cfg.train.unwrap();
        assert_eq!(train.minibatches, 10);
        assert_eq!(train.batch_size, TrainConfig::default().batch_size);
        assert!(serde_json::from_str::<ConfigFile>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling(Path::new("runs/a.json"), ".log.csv"), PathBuf::from("runs/a.log.csv"));
    }
}
