//! `pierce-lab`: run piercers, check certificates, fuzz, explore and draw.
//!
//! Exit codes: 0 success, 1 input error, 2 invalid instance (a disjoint
//! cross-color pair, printed as the witness), 3 a construction or
//! certificate failed on valid input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pierce_lab::disk::{disk_pierce, DiskError};
use pierce_lab::fuzz::{run_fuzz, FuzzConfig};
use pierce_lab::geometry::CERT_SLACK;
use pierce_lab::instance::{
    random_body, verify_cover, verify_piercing, BodyKind, ColoredInstance, CoverCertificate, CrossPair, PiercingCertificate,
    PointSetInstance,
};
use pierce_lab::oracle::{explore_conjecture, explore_from, min_piercing_exact, certified_family, write_jsonl};
use pierce_lab::render::render_svg;
use pierce_lab::symmetric::{centered_gauge, jung_radius};
use pierce_lab::{pierce, Method, PierceError};

const THREADS_ENV: &str = "PIERCE_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "pierce-lab", version, about = "Certified piercing of colorful families of convex translates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pierce an instance and print the certificate.
    Pierce(PierceArgs),
    /// Check a certificate against an instance and the exact oracle.
    Verify(VerifyArgs),
    /// Run seeded trials through generate, pierce and verify.
    Fuzz(FuzzArgs),
    /// Search for instances where every complement needs many points.
    Explore(ExploreArgs),
    /// Draw an instance, a certificate and its construction as SVG.
    Render(RenderArgs),
    /// Jung radius of a generator's difference gauge.
    Jung(JungArgs),
}

#[derive(Args, Debug)]
struct PierceArgs {
    /// Instance JSON (colored families, or `{"sets": ...}` point sets).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    method: Method,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Slack for the final certificate check.
    #[arg(long, default_value_t = CERT_SLACK)]
    slack: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Certificate JSON as printed by `pierce`.
    #[arg(long)]
    cert: PathBuf,
    #[arg(long, default_value_t = CERT_SLACK)]
    slack: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    method: Method,
    /// Failures file (JSON array of reproducible trials).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BodyArg {
    Disk,
    Square,
    Hexagon,
    Symmetric,
    Triangle,
    RandomTriangle,
    Polygon,
}

impl BodyArg {
    fn kind(self) -> BodyKind {
        match self {
            BodyArg::Disk => BodyKind::Disk,
            BodyArg::Square => BodyKind::Square,
            BodyArg::Hexagon => BodyKind::RegularPolygon(6),
            BodyArg::Symmetric => BodyKind::RandomSymmetric,
            BodyArg::Triangle => BodyKind::Triangle,
            BodyArg::RandomTriangle => BodyKind::RandomTriangle,
            BodyArg::Polygon => BodyKind::RandomPolygon,
        }
    }
}

#[derive(Args, Debug)]
struct ExploreArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hill-climbing trials after the seed evaluation.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, value_enum, default_value = "disk")]
    body: BodyArg,
    /// Start every trial from this instance instead of random ones.
    #[arg(long)]
    input: Option<PathBuf>,
    /// JSON-lines log, one record per trial.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    cert: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct JungArgs {
    /// Instance whose generator defines the gauge.
    #[arg(long, conflicts_with = "body")]
    input: Option<PathBuf>,
    /// Built-in body instead of an instance file.
    #[arg(long, value_enum)]
    body: Option<BodyArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

/// Failure classes, one per nonzero exit code.
enum Failure {
    Input(anyhow::Error),
    Invalid(CrossPair),
    Violation(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

enum Input {
    Colored(ColoredInstance),
    Sets(PointSetInstance),
}

fn load_input(path: &Path) -> anyhow::Result<Input> {
    let text = read(path)?;
    let raw: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    if raw.get("sets").is_some() {
        let sets = PointSetInstance::from_json(&text).map_err(|e| anyhow!("invalid point-set instance: {e}"))?;
        Ok(Input::Sets(sets))
    } else {
        let inst = ColoredInstance::from_json(&text).map_err(|e| anyhow!("invalid instance: {e}"))?;
        Ok(Input::Colored(inst))
    }
}

fn load_colored(path: &Path) -> anyhow::Result<ColoredInstance> {
    match load_input(path)? {
        Input::Colored(inst) => Ok(inst),
        Input::Sets(_) => Err(anyhow!("{} holds point sets; a colored instance is required", path.display())),
    }
}

fn cmd_pierce(args: &PierceArgs) -> CmdResult {
    match load_input(&args.input)? {
        Input::Colored(inst) => {
            let cert = pierce(&inst, args.method).map_err(|e| match e {
                PierceError::Incompatible { .. } => Failure::Input(anyhow!(e)),
                PierceError::InvalidInstance(pair) => Failure::Invalid(pair),
                PierceError::Internal(msg) => Failure::Violation(msg),
            })?;
            if let Err(fault) = verify_piercing(&inst, &cert, args.slack) {
                return Err(Failure::Violation(format!("certificate fails at slack {}: {fault}", args.slack)));
            }
            emit(args.out.as_deref(), &pretty(&cert))?;
        }
        Input::Sets(sets) => {
            if !matches!(args.method, Method::Auto | Method::Disk) {
                return Err(Failure::Input(anyhow!("point-set input only supports the disk method")));
            }
            let outcome = disk_pierce(&sets).map_err(|e| match e {
                DiskError::InvalidInput(pair) => Failure::Invalid(pair),
                other => Failure::Violation(other.to_string()),
            })?;
            if let Err(fault) = verify_cover(&sets, &outcome.certificate, args.slack) {
                return Err(Failure::Violation(format!("cover fails at slack {}: {fault}", args.slack)));
            }
            emit(args.out.as_deref(), &pretty(&outcome.certificate))?;
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let input = load_input(&args.input)?;
    let text = read(&args.cert)?;
    let report = match input {
        Input::Colored(inst) => {
            let cert: PiercingCertificate =
                serde_json::from_str(&text).map_err(|e| anyhow!("invalid piercing certificate: {e}"))?;
            if cert.family_index >= inst.num_families() {
                return Err(Failure::Input(anyhow!("family_index {} out of range", cert.family_index)));
            }
            let fault = verify_piercing(&inst, &cert, args.slack).err().map(|f| f.to_string());
            let oracle = if fault.is_none() { min_piercing_exact(&certified_family(&inst, &cert), 3).ok() } else { None };
            let pi_ok = fault.is_none() && oracle.is_some();
            json!({
                "valid": pi_ok,
                "kind": "piercing",
                "method": cert.method,
                "family_index": cert.family_index,
                "points": cert.points.len(),
                "fault": fault,
                "oracle_pi": oracle.map(|o| o.pi),
            })
        }
        Input::Sets(sets) => {
            let cert: CoverCertificate =
                serde_json::from_str(&text).map_err(|e| anyhow!("invalid cover certificate: {e}"))?;
            let fault = verify_cover(&sets, &cert, args.slack).err().map(|f| f.to_string());
            json!({
                "valid": fault.is_none(),
                "kind": "cover",
                "method": cert.method,
                "excluded_index": cert.excluded_index,
                "covers": cert.covers.len(),
                "fault": fault,
            })
        }
    };
    emit(args.out.as_deref(), &pretty(&report))?;
    if report["valid"] == json!(true) {
        Ok(())
    } else {
        Err(Failure::Violation("certificate rejected".into()))
    }
}

fn cmd_fuzz(args: &FuzzArgs) -> CmdResult {
    let summary = run_fuzz(&FuzzConfig { seed: args.seed, trials: args.trials, method: args.method });
    let by_method: serde_json::Map<String, Value> =
        summary.by_method.iter().map(|(m, n)| (m.name().to_string(), json!(n))).collect();
    let brief = json!({
        "seed": summary.seed,
        "method": summary.method.name(),
        "trials": summary.trials,
        "passed": summary.passed,
        "failed": summary.failed,
        "by_method": by_method,
        "reproducers": summary.failures.iter().map(|f| json!({
            "trial": f.spec.trial,
            "instance_seed": f.spec.instance_seed,
            "error": f.error,
        })).collect::<Vec<_>>(),
    });
    emit(None, &pretty(&brief))?;
    if let Some(path) = &args.out {
        emit(Some(path), &pretty(&summary.failures))?;
    }
    if summary.ok() {
        Ok(())
    } else {
        Err(Failure::Violation(format!("{} of {} trials failed", summary.failed, summary.trials)))
    }
}

fn cmd_explore(args: &ExploreArgs) -> CmdResult {
    if args.k < 2 {
        return Err(Failure::Input(anyhow!("--k must be at least 2")));
    }
    let report = match &args.input {
        Some(path) => explore_from(args.seed, args.trials, &load_colored(path)?),
        None => explore_conjecture(args.seed, args.trials, args.k, args.body.kind()),
    };
    if let Some(path) = &args.out {
        let file = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
        write_jsonl(&report.records, std::io::BufWriter::new(file)).context("writing the exploration log")?;
    }
    let brief = json!({
        "seed": args.seed,
        "trials": report.records.len(),
        "max_value": report.max_value,
        "counterexamples": report.counterexamples,
    });
    emit(None, &pretty(&brief))?;
    if report.counterexamples.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(format!("{} trials exceed 3", report.counterexamples.len())))
    }
}

fn cmd_render(args: &RenderArgs) -> CmdResult {
    let inst = load_colored(&args.input)?;
    let cert: PiercingCertificate =
        serde_json::from_str(&read(&args.cert)?).map_err(|e| anyhow!("invalid piercing certificate: {e}"))?;
    if cert.family_index >= inst.num_families() {
        return Err(Failure::Input(anyhow!("family_index {} out of range", cert.family_index)));
    }
    let svg = render_svg(&inst, &cert).map_err(|e| Failure::Input(anyhow!(e)))?;
    emit(Some(&args.out), &svg)?;
    Ok(())
}

fn cmd_jung(args: &JungArgs) -> CmdResult {
    use rand::SeedableRng;
    let generator = match (&args.input, args.body) {
        (Some(path), _) => load_colored(path)?.generator,
        (None, Some(body)) => random_body(body.kind(), &mut rand_chacha::ChaCha8Rng::seed_from_u64(args.seed)),
        (None, None) => return Err(Failure::Input(anyhow!("give --input or --body"))),
    };
    // Symmetric generators are their own gauge; others use the difference body.
    let gauge = match centered_gauge(&generator) {
        Ok((g, _)) => g,
        Err(_) => pierce_lab::geometry::difference_gauge(&generator),
    };
    let data = jung_radius(&gauge);
    emit(None, &pretty(&data))?;
    Ok(())
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().with_context(|| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
        if n == 0 {
            return Err(anyhow!("{THREADS_ENV} must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    let result = match &cli.command {
        Command::Pierce(a) => cmd_pierce(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Fuzz(a) => cmd_fuzz(a),
        Command::Explore(a) => cmd_explore(a),
        Command::Render(a) => cmd_render(a),
        Command::Jung(a) => cmd_jung(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(pair)) => {
            let witness = json!({ "error": "invalid-instance", "witness": pair });
            print!("{}", pretty(&witness));
            eprintln!(
                "error: translate {} of family {} and translate {} of family {} do not meet (distance {})",
                pair.index_a, pair.family_a, pair.index_b, pair.family_b, pair.distance
            );
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
