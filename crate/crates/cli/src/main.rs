use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use scaletop_core::continuity::{IntervalScaledMap, ModeSpec, ScaledMap};
use scaletop_core::finite_topology::{enumerate_topologies, validate_topology, PointId, Validation};
use scaletop_core::interval_world::{CarrierPoint, ExactNumber, PiecewiseAffineMap, Region, SheetId};
use scaletop_core::scales::{IntervalScale, Scale};
use scaletop_core::verifier::{
    self, fixtures, load_fixture, PropertyId, SweepConfig, SweepMode, VerificationReport,
};

#[derive(Parser)]
#[command(name = "scaletop", version, about = "Scaled topological spaces and fuzzy continuity")]
struct Cli {
    /// Suppress the summary on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a finite space or of a scale.
    Validate(ValidateArgs),
    /// Report the structure flags of a scale.
    Classify {
        #[arg(long)]
        scale: PathBuf,
    },
    /// Decide one continuity notion for a scaled map.
    Check {
        #[arg(long)]
        map: PathBuf,
        /// `<point|local|global>-<strong|weak>[-trivial]`.
        #[arg(long)]
        mode: String,
        /// A point index, or a number `[SHEET:]VALUE` for interval maps.
        #[arg(long)]
        at: Option<String>,
        /// A JSON list of regions replacing the probe family.
        #[arg(long)]
        probes: Option<PathBuf>,
    },
    /// List the gaps of a piecewise-affine map.
    Gaps {
        #[arg(long = "fn")]
        function: PathBuf,
        /// Decide fuzzy continuity for this threshold.
        #[arg(long)]
        threshold: Option<String>,
    },
    /// Emit a built-in fixture, or the table of fixture verdicts.
    Fixtures {
        #[arg(long)]
        name: Option<String>,
    },
    /// Sweep one property over a bounded universe.
    Verify(VerifyArgs),
    /// Stream every topology on `n` points, one JSON document per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ValidateArgs {
    #[arg(long)]
    space: Option<PathBuf>,
    #[arg(long)]
    scale: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    property: String,
    #[arg(long = "max-n")]
    max_n: usize,
    #[arg(long)]
    mode: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scales drawn per topology when sampling.
    #[arg(long)]
    budget: Option<usize>,
    /// Maps drawn per pair of scales when sampling.
    #[arg(long = "map-budget")]
    map_budget: Option<usize>,
}

/// What a subcommand produced: the exit code, the JSON document and a line
/// for standard error.
struct Output {
    code: u8,
    doc: Value,
    summary: String,
}

impl Output {
    fn new(holds: bool, doc: Value, summary: impl Into<String>) -> Self {
        Output { code: if holds { 0 } else { 1 }, doc, summary: summary.into() }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn decode<T: serde::de::DeserializeOwned>(value: Value, what: &str) -> Result<T> {
    serde_json::from_value(value).map_err(|e| anyhow!("malformed {what}: {e}"))
}

fn to_value(v: &impl serde::Serialize) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn is_finite_map(v: &Value) -> bool {
    v.get("table").is_some()
}

fn is_finite_scale(v: &Value) -> bool {
    v.get("space").is_some()
}

#[derive(serde::Deserialize)]
struct RawSpace {
    n: usize,
    opens: Vec<Vec<usize>>,
}

fn validate(args: ValidateArgs) -> Result<Output> {
    if let Some(path) = args.space {
        let raw: RawSpace = decode(read_json(&path)?, "space")?;
        let v = validate_topology(&raw.opens, raw.n)?;
        let ok = v.is_valid();
        let summary = match &v {
            Validation::Valid => format!("valid topology on {} points", raw.n),
            Validation::Invalid(why) => format!("not a topology: {why}"),
        };
        return Ok(Output::new(ok, json!({ "kind": "space", "validation": v }), summary));
    }
    let path = args.scale.expect("clap requires one input");
    let value = read_json(&path)?;
    if is_finite_scale(&value) {
        let scale: Scale = decode(value, "scale")?;
        let v = scale.validate();
        let ok = v.is_valid();
        let summary = match &v {
            Validation::Valid => "valid scale".to_string(),
            Validation::Invalid(why) => format!("not a scale: {why:?}"),
        };
        Ok(Output::new(ok, json!({ "kind": "scale", "validation": v }), summary))
    } else {
        let scale: IntervalScale = decode(value, "interval scale")?;
        let doc = match IntervalScale::new(scale.carrier().clone(), scale.kind().clone()) {
            Ok(_) => json!({ "kind": "interval_scale", "validation": { "status": "VALID" } }),
            Err(e) => json!({ "kind": "interval_scale", "validation": { "status": "INVALID", "violation": e.to_string() } }),
        };
        let ok = doc["validation"]["status"] == "VALID";
        Ok(Output::new(ok, doc, if ok { "valid interval scale" } else { "invalid interval scale" }))
    }
}

fn classify(path: &Path) -> Result<Output> {
    let value = read_json(path)?;
    if !is_finite_scale(&value) {
        bail!("classify takes a finite scale");
    }
    let scale: Scale = decode(value, "scale")?;
    if let Validation::Invalid(why) = scale.validate() {
        bail!("not a scale: {why:?}");
    }
    let flags = scale.classify();
    let summary = format!("F: {}, P: {}, U: {}, I: {}, L: {}", flags.is_F, flags.is_P, flags.is_U, flags.is_I, flags.is_L);
    Ok(Output::new(true, to_value(&flags)?, summary))
}

fn parse_carrier_point(text: &str) -> Result<CarrierPoint> {
    let (sheet, value) = match text.split_once(':') {
        Some((s, v)) => (SheetId(s.trim().parse().with_context(|| format!("bad sheet in `{text}`"))?), v),
        None => (SheetId(0), text),
    };
    Ok(CarrierPoint::new(sheet, value.parse::<ExactNumber>()?))
}

fn check(map: &Path, mode: &str, at: Option<String>, probes: Option<PathBuf>) -> Result<Output> {
    let spec: ModeSpec = mode.parse()?;
    let value = read_json(map)?;
    let (holds, doc) = if is_finite_map(&value) {
        if probes.is_some() {
            bail!("probes apply to interval maps only");
        }
        let map: ScaledMap = decode(value, "scaled map")?;
        let point = at.map(|p| p.parse::<usize>().map(PointId)).transpose().context("point must be an index")?;
        let verdict = map.check(&spec.with_point(point)?)?;
        (verdict.holds, to_value(&verdict)?)
    } else {
        let mut map: IntervalScaledMap = decode(value, "interval scaled map")?;
        if let Some(path) = probes {
            let regions: Vec<Region> = decode(read_json(&path)?, "probe list")?;
            map = IntervalScaledMap::new(
                map.map().clone(),
                map.domain().clone(),
                map.codomain().clone(),
                regions,
                map.points().to_vec(),
            )?;
        }
        let point = at.as_deref().map(parse_carrier_point).transpose()?;
        let verdict = map.check(&spec.with_point(point)?)?;
        (verdict.holds, to_value(&verdict)?)
    };
    let summary = format!("{mode}: {}", if holds { "holds" } else { "fails" });
    Ok(Output::new(holds, doc, summary))
}

fn gaps(path: &Path, threshold: Option<String>) -> Result<Output> {
    let f: PiecewiseAffineMap = decode(read_json(path)?, "piecewise-affine map")?;
    let gaps = f.gaps()?;
    let Some(a) = threshold else {
        let summary = format!("{} gap(s)", gaps.len());
        return Ok(Output::new(true, json!({ "gaps": gaps }), summary));
    };
    let a: ExactNumber = a.parse()?;
    let verdict = f.is_a_fuzzy_continuous(&a)?;
    let summary = format!("max gap {}, {a}-fuzzy continuous: {}", verdict.max_gap, verdict.holds);
    Ok(Output::new(verdict.holds, json!({ "gaps": gaps, "verdict": verdict }), summary))
}

fn fixture(name: Option<String>) -> Result<Output> {
    match name {
        Some(name) => {
            let f = load_fixture(&name)?;
            Ok(Output::new(true, to_value(&f)?, format!("fixture {name}")))
        }
        None => {
            let table = fixtures()?;
            let failed = table.iter().filter(|c| !c.passed()).count();
            let summary = format!("{} fixture checks, {failed} mismatched", table.len());
            Ok(Output::new(failed == 0, to_value(&table)?, summary))
        }
    }
}

fn verify(args: VerifyArgs) -> Result<Output> {
    let id: PropertyId = args.property.parse()?;
    let mode: SweepMode = args.mode.parse()?;
    let mut cfg = match mode {
        SweepMode::Exhaustive => SweepConfig::exhaustive(args.max_n),
        SweepMode::Sampled => SweepConfig::sampled(args.max_n, args.seed),
    };
    cfg.seed = args.seed;
    let scale_budget = args.budget.unwrap_or(cfg.scale_budget);
    let map_budget = args.map_budget.unwrap_or(cfg.map_budget);
    cfg = cfg.with_budget(scale_budget, map_budget);
    let report: VerificationReport = verifier::run_property(id, &cfg)?;
    let summary = format!(
        "{id}: {} ({} generated, {} tested, {} skipped, {} violations)",
        serde_json::to_value(report.verdict)?.as_str().unwrap_or_default(),
        report.generated,
        report.tested,
        report.skipped,
        report.violation_count
    );
    Ok(Output::new(report.confirmed(), to_value(&report)?, summary))
}

fn enumerate(n: usize, count: bool, quiet: bool) -> Result<u8> {
    let spaces = enumerate_topologies(n)?;
    let mut out = BufWriter::new(io::stdout().lock());
    let written: io::Result<()> = if count {
        writeln!(out, "{}", json!({ "n": n, "count": spaces.len() }))
    } else {
        spaces.iter().try_for_each(|s| writeln!(out, "{}", serde_json::to_string(s).expect("spaces serialize")))
    };
    match written.and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if !quiet {
        eprintln!("{} topologies on {n} points", spaces.len());
    }
    Ok(0)
}

/// Writes one document to standard output; a closed pipe is not an error.
fn emit(doc: &str) {
    let _ = writeln!(io::stdout().lock(), "{doc}");
}

fn run(cli: Cli) -> Result<u8> {
    let quiet = cli.quiet;
    let out = match cli.command {
        Command::Validate(args) => validate(args)?,
        Command::Classify { scale } => classify(&scale)?,
        Command::Check { map, mode, at, probes } => check(&map, &mode, at, probes)?,
        Command::Gaps { function, threshold } => gaps(&function, threshold)?,
        Command::Fixtures { name } => fixture(name)?,
        Command::Verify(args) => verify(args)?,
        Command::Enumerate { n, count } => return enumerate(n, count, quiet),
    };
    emit(&serde_json::to_string_pretty(&out.doc)?);
    if !quiet {
        eprintln!("{}", out.summary);
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            emit(&json!({ "error": format!("{e:#}") }).to_string());
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
