//! Command-line front end. Exit codes: 0 pass, 1 verification failure,
//! 2 invalid configuration.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::analysis::{self, QRange};
use crate::exchange::write_transcript;
use crate::jcm::{compare, JcmSpec};
use crate::scheme::{
    preset, two_group_spec, Preset, SchemeError, SchemeSpec, SystemParams, TransmitterSelection,
    UserGrouping,
};
use crate::verifier::{
    simulate, verify_claims, verify_lemma1, verify_lemma3, verify_odd_t_obstruction,
    verify_remark3, Demands, VerifyError,
};

pub const OUT_DIR_ENV: &str = "PTCACHE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "ptcache",
    version,
    about = "Packet-type D2D coded caching toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive a scheme and print its blueprint.
    Construct(SchemeArgs),
    /// Run placement, delivery and decoding on real bytes.
    Simulate(SimulateArgs),
    /// Check the algebraic claims over a parameter grid.
    Verify(VerifyArgs),
    /// Ratio records for the odd-K construction.
    Sweep(SweepArgs),
    /// Simulate a scheme and the baseline side by side.
    Compare(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[arg(long = "K")]
    pub k: u32,
    #[arg(long)]
    pub t: u32,
    /// Number of files (default K).
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long, default_value = "theorem1")]
    pub preset: String,
    /// Bytes per packet-size unit.
    #[arg(long, default_value_t = 1)]
    pub unit: u32,
    /// Comma-separated group sizes, replacing the preset layout.
    #[arg(long)]
    pub grouping: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// distinct, uniform, or a comma-separated list of file indices.
    #[arg(long, default_value = "distinct")]
    pub demands: String,
    /// JSON-lines transcript of every coded message.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Accepted for symmetry with verify; a failing report always exits 1.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub claims: bool,
    #[arg(long)]
    pub lemma1: bool,
    #[arg(long)]
    pub lemma3: bool,
    #[arg(long)]
    pub remark3: bool,
    #[arg(long)]
    pub obstruction: bool,
    /// Comma-separated t values.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<u32>,
    #[arg(long = "K")]
    pub k: Option<u32>,
    /// Inclusive range `a:b`.
    #[arg(long = "q-range")]
    pub q_range: Option<String>,
    #[arg(long)]
    pub q: Option<u32>,
    /// Comma-separated r values for the odd-t check.
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<u32>,
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 4, 6, 8])]
    pub t: Vec<u32>,
    /// Largest q (default t+50 per t).
    #[arg(long = "q-max")]
    pub q_max: Option<u32>,
    /// Inclusive range `a:b`; overrides --q-max.
    #[arg(long = "q-range")]
    pub q_range: Option<String>,
    #[arg(long, default_value = "theorem1")]
    pub preset: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<SchemeError> for Failure {
    fn from(e: SchemeError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn open_out(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let p = resolve(p);
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    let mut w = open_out(path)?;
    writeln!(w, "{text}")?;
    w.flush()
}

pub fn parse_range(s: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::Config(format!("bad range {s:?}, expected a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn build_spec(a: &SchemeArgs) -> Result<SchemeSpec, Failure> {
    let params = SystemParams::new(a.k, a.t, a.n.unwrap_or(a.k), a.unit)?;
    let Some(g) = &a.grouping else {
        let p: Preset = a.preset.parse().map_err(Failure::Config)?;
        return Ok(preset(p, params)?);
    };
    let sizes = g
        .split(',')
        .map(|x| x.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Config(format!("bad grouping {g:?}")))?;
    let grouping = UserGrouping::new(sizes)?;
    let spec = match grouping.num_groups() {
        1 => SchemeSpec::new(
            params,
            grouping,
            vec![TransmitterSelection::new(vec![vec![0]])],
        )?,
        _ => two_group_spec(params, grouping)?,
    };
    Ok(spec)
}

fn cmd_construct(a: &SchemeArgs) -> Result<bool, Failure> {
    let spec = build_spec(a)?;
    let bp = crate::scheme::Blueprint::derive(spec)?;
    emit(a.output.as_deref(), &bp.to_json())?;
    Ok(true)
}

fn demands_of(a: &SimulateArgs) -> Result<Vec<u32>, Failure> {
    let d: Demands = a.demands.parse().map_err(Failure::Config)?;
    let k = a.scheme.k;
    Ok(d.resolve(k, a.scheme.n.unwrap_or(k)))
}

fn cmd_simulate(a: &SimulateArgs) -> Result<bool, Failure> {
    let spec = build_spec(&a.scheme)?;
    let demands = demands_of(a)?;
    let sim = simulate(spec, &demands, a.seed);
    if let Some(t) = &a.transcript {
        let mut w = open_out(Some(t))?;
        write_transcript(&sim.messages, &mut w)?;
        w.flush()?;
    }
    emit(a.scheme.output.as_deref(), &sim.report.to_json())?;
    Ok(sim.report.pass)
}

fn cmd_compare(a: &SimulateArgs) -> Result<bool, Failure> {
    let spec = build_spec(&a.scheme)?;
    let demands = demands_of(a)?;
    let s = &a.scheme;
    let j = JcmSpec::new(s.k, s.t, s.n.unwrap_or(s.k), s.unit)?;
    let c = compare(spec, &j, &demands, a.seed).map_err(|e| Failure::Config(e.to_string()))?;
    let text = serde_json::to_string_pretty(&c).expect("serializes");
    emit(s.output.as_deref(), &text)?;
    Ok(c.pass)
}

fn q_bounds(a: &VerifyArgs, default: (u32, u32)) -> Result<(u32, u32), Failure> {
    if let Some(q) = a.q {
        return Ok((q, q));
    }
    match &a.q_range {
        Some(s) => parse_range(s),
        None => Ok(default),
    }
}

fn ts_or(a: &VerifyArgs, default: &[u32]) -> Vec<u32> {
    if a.t.is_empty() {
        default.to_vec()
    } else {
        a.t.clone()
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializes")
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool, Failure> {
    let any = a.claims || a.lemma1 || a.lemma3 || a.remark3 || a.obstruction;
    let mut out = Map::new();
    let mut pass = true;

    if a.claims || !any {
        let mut v = Vec::new();
        for t in ts_or(a, &[2, 4, 6, 8]) {
            let (lo, hi) = q_bounds(a, (t + 1, t + 20))?;
            for q in lo..=hi {
                let r = verify_claims(t, q)?;
                pass &= r.pass;
                v.push(to_value(&r));
            }
        }
        out.insert("claims".into(), Value::Array(v));
    }
    if a.lemma1 || !any {
        let mut v = Vec::new();
        for t in ts_or(a, &[2, 4, 6]) {
            let (lo, hi) = q_bounds(a, (t + 1, t + 15))?;
            let r = verify_lemma1(t, lo..=hi)?;
            pass &= r.pass;
            v.push(to_value(&r));
        }
        out.insert("lemma1".into(), Value::Array(v));
    }
    if a.lemma3 || !any {
        let cases: Vec<(u32, u32)> = match (a.k, a.t.as_slice()) {
            (Some(k), ts) if !ts.is_empty() => ts.iter().map(|&t| (k, t)).collect(),
            (Some(_), _) => return Err(Failure::Config("--lemma3 with --K needs --t".into())),
            (None, _) => vec![(13, 2), (15, 2), (15, 4), (17, 4)],
        };
        let mut v = Vec::new();
        for (k, t) in cases {
            if k % 2 == 0 || t % 2 != 0 {
                return Err(Failure::Config(format!(
                    "lemma3 needs odd K and even t (K = {k}, t = {t})"
                )));
            }
            let r = verify_lemma3((k - 1) / 2, t / 2)?;
            pass &= r.pass;
            v.push(to_value(&r));
        }
        out.insert("lemma3".into(), Value::Array(v));
    }
    if a.remark3 || !any {
        let (lo, hi) = q_bounds(a, (3, 12))?;
        let mut v = Vec::new();
        for q in lo..=hi {
            let r = verify_remark3(q)?;
            pass &= r.pass;
            v.push(to_value(&r));
        }
        out.insert("remark3".into(), Value::Array(v));
    }
    if a.obstruction || !any {
        let rs: Vec<u32> = if a.r.is_empty() {
            (1..=6).collect()
        } else {
            a.r.clone()
        };
        let mut v = Vec::new();
        for r in rs {
            let rep = verify_odd_t_obstruction(r)?;
            pass &= rep.pass;
            v.push(to_value(&rep));
        }
        out.insert("obstruction".into(), Value::Array(v));
    }
    out.insert("pass".into(), json!(pass));
    let text = serde_json::to_string_pretty(&Value::Object(out)).expect("serializes");
    emit(a.output.as_deref(), &text)?;
    Ok(pass || !a.strict)
}

fn cmd_sweep(a: &SweepArgs) -> Result<bool, Failure> {
    let p: Preset = a.preset.parse().map_err(Failure::Config)?;
    if p != Preset::Theorem1 {
        return Err(Failure::Config(format!(
            "sweep covers the theorem1 construction only; use construct or simulate with --preset {p}"
        )));
    }
    let range = match &a.q_range {
        Some(s) => {
            let (lo, hi) = parse_range(s)?;
            QRange {
                lo: Some(lo),
                hi: Some(hi),
            }
        }
        None => QRange {
            lo: None,
            hi: a.q_max,
        },
    };
    let records = analysis::sweep(&a.t, range).map_err(|e| Failure::Config(e.to_string()))?;
    match a.format {
        Format::Json => emit(a.output.as_deref(), &analysis::to_json(&records))?,
        Format::Csv => {
            let mut w = open_out(a.output.as_deref())?;
            analysis::write_csv(&records, &mut w).map_err(|e| Failure::Io(e.into()))?;
            w.flush()?;
        }
    }
    Ok(true)
}

pub fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Compare(a) => cmd_compare(a),
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
