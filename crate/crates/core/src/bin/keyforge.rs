//! `keyforge`: key generation and reproduction from PUF responses, block-error
//! simulation and analysis of the preset codes.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or file-format error,
//! 3 length mismatch, 4 decoding failure.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use keyforge::analysis::{
    default_tail, gc_stage_models, level_channels, monte_carlo_block_error, radius_csv, radius_table, stage_fail_prob,
    union_bound, AnalysisError, TailModel, DEFAULT_TRANSFORM_TRIALS,
};
use keyforge::channel::RngStream;
use keyforge::extractor::{self, ExtractorError, HelperData, Sha256Trunc128};
use keyforge::gccode::{preset, GcError, Preset, PRESET_IDS};
use keyforge::linearcode::DecodeOutcome;

#[derive(Parser)]
#[command(name = "keyforge", version, about = "Channel codes for PUF key reproduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate helper data and a key from a response file.
    Gen {
        #[arg(long)]
        code: String,
        /// Response bits, packed MSB-first.
        #[arg(long)]
        response: PathBuf,
        #[arg(long)]
        helper: PathBuf,
        #[arg(long)]
        key: PathBuf,
        /// Seed for the random codeword; drawn from the OS when omitted.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reproduce a key from a noisy response and helper data.
    Rep {
        #[arg(long)]
        helper: PathBuf,
        #[arg(long)]
        response: PathBuf,
        #[arg(long)]
        key: PathBuf,
    },
    /// Monte-Carlo block-error rate over a binary symmetric channel.
    Simulate {
        #[arg(long)]
        code: String,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        gmd: Option<Switch>,
        /// Print one CSV row (with header) instead of the report.
        #[arg(long)]
        csv: bool,
    },
    /// Per-stage failure probabilities and the union bound.
    Analyze {
        #[arg(long)]
        code: String,
        #[arg(long)]
        p: f64,
        /// Trials for levels whose channel is estimated rather than computed.
        #[arg(long, default_value_t = DEFAULT_TRANSFORM_TRIALS)]
        transform_trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tail model; defaults to the one matching the preset's reference figures.
        #[arg(long, value_enum)]
        tail: Option<Tail>,
    },
    /// Power decoding radius per dimension for RS codes of length n.
    Radius {
        #[arg(long)]
        n: usize,
        /// Inclusive range such as `1-32`; defaults to all dimensions.
        #[arg(long)]
        k_range: Option<String>,
        #[arg(long)]
        csv: bool,
    },
    /// Comparison table of all presets at p = 0.14.
    Table4 {
        #[arg(long, default_value_t = DEFAULT_TRANSFORM_TRIALS)]
        transform_trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tail {
    Trinomial,
    Conditional,
    Independent,
}

impl From<Tail> for TailModel {
    fn from(t: Tail) -> Self {
        match t {
            Tail::Trinomial => TailModel::Trinomial,
            Tail::Conditional => TailModel::ConditionalErrors,
            Tail::Independent => TailModel::IndependentCounts,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: ExtractorError },
    #[error("{0}")]
    Length(String),
    #[error("decoding failed; no key reproduced")]
    DecodeFailure,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Analysis(_) => 1,
            CliError::Io { .. } | CliError::Format { .. } => 2,
            CliError::Length(_) => 3,
            CliError::DecodeFailure => 4,
        }
    }
}

impl From<GcError> for CliError {
    fn from(e: GcError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

/// Write through a temporary file in the target directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_owned(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn read_response(path: &Path, n: usize) -> Result<Vec<bool>, CliError> {
    let bytes = read(path)?;
    extractor::unpack_bits(&bytes, n).map_err(|e| match e {
        ExtractorError::LengthMismatch { .. } => CliError::Length(format!(
            "{}: expected {n} bits ({} bytes), got {} bytes",
            path.display(),
            n.div_ceil(8),
            bytes.len()
        )),
        other => CliError::Format { path: path.to_owned(), source: other },
    })
}

fn gc_preset(code: &str) -> Result<keyforge::gccode::GcCodeSpec, CliError> {
    Ok(preset(code)?.gc()?)
}

fn check_p(p: f64) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Usage(format!("--p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn sci(x: f64) -> String {
    format!("{x:.2e}")
}

fn cmd_gen(code: &str, response: &Path, helper: &Path, key: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let spec = gc_preset(code)?;
    let r = read_response(response, spec.n())?;
    let seed = match seed {
        Some(s) => s,
        None => getrandom::u64().map_err(|e| CliError::Io { path: "<os rng>".into(), source: std::io::Error::other(e.to_string()) })?,
    };
    let (h, k) = extractor::gen(&r, &spec, &mut RngStream::new(seed, 0)).map_err(|e| CliError::Usage(e.to_string()))?;
    let bytes = h.to_bytes().map_err(|e| CliError::Usage(e.to_string()))?;
    write_atomic(helper, &bytes)?;
    write_atomic(key, &k.key)?;
    Ok(())
}

fn cmd_rep(helper: &Path, response: &Path, key: &Path) -> Result<(), CliError> {
    let h = HelperData::from_bytes(&read(helper)?).map_err(|source| CliError::Format { path: helper.to_owned(), source })?;
    let r = read_response(response, h.n())?;
    let spec = gc_preset(&h.code_id)?;
    if spec.n() != h.n() {
        return Err(CliError::Length(format!("helper has {} bits but {} has length {}", h.n(), spec.id(), spec.n())));
    }
    match extractor::rep_with(&r, &h, &spec, &Sha256Trunc128) {
        Ok(DecodeOutcome::Decoded(k)) => write_atomic(key, &k.key),
        Ok(DecodeOutcome::Failure) => Err(CliError::DecodeFailure),
        Err(e @ ExtractorError::LengthMismatch { .. }) => Err(CliError::Length(e.to_string())),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

fn cmd_simulate(code: &str, p: f64, trials: u64, seed: u64, gmd: Option<Switch>, csv: bool) -> Result<(), CliError> {
    check_p(p)?;
    let mut spec = gc_preset(code)?;
    if let Some(g) = gmd {
        spec = spec.with_gmd(matches!(g, Switch::On));
    }
    let r = monte_carlo_block_error(&spec, p, trials, seed)?;
    let gmd_label = match gmd {
        Some(Switch::On) => "on",
        Some(Switch::Off) => "off",
        None => "default",
    };
    if csv {
        println!("code,p,trials,seed,gmd,block_errors,estimate,wilson_lo,wilson_hi");
        println!(
            "{},{},{},{},{},{},{},{},{}",
            code,
            p,
            trials,
            seed,
            gmd_label,
            r.block_errors,
            sci(r.estimate),
            sci(r.interval.0),
            sci(r.interval.1)
        );
        return Ok(());
    }
    println!("code {code}  p {}  trials {trials}  seed {seed}  gmd {gmd_label}", sci(p));
    println!("block errors {}", r.block_errors);
    println!("estimate {}", sci(r.estimate));
    println!("wilson95 [{}, {}]", sci(r.interval.0), sci(r.interval.1));
    if let Some(u) = r.rule_of_three {
        println!("rule-of-three upper bound {}", sci(u));
    }
    for (i, (f, m)) in r.taxonomy.failures.iter().zip(&r.taxonomy.miscorrections).enumerate() {
        println!("level {}: failures {f}, miscorrections {m}", i + 1);
    }
    Ok(())
}

fn analyze(code: &str, p: f64, trials: u64, seed: u64, tail: Option<Tail>) -> Result<(Vec<String>, f64), CliError> {
    let spec = gc_preset(code)?;
    let tail = tail.map(TailModel::from).unwrap_or_else(|| default_tail(code));
    let channels = level_channels(&spec, p, trials, seed)?;
    let pairs: Vec<(f64, f64)> = channels.iter().map(|c| (c.p_err, c.p_eras)).collect();
    let models = gc_stage_models(&spec, &pairs, tail)?;
    let mut lines = vec![format!("code {code}  p {}  tail {}", sci(p), tail.name())];
    let mut stages = Vec::new();
    for (i, ((level, ch), model)) in spec.levels().iter().zip(&channels).zip(&models).enumerate() {
        let prob = stage_fail_prob(model)?;
        stages.push(prob);
        lines.push(format!(
            "stage {}: outer {}  p_err {}  p_eras {} ({})  P(fail) {}",
            i + 1,
            level.outer().name(),
            sci(ch.p_err),
            sci(ch.p_eras),
            if ch.exact { "exact" } else { "estimated" },
            sci(prob)
        ));
    }
    let total = union_bound(&stages)?.total;
    lines.push(format!("union bound {}", sci(total)));
    Ok((lines, total))
}

fn parse_range(s: &str, n: usize) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("bad --k-range {s:?}; use A-B with 1 <= A <= B <= {n}"));
    let (a, b) = match s.split_once('-') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if a == 0 || a > b || b > n {
        return Err(bad());
    }
    Ok(a..=b)
}

fn cmd_radius(n: usize, k_range: Option<&str>, csv: bool) -> Result<(), CliError> {
    if n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let range = match k_range {
        Some(s) => parse_range(s, n)?,
        None => 1..=n,
    };
    let rows = radius_table(n, range)?;
    if csv {
        print!("{}", radius_csv(&rows));
    } else {
        println!("{:>5} {:>7} {:>5} {:>13}", "k", "ell_max", "tau", "half_distance");
        for r in rows {
            println!("{:>5} {:>7} {:>5} {:>13}", r.k, r.ell_max, r.tau, r.half_distance);
        }
    }
    Ok(())
}

fn cmd_table4(trials: u64, seed: u64) -> Result<(), CliError> {
    println!("{:<18} {:>10} {:>6} {:>5} {:>14}  note", "code", "P_err", "n", "k", "largest field");
    for id in PRESET_IDS {
        let p = preset(id)?;
        let field = match p.largest_field_m() {
            1 => "GF(2)".to_string(),
            m => format!("GF(2^{m})"),
        };
        let (perr, note) = match &p {
            Preset::Gc(_) => {
                let (_, total) = analyze(id, 0.14, trials, seed, None)?;
                (total, format!("union bound, {} tail", default_tail(id).name()))
            }
            Preset::Reference(r) => (r.reference_p_err, format!("{}, stored constant, not computed", r.description)),
        };
        println!("{:<18} {:>10} {:>6} {:>5} {:>14}  {note}", id, sci(perr), p.n(), p.k(), field);
    }
    Ok(())
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("KEYFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("KEYFORGE_THREADS must be a number, got {v:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Gen { code, response, helper, key, seed } => cmd_gen(&code, &response, &helper, &key, seed),
        Command::Rep { helper, response, key } => cmd_rep(&helper, &response, &key),
        Command::Simulate { code, p, trials, seed, gmd, csv } => cmd_simulate(&code, p, trials, seed, gmd, csv),
        Command::Analyze { code, p, transform_trials, seed, tail } => {
            check_p(p)?;
            let (lines, _) = analyze(&code, p, transform_trials, seed, tail)?;
            for l in lines {
                println!("{l}");
            }
            Ok(())
        }
        Command::Radius { n, k_range, csv } => cmd_radius(n, k_range.as_deref(), csv),
        Command::Table4 { transform_trials, seed } => cmd_table4(transform_trials, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("keyforge: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
