//! `mahler-sieve`: exact command-line analyses of the orbits `{x(3/2)^n}`.
//!
//! Every number printed by this tool is computed in exact integer or
//! rational arithmetic; the optional `--approx` flag appends decimal
//! approximations for human reading but never replaces the exact value.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 resource limits or I/O
//! (including malformed cache files), 4 certification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use mahler_core::{cache, census, orbit, ratio, refine, sieve, tijdeman, Error, Result};

/// Line-printing to stdout that treats a vanished reader (e.g. `| head`)
/// as a normal end of output instead of a panic.
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let mut lock = std::io::stdout().lock();
        if writeln!(lock, $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "mahler-sieve",
    version,
    about = "Exact residue sieves, survival censuses, Tijdeman sequences and \
             interval refinement for Mahler's 3/2 problem"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Append decimal approximations to exact values in text output.
    #[arg(long, global = true)]
    approx: bool,

    /// Directory for sieve cache files (default: $MAHLER_SIEVE_CACHE, then
    /// the platform cache directory).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Number of worker threads for the survival census.
    #[arg(long, global = true, value_name = "COUNT")]
    workers: Option<usize>,

    /// Largest admissible orbit depth.
    #[arg(long, global = true, value_name = "DEPTH", default_value_t = orbit::DEFAULT_DEPTH_CAP)]
    orbit_cap: u32,

    /// Largest admissible sieve exponent (memory grows as 2^n bits).
    #[arg(long, global = true, value_name = "EXP", default_value_t = sieve::DEFAULT_EXPONENT_CAP)]
    sieve_cap: u32,

    /// Largest admissible refinement depth (interval counts grow with depth).
    #[arg(long, global = true, value_name = "DEPTH", default_value_t = refine::DEFAULT_REFINE_CAP)]
    refine_cap: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Half-integer targets when the reduced denominator is 2, else general.
    Auto,
    /// Target bound 1, arbitrary rational beta > 2.
    General,
    /// Target bound 1/2, reduced denominator must be 2.
    HalfInteger,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact fractional parts {x(3/2)^n} for n = 1..=horizon.
    Orbit {
        /// Starting integer x >= 1 (arbitrary size).
        #[arg(long)]
        x: String,
        /// Number of orbit steps to materialize.
        #[arg(long)]
        horizon: u32,
    },

    /// List the permissible residue classes X_n modulo 2^n.
    Xn {
        /// Sieve exponent n >= 1.
        #[arg(long)]
        n: u32,
        /// Read the class set from the cache, writing it on a miss.
        #[arg(long)]
        cache: bool,
    },

    /// Intersect the lifts of X_1, ..., X_n inside Z/2^n.
    Intersect {
        /// Sieve exponent n >= 1.
        #[arg(long)]
        n: u32,
    },

    /// Survival depth sigma(x): the first n whose fractional part is >= 1/2.
    Survival {
        /// A single starting value x >= 1 (arbitrary size).
        #[arg(long, conflicts_with = "range")]
        x: Option<String>,
        /// Sweep every x in 1..=RANGE instead of a single value.
        #[arg(long)]
        range: Option<u64>,
        /// Give up past this depth.
        #[arg(long, default_value_t = 64)]
        max_depth: u32,
    },

    /// Histogram of survival depths over 1..=N with survivor counts.
    Census {
        /// Upper end of the scanned range.
        #[arg(long = "N", value_name = "N")]
        n: u64,
        /// Deepest survival depth to resolve (default: log2(N) + 2).
        #[arg(long)]
        max_depth: Option<u32>,
    },

    /// Construct or verify a certified Tijdeman run for beta = p/q > 2.
    Tijdeman {
        /// Numerator of beta.
        #[arg(long)]
        p: Option<u64>,
        /// Denominator of beta.
        #[arg(long)]
        q: Option<u64>,
        /// Seed s_0 = m >= 1.
        #[arg(long)]
        m: Option<u64>,
        /// Number of forced steps.
        #[arg(long = "N", value_name = "N")]
        big_n: Option<u32>,
        /// Target-bound mode.
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Verify a previously serialized run instead of constructing one.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["p", "q", "m", "big_n"])]
        verify_file: Option<PathBuf>,
    },

    /// Refine the candidate intervals S_n for Z-numbers in [g0, g0 + 1/2).
    Refine {
        /// Integer part of the candidate window.
        #[arg(long)]
        g0: u64,
        /// Refinement depth.
        #[arg(long = "N", value_name = "N")]
        n: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mahler-sieve: {e}");
            ExitCode::from(match e {
                Error::BadArgument(_) => 2,
                Error::CertificationFailed { .. } => 4,
                _ => 3,
            })
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    for (cap, what) in [
        (cli.orbit_cap, "--orbit-cap"),
        (cli.sieve_cap, "--sieve-cap"),
        (cli.refine_cap, "--refine-cap"),
    ] {
        if cap == 0 {
            return Err(Error::BadArgument(format!("{what} must be at least 1")));
        }
    }
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(Error::BadArgument(
                "--workers must be at least 1".to_string(),
            ));
        }
        // Only fails if a global pool already exists, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }

    match &cli.command {
        Command::Orbit { x, horizon } => cmd_orbit(cli, x, *horizon),
        Command::Xn { n, cache } => cmd_xn(cli, *n, *cache),
        Command::Intersect { n } => cmd_intersect(cli, *n),
        Command::Survival {
            x,
            range,
            max_depth,
        } => cmd_survival(cli, x.as_deref(), *range, *max_depth),
        Command::Census { n, max_depth } => cmd_census(cli, *n, *max_depth),
        Command::Tijdeman {
            p,
            q,
            m,
            big_n,
            mode,
            verify_file,
        } => cmd_tijdeman(cli, *p, *q, *m, *big_n, *mode, verify_file.as_deref()),
        Command::Refine { g0, n } => cmd_refine(cli, *g0, *n),
    }
}

/// Resolve the cache directory: flag, then $MAHLER_SIEVE_CACHE, then the
/// platform cache directory, then a local fallback.
fn cache_dir(cli: &Cli) -> PathBuf {
    if let Some(dir) = &cli.cache_dir {
        return dir.clone();
    }
    if let Ok(dir) = std::env::var("MAHLER_SIEVE_CACHE") {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    if let Ok(xdg) = std::env::var("XDG_CACHE_HOME") {
        if !xdg.is_empty() {
            return PathBuf::from(xdg).join("mahler-sieve");
        }
    }
    if let Ok(home) = std::env::var("HOME") {
        if !home.is_empty() {
            return PathBuf::from(home).join(".cache").join("mahler-sieve");
        }
    }
    PathBuf::from(".mahler-sieve-cache")
}

fn parse_big(name: &str, text: &str) -> Result<BigUint> {
    text.parse::<BigUint>()
        .map_err(|_| Error::BadArgument(format!("{name} must be a nonnegative integer, got {text:?}")))
}

/// `" ~ 0.123456"` when `--approx` is active, empty otherwise.
fn approx_suffix(cli: &Cli, value: &BigRational) -> String {
    if cli.approx {
        format!(" ~ {:.6}", ratio::ratio_to_f64(value))
    } else {
        String::new()
    }
}

fn cmd_orbit(cli: &Cli, x_text: &str, horizon: u32) -> Result<()> {
    let x = parse_big("--x", x_text)?;
    let parts = orbit::orbit_prefix(&x, horizon, cli.orbit_cap)?;
    let diameter = orbit::orbit_diameter(&x, horizon, cli.orbit_cap)?;

    match cli.format {
        Format::Text => {
            for (i, part) in parts.iter().enumerate() {
                outln!(
                    "n={:<4} value={}{} action={}",
                    i + 1,
                    part,
                    approx_suffix(cli, &part.to_ratio()),
                    part.action()
                );
            }
            outln!(
                "inf={} sup={} diameter={}{}",
                ratio::ratio_to_string(&diameter.inf),
                ratio::ratio_to_string(&diameter.sup),
                ratio::ratio_to_string(&diameter.diameter),
                approx_suffix(cli, &diameter.diameter),
            );
            match diameter.first_n_reaching_one_third {
                Some(n) => outln!("running diameter first reaches 1/3 at n={n}"),
                None => outln!("running diameter stays below 1/3 on this prefix"),
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = parts
                .iter()
                .enumerate()
                .map(|(i, part)| {
                    serde_json::json!({
                        "n": i + 1,
                        "value": ratio::ratio_to_string(&part.to_ratio()),
                        "action": part.action().to_string(),
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "x": x.to_string(),
                "horizon": horizon,
                "orbit": rows,
                "inf": ratio::ratio_to_string(&diameter.inf),
                "sup": ratio::ratio_to_string(&diameter.sup),
                "diameter": ratio::ratio_to_string(&diameter.diameter),
                "first_n_reaching_one_third": diameter.first_n_reaching_one_third,
            });
            outln!("{doc}");
        }
        Format::Csv => {
            outln!("n,value,action");
            for (i, part) in parts.iter().enumerate() {
                outln!("{},{},{}", i + 1, part, part.action());
            }
        }
    }
    Ok(())
}

/// Shared listing for residue sets: `1, 3, 6, 8 (mod 8)`.
fn print_set_text(set: &sieve::ResidueSet) {
    let modulus = BigUint::one() << set.exponent();
    let reps: Vec<String> = set.representatives().iter().map(|r| r.to_string()).collect();
    if reps.is_empty() {
        outln!("(empty) (mod {modulus})");
    } else {
        outln!("{} (mod {})", reps.join(", "), modulus);
    }
}

fn set_json(n: u32, set: &sieve::ResidueSet, cache_file: Option<&Path>) -> serde_json::Value {
    let modulus = BigUint::one() << set.exponent();
    let reps: Vec<String> = set.representatives().iter().map(|r| r.to_string()).collect();
    let density = BigRational::new(
        BigUint::from(set.card()).into(),
        modulus.clone().into(),
    );
    let mut doc = serde_json::json!({
        "n": n,
        "modulus": modulus.to_string(),
        "count": set.card(),
        "density": ratio::ratio_to_string(&density),
        "representatives": reps,
    });
    if let Some(path) = cache_file {
        doc["cache_file"] = serde_json::Value::String(path.display().to_string());
    }
    doc
}

fn print_set_csv(set: &sieve::ResidueSet) {
    outln!("representative");
    for r in set.representatives() {
        outln!("{r}");
    }
}

fn cmd_xn(cli: &Cli, n: u32, use_cache: bool) -> Result<()> {
    let mut cache_file = None;
    let set = if use_cache {
        let dir = cache_dir(cli);
        let path = dir.join(cache::xn_file_name(n));
        let set = if path.exists() {
            let set = cache::read_set(&path)?;
            if set.exponent() != n {
                return Err(Error::MalformedCache(format!(
                    "{} holds exponent {}, expected {}",
                    path.display(),
                    set.exponent(),
                    n
                )));
            }
            set
        } else {
            let set = sieve::compute_xn(n, cli.sieve_cap)?;
            cache::write_set(&path, &set)?;
            set
        };
        cache_file = Some(path);
        set
    } else {
        sieve::compute_xn(n, cli.sieve_cap)?
    };

    match cli.format {
        Format::Text => {
            print_set_text(&set);
            if let Some(path) = &cache_file {
                outln!("cache: {}", path.display());
            }
        }
        Format::Json => outln!("{}", set_json(n, &set, cache_file.as_deref())),
        Format::Csv => print_set_csv(&set),
    }
    Ok(())
}

fn cmd_intersect(cli: &Cli, n: u32) -> Result<()> {
    let set = sieve::intersect_prefix(n, cli.sieve_cap)?;
    match cli.format {
        Format::Text => {
            if set.card() == 1 && set.contains_bit(0) {
                outln!("only class 2^{n} (mod 2^{n})");
            } else {
                print_set_text(&set);
            }
        }
        Format::Json => outln!("{}", set_json(n, &set, None)),
        Format::Csv => print_set_csv(&set),
    }
    Ok(())
}

fn survival_json(record: &census::SurvivalRecord) -> serde_json::Value {
    serde_json::json!({
        "x": record.x.to_string(),
        "depth": record.depth,
        "violation": ratio::ratio_to_string(&record.violation.to_ratio()),
    })
}

fn cmd_survival(cli: &Cli, x: Option<&str>, range: Option<u64>, max_depth: u32) -> Result<()> {
    let records: Vec<census::SurvivalRecord> = match (x, range) {
        (Some(text), None) => {
            let x = parse_big("--x", text)?;
            vec![census::survival_depth(&x, max_depth)?]
        }
        (None, Some(end)) => {
            if end == 0 {
                return Err(Error::BadArgument("--range must be at least 1".to_string()));
            }
            let mut rows = Vec::with_capacity(end as usize);
            for x in 1..=end {
                rows.push(census::survival_depth(&BigUint::from(x), max_depth)?);
            }
            rows
        }
        _ => {
            return Err(Error::BadArgument(
                "pass exactly one of --x or --range".to_string(),
            ))
        }
    };

    match cli.format {
        Format::Text => {
            for r in &records {
                outln!(
                    "x={} depth={} violation={}{}",
                    r.x,
                    r.depth,
                    r.violation,
                    approx_suffix(cli, &r.violation.to_ratio())
                );
            }
        }
        Format::Json => {
            if records.len() == 1 && x.is_some() {
                outln!("{}", survival_json(&records[0]));
            } else {
                let rows: Vec<serde_json::Value> = records.iter().map(survival_json).collect();
                let doc = serde_json::json!({
                    "range_end": range,
                    "max_depth": max_depth,
                    "records": rows,
                });
                outln!("{doc}");
            }
        }
        Format::Csv => {
            outln!("x,depth,violation");
            for r in &records {
                outln!("{},{},{}", r.x, r.depth, r.violation);
            }
        }
    }
    Ok(())
}

fn cmd_census(cli: &Cli, n: u64, max_depth: Option<u32>) -> Result<()> {
    if n == 0 {
        return Err(Error::BadArgument("--N must be at least 1".to_string()));
    }
    let depth = max_depth.unwrap_or_else(|| census::default_census_depth(n));
    let report = census::census(n, depth)?;
    match cli.format {
        Format::Text => {
            outln!("N={} max_depth={}", report.range_end, report.max_depth);
            outln!("depth histogram:");
            for (d, count) in &report.histogram {
                outln!("  sigma={d:<3} count={count}");
            }
            outln!("survivors past depth n:");
            for (d, count) in &report.survivors_at {
                outln!("  n={d:<3} survivors={count}");
            }
        }
        Format::Json => outln!("{}", report.to_json()),
        Format::Csv => outln!("{}", report.to_csv().trim_end()),
    }
    Ok(())
}

fn tijdeman_text(cli: &Cli, run: &tijdeman::TijdemanRun, summary: &tijdeman::VerifySummary) {
    let beta = &run.beta;
    outln!(
        "beta={}/{} mode={} m={} N={}",
        beta.p(),
        beta.q(),
        beta.mode().as_str(),
        run.m,
        run.depth()
    );
    let s = &run.s;
    let shown = if s.len() > 8 {
        let head: Vec<String> = s[..3].iter().map(|v| v.to_string()).collect();
        let tail: Vec<String> = s[s.len() - 3..].iter().map(|v| v.to_string()).collect();
        format!("{}, ..., {}", head.join(", "), tail.join(", "))
    } else {
        s.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    outln!("s = {shown}");
    outln!(
        "c={}{}",
        ratio::ratio_to_string(&run.c),
        approx_suffix(cli, &run.c)
    );
    let (lo, hi) = &run.enclosure;
    outln!(
        "eta in [{}, {}]{}",
        ratio::ratio_to_string(lo),
        ratio::ratio_to_string(hi),
        approx_suffix(cli, hi)
    );
    outln!(
        "certified: {} increments within bound, max increment {}{}",
        summary.increments_checked,
        ratio::ratio_to_string(&summary.max_increment),
        if summary.seeded { " (seeded)" } else { "" }
    );
}

fn cmd_tijdeman(
    cli: &Cli,
    p: Option<u64>,
    q: Option<u64>,
    m: Option<u64>,
    big_n: Option<u32>,
    mode: ModeArg,
    verify_file: Option<&Path>,
) -> Result<()> {
    let run = match verify_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            tijdeman::TijdemanRun::from_json_str(&text)?
        }
        None => {
            let (Some(p), Some(q), Some(m), Some(big_n)) = (p, q, m, big_n) else {
                return Err(Error::BadArgument(
                    "construction needs --p, --q, --m and --N (or pass --verify-file)".to_string(),
                ));
            };
            let beta = match mode {
                ModeArg::Auto => tijdeman::BetaParam::auto(p, q)?,
                ModeArg::General => tijdeman::BetaParam::new(p, q, tijdeman::TargetMode::General)?,
                ModeArg::HalfInteger => {
                    tijdeman::BetaParam::new(p, q, tijdeman::TargetMode::HalfInteger)?
                }
            };
            tijdeman::construct(&beta, m, big_n)?
        }
    };
    let summary = tijdeman::verify_run(&run)?;

    match cli.format {
        Format::Text => tijdeman_text(cli, &run, &summary),
        Format::Json => outln!("{}", run.to_json()),
        Format::Csv => {
            outln!("n,s");
            for (i, v) in run.s.iter().enumerate() {
                outln!("{i},{v}");
            }
        }
    }
    Ok(())
}

fn cmd_refine(cli: &Cli, g0: u64, n: u32) -> Result<()> {
    let set = refine::refine(g0, n, cli.refine_cap)?;
    match cli.format {
        Format::Text => {
            outln!(
                "g0={} N={} intervals={} measure={}{}",
                set.g0,
                set.depth,
                set.intervals.len(),
                ratio::ratio_to_string(&set.measure()),
                approx_suffix(cli, &set.measure())
            );
            for (lo, hi) in &set.intervals {
                outln!(
                    "[{}, {}){}",
                    ratio::ratio_to_string(lo),
                    ratio::ratio_to_string(hi),
                    approx_suffix(cli, lo)
                );
            }
        }
        Format::Json => outln!("{}", set.to_json()),
        Format::Csv => {
            outln!("lo,hi");
            for (lo, hi) in &set.intervals {
                outln!(
                    "{},{}",
                    ratio::ratio_to_string(lo),
                    ratio::ratio_to_string(hi)
                );
            }
        }
    }
    Ok(())
}
