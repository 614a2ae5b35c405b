//! Command-line front end. `run` returns the process exit code:
//! 0 on success, 2 for an indeterminate small-conductor verdict, 1 on error.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::grpfin::{example4, stabilizer_bruteforce, stabilizer_formula};
use crate::io::{elem_to_json, mat_to_json, parse_matrix, record_to_json};
use crate::matlin::{charpoly, companion, reduce_to_companion, Mat};
use crate::orbits::{atlas, classify, format_mat, orbit_of, LevelData, Verdict};
use crate::ring::{is_prime, Ring, RingKind};
use crate::selftest::{run_all, Level, SelftestConfig};

#[derive(Debug, Parser)]
#[command(name = "cuspidal", version, about = "Orbit classification of cuspidal types at finite level")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Equal,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct Config {
    /// Ring family used when the input JSON carries no ring.
    #[arg(long, global = true, value_enum, default_value = "equal")]
    pub ring: KindArg,
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub f: u32,
    /// Working precision; defaults to the conductor.
    #[arg(long = "r-working", global = true)]
    pub r_working: Option<u32>,
    /// Conductor.
    #[arg(long, global = true)]
    pub r: Option<u32>,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    #[arg(long, global = true, default_value_t = crate::DEFAULT_GUARD, value_parser = clap::value_parser!(u64).range(1..))]
    pub guard: u64,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Matrix JSON input; stdin when absent.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Seed for the sampled parts of the self test.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the orbit of a matrix at conductor --r.
    Classify,
    /// Classify every orbit of M_n(O/p^{l'}) and write CSV.
    Atlas {
        q: u64,
        n: usize,
        r: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stabilizer of the orbit character of β̂ in GL_2(O/p^r), brute force and by formula.
    Stabilizer,
    /// Conjugate a matrix with Eisenstein characteristic polynomial to companion form.
    Companion,
    /// Reproduce the two-character counterexample.
    Example4 {
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(value_enum, default_value = "full")]
        level: LevelArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

pub fn run<I, T>(args: I) -> i32
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
    match dispatch(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Classify => cmd_classify(cfg),
        Command::Atlas { q, n, r, out } => cmd_atlas(cfg, *q, *n, *r, out.as_ref()),
        Command::Stabilizer => cmd_stabilizer(cfg),
        Command::Companion => cmd_companion(cfg),
        Command::Example4 { q } => cmd_example4(cfg, *q),
        Command::Selftest { level } => cmd_selftest(cfg, *level),
    }
}

fn kind(k: KindArg) -> RingKind {
    match k {
        KindArg::Equal => RingKind::Equal,
        KindArg::Mixed => RingKind::Mixed,
    }
}

/// `q = p^f`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(|| Error::Invalid(format!("q = {q}")))?;
    let (mut rest, mut f) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        f += 1;
    }
    if rest != 1 || !is_prime(p) {
        return Err(Error::Invalid(format!("{q} is not a prime power")));
    }
    Ok((p, f))
}

fn read_input(cfg: &Config) -> Result<String> {
    let mut text = String::new();
    match &cfg.file {
        Some(path) => {
            text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?
        }
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Invalid(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

/// The input matrix and its ring: the JSON ring if present, otherwise the flags.
fn input_matrix(cfg: &Config, default_rw: u32) -> Result<(Ring, Mat)> {
    let parsed = parse_matrix(&read_input(cfg)?)?;
    let ring = match &parsed.ring {
        Some(rj) => {
            let ring = rj.build()?;
            match cfg.r_working {
                Some(rw) => ring.with_precision(rw)?,
                None => ring,
            }
        }
        None => Ring::new(kind(cfg.ring), cfg.p, cfg.f, cfg.r_working.unwrap_or(default_rw))?,
    };
    let m = parsed.to_mat(&ring)?;
    Ok((ring, m))
}

fn conductor(cfg: &Config) -> Result<u32> {
    cfg.r.ok_or_else(|| Error::Invalid("--r (conductor) is required".into()))
}

fn need_rw(ring: &Ring, prec: u32) -> Result<()> {
    if ring.r_w() < prec {
        return Err(Error::PrecisionTooLow(format!("working precision {} below {prec}", ring.r_w())));
    }
    Ok(())
}

fn to_json(v: &impl serde::Serialize) -> Result<String> {
    serde_json::to_string(v).map(|s| s + "\n").map_err(|e| Error::Invalid(format!("json: {e}")))
}

fn cmd_classify(cfg: &Config) -> Result<(String, i32)> {
    let r = conductor(cfg)?;
    let level = LevelData::new(r)?;
    let (ring, m) = input_matrix(cfg, r)?;
    need_rw(&ring, level.lp)?;
    let o = orbit_of(&ring, &ring.mat_reduce(&m, level.lp), r, cfg.guard)?;
    let rec = classify(&ring, &o, cfg.guard)?;
    let code = if rec.verdict == Verdict::IndeterminateSmallConductor { 2 } else { 0 };
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Text => {
            let twist = rec.twist.map_or("-".to_string(), |c| c.code().to_string());
            format!(
                "label={} verdict={} regular={} twist={} class_size={}\n",
                rec.label, rec.verdict, rec.regular, twist, o.size
            )
        }
        _ => to_json(&record_to_json(&ring, &o, &rec))?,
    };
    Ok((text, code))
}

fn cmd_atlas(cfg: &Config, q: u64, n: usize, r: u32, out: Option<&PathBuf>) -> Result<(String, i32)> {
    let (p, f) = prime_power(q)?;
    let level = LevelData::new(r)?;
    let ring = Ring::new(kind(cfg.ring), p, f, level.lp)?;
    let a = atlas(&ring, n, r, cfg.jobs as usize, cfg.guard)?;
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => a.to_csv()?,
        Format::Json => to_json(&a.rows)?,
        Format::Text => {
            let mut s = format!("{} classes in M_{n}({}), r = {r}\n", a.rows.len(), ring.label());
            for ((label, verdict, regular), count) in a.summary() {
                s += &format!("{count:>6}  {label} {verdict} regular={regular}\n");
            }
            s
        }
    };
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            Ok((String::new(), 0))
        }
        None => Ok((text, 0)),
    }
}

fn cmd_stabilizer(cfg: &Config) -> Result<(String, i32)> {
    let r = conductor(cfg)?;
    let level = LevelData::new(r)?;
    let (ring, beta) = input_matrix(cfg, r)?;
    need_rw(&ring, r)?;
    let brute = stabilizer_bruteforce(&ring, &ring.mat_reduce(&beta, level.lp), r, cfg.guard)?;
    let codes = |v: &[Mat]| v.iter().map(|m| ring.mat_code(m, r)).collect::<Vec<_>>();
    let brute_codes = codes(&brute);
    let formula = stabilizer_formula(&ring, &ring.mat_reduce(&beta, r), r, cfg.guard).map(|v| codes(&v));
    let (formula_order, agree) = match &formula {
        Ok(v) => (Some(v.len()), Some(*v == brute_codes)),
        Err(Error::NotRegular) => (None, None),
        Err(e) => return Err(e.clone()),
    };
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Text => {
            let f = formula_order.map_or("n/a (not regular mod p)".to_string(), |n| n.to_string());
            let a = agree.map_or("-".to_string(), |b| b.to_string());
            format!("r={r} ring={}\nbruteforce order: {}\nformula order: {f}\nagree: {a}\n", ring.label(), brute.len())
        }
        _ => to_json(&json!({
            "ring": ring.label(),
            "r": r,
            "order_bruteforce": brute.len(),
            "order_formula": formula_order,
            "agree": agree,
            "elements": brute_codes,
        }))?,
    };
    let code = if agree == Some(false) { 1 } else { 0 };
    Ok((text, code))
}

fn cmd_companion(cfg: &Config) -> Result<(String, i32)> {
    let (ring, m) = input_matrix(cfg, 3)?;
    let g = reduce_to_companion(&ring, &m)?;
    let f = charpoly(&ring, &m)?;
    let c = companion(&ring, &f);
    let poly: Vec<_> = f.coeffs.iter().map(|x| elem_to_json(&ring, x)).collect();
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Text => format!(
            "charpoly {}\ng {}\ncompanion {}\n",
            serde_json::to_string(&poly).unwrap_or_default(),
            format_mat(&g),
            format_mat(&c)
        ),
        _ => to_json(&json!({
            "charpoly": poly,
            "g": mat_to_json(&ring, &g),
            "companion": mat_to_json(&ring, &c),
        }))?,
    };
    Ok((text, 0))
}

fn cmd_example4(cfg: &Config, q: u64) -> Result<(String, i32)> {
    let (p, f) = prime_power(q)?;
    let ring = Ring::new(kind(cfg.ring), p, f, cfg.r_working.unwrap_or(3))?;
    let rep = example4(&ring, cfg.guard)?;
    let ok = rep.all_pass() && rep.rho1 == "IsType" && rep.rho2 == "NotType";
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s: String = rep.checks.iter().map(|c| c.line() + "\n").collect();
            s += &format!("rho1: {}\nrho2: {}\n", rep.rho1, rep.rho2);
            s
        }
        _ => to_json(&rep)?,
    };
    Ok((text, if ok { 0 } else { 1 }))
}

fn cmd_selftest(cfg: &Config, level: LevelArg) -> Result<(String, i32)> {
    let st = SelftestConfig {
        level: match level {
            LevelArg::Quick => Level::Quick,
            LevelArg::Full => Level::Full,
        },
        guard: cfg.guard,
        jobs: cfg.jobs as usize,
        seed: cfg.seed,
    };
    let outcomes = run_all(&st);
    let ok = outcomes.iter().all(|o| o.pass);
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Text => outcomes.iter().map(|o| format!("{o}\n")).collect(),
        _ => to_json(&outcomes)?,
    };
    Ok((text, if ok { 0 } else { 1 }))
}
