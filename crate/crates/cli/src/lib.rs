//! Command-line front end for `equideg-core`.
//!
//! [`run`] parses arguments and dispatches to one command; every command
//! returns a [`CommandOutcome`] so the whole surface can be tested without
//! spawning processes.

pub mod json;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use equideg_core::certificates::{
    build_map_certificate, build_zero_certificate, verify_map_certificate, verify_zero_certificate,
    BuildOutcome, Justification, MapCertificate, Verdict, DEFAULT_SEARCH_BOUND,
};
use equideg_core::degrees::{gcd_binomials, known_attainable, necessary_constraint, DegreeConstraint};
use equideg_core::numtheory::classify;
use equideg_core::orbits::orbit_divisibility_table;
use equideg_core::oracle;
use num_bigint::BigInt;

use crate::json::Document;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    pub text: String,
    pub json: Option<String>,
}

impl CommandOutcome {
    fn ok(text: String) -> Self {
        CommandOutcome { code: EXIT_OK, text, json: None }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        CommandOutcome { code: EXIT_USAGE, text: format!("error: {msg}"), json: None }
    }
}

#[derive(Debug, Parser)]
#[command(name = "equideg", version, about = "Degrees of symmetric-group-equivariant self-maps of simplex boundaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify n and print the necessary degree constraint.
    Classify { n: u64 },
    /// Print the necessary constraint and the known attainable degrees.
    Constraint { n: u64 },
    /// Orbit sizes modulo a prime, with exceptional orbits flagged.
    Orbits {
        n: u64,
        #[arg(long)]
        prime: u64,
    },
    /// Build a zero certificate.
    ZeroCert {
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the JSON document.
        #[arg(long)]
        json: bool,
    },
    /// Build a map certificate for degree D.
    #[command(allow_negative_numbers = true)]
    MapCert {
        n: u64,
        #[arg(value_parser = parse_bigint)]
        d: BigInt,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        search_bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Verify a certificate document.
    Verify { file: PathBuf },
    /// Run every oracle cross-check.
    Selftest {
        #[arg(long, default_value_t = 100)]
        nmax: u64,
    },
}

fn parse_bigint(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("not an integer: {s}"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return CommandOutcome { code, text: e.render().to_string(), json: None };
        }
    };
    match cli.command {
        Command::Classify { n } => cmd_classify(n),
        Command::Constraint { n } => cmd_constraint(n),
        Command::Orbits { n, prime } => cmd_orbits(n, prime),
        Command::ZeroCert { n, out, json } => cmd_zero_cert(n, out.as_deref(), json),
        Command::MapCert { n, d, search_bound, out, json } => {
            cmd_map_cert(n, &d, search_bound, out.as_deref(), json)
        }
        Command::Verify { file } => cmd_verify(&file),
        Command::Selftest { nmax } => cmd_selftest(nmax),
    }
}

fn constraint_phrase(c: &DegreeConstraint) -> String {
    if c.is_unconstrained() {
        "degree unconstrained by orbit divisibility".into()
    } else {
        format!("degrees {}", c.to_string().trim_start_matches("d "))
    }
}

pub fn cmd_classify(n: u64) -> CommandOutcome {
    let (class, constraint) = match classify(n).and_then(|c| Ok((c, necessary_constraint(n)?))) {
        Ok(x) => x,
        Err(e) => return CommandOutcome::usage(e),
    };
    CommandOutcome::ok(format!("{class}; {}", constraint_phrase(&constraint)))
}

pub fn cmd_constraint(n: u64) -> CommandOutcome {
    let res = (|| {
        Ok::<_, equideg_core::Error>((
            classify(n)?,
            necessary_constraint(n)?,
            known_attainable(n)?,
            gcd_binomials(n)?,
        ))
    })();
    match res {
        Ok((class, constraint, known, g)) => CommandOutcome::ok(format!(
            "n={n} {class}\nnecessary: {constraint}\nknown attainable: {known}\ngcd of C(n,1..n-1): {g}"
        )),
        Err(e) => CommandOutcome::usage(e),
    }
}

pub fn cmd_orbits(n: u64, p: u64) -> CommandOutcome {
    let table = match orbit_divisibility_table(n, p) {
        Ok(t) => t,
        Err(e) => return CommandOutcome::usage(e),
    };
    let mut text = format!("orbit type\tsize\tsize mod {p}\n");
    let mut exceptional = Vec::new();
    for row in &table {
        let flag = if row.residue != 0 { "\t*" } else { "" };
        let _ = writeln!(text, "{}\t{}\t{}{flag}", row.partition, row.orbit_size, row.residue);
        if row.residue != 0 {
            exceptional.push(row.partition.to_string());
        }
    }
    if exceptional.is_empty() {
        text.push_str("no exceptional orbits");
    } else {
        let _ = write!(text, "exceptional orbits: {}", exceptional.join(" "));
    }
    CommandOutcome::ok(text)
}

fn emit(mut outcome: CommandOutcome, doc: String, out: Option<&Path>, print_json: bool) -> CommandOutcome {
    if let Some(path) = out {
        if let Err(e) = std::fs::write(path, &doc) {
            return CommandOutcome::usage(format!("cannot write {}: {e}", path.display()));
        }
        let _ = write!(outcome.text, "\nwrote {}", path.display());
    }
    if print_json {
        outcome.json = Some(doc);
    }
    outcome
}

pub fn cmd_zero_cert(n: u64, out: Option<&Path>, print_json: bool) -> CommandOutcome {
    let cert = match build_zero_certificate(n) {
        Ok(c) => c,
        Err(e) => return CommandOutcome::usage(e),
    };
    let nonzero: Vec<String> = (1..n)
        .zip(&cert.d)
        .filter(|(_, d)| d.sign() != num_bigint::Sign::NoSign)
        .map(|(k, d)| format!("{k}:{d}"))
        .collect();
    let reps: Vec<String> = cert
        .reps
        .iter()
        .map(|r| format!("{}^{}+{}^{}", r.p, r.s, r.p, r.t))
        .collect();
    let text = format!(
        "zero certificate for n={n}\nreps: [{}]\nN = {}\nnonzero d_k: {}",
        reps.join(", "),
        cert.big_n,
        nonzero.join(" ")
    );
    emit(CommandOutcome::ok(text), json::zero_to_json(&cert), out, print_json)
}

fn describe_entries(cert: &MapCertificate, indent: usize, text: &mut String) {
    for e in &cert.entries {
        let pad = "  ".repeat(indent);
        match &e.just {
            Justification::AntipodalJoin => {
                let _ = writeln!(text, "{pad}k={} d={} antipodal", e.k, e.d);
            }
            Justification::FactorRecursion { m, sub } => {
                let _ = writeln!(text, "{pad}k={} d={} factor m={m}", e.k, e.d);
                describe_entries(sub, indent + 1, text);
            }
        }
    }
}

pub fn cmd_map_cert(n: u64, d: &BigInt, bound: u64, out: Option<&Path>, print_json: bool) -> CommandOutcome {
    match build_map_certificate(n, d, bound) {
        Err(e) => CommandOutcome::usage(e),
        Ok(BuildOutcome::Impossible(c)) => CommandOutcome {
            code: EXIT_FAILED,
            text: format!("Impossible: degree must be {}", c.to_string().trim_start_matches("d ")),
            json: None,
        },
        Ok(BuildOutcome::Unknown { search_bound, exhausted }) => CommandOutcome {
            code: EXIT_UNKNOWN,
            text: format!(
                "Unknown: no certificate found with |d_k| <= {search_bound} ({})",
                if exhausted { "bounded space exhausted" } else { "node budget reached" }
            ),
            json: None,
        },
        Ok(BuildOutcome::Attained(cert)) => {
            let mut text = format!(
                "Attained: degree {d} for n={n}, {} entries, depth {}\n",
                cert.entries.len(),
                cert.depth()
            );
            describe_entries(&cert, 1, &mut text);
            let text = text.trim_end().to_owned();
            emit(CommandOutcome::ok(text), json::map_to_json(&cert), out, print_json)
        }
    }
}

fn verdict_outcome(kind: &str, verdict: Verdict) -> CommandOutcome {
    let code = if verdict.passed() { EXIT_OK } else { EXIT_FAILED };
    let head = if verdict.passed() { "verified" } else { "REJECTED" };
    CommandOutcome { code, text: format!("{head} {kind}\n{verdict}"), json: None }
}

/// Verifies an untrusted JSON document.
pub fn verify_document(text: &str) -> CommandOutcome {
    match json::parse_document(text) {
        Err(e) => CommandOutcome::usage(e),
        Ok(Document::Zero(c)) => match verify_zero_certificate(&c) {
            Ok(v) => verdict_outcome("zero certificate", v),
            Err(e) => CommandOutcome::usage(e),
        },
        Ok(Document::Map(c)) => match verify_map_certificate(&c) {
            Ok(v) => verdict_outcome("map certificate", v),
            Err(e) => CommandOutcome::usage(e),
        },
    }
}

pub fn cmd_verify(path: &Path) -> CommandOutcome {
    match std::fs::read_to_string(path) {
        Ok(text) => verify_document(&text),
        Err(e) => CommandOutcome::usage(format!("cannot read {}: {e}", path.display())),
    }
}

pub fn cmd_selftest(nmax: u64) -> CommandOutcome {
    let reports = oracle::selftest(nmax);
    let all = reports.iter().all(|r| r.passed());
    let mut text: Vec<String> = reports.iter().map(ToString::to_string).collect();
    let failed = reports.iter().filter(|r| !r.passed()).count();
    text.push(format!("{} checks, {failed} failed", reports.len()));
    CommandOutcome {
        code: if all { EXIT_OK } else { EXIT_FAILED },
        text: text.join("\n"),
        json: None,
    }
}
