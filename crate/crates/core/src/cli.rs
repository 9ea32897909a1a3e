//! Command-line front end.
//!
//! Exit codes: 0 when everything checked passes, 1 on any failure or
//! evaluation error, 2 on usage and input errors.

use std::collections::{BTreeMap, HashSet};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bernoulli::{bernoulli_mod_recurrence, bernoulli_pm3_powersum};
use crate::catalog::{builtin_catalog, parse_catalog};
use crate::context::build_context;
use crate::dsl::{evaluate_expr, parse_expr, CongruenceSpec};
use crate::identities::{run_identities, Identity};
use crate::report::{emit_report, ReportFormat};
use crate::residue::{is_prime, PrimePowerModulus};
use crate::verify::{informational_p5, verify_range, MAX_PRIME};

const EXIT_OK: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hcong", version, about = "Verify harmonic-number congruences modulo prime powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check catalog entries over a range of primes.
    Verify(VerifyArgs),
    /// Evaluate one expression at one prime.
    Eval(EvalArgs),
    /// Bernoulli numbers modulo p^e.
    Bernoulli(BernoulliArgs),
    /// Check the exact combinatorial identities.
    Identities(IdentitiesArgs),
    /// Show the builtin catalog.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Inclusive prime range LO..HI.
    #[arg(long, default_value = "7..2000", value_parser = parse_range)]
    primes: (u64, u64),
    /// Comma-separated entry ids; defaults to the whole catalog.
    #[arg(long, value_delimiter = ',')]
    ids: Vec<String>,
    /// Catalog file to use instead of the builtin one.
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    jobs: Option<u64>,
    /// Also evaluate the p > 5 entries at p = 5 (reported on stderr only).
    #[arg(long)]
    informational_p5: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    expr: String,
    #[arg(long)]
    prime: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
    exp: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Recurrence,
    Powersum,
    Both,
}

#[derive(Debug, Args)]
struct BernoulliArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
    exp: u32,
    /// Index n; defaults to p-3.
    #[arg(long)]
    index: Option<u64>,
    /// Defaults to `both` for n = p-3 and `recurrence` otherwise.
    #[arg(long, value_enum)]
    method: Option<Method>,
}

#[derive(Debug, Args)]
struct IdentitiesArgs {
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=4096))]
    max_n: u64,
    /// Comma-separated subset of 2.4, 3.1, 4.1, 4.2, integral.
    #[arg(long, value_delimiter = ',')]
    which: Vec<Identity>,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    /// List every entry (the default).
    #[arg(long, conflicts_with = "show")]
    list: bool,
    /// Show one entry.
    #[arg(long)]
    show: Option<String>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let lo: u64 = lo.trim().parse().map_err(|e| format!("bad lower bound `{lo}`: {e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("bad upper bound `{hi}`: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    if hi > MAX_PRIME {
        return Err(format!("upper bound {hi} exceeds {MAX_PRIME}"));
    }
    Ok((lo, hi))
}

/// Runs the CLI with process stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI; `out` receives data only, `err` diagnostics.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Bernoulli(a) => cmd_bernoulli(a, out),
        Command::Identities(a) => cmd_identities(a, out),
        Command::Catalog(a) => cmd_catalog(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_FAIL,
        message: message.into(),
    }
}

fn io(e: std::io::Error) -> Failure {
    failed(format!("write failed: {e}"))
}

fn select(catalog: Vec<CongruenceSpec>, ids: &[String]) -> Result<Vec<CongruenceSpec>, Failure> {
    if ids.is_empty() {
        return Ok(catalog);
    }
    let known: HashSet<&str> = catalog.iter().map(|s| s.id.as_str()).collect();
    if let Some(missing) = ids.iter().find(|id| !known.contains(id.as_str())) {
        return Err(usage(format!("unknown congruence id `{missing}`")));
    }
    let wanted: HashSet<&str> = ids.iter().map(String::as_str).collect();
    Ok(catalog.into_iter().filter(|s| wanted.contains(s.id.as_str())).collect())
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let catalog = match &a.catalog {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            parse_catalog(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => builtin_catalog().to_vec(),
    };
    let catalog = select(catalog, &a.ids)?;
    let jobs = match a.jobs {
        Some(j) => j as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let (lo, hi) = a.primes;
    let report = verify_range(&catalog, lo, hi, jobs).map_err(|e| usage(e.to_string()))?;
    out.write_all(&emit_report(&report, a.format)).map_err(io)?;

    let s = report.summary();
    writeln!(
        err,
        "{} results ({} pass, {} fail, {} skipped, {} error) in {:.2}s on {jobs} thread(s)",
        report.results.len(),
        s.pass,
        s.fail,
        s.skipped,
        s.error,
        report.elapsed.as_secs_f64()
    )
    .map_err(io)?;
    if a.informational_p5 {
        for r in informational_p5(&catalog) {
            let sides = match (r.lhs, r.rhs) {
                (Some(l), Some(rr)) => format!(" lhs={} rhs={}", l.value(), rr.value()),
                _ => String::new(),
            };
            writeln!(err, "informational p=5 {} {}{sides}", r.congruence_id, r.status.as_str()).map_err(io)?;
        }
    }
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_FAIL })
}

fn checked_prime(p: u64) -> Result<(), Failure> {
    if p <= 3 || !is_prime(p) {
        return Err(usage(format!("--prime must be a prime greater than 3, got {p}")));
    }
    if p > MAX_PRIME {
        return Err(usage(format!("--prime {p} exceeds {MAX_PRIME}")));
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    checked_prime(a.prime)?;
    let expr = parse_expr(&a.expr).map_err(|e| usage(format!("--expr: {e}")))?;
    let ctx = build_context(a.prime, a.exp).map_err(|e| usage(e.to_string()))?;
    let value = evaluate_expr(&expr, &ctx, a.exp, &BTreeMap::new()).map_err(|e| failed(e.to_string()))?;
    writeln!(out, "{}", value.value()).map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_bernoulli(a: BernoulliArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    checked_prime(a.prime)?;
    let p = a.prime;
    let n = a.index.unwrap_or(p - 3);
    let is_pm3 = n == p - 3;
    let method = a.method.unwrap_or(if is_pm3 && p > 5 { Method::Both } else { Method::Recurrence });
    if method != Method::Recurrence && !(is_pm3 && p > 5) {
        return Err(usage("the power-sum method computes B(p-3) for p > 5 only"));
    }
    let m = PrimePowerModulus::new(p, a.exp).map_err(|e| usage(e.to_string()))?;
    let recurrence = || bernoulli_mod_recurrence(n, m).map_err(|e| usage(e.to_string()));
    let powersum = || bernoulli_pm3_powersum(p, a.exp).map_err(|e| failed(e.to_string()));
    let value = match method {
        Method::Recurrence => recurrence()?,
        Method::Powersum => powersum()?,
        Method::Both => {
            let (r, s) = (recurrence()?, powersum()?);
            if r != s {
                return Err(failed(format!(
                    "methods disagree: recurrence {}, power sum {}",
                    r.value(),
                    s.value()
                )));
            }
            r
        }
    };
    writeln!(out, "{}", value.value()).map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_identities(a: IdentitiesArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let which = if a.which.is_empty() {
        Identity::ALL.to_vec()
    } else {
        a.which
    };
    let rows = run_identities(&which, a.max_n);
    let mut clean = true;
    for id in which {
        let mine: Vec<_> = rows.iter().filter(|r| r.identity == id).collect();
        let held = mine.iter().filter(|r| r.holds).count();
        let status = if held == mine.len() { "pass" } else { "fail" };
        writeln!(out, "{:<8} n={}..{} {held}/{} {status}", id.name(), id.min_n(), a.max_n, mine.len())
            .map_err(io)?;
        for r in mine.iter().filter(|r| !r.holds) {
            clean = false;
            match &r.x {
                Some(x) => writeln!(out, "  fails at n={} x={x}", r.n),
                None => writeln!(out, "  fails at n={}", r.n),
            }
            .map_err(io)?;
        }
    }
    Ok(if clean { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_catalog(a: CatalogArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let catalog = builtin_catalog();
    match a.show {
        Some(id) => {
            let spec = catalog
                .iter()
                .find(|s| s.id == id)
                .ok_or_else(|| usage(format!("unknown congruence id `{id}`")))?;
            writeln!(out, "{spec}").map_err(io)?;
        }
        None => {
            for spec in catalog {
                writeln!(out, "{spec}").map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["hcong"];
        argv.extend_from_slice(args);
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eval_fermat_quotient() {
        let (code, out, _) = run_capture(&["eval", "--expr", "q2", "--prime", "7", "--exp", "1"]);
        assert_eq!((code, out.as_str()), (0, "2\n"));
    }

    #[test]
    fn verify_json_for_one_entry() {
        let (code, out, err) = run_capture(&["verify", "--primes", "7..100", "--ids", "con7", "--format", "json", "--jobs", "2"]);
        assert_eq!(code, 0, "{err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let rows = v["results"].as_array().unwrap();
        assert_eq!(rows.len(), 22);
        assert!(rows.iter().all(|r| r["status"] == "pass" && r["id"] == "con7"));
        assert_eq!(rows[0]["p"], 7);
        assert_eq!(rows[21]["p"], 97);
    }

    #[test]
    fn verify_without_primes() {
        let (code, out, _) = run_capture(&["verify", "--primes", "8..10", "--format", "csv"]);
        assert_eq!((code, out.as_str()), (0, "id,p,status,lhs,rhs\n"));
    }

    #[test]
    fn usage_errors() {
        for args in [
            vec!["verify", "--primes", "10..8"],
            vec!["verify", "--primes", "7-10"],
            vec!["verify", "--bogus"],
            vec!["verify", "--ids", "con999"],
            vec!["eval", "--expr", "1 +", "--prime", "7", "--exp", "1"],
            vec!["eval", "--expr", "1", "--prime", "9", "--exp", "1"],
            vec!["eval", "--expr", "1", "--prime", "7", "--exp", "4"],
            vec!["catalog", "--show", "nope"],
            vec![],
        ] {
            let (code, out, err) = run_capture(&args);
            assert_eq!(code, 2, "{args:?}");
            assert!(out.is_empty(), "{args:?}");
            assert!(!err.is_empty(), "{args:?}");
        }
    }

    #[test]
    fn evaluation_error_exits_one() {
        let (code, _, err) = run_capture(&["eval", "--expr", "1/p", "--prime", "7", "--exp", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("not a unit"));
    }

    #[test]
    fn bernoulli_methods() {
        let (code, out, _) = run_capture(&["bernoulli", "--prime", "11", "--exp", "1"]);
        assert_eq!((code, out.as_str()), (0, "4\n"));
        let (code, out, _) = run_capture(&["bernoulli", "--prime", "7", "--exp", "1", "--index", "2"]);
        assert_eq!((code, out.as_str()), (0, "6\n"));
        let (code, _, _) = run_capture(&["bernoulli", "--prime", "7", "--exp", "1", "--index", "2", "--method", "powersum"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn identities_and_catalog() {
        let (code, out, _) = run_capture(&["identities", "--max-n", "8", "--which", "2.4,integral"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("2.4      n=1..8 8/8 pass\n"));
        let (code, out, _) = run_capture(&["catalog", "--show", "con16"]);
        assert_eq!(code, 0);
        assert_eq!(out, "con16 | p>3 | sum(k=1..(p-1)/2, 1 / k^3) === -2 * B(p-3) (mod p)\n");
        let (_, out, _) = run_capture(&["catalog", "--list"]);
        assert_eq!(out.lines().count(), builtin_catalog().len());
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify"));
    }
}
