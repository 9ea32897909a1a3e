//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use hcong::bernoulli::{bernoulli_mod_recurrence, bernoulli_pm3_powersum, BernoulliError};
use hcong::catalog::{builtin_catalog, parse_catalog, CatalogError};
use hcong::context::build_context;
use hcong::dsl::{check_congruence, evaluate_expr, parse_congruence, parse_expr, Expr};
use hcong::exactnum::{bernoulli_exact, rat};
use hcong::identities::{run_identities, Identity};
use hcong::residue::{reduce_rational, PrimePowerModulus};
use hcong::verify::{sieve_primes, Status};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hcong(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hcong")).args(args).output().expect("spawn hcong")
}

fn full_sweep() -> Outcome {
    let start = Instant::now();
    let o = hcong(&["verify", "--primes", "7..2000", "--format", "json"]);
    let took = start.elapsed();
    ensure(o.status.code() == Some(0), || format!("exit status {:?}", o.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    let rows = v["results"].as_array().ok_or("no results array")?;
    let expected = sieve_primes(7, 2000).len() * builtin_catalog().len();
    ensure(rows.len() == expected, || format!("{} rows, expected {expected}", rows.len()))?;
    if let Some(bad) = rows.iter().find(|r| r["status"] != "pass") {
        return Err(format!("non-pass row {bad}"));
    }
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("{} entries x {} primes in {:.2}s", builtin_catalog().len(), rows.len() / builtin_catalog().len(), took.as_secs_f64()))
}

fn headline_spot_check() -> Outcome {
    let lhs = parse_expr("sum(k=1..p-1, H(k) / (k * 2^k))").unwrap();
    for p in [7u64, 11, 13, 101, 1009] {
        let m = PrimePowerModulus::new(p, 2).unwrap();
        let ctx = build_context(p, 2).unwrap();
        let left = evaluate_expr(&lhs, &ctx, 2, &BTreeMap::new()).map_err(|e| e.to_string())?;
        let coeff = reduce_rational(&rat(7, 24), m).unwrap();
        let pm = m.from_i128(p.into());
        for (name, b) in [
            ("recurrence", bernoulli_mod_recurrence(p - 3, m).unwrap()),
            ("power sum", bernoulli_pm3_powersum(p, 2).unwrap()),
        ] {
            let right = coeff.try_mul(&pm).unwrap().try_mul(&b).unwrap();
            ensure(left == right, || format!("p={p} {name}: {} vs {}", left.value(), right.value()))?;
        }
    }
    Ok("p in {7, 11, 13, 101, 1009}, both methods".into())
}

fn identity_oracle() -> Outcome {
    let start = Instant::now();
    let rows = run_identities(&Identity::ALL, 64);
    let took = start.elapsed();
    if let Some(bad) = rows.iter().find(|r| !r.holds) {
        return Err(format!("{} fails at n={} x={:?}", bad.identity, bad.n, bad.x.as_ref().map(|x| x.to_string())));
    }
    for id in Identity::ALL {
        ensure(rows.iter().any(|r| r.identity == id && r.n == 64), || format!("{id} not run at n=64"))?;
    }
    ensure(took < Duration::from_secs(5), || format!("took {took:?}"))?;
    Ok(format!("{} checks, n <= 64, {:.2}s", rows.len(), took.as_secs_f64()))
}

fn bernoulli_cross_validation() -> Outcome {
    let primes = sieve_primes(7, 500);
    for &p in &primes {
        for e in [1, 2] {
            let m = PrimePowerModulus::new(p, e).unwrap();
            let r = bernoulli_mod_recurrence(p - 3, m).unwrap();
            let s = bernoulli_pm3_powersum(p, e).unwrap();
            ensure(r == s, || format!("p={p} e={e}: {} vs {}", r.value(), s.value()))?;
        }
    }
    let mut exact = 0;
    for p in [7u64, 11, 13] {
        for e in [1, 2, 3] {
            let m = PrimePowerModulus::new(p, e).unwrap();
            for n in 0..=20u64 {
                match bernoulli_mod_recurrence(n, m) {
                    Ok(r) => {
                        let want = reduce_rational(&bernoulli_exact(n), m).unwrap();
                        ensure(r == want, || format!("B_{n} mod {p}^{e}"))?;
                        exact += 1;
                    }
                    Err(BernoulliError::IndexOutOfRange { .. }) if n + 2 > p => {}
                    Err(err) => return Err(format!("B_{n} mod {p}^{e}: {err}")),
                }
            }
            let s = bernoulli_pm3_powersum(p, e).unwrap();
            let want = reduce_rational(&bernoulli_exact(p - 3), m).unwrap();
            ensure(s == want, || format!("power sum B_{} mod {p}^{e}", p - 3))?;
        }
    }
    Ok(format!("{} primes mod p and p^2; {exact} exact reductions", primes.len()))
}

fn wolstenholme_fermat() -> Outcome {
    let h = parse_expr("H(p-1)").unwrap();
    let two = parse_expr("2^(p-1)").unwrap();
    let primes = sieve_primes(5, 2000);
    for &p in &primes {
        let ctx = build_context(p, 2).unwrap();
        let v = evaluate_expr(&h, &ctx, 2, &BTreeMap::new()).unwrap();
        ensure(v.value() == 0, || format!("H(p-1) = {} mod {p}^2", v.value()))?;
        let f = evaluate_expr(&two, &ctx, 1, &BTreeMap::new()).unwrap();
        ensure(f.value() == 1, || format!("2^(p-1) = {} mod {p}", f.value()))?;
    }
    Ok(format!("{} primes", primes.len()))
}

fn mutation_sensitivity() -> Outcome {
    let mut checked = 0;
    for spec in builtin_catalog() {
        let mut mutant = spec.clone();
        mutant.rhs = spec.rhs.clone() + Expr::int(1);
        let mut applicable = 0;
        for p in sieve_primes(5, 100) {
            if !mutant.precondition.admits(p) {
                continue;
            }
            let ctx = build_context(p, 3).unwrap();
            let r = check_congruence(&mutant, &ctx);
            ensure(r.status == Status::Fail, || format!("{} at p={p}: {}", spec.id, r.status.as_str()))?;
            applicable += 1;
        }
        ensure(applicable > 0, || format!("{} never applicable", spec.id))?;
        checked += applicable;
    }
    Ok(format!("{checked} mutated (entry, prime) pairs all fail"))
}

const MALFORMED: [&str; 10] = [
    "c1 | p>5 | sum(k=1..p-1, 1/k) === 0 (mod p^2",
    "c2 | p>5 | sum(k=1..p-1, 1/k === 0 (mod p)",
    "c3 | p>5 | 1 + === 2 (mod p)",
    "c4 | p>5 | H(p-1) == 0 (mod p)",
    "c5 | p>5 | H(p-1) === 0 (mod p^7)",
    "c6 | p>x | 1 === 1 (mod p)",
    "c 7 | p>5 | 1 === 1 (mod p)",
    "c8 | p>5 | binom(p-1) === 1 (mod p)",
    "c9 | p>5 | (3/0) === 1 (mod p)",
    "c10 | p>5 | forall(k=1..p-1, 1 === 1 (mod p)",
];

fn dsl_robustness() -> Outcome {
    for spec in builtin_catalog() {
        let text = spec.to_string();
        let back = parse_congruence(&text).map_err(|e| format!("{}: {e}", spec.id))?;
        ensure(&back == spec, || format!("{} does not round-trip", spec.id))?;
        ensure(back.to_string() == text, || format!("{} prints differently", spec.id))?;
    }
    let dir = env!("CARGO_TARGET_TMPDIR");
    for (i, input) in MALFORMED.iter().enumerate() {
        // Second line, so the reported line number is meaningful.
        let text = format!("# malformed\n{input}\n");
        let err = match parse_catalog(&text) {
            Err(CatalogError::Parse(e)) => e,
            other => return Err(format!("`{input}`: expected ParseError, got {other:?}")),
        };
        ensure(err.line == 2 && err.column >= 1, || format!("`{input}`: position {}:{}", err.line, err.column))?;
        let path = format!("{dir}/malformed_{i}.hc");
        std::fs::write(&path, &text).map_err(|e| e.to_string())?;
        let o = hcong(&["verify", "--primes", "7..20", "--catalog", &path]);
        ensure(o.status.code() == Some(2), || format!("`{input}`: exit {:?}", o.status.code()))?;
        let stderr = String::from_utf8_lossy(&o.stderr);
        let pos = format!("line 2, column {}", err.column);
        ensure(stderr.contains(&pos), || format!("`{input}`: stderr lacks `{pos}`: {stderr}"))?;
    }
    Ok(format!("{} entries round-trip; {} malformed inputs rejected", builtin_catalog().len(), MALFORMED.len()))
}

fn determinism() -> Outcome {
    let run = |jobs: &str| hcong(&["verify", "--primes", "7..499", "--format", "json", "--jobs", jobs]);
    let (one, four) = (run("1"), run("4"));
    ensure(one.status.code() == Some(0) && four.status.code() == Some(0), || "nonzero exit".into())?;
    ensure(one.stdout == four.stdout, || "JSON differs between --jobs 1 and --jobs 4".into())?;
    Ok(format!("{} identical bytes", one.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("full-catalog sweep 7..2000", full_sweep),
        ("headline congruence spot-check", headline_spot_check),
        ("identity oracle", identity_oracle),
        ("Bernoulli cross-validation", bernoulli_cross_validation),
        ("Wolstenholme and Fermat sanity", wolstenholme_fermat),
        ("mutation sensitivity", mutation_sensitivity),
        ("DSL robustness", dsl_robustness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
