use std::path::PathBuf;
use std::process::ExitCode;

use blowdown::hirzebruch::{chain_for_cpq, identify_cpq, Chain, CpqParams};
use blowdown::mcg::{fibration_factorizations, identity_suite, verify_fibration};
use blowdown::par::Execution;
use blowdown::scenario::{corpus, Report};
use blowdown::sweep::property_sweep;
use clap::{Parser, Subcommand};
use serde_json::json;

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;
const INTERNAL: u8 = 3;

const SWEEP_PAIRS: usize = 200;
const SWEEP_MAX_P: u64 = 600;
const SWEEP_KNOT_PRODUCTS: usize = 100;

#[derive(Parser)]
#[command(
    name = "blowdown",
    version,
    about = "Check monodromy factorizations, rational blow-down chains and SW ledgers"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also run a randomized property sweep with this seed (corpus only).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario files and print their reports.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the linear chain C_{p,q}.
    Hj { p: u64, q: u64 },
    /// Recognize a chain such as "(-9,-2,-2,-2,-2,-3)" as some C_{p,q}.
    Identify { chain: String },
    /// Check the mapping class group relations and fibration factorizations.
    McgSuite,
    /// Run every bundled scenario.
    Corpus,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { PASS });
        }
    };
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    ExitCode::from(match cli.command {
        Command::Verify { files } => verify(&files, cli.json, exec),
        Command::Hj { p, q } => hj(p, q, cli.json),
        Command::Identify { chain } => identify(&chain, cli.json),
        Command::McgSuite => mcg_suite(cli.json),
        Command::Corpus => run_corpus(cli.json, cli.seed, exec),
    })
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn print_reports(reports: &[Report], json: bool) {
    if json {
        print_json(&json!({ "reports": reports }));
    } else {
        for r in reports {
            print!("{r}");
        }
    }
}

fn verify(files: &[PathBuf], json: bool, exec: Execution) -> u8 {
    let mut texts = Vec::with_capacity(files.len());
    for f in files {
        match std::fs::read_to_string(f) {
            Ok(t) => texts.push((f.display().to_string(), t)),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", f.display());
                return INTERNAL;
            }
        }
    }
    let reports = exec.map(&texts, |(name, text)| corpus::run_text(name, text, exec));
    print_reports(&reports, json);
    if reports.iter().all(Report::all_passed) {
        PASS
    } else {
        FAIL
    }
}

fn hj(p: u64, q: u64, json: bool) -> u8 {
    let params = match CpqParams::new(p, q) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    match chain_for_cpq(params) {
        Ok(chain) if json => print_json(&json!({ "p": p, "q": q, "chain": chain.weights() })),
        Ok(chain) => println!("{chain}"),
        Err(e) => {
            eprintln!("error: {e}");
            return INTERNAL;
        }
    }
    PASS
}

fn identify(text: &str, json: bool) -> u8 {
    let chain: Chain = match text.parse() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let found = identify_cpq(&chain);
    if json {
        print_json(&json!({
            "chain": chain.weights(),
            "cpq": found.map(|c| json!({ "p": c.p(), "q": c.q(), "name": c.to_string() })),
        }));
    } else {
        match found {
            Some(c) => println!("{c}"),
            None => println!("{chain} is not a C_{{p,q}} chain"),
        }
    }
    if found.is_some() {
        PASS
    } else {
        FAIL
    }
}

fn mcg_suite(json: bool) -> u8 {
    let identities = identity_suite();
    let fibrations: Vec<_> =
        fibration_factorizations().into_iter().map(|(name, f)| (name, verify_fibration(&f, 12))).collect();
    let ok = identities.iter().all(|c| c.pass) && fibrations.iter().all(|(_, r)| r.passes());
    if json {
        let fib: Vec<_> = fibrations.iter().map(|(name, r)| json!({ "name": name, "report": r })).collect();
        print_json(&json!({ "identities": identities, "fibrations": fib, "passed": ok }));
    } else {
        for c in &identities {
            println!("[{}] {}", verdict(c.pass), c.name);
        }
        for (name, r) in &fibrations {
            println!(
                "[{}] {name}: {} twists (expected {}), monodromy {}",
                verdict(r.passes()),
                r.twist_count,
                r.expected_twists,
                r.monodromy
            );
        }
        println!("result: {}", verdict(ok));
    }
    if ok {
        PASS
    } else {
        FAIL
    }
}

fn run_corpus(json: bool, seed: Option<u64>, exec: Execution) -> u8 {
    let reports = corpus::run_corpus(exec);
    let sweep = seed.map(|s| property_sweep(s, SWEEP_PAIRS, SWEEP_MAX_P, SWEEP_KNOT_PRODUCTS, exec));
    if json {
        print_json(&json!({ "reports": reports, "sweep": sweep }));
    } else {
        print_reports(&reports, false);
        if let Some(s) = &sweep {
            print!("{s}");
        }
    }
    let ok = reports.iter().all(Report::all_passed) && sweep.as_ref().is_none_or(|s| s.passed());
    if ok {
        PASS
    } else {
        FAIL
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
