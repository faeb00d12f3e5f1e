//! Acceptance criteria 1-10.  Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use hypres_cli::suites::{criterion, CRITERIA};

const SEED: u64 = 7;

fn run_all() -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hypres"))
        .args(["all", "--seed", &SEED.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if out.stdout.is_empty() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

fn main() -> ExitCode {
    let mut failed = 0;
    for (i, name) in CRITERIA.iter().enumerate() {
        let c = i + 1;
        let t0 = Instant::now();
        let mut notes: Vec<String> = Vec::new();
        let ok = match criterion(c, SEED) {
            Ok(checks) => {
                for ch in checks.iter().filter(|ch| !ch.passed()) {
                    notes.push(format!("{}{}", ch.name, ch.detail.as_deref().map(|d| format!(" [{d}]")).unwrap_or_default()));
                }
                let mut ok = notes.is_empty();
                if c == 10 {
                    match (run_all(), run_all()) {
                        (Ok(a), Ok(b)) if a == b => notes.push(format!("`hypres all --seed {SEED}` byte-identical, {} bytes", a.len())),
                        (Ok(_), Ok(_)) => {
                            ok = false;
                            notes.push("two runs of `hypres all` differ".into());
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            ok = false;
                            notes.push(format!("hypres all did not run: {e}"));
                        }
                    }
                }
                ok
            }
            Err(e) => {
                notes.push(format!("error: {e:#}"));
                false
            }
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {c:>2}: {name} ({:.1} s)",
            if ok { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64()
        );
        for n in notes {
            println!("       {n}");
        }
    }
    println!("{} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
