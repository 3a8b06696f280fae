//! Acceptance suite at m = 2, n = 256, R = 8: one pass/fail line per
//! criterion. Runtime limits apply to criteria 1, 2 and 9; criterion 12 also
//! runs `clifft selftest` twice and compares the reports byte for byte.

use std::process::{Command, ExitCode};
use std::time::Instant;

use clifft::criteria::{self, Outcome, SuiteConfig, COUNT};

fn runtime_limit(id: u8) -> Option<f64> {
    match id {
        1 => Some(5.0),
        2 => Some(60.0),
        9 => Some(30.0),
        _ => None,
    }
}

fn selftest_report() -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_clifft"))
        .arg("selftest")
        .output()
        .map_err(|e| format!("cannot run selftest: {e}"))?;
    if !out.status.success() {
        return Err(format!("selftest exited with {:?}", out.status.code()));
    }
    Ok(out.stdout)
}

fn selftest_twice(o: &mut Outcome) {
    match (selftest_report(), selftest_report()) {
        (Ok(a), Ok(b)) => {
            let same = a == b;
            o.passed &= same;
            o.detail.push_str(&format!(
                "; selftest x2: {} bytes, {}",
                a.len(),
                if same { "identical" } else { "differ" }
            ));
        }
        (Err(e), _) | (_, Err(e)) => {
            o.passed = false;
            o.detail.push_str(&format!("; {e}"));
        }
    }
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::new(256);
    println!("acceptance m=2 n={} R={}", cfg.n, cfg.radius);
    let mut failed = 0;
    for id in 1..=COUNT {
        let start = Instant::now();
        let mut o = criteria::run(id, &cfg);
        if id == 12 {
            selftest_twice(&mut o);
        }
        let secs = start.elapsed().as_secs_f64();
        if let Some(limit) = runtime_limit(id) {
            o.passed &= secs < limit;
            o.detail.push_str(&format!(" runtime<{limit}s"));
        }
        println!("{} [{secs:.1}s]", criteria::format_line(&o));
        if !o.passed {
            failed += 1;
        }
    }
    println!("{}/{} criteria passed", COUNT as usize - failed, COUNT);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
