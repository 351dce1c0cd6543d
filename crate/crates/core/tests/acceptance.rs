//! Acceptance gate: every criterion runs at a fixed sample size and time
//! budget, and prints one PASS/FAIL line.

use std::io::Write;
use std::time::{Duration, Instant};

use ore_dilation::suites::{run_suite, SuiteConfig, VerificationReport};

struct Outcome {
    id: u32,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn cfg(samples: usize) -> SuiteConfig {
    SuiteConfig { seed: 20240601, samples, n_max: 12, level_max: 12, instance: None }
}

fn with_instance(samples: usize, instance: &str) -> SuiteConfig {
    SuiteConfig { instance: Some(instance.to_string()), ..cfg(samples) }
}

fn suites_pass(reports: &[VerificationReport]) -> Result<usize, String> {
    let mut cases = 0;
    for r in reports {
        if !r.passed() {
            return Err(r.render());
        }
        cases += r.cases;
    }
    Ok(cases)
}

fn timed(
    id: u32,
    name: &'static str,
    budget: Duration,
    f: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let start = Instant::now();
    let res = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match res {
        Ok(d) if elapsed <= budget => (true, format!("{d}, {} ms", elapsed.as_millis())),
        Ok(d) => (false, format!("{d}, {} ms exceeds {} ms", elapsed.as_millis(), budget.as_millis())),
        Err(e) => (false, e),
    };
    Outcome { id, name, ok, detail }
}

fn failing_case(suite: &str, cfg: &SuiteConfig, case_prefix: &str) -> Result<String, String> {
    let rep = run_suite(suite, cfg).map_err(|e| e.to_string())?;
    let hit = rep.failures.iter().find(|f| f.case.starts_with(case_prefix));
    match hit {
        Some(f) if !f.witness.is_null() => Ok(format!("{} caught", f.case)),
        _ => Err(format!("{suite} with {:?} was not refuted at {case_prefix}: {}", cfg.instance, rep.render())),
    }
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();

    outcomes.push(timed(1, "Ore/fraction suite", Duration::from_secs(10), || {
        let reports = vec![run_suite("ore", &cfg(200)).unwrap(), run_suite("fractions", &cfg(200)).unwrap()];
        suites_pass(&reports).map(|c| format!("{c} checks over 4 instances"))
    }));

    outcomes.push(timed(2, "multiplier suite", Duration::from_secs(10), || {
        let rep = run_suite("cocycle", &cfg(500)).unwrap();
        suites_pass(&[rep]).map(|c| format!("{c} checks"))
    }));

    outcomes.push(timed(3, "dilation suite", Duration::from_secs(30), || {
        let rep = run_suite("dilate", &cfg(100)).unwrap();
        suites_pass(&[rep]).map(|c| format!("{c} checks"))
    }));

    outcomes.push(timed(4, "limit-dynamics suite", Duration::from_secs(30), || {
        let rep = run_suite("limit", &cfg(200)).unwrap();
        suites_pass(&[rep]).map(|c| format!("{c} checks"))
    }));

    outcomes.push(timed(5, "crossed-product suite", Duration::from_secs(60), || {
        let rep = run_suite("crossprod", &cfg(200)).unwrap();
        suites_pass(&[rep]).map(|c| format!("{c} checks, derived phase convention confirmed"))
    }));

    outcomes.push(timed(6, "Bost-Connes dilation (12, 12)", Duration::from_secs(60), || {
        let rep = run_suite("bc", &cfg(0)).unwrap();
        suites_pass(&[rep]).map(|c| format!("{c} checks over 144 cells"))
    }));

    outcomes.push(timed(7, "negative controls", Duration::from_secs(10), || {
        let caught = [
            failing_case("cocycle", &with_instance(50, "perturbed"), "cocycle/lambda_cocycle")?,
            failing_case("limit", &with_instance(20, "collapse"), "limit/endo_action")?,
            failing_case("limit", &with_instance(20, "wrong-beta"), "limit/iso_adele_model")?,
            failing_case("bc", &SuiteConfig { n_max: 3, level_max: 3, ..with_instance(0, "off-by-one") }, "bc/(a)")?,
            failing_case("crossprod", &with_instance(20, "printed-phase"), "crossprod/twisted/monomial_oracle")?,
        ];
        Ok(caught.join("; "))
    }));

    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        writeln!(out, "criterion {} [{}] {}: {}", o.id, if o.ok { "PASS" } else { "FAIL" }, o.name, o.detail).unwrap();
    }
    drop(out);
    assert!(outcomes.iter().all(|o| o.ok), "acceptance criteria failed");
}
