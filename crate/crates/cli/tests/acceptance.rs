use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use scaletop_core::finite_topology::{enumerate_topologies, validate_topology, Family, PointSet};
use scaletop_core::verifier::{fixtures, run_property, FixtureCheck, PropertyId, SweepConfig};

struct Criterion {
    id: &'static str,
    what: &'static str,
    limit: Duration,
    run: fn() -> Result<String, String>,
}

fn fixture_rows(fixture: &str) -> Result<String, String> {
    let rows: Vec<FixtureCheck> = fixtures().map_err(|e| e.to_string())?.into_iter().filter(|c| c.fixture == fixture).collect();
    if rows.is_empty() {
        return Err(format!("no rows for {fixture}"));
    }
    match rows.iter().find(|c| !c.passed()) {
        Some(c) => Err(format!("{}: expected {}, computed {}", c.claim, c.expected, c.computed)),
        None => Ok(format!("{} checks", rows.len())),
    }
}

fn sweep(ids: &[PropertyId], cfg: &SweepConfig, min_tested: u64) -> Result<String, String> {
    let mut notes = Vec::new();
    for &id in ids {
        let r = run_property(id, cfg).map_err(|e| format!("{id}: {e}"))?;
        if !r.confirmed() {
            let first = r.violations.first().map(|v| v.certificate.clone()).unwrap_or_default();
            return Err(format!("{id}: {} violations, first: {first}", r.violation_count));
        }
        if r.tested < min_tested {
            return Err(format!("{id}: only {} instances tested", r.tested));
        }
        if r.tested + r.skipped != r.generated {
            return Err(format!("{id}: tested and skipped do not add up"));
        }
        notes.push(format!("{id} {} tested", r.tested));
    }
    Ok(notes.join(", "))
}

fn ac1() -> Result<String, String> {
    fixture_rows("ex17")
}

fn ac2() -> Result<String, String> {
    fixture_rows("ex12")
}

fn ac3() -> Result<String, String> {
    fixture_rows("ex13")
}

fn ac4() -> Result<String, String> {
    fixture_rows("ex15")
}

fn ac5() -> Result<String, String> {
    sweep(&[PropertyId::P4], &SweepConfig::exhaustive(3), 1)
}

fn ac6() -> Result<String, String> {
    use PropertyId::*;
    sweep(&[L1, L2, L5, L6], &SweepConfig::exhaustive(3), 1)
}

fn ac7() -> Result<String, String> {
    use PropertyId::*;
    sweep(&[P1A, P1B, C1], &SweepConfig::exhaustive(3), 1)
}

fn ac8() -> Result<String, String> {
    use PropertyId::*;
    sweep(&[P2, P5, P6], &SweepConfig::exhaustive(3), 1)
}

fn ac9() -> Result<String, String> {
    use PropertyId::*;
    sweep(&[T1, T2, P9], &SweepConfig::sampled(3, 2024).with_budget(32, 16), 10_000)
}

fn ac10() -> Result<String, String> {
    use PropertyId::*;
    sweep(&[T3, C10], &SweepConfig::sampled(4, 2024).with_budget(24, 256), 1)
}

fn ac11() -> Result<String, String> {
    sweep(&[PropertyId::BqoaClaim], &SweepConfig::sampled(1, 2024).with_budget(16, 16), 100)
}

/// Every family of subsets of an `n`-point carrier containing the empty set
/// and the carrier, filtered by the raw axioms.
fn brute_force_count(n: usize) -> usize {
    let full = (1u32 << n) - 1;
    let middle: Vec<u32> = (1..full).collect();
    (0u64..1 << middle.len())
        .filter(|mask| {
            let mut sets = vec![0u32, full];
            sets.extend(middle.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s));
            sets.iter().all(|a| sets.iter().all(|b| sets.contains(&(a | b)) && sets.contains(&(a & b))))
        })
        .count()
}

fn ac12() -> Result<String, String> {
    let expected = [1, 4, 29, 355];
    for (n, &want) in (1..=4).zip(&expected) {
        let spaces = enumerate_topologies(n).map_err(|e| e.to_string())?;
        if spaces.len() != want {
            return Err(format!("n = {n}: {} topologies", spaces.len()));
        }
        for s in &spaces {
            let opens: Vec<Vec<usize>> = s.opens().sets().map(PointSet::to_vec).collect();
            if !validate_topology(&opens, n).map_err(|e| e.to_string())?.is_valid() {
                return Err(format!("n = {n}: enumerated family fails the axioms"));
            }
        }
        let distinct: std::collections::BTreeSet<u64> = spaces.iter().map(|s| Family::bits(s.opens())).collect();
        if distinct.len() != want {
            return Err(format!("n = {n}: duplicate topologies"));
        }
        if n <= 3 && brute_force_count(n) != want {
            return Err(format!("n = {n}: brute force finds {}", brute_force_count(n)));
        }
    }
    Ok("1, 4, 29, 355".into())
}

fn verify_json(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_scaletop"))
        .args(["--quiet", "verify"])
        .args(args)
        .env("SCALETOP_THREADS", "4")
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() == Some(2) {
        return Err(String::from_utf8_lossy(&out.stdout).into_owned());
    }
    Ok(out.stdout)
}

fn ac13() -> Result<String, String> {
    let runs: [&[&str]; 4] = [
        &["--property", "T1", "--max-n", "3", "--mode", "sampled", "--seed", "11"],
        &["--property", "PR1", "--max-n", "3", "--mode", "sampled", "--seed", "11"],
        &["--property", "P7B", "--max-n", "3", "--mode", "sampled", "--seed", "1"],
        &["--property", "L3", "--max-n", "2", "--mode", "exhaustive"],
    ];
    for args in runs {
        let a = verify_json(args)?;
        let b = verify_json(args)?;
        if a != b || a.is_empty() {
            return Err(format!("reports differ for {}", args.join(" ")));
        }
    }
    Ok(format!("{} invocations repeated byte for byte", runs.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: "AC1", what: "exact gaps 1/11 and 21/121, fuzzy verdicts at 1/10", limit: Duration::from_secs(1), run: ac1 },
        Criterion { id: "AC2", what: "punctured-interval inclusion: local but not global", limit: Duration::from_secs(1), run: ac2 },
        Criterion { id: "AC3", what: "mixed rational/irrational identity: global, never pointwise", limit: Duration::from_secs(1), run: ac3 },
        Criterion { id: "AC4", what: "two-sheet projection: weak everywhere, strong nowhere", limit: Duration::from_secs(1), run: ac4 },
        Criterion { id: "AC5", what: "closed-preimage characterization, exhaustive n <= 3", limit: Duration::from_secs(600), run: ac5 },
        Criterion { id: "AC6", what: "trivial scales agree with classical continuity, n <= 3", limit: Duration::from_secs(600), run: ac6 },
        Criterion { id: "AC7", what: "closure flags match Q-closed set closure, n <= 3", limit: Duration::from_secs(600), run: ac7 },
        Criterion { id: "AC8", what: "surjective maps: local implies global, n <= 3", limit: Duration::from_secs(600), run: ac8 },
        Criterion { id: "AC9", what: "composition preservation, >= 10^4 sampled triples", limit: Duration::from_secs(300), run: ac9 },
        Criterion { id: "AC10", what: "P-structures into discrete spaces: constancy, n <= 4", limit: Duration::from_secs(600), run: ac10 },
        Criterion { id: "AC11", what: "no bounded nonempty closed sets for bounded balls", limit: Duration::from_secs(60), run: ac11 },
        Criterion { id: "AC12", what: "topology counts with brute-force cross-check", limit: Duration::from_secs(60), run: ac12 },
        Criterion { id: "AC13", what: "verify reports are byte-identical across runs", limit: Duration::from_secs(600), run: ac13 },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (ok, note) = match result {
            Ok(note) if elapsed <= c.limit => (true, note),
            Ok(note) => (false, format!("{note}; took longer than {:?}", c.limit)),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{:<5} {}  {} [{:.2}s] {}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.what,
            elapsed.as_secs_f64(),
            note
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
