//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use reglab::report::{Report, Status};
use reglab::suites::{run_suite, SuiteParams, SuiteRun};
use reglab_core::brauer::dihedral_relation;
use reglab_core::gmodules::GModule;
use reglab_core::groups::FiniteGroup;
use reglab_core::regulator::{build_phi, rc_pairing, rc_qindex, verify_identity, Identity, IdentityInputs};
use reglab_core::BigRational;

const SEED: u64 = 20261016;

struct Outcome {
    ok: bool,
    note: String,
}

fn suite(name: &str, q: &[usize], trials: usize) -> SuiteRun {
    let mut p = SuiteParams::new(SEED);
    p.q = Some(q.to_vec());
    p.trials = Some(trials);
    run_suite(name, &p).unwrap_or_else(|e| panic!("suite {name}: {e}"))
}

fn select<'a>(run: &'a SuiteRun, check: &str, group: Option<&str>) -> Vec<&'a Report> {
    run.reports
        .iter()
        .filter(|r| r.check == check)
        .filter(|r| group.is_none_or(|g| r.params.get("group").and_then(|v| v.as_str()) == Some(g)))
        .collect()
}

/// Every selected report passes and there are at least `min` of them.
fn all_pass(reports: &[&Report], min: usize, what: &str) -> Outcome {
    let failed: Vec<&&Report> = reports.iter().filter(|r| r.status != Status::Pass).collect();
    let ok = failed.is_empty() && reports.len() >= min;
    let mut note = format!("{what}: {}/{} pass (need >= {min})", reports.len() - failed.len(), reports.len());
    if let Some(r) = failed.first() {
        note.push_str(&format!("; first failure {} trial {:?} seed {}", r.check, r.trial, r.seed));
    }
    Outcome { ok, note }
}

fn combine(parts: Vec<Outcome>) -> Outcome {
    Outcome { ok: parts.iter().all(|o| o.ok), note: parts.into_iter().map(|o| o.note).collect::<Vec<_>>().join("; ") }
}

fn criterion_1() -> Outcome {
    let mut parts = Vec::new();
    for q in [3usize, 5, 9, 15] {
        let start = Instant::now();
        let g = FiniteGroup::dihedral(q).unwrap();
        let theta = dihedral_relation(q).unwrap();
        let z = GModule::trivial(&g, 1);
        let want = BigRational::new(1.into(), (q as i64).into());
        let a = rc_pairing(&z, &theta).unwrap().value;
        let b = rc_qindex(&z, &build_phi(&theta, 0).unwrap()).unwrap().value;
        let rcz = verify_identity(Identity::Rcz, &IdentityInputs::new(z.clone())).unwrap();
        let elapsed = start.elapsed();
        let ok = a == want && b == want && rcz.pass && elapsed < Duration::from_secs(1);
        parts.push(Outcome { ok, note: format!("q={q}: pairing {a}, qindex {b}, {:.0?}", elapsed) });
    }
    combine(parts)
}

fn per_group(run: &SuiteRun, check: &str, groups: &[&str], min: usize) -> Outcome {
    combine(groups.iter().map(|g| all_pass(&select(run, check, Some(g)), min, &format!("{check} {g}"))).collect())
}

fn main() {
    let t0 = Instant::now();
    let dihedral = suite("dihedral", &[3, 5], 200);
    let duality = suite("duality", &[3, 5], 100);
    let finite = suite("finite", &[3, 5], 100);
    let bounds = suite("bounds", &[3, 5, 9, 15], 100);
    let oracles = suite("cohomology-oracles", &[3, 5], 20);
    let brauer = suite("brauer", &[3, 5], 1);
    let suites_time = t0.elapsed();

    let mut results: BTreeMap<usize, Outcome> = BTreeMap::new();
    results.insert(1, criterion_1());

    let mut c2 = vec![per_group(&dihedral, "DIHEDRAL_MAIN", &["D3", "D5"], 200)];
    for g in ["D3", "D5"] {
        let profiles: std::collections::BTreeSet<&str> = select(&dihedral, "DIHEDRAL_MAIN", Some(g))
            .iter()
            .filter_map(|r| r.params.get("profile").and_then(|v| v.as_str()))
            .collect();
        c2.push(Outcome { ok: profiles.len() == 3, note: format!("{g} profiles {profiles:?}") });
    }
    results.insert(2, combine(c2));

    results.insert(3, per_group(&duality, "DUAL1", &["V4", "D3", "D5"], 100));

    results.insert(
        4,
        combine(vec![
            per_group(&duality, "FINITE_DUAL", &["V4", "D3", "D5"], 100),
            per_group(&finite, "FINITE_DUAL", &["D3", "D5"], 100),
            per_group(&finite, "FINITE_DIHEDRAL", &["D3", "D5"], 100),
            per_group(&dihedral, "FINITE_DIHEDRAL", &["D3", "D5"], 200),
            per_group(&finite, "FINITE_SELF_DUAL", &["D3", "D5"], 100),
        ]),
    );

    results.insert(5, all_pass(&select(&dihedral, "DCF", None), 50, "DCF with random homs"));

    results.insert(
        6,
        combine(vec![
            all_pass(&select(&bounds, "BOUNDS", None), 400, "BOUNDS q in 3,5,9,15"),
            all_pass(&select(&dihedral, "BOUNDS", None), 400, "BOUNDS all primes, q in 3,5"),
        ]),
    );

    results.insert(7, per_group(&bounds, "ROSEN", &["D9", "D15"], 100));

    results.insert(
        8,
        combine(
            ["SHAPIRO", "PERIODICITY", "MODP", "FREE", "ROUTES"]
                .iter()
                .map(|c| all_pass(&select(&oracles, c, None), 100, c))
                .collect(),
        ),
    );

    let rank_zero = ["C2", "C3", "C5"].iter().all(|g| {
        select(&brauer, "BRAUER_RANK", Some(g)).first().is_some_and(|r| r.lhs.as_deref() == Some("0/1"))
    });
    results.insert(
        9,
        combine(vec![
            all_pass(&select(&brauer, "BRAUER_RANK", None), 10, "BRAUER_RANK"),
            all_pass(&select(&brauer, "BRAUER_BASIS", None), 10, "BRAUER_BASIS"),
            all_pass(&select(&brauer, "V4_GENERATOR", None), 1, "V4_GENERATOR"),
            all_pass(&select(&brauer, "THETA_D", None), 2, "THETA_D"),
            Outcome { ok: rank_zero, note: format!("C2,C3,C5 empty: {rank_zero}") },
        ]),
    );

    results.insert(10, per_group(&dihedral, "RCZS", &["D3", "D5"], 50));

    let runs = [&dihedral, &duality, &finite, &bounds, &oracles, &brauer];
    let errors: usize = runs.iter().map(|r| r.reports.iter().filter(|x| x.status == Status::Error).count()).sum();
    let fatal: usize = runs.iter().map(|r| r.reports.iter().filter(|x| x.fatal.is_some()).count()).sum();
    results.insert(
        11,
        combine(vec![
            Outcome { ok: errors == 0 && fatal == 0, note: format!("{errors} error reports, {fatal} cross-method disagreements") },
            all_pass(&select(&dihedral, "PHI_SEED", None), 100, "PHI_SEED"),
        ]),
    );

    let mut failed = 0;
    for (n, o) in &results {
        println!("criterion {n}: {} {}", if o.ok { "PASS" } else { "FAIL" }, o.note);
        failed += usize::from(!o.ok);
    }
    println!("suites ran in {:.1?}", suites_time);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
