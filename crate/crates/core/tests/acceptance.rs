//! Acceptance criteria, one PASS/FAIL line each. Criteria listed in KNOWN
//! print FAIL with the reason but do not fail the run; any other FAIL does.

use std::process::ExitCode;

use tyd_core::phi::{self, PhiVariant};
use tyd_core::relations::catalogs;
use tyd_core::report::{Entry, Report, Status};
use tyd_core::suites::{self, run, timed, RunConfig, UNIQUE_VARIANT_ID};

const KNOWN: [(u32, &str); 3] = [
    (4, "far-fork: the identity is false in the twisted current algebra"),
    (5, "pair commutator: neither printed reading holds; the completed form does"),
    (6, "no variant satisfies every printed relation; transposed_minus satisfies the corrected ones"),
];

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    secs: f64,
    details: Vec<String>,
}

fn cfg(suites: &[&str], modes: u32) -> RunConfig {
    RunConfig { suites: suites.iter().map(|s| s.to_string()).collect(), mode_bound: modes, ..RunConfig::default() }
}

fn failing_ids(entries: &[Entry]) -> Vec<String> {
    let mut ids: Vec<String> = entries
        .iter()
        .filter(|e| e.status == Status::Fail)
        .map(|e| format!("{}/{}", e.suite, e.relation_id))
        .collect();
    ids.dedup();
    ids
}

fn counts(r: &Report) -> String {
    let s = &r.summary;
    format!("{} entries: {} pass, {} fail, {} skipped, {} informational", s.total, s.pass, s.fail, s.skipped, s.informational)
}

fn catalog_criterion(id: u32, name: &'static str, suite: &'static str, modes: u32, limit: f64) -> Outcome {
    let (r, secs) = timed(|| run(&cfg(&[suite], modes)).expect("valid config"));
    let mut details = vec![counts(&r)];
    details.extend(failing_ids(&r.entries).into_iter().map(|f| format!("failing: {f}")));
    Outcome { id, name, pass: r.passed() && secs < limit, secs, details }
}

fn has(entries: &[Entry], id: &str, status: Status) -> bool {
    entries.iter().any(|e| e.relation_id == id && e.status == status)
}

fn all_pass(entries: &[Entry], id: &str) -> bool {
    let mut any = false;
    for e in entries.iter().filter(|e| e.relation_id == id) {
        any = true;
        if e.status != Status::Pass {
            return false;
        }
    }
    any
}

fn s_lemma_criterion() -> Outcome {
    let (entries, secs) = timed(|| suites::s_lemma(5).expect("n=5"));
    let mut details = Vec::new();
    let mut pass = true;
    for id in ["s1-antisymmetry", "s2-twist", "s3-antisymmetry", "s1-action", "s2-diagonal-commutator"] {
        let ok = all_pass(&entries, id);
        pass &= ok;
        details.push(format!("{id}: {}", if ok { "pass" } else { "FAIL" }));
    }
    let literal = has(&entries, "s2-pair-commutator", Status::Pass);
    let symmetric = has(&entries, "s2-pair-commutator-symmetric", Status::Pass);
    let completed = has(&entries, "s2-pair-commutator-completed", Status::Pass);
    pass &= literal || symmetric;
    details.push(format!(
        "pair commutator: literal {}, symmetric {}, completed {}",
        if literal { "pass" } else { "FAIL" },
        if symmetric { "pass" } else { "FAIL" },
        if completed { "pass" } else { "FAIL" },
    ));
    let literal_action = entries.iter().filter(|e| e.relation_id == "s1-action-literal");
    let (n, bad) = literal_action.fold((0, 0), |(n, b), e| (n + 1, b + (e.status != Status::Pass) as usize));
    details.push(format!("literal action formula: {bad} of {n} instances fail (informational)"));
    Outcome { id: 5, name: "S-element lemma", pass, secs, details }
}

fn phi_criterion() -> Outcome {
    let (r, secs) = timed(|| run(&cfg(&["ty-phi"], 4)).expect("valid config"));
    let unique = r.entries.iter().find(|e| e.relation_id == UNIQUE_VARIANT_ID).expect("summary entry");
    let mut details = vec![format!("variant summary: {}", serde_json::to_string(&unique.params).unwrap())];
    let corrected_ok = r
        .entries
        .iter()
        .filter(|e| e.suite == phi::SUITE && (e.relation_id.ends_with("-corrected") || e.relation_id.ends_with("-corner")))
        .filter(|e| e.params.get("variant").and_then(|v| v.as_str()) == Some(PhiVariant::TransposedMinus.label()))
        .all(|e| e.status == Status::Pass);
    details.push(format!("transposed_minus on corrected relations: {}", if corrected_ok { "pass" } else { "FAIL" }));
    details.extend(failing_ids(&r.entries).into_iter().map(|f| format!("failing: {f}")));
    let pass = unique.status == Status::Pass && secs < 600.0;
    Outcome { id: 6, name: "unique Φ variant on the TY presentation", pass, secs, details }
}

fn gr_criterion() -> Outcome {
    let (res, secs) = timed(|| {
        let y = phi::reduced_yangian(5).expect("n=5");
        PhiVariant::ALL.map(|v| (v, phi::gr_leading_check(&phi::PhiMapping::new(&y, v).expect("mapping"))))
    });
    let mut details = Vec::new();
    let mut pass = false;
    for (v, es) in res {
        let bad: Vec<String> = es
            .iter()
            .filter(|e| e.status == Status::Fail)
            .map(|e| format!("{} i={}", e.relation_id, e.params.get("i").map(|v| v.to_string()).unwrap_or_default()))
            .collect();
        if v == PhiVariant::TransposedMinus {
            pass = bad.is_empty() && !es.is_empty();
        }
        details.push(format!("{}: {} images, {} off-sign or off-degree {:?}", v.label(), es.len(), bad.len(), bad));
    }
    Outcome { id: 7, name: "gr-leading terms under one global sign", pass, secs, details }
}

fn props_criterion() -> Outcome {
    let c = suites::PropCounts::default();
    let ((props, oracle), secs) = timed(|| (suites::props(5, 0, &c), suites::oracle(5, 0, c.oracle)));
    let mut details = Vec::new();
    let mut pass = true;
    for id in ["jacobi", "tau-tilde-homomorphism", "nf-idempotent", "nf-linear", "nf-antisymmetric", "confluence"] {
        let cases = props.iter().filter(|e| e.relation_id == id).count();
        let bad = props.iter().filter(|e| e.relation_id == id && e.status != Status::Pass).count();
        pass &= bad == 0 && cases > 0;
        details.push(format!("{id}: {cases} cases, {bad} violations"));
    }
    for id in ["evaluation-self-test", "normal-form-preserved"] {
        let cases = oracle.iter().filter(|e| e.relation_id == id).count();
        let bad = oracle.iter().filter(|e| e.relation_id == id && e.status != Status::Pass).count();
        pass &= bad == 0 && cases > 0;
        details.push(format!("oracle {id}: {cases} cases, {bad} violations"));
    }
    Outcome { id: 8, name: "property suites", pass, secs, details }
}

fn determinism_criterion() -> Outcome {
    let c = cfg(&["typeA", "L", "mini", "appendixA", "ty-phi", "props"], 3);
    let in_pool = |jobs: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("pool");
        pool.install(|| run(&c).expect("valid config").to_json())
    };
    let (out, secs) = timed(|| (in_pool(8), in_pool(8), in_pool(1)));
    let repeat = out.0 == out.1;
    let jobs = out.0 == out.2;
    let details = vec![
        format!("repeat run byte-identical: {repeat} ({} bytes)", out.0.len()),
        format!("jobs=1 vs jobs=8 byte-identical: {jobs}"),
    ];
    Outcome { id: 9, name: "determinism", pass: repeat && jobs, secs, details }
}

fn main() -> ExitCode {
    assert!(catalogs::ty().is_ok());
    let outcomes = [
        catalog_criterion(1, "L suite, modes ≤ 4, under 2 min", "L", 4, 120.0),
        catalog_criterion(2, "typeA suite under 30 s", "typeA", 4, 30.0),
        catalog_criterion(3, "mini suite with recursive definitions under 30 s", "mini", 4, 30.0),
        catalog_criterion(4, "appendixA suite, modes ≤ 3 with mirrors, under 2 min", "appendixA", 3, 120.0),
        s_lemma_criterion(),
        phi_criterion(),
        gr_criterion(),
        props_criterion(),
        determinism_criterion(),
    ];
    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN.iter().find(|(id, _)| *id == o.id);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = match (o.pass, known) {
            (false, Some((_, why))) => format!(" [known: {why}]"),
            (false, None) => {
                unexpected += 1;
                String::new()
            }
            _ => String::new(),
        };
        println!("{verdict} criterion {}: {} ({:.2}s){note}", o.id, o.name, o.secs);
        for d in &o.details {
            println!("    {d}");
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failures");
        ExitCode::FAILURE
    }
}
