//! Acceptance criteria 1-12, one line each. Criteria that fail for
//! documented reasons are printed as FAIL and checked to fail in exactly
//! the expected way.

use std::collections::BTreeSet;

use ldual::interpolating::{Report, Status};
use ldual::sweep::{campaign_json, run_campaign};

const TITLES: [&str; 12] = [
    "crystal sizes",
    "Langlands component census",
    "Langlands components are dual crystals",
    "folded character contains the dual irreducible",
    "stated branching rules",
    "crystal characters match the oracles",
    "normality of tilde crystals",
    "tableaux crystals and bijections",
    "interpolating module relations and specializations",
    "Serre obstruction identities",
    "layer construction completes",
    "deterministic reports",
];

/// (module, relation id, vector) of every failing row.
fn failing(r: &Report) -> BTreeSet<(String, String, String)> {
    r.failures()
        .iter()
        .map(|f| (f.module.clone(), f.relation_id.clone(), f.vector.clone()))
        .collect()
}

fn ids(r: &Report) -> BTreeSet<String> {
    r.failures().iter().map(|f| f.relation_id.clone()).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Known failures: the reason, and a check that the failure is the
/// documented one.
fn known(k: usize, r: &Report) -> Option<(&'static str, bool)> {
    match k {
        5 => {
            let bad = set(&["a2_rule_axis_odd", "a2_rule_odd_odd"]);
            let all_fail = r
                .entries
                .iter()
                .filter(|e| bad.contains(&e.relation_id))
                .all(|e| e.status == Status::Fail);
            Some(("two stated A2 rules disagree with the character oracle", ids(r) == bad && all_fail))
        }
        9 => {
            let want: BTreeSet<(String, String, String)> = [
                ("Example3", "mixed[1,2]", "v3"),
                ("Example3", "mixed[1,2]", "v14"),
                ("Example3|q=eps", "mixed_eps[1,2]", "v3"),
                ("Example3|q=eps", "mixed_eps[1,2]", "v13"),
            ]
                .iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
                .collect();
            Some(("the 2ω1 module violates [X1+, X2-] = 0 at two vectors", failing(r) == want))
        }
        10 => Some(("the stated K-relation is not reproduced", ids(r) == set(&["printed_bracket"]))),
        11 => {
            let want: BTreeSet<(String, String, String)> = [("B2", "deform", "(2,0)"), ("B2", "deform", "(1,2)")]
                .iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
                .collect();
            let msgs: Vec<&str> = r.failures().iter().map(|f| f.witness_polynomial.as_str()).collect();
            let compat = msgs.iter().all(|m| m.contains("compatibility"));
            Some(("2ω1 and ω1+2ω2 fail the compatibility condition", failing(r) == want && compat))
        }
        _ => None,
    }
}

fn main() {
    let first = run_campaign("all").expect("campaign runs");
    let second = run_campaign("all").expect("campaign runs");
    let (a, b) = (campaign_json(&first).to_string(), campaign_json(&second).to_string());

    let mut unexpected = Vec::new();
    for (k, rep) in &first {
        let n = rep.entries.len();
        let f = rep.failures().len();
        let line = format!("criterion {k:>2} {}: {n} checks, {f} failed", TITLES[k - 1]);
        match (rep.passed(), known(*k, rep)) {
            (true, None) if n > 0 => println!("PASS {line}"),
            (false, Some((why, true))) => println!("FAIL {line} ({why})"),
            _ => {
                println!("FAIL {line} (unexpected)");
                for e in rep.failures().iter().take(10) {
                    println!("     {} {} {}: {}", e.module, e.relation_id, e.vector, e.witness_polynomial);
                }
                unexpected.push(*k);
            }
        }
    }
    let same = a == b;
    println!("{} criterion 12 {}: {} bytes", if same { "PASS" } else { "FAIL" }, TITLES[11], a.len());
    assert!(same, "reports differ between runs");
    assert!(unexpected.is_empty(), "unexpected outcomes for criteria {unexpected:?}");
}
