//! One PASS/FAIL line per acceptance criterion, over both built-in germs.

use algres::germ::GermDefinition;
use algres::verify::{verify_germ, Status, VerifyConfig, VerifyReport};

const CRITERIA: [(&str, &str); 7] = [
    ("basis", "basis dimensions and quasi-degrees"),
    ("relations", "relations reduce to the zero class"),
    ("actions", "infinitesimal action tables"),
    ("classification", "normal forms, cod, mu, ind"),
    ("tangency", "Lagrangian tangency orders"),
    ("geometry", "geometric conditions"),
    ("properties", "seeded property suites"),
];

#[test]
fn acceptance() {
    let cfg = VerifyConfig::default();
    println!();
    let reports: Vec<VerifyReport> = ["W8", "W9"]
        .iter()
        .map(|n| verify_germ(&GermDefinition::builtin(n).unwrap(), &cfg))
        .collect();
    let mut all = true;
    for (k, (suite, title)) in CRITERIA.iter().enumerate() {
        let statuses: Vec<Status> = reports.iter().map(|r| r.suite_status(suite)).collect();
        let pass = statuses.iter().all(|s| *s == Status::Pass);
        all &= pass;
        println!("criterion {} ({title}): {}", k + 1, if pass { "PASS" } else { "FAIL" });
        for r in &reports {
            for c in r.failures().filter(|c| c.suite == *suite) {
                println!("    {} {}: {}", r.germ, c.name, c.detail);
            }
        }
    }
    assert!(all, "acceptance criteria failed");
}
