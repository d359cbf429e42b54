//! Acceptance run: one line per criterion, exit status 1 if any fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use milnor_core::bsreport::{preset, run_report, BFunctionRoots, Check, Report, Status, PRESETS};

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome {
            ok,
            detail: detail.into(),
        }
    }
}

/// Every check of `preset` whose name starts with one of `prefixes` passes,
/// and each prefix matches at least one check. Checks in `skippable` may
/// also be skipped.
fn require(
    reports: &BTreeMap<&str, Report>,
    wanted: &[(&[&str], &[&str])],
    skippable: &[&str],
) -> Outcome {
    let mut bad: Vec<String> = Vec::new();
    let mut passed = 0;
    for (presets, prefixes) in wanted {
        for p in *presets {
            let Some(rep) = reports.get(p) else {
                bad.push(format!("{p}: no report"));
                continue;
            };
            for prefix in *prefixes {
                let hits: Vec<&Check> = rep
                    .checks
                    .iter()
                    .filter(|c| c.name.starts_with(prefix))
                    .collect();
                if hits.is_empty() {
                    bad.push(format!("{p}: no check {prefix}*"));
                }
                for c in hits {
                    match c.status {
                        Status::Pass => passed += 1,
                        Status::Skip if skippable.iter().any(|s| c.name.starts_with(s)) => {}
                        s => bad.push(format!(
                            "{p}: {} is {s:?}, computed {} expected {}",
                            c.name, c.computed, c.expected
                        )),
                    }
                }
            }
        }
    }
    if bad.is_empty() {
        Outcome::new(true, format!("{passed} checks"))
    } else {
        Outcome::new(false, bad.join("; "))
    }
}

fn no_external_cas() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let mut offenders = Vec::new();
    let mut scanned = 0;
    for dir in [root.join("src"), root.join("../cli/src")] {
        let mut stack = vec![dir];
        while let Some(d) = stack.pop() {
            let Ok(entries) = fs::read_dir(&d) else {
                offenders.push(format!("unreadable {}", d.display()));
                continue;
            };
            for e in entries.flatten() {
                let path = e.path();
                if path.is_dir() {
                    stack.push(path);
                } else if path.extension().is_some_and(|x| x == "rs") {
                    scanned += 1;
                    let text = fs::read_to_string(&path).unwrap_or_default();
                    if text.contains("process::Command") || text.contains("Command::new") {
                        offenders.push(path.display().to_string());
                    }
                }
            }
        }
    }
    let fixtures: Vec<String> = ["b_h", "b_f1", "b_f2"]
        .iter()
        .filter_map(|n| {
            BFunctionRoots::builtin(n)
                .err()
                .map(|e| format!("{n}: {e}"))
        })
        .collect();
    offenders.extend(fixtures);
    if offenders.is_empty() {
        Outcome::new(
            true,
            format!("{scanned} sources spawn no processes; fixtures load"),
        )
    } else {
        Outcome::new(false, offenders.join("; "))
    }
}

fn properties() -> Outcome {
    let results = common::run_properties(100);
    let failed: Vec<String> = results
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    if failed.is_empty() {
        Outcome::new(true, format!("{} properties x 100 cases", results.len()))
    } else {
        Outcome::new(false, failed.join("; "))
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let reports: BTreeMap<&str, Report> = std::thread::scope(|s| {
        let handles: Vec<_> = PRESETS
            .iter()
            .map(|&name| {
                (
                    name,
                    s.spawn(move || preset(name).and_then(|c| run_report(&c))),
                )
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|(name, h)| match h.join().expect("preset thread") {
                Ok(r) => Some((name, r)),
                Err(e) => {
                    eprintln!("{name}: {e}");
                    None
                }
            })
            .collect()
    });

    const F1: &[&str] = &["f1"];
    const F2: &[&str] = &["f2"];
    const F12: &[&str] = &["f1", "f2"];
    const PAIR: &[&str] = &["f3", "f4"];
    let criteria: Vec<Criterion> = vec![
        (
            "Hilbert rows",
            Box::new(|| {
                require(
                    &reports,
                    &[
                        (F12, &["row.mu_k", "global_tjurina"]),
                        (PAIR, &["row.mu_k", "global_tjurina"]),
                    ],
                    &[],
                )
            }),
        ),
        (
            "torsion rows and symmetry",
            Box::new(|| {
                require(
                    &reports,
                    &[
                        (F12, &["row.mu'_k", "torsion_symmetry"]),
                        (PAIR, &["row.mu'_k", "torsion_symmetry"]),
                    ],
                    &[],
                )
            }),
        ),
        (
            "Koszul row, identities, dbar rank",
            Box::new(|| {
                require(
                    &reports,
                    &[(
                        F12,
                        &[
                            "row.nu_k",
                            "row.gamma_k",
                            "row.mu''_k",
                            "row.nu_{k+5}",
                            "identity_violations",
                            "dbar_rank",
                        ],
                    )],
                    &[],
                )
            }),
        ),
        (
            "spectral sequence of f1",
            Box::new(|| {
                require(
                    &reports,
                    &[(
                        F1,
                        &[
                            "row.mu^(2)_k",
                            "row.nu^(2)_{k+5}",
                            "row.mu^(3)_k",
                            "pole_spectrum",
                        ],
                    )],
                    &[],
                )
            }),
        ),
        (
            "spectral sequence of f2",
            Box::new(|| {
                require(
                    &reports,
                    &[(
                        F2,
                        &["page_table_candidate", "pole_spectrum", "r0_separation"],
                    )],
                    &[],
                )
            }),
        ),
        (
            "image witnesses for f1",
            Box::new(|| {
                require(
                    &reports,
                    &[(
                        F1,
                        &[
                            "jacobian_member",
                            "torsion_class",
                            "image_of_d",
                            "laurent_forms",
                        ],
                    )],
                    &[],
                )
            }),
        ),
        (
            "local invariants",
            Box::new(|| {
                require(
                    &reports,
                    &[(F1, &["local_invariants", "tau_reconciliation"])],
                    &[],
                )
            }),
        ),
        (
            "spectra",
            Box::new(|| require(&reports, &[(F1, &["spectrum."])], &[])),
        ),
        (
            "V-filtration",
            Box::new(|| require(&reports, &[(F1, &["grv_vanishes"])], &[])),
        ),
        (
            "b-function fixtures",
            Box::new(|| {
                require(
                    &reports,
                    &[(
                        F12,
                        &["factorization", "steenbrink_vs_pole", "r0_vs_pole.k="],
                    )],
                    &["r0_vs_pole.k="],
                )
            }),
        ),
        ("property suites", Box::new(properties)),
        ("no external computer algebra", Box::new(no_external_cas)),
    ];

    let mut failures = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.ok {
            failures += 1;
        }
        println!(
            "{} {:>2} {title}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    for (name, rep) in &reports {
        println!(
            "     {name}: {} pass, {} fail, {} skip, {} inconclusive",
            rep.count(Status::Pass),
            rep.count(Status::Fail),
            rep.count(Status::Skip),
            rep.count(Status::Inconclusive)
        );
    }
    println!(
        "{} of {} criteria pass ({:.0?})",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed()
    );
    if failures == 0 && reports.len() == PRESETS.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
