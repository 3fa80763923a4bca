//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::Command;
use std::time::Instant;
use stieltjes_hyp::gdensity::QuadratureConfig;
use stieltjes_hyp_cli::{verify_suite, VerificationReport, SUITES};

struct Criterion {
    id: usize,
    name: &'static str,
    checks: &'static [&'static str],
}

const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, name: "moment identity", checks: &["moment-identity"] },
    Criterion {
        id: 2,
        name: "closed-form kernels",
        checks: &["closed-form-kernel-q1", "closed-form-kernel-q2", "kernel-q3-vs-monte-carlo"],
    },
    Criterion { id: 3, name: "kernel vanishes beyond one", checks: &["kernel-vanishes-beyond-one"] },
    Criterion { id: 4, name: "kernel nonnegative", checks: &["kernel-nonnegative"] },
    Criterion { id: 5, name: "integral representation", checks: &["integral-vs-series", "continuation-z9"] },
    Criterion { id: 6, name: "exact order", checks: &["exact-order"] },
    Criterion { id: 7, name: "limit measure (psi = 0, q = 2)", checks: &["limit-measure-q2"] },
    Criterion {
        id: 8,
        name: "power denominator",
        checks: &["power-denominator-sigma2", "power-denominator-gauss"],
    },
    Criterion {
        id: 9,
        name: "inequalities",
        checks: &["ratio-monotone", "lower-bound", "lower-bound-equality-at-zero", "upper-bound", "log-convex-in-sigma"],
    },
    Criterion { id: 10, name: "majorization chain and Newton", checks: &["supermajorization-implies-chain", "newton-inequality"] },
    Criterion {
        id: 11,
        name: "Pade table",
        checks: &["pade-normal-log", "pade-order-condition", "pade-orthogonality", "pade-convergence"],
    },
    Criterion {
        id: 12,
        name: "mapping properties",
        checks: &[
            "sector-to-lower-half-plane",
            "univalent-half-plane-f-0",
            "univalent-half-plane-f-1",
            "univalent-half-plane-zf-0",
            "univalent-half-plane-zf-1",
            "univalent-disk-0.9",
            "univalent-disk-0.8",
            "starlike-r0.9-0",
            "starlike-r0.9-1",
        ],
    },
    Criterion { id: 13, name: "Laplace identity", checks: &["laplace-identity"] },
];

fn verify_via_binary() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_stieltjes-hyp"))
        .args(["verify", "--suite", "all", "--seed", "42"])
        .output()
        .expect("run binary");
    out.stdout
}

fn main() {
    let start = Instant::now();
    let selection: Vec<String> = SUITES.iter().map(|s| s.to_string()).collect();
    let report: VerificationReport = verify_suite(&selection, 42, &QuadratureConfig::default());
    let mut failures = 0;

    for c in &CRITERIA {
        let mut parts = Vec::new();
        let mut ok = true;
        for check in c.checks {
            match report.entry(check) {
                Some(e) => {
                    ok &= e.passed();
                    parts.push(format!("{check}={:.3e}", e.metric));
                }
                None => {
                    ok = false;
                    parts.push(format!("{check}=missing"));
                }
            }
        }
        if !ok {
            failures += 1;
        }
        println!("criterion {:>2} {:<32} {}  {}", c.id, c.name, if ok { "PASS" } else { "FAIL" }, parts.join(" "));
    }

    let first = verify_via_binary();
    let second = verify_via_binary();
    let same = !first.is_empty() && first == second;
    if !same {
        failures += 1;
    }
    println!(
        "criterion 14 {:<32} {}  report_bytes={}",
        "determinism",
        if same { "PASS" } else { "FAIL" },
        first.len()
    );

    for e in report.entries.iter().filter(|e| matches!(e.status, stieltjes_hyp_cli::Status::Advisory | stieltjes_hyp_cli::Status::Report)) {
        println!("note: {} {:?} metric={:.3e}", e.check, e.status, e.metric);
    }
    println!("acceptance: {} of 14 criteria passed in {:.1}s", 14 - failures, start.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
