//! One line per acceptance criterion; exits nonzero if any fails.

use hypercone::suite::{run_suite, CRITERIA};

const SEED: u64 = 7;

fn main() {
    let ids: Vec<usize> = (1..=CRITERIA).collect();
    let report = run_suite(&ids, SEED).expect("criterion ids are valid");
    for c in &report.criteria {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "[{mark}] {:>2} {:<48} {:>8.2?}  {}",
            c.id, c.name, c.elapsed, c.detail
        );
    }
    let failed = report.criteria.iter().filter(|c| !c.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        report.criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
