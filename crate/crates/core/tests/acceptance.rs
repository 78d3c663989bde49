//! Acceptance suite: runs every pinned criterion at full scale and prints
//! one pass/fail line per criterion.

use selmerlab::selfcheck;

#[test]
fn acceptance_criteria() {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get());
    let results = selfcheck::run(false, workers);
    print!("{}", selfcheck::format_results(&results));
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
    assert!(
        failed.is_empty(),
        "{} criteria failed:\n{}",
        failed.len(),
        selfcheck::format_results(&results)
    );
}
