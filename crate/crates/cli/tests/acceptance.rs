//! One test per acceptance criterion. Each prints its pass/fail line to stderr
//! directly so the line shows up even while libtest captures output.

use std::io::Write;

use banditgv_cli::acceptance::run_criterion;

fn check(id: usize) {
    let outcome = run_criterion(id);
    let _ = std::io::stderr().write_all(format!("{}\n", outcome.line()).as_bytes());
    assert!(outcome.pass, "{}", outcome.line());
}

#[test]
fn criterion_01_estimator_bounds() {
    check(1);
}

#[test]
fn criterion_02_unbiasedness() {
    check(2);
}

#[test]
fn criterion_03_sampling_gaps() {
    check(3);
}

#[test]
fn criterion_04_convex_scaling() {
    check(4);
}

#[test]
fn criterion_05_strongly_convex_scaling() {
    check(5);
}

#[test]
fn criterion_06_small_loss() {
    check(6);
}

#[test]
fn criterion_07_one_point_solver() {
    check(7);
}

#[test]
fn criterion_08_one_point_scaling() {
    check(8);
}

#[test]
fn criterion_09_ensembles() {
    check(9);
}

#[test]
fn criterion_10_bilinear_game() {
    check(10);
}

#[test]
fn criterion_11_reproducibility() {
    check(11);
}
