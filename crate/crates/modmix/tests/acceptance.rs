//! One test per acceptance criterion, each printing a PASS/FAIL line.
//! Criteria run one at a time so that the timed ones are not competing with
//! the heavy ones.

use std::io::Write;
use std::sync::Mutex;

use modmix::reproduce::{run_criterion, summary_line};

static SERIAL: Mutex<()> = Mutex::new(());
const SEED: u64 = 0;

fn check(id: u32) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let outcome = run_criterion(id, SEED).expect("criterion runs");
    // Written to the process stdout directly so the line survives capture.
    let _ = writeln!(std::io::stdout().lock(), "{}", summary_line(&outcome));
    assert!(outcome.values_ok, "criterion {id} values: {}", outcome.detail);
    assert!(
        outcome.within_time_limit,
        "criterion {id} took {:?}, limit {:?}",
        outcome.elapsed,
        outcome.limit
    );
}

#[test]
fn criterion_01_worked_example() {
    check(1);
}

#[test]
fn criterion_02_linear_witnesses() {
    check(2);
}

#[test]
fn criterion_03_quadratic_averages_exhaustive() {
    check(3);
}

#[test]
fn criterion_04_prime_power_closed_form() {
    check(4);
}

#[test]
fn criterion_05_exponential_sums() {
    check(5);
}

#[test]
fn criterion_06_norm_bound() {
    check(6);
}

#[test]
fn criterion_07_pair_counts() {
    check(7);
}

#[test]
fn criterion_08_coverage_obstruction() {
    check(8);
}

#[test]
fn criterion_09_under_and_over_ergodic() {
    check(9);
}

#[test]
fn criterion_10_convergence_trend() {
    check(10);
}

#[test]
fn criterion_11_weak_mixing_failure() {
    check(11);
}

#[test]
fn criterion_12_kernel_equivalence_and_speed() {
    check(12);
}
