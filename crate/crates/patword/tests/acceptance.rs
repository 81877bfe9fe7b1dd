//! The acceptance ladder, one test per criterion. Each prints its pass/fail
//! line; gating criteria assert, the stretch criterion only reports.
//!
//! Run with `cargo test -p patword --test acceptance -- --nocapture` to see
//! every line.

use patword::acceptance::*;

fn check(outcome: CriterionOutcome) {
    println!("{}", outcome.line());
    if outcome.gating {
        assert!(outcome.passed, "{}", outcome.line());
    }
}

#[test]
fn criterion_01() {
    check(criterion_01_avoider_fixtures());
}

#[test]
fn criterion_02() {
    check(criterion_02_formula_vs_oracle());
}

#[test]
fn criterion_03() {
    check(criterion_03_corollaries());
}

#[test]
fn criterion_04() {
    check(criterion_04_remark_separation());
}

#[test]
fn criterion_05() {
    check(criterion_05_bijection_round_trip());
}

#[test]
fn criterion_06() {
    check(criterion_06_system_residuals());
}

#[test]
fn criterion_07() {
    check(criterion_07_general_formula_consistency());
}

#[test]
fn criterion_08() {
    check(criterion_08_f1_closed_form());
}

#[test]
fn criterion_09() {
    check(criterion_09_algebraic_equation());
}

#[test]
fn criterion_10() {
    check(criterion_10_recurrences());
}

#[test]
fn criterion_11() {
    check(criterion_11_asymptotics());
}

#[test]
fn criterion_12() {
    check(criterion_12_conjecture_probe());
}

#[test]
fn criterion_13_stretch() {
    check(criterion_13_f3_equation());
}
