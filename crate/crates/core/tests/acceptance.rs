//! Acceptance suite: one test per advertised identity, each printing a
//! single pass/fail line (visible under `--nocapture` or on failure).

use std::time::Instant;

use lieder::verify::{
    check_arithmetic_heads, check_cocycle_spaces, check_depth3_kernel, check_genus0_bridge,
    check_ihara_takao, check_quadratic_kernels, check_sl2_structure, check_structural_bookkeeping,
    check_theta_annihilation, check_weight12_cubic, check_weight_filtrations, CheckResult, NO_CAP,
};

fn report(run: fn(usize) -> CheckResult) {
    let start = Instant::now();
    let result = run(NO_CAP);
    let status = if result.passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {}: {status} ({:.2?})",
        result.name,
        start.elapsed()
    );
    for line in &result.lines {
        println!("    {line}");
    }
    assert!(result.passed, "criterion {} failed", result.name);
}

#[test]
fn criterion_01_theta_annihilation() {
    report(check_theta_annihilation);
}

#[test]
fn criterion_02_sl2_structure() {
    report(check_sl2_structure);
}

#[test]
fn criterion_03_weight12_cubic() {
    report(check_weight12_cubic);
}

#[test]
fn criterion_04_quadratic_kernels() {
    report(check_quadratic_kernels);
}

#[test]
fn criterion_05_depth3_kernel() {
    report(check_depth3_kernel);
}

#[test]
fn criterion_06_ihara_takao() {
    report(check_ihara_takao);
}

#[test]
fn criterion_07_genus0_bridge() {
    report(check_genus0_bridge);
}

#[test]
fn criterion_08_cocycle_spaces() {
    report(check_cocycle_spaces);
}

#[test]
fn criterion_09_arithmetic_heads() {
    report(check_arithmetic_heads);
}

#[test]
fn criterion_10_weight_filtrations() {
    report(check_weight_filtrations);
}

#[test]
fn criterion_11_structural_bookkeeping() {
    report(check_structural_bookkeeping);
}
