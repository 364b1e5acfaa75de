//! The acceptance gate. Criteria 1 through 9 run the library self-test at
//! full sample counts; criterion 10 drives the installed binary and holds
//! it to the determinism and time-budget contract. Run with
//! `cargo test --test acceptance -- --nocapture` to see one report block
//! per criterion.

use gnslab::selftest::{run_criterion, Level};

fn criterion(id: usize) {
    let report = run_criterion(id, Level::Full);
    print!("{}", report.render());
    assert!(report.pass(), "criterion {id} failed:\n{}", report.render());
}

#[test]
fn criterion_01_chern_numbers_on_refined_grids() {
    criterion(1);
}

#[test]
fn criterion_02_transition_probability_identity() {
    criterion(2);
}

#[test]
fn criterion_03_cross_sector_distance() {
    criterion(3);
}

#[test]
fn criterion_04_metric_equivalence_chains() {
    criterion(4);
}

#[test]
fn criterion_05_interpolation_norm_control() {
    criterion(5);
}

#[test]
fn criterion_06_gns_correctness() {
    criterion(6);
}

#[test]
fn criterion_07_bundle_cocycles() {
    criterion(7);
}

#[test]
fn criterion_08_spin_chain() {
    criterion(8);
}

#[test]
fn criterion_09_uhf_arithmetic() {
    criterion(9);
}

#[test]
fn criterion_10_determinism_and_selftest() {
    use std::process::Command;
    use std::time::Instant;

    let exe = env!("CARGO_BIN_EXE_gnslab");
    let start = Instant::now();
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = Command::new(exe)
            .args(["selftest", "--quick"])
            .env_remove("GNSLAB_SELFTEST_SABOTAGE")
            .env_remove("GNSLAB_TOL_PROFILE")
            .output()
            .expect("selftest subprocess");
        assert!(
            out.status.success(),
            "quick selftest exited {:?}:\n{}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout)
        );
        outputs.push(out.stdout);
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "two quick selftests took {:.1} s, budget is 60 s for one",
        elapsed.as_secs_f64()
    );
    assert_eq!(
        outputs[0], outputs[1],
        "quick selftest output must be byte-identical across runs"
    );
    let text = String::from_utf8_lossy(&outputs[0]);
    assert!(text.contains("criterion 9"), "report covers all criteria");
    assert!(text.contains("9/9 criteria passed"), "summary line present");
    println!(
        "criterion 10: PASS  determinism and self-test (two runs in {:.2} s, byte-identical)",
        elapsed.as_secs_f64()
    );
}
