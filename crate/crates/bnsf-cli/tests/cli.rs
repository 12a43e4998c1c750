//! End-to-end tests of the `bnsf` binary: exit codes, report files,
//! diagnostics, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bnsf() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bnsf"))
}

fn run(args: &[&str]) -> Output {
    bnsf().args(args).output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A verify config small enough for a test but above the module floors
/// (resolution >= 1000, samples >= 1e4, budget kept modest).
const VERIFY_CFG: &str = "\
[verify]
resolution = 1000
random_starts = 50
ascent_steps = 10
n_grid = 64
samples = 10000
seed = 7
";

#[test]
fn verify_writes_five_report_files_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, VERIFY_CFG).unwrap();
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "verify failed: {}\n{}",
        stderr(&out),
        String::from_utf8_lossy(&out.stdout)
    );
    for f in [
        "poincare.csv",
        "poly.csv",
        "quartic.csv",
        "phi_bounds.csv",
        "verify_summary.txt",
        "summary.txt",
    ] {
        assert!(dir.path().join(f).is_file(), "missing report file {f}");
    }
}

#[test]
fn verify_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, VERIFY_CFG).unwrap();
    let read_all = |d: &Path| -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<_> = std::fs::read_dir(d)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        files.sort();
        files
            .into_iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(&p).unwrap(),
                )
            })
            .collect()
    };
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for o in [&out_a, &out_b] {
        let r = run(&[
            "verify",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            o.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", stderr(&r));
    }
    assert_eq!(read_all(&out_a), read_all(&out_b));
}

#[test]
fn invalid_gamma_exits_2_naming_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "[gas]\ngamma = 0.5\n").unwrap();
    let out = run(&[
        "profile",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("gamma > 1"), "{}", stderr(&out));
}

#[test]
fn unknown_key_exits_2_with_line_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "[grid]\nn = 64\nresolushun = 9\n").unwrap();
    let out = run(&[
        "profile",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("resolushun") && msg.contains("line 3"), "{msg}");
}

#[test]
fn contract_on_profile_data_is_contractive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    // Unperturbed profile data (e0 = 0) on a small grid with a mild shock
    // so the shift sub-stepping stays cheap.
    std::fs::write(
        &cfg,
        "[shock]\neps = 0.1\n\
         [grid]\nl = 60\nn = 129\n\
         [shift]\neps_shift = 0.1\ne0 = 0\nt_end = 0.05\nsample_dt = 0.025\n",
    )
    .unwrap();
    let out = run(&[
        "contract",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "contract failed: {}\n{}",
        stderr(&out),
        String::from_utf8_lossy(&out.stdout)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict = contractive"), "{stdout}");
    assert!(dir.path().join("trajectory.csv").is_file());
    // The summary echoes a config that the parser accepts verbatim.
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    let echo: String = summary
        .lines()
        .skip_while(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| format!("{l}\n"))
        .collect();
    assert!(echo.contains("[gas]"));
}

#[test]
fn profile_command_emits_csv_and_passes_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["profile", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("profile.csv").is_file());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[PASS] profile: v monotone increasing"), "{stdout}");
}
