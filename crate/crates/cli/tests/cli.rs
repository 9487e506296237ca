use std::process::{Command, Output};

fn tiltbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tiltbound")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = tiltbound(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows (comments and header dropped) split into fields.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn bound_emits_reference_rows() {
    let out = stdout(&["bound", "--channel", "ternary", "--v1", "0.27", "--v2", "0.33", "--theta", "1,20"]);
    assert!(out.starts_with("# version:"));
    let rows = rows(&out);
    let pe = rows.iter().find(|r| r[0] == "pe").unwrap();
    assert!((num(&pe[3]) - 0.6).abs() < 1e-9);
    let fano = rows.iter().find(|r| r[0] == "fano").unwrap();
    assert!((num(&fano[3]) - 0.568348).abs() < 1e-5);
    let gpv: Vec<_> = rows.iter().filter(|r| r[0] == "gpv").collect();
    assert_eq!(gpv.len(), 2 * 101);
    for r in gpv {
        assert!(num(&r[3]) <= 0.6 + 1e-12);
        if r[2] == "1" {
            assert_eq!(num(&r[3]), 0.0);
        }
    }
}

#[test]
fn gaussian_figure_hits_the_closed_form() {
    let rows = rows(&stdout(&["figure", "3"]));
    let r = rows.iter().find(|r| r[0] == "theta=10" && r[1] == "0.5").unwrap();
    assert!((num(&r[2]) - 0.005).abs() < 1e-6);
}

#[test]
fn ternary_theta_sweep_exceeds_the_classical_value() {
    let rows = rows(&stdout(&["figure", "2"]));
    let at = |th: &str| rows.iter().find(|r| r[0] == "maximized" && r[1] == th).map(|r| num(&r[2])).unwrap();
    assert!((at("1") - 0.574468).abs() < 1e-5);
    assert!(at("20") > 0.574468);
}

#[test]
fn sphere_packing_curve_decreases_to_zero() {
    let rows = rows(&stdout(&["reliability", "--channel", "bsc", "--eps", "0.01", "--theta", "1"]));
    let esp: Vec<f64> = rows.iter().filter(|r| r[0] == "E_sp").map(|r| num(&r[2])).collect();
    assert_eq!(esp.len(), 64);
    assert!(esp.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    assert!(*esp.last().unwrap() < 1e-3);
}

#[test]
fn code_check_is_sound_on_a_repetition_code() {
    let rows =
        rows(&stdout(&["code-check", "--channel", "z", "--eps", "0.1", "--code", "repetition:3", "--theta", "1,10"]));
    assert_eq!(rows.len(), 2 * 21);
    assert!(rows.iter().all(|r| r[4] == "true"));
}

#[test]
fn single_codeword_has_zero_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.code");
    std::fs::write(&path, "# one word\n3 1\n0 1 0\n").unwrap();
    let rows = rows(&stdout(&["code-check", "--channel", "bsc", "--eps", "0.2", "--code", path.to_str().unwrap()]));
    assert!(rows.iter().all(|r| num(&r[2]) == 0.0 && num(&r[3]) == 0.0));
}

#[test]
fn channel_file_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.dmc");
    std::fs::write(&path, "# Z channel\n2 2\n1 0\n0.1 0.9\n").unwrap();
    let from_file = rows(&stdout(&["capacity", "--channel", path.to_str().unwrap()]));
    let builtin = rows(&stdout(&["capacity", "--channel", "z", "--eps", "0.1"]));
    let ba = |rs: &[Vec<String>]| rs.iter().find(|r| r[0] == "blahut_arimoto").map(|r| num(&r[1])).unwrap();
    assert!((ba(&from_file) - ba(&builtin)).abs() < 1e-9);
}

#[test]
fn writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cap.csv");
    let out = stdout(&["capacity", "--channel", "bsc", "--eps", "0.01", "--out", path.to_str().unwrap()]);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("closed_form"));
}

#[test]
fn exit_codes() {
    assert_eq!(tiltbound(&["figure", "9"]).status.code(), Some(2));
    assert_eq!(tiltbound(&["bound", "--channel", "bsc", "--eps", "1.5"]).status.code(), Some(2));
    assert_eq!(
        tiltbound(&["bound", "--channel", "bsc", "--eps", "0.1", "--alpha-grid", "1:0:0.1"]).status.code(),
        Some(2)
    );
    let capped = tiltbound(&["code-check", "--channel", "bsc", "--eps", "0.1", "--code", "repetition:30"]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).starts_with("error:"));
}

#[test]
fn malformed_channel_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.dmc");
    std::fs::write(&path, "2 2\n0.5 0.5\n0.5 x\n").unwrap();
    let out = tiltbound(&["capacity", "--channel", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn monte_carlo_fallback_with_seed() {
    let args = [
        "code-check",
        "--channel",
        "bsc",
        "--eps",
        "0.1",
        "--code",
        "repetition:30",
        "--seed",
        "5",
        "--mc-samples",
        "2000",
    ];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert!(a.contains("monte"));
}
