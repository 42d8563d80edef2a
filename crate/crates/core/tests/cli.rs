use std::path::PathBuf;
use std::process::{Command, Output};

use dual_lorentz_motion::config::load_config;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dlmotion"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bundled_configs_load() {
    for name in ["nilpotent.json", "generic.json", "mu_zero.json"] {
        let c = load_config(config(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = dual_lorentz_motion::config::load_config_str(&c.to_config().to_json()).unwrap();
        assert_eq!(again.to_config(), c.to_config());
    }
}

#[test]
fn evaluate_rows_and_columns() {
    let cfg = config("nilpotent.json");
    let o = run(&["evaluate", "--config", cfg.to_str().unwrap(), "--samples", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "t,Yre1,Yre2,Yre3,Ydu1,Ydu2,Ydu3,status");
    assert_eq!(lines.len(), 4);
    // X = (1,0,0), h = 2 + t, C = (t,0,0): Y.re = (2 + 2t, 0, 0)
    let cells: Vec<f64> = lines[2].split(',').take(7).map(|c| c.parse().unwrap()).collect();
    assert_eq!(cells[0], 0.5);
    assert_eq!(cells[1], 3.0);
}

#[test]
fn serial_and_parallel_outputs_are_identical() {
    let cfg = config("generic.json");
    for cmd in ["evaluate", "velocities", "poles", "accel", "centers"] {
        for format in ["csv", "json"] {
            let base = ["--config", cfg.to_str().unwrap(), "--samples", "64", "--format", format, "--point", "1"];
            let a = run(&[&[cmd][..], &base[..]].concat());
            let b = run(&[&[cmd][..], &base[..], &["--serial"][..]].concat());
            assert_eq!(a.status.code(), Some(0), "{cmd}");
            assert_eq!(a.stdout, b.stdout, "{cmd} {format}");
        }
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("poles.csv");
    let cfg = config("generic.json");
    let o = run(&["poles", "--config", cfg.to_str().unwrap(), "--samples", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("t,Pre1,Pre2,Pre3,Pdu1,Pdu2,Pdu3,Qre1,Qre2,Qre3,Qdu1,Qdu2,Qdu3,detHpre,detHpdu,status\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn degenerate_config_exits_with_all_failed() {
    let cfg = config("mu_zero.json");
    let o = run(&["centers", "--config", cfg.to_str().unwrap(), "--samples", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert_eq!(text.lines().skip(1).filter(|l| l.ends_with(",MuZero,SINGULAR_HSECOND")).count(), 4);
    // the other commands are regular on the same motion
    let o = run(&["accel", "--config", cfg.to_str().unwrap(), "--samples", "4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"mode": "nilpotent", "axis": {"re": [1, 0, 0], "du": [0, 0, 0]},
            "h": [{"num": [[2, 0], [1, 0]]}], "translation": [[{"num": [[0, 0], [1, 0]]}], [], []]}"#,
    )
    .unwrap();
    let o = run(&["evaluate", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("axis.re"));

    std::fs::write(&bad, "{ not json").unwrap();
    let o = run(&["evaluate", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let o = run(&["evaluate", "--config", "/no/such/file.json"]);
    assert_eq!(o.status.code(), Some(2));

    let cfg = config("nilpotent.json");
    let o = run(&["evaluate", "--config", cfg.to_str().unwrap(), "--point", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["evaluate", "--config", cfg.to_str().unwrap(), "--t0", "1", "--t1", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_command() {
    let a = run(&["verify", "--seed", "7"]);
    let b = run(&["verify", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("9 of 9 groups passed"));

    let f = run(&["verify", "--tol", "1e-30"]);
    assert_eq!(f.status.code(), Some(1));
    assert!(stdout(&f).lines().any(|l| l.starts_with("FAIL") && l.contains("worst=")));

    let cfg = config("generic.json");
    let c = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
}
