use std::process::{Command, Output};

use hurewicz::report::parse_json;

fn hurewicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurewicz"))
        .args(args)
        .env_remove("HUREWICZ_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn adem_relation_vanishes() {
    let o = hurewicz(&["adem", "--seq", "9,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn image_of_a_power() {
    let o = hurewicz(&["image", "--k", "2", "--seq", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(Q^2 g_1)^4 + Q^7 Q^4 g_1");
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["--format", "json", "verify", "--check", "generators", "--k", "0", "--max-degree", "36"];
    let one = hurewicz(&[&["--threads", "1"], &args[..]].concat());
    let four = hurewicz(&[&["--threads", "4"], &args[..]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_hurewicz"))
        .args(args)
        .env("HUREWICZ_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn exit_code_tracks_mismatches() {
    for (args, code) in [
        (&["verify", "--check", "generators", "--k", "2", "--max-degree", "30"][..], 0),
        (&["verify", "--check", "hopf", "--case", "nu", "--level", "3", "--max-degree", "20"][..], 1),
        (&["verify", "--check", "hopf", "--case", "nu", "--level", "0", "--max-degree", "20"][..], 0),
    ] {
        let o = hurewicz(&[&["--format", "json"], args].concat());
        let report = parse_json(&stdout(&o)).unwrap();
        let failing = report.summary().failures() > 0;
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert_eq!(failing, code == 1, "{args:?}");
    }
}

#[test]
fn csv_summary_matches_json() {
    let args = ["verify", "--check", "kernel", "--k", "1", "--max-degree", "30"];
    let json = parse_json(&stdout(&hurewicz(&[&["--format", "json"], &args[..]].concat()))).unwrap();
    let csv = stdout(&hurewicz(&[&["--format", "csv"], &args[..]].concat()));
    let s = json.summary();
    let expected = format!("# summary: total={} agree={} mismatch={} violations={}", s.total, s.agree, s.mismatch, s.violations);
    assert_eq!(csv.lines().last(), Some(expected.as_str()));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), json.records.len() + 1);
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        &["enumerate", "--model", "bogus", "--max-degree", "5"][..],
        &["verify", "--check", "nothing"][..],
        &["adem", "--seq", "3,0"][..],
        &["image", "--k", "7", "--seq", "4"][..],
        &["--format", "xml", "adem", "--seq", "4"][..],
        &["frobnicate"][..],
    ] {
        let o = hurewicz(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let o = hurewicz(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify"));
}

#[test]
fn cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("hurewicz-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nf.json");
    let p = path.to_str().unwrap();
    let cold = hurewicz(&["--cache", p, "adem", "--seq", "3,5,7"]);
    assert_eq!(cold.status.code(), Some(0));
    assert!(path.exists());
    let warm = hurewicz(&["--cache", p, "adem", "--seq", "3,5,7"]);
    assert_eq!(warm.stdout, cold.stdout);
    assert_eq!(stdout(&cold), stdout(&hurewicz(&["adem", "--seq", "3,5,7"])));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn poincare_and_basis_agree() {
    let series = stdout(&hurewicz(&["--format", "csv", "poincare", "--model", "sphere:2", "--max-degree", "8"]));
    for line in series.lines().skip(1) {
        let (d, n) = line.split_once(',').unwrap();
        let basis = hurewicz(&["--format", "csv", "basis", "--model", "sphere:2", "--degree", d]);
        let rows = stdout(&basis).lines().count() - 1;
        assert_eq!(rows, n.parse::<usize>().unwrap(), "degree {d}");
    }
}
