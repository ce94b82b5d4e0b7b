use std::io::Write;
use std::process::{Command, Output};

fn prat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prat"))
        .args(args)
        .env("PRAT_THREADS", "2")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_reports_residue_and_verdict() {
    let o = prat(&[
        "check",
        "--poly",
        "3;0;-2;0;1",
        "--unit",
        "-2;-1;1;1",
        "--h",
        "1",
        "--prime",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("ε^624 ≡ 1 + 5α + 15α³ (mod 25)"), "{s}");
    assert!(s.contains("verdict: 5-rational"), "{s}");
}

#[test]
fn check_with_auxiliary_ideal() {
    let o = prat(&[
        "check",
        "--poly",
        "27;-4;0;1",
        "--unit",
        "-3280;-3462;-729",
        "--h",
        "3",
        "--prime",
        "3",
        "--aux-q",
        "2",
        "--aux-gen-poly",
        "1;1",
        "--aux-power-gen",
        "-604;265;-77",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let s = stdout(&o);
    assert!(s.contains("verdict: 3-rational"), "{s}");
}

#[test]
fn input_errors_exit_one() {
    let o = prat(&["check", "--poly", "1;2", "--unit", "1", "--prime", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    assert_eq!(prat(&["table"]).status.code(), Some(1));
    assert_eq!(prat(&["nonsense"]).status.code(), Some(1));
    assert_eq!(prat(&["--help"]).status.code(), Some(0));
}

#[test]
fn table_from_file_and_bundled() {
    let o = prat(&[
        "table",
        "--bundled",
        "table2",
        "--pmax",
        "40",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().any(|l| l == "x^4+1,,13;31,13;31,,"), "{s}");
    assert!(s.lines().any(|l| l == "x^4-x^3+x^2-x+1,,,,5,"), "{s}");

    let mut file = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
    writeln!(file, "label,poly,h,unit").unwrap();
    writeln!(file, "x^4-2x^2+3,3;0;-2;0;1,1,-2;-1;1;1").unwrap();
    let o = prat(&[
        "table",
        "--input",
        file.path().to_str().unwrap(),
        "--pmax",
        "30",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 further field(s)"), "{}", stdout(&o));
}

#[test]
fn scan_and_families() {
    let o = prat(&["scan", "--bundled", "examples", "--xmax", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("x^4-2x^2+3"));

    let o = prat(&["pure-cubic", "--pmin", "5", "--pmax", "40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("0 with the unit congruence failing"),
        "{}",
        stdout(&o)
    );

    let o = prat(&["ggc", "--xmax", "100", "--T", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("17\t")));

    let o = prat(&["recurrence", "--poly", "-1;-1;-1;1", "--prime", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("F(n+3) = F(n+2) + F(n+1) + F(n)"), "{s}");
    assert!(s.contains("consistency: ok"), "{s}");
}

#[test]
fn selftest_passes() {
    let o = prat(&["selftest", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
