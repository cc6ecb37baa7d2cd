use std::fs;
use std::process::Command;

use abelian_prym::cli::{run, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK};
use abelian_prym::table::{read_csv, read_json, Flag};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["abelian-prym"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn analyze_reports_genera_and_conditions() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "d.txt", "# sextic\nN=6; A=1,3,4,4; H=2\n");
    let (code, out, _) = cli(&["analyze", &f]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("g~ = 3, g = 0, p = 3"), "{out}");
    assert!(out.contains("5 ramification points over 5 branch points"));
    assert!(out.contains("(B2)        established with K = {(0)}"));
}

#[test]
fn analyze_json_is_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "d.txt", "N=6; A=1,1,1,1,2; H=2\n\nN=2; A=1,1,1,1; H=1\n");
    let (code, out, _) = cli(&["analyze", "--json", &f]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["g_tilde"], 7);
    assert_eq!(v[1]["report"]["b1_self_paired"], true);
}

#[test]
fn analyze_input_errors_exit_2_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("N=6; A=1,3,4,4; H=2\n\nN=6; A=1,3,4,3; H=2\n", "line 3"),
        ("N=6; A=1,0,5; H=0\n", "zero"),
        ("N=6\nA=1,3,4,4\nB=2\n", "line 3"),
        ("N=4; A=2,2,2,2; H=1\n", "does not lie"),
    ];
    for (text, needle) in cases {
        let f = write(&dir, "bad.txt", text);
        let (code, _, err) = cli(&["analyze", &f]);
        assert_eq!(code, EXIT_INPUT, "{text}");
        assert!(err.to_lowercase().contains(needle), "{text}: {err}");
    }
    let (code, _, _) = cli(&["analyze", "/definitely/not/here"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = cli(&["frobnicate"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn verify_passes_and_detects_perturbation() {
    let (code, out, _) = cli(&["verify"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("5/5 worked examples pass"));
    let (code, out, _) = cli(&["verify", "--json", "--perturb", "3"]);
    assert_eq!(code, EXIT_INTERNAL);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], 4);
    assert_eq!(v["examples"][2]["passed"], false);
}

#[test]
fn search_csv_and_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(&dir, "s.spec", "N=2..6\ns=4,5\n");
    let csv = dir.path().join("rows.csv");
    let json = dir.path().join("rows.json");
    let (code, out, err) = cli(&[
        "search",
        &spec,
        "--out",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.is_empty());
    assert!(err.contains("Y*"));
    let rows = read_csv(fs::File::open(&csv).unwrap()).unwrap();
    let json_rows = read_json(&fs::read_to_string(&json).unwrap()).unwrap();
    assert!(!rows.is_empty());
    assert_eq!(rows.len(), json_rows.len());
    for (a, b) in rows.iter().zip(&json_rows) {
        assert_eq!(a, &b.row);
    }
    // the single Z/2 datum uses the self-paired reading of (B1)
    assert_eq!(rows[0].group, "C2");
    assert_eq!(rows[0].b1, Flag::YesSelfPaired);

    let (_, stdout_csv, _) = cli(&["search", &spec, "--seed", "3"]);
    assert_eq!(stdout_csv, fs::read_to_string(&csv).unwrap());
}

#[test]
fn binary_output_matches_library_and_is_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(&dir, "s.spec", "N=2..9\ns=4,5\n");
    let bin = env!("CARGO_BIN_EXE_abelian-prym");
    let one = Command::new(bin).args(["search", &spec, "--threads", "1"]).output().unwrap();
    let four = Command::new(bin).args(["search", &spec, "--threads", "4"]).output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let (_, lib, _) = cli(&["search", &spec]);
    assert_eq!(lib.as_bytes(), one.stdout.as_slice());
}

#[test]
fn empty_search_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(&dir, "s.spec", "N=5\ns=4\nH_order=2\n");
    let (code, out, _) = cli(&["table", &spec]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "r,g_tilde,g,p,group,subgroup,ram,br,quotient,b1,b2,b,provenance\n");
}

#[test]
fn table_import_reports_matches() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(&dir, "s.spec", "group=C6,C2xC2\ns=4,5\n");
    let import = write(
        &dir,
        "reference.csv",
        "r,g_tilde,g,p,group,subgroup,ram,br,quotient,b1,b2,b\n\
         5,7,1,6,C6,C3,6,6,C2,Y,Y,Y\n\
         4,2,0,2,D4,C4,6,4,C2,-,Y,Y\n\
         4,9,9,9,C6,C3,1,1,C2,Y,Y,Y\n\
         not,a,row\n",
    );
    let (code, out, err) = cli(&["table", &spec, "--import", &import]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("matched             1"), "{out}");
    assert!(out.contains("outside search      1"), "{out}");
    assert!(out.contains("skipped             2"), "{out}");

    let bad_spec = write(&dir, "bad.spec", "N=6\ns=3\n");
    let (code, _, err) = cli(&["table", &bad_spec]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 2"), "{err}");
}
