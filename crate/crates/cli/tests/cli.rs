use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ucover::catalog::bundled;
use ucover::radius::{defect, RadiusSequence};
use ucover::ShiftUcycle;

fn ucover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ucover"))
        .args(args)
        .env_remove("UCOVER_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_ucycle_for_seven() {
    let o = ucover(&["build", "--n", "7", "--emit", "ucycle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# seed="));
    let u: ShiftUcycle = text.parse().unwrap();
    assert_eq!(u.seq().len(), 14);
}

#[test]
fn built_artifacts_reverify() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["3", "8", "13", "22"] {
        let cov = dir.path().join(format!("c{n}.fix"));
        let uc = dir.path().join(format!("u{n}.txt"));
        let rad = dir.path().join(format!("r{n}.seq"));
        for (emit, out) in [("covering", &cov), ("ucycle", &uc), ("radius", &rad)] {
            let o = ucover(&["build", "--n", n, "--emit", emit, "--out", path_str(out)]);
            assert_eq!(o.status.code(), Some(0), "{n} {emit}");
        }
        let checks: [&[&str]; 4] = [
            &["verify", "--kind", "covering", "--file", path_str(&cov)],
            &[
                "verify",
                "--kind",
                "ucycle",
                "--file",
                path_str(&uc),
                "--design",
                path_str(&cov),
            ],
            &["verify", "--kind", "ucycle", "--file", path_str(&uc)],
            &["verify", "--kind", "radius", "--file", path_str(&rad)],
        ];
        for args in checks {
            let o = ucover(args);
            assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
            assert!(stdout(&o).contains("valid: true"));
        }
    }
}

#[test]
fn printed_sequence_verifies() {
    let o = ucover(&[
        "verify",
        "--kind",
        "radius",
        "--file",
        path_str(&data("t1_n8.seq")),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn truncated_sequence_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.seq");
    fs::write(&path, "radius n=8 k=2: 3 6 2 7 8 5 6 4 1 8 7 3 4 2 5 1\n").unwrap();
    let o = ucover(&["verify", "--kind", "radius", "--file", path_str(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("uncovered-pair"));
}

#[test]
fn design_kind_mismatch_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sts7.fix");
    fs::write(&path, bundled("sts-7", false).unwrap().to_text()).unwrap();
    assert_eq!(
        ucover(&["verify", "--kind", "pbd", "--file", path_str(&path)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        ucover(&["verify", "--kind", "gdd", "--file", path_str(&path)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn search_below_lower_bound_fails() {
    let o = ucover(&[
        "search",
        "--n",
        "8",
        "--len",
        "16",
        "--max-iterations",
        "50000",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let best: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("no sequence found: best defect "))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(best >= 1);
}

#[test]
fn search_finds_and_is_deterministic() {
    let args = ["search", "--n", "8", "--len", "17", "--seed", "5"];
    let a = ucover(&args);
    let b = ucover(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let s: RadiusSequence = stdout(&a).parse().unwrap();
    assert_eq!((s.len(), defect(&s)), (17, 0));
    assert!(stdout(&a).contains("# seed=5"));
}

#[test]
fn identical_arguments_give_identical_output() {
    for args in [
        &["build", "--n", "31", "--seed", "77"][..],
        &["build", "--n", "26", "--emit", "covering"][..],
        &["table", "--from", "3", "--to", "30", "--run-pipeline"][..],
    ] {
        let a = ucover(args);
        let b = ucover(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn invalid_arguments_exit_two() {
    let cases: [&[&str]; 6] = [
        &["build"],
        &["build", "--n", "2"],
        &["verify", "--kind", "nope", "--file", "x"],
        &[
            "verify",
            "--kind",
            "radius",
            "--file",
            "/nonexistent/file.seq",
        ],
        &["oracle", "f2", "--n", "7"],
        &["table", "--from", "9", "--to", "5"],
    ];
    for args in cases {
        assert_eq!(ucover(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn oracle_values() {
    let o = ucover(&["oracle", "f2", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "f2(4) = 5\n");
    let o = ucover(&["oracle", "f2", "--n", "5", "--max-len", "6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn table_csv_rows() {
    let o = ucover(&["table", "--from", "9", "--to", "44", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 36);
    let covering = |n: usize| rows[n - 9][2].to_string();
    assert_eq!(covering(10), "35");
    assert_eq!(covering(21), "141");
    assert_eq!(covering(44), "647");
}

#[test]
fn catalog_commands() {
    let cache = tempfile::tempdir().unwrap();
    let c = path_str(cache.path());
    let o = ucover(&["catalog", "list", "--cache", c]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 31);
    assert_eq!(
        ucover(&["catalog", "check", "--cache", c]).status.code(),
        Some(0)
    );
    assert_eq!(
        ucover(&["catalog", "check", "--raw", "--cache", c])
            .status
            .code(),
        Some(1)
    );

    let out = tempfile::tempdir().unwrap();
    let o = ucover(&["catalog", "repair", "--out-dir", path_str(out.path())]);
    assert_eq!(o.status.code(), Some(0));
    let written: Vec<_> = fs::read_dir(out.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(written.len(), 5);
    for path in written {
        let key = path.file_stem().unwrap().to_str().unwrap();
        assert_eq!(
            fs::read_to_string(&path).unwrap(),
            bundled(key, false).unwrap().to_text()
        );
    }
}
