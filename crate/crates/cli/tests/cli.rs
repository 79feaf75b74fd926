use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn lowdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowdisc"))
        .args(args)
        .env_remove("LOWDISC_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lowdisc-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn fib_rep_examples() {
    let out = lowdisc(&["fib-rep", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("zeck: 101, positive: (2,1)\n"));

    let text = String::from_utf8(lowdisc(&["fib-rep", "1"]).stdout).unwrap();
    assert!(text.contains("positive: (1)"));

    let text = String::from_utf8(lowdisc(&["fib-rep", "1000000"]).stdout).unwrap();
    let len_line = text.lines().find(|l| l.starts_with("length:")).unwrap();
    let r: usize = len_line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(r <= 29);
}

#[test]
fn exit_codes() {
    assert_eq!(lowdisc(&["fib-rep", "0"]).status.code(), Some(2));
    assert_eq!(lowdisc(&["fib-rep", "-3"]).status.code(), Some(2));
    assert_eq!(
        lowdisc(&["construct", "--precision", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lowdisc(&["construct", "--stages", "10", "--nmax", "11"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(lowdisc(&["construct", "--c", "1e3"]).status.code(), Some(2));
    assert_eq!(
        lowdisc(&["construct", "--sequence", "k -"]).status.code(),
        Some(2)
    );

    let out = scratch("inadmissible");
    let res = lowdisc(&[
        "construct",
        "--sequence",
        "2^k",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8(res.stderr)
        .unwrap()
        .contains("ratios decay like 1/k"));

    // c far below the minimum leaves no admissible z
    let res = lowdisc(&[
        "construct",
        "--stages",
        "20",
        "--c",
        "1/100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(4));
    assert!(String::from_utf8(res.stderr).unwrap().contains("stage"));
}

#[test]
fn construct_is_byte_identical_on_rerun() {
    let a = scratch("construct-a");
    let b = scratch("construct-b");
    for dir in [&a, &b] {
        let st = lowdisc(&[
            "construct",
            "--stages",
            "60",
            "--precision",
            "30",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(
            st.status.success(),
            "{}",
            String::from_utf8_lossy(&st.stderr)
        );
    }
    for file in ["alpha.json", "alpha.txt"] {
        assert_eq!(
            fs::read(a.join(file)).unwrap(),
            fs::read(b.join(file)).unwrap()
        );
    }
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(a.join("alpha.json")).unwrap()).unwrap();
    assert_eq!(json["stage"], 60);
    assert_eq!(json["z"].as_array().unwrap().len(), 60);
    assert_eq!(json["lo"].as_str().unwrap().len(), "0.".len() + 30);
}

#[test]
fn experiment_csv_shape() {
    let dir = scratch("experiment");
    let st = lowdisc(&[
        "experiment",
        "--stages",
        "40",
        "--nmax",
        "35",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let stdout = String::from_utf8(st.stdout).unwrap();
    assert!(stdout
        .lines()
        .any(|l| l.starts_with("summary: ") && l.contains("max_ratio=")));

    let mut rdr = csv::Reader::from_path(dir.join("series.csv")).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["N", "D_N", "D_N_decimal", "ln_N", "ratio"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 35);
    assert_eq!(&rows[0][4], "inf");
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0].parse::<usize>().unwrap(), i + 1);
        assert!(row[1].contains('/'));
        assert_eq!(row[2].split('.').nth(1).unwrap().len(), 12);
    }

    let blocks = csv::Reader::from_path(dir.join("blocks.csv"))
        .unwrap()
        .records()
        .count();
    assert!(blocks > 0);
}

#[test]
fn experiment_honours_env_out_dir() {
    let dir = scratch("env");
    let st = Command::new(env!("CARGO_BIN_EXE_lowdisc"))
        .args(["experiment", "--stages", "12", "--format", "json"])
        .env("LOWDISC_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(st.status.success());
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.join("experiment.json")).unwrap()).unwrap();
    assert_eq!(json["series"].as_array().unwrap().len(), 12);
}

#[test]
fn verify_detects_injected_fault() {
    let out = lowdisc(&["verify", "--inject-fault", "777"]);
    assert_eq!(out.status.code(), Some(5));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[FAIL] rewrite-safety: N=777"));
}
