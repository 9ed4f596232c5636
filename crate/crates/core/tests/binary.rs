use std::process::{Command, Output};

fn gme(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gme"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("GME_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

const SWEEP: [&str; 15] = [
    "sweep",
    "--n",
    "2",
    "--q",
    "3",
    "--mu-grid",
    "0.05:0.1:0.05",
    "--samples",
    "4000",
    "--center-draws",
    "20",
    "--seed",
    "3",
    "--format",
    "csv",
];

#[test]
fn sweep_is_byte_identical_across_thread_counts() {
    let a = gme(&SWEEP, Some("1"));
    let b = gme(&SWEEP, Some("4"));
    let c = gme(&SWEEP, None);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        gme::cli::SWEEP_HEADER.trim_end()
    );
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn json_without_timing_is_reproducible() {
    let args = [
        "mc",
        "--n",
        "2",
        "--q",
        "2",
        "--mu",
        "0.3",
        "--samples",
        "2000",
        "--center-draws",
        "5",
        "--no-timing",
    ];
    let a = gme(&args, Some("2"));
    let b = gme(&args, Some("3"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["spec"]["seed"], 0);
    assert!(doc["runtime_ms"].is_null());
}

#[test]
fn exit_codes() {
    assert_eq!(gme(&["approx", "--n", "3"], None).status.code(), Some(2));
    assert_eq!(
        gme(&["approx", "--n", "3", "--q", "3", "--mu", "-1"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gme(&["approx", "--n", "3", "--q", "3", "--mu", "0.1"], None)
            .status
            .code(),
        Some(0)
    );
    let outside = gme(
        &[
            "approx", "--n", "2", "--q", "3", "--mu", "0.2", "--method", "det",
        ],
        None,
    );
    assert_eq!(outside.status.code(), Some(1));
    assert!(!outside.stderr.is_empty());
    assert_eq!(
        gme(&["selftest", "--q-max", "4"], None).status.code(),
        Some(0)
    );
}

#[test]
fn report_goes_to_out_file() {
    let path = std::env::temp_dir().join(format!("gme-report-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let out = gme(
        &[
            "approx", "--n", "2", "--q", "2", "--mu", "0.1", "--format", "csv", "--out", p,
        ],
        None,
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("method,order,value,stderr"));
}
