//! Runs the `mdmkit` binary end to end.
//!
//! Golden outputs live in `tests/data/golden`; set `MDMKIT_BLESS=1` to
//! rewrite them after an intended output change.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn mdmkit(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mdmkit"));
    cmd.args(args);
    match workers {
        Some(w) => cmd.env("MDMKIT_WORKERS", w),
        None => cmd.env_remove("MDMKIT_WORKERS"),
    };
    cmd.output().expect("binary runs")
}

fn run_on(sub: &str, input: &str, extra: &[&str]) -> Output {
    let path = data(input);
    let mut args = vec![sub, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    mdmkit(&args, None)
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn golden(name: &str, out: &Output) {
    let path = data("golden").join(name);
    if std::env::var_os("MDMKIT_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        want == out.stdout,
        "{name} differs from golden:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn steiner_square_golden() {
    let out = run_on("steiner", "square.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["count"], 2);
    for opt in v["result"]["optima"].as_array().unwrap() {
        let l = opt["realization"]["length"].as_f64().unwrap();
        assert!((l - (1.0 + 3f64.sqrt())).abs() < 1e-9);
    }
    assert_eq!(v["seed"], 42);
    assert_eq!(v["config_echo"]["subcommand"], "steiner");
    golden("steiner_square.json", &out);
}

#[test]
fn bounds_golden() {
    let out = run_on("bounds", "square_polygon.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let p = v["result"]["perimeter_bound"].as_f64().unwrap();
    assert!((p - (8.0 - 0.2 * std::f64::consts::PI) / 2.0).abs() < 1e-12);
    golden("bounds_square.json", &out);
}

#[test]
fn solve_and_corner_golden() {
    let out = run_on("solve", "triangle_instance.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["result"]["length"].as_f64().unwrap() - (3f64.sqrt() - 0.15)).abs() < 1e-9);
    golden("solve_triangle.json", &out);

    let out = run_on("corner-example", "corner.json", &[]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    golden("corner_k6.json", &out);
}

#[test]
fn monte_carlo_output_is_worker_invariant() {
    let input = data("quarter_arc.json");
    let input = input.to_str().unwrap();
    let args = [
        "tube-check",
        "--input",
        input,
        "--samples",
        "50000",
        "--seed",
        "7",
    ];
    let one = mdmkit(&args, Some("1"));
    assert_eq!(
        one.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&one.stderr)
    );
    for w in ["2", "5"] {
        assert!(mdmkit(&args, Some(w)).stdout == one.stdout, "workers = {w}");
    }
    assert!(mdmkit(&args, None).stdout == one.stdout);
    let v = stdout_json(&one);
    assert_eq!(v["samples"], 50000);
    assert_eq!(v["seed"], 7);
    golden("tube_quarter_arc.json", &one);

    let avg = ["avg-distance", "--input", "", "--samples", "40000"];
    let path = data("avg_segment.json");
    let mut avg = avg.to_vec();
    avg[2] = path.to_str().unwrap();
    let a = mdmkit(&avg, Some("1"));
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert!(mdmkit(&avg, Some("3")).stdout == a.stdout);
}

#[test]
fn violations_exit_two() {
    let out = run_on("validate", "cycle.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["valid"], false);
    assert!(!v["result"]["messages"].as_array().unwrap().is_empty());
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    assert!(v["error"]["message"].is_string());
    v["error"]["kind"].as_str().unwrap().to_owned()
}

#[test]
fn errors_exit_one_with_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"points\": [[0, 0], [1]]").unwrap();
    let out = mdmkit(&["steiner", "--input", bad.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "schema");
    assert!(out.stdout.is_empty());

    let out = mdmkit(
        &[
            "steiner",
            "--input",
            dir.path().join("missing.json").to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "io");

    let out = mdmkit(&["no-such-command"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "usage");

    let out = run_on("bounds", "square.json", &[]);
    assert_eq!(out.status.code(), Some(1));

    let input = data("square.json");
    let out = mdmkit(
        &["steiner", "--input", input.to_str().unwrap()],
        Some("zero"),
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "environment");

    assert_eq!(mdmkit(&["--help"], None).status.code(), Some(0));
    assert_eq!(mdmkit(&["--version"], None).status.code(), Some(0));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let to_file = run_on(
        "solve",
        "triangle_instance.json",
        &["--output", out_path.to_str().unwrap()],
    );
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let to_stdout = run_on("solve", "triangle_instance.json", &[]);
    assert_eq!(std::fs::read(&out_path).unwrap(), to_stdout.stdout);
}

fn svg_groups(path: &Path) -> Vec<(String, usize)> {
    let text = std::fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed SVG");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert!(root.attribute("viewBox").is_some());
    root.children()
        .filter(|n| n.has_tag_name("g"))
        .map(|g| {
            (
                g.attribute("class").unwrap_or("").to_owned(),
                g.children().filter(|c| c.is_element()).count(),
            )
        })
        .collect()
}

#[test]
fn svg_has_one_group_per_entity_class() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("solve.svg");
    let out = run_on(
        "solve",
        "triangle_instance.json",
        &["--svg", svg.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let groups = svg_groups(&svg);
    for class in ["disks", "sigma", "m-points"] {
        let n = groups.iter().filter(|(c, _)| c == class).count();
        assert_eq!(n, 1, "{class} in {groups:?}");
    }
    let count = |class: &str| groups.iter().find(|(c, _)| c == class).unwrap().1;
    assert_eq!(count("disks"), 3);
    assert_eq!(count("m-points"), 3);

    let svg = dir.path().join("tube.svg");
    let out = run_on(
        "tube-check",
        "quarter_arc.json",
        &["--samples", "20000", "--svg", svg.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let classes: Vec<String> = svg_groups(&svg).into_iter().map(|(c, _)| c).collect();
    assert!(
        classes.contains(&"tube-boundary".to_owned()) && classes.contains(&"sigma".to_owned()),
        "{classes:?}"
    );
}

#[test]
fn stdin_input_and_radius_override() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_mdmkit"))
        .args(["solve", "--r", "0.02"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(&std::fs::read(data("triangle_instance.json")).unwrap())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["result"]["length"].as_f64().unwrap() - (3f64.sqrt() - 0.06)).abs() < 1e-9);
    assert_eq!(v["config_echo"]["r"], 0.02);
}

/// Every payload parses back into the same JSON value after a round trip
/// through the binary's own output.
#[test]
fn output_round_trips() {
    for (sub, input) in [
        ("steiner", "square.json"),
        ("solve", "triangle_instance.json"),
        ("bounds", "square_polygon.json"),
    ] {
        let out = run_on(sub, input, &[]);
        let v = stdout_json(&out);
        let again = serde_json::to_string_pretty(&v).unwrap();
        assert_eq!(
            again.trim_end(),
            String::from_utf8_lossy(&out.stdout).trim_end(),
            "{sub}"
        );
    }
}
