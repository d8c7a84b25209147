use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sgfloquet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgfloquet"))
        .args(args)
        .env_remove("FLOQUET_SG_RTOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn classify_reports_verdict_and_config() {
    let out = sgfloquet(&["classify", "--c", "0.5", "--E", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["class"], "subluminal-rotational");
    assert_eq!(doc["verdict"], "stable");
    assert_eq!(doc["config"]["command"], "classify");
    assert_eq!(doc["config"]["ode_rtol"], 1e-10);
    assert_eq!(doc["config"]["E"], -1.0);

    let doc = json(&sgfloquet(&["classify", "--c", "2", "--E", "3"]));
    assert_eq!(doc["verdict"], "unstable");
    assert!(doc["certificate"]["lambda_star"][0].as_f64().unwrap() > 0.0);
}

#[test]
fn domain_errors_exit_with_two() {
    for (args, message) in [
        (["--c", "1", "--E", "1"], "luminal speed excluded"),
        (["--c", "0.5", "--E", "2"], "separatrix"),
        (["--c", "2", "--E", "-1"], "no real wave"),
    ] {
        let mut full = vec!["classify"];
        full.extend(args);
        let out = sgfloquet(&full);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let doc = json(&out);
        assert_eq!(doc["error"], message);
        assert_eq!(doc["kind"], "domain");
    }
}

#[test]
fn certify_rejects_the_stable_class() {
    let out = sgfloquet(&["certify", "--c", "0.5", "--E", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["kind"], "search");
}

#[test]
fn certify_subluminal_librational_includes_real_eigenvalue() {
    let out = sgfloquet(&["certify", "--c", "0.5", "--E", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let real = doc["real_periodic_eigenvalue"]["lambda_star"]
        .as_f64()
        .unwrap();
    assert!((real - 0.7015658413618687).abs() < 1e-8);
}

#[test]
fn flag_beats_environment_and_environment_beats_default() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sgfloquet"));
        cmd.args(["imag-spectrum", "--c", "2", "--E", "3", "--n", "50"])
            .args(extra);
        match env {
            Some(v) => cmd.env("FLOQUET_SG_RTOL", v),
            None => cmd.env_remove("FLOQUET_SG_RTOL"),
        };
        cmd.output().unwrap()
    };
    assert_eq!(json(&run(None, &[]))["config"]["ode_rtol"], 1e-10);
    assert_eq!(json(&run(Some("1e-9"), &[]))["config"]["ode_rtol"], 1e-9);
    assert_eq!(
        json(&run(Some("1e-9"), &["--rtol", "1e-11"]))["config"]["ode_rtol"],
        1e-11
    );
    let bad = run(Some("tight"), &[]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(json(&bad)["kind"], "usage");
}

#[test]
fn rtol_outside_supported_range_is_a_domain_error() {
    let out = sgfloquet(&["bands", "--c", "2", "--E", "3", "--rtol", "1e-3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["kind"], "domain");
}

#[test]
fn unwritable_output_exits_with_three() {
    let out = sgfloquet(&[
        "classify",
        "--c",
        "2",
        "--E",
        "3",
        "--out",
        "/nonexistent-dir/x.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["kind"], "io");
}

#[test]
fn unsupported_format_is_rejected() {
    let out = sgfloquet(&["bands", "--c", "2", "--E", "3", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_csv_writes_grid_and_polylines() {
    let path = scratch("spectrum.csv");
    let p = path.to_str().unwrap();
    let out = sgfloquet(&[
        "spectrum", "--c", "0.5", "--E", "1", "--nx", "32", "--ny", "32", "--out", p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let grid = std::fs::read_to_string(&path).unwrap();
    let mut lines = grid.lines();
    assert_eq!(lines.next(), Some("re,im,gp"));
    assert_eq!(lines.count(), 32 * 32);
    let polylines = std::fs::read_to_string(scratch("spectrum_polylines.csv")).unwrap();
    assert!(polylines.starts_with("polyline_id,re,im\n"));
    assert!(polylines.lines().count() > 10);
    for row in polylines.lines().skip(1) {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 3);
    }
}

#[test]
fn spectrum_json_and_svg() {
    let args = [
        "spectrum", "--c", "2", "--E", "3", "--nx", "24", "--ny", "24",
    ];
    let out = sgfloquet(&[&args[..], &["--format", "json"]].concat());
    let doc = json(&out);
    assert_eq!(doc["grid"]["nx"], 24);
    assert_eq!(doc["gp_samples"].as_array().unwrap().len(), 24);
    assert!(!doc["polylines"].as_array().unwrap().is_empty());
    assert!(doc["imaginary_axis"]["beta_intervals"].is_array());

    let out = sgfloquet(
        &[
            &args[..],
            &["--format", "svg", "--box", "-0.5", "0.5", "-2", "2"],
        ]
        .concat(),
    );
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("<polyline"));
    assert!(svg.contains("Re λ"));
}

#[test]
fn hill_table_has_requested_rows() {
    let out = sgfloquet(&[
        "hill", "--c", "2", "--E", "3", "--mu-min", "-1", "--mu-max", "0.5", "--n", "7",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "mu,delta_q");
    assert_eq!(rows.len(), 8);
    let first: Vec<f64> = rows[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(first[0], -1.0);
}

#[test]
fn bands_include_lame_deltas() {
    let doc = json(&sgfloquet(&[
        "bands",
        "--c",
        "1.7320508075688772",
        "--E",
        "1",
    ]));
    let deltas = doc["lame"]["deltas"].as_array().unwrap();
    assert_eq!(deltas.len(), 3);
    assert!(deltas.iter().all(|d| d.as_f64().unwrap().abs() < 1e-7));
    assert!((doc["bands"]["alpha_star"].as_f64().unwrap() - 1.0).abs() < 1e-7);
}

#[test]
fn selfcheck_passes_for_each_class() {
    for (c, e) in [
        ("2", "3"),
        ("1.7320508075688772", "1"),
        ("0.5", "-1"),
        ("0.5", "1"),
    ] {
        let out = sgfloquet(&["selfcheck", "--c", c, "--E", e]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let doc = json(&out);
        assert_eq!(doc["pass"], true);
        assert!(String::from_utf8(out.stderr)
            .unwrap()
            .lines()
            .all(|l| l.starts_with("PASS")));
    }
}

#[test]
fn hill_discriminant_crosses_two_downward_at_zero() {
    let out = sgfloquet(&[
        "hill",
        "--c",
        "1.7320508",
        "--E",
        "1",
        "--mu-min",
        "-1",
        "--mu-max",
        "0.5",
        "--n",
        "300",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<(f64, f64)> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 300);
    let crossing = rows
        .windows(2)
        .find(|w| w[0].1 > 2.0 && w[1].1 <= 2.0)
        .expect("downward crossing of +2");
    assert!(
        crossing[0].0 <= 1e-2 && crossing[1].0 >= -1e-2,
        "{crossing:?}"
    );
}
