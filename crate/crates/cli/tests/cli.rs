use std::io::Write;
use std::process::{Command, Output};

fn wirescat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wirescat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV document, without comment lines and header.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn comment(text: &str, key: &str) -> Option<String> {
    let prefix = format!("# {key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix).map(str::to_string))
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn smatrix_gamma_zero_is_minus_one() {
    let o = wirescat(&["smatrix", "--nu", "1", "--gamma", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "re,im,abs"));
    let row = &csv_rows(&text)[0];
    assert_eq!(row[0].parse::<f64>().unwrap(), -1.0);
    assert!(row[1].parse::<f64>().unwrap().abs() < 1e-15);
}

#[test]
fn smatrix_average_json() {
    let o = wirescat(&["smatrix", "--nu", "1", "--average", "--output", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    let re = v["rows"][0]["re"].as_f64().unwrap();
    assert!((re - (-std::f64::consts::PI).exp()).abs() < 1e-15);
    assert_eq!(v["metadata"]["nu"].as_f64(), Some(1.0));
    assert_eq!(v["metadata"]["mode"], "average");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["smatrix", "--nu", "1", "--bogus"],
        vec!["smatrix", "--nu", "-1", "--gamma", "0"],
        vec!["smatrix", "--nu", "1"],
        vec!["xsection", "--method", "sum"],
        vec!["xsection", "--method", "closed", "--mu-sq", "4"],
        vec![
            "classical-mc",
            "--lambda",
            "1",
            "--alpha",
            "1",
            "--mass",
            "1",
            "--velocity",
            "1",
            "--samples",
            "0",
        ],
        vec![
            "sweep",
            "--lambda",
            "1",
            "--alpha",
            "1",
            "--mass",
            "1",
            "--velocity",
            "1",
            "--parameter",
            "mu",
            "--grid",
            "2,1",
            "--outputs",
            "sum",
        ],
    ] {
        let o = wirescat(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn spectrum_ladder() {
    let o = wirescat(&[
        "spectrum",
        "--nu",
        "1",
        "--theta-prime",
        "0",
        "--n-min",
        "0",
        "--n-max",
        "3",
    ]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    let q = (-std::f64::consts::PI).exp();
    for (n, row) in rows.iter().enumerate() {
        let kappa: f64 = row[1].parse().unwrap();
        assert!((kappa / q.powi(n as i32) - 1.0).abs() < 1e-13);
        if n > 0 {
            let ratio: f64 = row[3].parse().unwrap();
            assert!((ratio / q - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn spectrum_overflow_exits_1() {
    let o = wirescat(&[
        "spectrum",
        "--nu",
        "0.01",
        "--theta-prime",
        "0",
        "--n-min",
        "0",
        "--n-max",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("range"));
}

#[test]
fn xsection_sum_single_channel() {
    let o = wirescat(&[
        "xsection", "--method", "sum", "--mu-sq", "0.25", "--output", "json",
    ]);
    let v = json(&o);
    let sk = v["rows"][0]["sigma_k"].as_f64().unwrap();
    assert!((sk - (1.0 - (-std::f64::consts::PI).exp())).abs() < 1e-15);
    assert_eq!(v["rows"][0]["channels_used"], 1);
    assert_eq!(v["rows"][0]["method"], "sum");
}

#[test]
fn xsection_closed_equals_finite_at_zero_radius() {
    let base = [
        "--lambda",
        "0.7",
        "--alpha",
        "1.3",
        "--mass",
        "2",
        "--velocity",
        "0.4",
    ];
    let mut a = vec!["xsection", "--method", "closed"];
    a.extend(base);
    let mut b = vec!["xsection", "--method", "finite", "--wire-radius", "0"];
    b.extend(base);
    let ra = csv_rows(&stdout(&wirescat(&a)));
    let rb = csv_rows(&stdout(&wirescat(&b)));
    assert_eq!(ra[0][3], rb[0][3]);
}

#[test]
fn xsection_bare_wire_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        f,
        "# bare wire\nlambda = 0\nalpha = 1\nmass = 1\nvelocity = 2\nwire_radius = 0.25"
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let o = wirescat(&[
        "xsection",
        "--method",
        "finite",
        "--scenario",
        path,
        "--output",
        "json",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["rows"][0]["sigma"].as_f64(), Some(0.5));
    assert_eq!(v["metadata"]["scenario_file"], path);
    assert_eq!(v["metadata"]["wire_radius"].as_f64(), Some(0.25));
}

#[test]
fn unknown_scenario_key_exits_2() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        f,
        "lambda = 1\nalpha = 1\nmass = 1\nvelocity = 1\ncharge = 3"
    )
    .unwrap();
    let o = wirescat(&[
        "xsection",
        "--method",
        "sum",
        "--scenario",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));
}

#[test]
fn limit_study_rows_and_trailer() {
    let o = wirescat(&["limit-study", "--mu", "10,100,1000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 3);
    let ratios: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    assert!(ratios[0] < ratios[1] && ratios[1] < ratios[2] && ratios[2] < 1.0);
    for r in &rows {
        let mu: f64 = r[0].parse().unwrap();
        let corr: f64 = r[4].parse().unwrap();
        assert!(corr * mu.sqrt() < 0.01);
    }
    let exponent: f64 = comment(&text, "decay_exponent").unwrap().parse().unwrap();
    assert!(exponent > 0.5);
}

#[test]
fn classical_mc_is_byte_identical_and_accurate() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |out: &std::path::Path| {
        vec![
            "classical-mc".to_string(),
            "--lambda".into(),
            "0.5".into(),
            "--alpha".into(),
            "1".into(),
            "--mass".into(),
            "1".into(),
            "--velocity".into(),
            "1".into(),
            "--wire-radius".into(),
            "0.2".into(),
            "--samples".into(),
            "500".into(),
            "--seed".into(),
            "11".into(),
            "--out".into(),
            out.to_str().unwrap().to_string(),
        ]
    };
    let run = |out: &std::path::Path| {
        let o = Command::new(env!("CARGO_BIN_EXE_wirescat"))
            .args(args(out))
            .output()
            .unwrap();
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    };
    run(&a);
    run(&b);
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(csv_rows(&text).len(), 500);
    let err: f64 = comment(&text, "relative_error").unwrap().parse().unwrap();
    assert!(err < 0.01);
    assert_eq!(comment(&text, "seed").as_deref(), Some("11"));
}

#[test]
fn sweep_keeps_going_past_errors() {
    let o = wirescat(&[
        "sweep",
        "--lambda",
        "1",
        "--alpha",
        "1",
        "--mass",
        "1",
        "--velocity",
        "1",
        "--parameter",
        "lambda",
        "--grid",
        "0,1,2",
        "--outputs",
        "sum,closed_form",
        "--output",
        "json",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows[0]["error"].is_string());
    assert!(rows[0]["sigma_k"].is_null());
    assert!(rows[2]["error"].is_null());
    assert_eq!(rows[3]["sigma_k"].as_f64(), Some(4.0));
    assert_eq!(v["metadata"]["grid"], "0;1;2");
}

#[test]
fn timestamp_is_opt_in() {
    let plain = stdout(&wirescat(&["smatrix", "--nu", "2", "--gamma", "1"]));
    assert!(comment(&plain, "timestamp").is_none());
    let stamped = stdout(&wirescat(&[
        "smatrix",
        "--nu",
        "2",
        "--gamma",
        "1",
        "--timestamp",
    ]));
    assert!(comment(&stamped, "timestamp").is_some());
}
