use std::path::Path;
use std::process::{Command, Output};

fn porous_mhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_porous-mhd"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_reports_isothermal_newtonian_value() {
    let out = porous_mhd(&[
        "solve", "--n", "1", "--gamma", "0", "--N", "0", "--lambda", "0", "--s", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let value = doc["minus_theta_prime_0"].as_f64().unwrap();
    assert!((value + 0.2153).abs() < 1e-3, "{value}");
    assert_eq!(doc["theta_prime_0"].as_f64().unwrap(), -value);
    for key in ["n", "gamma", "N", "lambda", "s"] {
        assert!(doc["params"].get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["params"]["s"], 0);
    assert_eq!(doc["diagnostics"]["method"], "shooting");
}

#[test]
fn solve_matches_dilatant_table_entry() {
    let out = porous_mhd(&[
        "solve", "--n", "2", "--gamma", "0.5", "--N", "10", "--lambda", "0", "--s", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value = json(&out)["minus_theta_prime_0"].as_f64().unwrap();
    assert!((value + 0.6839).abs() <= 0.01, "{value}");
}

#[test]
fn solve_on_fixed_domain() {
    let out = porous_mhd(&[
        "solve",
        "--n",
        "1",
        "--N",
        "10",
        "--eta-max",
        "15",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,gamma,N,lambda,s,theta_prime_0,minus_theta_prime_0,eta_max")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[7], "15");
    let value: f64 = row[6].parse().unwrap();
    assert!((value + 0.6949).abs() < 1e-4, "{value}");
}

#[test]
fn invalid_parameters_exit_with_three() {
    for args in [
        &["solve", "--n", "0"][..],
        &["solve", "--n", "1", "--gamma", "-1"],
        &["solve", "--n", "1", "--ode-tol", "0"],
        &["heatflux", "--geometry", "cone", "--n", "1"],
        &["heatflux", "--geometry", "plate", "--n", "1"],
        &[
            "heatflux",
            "--geometry",
            "sphere",
            "--n",
            "1",
            "--points",
            "1",
        ],
        &["table", "--preset", "table9"],
        &["frobnicate"],
    ] {
        let out = porous_mhd(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn solver_failure_exits_with_two() {
    let out = porous_mhd(&["solve", "--n", "1", "--shoot-tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(2));
    let message = String::from_utf8(out.stderr).unwrap();
    assert!(message.contains("failed"), "{message}");
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn table_presets_carry_reference_values() {
    let dir = tempfile::tempdir().unwrap();
    for (preset, n, lambda, big_n, reference) in [
        ("table1", "1", "0", "5", "-0.6114"),
        ("table2", "0.5", "1", "0", "0.4193"),
    ] {
        let path = dir.path().join(format!("{preset}.csv"));
        let out = porous_mhd(&[
            "table",
            "--preset",
            preset,
            "--s",
            "1",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let table = rows(&path);
        assert_eq!(
            table[0].join(","),
            "n,lambda,gamma,s,N,minus_theta_prime_0,ref_value,abs_error"
        );
        assert_eq!(table.len(), 25);
        let row = table[1..]
            .iter()
            .find(|r| r[0] == n && r[1] == lambda && r[4] == big_n)
            .unwrap();
        assert_eq!(row[6], reference);
        assert_eq!(row[3], "1");
        let computed: f64 = row[5].parse().unwrap();
        let error: f64 = row[7].parse().unwrap();
        assert!((error - (computed - reference.parse::<f64>().unwrap()).abs()).abs() < 1e-8);
    }
}

#[test]
fn heatflux_blocks_and_identity_at_quarter_turn() {
    let out = porous_mhd(&[
        "heatflux",
        "--geometry",
        "cylinder",
        "--n",
        "1",
        "--lambda",
        "0",
        "--gamma",
        "0",
        "--N",
        "0,2,5,10",
        "--points",
        "181",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("geometry,n,lambda,gamma,s,N,phi_rad,qstar")
    );
    let body: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(body.len(), 4 * 183);
    for (k, big_n) in ["0", "2", "5", "10"].iter().enumerate() {
        assert!(body[k * 183..(k + 1) * 183]
            .iter()
            .all(|r| r[5] == *big_n && r[0] == "cylinder"));
    }
    let middle = &body[91];
    let phi: f64 = middle[6].parse().unwrap();
    assert!((phi - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
    let q: f64 = middle[7].parse().unwrap();
    assert!((q + 0.2153).abs() <= 0.01, "{q}");
}

#[test]
fn non_isothermal_curves_vanish_at_both_stagnation_points() {
    let out = porous_mhd(&[
        "heatflux",
        "--geometry",
        "sphere",
        "--n",
        "0.5",
        "--lambda",
        "1",
        "--gamma",
        "0.5",
        "--N",
        "0,5",
        "--points",
        "31",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let body: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(body.len(), 2 * 33);
    for block in body.chunks(33) {
        assert_eq!(block[0][6], "0");
        assert_eq!(block[0][7], "0");
        assert_eq!(block[32][7], "0");
    }
}

#[test]
fn profile_writes_csv_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let out = porous_mhd(&[
        "profile",
        "--n",
        "0.5",
        "--N",
        "2",
        "--lambda",
        "1",
        "--s",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let table = rows(&path);
    assert_eq!(table[0].join(","), "eta,f,fprime,theta,thetaprime");
    assert_eq!(table[1][0], "0");
    assert_eq!(table[1][1], "0");
    assert_eq!(table[1][3], "1");
    let last_eta: f64 = table.last().unwrap()[0].parse().unwrap();
    assert!(last_eta >= 15.0);
    assert!(table[1..]
        .windows(2)
        .all(|w| w[1][0].parse::<f64>().unwrap() - w[0][0].parse::<f64>().unwrap() <= 0.05 + 1e-9));
}

#[test]
fn profile_json_embeds_parameters_and_arrays() {
    let out = porous_mhd(&["profile", "--n", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["params"]["n"], 2.0);
    let eta = doc["solution"]["eta"].as_array().unwrap();
    assert_eq!(
        eta.len(),
        doc["solution"]["theta"].as_array().unwrap().len()
    );
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = porous_mhd(&[
            "heatflux",
            "--geometry",
            "sphere",
            "--n",
            "2",
            "--N",
            "0,10",
            "--points",
            "19",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}
