use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qplane"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn series(terms: &[(usize, usize, f64)]) -> String {
    let t: Vec<String> = terms
        .iter()
        .map(|(i, k, re)| format!(r#"{{"i":{i},"k":{k},"re":{re},"im":0}}"#))
        .collect();
    format!(r#"{{"q":[0.5,0],"trunc":4,"terms":[{}]}}"#, t.join(","))
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn mul_y_by_x() {
    let dir = TempDir::new().unwrap();
    let y = write(&dir, "y.json", &series(&[(0, 1, 1.0)]));
    let x = write(&dir, "x.json", &series(&[(1, 0, 1.0)]));
    let o = qplane(&["mul", &y, &x]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&stdout(&o));
    assert_eq!(v["terms"], serde_json::json!([{"i": 1, "k": 1, "re": 0.5, "im": 0.0}]));
}

#[test]
fn pow_one_reproduces_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &series(&[(0, 0, 0.1), (2, 1, -3.25), (1, 3, 1e-17)]));
    let o = qplane(&["pow", &f, "--s", "1"]);
    assert!(o.status.success());
    let (got, _) = qplane_core::formats::read_series(&stdout(&o)).unwrap();
    let (want, _) = qplane_core::formats::read_series(&fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(got, want);
    let formula = qplane(&["pow", &f, "--s", "3", "--method", "formula"]);
    let repeated = qplane(&["pow", &f, "--s", "3"]);
    assert!(formula.status.success() && repeated.status.success());
}

#[test]
fn decompose_log_example_into_three_files() {
    let dir = TempDir::new().unwrap();
    let src = dir.path().join("log.json");
    let o = qplane(&["--trunc", "5", "--output", src.to_str().unwrap(), "example", "log-xy"]);
    assert!(o.status.success());
    let prefix = dir.path().join("parts");
    let o = qplane(&["--output", prefix.to_str().unwrap(), "decompose", src.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let read = |suffix: &str| json(&fs::read_to_string(dir.path().join(format!("parts.{suffix}.json"))).unwrap());
    let (x, xy, y) = (read("x"), read("xy"), read("y"));
    // constant ln(3/2) on the x-part, the (xy)ⁿ terms in the mixed part, nothing in y
    assert_eq!(x["terms"].as_array().unwrap().len(), 1);
    assert_eq!(x["terms"][0]["re"].as_f64().unwrap(), 1.5f64.ln());
    assert_eq!(xy["terms"].as_array().unwrap().len(), 5);
    assert!(y["terms"].as_array().unwrap().is_empty());
}

#[test]
fn norm_reports_both_seminorms() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &series(&[(1, 1, 2.0), (0, 2, -1.0)]));
    let o = qplane(&["--rho", "2", "--rho-y", "0.5", "norm", &f]);
    assert!(o.status.success());
    let lines: Vec<_> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines[0], "norm,rho_x,rho_y,value");
    assert_eq!(lines[1], "seminorm,2,2,12");
    // p = ‖2x‖_2·0.5 + ‖−1‖·0.25
    assert_eq!(lines[2], "p_seminorm,2,0.5,2.25");
}

#[test]
fn decay_of_xy_has_unit_ratio() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "xy.json", &series(&[(1, 1, 1.0)]));
    let o = qplane(&["--smax", "4", "decay", &f]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<_> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let ratio: f64 = r.rsplit(',').next().unwrap().parse().unwrap();
        assert!((ratio - 1.0).abs() <= 1e-15);
    }
}

#[test]
fn decay_of_zero_is_empty() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "zero.json", &series(&[]));
    let o = qplane(&["decay", &f]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "s,root_norm,bound,ratio\n");
}

#[test]
fn decay_rejects_non_radical_input() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &series(&[(1, 1, 1.0), (2, 0, 1.0), (0, 3, 1.0)]));
    let o = qplane(&["decay", &f]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("kind=not_radical") && err.contains("x^2y^0") && err.contains("x^0y^3"));
}

#[test]
fn decay_of_random_radical_series() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    let o = qplane(&[
        "--seed",
        "42",
        "--trunc",
        "24",
        "--output",
        p,
        "random",
        "--mixed",
        "--support",
        "4",
    ]);
    assert!(o.status.success());
    let o = qplane(&["decay", p]);
    assert!(o.status.success(), "{}", stderr(&o));
    for r in stdout(&o).lines().skip(1) {
        let ratio: f64 = r.rsplit(',').next().unwrap().parse().unwrap();
        assert!(ratio <= 1.0 + 1e-12);
    }
}

#[test]
fn random_is_seed_deterministic() {
    let a = qplane(&["--seed", "7", "random"]);
    let b = qplane(&["--seed", "7", "random"]);
    let c = qplane(&["--seed", "8", "random"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn twist_tags_opposite_plane_and_multiplies_there() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &series(&[(1, 2, 1.0)]));
    let o = qplane(&["twist", &f]);
    assert!(o.status.success());
    let v = json(&stdout(&o));
    assert_eq!(v["plane"], "opposite");
    assert_eq!(v["terms"][0]["i"], 2);
    assert_eq!(v["terms"][0]["k"], 1);
    let t = write(&dir, "t.json", &stdout(&o));
    assert!(qplane(&["mul", &t, &t]).status.success());
    assert_eq!(qplane(&["mul", &t, &f]).status.code(), Some(3));
}

#[test]
fn qhull_membership_csv() {
    let dir = TempDir::new().unwrap();
    let disks = write(&dir, "d.json", r#"[{"re":1,"im":0,"radius":0.1}]"#);
    let points = write(&dir, "p.json", "[[0.5,0],[0.3,0],[0,0]]");
    let o = qplane(&["qhull", "--disks", &disks, "--points", &points]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "re,im,member\n0.5,0,true\n0.3,0,false\n0,0,true\n");
    let bad = write(&dir, "bad.json", r#"[{"re":1,"im":0}]"#);
    assert_eq!(
        qplane(&["qhull", "--disks", &bad, "--points", &points]).status.code(),
        Some(2)
    );
    assert_eq!(
        qplane(&["--q-re", "1", "qhull", "--disks", &disks, "--points", &points])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn spiral_neighbourhood_file() {
    let o = qplane(&["spiral", "--lambda-re", "1", "--eps", "0.3", "--delta", "0.1"]);
    assert!(o.status.success());
    assert_eq!(
        json(&stdout(&o)),
        serde_json::json!([
            {"re": 0.0, "im": 0.0, "radius": 0.3},
            {"re": 1.0, "im": 0.0, "radius": 0.1},
            {"re": 0.5, "im": 0.0, "radius": 0.05}
        ])
    );
}

#[test]
fn modelpair_numerical_spectrum() {
    let o = qplane(&["--n", "3", "modelpair"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("x,0,0\n"));
    for y in ["y,1,0", "y,0.5,0", "y,0.25,0"] {
        assert!(out.contains(y), "{out}");
    }
    assert!(qplane(&["--n", "3", "modelpair", "--mode", "analytic"])
        .status
        .success());
    assert_eq!(
        qplane(&["--q-re", "2", "modelpair", "--mode", "analytic"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(qplane(&["--n", "0", "modelpair"]).status.code(), Some(2));
}

#[test]
fn specmap_example_one_distance() {
    let o = qplane(&["--n", "32", "specmap", "--example", "log-xy", "--terms", "32"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    let d: f64 = last.strip_prefix("max_distance,").unwrap().parse().unwrap();
    assert!(d <= 1e-8);
    assert_eq!(out.lines().count(), 1 + 32 + 1);
}

#[test]
fn specmap_writes_curve() {
    let dir = TempDir::new().unwrap();
    let curve = dir.path().join("curve.csv");
    let o = qplane(&[
        "--n",
        "8",
        "--trunc",
        "20",
        "specmap",
        "--example",
        "log-mixture",
        "--terms",
        "20",
        "--curve",
        curve.to_str().unwrap(),
        "--curve-samples",
        "5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&curve).unwrap().lines().count(), 6);
}

#[test]
fn calc_reports_spectrum_outside_domain() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f.json",
        r#"{"q":[0.5,0],"r_x":2,"r_y":0.9,"f_list":[[[1,0]],[[0,0],[1,0]]]}"#,
    );
    let o = qplane(&["--n", "4", "calc", "--function", &f]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("spectrum outside domain"), "{err}");
    assert!(err.contains("r_y = 0.9"));
}

#[test]
fn calc_series_input() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.json", &series(&[(1, 0, 1.0)]));
    let o = qplane(&["--n", "2", "calc", "--series", &f]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "row,col,re,im\n0,0,0,0\n0,1,0,0\n1,0,1,0\n1,1,0,0\n");
}

#[test]
fn koszul_single_character() {
    let o = qplane(&["--n", "4", "koszul", "--gy-re", "1"]);
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_owned();
    assert!(row.starts_with("0,0,1,0,0,"));
    assert!(row.ends_with(",0,1,1,true,true"), "{row}");
    let o = qplane(&["--n", "4", "koszul", "--gx-re", "1", "--gy-re", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",,,,,"));
}

#[test]
fn scan_empty_grid_and_determinism() {
    let o = qplane(&["scan", "--axis", "y", "--re-min", "0", "--re-max", "1", "--steps", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "g_re,g_im,axis,h0,h1,h2,member,stable\n");
    let args = [
        "--n", "6", "scan", "--axis", "y", "--re-min", "-1", "--re-max", "1", "--im-min", "-1", "--im-max", "1",
        "--steps", "9",
    ];
    let a = qplane(&args);
    let b = qplane(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 82);
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let beyond = write(
        &dir,
        "b.json",
        r#"{"q":[0.5,0],"trunc":1,"terms":[{"i":2,"k":0,"re":1,"im":0}]}"#,
    );
    let o = qplane(&["twist", &beyond]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error kind=format exit=2:"));
    assert_eq!(qplane(&["twist", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(qplane(&["pow"]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("spiral.json");
    let o = qplane(&[
        "--output",
        out.to_str().unwrap(),
        "spiral",
        "--lambda-re",
        "1",
        "--eps",
        "0.3",
        "--delta",
        "0.1",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(Path::new(&out).exists());
}
