use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use relmaj::sample;
use relmaj::submaj::geometric_submajorizes;
use relmaj::Pair;
use relmaj_cli::{lorenz_svg, parse_resource, render_lorenz, serialize_resource};

fn relmaj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relmaj")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

struct Files {
    _dir: tempfile::TempDir,
    pure: String,
    a: String,
    b: String,
    bad: String,
}

fn files() -> Files {
    let dir = tempfile::tempdir().unwrap();
    let s = |p: PathBuf| p.to_str().unwrap().to_string();
    let pure = s(write(dir.path(), "pure-bit.json", r#"{"name":"pure-bit","p":[1,0],"q":[0.5,0.5]}"#));
    let a = s(write(dir.path(), "A.json", r#"{"name":"A","p":[0.7,0.3],"q":[0.5,0.5]}"#));
    let b = s(write(dir.path(), "B.json", r#"{"name":"B","p":[0.9,0.1],"q":[0.5,0.5]}"#));
    let bad = s(write(dir.path(), "bad.json", r#"{"p":[0.5,0.6],"q":[0.5,0.5]}"#));
    Files { _dir: dir, pure, a, b, bad }
}

#[test]
fn check_self_is_yes() {
    let f = files();
    let o = relmaj(&["check", "--a", &f.pure, "--b", &f.pure, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pure-bit,pure-bit,majorizes,true"));
}

#[test]
fn region_reports_worked_probability() {
    let f = files();
    let o = relmaj(&["region", "--a", &f.a, "--b", &f.b, "--z", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "z,lambda_star\n1,0.777777778\n");
    let o = relmaj(&["region", "--a", &f.a, "--b", &f.b, "--grid", "0.5:2:4", "--lambda", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["boundary"].as_array().unwrap().len(), 4);
    assert_eq!(v["z_star"][0]["z_star"].as_f64().unwrap(), 1.66666667);
}

#[test]
fn verify_agrees() {
    let o = relmaj(&["verify", "--seed", "7", "--cases", "200", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("7,200,true"));
}

#[test]
fn exit_codes() {
    let f = files();
    let o = relmaj(&["check", "--a", &f.bad, "--b", &f.a]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("normalized"));
    assert_eq!(relmaj(&["check", "--a", &f.a]).status.code(), Some(2));
    assert_eq!(relmaj(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(relmaj(&["region", "--a", &f.a, "--b", &f.b, "--grid", "1:2"]).status.code(), Some(2));
    assert_eq!(relmaj(&["lorenz", "--a", &f.a]).status.code(), Some(2));
    assert_eq!(relmaj(&["work", "--a", &f.a, "--z", "0"]).status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    let f = files();
    for args in [
        vec!["bounds", "--a", &f.a, "--b", &f.b],
        vec!["verify", "--seed", "3", "--cases", "20"],
        vec!["asympt", "--a", &f.b, "--b", &f.a, "--nmax", "8", "--lambda", "0.5"],
    ] {
        assert_eq!(stdout(&relmaj(&args)), stdout(&relmaj(&args)));
    }
}

#[test]
fn work_and_approx_values() {
    let f = files();
    let o = relmaj(&["work", "--a", &f.pure, "--format", "csv"]);
    let out = stdout(&o);
    assert!(out.contains("z,lambda,z_star,lambda_star,eta_hat,work_extracted\n1,1,0.5,1,0,\n"), "{out}");
    assert!(out.contains("1,1,2,0.5,0.5,"), "{out}");
    let o = relmaj(&["approx", "--a", &f.a, "--b", &f.b, "--format", "csv"]);
    assert!(stdout(&o).contains("1,0.2,0.333333333,"));
}

#[test]
fn report_goes_to_out_file() {
    let f = files();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("region.csv");
    let o = relmaj(&["region", "--a", &f.a, "--b", &f.b, "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert_eq!(std::fs::read_to_string(out).unwrap(), "z,lambda_star\n1,0.777777778\n");
}

fn polylines(svg: &str) -> Vec<Vec<(f64, f64)>> {
    svg.split("data-points=\"")
        .skip(1)
        .map(|rest| {
            rest.split('"').next().unwrap()
                .split(' ')
                .map(|pt| {
                    let (x, y) = pt.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect()
        })
        .collect()
}

#[test]
fn diagonal_plot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("diag.svg");
    let pair = Pair::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
    render_lorenz(&[("diagonal".into(), pair)], &path).unwrap();
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains("viewBox=\"0 0 1000 1000\""));
    assert_eq!(polylines(&svg), vec![vec![(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)]]);
    assert!(lorenz_svg(&[]).is_err());
}

#[test]
fn worked_instance_plot() {
    let f = files();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.svg");
    let o = relmaj(&["lorenz", "--a", &f.b, "--b", &f.a, "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    let lines = polylines(&svg);
    assert_eq!(lines.len(), 2);
    assert_eq!(svg.matches("class=\"elbow\"").count(), 4);
    // B dominates A, so A's curve lies below B's at every elbow of A.
    let (b, a) = (parse_resource(r#"{"p":[0.9,0.1],"q":[0.5,0.5]}"#).unwrap(), parse_resource(r#"{"p":[0.7,0.3],"q":[0.5,0.5]}"#).unwrap());
    assert!(geometric_submajorizes(&b.pair(), &a.pair()));
    for &(q, p) in &lines[1] {
        assert!(p <= b.pair().alpha(q).unwrap() + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn resource_files_round_trip(seed in any::<u64>()) {
        let r = sample::resource(&mut sample::rng(seed), 1, 8).with_label(format!("r{seed}"));
        let back = parse_resource(&serialize_resource(&r)).unwrap();
        prop_assert_eq!(back, r);
    }
}
