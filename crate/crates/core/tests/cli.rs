use std::fs;
use std::process::{Command, Output};

fn meridian_map(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meridian-map"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const FIGURE: [&str; 6] = ["--c", "1", "--d", "0", "--k", "1"];

fn with_figure(cmd: &str, rest: &[&str]) -> Vec<String> {
    std::iter::once(cmd)
        .chain(FIGURE)
        .chain(rest.iter().copied())
        .map(String::from)
        .collect()
}

fn run(args: &[String]) -> Output {
    meridian_map(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn export_graticule_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.svg");
    let o = run(&with_figure(
        "export-graticule",
        &["-o", path.to_str().unwrap()],
    ));
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let svg = fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("class=\"meridian\"").count(), 9);
    assert_eq!(svg.matches("class=\"parallel\"").count(), 5);
    assert!(!svg.contains("NaN"));
}

#[test]
fn export_mesh_defaults_to_figure_resolution() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.obj");
    let o = run(&with_figure("export-mesh", &["-o", path.to_str().unwrap()]));
    assert_eq!(o.status.code(), Some(0));
    let obj = fs::read_to_string(&path).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 64 * 32);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 64 * 31);
}

#[test]
fn table_writes_grid_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = run(&with_figure(
        "table",
        &[
            "--u-range",
            "0.5,1.5",
            "--grid",
            "4x3",
            "-o",
            path.to_str().unwrap(),
        ],
    ));
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,u,x,y"));
    assert_eq!(lines.count(), 12);
}

#[test]
fn classify_reads_csv_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    let mut text = String::from("u,f\n");
    for i in 0..=40 {
        let u = 0.2 + 1.8 * i as f64 / 40.0;
        text.push_str(&format!("{u},{}\n", (u * u + 1.0).sqrt()));
    }
    fs::write(&path, text).unwrap();
    let arg = format!("csv:{}", path.display());
    let o = meridian_map(&["classify", "--profile", &arg]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("exists: true"));

    let o = meridian_map(&["classify", "--profile", "pseudosphere"]);
    assert_eq!(o.status.code(), Some(1));
    let o = meridian_map(&[
        "classify",
        "--profile",
        "quadratic:1,0,1",
        "--domain",
        "-3,-1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn case_b_and_mirror_branch_verify() {
    let o = run(&with_figure(
        "verify",
        &[
            "--case",
            "b",
            "--theta0-branch",
            "mirror",
            "--grid",
            "20x20",
        ],
    ));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn exit_codes() {
    let o = meridian_map(&["classify", "--profile", "csv:/nonexistent/p.csv"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&with_figure(
        "export-mesh",
        &["-o", "/nonexistent/dir/m.obj"],
    ));
    assert_eq!(o.status.code(), Some(3));
    let o = meridian_map(&["verify", "--c", "1", "--d", "3", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = meridian_map(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
    let o = run(&with_figure("verify", &["--u-range", "-1,1"]));
    assert_eq!(
        o.status.code(),
        Some(2),
        "u range straddling u* is rejected"
    );
}
