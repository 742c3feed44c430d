use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzsmooth"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/../fuzzsmooth/fixtures/{name}.fz", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn validate_reports_every_clause() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["validate", &fixture("plateaus")], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    assert!(out.ends_with("valid\n"));

    let bad = dir.path().join("bad.fz");
    std::fs::write(
        &bad,
        "name: bad\nrepr: cuts\nleft [0, 1] dec: 1 - a\nright [0, 1] dec: 2 - a\n",
    )
    .unwrap();
    let o = run(&["validate", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(i) lower cut bounded, nondecreasing, left-continuous: FAILED"));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fz");
    std::fs::write(&bad, "name: bad\nrepr: cuts\nleft [0, 1] inc: a +\n").unwrap();
    let o = run(&["class", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: kind=parse "), "{}", stderr(&o));
    let o = run(&["no-such-command"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn metric_prints_distance_and_gap() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["metric", &fixture("triangle"), &fixture("parabola")], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let field = |k: &str| -> f64 {
        let line = out.lines().find(|l| l.starts_with(k)).unwrap();
        line.split(' ').nth(1).unwrap().parse().unwrap()
    };
    assert!((field("distance") - 0.25).abs() < 1e-15);
    assert!(field("certified_gap") < 1e-12);
}

#[test]
fn smooth_check_refusal_names_the_condition() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["smooth-check", "@kinked", "@parabola"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("(iv-1) fail"));
    assert!(out.contains("theorem none"));
}

#[test]
fn synthesized_smoother_passes_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["synthesize", &fixture("jump"), "--p", "0.5", "--out", "w.fz"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["smooth-check", &fixture("jump"), "w.fz"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("theorem general"));
}

#[test]
fn approximate_writes_every_step() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "approximate",
            &fixture("spike"),
            "--synthesize",
            "--steps",
            "10",
            "--out",
            "steps",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let steps = dir.path().join("steps");
    let files = std::fs::read_dir(&steps).unwrap().count();
    assert_eq!(files, 11);
    let report = std::fs::read_to_string(steps.join("report.csv")).unwrap();
    assert_eq!(report.lines().count(), 11);
    assert!(report.lines().skip(1).all(|l| l.contains(",true,true,")));
    // every step is a loadable document
    let o = run(&["class", "steps/spike_step_07.fz"], dir.path());
    assert!(stdout(&o).contains("F_D true"));
}

#[test]
fn approximate_refuses_a_failing_smoother() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["approximate", "@kinked", "--smoother", "@parabola"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: kind=refused"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        vec!["sample", "@plateaus", "--out", "OUT"],
        vec!["sample", "@jump", "--membership", "--grid", "257", "--out", "OUT"],
        vec!["convolve", "@kinked", "@sine_smoother", "--out", "OUT"],
        vec!["plot", "@spike", "@parabola", "--out", "OUT"],
    ];
    for args in runs {
        let mut bytes = Vec::new();
        for k in 0..2 {
            let name = format!("out{k}");
            let a: Vec<&str> = args
                .iter()
                .map(|s| if *s == "OUT" { name.as_str() } else { s })
                .collect();
            let o = run(&a, dir.path());
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            bytes.push(std::fs::read(dir.path().join(&name)).unwrap());
        }
        assert_eq!(bytes[0], bytes[1], "{args:?}");
    }
}

#[test]
fn sample_grid_and_crisp_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sample", "@parabola", "--grid", "3"], dir.path());
    assert_eq!(
        stdout(&o),
        "alpha,lo,hi\n0,-1,1\n0.5,-0.7071067811865476,0.7071067811865476\n1,0,0\n"
    );
    let o = run(&["sample", "@point", "--grid", "4"], dir.path());
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",0,0")));
    let o = run(&["sample", "@parabola"], dir.path());
    assert_eq!(stdout(&o).lines().count(), 1026);
}

#[test]
fn convolve_then_scale_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    run(&["convolve", "@triangle", "@parabola", "--out", "sum.fz"], dir.path());
    let o = run(&["scale", "sum.fz", "-2", "--out", "scaled.fz"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["cut", "scaled.fz", "0"], dir.path());
    assert_eq!(stdout(&o), "-4 4\n");
    let o = run(&["cut", "scaled.fz", "2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: kind=level-range"));
}

#[test]
fn classify_lists_kinks_with_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["classify", "@kinked"], dir.path());
    let out = stdout(&o);
    assert!(out.starts_with("x,kind,branch,level"));
    assert!(out.contains("0,kink,left,0.5,0.5,0.5,1,0.5"));
}
