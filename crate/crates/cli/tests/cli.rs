use std::path::Path;
use std::process::{Command, Output};

use uscut::eval::{run_eval, timing_path, EvalCase, Suite, CSV_HEADER};
use uscut_core::maxflow::parse_dimacs;
use uscut_core::session::parse_contour_text;
use uscut_core::{EchoClass, GrayImage, PhantomSpec, TemplateConfig};

fn uscut(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uscut"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn phantom_then_segment() {
    let dir = tempfile::tempdir().unwrap();
    let out = uscut(
        &["phantom", "--class", "C", "--size", "256x200", "--lesion-radius", "25", "--out", "p.pgm", "--mask", "m.pgm"],
        dir.path(),
    );
    assert_success(&out);
    let img = GrayImage::load_pgm(dir.path().join("p.pgm")).unwrap();
    let mask = GrayImage::load_pgm(dir.path().join("m.pgm")).unwrap();
    assert_eq!((img.width(), img.height()), (256, 200));
    let truth = PhantomSpec::for_class(EchoClass::C, 256, 200, 25.0).truth_mask();
    assert_eq!(mask.to_bytes(), truth.to_bytes());

    let out = uscut(
        &[
            "segment", "--image", "p.pgm", "--seed", "128,100", "--spacing", "0.2", "--rays", "36", "--nodes", "30",
            "--radius", "60", "--delta", "2", "--out", "c.txt", "--overlay", "o.pgm", "--dimacs", "g.txt",
        ],
        dir.path(),
    );
    assert_success(&out);
    let rec = parse_contour_text(&std::fs::read_to_string(dir.path().join("c.txt")).unwrap()).unwrap();
    assert_eq!(rec.cfg, TemplateConfig::new(36, 30, 60.0, 2).unwrap());
    assert_eq!(rec.contour.points.len(), 36);
    assert!((rec.diameter_mm - 10.0).abs() <= 0.8, "diameter {}", rec.diameter_mm);

    let overlay = GrayImage::load_pgm(dir.path().join("o.pgm")).unwrap();
    assert_eq!(overlay.get(128, 100), 1.0);
    assert_eq!(overlay.get(5, 5), img.get(5, 5));

    let net = parse_dimacs(&std::fs::read_to_string(dir.path().join("g.txt")).unwrap()).unwrap();
    assert_eq!(net.vertex_count(), 36 * 30 + 2);
}

#[test]
fn segment_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    GrayImage::filled(64, 64, 0.5).unwrap().save_pgm(dir.path().join("f.pgm")).unwrap();
    for args in [
        vec!["segment", "--image", "f.pgm", "--seed", "-1,-1", "--spacing", "0.2", "--out", "c.txt"],
        vec!["segment", "--image", "f.pgm", "--seed", "30,30", "--spacing", "0.2", "--nodes", "10", "--delta", "10", "--out", "c.txt"],
        vec!["segment", "--image", "f.pgm", "--seed", "30;30", "--spacing", "0.2", "--out", "c.txt"],
        vec!["segment", "--image", "missing.pgm", "--seed", "30,30", "--spacing", "0.2", "--out", "c.txt"],
        vec!["segment", "--image", "f.pgm", "--seed", "30,30", "--out", "c.txt"],
    ] {
        let out = uscut(&args, dir.path());
        assert!(!out.status.success(), "{args:?}");
    }
    assert!(!dir.path().join("c.txt").exists());
}

#[test]
fn phantom_rejects_lesion_beyond_the_image() {
    let dir = tempfile::tempdir().unwrap();
    let out = uscut(
        &["phantom", "--class", "A", "--size", "64x64", "--lesion-radius", "40", "--out", "p.pgm", "--mask", "m.pgm"],
        dir.path(),
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("margin"));
    let out = uscut(
        &["phantom", "--class", "F", "--size", "64x64", "--lesion-radius", "10", "--out", "p.pgm", "--mask", "m.pgm"],
        dir.path(),
    );
    assert!(!out.status.success());
}

#[test]
fn table1_exits_zero_and_prints_the_note() {
    let dir = tempfile::tempdir().unwrap();
    let out = uscut(&["table1"], dir.path());
    assert_success(&out);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("mean 17.458 sd 6.861"));
    assert!(text.contains("mean signed 1.462 mm, mean abs 1.506 mm"));
    assert!(text.contains("16.03 +- 6.62"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn empty_suite_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let report = run_eval(&Suite::default(), &out).unwrap();
    assert!(report.outcomes.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), format!("{}\n", CSV_HEADER.join(",")));
    assert_eq!(std::fs::read_to_string(timing_path(&out)).unwrap(), "case,elapsed_ms\n");
}

#[test]
fn noiseless_case_error_within_node_spacing() {
    let dir = tempfile::tempdir().unwrap();
    let case = EvalCase {
        name: Some("clean".into()),
        phantom: PhantomSpec::for_class(EchoClass::C, 512, 512, 30.0),
        seed: None,
        spacing: 0.2,
        template: TemplateConfig::default(),
    };
    let out = dir.path().join("r.csv");
    let report = run_eval(&Suite { cases: vec![case] }, &out).unwrap();
    let row = &report.outcomes[0];
    let node_spacing_mm = TemplateConfig::default().node_spacing() * 0.2;
    assert!(row.error_mm().unwrap().abs() <= node_spacing_mm + 1e-9, "error {:?}", row.error_mm());
    // A single case has no sample sd, so only the deviation rows are written.
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(1).unwrap().starts_with("clean,C,12,"));
}

#[test]
fn eval_from_suite_file_records_failures() {
    let dir = tempfile::tempdir().unwrap();
    let good = EvalCase {
        name: None,
        phantom: PhantomSpec::for_class(EchoClass::A, 200, 200, 20.0).with_speckle(0.15, 1),
        seed: None,
        spacing: 0.25,
        template: TemplateConfig::new(36, 30, 50.0, 2).unwrap(),
    };
    let mut bad = good.clone();
    bad.seed = Some(uscut_core::Point::new(-5.0, 3.0));
    let mut third = good.clone();
    third.phantom.rng_seed = 2;
    std::fs::write(
        dir.path().join("suite.toml"),
        Suite { cases: vec![good, bad, third] }.to_toml(),
    )
    .unwrap();
    let out = uscut(&["eval", "--suite", "suite.toml", "--out", "r.csv"], dir.path());
    assert_success(&out);

    let mut reader = csv::Reader::from_path(dir.path().join("r.csv")).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(&rows[0][0], "case0");
    assert_eq!(&rows[0][6], "ok");
    assert!(rows[1][6].starts_with("failed"));
    assert_eq!(&rows[1][3], "");
    assert_eq!(&rows[2][0], "case2");
    let labels: Vec<&str> = rows[3..].iter().map(|r| r.get(0).unwrap()).collect();
    assert_eq!(
        labels,
        ["summary_mean", "summary_sd", "summary_mean_signed_deviation", "summary_mean_abs_deviation"]
    );
    let true_mean: f64 = rows[3][2].parse().unwrap();
    assert_eq!(true_mean, 10.0);
}

#[test]
fn dump_suite_round_trips_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&uscut(&["eval", "--dump-suite", "s.toml", "--out", "unused.csv"], dir.path()));
    let suite = Suite::load(&dir.path().join("s.toml")).unwrap();
    assert_eq!(suite, uscut::eval::default_suite());
    assert!(!dir.path().join("unused.csv").exists());
}
