use std::f64::consts::PI;
use std::process::Command;
use std::sync::Arc;
use vortexkit::defects::*;
use vortexkit::geometry::norm;
use vortexkit::harness::*;
use vortexkit::mesh::{build_disk_mesh, TriMesh};
use vortexkit::solver::{initialize_vortex_ansatz, interpolated_vortex, minimize, SolverConfig};
use vortexkit::{FamilySchedule, Integrand};

fn mesh(h: f64) -> Arc<TriMesh> {
    Arc::new(build_disk_mesh(h).unwrap())
}

fn coarse() -> SweepConfig {
    SweepConfig {
        h: 0.1,
        ..SweepConfig::default()
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vortexkit"))
}

#[test]
fn trivial_class_sweep_has_no_ratio() {
    let s = FamilySchedule::new("power", vec![1.5, 1.8]).unwrap();
    let rows = run_sweep(&s, 0, &coarse()).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert!(!r.is_failed());
        assert_eq!(r.ratio, None);
        assert_eq!(r.gap, r.energy);
        assert!(r.energy.abs() < 1e-8);
        assert_eq!(r.n_defects, 0);
    }
    let csv = to_csv(&rows);
    let parsed = parse_csv(&csv).unwrap();
    assert!(parsed.iter().all(|c| c.ratio.is_none()));
}

#[test]
fn sweep_rows_follow_schedule_order() {
    let s = FamilySchedule::new("trunc", vec![3.0, 10.0, 30.0]).unwrap();
    let rows = run_sweep(&s, 1, &coarse()).unwrap();
    assert_eq!(rows.iter().map(|r| r.param).collect::<Vec<_>>(), vec![3.0, 10.0, 30.0]);
    for r in &rows {
        assert!(r.gap.is_finite());
        assert!(r.ratio.unwrap() > 0.0);
        assert_eq!(r.n_defects, 1);
        assert!(r.energy <= r.ansatz_gap + r.vortex_energy * PI + 1e-9);
    }
    assert!(rows[1..].iter().any(|r| r.warm_started) || rows.iter().all(|r| !r.warm_started));
}

#[test]
fn invalid_rows_do_not_abort_the_sweep() {
    let mut s = FamilySchedule::new("power", vec![1.5]).unwrap();
    s.params.push(2.5);
    let rows = run_sweep(&s, 1, &coarse()).unwrap();
    assert!(!rows[0].is_failed());
    assert!(rows[1].is_failed());
    let csv = parse_csv(&to_csv(&rows)).unwrap();
    assert_eq!(csv[1].energy, None);
}

#[test]
fn reports_are_emitted_in_every_format() {
    let s = FamilySchedule::new("area", vec![0.1, 0.03, 0.01]).unwrap();
    let rows = run_sweep(&s, 1, &coarse()).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let csv = dir.path().join("sweep.csv");
    emit_report(&rows, ReportFormat::from_path(&csv).unwrap(), &csv).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let back = parse_csv(&text).unwrap();
    assert_eq!(back, rows.iter().map(|r| r.csv_row()).collect::<Vec<_>>());

    let json = dir.path().join("sweep.json");
    emit_report(&rows, ReportFormat::from_path(&json).unwrap(), &json).unwrap();
    let v: Vec<SweepRecord> = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v, rows);

    let svg = dir.path().join("sweep.svg");
    emit_report(&rows, ReportFormat::from_path(&svg).unwrap(), &svg).unwrap();
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("<svg") && text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches("<polyline").count(), 2);

    assert!(render_report(&[], ReportFormat::Csv).is_err());
    assert!(ReportFormat::from_path(std::path::Path::new("x.txt")).is_err());
}

#[test]
fn universality_examples() {
    let m = mesh(0.02);
    let cfg = SolverConfig::default();
    let a = Integrand::area(0.01).unwrap();
    let b = Integrand::truncated_quadratic(100.0).unwrap();
    let r = universality_check((&a, 1), (&b, 1), m.clone(), &cfg, 0.05).unwrap();
    assert!(r.pass, "{r:?}");

    let same = universality_check((&b, 1), (&b, 1), m.clone(), &cfg, 0.05).unwrap();
    assert!(same.distance_ab <= 1e-9);

    let opposite = universality_check((&b, -1), (&b, 1), m, &cfg, 0.05).unwrap();
    assert!(!opposite.pass);
    assert!(opposite.distance_ab > 0.05);
}

#[test]
fn discrete_vortex_renorm_fit() {
    let m = mesh(0.02);
    let u = interpolated_vortex(m.clone(), 1).unwrap();
    let s = detect_singularities(&u).unwrap();
    let (lo, hi, n) = default_rho_range(m.h, s.rho_omega().unwrap());
    let fit = renorm_energy_fit(&u, &s, lo, hi, n).unwrap();
    assert!((fit.slope / PI - 1.0).abs() < 0.02, "slope {}", fit.slope);
    assert!(fit.intercept.abs() < 0.05, "intercept {}", fit.intercept);
    assert_eq!(fit.rho_grid.len(), 12);
}

#[test]
fn two_defect_renorm_slope() {
    let m = mesh(0.02);
    // the partner vortex adds ≈ 2πρ²/d² to each ball, which steepens the fit
    // when ρ reaches d/2; at ±0.5 the top of the grid is ρ/d ≈ 1/4
    let u = initialize_vortex_ansatz(m.clone(), &[[0.5, 0.0], [-0.5, 0.0]], &[1, 1], 0.0).unwrap();
    let s = detect_singularities(&u).unwrap();
    assert_eq!(s.defects.len(), 2);
    let (lo, hi, n) = default_rho_range(m.h, s.rho_omega().unwrap());
    let fit = renorm_energy_fit(&u, &s, lo, hi, n).unwrap();
    assert_eq!(fit.slope_target, 2.0 * PI);
    assert!(fit.slope_rel_error() < 0.05, "slope {}", fit.slope);
}

#[test]
fn defect_detection_examples() {
    let m = mesh(0.04);
    let u = interpolated_vortex(m.clone(), 1).unwrap();
    let s = detect_singularities(&u).unwrap();
    assert_eq!(s.defects.len(), 1);
    assert_eq!(s.defects[0].degree, 1);
    assert!(norm(s.defects[0].location) <= 1.5 * m.h);
    assert_eq!(s.lambdas, vec![2.0 * PI]);
    assert_eq!(s.esg_total, PI);

    let two = initialize_vortex_ansatz(m, &[[0.3, 0.0], [-0.3, 0.0]], &[1, 1], 0.0).unwrap();
    let s = detect_singularities(&two).unwrap();
    assert_eq!(s.total_degree, 2);
    let mut degs: Vec<i64> = s.defects.iter().map(|d| d.degree).collect();
    degs.sort_unstable();
    assert_eq!(degs, vec![1, 1]);
    assert!((s.singular_energy() - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn field_files_round_trip() {
    let f = Integrand::truncated_quadratic(10.0).unwrap();
    let mref = MeshRef::Disk { h: 0.1 };
    let u0 = interpolated_vortex(Arc::new(mref.build().unwrap()), 1).unwrap();
    let r = minimize(&u0, &f, &SolverConfig::default()).unwrap();
    let file = FieldFile::from_result(mref, 1, &f, &r);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("field.json");
    file.save(&p).unwrap();
    let back = FieldFile::load(&p).unwrap();
    assert_eq!(back, file);
    let field = back.field().unwrap();
    // reloading renormalizes, which may move the last bit
    for (a, b) in field.values.iter().zip(&r.field.values) {
        assert!((a[0] - b[0]).abs() <= 1e-15 && (a[1] - b[1]).abs() <= 1e-15);
    }
    let rep = field_report(&field, &f, 0.3).unwrap();
    assert_eq!(rep.total_degree, 1);
    assert!((rep.energy - r.energy()).abs() <= 1e-12 * r.energy());
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("run.conf");
    std::fs::write(&p, "mesh.h = 0.05\nsweep.family = area\nsweep.params = 0.1, 0.01 # tail\nsolver.window = 20\n").unwrap();
    let c = HarnessConfig::from_file(&p).unwrap();
    assert_eq!(c.sweep.h, 0.05);
    assert_eq!(c.family.as_deref(), Some("area"));
    assert_eq!(c.params, Some(vec![0.1, 0.01]));
    assert_eq!(c.sweep.solver.window, 20);
    assert!(HarnessConfig::parse("solver.backtracking = 2").is_err());
    assert!(HarnessConfig::parse("bogus = 1").is_err());
}

#[test]
fn cli_vortex_energy_and_lambda() {
    let out = bin().args(["vortex-energy", "--integrand", "power:1.5"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 2.0 / 0.75).abs() < 1e-12);

    let out = bin().args(["lambda", "--integrand", "trunc:100", "--t", "0.5,1,2"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);

    let out = bin().args(["vortex-energy", "--integrand", "quadratic"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverges"));
}

#[test]
fn cli_solve_report_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("field.json");
    let st = bin()
        .args(["solve", "--mesh", "disk", "--h", "0.1", "--integrand", "trunc:10", "--degree", "1"])
        .args(["--init", "displaced:0.3,0.1", "--out"])
        .arg(&field)
        .status()
        .unwrap();
    assert!(st.success());
    let out = bin().arg("report").arg("--field").arg(&field).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total_degree"], 1);

    let csv = dir.path().join("s.csv");
    let st = bin()
        .args(["sweep", "--family", "trunc", "--params", "3,10", "--degree", "1", "--h", "0.1", "--out"])
        .arg(&csv)
        .status()
        .unwrap();
    assert!(st.success());
    assert_eq!(parse_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap().len(), 2);

    let seeds = dir.path().join("seeds.json");
    std::fs::write(&seeds, r#"[{"center":[0,0],"degree":1},{"center":[0.5,0],"degree":1}]"#).unwrap();
    let out = bin().arg("merge-sim").arg("--seeds").arg(&seeds).args(["--eta", "1.0"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r: f64 = v["final_balls"].as_array().unwrap().iter().map(|b| b["radius"].as_f64().unwrap()).sum();
    assert!((r - 1.0).abs() < 1e-12);
    let events = v["events"].as_array().unwrap();
    assert_eq!(events.last().unwrap()["kind"], "termination");
    assert!(v["final_balls"][0]["degrees"].is_array());
}
