//! Parameter sweeps, reports and universality comparisons.

use crate::defects::{
    default_rho_range, defect_masses, detect_singularities, energy_in_disk, renorm_energy_fit, SingularitySet,
};
use crate::error::{Error, Result};
use crate::geometry::{self, Domain, Point};
use crate::integrand::{FamilySchedule, Integrand, IntegrandSpec};
use crate::merging::{grow_and_merge, lower_bound_certificate, CertificateSlack, GrowthOptions, Seed};
use crate::mesh::{build_disk_mesh, TriMesh};
use crate::scalar::{vortex_energy, LambdaEvaluator, DEFAULT_TOL};
use crate::solver::{discrete_energy, initialize_vortex_ansatz, minimize, CircleField, MinimizeResult, SolverConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub h: f64,
    pub solver: SolverConfig,
    /// Radius of the balls used for defect masses.
    pub mass_rho: f64,
    pub certificate_slack: CertificateSlack,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            h: 0.02,
            solver: SolverConfig::default(),
            mass_rho: 0.3,
            certificate_slack: CertificateSlack { abs: 1e-6, rel: 0.05 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub eta: f64,
    pub bound: f64,
    pub measured: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub family: String,
    pub param: f64,
    pub degree: i64,
    pub vortex_energy: f64,
    pub energy: f64,
    /// `E_n − 𝒱(f_n)·π|d|`.
    pub gap: f64,
    /// `E_n/(𝒱(f_n)·π|d|)`; absent for `d = 0`.
    pub ratio: Option<f64>,
    pub n_defects: usize,
    pub defect_locations: Vec<Point>,
    pub defect_degrees: Vec<i64>,
    pub intercept: Option<f64>,
    pub slope: Option<f64>,
    /// Gap of the interpolated vortex ansatz for the same integrand.
    pub ansatz_gap: f64,
    pub masses: Vec<f64>,
    pub remainder_mass: Option<f64>,
    pub certificate: Option<CertificateSummary>,
    pub iterations: usize,
    pub converged: bool,
    pub warm_started: bool,
    /// Set when the row failed; numeric fields are then NaN.
    pub error: Option<String>,
}

impl SweepRecord {
    fn failed(family: &str, param: f64, degree: i64, message: String) -> Self {
        SweepRecord {
            family: family.to_string(),
            param,
            degree,
            vortex_energy: f64::NAN,
            energy: f64::NAN,
            gap: f64::NAN,
            ratio: None,
            n_defects: 0,
            defect_locations: Vec::new(),
            defect_degrees: Vec::new(),
            intercept: None,
            slope: None,
            ansatz_gap: f64::NAN,
            masses: Vec::new(),
            remainder_mass: None,
            certificate: None,
            iterations: 0,
            converged: false,
            warm_started: false,
            error: Some(message),
        }
    }

    pub fn is_failed(&self) -> bool {
        self.error.is_some()
    }

    /// Smallest pairwise distance between detected defects.
    pub fn defect_separation(&self) -> Option<f64> {
        let p = &self.defect_locations;
        let mut best: Option<f64> = None;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                let d = geometry::dist(p[i], p[j]);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }

    pub fn csv_row(&self) -> CsvRow {
        let opt = |x: f64| if self.is_failed() { None } else { Some(x) };
        CsvRow {
            family: self.family.clone(),
            param: self.param,
            vortex_energy: opt(self.vortex_energy),
            energy: opt(self.energy),
            gap: opt(self.gap),
            ratio: self.ratio,
            n_defects: self.n_defects,
            intercept: self.intercept,
        }
    }
}

/// Field vortex ansatz with the whole degree at the origin.
pub fn concentrated_ansatz(mesh: Arc<TriMesh>, degree: i64) -> Result<CircleField> {
    if degree == 0 {
        return Ok(CircleField::constant(mesh, 0.0));
    }
    initialize_vortex_ansatz(mesh, &[[0.0, 0.0]], &[degree], 0.0)
}

/// Everything measured on one minimizer.
pub fn analyze_row(
    family: &str,
    param: f64,
    degree: i64,
    f: &Integrand,
    result: &MinimizeResult,
    ansatz: &CircleField,
    warm: bool,
    config: &SweepConfig,
) -> Result<SweepRecord> {
    let field = &result.field;
    let v = vortex_energy(f, DEFAULT_TOL)?.value;
    let esg = PI * degree.unsigned_abs() as f64;
    let energy = result.energy();
    let sing = detect_singularities(field)?;

    let (mut intercept, mut slope) = (None, None);
    let (mut masses, mut remainder) = (Vec::new(), None);
    let mut certificate = None;
    if !sing.defects.is_empty() {
        let rho_omega = sing.rho_omega()?;
        let (lo, hi, n) = default_rho_range(field.mesh.h, rho_omega);
        if lo < hi {
            let fit = renorm_energy_fit(field, &sing, lo, hi, n)?;
            intercept = Some(fit.intercept);
            slope = Some(fit.slope);
        }
        if config.mass_rho < rho_omega {
            let c = defect_masses(field, f, &sing, config.mass_rho)?;
            masses = c.masses;
            remainder = Some(c.remainder);
        }
        certificate = Some(certify(field, f, &sing, config.certificate_slack)?);
    }

    Ok(SweepRecord {
        family: family.to_string(),
        param,
        degree,
        vortex_energy: v,
        energy,
        gap: energy - v * esg,
        ratio: (degree != 0).then(|| energy / (v * esg)),
        n_defects: sing.defects.len(),
        defect_locations: sing.locations(),
        defect_degrees: sing.defects.iter().map(|d| d.degree).collect(),
        intercept,
        slope,
        ansatz_gap: discrete_energy(ansatz, f) - v * esg,
        masses,
        remainder_mass: remainder,
        certificate,
        iterations: result.iterations,
        converged: result.converged,
        warm_started: warm,
        error: None,
    })
}

/// Grows balls from the detected defects to `η = ρ_Ω/2` and checks the
/// lower bound against the discrete energy inside each final ball.
pub fn certify(field: &CircleField, f: &Integrand, sing: &SingularitySet, slack: CertificateSlack) -> Result<CertificateSummary> {
    let seeds: Vec<Seed> = sing.defects.iter().map(|d| Seed::new(d.location, d.degree)).collect();
    let eta = sing.rho_omega()? / 2.0;
    let options = GrowthOptions {
        domain: Some(Domain::UnitDisk),
        ..GrowthOptions::default()
    };
    let state = grow_and_merge(&seeds, eta, &options)?;
    let lambda = LambdaEvaluator::circle(f.clone())?;
    let report = lower_bound_certificate(&state, &lambda, |b| Ok(energy_in_disk(field, f, b.center, b.radius)), slack)?;
    Ok(CertificateSummary {
        eta,
        bound: report.bound,
        measured: report.measured,
        pass: report.pass && report.balls.iter().all(|b| b.pass),
    })
}

/// Solves every schedule entry cold from the concentrated ansatz (in
/// parallel) and warm from the previous entry's minimizer (sequentially),
/// keeping the lower energy. Failed rows are recorded, not propagated.
pub fn run_sweep(schedule: &FamilySchedule, degree: i64, config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let mesh = Arc::new(build_disk_mesh(config.h)?);
    run_sweep_on(schedule, mesh, degree, config)
}

pub fn run_sweep_on(schedule: &FamilySchedule, mesh: Arc<TriMesh>, degree: i64, config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.solver.validate()?;
    let ansatz = concentrated_ansatz(mesh, degree)?;
    let n = schedule.params.len();
    let integrands: Vec<std::result::Result<Integrand, String>> =
        (0..n).map(|i| schedule.integrand(i).map_err(|e| e.to_string())).collect();

    let cold: Vec<Result<MinimizeResult>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let f = integrands[i].as_ref().map_err(|e| Error::Precondition(e.clone()))?;
            minimize(&ansatz, f, &config.solver)
        })
        .collect();

    let mut best: Vec<Option<(MinimizeResult, bool)>> = Vec::with_capacity(n);
    let mut errors: Vec<Option<String>> = Vec::with_capacity(n);
    for (i, c) in cold.into_iter().enumerate() {
        let prev = best.last().and_then(|b: &Option<(MinimizeResult, bool)>| b.as_ref()).map(|b| b.0.field.clone());
        let warm = match (&integrands[i], prev) {
            (Ok(f), Some(start)) if i > 0 => Some(minimize(&start, f, &config.solver)),
            _ => None,
        };
        let mut chosen: Option<(MinimizeResult, bool)> = None;
        let mut err = None;
        for (r, is_warm) in [(Some(c), false), (warm, true)] {
            match r {
                Some(Ok(r)) => {
                    if chosen.as_ref().is_none_or(|(b, _)| r.energy() < b.energy()) {
                        chosen = Some((r, is_warm));
                    }
                }
                Some(Err(e)) => err = Some(e.to_string()),
                None => {}
            }
        }
        if chosen.is_none() {
            log::warn!("sweep row {i} failed: {err:?}");
        }
        errors.push(if chosen.is_none() { err } else { None });
        best.push(chosen);
    }

    let family = schedule.family.as_str();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let param = schedule.params[i];
            let row = match (&best[i], &integrands[i]) {
                (Some((r, warm)), Ok(f)) => {
                    analyze_row(family, param, degree, f, r, &ansatz, *warm, config).map_err(|e| e.to_string())
                }
                (_, Err(e)) => Err(e.clone()),
                (None, _) => Err(errors[i].clone().unwrap_or_else(|| "row produced no result".into())),
            };
            Ok(row.unwrap_or_else(|e| SweepRecord::failed(family, param, degree, e)))
        })
        .collect()
}

/// The eight CSV columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub family: String,
    pub param: f64,
    pub vortex_energy: Option<f64>,
    pub energy: Option<f64>,
    pub gap: Option<f64>,
    pub ratio: Option<f64>,
    pub n_defects: usize,
    pub intercept: Option<f64>,
}

pub const CSV_HEADER: &str = "family,param,vortex_energy,energy,gap,ratio,n_defects,intercept";

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

pub fn to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let c = r.csv_row();
        let _ = writeln!(
            out,
            "{},{:?},{},{},{},{},{},{}",
            c.family,
            c.param,
            fmt_opt(c.vortex_energy),
            fmt_opt(c.energy),
            fmt_opt(c.gap),
            fmt_opt(c.ratio),
            c.n_defects,
            fmt_opt(c.intercept)
        );
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
    }
    let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}"))) };
    let opt = |s: &str| -> Result<Option<f64>> { if s.is_empty() { Ok(None) } else { num(s).map(Some) } };
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let c: Vec<&str> = line.split(',').collect();
            if c.len() != 8 {
                return Err(Error::Parse(format!("expected 8 columns, got {}: {line}", c.len())));
            }
            Ok(CsvRow {
                family: c[0].to_string(),
                param: num(c[1])?,
                vortex_energy: opt(c[2])?,
                energy: opt(c[3])?,
                gap: opt(c[4])?,
                ratio: opt(c[5])?,
                n_defects: c[6].parse().map_err(|_| Error::Parse(format!("bad count {:?}", c[6])))?,
                intercept: opt(c[7])?,
            })
        })
        .collect()
}

/// Log-scaled position along a schedule, increasing toward the limit.
pub fn schedule_axis(family: &str, param: f64) -> f64 {
    match family {
        "power" => -(2.0 - param).log10(),
        "area" | "sublog" => -param.log10(),
        _ => param.log10(),
    }
}

fn axis_label(family: &str) -> &'static str {
    match family {
        "power" => "-log10(2-p)",
        "area" => "-log10(delta)",
        "sublog" => "-log10(eta)",
        _ => "log10(param)",
    }
}

fn polyline(points: &[(f64, f64)], x: (f64, f64), y: (f64, f64), frame: (f64, f64, f64, f64), color: &str) -> String {
    let (fx, fy, fw, fh) = frame;
    let sx = |v: f64| if x.1 > x.0 { fx + (v - x.0) / (x.1 - x.0) * fw } else { fx + fw / 2.0 };
    let sy = |v: f64| if y.1 > y.0 { fy + fh - (v - y.0) / (y.1 - y.0) * fh } else { fy + fh / 2.0 };
    let pts: Vec<String> = points.iter().map(|&(a, b)| format!("{:.2},{:.2}", sx(a), sy(b))).collect();
    let mut s = format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
        pts.join(" ")
    );
    for &(a, b) in points {
        let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>", sx(a), sy(b));
    }
    s
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)))
}

/// Two panels: gap and first-order ratio against the schedule axis.
pub fn to_svg(records: &[SweepRecord]) -> String {
    let fam = records.first().map(|r| r.family.as_str()).unwrap_or("");
    let ok: Vec<&SweepRecord> = records.iter().filter(|r| !r.is_failed()).collect();
    let gap: Vec<(f64, f64)> = ok.iter().map(|r| (schedule_axis(&r.family, r.param), r.gap)).collect();
    let ratio: Vec<(f64, f64)> = ok
        .iter()
        .filter_map(|r| r.ratio.map(|q| (schedule_axis(&r.family, r.param), q)))
        .collect();
    let xr = range(gap.iter().map(|p| p.0));
    let (w, h) = (640.0, 520.0);
    let mut s = format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    let panels = [("gap", &gap, (70.0, 30.0, 540.0, 180.0), "#1f77b4"), ("ratio", &ratio, (70.0, 290.0, 540.0, 180.0), "#d62728")];
    for (name, pts, frame, color) in panels {
        let yr = range(pts.iter().map(|p| p.1));
        let _ = writeln!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            frame.0, frame.1, frame.2, frame.3
        );
        let _ = writeln!(s, "<text x=\"10\" y=\"{}\" font-size=\"14\">{name}</text>", frame.1 + frame.3 / 2.0);
        if !pts.is_empty() {
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-size=\"11\">[{:.4}, {:.4}]</text>",
                frame.0,
                frame.1 - 6.0,
                yr.0,
                yr.1
            );
            s.push_str(&polyline(pts, xr, yr, frame, color));
        }
    }
    let _ = writeln!(
        s,
        "<text x=\"250\" y=\"505\" font-size=\"13\">{} ({fam})</text>\n</svg>",
        axis_label(fam)
    );
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

impl ReportFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(ReportFormat::Csv),
            Some("json") => Ok(ReportFormat::Json),
            Some("svg") => Ok(ReportFormat::Svg),
            other => Err(Error::Parse(format!("unknown report extension {other:?}"))),
        }
    }
}

pub fn render_report(records: &[SweepRecord], format: ReportFormat) -> Result<String> {
    if records.is_empty() {
        return Err(Error::Precondition("no records to report".into()));
    }
    Ok(match format {
        ReportFormat::Csv => to_csv(records),
        ReportFormat::Json => serde_json::to_string_pretty(records)?,
        ReportFormat::Svg => to_svg(records),
    })
}

pub fn emit_report(records: &[SweepRecord], format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render_report(records, format)?)?;
    Ok(())
}

/// Mean Euclidean distance between nodal values.
pub fn mean_nodal_distance(a: &CircleField, b: &CircleField) -> Result<f64> {
    if a.values.len() != b.values.len() {
        return Err(Error::Precondition("fields live on different meshes".into()));
    }
    let s: f64 = a.values.iter().zip(&b.values).map(|(x, y)| geometry::dist(*x, *y)).sum();
    Ok(s / a.values.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub a: String,
    pub b: String,
    pub degree_a: i64,
    pub degree_b: i64,
    pub energy_a: f64,
    pub energy_b: f64,
    pub distance_ab: f64,
    pub distance_a_vortex: f64,
    pub distance_b_vortex: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Minimizes both integrands from their vortex ansatz on one mesh and
/// compares the minimizers with each other and with the interpolated
/// degree-`d` vortex map.
pub fn universality_check(
    a: (&Integrand, i64),
    b: (&Integrand, i64),
    mesh: Arc<TriMesh>,
    solver: &SolverConfig,
    threshold: f64,
) -> Result<UniversalityReport> {
    let run = |(f, d): (&Integrand, i64)| -> Result<(MinimizeResult, CircleField)> {
        let ansatz = concentrated_ansatz(mesh.clone(), d)?;
        Ok((minimize(&ansatz, f, solver)?, ansatz))
    };
    let (ra, rb) = rayon::join(|| run(a), || run(b));
    let ((ma, va), (mb, vb)) = (ra?, rb?);
    let distance_ab = mean_nodal_distance(&ma.field, &mb.field)?;
    let distance_a_vortex = mean_nodal_distance(&ma.field, &va)?;
    let distance_b_vortex = mean_nodal_distance(&mb.field, &vb)?;
    Ok(UniversalityReport {
        a: a.0.to_string(),
        b: b.0.to_string(),
        degree_a: a.1,
        degree_b: b.1,
        energy_a: ma.energy(),
        energy_b: mb.energy(),
        distance_ab,
        distance_a_vortex,
        distance_b_vortex,
        threshold,
        pass: distance_ab < threshold && distance_a_vortex < threshold && distance_b_vortex < threshold,
    })
}

/// Integrand from a JSON file path or a short form such as `trunc:100`.
pub fn load_integrand(arg: &str) -> Result<Integrand> {
    let path = Path::new(arg);
    if path.is_file() {
        Integrand::from_json(&std::fs::read_to_string(path)?)
    } else {
        Integrand::from_spec(&IntegrandSpec::parse_short(arg)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeshRef {
    Disk { h: f64 },
}

impl MeshRef {
    pub fn build(&self) -> Result<TriMesh> {
        match *self {
            MeshRef::Disk { h } => build_disk_mesh(h),
        }
    }
}

/// Persisted minimizer: the mesh is rebuilt deterministically from its
/// reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldFile {
    pub mesh: MeshRef,
    pub degree: i64,
    pub integrand: IntegrandSpec,
    pub values: Vec<Point>,
    pub energy: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl FieldFile {
    pub fn from_result(mesh: MeshRef, degree: i64, f: &Integrand, r: &MinimizeResult) -> Self {
        FieldFile {
            mesh,
            degree,
            integrand: f.spec().clone(),
            values: r.field.values.clone(),
            energy: r.energy(),
            iterations: r.iterations,
            converged: r.converged,
        }
    }

    pub fn field(&self) -> Result<CircleField> {
        CircleField::from_values(Arc::new(self.mesh.build()?), self.values.clone())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }
}

/// Defects, renormalized-energy fit and masses of a stored field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldReport {
    pub energy: f64,
    pub defects: Vec<crate::defects::Defect>,
    pub total_degree: i64,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub masses: Option<crate::defects::ConcentrationReport>,
}

pub fn field_report(field: &CircleField, f: &Integrand, mass_rho: f64) -> Result<FieldReport> {
    let sing = detect_singularities(field)?;
    let (mut slope, mut intercept, mut masses) = (None, None, None);
    if !sing.defects.is_empty() {
        let rho_omega = sing.rho_omega()?;
        let (lo, hi, n) = default_rho_range(field.mesh.h, rho_omega);
        if lo < hi {
            let fit = renorm_energy_fit(field, &sing, lo, hi, n)?;
            slope = Some(fit.slope);
            intercept = Some(fit.intercept);
        }
    }
    if mass_rho < sing.rho_omega()? {
        masses = Some(defect_masses(field, f, &sing, mass_rho)?);
    }
    Ok(FieldReport {
        energy: discrete_energy(field, f),
        total_degree: sing.total_degree,
        defects: sing.defects,
        slope,
        intercept,
        masses,
    })
}

/// Flat `key = value` configuration; `#` starts a comment.
///
/// Keys: `mesh.h`, `solver.max_iters`, `solver.energy_tol`,
/// `solver.initial_step`, `solver.backtracking`, `solver.smoothing_eps`,
/// `solver.window`, `sweep.family`, `sweep.params` (comma list),
/// `sweep.degree`, `analysis.mass_rho`, `certificate.abs_slack`,
/// `certificate.rel_slack`, `universality.threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessConfig {
    pub sweep: SweepConfig,
    pub family: Option<String>,
    pub params: Option<Vec<f64>>,
    pub degree: i64,
    pub universality_threshold: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            sweep: SweepConfig::default(),
            family: None,
            params: None,
            degree: 1,
            universality_threshold: 0.05,
        }
    }
}

impl HarnessConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = HarnessConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = || Error::Parse(format!("line {}: bad value {v:?} for {k}", n + 1));
            let real = || v.parse::<f64>().map_err(|_| bad());
            let int = || v.parse::<usize>().map_err(|_| bad());
            match k {
                "mesh.h" => c.sweep.h = real()?,
                "solver.max_iters" => c.sweep.solver.max_iters = int()?,
                "solver.energy_tol" => c.sweep.solver.energy_tol = real()?,
                "solver.initial_step" => c.sweep.solver.initial_step = real()?,
                "solver.backtracking" => c.sweep.solver.backtracking = real()?,
                "solver.smoothing_eps" => c.sweep.solver.smoothing_eps = real()?,
                "solver.window" => c.sweep.solver.window = int()?,
                "sweep.family" => c.family = Some(v.to_string()),
                "sweep.params" => c.params = Some(parse_list(v)?),
                "sweep.degree" => c.degree = v.parse().map_err(|_| bad())?,
                "analysis.mass_rho" => c.sweep.mass_rho = real()?,
                "certificate.abs_slack" => c.sweep.certificate_slack.abs = real()?,
                "certificate.rel_slack" => c.sweep.certificate_slack.rel = real()?,
                "universality.threshold" => c.universality_threshold = real()?,
                _ => return Err(Error::Parse(format!("line {}: unknown key {k}", n + 1))),
            }
        }
        c.sweep.solver.validate()?;
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Comma-separated reals.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {x:?}"))))
        .collect()
}
