use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use vortexkit::harness::{
    emit_report, field_report, load_integrand, parse_list, run_sweep, universality_check, FieldFile, HarnessConfig,
    MeshRef, ReportFormat,
};
use vortexkit::merging::{grow_and_merge, EventsFile, GrowthOptions, Seed};
use vortexkit::scalar::{vortex_energy, vortex_energy_quadrature, LambdaEvaluator};
use vortexkit::solver::{initialize_vortex_ansatz, minimize, CircleField};
use vortexkit::{geometry::Domain, mesh::build_disk_mesh, Error, FamilySchedule, Result};

#[derive(Parser)]
#[command(name = "vortexkit", version, about = "Vortex energies for approximating integrands")]
struct Cli {
    /// Flat key = value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Vortex energy of an integrand.
    VortexEnergy {
        /// JSON file or short form (power:1.9, area:0.01, trunc:100, sublog:0.1).
        #[arg(long)]
        integrand: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Integrate even when a closed form is known.
        #[arg(long)]
        quadrature: bool,
    },
    /// Λ_f(t) for a comma list of t.
    Lambda {
        #[arg(long)]
        integrand: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 2.0 * std::f64::consts::PI)]
        sys: f64,
    },
    /// Ball growing and merging from a JSON seed list.
    MergeSim {
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 2.0 * std::f64::consts::PI)]
        sys: f64,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        /// Cap η by the distance to the unit circle.
        #[arg(long)]
        disk: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Disk mesh as JSON.
    Mesh {
        #[arg(long)]
        h: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize on the disk.
    Solve {
        #[arg(long, default_value = "disk")]
        mesh: String,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        integrand: String,
        #[arg(long, default_value_t = 1)]
        degree: i64,
        /// `vortex` or `displaced:x,y`.
        #[arg(long, default_value = "vortex")]
        init: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Defects, renormalized-energy fit and masses of a stored field.
    Report {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        integrand: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a family schedule; output format from the extension.
    Sweep {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        degree: Option<i64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare minimizers of two integrands with each other and with the vortex map.
    Universality {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        degree_a: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        degree_b: i64,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => HarnessConfig::from_file(p)?,
        None => HarnessConfig::default(),
    };
    match cli.cmd {
        Cmd::VortexEnergy { integrand, tol, quadrature } => {
            let f = load_integrand(&integrand)?;
            let r = if quadrature { vortex_energy_quadrature(&f, tol)? } else { vortex_energy(&f, tol)? };
            write_out(None, &serde_json::to_string_pretty(&r)?)
        }
        Cmd::Lambda { integrand, t, sys } => {
            let ev = LambdaEvaluator::new(load_integrand(&integrand)?, sys, 1e-10)?;
            let rows = parse_list(&t)?
                .into_iter()
                .map(|t| Ok(serde_json::json!({"t": t, "lambda": ev.value(t)?, "gap": ev.gap(t)?})))
                .collect::<Result<Vec<_>>>()?;
            write_out(None, &serde_json::to_string_pretty(&rows)?)
        }
        Cmd::MergeSim { seeds, eta, sys, t0, disk, out } => {
            let seeds: Vec<Seed> = serde_json::from_str(&std::fs::read_to_string(seeds)?)?;
            let options = GrowthOptions {
                sys,
                t0,
                domain: disk.then_some(Domain::UnitDisk),
                record_snapshots: false,
            };
            let state = grow_and_merge(&seeds, eta, &options)?;
            write_out(out.as_deref(), &serde_json::to_string_pretty(&EventsFile::new(&state, &seeds))?)
        }
        Cmd::Mesh { h, out } => write_out(out.as_deref(), &build_disk_mesh(h)?.to_json()?),
        Cmd::Solve { mesh, h, integrand, degree, init, out } => {
            if mesh != "disk" {
                return Err(Error::Parse(format!("unsupported mesh {mesh:?}; only disk")));
            }
            let mesh_ref = MeshRef::Disk { h: h.unwrap_or(cfg.sweep.h) };
            let m = Arc::new(mesh_ref.build()?);
            let f = load_integrand(&integrand)?;
            let center = match init.as_str() {
                "vortex" => [0.0, 0.0],
                s => match s.strip_prefix("displaced:").map(parse_list) {
                    Some(Ok(v)) if v.len() == 2 => [v[0], v[1]],
                    _ => return Err(Error::Parse(format!("bad --init {s:?}"))),
                },
            };
            let field0 = if degree == 0 {
                CircleField::constant(m, 0.0)
            } else {
                initialize_vortex_ansatz(m, &[center], &[degree], 0.0)?
            };
            let r = minimize(&field0, &f, &cfg.sweep.solver)?;
            log::info!("energy {} after {} iterations", r.energy(), r.iterations);
            FieldFile::from_result(mesh_ref, degree, &f, &r).save(&out)
        }
        Cmd::Report { field, integrand, out } => {
            let ff = FieldFile::load(&field)?;
            let f = match integrand {
                Some(s) => load_integrand(&s)?,
                None => vortexkit::Integrand::from_spec(&ff.integrand)?,
            };
            let rep = field_report(&ff.field()?, &f, cfg.sweep.mass_rho)?;
            write_out(out.as_deref(), &serde_json::to_string_pretty(&rep)?)
        }
        Cmd::Sweep { family, params, degree, h, out } => {
            let family = family
                .or(cfg.family.clone())
                .ok_or_else(|| Error::Parse("--family or sweep.family required".into()))?;
            let schedule = match params.map(|p| parse_list(&p)).transpose()?.or(cfg.params.clone()) {
                Some(p) => FamilySchedule::new(&family, p)?,
                None => FamilySchedule::standard(&family)?,
            };
            let mut sc = cfg.sweep.clone();
            if let Some(h) = h {
                sc.h = h;
            }
            let records = run_sweep(&schedule, degree.unwrap_or(cfg.degree), &sc)?;
            emit_report(&records, ReportFormat::from_path(&out)?, &out)
        }
        Cmd::Universality { a, b, degree_a, degree_b, h, out } => {
            let (fa, fb) = (load_integrand(&a)?, load_integrand(&b)?);
            let m = Arc::new(build_disk_mesh(h.unwrap_or(cfg.sweep.h))?);
            let rep = universality_check((&fa, degree_a), (&fb, degree_b), m, &cfg.sweep.solver, cfg.universality_threshold)?;
            write_out(out.as_deref(), &serde_json::to_string_pretty(&rep)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
