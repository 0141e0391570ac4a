//! Command line: one subcommand per invocation, driven by a TOML file.
//!
//! Every artifact name carries the first twelve hex digits of the config
//! hash, and `manifest_<hash>.json` lists the artifacts of the run.
//! Exit status is 0 on success, 1 when an audit assertion fails or a
//! computation errors, 2 on configuration errors.

pub mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bessel_bc::{lopatinskii_check, LopatinskiiOptions};
use crate::geometry::{classify_region, find_horizons, region_scan, region_scan_csv, ExtensionVariant};
use crate::phase_space::{
    integrate_flow, nontrapping_audit, sample_characteristic, source_sink_audit, AuditOptions, Direction, FlowOptions,
};
use crate::qnf_solver::invariance::{invariance_test, Configuration};
use crate::qnf_solver::oracle::{continue_in_ell, OracleOptions};
use crate::qnf_solver::{convergence_filter, solve_at, GridSpec, ModeSpec, Problem, QepOptions, QnfResult};
pub use config::{validate, Command, ConfigIssue, RunConfig, Validated};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "kerr-ads-qnf", version, about = "Kerr-AdS quasinormal frequencies and microlocal audits")]
pub struct Cli {
    #[command(subcommand)]
    pub action: Action,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for artifacts.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 means one per logical core.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Action {
    /// Runs the command named in the config file.
    Run,
    /// Checks the config and lists defaulted fields.
    Validate,
    Horizons,
    RegionScan,
    FlowAudit,
    SourceSinkAudit,
    Lopatinskii,
    Qnf,
    OracleA0,
    Invariance,
}

impl Action {
    fn command(self) -> Option<Command> {
        Some(match self {
            Action::Run | Action::Validate => return None,
            Action::Horizons => Command::Horizons,
            Action::RegionScan => Command::RegionScan,
            Action::FlowAudit => Command::FlowAudit,
            Action::SourceSinkAudit => Command::SourceSinkAudit,
            Action::Lopatinskii => Command::Lopatinskii,
            Action::Qnf => Command::Qnf,
            Action::OracleA0 => Command::OracleA0,
            Action::Invariance => Command::Invariance,
        })
    }
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub failed: bool,
    pub outputs: Vec<PathBuf>,
    pub stdout: String,
}

type DynError = Box<dyn std::error::Error + Send + Sync>;

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Parses arguments, runs, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> u8 {
    let Some(path) = &cli.config else {
        eprintln!("error: --config <path> is required");
        return EXIT_CONFIG;
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return EXIT_CONFIG;
        }
    };
    let validated = match validate(&text, cli.action.command()) {
        Ok(v) => v,
        Err(issues) => {
            for i in issues {
                match i.line {
                    Some(l) => eprintln!("{}:{l}: {}", path.display(), i.message),
                    None => eprintln!("{}: {}", path.display(), i.message),
                }
            }
            return EXIT_CONFIG;
        }
    };
    if let Action::Validate = cli.action {
        println!("{}: ok ({})", path.display(), validated.config.command.as_str());
        for (k, v) in &validated.defaulted {
            println!("default {k} = {v}");
        }
        return EXIT_OK;
    }
    let mut cfg = validated.config;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("worker pool: {e}");
            return EXIT_CONFIG;
        }
    };
    match pool.install(|| execute(&cfg, &cli.out)) {
        Ok(o) => {
            print!("{}", o.stdout);
            if o.failed {
                EXIT_FAILED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("{}: {e}", cfg.command.as_str());
            EXIT_FAILED
        }
    }
}

/// Runs a validated configuration, writing artifacts and the manifest to
/// `out`.
pub fn execute(cfg: &RunConfig, out: &Path) -> Result<Outcome, DynError> {
    std::fs::create_dir_all(out)?;
    let hash = cfg.hash();
    let tag = &hash[..12];
    let started = unix_now();
    let mut o = match cfg.command {
        Command::Horizons => horizons(cfg, out, tag)?,
        Command::RegionScan => region(cfg, out, tag)?,
        Command::FlowAudit => flow_audit(cfg, out, tag, &hash)?,
        Command::SourceSinkAudit => source_sink(cfg, out, tag, &hash)?,
        Command::Lopatinskii => lopatinskii(cfg, out, tag, &hash)?,
        Command::Qnf => qnf(cfg, out, tag)?,
        Command::OracleA0 => oracle(cfg, out, tag, &hash)?,
        Command::Invariance => invariance(cfg, out, tag, &hash)?,
    };
    let manifest = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "config_hash": hash,
        "command": cfg.command.as_str(),
        "config": cfg,
        "started": started,
        "finished": unix_now(),
        "failed": o.failed,
        "outputs": o.outputs.iter().map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned())).collect::<Vec<_>>(),
    });
    let mpath = out.join(format!("manifest_{tag}.json"));
    std::fs::write(&mpath, serde_json::to_string_pretty(&manifest)?)?;
    o.outputs.push(mpath);
    Ok(o)
}

fn params(cfg: &RunConfig) -> Result<crate::geometry::BlackHoleParams, DynError> {
    cfg.black_hole().ok_or_else(|| "command needs valid [params]".into())
}

/// Twelve significant digits, trailing zeros trimmed.
fn short(x: f64) -> String {
    let v: f64 = format!("{x:.12e}").parse().unwrap_or(x);
    format!("{v}")
}

fn write_json<T: Serialize>(out: &Path, name: String, value: &T, o: &mut Outcome) -> Result<(), DynError> {
    let p = out.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(value)?)?;
    o.outputs.push(p);
    Ok(())
}

fn horizons(cfg: &RunConfig, out: &Path, tag: &str) -> Result<Outcome, DynError> {
    let p = params(cfg)?;
    let mut o = Outcome::default();
    let region = classify_region(&p);
    match find_horizons(&p) {
        Ok(h) => {
            writeln!(o.stdout, "r_plus={} kappa={}", short(h.r_plus), short(h.kappa))?;
            let region = region.map(|r| r.as_str()).unwrap_or("invalid_params");
            write_json(out, format!("horizons_{tag}.json"), &json!({ "horizon": h, "region": region }), &mut o)?;
        }
        Err(e) => {
            writeln!(o.stdout, "{e}")?;
            o.failed = true;
        }
    }
    Ok(o)
}

fn region(cfg: &RunConfig, out: &Path, tag: &str) -> Result<Outcome, DynError> {
    let s = &cfg.scan;
    let a_grid: Vec<f64> = (0..s.n_a).map(|i| s.a_max * i as f64 / s.n_a as f64).collect();
    let m_grid: Vec<f64> = (1..=s.n_mass).map(|j| s.mass_max * j as f64 / s.n_mass as f64).collect();
    let cells = region_scan(&a_grid, &m_grid);
    let mut o = Outcome::default();
    let p = out.join(format!("region_scan_{tag}.csv"));
    std::fs::write(&p, region_scan_csv(&cells))?;
    o.outputs.push(p);
    writeln!(o.stdout, "{} cells", cells.len())?;
    Ok(o)
}

fn audit_options(cfg: &RunConfig) -> AuditOptions {
    let a = &cfg.audit;
    AuditOptions {
        n_samples: a.n_samples,
        seed: cfg.seed,
        flow: FlowOptions { t_max: a.t_max, eps_sink: a.eps_sink, delta: cfg.grid.delta, rtol: a.rtol, ..FlowOptions::default() },
        neighborhood: a.neighborhood,
        ..AuditOptions::default()
    }
}

fn flow_audit(cfg: &RunConfig, out: &Path, tag: &str, hash: &str) -> Result<Outcome, DynError> {
    let p = params(cfg)?;
    let opts = audit_options(cfg);
    let rep = nontrapping_audit(&p, &opts)?;
    let mut o = Outcome { failed: rep.fraction_classified < 1.0, ..Outcome::default() };
    writeln!(o.stdout, "classified {:.4} of {} samples", rep.fraction_classified, rep.n_samples)?;
    write_json(out, format!("flow_audit_{tag}.json"), &json!({ "config_hash": hash, "report": rep }), &mut o)?;
    let n_dump = cfg.audit.dump_trajectories.min(rep.n_samples);
    if n_dump > 0 {
        let pts = sample_characteristic(&p, n_dump, opts.flow.delta, opts.seed, opts.theta_margin)?;
        for (i, x) in pts.iter().enumerate() {
            for (dir, label) in [(Direction::Forward, "fwd"), (Direction::Backward, "bwd")] {
                let f = integrate_flow(&p, x, dir, &opts.flow)?;
                let mut csv = String::from("t,r,theta,phi,rho,xi_hat_theta,xi_hat_phi\n");
                for (t, q) in f.times.iter().zip(&f.trajectory) {
                    writeln!(csv, "{t},{},{},{},{},{},{}", q.r, q.theta, q.phi, q.rho, q.xi_hat_theta, q.xi_hat_phi)?;
                }
                let path = out.join(format!("trajectory_{i}_{label}_{tag}.csv"));
                std::fs::write(&path, csv)?;
                o.outputs.push(path);
            }
        }
    }
    Ok(o)
}

fn source_sink(cfg: &RunConfig, out: &Path, tag: &str, hash: &str) -> Result<Outcome, DynError> {
    let p = params(cfg)?;
    let rep = source_sink_audit(&p, &audit_options(cfg))?;
    let mut o = Outcome { failed: !rep.failures.is_empty(), ..Outcome::default() };
    writeln!(o.stdout, "worst margin {:.3e}, C = {:.3e}, {} failures", rep.worst_margin, rep.fitted_c, rep.failures.len())?;
    write_json(out, format!("source_sink_audit_{tag}.json"), &json!({ "config_hash": hash, "report": rep }), &mut o)?;
    Ok(o)
}

fn lopatinskii(cfg: &RunConfig, out: &Path, tag: &str, hash: &str) -> Result<Outcome, DynError> {
    let p = params(cfg)?;
    let l = &cfg.lopatinskii;
    let opts = LopatinskiiOptions { n_samples: l.n_samples, sector_eps: l.sector_eps, seed: cfg.seed, threshold: l.threshold, ..LopatinskiiOptions::default() };
    let mut reports = Vec::new();
    let mut o = Outcome::default();
    for b in &l.bcs {
        let bc = b.build(p.nu)?;
        let rep = lopatinskii_check(&p, &bc, &opts)?;
        writeln!(o.stdout, "{}: min margin {:.3e} {}", rep.bc, rep.min_margin, if rep.passed { "pass" } else { "FAIL" })?;
        o.failed |= !rep.passed;
        reports.push(rep);
    }
    write_json(out, format!("lopatinskii_{tag}.json"), &json!({ "config_hash": hash, "reports": reports }), &mut o)?;
    Ok(o)
}

fn problem(cfg: &RunConfig) -> Result<Problem, DynError> {
    let p = params(cfg)?;
    let mode = ModeSpec { k_threshold: cfg.mode.k, ..ModeSpec::new(cfg.mode.m, cfg.boundary_condition()) };
    Ok(Problem { delta: cfg.grid.delta, variant: ExtensionVariant { scale: cfg.grid.fplus_scale }, ..Problem::new(p, mode) })
}

pub const QNF_CSV_HEADER: &str = "a,M,nu,m,bc,delta,fplus_id,N_r,N_theta,re_lambda,im_lambda,residual,converged,halfplane_ok";

/// QNF table rows for one resolution.
pub fn qnf_rows(pb: &Problem, grid: &GridSpec, results: &[QnfResult], converged: &[QnfResult], threshold: f64) -> String {
    let bc = match pb.mode.bc.map(|b| b.name()) {
        Some(n) if n.contains(',') => format!("\"{n}\""),
        Some(n) => n,
        None => "none".into(),
    };
    let mut s = String::new();
    for q in results {
        let conv = converged.iter().any(|c| c.lambda == q.lambda);
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{:.15e},{:.15e},{:.3e},{},{}",
            pb.params.a,
            pb.params.mass,
            pb.params.nu,
            pb.mode.m,
            bc,
            pb.delta,
            pb.variant.id(),
            grid.n_r,
            grid.n_theta,
            q.lambda.re,
            q.lambda.im,
            q.residual,
            conv,
            q.lambda.im > threshold
        );
    }
    s
}

fn qnf(cfg: &RunConfig, out: &Path, tag: &str) -> Result<Outcome, DynError> {
    let pb = problem(cfg)?;
    pb.mode.validate(pb.params.nu)?;
    let window = pb.default_window()?;
    let kappa = pb.kappa()?;
    let opts = QepOptions { max_newton: cfg.grid.max_newton, ..QepOptions::default() };
    let gc = GridSpec::new(cfg.grid.coarse[0], cfg.grid.coarse[1]);
    let gf = GridSpec::new(cfg.grid.fine[0], cfg.grid.fine[1]);
    let a = solve_at(&pb, &gc, &window, &opts)?;
    let b = solve_at(&pb, &gf, &window, &opts)?;
    let conv = convergence_filter(&a, &b, kappa, pb.mode.k_threshold);
    let threshold = -kappa * (0.5 + pb.mode.k_threshold);
    let mut csv = String::from(QNF_CSV_HEADER);
    csv.push('\n');
    // coarse rows are converged when their partner survived
    let coarse_conv: Vec<QnfResult> = a
        .iter()
        .filter(|q| conv.iter().any(|c| c.parity == q.parity && (c.lambda - q.lambda).norm() < 1e-6 * (1.0 + c.lambda.norm())))
        .copied()
        .collect();
    csv.push_str(&qnf_rows(&pb, &gc, &a, &coarse_conv, threshold));
    csv.push_str(&qnf_rows(&pb, &gf, &b, &conv, threshold));
    let mut o = Outcome::default();
    let p = out.join(format!("qnf_{tag}.csv"));
    std::fs::write(&p, csv)?;
    o.outputs.push(p);
    writeln!(o.stdout, "{} converged QNFs", conv.len())?;
    for q in &conv {
        writeln!(o.stdout, "{:+.10} {:+.10}i", q.lambda.re, q.lambda.im)?;
    }
    Ok(o)
}

fn oracle(cfg: &RunConfig, out: &Path, tag: &str, hash: &str) -> Result<Outcome, DynError> {
    let p = params(cfg)?;
    let bc = cfg.boundary_condition();
    let opts = OracleOptions { order: cfg.oracle.order, ..OracleOptions::default() };
    let mut o = Outcome::default();
    let mut results = Vec::new();
    for &ell in &cfg.oracle.ells {
        let target = (ell * (ell + 1)) as f64;
        let steps = (4.0 * target).ceil() as usize;
        let r = continue_in_ell(&p, 0.0, target, steps, bc, cfg.oracle.lambda_init.into(), &opts)?;
        let ok = r.determinant < 1e-10 && r.certificate < 1e-8;
        o.failed |= !ok;
        writeln!(o.stdout, "ell={ell} lambda={:+.12}{:+.12}i certificate={:.1e}", r.lambda.re, r.lambda.im, r.certificate)?;
        results.push(json!({ "ell": ell, "result": r }));
    }
    write_json(out, format!("oracle_a0_{tag}.json"), &json!({ "config_hash": hash, "modes": results }), &mut o)?;
    Ok(o)
}

fn invariance(cfg: &RunConfig, out: &Path, tag: &str, hash: &str) -> Result<Outcome, DynError> {
    let pb = problem(cfg)?;
    pb.mode.validate(pb.params.nu)?;
    let inv = &cfg.invariance;
    let d0 = inv.deltas.first().copied().unwrap_or(cfg.grid.delta);
    let s0 = inv.fplus_scales.first().copied().unwrap_or(1.0);
    let mut configs = vec![Configuration { delta: d0, variant: ExtensionVariant { scale: s0 } }];
    configs.extend(inv.deltas.iter().skip(1).map(|&d| Configuration { delta: d, variant: ExtensionVariant { scale: s0 } }));
    configs.extend(inv.fplus_scales.iter().skip(1).map(|&s| Configuration { delta: d0, variant: ExtensionVariant { scale: s } }));
    let gc = GridSpec::new(cfg.grid.coarse[0], cfg.grid.coarse[1]);
    let gf = GridSpec::new(cfg.grid.fine[0], cfg.grid.fine[1]);
    let opts = QepOptions { max_newton: cfg.grid.max_newton, ..QepOptions::default() };
    let rep = invariance_test(&pb, &gc, &gf, &configs, &pb.default_window()?, &opts)?;
    let mut o = Outcome { failed: !rep.passed(inv.tolerance), ..Outcome::default() };
    writeln!(
        o.stdout,
        "{} QNFs, max |Δλ| = {:.3e}, max relative {:.3e}, {} unmatched",
        rep.n_reference,
        rep.max_displacement,
        rep.max_relative,
        rep.unmatched.len()
    )?;
    write_json(out, format!("invariance_{tag}.json"), &json!({ "config_hash": hash, "report": rep }), &mut o)?;
    Ok(o)
}
