//! TOML run configuration: raw schema, defaults and validation.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bessel_bc::BoundaryCondition;
use crate::geometry::BlackHoleParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Horizons,
    RegionScan,
    FlowAudit,
    SourceSinkAudit,
    Lopatinskii,
    Qnf,
    OracleA0,
    Invariance,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Horizons => "horizons",
            Command::RegionScan => "region-scan",
            Command::FlowAudit => "flow-audit",
            Command::SourceSinkAudit => "source-sink-audit",
            Command::Lopatinskii => "lopatinskii",
            Command::Qnf => "qnf",
            Command::OracleA0 => "oracle-a0",
            Command::Invariance => "invariance",
        }
    }

    fn needs_params(self) -> bool {
        !matches!(self, Command::RegionScan)
    }
}

/// A complex number written as `x` or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexValue> for Complex64 {
    fn from(v: ComplexValue) -> Self {
        match v {
            ComplexValue::Real(x) => Complex64::new(x, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BcSpec {
    Name(String),
    Table {
        kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<ComplexValue>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta0: Option<ComplexValue>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta1: Option<ComplexValue>,
    },
}

impl BcSpec {
    pub fn build(&self, nu: f64) -> Result<BoundaryCondition, String> {
        let zero = ComplexValue::Real(0.0);
        let (kind, beta, beta0, beta1) = match self {
            BcSpec::Name(n) => (n.as_str(), None, None, None),
            BcSpec::Table { kind, beta, beta0, beta1 } => (kind.as_str(), *beta, *beta0, *beta1),
        };
        match kind {
            "dirichlet" => Ok(BoundaryCondition::dirichlet(nu)),
            "neumann" => Ok(BoundaryCondition::neumann(nu)),
            "robin" => Ok(BoundaryCondition::robin(nu, Complex64::from(beta.ok_or("robin needs `beta`")?))),
            "lambda_robin" => Ok(BoundaryCondition::lambda_robin(
                nu,
                Complex64::from(beta0.unwrap_or(zero)),
                Complex64::from(beta1.unwrap_or(zero)),
            )),
            other => Err(format!("unknown boundary condition `{other}` (dirichlet, neumann, robin, lambda_robin)")),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<Command>,
    seed: Option<u64>,
    workers: Option<usize>,
    params: Option<RawParams>,
    mode: Option<RawMode>,
    grid: Option<RawGrid>,
    scan: Option<RawScan>,
    audit: Option<RawAudit>,
    lopatinskii: Option<RawLopatinskii>,
    oracle: Option<RawOracle>,
    invariance: Option<RawInvariance>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    a: Option<f64>,
    #[serde(rename = "M")]
    mass: Option<f64>,
    nu: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    m: Option<i32>,
    bc: Option<BcSpec>,
    k: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    coarse: Option<[usize; 2]>,
    fine: Option<[usize; 2]>,
    delta: Option<f64>,
    fplus_scale: Option<f64>,
    max_newton: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    n_a: Option<usize>,
    n_mass: Option<usize>,
    a_max: Option<f64>,
    mass_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAudit {
    n_samples: Option<usize>,
    t_max: Option<f64>,
    eps_sink: Option<f64>,
    neighborhood: Option<f64>,
    rtol: Option<f64>,
    dump_trajectories: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLopatinskii {
    n_samples: Option<usize>,
    sector_eps: Option<f64>,
    threshold: Option<f64>,
    bcs: Option<Vec<BcSpec>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    ells: Option<Vec<u32>>,
    lambda_init: Option<ComplexValue>,
    order: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInvariance {
    deltas: Option<Vec<f64>>,
    fplus_scales: Option<Vec<f64>>,
    tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsConfig {
    pub a: f64,
    #[serde(rename = "M")]
    pub mass: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeConfig {
    pub m: i32,
    pub bc: Option<BcSpec>,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridConfig {
    pub coarse: [usize; 2],
    pub fine: [usize; 2],
    pub delta: f64,
    pub fplus_scale: f64,
    pub max_newton: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    pub n_a: usize,
    pub n_mass: usize,
    pub a_max: f64,
    pub mass_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditConfig {
    pub n_samples: usize,
    pub t_max: f64,
    pub eps_sink: f64,
    pub neighborhood: f64,
    pub rtol: f64,
    pub dump_trajectories: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LopatinskiiConfig {
    pub n_samples: usize,
    pub sector_eps: f64,
    pub threshold: f64,
    pub bcs: Vec<BcSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleConfig {
    pub ells: Vec<u32>,
    pub lambda_init: ComplexValue,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceConfig {
    pub deltas: Vec<f64>,
    pub fplus_scales: Vec<f64>,
    pub tolerance: f64,
}

/// Fully resolved configuration. Its JSON form is what gets hashed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub workers: usize,
    pub params: Option<ParamsConfig>,
    pub mode: ModeConfig,
    pub grid: GridConfig,
    pub scan: ScanConfig,
    pub audit: AuditConfig,
    pub lopatinskii: LopatinskiiConfig,
    pub oracle: OracleConfig,
    pub invariance: InvarianceConfig,
}

impl RunConfig {
    pub fn black_hole(&self) -> Option<BlackHoleParams> {
        let p = self.params.as_ref()?;
        BlackHoleParams::new(p.a, p.mass, p.nu).ok()
    }

    pub fn boundary_condition(&self) -> Option<BoundaryCondition> {
        let nu = self.params.as_ref()?.nu;
        self.mode.bc.as_ref().and_then(|b| b.build(nu).ok())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let d = Sha256::digest(json.as_bytes());
        d.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// One validation problem, anchored to a line of the file when possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub config: RunConfig,
    /// `(key, value)` for every field filled from defaults.
    pub defaulted: Vec<(String, String)>,
}

/// Line of `key` inside `[section]` (or at top level), else the section
/// header, else `None`.
fn locate(text: &str, section: Option<&str>, key: Option<&str>) -> Option<usize> {
    let mut current: Option<String> = None;
    let mut header = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(h) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(h.trim().to_string());
            if section == Some(h.trim()) {
                header = Some(i + 1);
            }
            continue;
        }
        if current.as_deref() == section {
            if let Some(k) = key {
                let lhs = line.split('=').next().unwrap_or("").trim();
                if line.contains('=') && lhs == k {
                    return Some(i + 1);
                }
            }
        }
    }
    header
}

struct Resolver<'a> {
    text: &'a str,
    defaulted: Vec<(String, String)>,
    issues: Vec<ConfigIssue>,
}

impl Resolver<'_> {
    fn take<T: fmt::Debug>(&mut self, section: &str, key: &str, v: Option<T>, default: T) -> T {
        v.unwrap_or_else(|| {
            let name = if section.is_empty() { key.to_string() } else { format!("{section}.{key}") };
            self.defaulted.push((name, format!("{default:?}")));
            default
        })
    }

    fn issue(&mut self, section: Option<&str>, key: Option<&str>, message: impl Into<String>) {
        self.issues.push(ConfigIssue { line: locate(self.text, section, key), message: message.into() });
    }
}

fn toml_issue(e: &toml::de::Error, text: &str) -> ConfigIssue {
    let start = e.span().map(|s| s.start.min(text.len())).unwrap_or(0);
    let mut line = e.span().map(|_| text[..start].lines().count().max(1));
    // spans of unknown keys cover the enclosing table, so find the key itself
    let msg = e.message();
    if let Some(key) = msg.strip_prefix("unknown field `").and_then(|r| r.split('`').next()) {
        let skip = line.unwrap_or(1) - 1;
        let hit = text.lines().enumerate().skip(skip).find(|(_, l)| {
            l.contains('=') && l.split('=').next().map(str::trim) == Some(key)
        });
        if let Some((i, _)) = hit {
            line = Some(i + 1);
        }
    }
    ConfigIssue { line, message: msg.to_string() }
}

/// Parses and validates a configuration without running anything.
/// `command`, the subcommand, must agree with the file's `command` key
/// when both are present.
pub fn validate(text: &str, command: Option<Command>) -> Result<Validated, Vec<ConfigIssue>> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| vec![toml_issue(&e, text)])?;
    let mut r = Resolver { text, defaulted: Vec::new(), issues: Vec::new() };
    if let (Some(sub), Some(file)) = (command, raw.command) {
        if sub != file {
            r.issue(
                None,
                Some("command"),
                format!("config names `{}` but the subcommand is `{}`", file.as_str(), sub.as_str()),
            );
            return Err(r.issues);
        }
    }
    let command = match command.or(raw.command) {
        Some(c) => c,
        None => {
            r.issue(None, None, "missing field `command` (or give the subcommand on the command line)");
            return Err(r.issues);
        }
    };

    let params = match (raw.params, command.needs_params()) {
        (Some(p), _) => {
            let mut missing = |key: &str, v: Option<f64>| {
                if v.is_none() {
                    r.issue(Some("params"), None, format!("missing field `params.{key}`"));
                }
                v.unwrap_or(f64::NAN)
            };
            let a = missing("a", p.a);
            let mass = missing("M", p.mass);
            let nu = missing("nu", p.nu);
            Some(ParamsConfig { a, mass, nu })
        }
        (None, true) => {
            r.issue(None, None, format!("missing section `[params]` (needed by `{}`)", command.as_str()));
            None
        }
        (None, false) => None,
    };
    if let Some(p) = &params {
        if p.a.is_finite() && p.mass.is_finite() && p.nu.is_finite() {
            if let Err(e) = BlackHoleParams::new(p.a, p.mass, p.nu) {
                let key = if !(p.a.abs() < 1.0) {
                    "a"
                } else if !(p.mass > 0.0) {
                    "M"
                } else {
                    "nu"
                };
                r.issue(Some("params"), Some(key), e.to_string());
            }
        }
    }

    let rm = raw.mode.unwrap_or_default();
    let mode = ModeConfig {
        m: r.take("mode", "m", rm.m, 0),
        bc: rm.bc,
        k: r.take("mode", "k", rm.k, 1.0),
    };
    if let Some(p) = &params {
        let uses_mode = matches!(command, Command::Qnf | Command::Invariance | Command::OracleA0);
        match &mode.bc {
            Some(b) => {
                if let Err(e) = b.build(p.nu) {
                    r.issue(Some("mode"), Some("bc"), e);
                } else if uses_mode && p.nu >= 1.0 {
                    r.issue(Some("mode"), Some("bc"), format!("ModeSpec invariant: ν = {} ≥ 1 takes no boundary condition", p.nu));
                }
            }
            None if uses_mode && p.nu > 0.0 && p.nu < 1.0 => {
                r.issue(Some("params"), Some("nu"), format!("ModeSpec invariant: 0 < ν = {} < 1 requires `mode.bc`", p.nu));
            }
            None => {}
        }
    }
    if !(mode.k >= 0.0) {
        r.issue(Some("mode"), Some("k"), "`mode.k` must be ≥ 0");
    }

    let rg = raw.grid.unwrap_or_default();
    let grid = GridConfig {
        coarse: r.take("grid", "coarse", rg.coarse, [40, 12]),
        fine: r.take("grid", "fine", rg.fine, [60, 18]),
        delta: r.take("grid", "delta", rg.delta, 0.1),
        fplus_scale: r.take("grid", "fplus_scale", rg.fplus_scale, 1.0),
        max_newton: r.take("grid", "max_newton", rg.max_newton, 8),
    };
    if !(grid.delta > 0.0) {
        r.issue(Some("grid"), Some("delta"), "`grid.delta` must be > 0");
    }
    if !(grid.fplus_scale > 0.0) {
        r.issue(Some("grid"), Some("fplus_scale"), "`grid.fplus_scale` must be > 0");
    }

    let rs = raw.scan.unwrap_or_default();
    let scan = ScanConfig {
        n_a: r.take("scan", "n_a", rs.n_a, 200),
        n_mass: r.take("scan", "n_mass", rs.n_mass, 200),
        a_max: r.take("scan", "a_max", rs.a_max, 1.0),
        mass_max: r.take("scan", "mass_max", rs.mass_max, 2.0),
    };
    if scan.n_a < 2 || scan.n_mass < 2 {
        r.issue(Some("scan"), None, "scan grids need at least 2 points per axis");
    }

    let ra = raw.audit.unwrap_or_default();
    let audit = AuditConfig {
        n_samples: r.take("audit", "n_samples", ra.n_samples, 500),
        t_max: r.take("audit", "t_max", ra.t_max, 1e3),
        eps_sink: r.take("audit", "eps_sink", ra.eps_sink, 1e-8),
        neighborhood: r.take("audit", "neighborhood", ra.neighborhood, 1e-4),
        rtol: r.take("audit", "rtol", ra.rtol, 1e-10),
        dump_trajectories: r.take("audit", "dump_trajectories", ra.dump_trajectories, 0),
    };
    if !(audit.t_max > 0.0) {
        r.issue(Some("audit"), Some("t_max"), "`audit.t_max` must be > 0");
    }

    let rl = raw.lopatinskii.unwrap_or_default();
    let lopatinskii = LopatinskiiConfig {
        n_samples: r.take("lopatinskii", "n_samples", rl.n_samples, 1000),
        sector_eps: r.take("lopatinskii", "sector_eps", rl.sector_eps, 0.05),
        threshold: r.take("lopatinskii", "threshold", rl.threshold, 1e-6),
        bcs: r.take(
            "lopatinskii",
            "bcs",
            rl.bcs,
            vec![BcSpec::Name("dirichlet".into()), BcSpec::Name("neumann".into())],
        ),
    };
    if let Some(p) = &params {
        for b in &lopatinskii.bcs {
            if let Err(e) = b.build(p.nu) {
                r.issue(Some("lopatinskii"), Some("bcs"), e);
            }
        }
    }

    let ro = raw.oracle.unwrap_or_default();
    let oracle = OracleConfig {
        ells: r.take("oracle", "ells", ro.ells, vec![0, 1, 2]),
        lambda_init: r.take("oracle", "lambda_init", ro.lambda_init, ComplexValue::Pair([2.8, -2.67])),
        order: r.take("oracle", "order", ro.order, 80),
    };

    let ri = raw.invariance.unwrap_or_default();
    let invariance = InvarianceConfig {
        deltas: r.take("invariance", "deltas", ri.deltas, vec![0.1, 0.05]),
        fplus_scales: r.take("invariance", "fplus_scales", ri.fplus_scales, vec![1.0, 1.2]),
        tolerance: r.take("invariance", "tolerance", ri.tolerance, 1e-6),
    };

    let config = RunConfig {
        command,
        seed: r.take("", "seed", raw.seed, 0),
        workers: r.take("", "workers", raw.workers, 0),
        params,
        mode,
        grid,
        scan,
        audit,
        lopatinskii,
        oracle,
        invariance,
    };
    if r.issues.is_empty() {
        Ok(Validated { config, defaulted: r.defaulted })
    } else {
        Err(r.issues)
    }
}
