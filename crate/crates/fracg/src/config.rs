//! Declarative run configuration.
//!
//! Flat sectioned key-value text (TOML syntax, scalar values and short
//! lists only). Unknown keys are rejected rather than ignored, every
//! default is resolved at parse time, and the raw text is hashed so
//! artifacts can state exactly which configuration produced them.

use crate::error::{Error, Result};
use crate::grid::OmegaSpec;
use crate::modulars::Beta;
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    young: YoungSection,
    #[serde(default)]
    domain: DomainSection,
    fractional: FractionalSection,
    #[serde(default)]
    problem: Option<ProblemSection>,
    #[serde(default)]
    nonlinearities: Option<NonlinearitySection>,
    #[serde(default)]
    solver: SolverSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YoungSection {
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// `[a, b]` in 1D, `[ax, bx, ay, by]` in 2D.
    #[serde(default = "default_omega")]
    pub omega: Vec<f64>,
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default = "default_collar")]
    pub collar: f64,
}

fn default_dim() -> usize {
    1
}
fn default_omega() -> Vec<f64> {
    vec![0.0, 1.0]
}
fn default_h() -> f64 {
    0.05
}
fn default_collar() -> f64 {
    1.0
}

impl Default for DomainSection {
    fn default() -> Self {
        Self {
            dim: default_dim(),
            omega: default_omega(),
            h: default_h(),
            collar: default_collar(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractionalSection {
    pub s: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    /// dirichlet | neumann | regional | robin | all
    #[serde(default = "default_bc")]
    pub bc: String,
    #[serde(default = "default_beta")]
    pub beta: f64,
    /// Per-exterior-node β table; overrides the constant when present.
    #[serde(default)]
    pub beta_table: Vec<f64>,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default)]
    pub mu_list: Vec<f64>,
}

fn default_bc() -> String {
    "all".into()
}
fn default_beta() -> f64 {
    1.0
}
fn default_mu() -> f64 {
    1.0
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self {
            bc: default_bc(),
            beta: default_beta(),
            beta_table: Vec::new(),
            mu: default_mu(),
            mu_list: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySection {
    pub f: String,
    #[serde(default)]
    pub f_params: Vec<f64>,
    #[serde(default = "default_h_id")]
    pub h: String,
    #[serde(default)]
    pub h_params: Vec<f64>,
    /// μ-coefficient of the secondary perturbation.
    #[serde(default)]
    pub mu_coeff: f64,
    /// λ-sweep bounds; zero means "derive from the sampled threshold"
    /// (1.1× and 10× the estimated lower end).
    #[serde(default)]
    pub lambda_min: f64,
    #[serde(default)]
    pub lambda_max: f64,
    #[serde(default = "default_lambda_count")]
    pub lambda_count: usize,
}

fn default_h_id() -> String {
    "zero".into()
}
fn default_lambda_count() -> usize {
    8
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default = "default_separation")]
    pub separation: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Sample count of the randomized verification batteries.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_tol() -> f64 {
    1e-6
}
fn default_max_iter() -> usize {
    50_000
}
fn default_starts() -> usize {
    8
}
fn default_separation() -> f64 {
    1e-3
}
fn default_seed() -> u64 {
    42
}
fn default_samples() -> usize {
    10_000
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            max_iter: default_max_iter(),
            starts: default_starts(),
            separation: default_separation(),
            seed: default_seed(),
            samples: default_samples(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: String,
    /// csv | json-lines
    #[serde(default = "default_format")]
    pub format: String,
}

fn default_dir() -> String {
    "out".into()
}
fn default_format() -> String {
    "csv".into()
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            format: default_format(),
        }
    }
}

/// Validated configuration with the hash of its source text.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub young: YoungSection,
    pub domain: DomainSection,
    pub s: f64,
    pub problem: Option<ProblemSection>,
    pub nonlinearities: Option<NonlinearitySection>,
    pub solver: SolverSection,
    pub output: OutputSection,
    pub sha256: String,
}

/// Command-line overrides applied after parsing.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub h: Option<f64>,
    pub collar: Option<f64>,
    pub tol: Option<f64>,
    pub bc: Option<String>,
    pub mu: Option<f64>,
    pub s: Option<f64>,
    pub family: Option<String>,
    pub params: Option<Vec<f64>>,
    pub starts: Option<usize>,
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let sha256 = hex_string(&hasher.finalize());

    let cfg = RunConfig {
        young: raw.young,
        domain: raw.domain,
        s: raw.fractional.s,
        problem: raw.problem,
        nonlinearities: raw.nonlinearities,
        solver: raw.solver,
        output: raw.output,
        sha256,
    };
    validate(&cfg)?;
    Ok(cfg)
}

pub fn apply_overrides(cfg: &mut RunConfig, ov: &Overrides) -> Result<()> {
    if let Some(seed) = ov.seed {
        cfg.solver.seed = seed;
    }
    if let Some(out) = &ov.out {
        cfg.output.dir = out.clone();
    }
    if let Some(h) = ov.h {
        cfg.domain.h = h;
    }
    if let Some(c) = ov.collar {
        cfg.domain.collar = c;
    }
    if let Some(t) = ov.tol {
        cfg.solver.tol = t;
    }
    if let Some(s) = ov.s {
        cfg.s = s;
    }
    if let Some(bc) = &ov.bc {
        cfg.problem.get_or_insert_with(Default::default).bc = bc.clone();
    }
    if let Some(mu) = ov.mu {
        cfg.problem.get_or_insert_with(Default::default).mu = mu;
    }
    if let Some(family) = &ov.family {
        cfg.young.family = family.clone();
    }
    if let Some(params) = &ov.params {
        cfg.young.params = params.clone();
    }
    if let Some(starts) = ov.starts {
        cfg.solver.starts = starts;
    }
    validate(&cfg.clone())
}

fn validate(cfg: &RunConfig) -> Result<()> {
    let verr = |m: String| Err(Error::ValidationError(m));
    if !(0.0 < cfg.s && cfg.s < 1.0) {
        return verr(format!("s must lie in (0,1), got {}", cfg.s));
    }
    match cfg.domain.dim {
        1 => {
            if cfg.domain.omega.len() != 2 {
                return verr("1D omega needs [a, b]".into());
            }
            if cfg.domain.omega[0] >= cfg.domain.omega[1] {
                return verr("omega bounds must satisfy a < b".into());
            }
        }
        2 => {
            if cfg.domain.omega.len() != 4 {
                return verr("2D omega needs [ax, bx, ay, by]".into());
            }
            if cfg.domain.omega[0] >= cfg.domain.omega[1]
                || cfg.domain.omega[2] >= cfg.domain.omega[3]
            {
                return verr("omega bounds must satisfy ax < bx and ay < by".into());
            }
        }
        d => return verr(format!("dim must be 1 or 2, got {d}")),
    }
    if !(cfg.domain.h > 0.0) {
        return verr(format!("h must be positive, got {}", cfg.domain.h));
    }
    if !(cfg.domain.collar > 0.0) {
        return verr(format!("collar must be positive, got {}", cfg.domain.collar));
    }
    if let Some(p) = &cfg.problem {
        match p.bc.as_str() {
            "dirichlet" | "neumann" | "regional" | "robin" | "all" => {}
            other => return verr(format!("unknown bc `{other}`")),
        }
        if !(p.mu > 0.0) {
            return verr(format!("mu must be positive, got {}", p.mu));
        }
        if p.beta_table.is_empty() && !(p.beta > 0.0) {
            return verr(format!("beta must be positive, got {}", p.beta));
        }
        for &m in &p.mu_list {
            if !(m > 0.0) {
                return verr(format!("mu_list entries must be positive, got {m}"));
            }
        }
    }
    if let Some(nl) = &cfg.nonlinearities {
        if nl.mu_coeff < 0.0 {
            return verr(format!("mu_coeff must be >= 0, got {}", nl.mu_coeff));
        }
        if nl.lambda_count == 0 {
            return verr("lambda_count must be positive".into());
        }
    }
    if !(cfg.solver.tol > 0.0) {
        return verr(format!("tol must be positive, got {}", cfg.solver.tol));
    }
    match cfg.output.format.as_str() {
        "csv" | "json-lines" => {}
        other => return verr(format!("unknown output format `{other}`")),
    }
    Ok(())
}

impl RunConfig {
    pub fn omega_spec(&self) -> OmegaSpec {
        match self.domain.dim {
            1 => OmegaSpec::Interval {
                a: self.domain.omega[0],
                b: self.domain.omega[1],
            },
            _ => OmegaSpec::Box2 {
                x: (self.domain.omega[0], self.domain.omega[1]),
                y: (self.domain.omega[2], self.domain.omega[3]),
            },
        }
    }

    pub fn beta(&self) -> Beta {
        match &self.problem {
            Some(p) if !p.beta_table.is_empty() => Beta::PerExterior(p.beta_table.clone()),
            Some(p) => Beta::Constant(p.beta),
            None => Beta::Constant(1.0),
        }
    }

    /// One-line summary of every resolved value, echoed into artifact
    /// headers.
    pub fn resolved_line(&self) -> String {
        let mut s = format!(
            "young={}{:?} dim={} omega={:?} h={} collar={} s={} tol={} max_iter={} starts={} separation={} seed={} samples={} format={}",
            self.young.family,
            self.young.params,
            self.domain.dim,
            self.domain.omega,
            self.domain.h,
            self.domain.collar,
            self.s,
            self.solver.tol,
            self.solver.max_iter,
            self.solver.starts,
            self.solver.separation,
            self.solver.seed,
            self.solver.samples,
            self.output.format,
        );
        if let Some(p) = &self.problem {
            s.push_str(&format!(
                " bc={} beta={} mu={} mu_list={:?}",
                p.bc, p.beta, p.mu, p.mu_list
            ));
        }
        if let Some(nl) = &self.nonlinearities {
            s.push_str(&format!(
                " f={}{:?} h={}{:?} mu_coeff={} lambda=[{}, {}]x{}",
                nl.f,
                nl.f_params,
                nl.h,
                nl.h_params,
                nl.mu_coeff,
                nl.lambda_min,
                nl.lambda_max,
                nl.lambda_count
            ));
        }
        s
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub const MINIMAL_EXAMPLE: &str = r#"[young]
family = "power"
params = [2.0]

[domain]
dim = 1
omega = [0.0, 1.0]
h = 0.05
collar = 1.0

[fractional]
s = 0.3

[problem]
bc = "dirichlet"
mu = 1.0
"#;
