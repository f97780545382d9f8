//! Subcommand dispatch and artifact emission.
//!
//! Every subcommand reads the validated [`RunConfig`], runs its piece of
//! the library, prints a human summary, and writes machine-readable
//! artifacts into the output directory. Artifacts are deterministic:
//! identical configuration and seed produce identical bytes. Each file
//! starts with comment lines naming the subcommand, the SHA-256 of the
//! configuration text, and the resolved parameter line.

use crate::config::RunConfig;
use crate::eigen::{self, BoundaryCondition, SolverOptions};
use crate::error::{Error, Result};
use crate::grid::{build_grid, DiscreteDomain, GridFunction};
use crate::multiplicity::{self, Nonlinearity, Theorem};
use crate::operator;
use crate::verify::{self, CheckLine};
use crate::young::YoungFunction;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    CheckYoung,
    VerifyCalculus,
    VerifyOperator,
    Eigen,
    SweepMu,
    Multiplicity,
    Perimeter,
}

impl Subcommand {
    fn name(&self) -> &'static str {
        match self {
            Subcommand::CheckYoung => "check-young",
            Subcommand::VerifyCalculus => "verify-calculus",
            Subcommand::VerifyOperator => "verify-operator",
            Subcommand::Eigen => "eigen",
            Subcommand::SweepMu => "sweep-mu",
            Subcommand::Multiplicity => "multiplicity",
            Subcommand::Perimeter => "perimeter",
        }
    }
}

/// Outcome of one dispatch: whether every invoked assertion held, and
/// the artifacts written.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    pub artifacts: Vec<PathBuf>,
    /// Human-readable description of failed assertions, also written to
    /// `failures.txt` next to the artifacts.
    pub failures: Vec<String>,
}

/// Table writer emitting either CSV or JSON lines, with the config
/// provenance in comment lines (CSV) or a leading meta record (JSON).
struct TableWriter {
    json: bool,
    columns: Vec<&'static str>,
    body: String,
}

impl TableWriter {
    fn new(cfg: &RunConfig, subcommand: &'static str, columns: Vec<&'static str>) -> Self {
        let json = cfg.output.format == "json-lines";
        let mut body = String::new();
        if json {
            let meta = serde_json::json!({
                "subcommand": subcommand,
                "config_sha256": cfg.sha256,
                "resolved": cfg.resolved_line(),
            });
            body.push_str(&meta.to_string());
            body.push('\n');
        } else {
            let _ = writeln!(body, "# fracg {subcommand}");
            let _ = writeln!(body, "# config_sha256 = {}", cfg.sha256);
            let _ = writeln!(body, "# resolved: {}", cfg.resolved_line());
            let _ = writeln!(body, "{}", columns.join(","));
        }
        Self {
            json,
            columns,
            body,
        }
    }

    fn row(&mut self, values: &[RowValue]) {
        assert_eq!(values.len(), self.columns.len());
        if self.json {
            let mut map = serde_json::Map::new();
            for (c, v) in self.columns.iter().zip(values) {
                map.insert((*c).to_string(), v.to_json());
            }
            self.body.push_str(&serde_json::Value::Object(map).to_string());
            self.body.push('\n');
        } else {
            let line: Vec<String> = values.iter().map(|v| v.to_csv()).collect();
            let _ = writeln!(self.body, "{}", line.join(","));
        }
    }

    fn comment(&mut self, text: &str) {
        if self.json {
            let meta = serde_json::json!({ "note": text });
            self.body.push_str(&meta.to_string());
            self.body.push('\n');
        } else {
            let _ = writeln!(self.body, "# {text}");
        }
    }

    fn write(self, dir: &Path, stem: &str) -> Result<PathBuf> {
        let ext = if self.json { "jsonl" } else { "csv" };
        let path = dir.join(format!("{stem}.{ext}"));
        std::fs::write(&path, self.body.as_bytes())?;
        Ok(path)
    }
}

enum RowValue {
    Str(String),
    Num(f64),
    Int(i64),
    Bool(bool),
}

impl RowValue {
    fn to_csv(&self) -> String {
        match self {
            RowValue::Str(s) => s.clone(),
            RowValue::Num(x) => format!("{x:.12e}"),
            RowValue::Int(i) => i.to_string(),
            RowValue::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            RowValue::Str(s) => serde_json::Value::String(s.clone()),
            RowValue::Num(x) => serde_json::json!(x),
            RowValue::Int(i) => serde_json::json!(i),
            RowValue::Bool(b) => serde_json::json!(b),
        }
    }
}

fn young_of(cfg: &RunConfig) -> Result<YoungFunction> {
    YoungFunction::make(&cfg.young.family, &cfg.young.params)
}

fn domain_of(cfg: &RunConfig) -> Result<Arc<DiscreteDomain>> {
    build_grid(cfg.omega_spec(), cfg.domain.h, cfg.domain.collar, cfg.s)
}

fn solver_opts(cfg: &RunConfig) -> SolverOptions {
    SolverOptions {
        tol: cfg.solver.tol,
        max_iter: cfg.solver.max_iter,
        n_starts: cfg.solver.starts,
        seed: cfg.solver.seed,
    }
}

fn bc_list(cfg: &RunConfig) -> Result<Vec<BoundaryCondition>> {
    let p = cfg
        .problem
        .as_ref()
        .ok_or(Error::MissingSection("problem"))?;
    let beta = cfg.beta();
    Ok(match p.bc.as_str() {
        "dirichlet" => vec![BoundaryCondition::Dirichlet],
        "neumann" => vec![BoundaryCondition::Neumann],
        "regional" => vec![BoundaryCondition::RegionalNeumann],
        "robin" => vec![BoundaryCondition::Robin(beta)],
        _ => vec![
            BoundaryCondition::RegionalNeumann,
            BoundaryCondition::Neumann,
            BoundaryCondition::Robin(beta),
            BoundaryCondition::Dirichlet,
        ],
    })
}

fn battery_table(
    cfg: &RunConfig,
    subcommand: &'static str,
    lines: &[CheckLine],
) -> TableWriter {
    let mut t = TableWriter::new(
        cfg,
        subcommand,
        vec!["check", "samples", "violations", "worst_margin", "pass"],
    );
    for l in lines {
        t.row(&[
            RowValue::Str(l.name.clone()),
            RowValue::Int(l.samples as i64),
            RowValue::Int(l.violations as i64),
            RowValue::Num(l.worst_margin),
            RowValue::Bool(l.pass),
        ]);
    }
    t
}

fn print_battery(lines: &[CheckLine]) {
    for l in lines {
        println!(
            "{:60} {:>7} samples {:>5} violations  worst {:+.3e}  {}",
            l.name,
            l.samples,
            l.violations,
            l.worst_margin,
            if l.pass { "PASS" } else { "FAIL" }
        );
    }
}

/// Runs one subcommand against a validated configuration.
pub fn dispatch(cfg: &RunConfig, cmd: Subcommand) -> Result<Outcome> {
    let dir = PathBuf::from(&cfg.output.dir);
    std::fs::create_dir_all(&dir)?;
    let mut artifacts = Vec::new();
    let mut failures: Vec<String> = Vec::new();

    match cmd {
        Subcommand::CheckYoung => {
            let y = young_of(cfg)?;
            let rep = y.check_structure(cfg.domain.dim, cfg.s);
            print!("{rep}");
            let txt = dir.join("check_young.txt");
            std::fs::write(&txt, format!("{rep}"))?;
            artifacts.push(txt);
            let json = dir.join("check_young.json");
            std::fs::write(&json, serde_json::to_string_pretty(&rep).unwrap())?;
            artifacts.push(json);
            if !(rep.g1_holds && rep.g2_holds && rep.g3_holds) {
                failures.push(format!(
                    "structure: g1={} g2={} g3={}",
                    rep.g1_holds, rep.g2_holds, rep.g3_holds
                ));
            }
        }

        Subcommand::VerifyCalculus => {
            let y = young_of(cfg)?;
            let domain = domain_of(cfg)?;
            let n = cfg.solver.samples;
            let mut lines = verify::young_battery(&y, n, 1e-10, cfg.solver.seed)?;
            lines.extend(verify::modular_battery(
                &y,
                &domain,
                (n / 10).max(50),
                1e-8,
                cfg.solver.seed,
            )?);
            print_battery(&lines);
            for l in &lines {
                if !l.pass {
                    failures.push(format!("{} ({} violations)", l.name, l.violations));
                }
            }
            artifacts.push(battery_table(cfg, "verify-calculus", &lines).write(&dir, "verify_calculus")?);
        }

        Subcommand::VerifyOperator => {
            let y = young_of(cfg)?;
            let domain = domain_of(cfg)?;
            let n = (cfg.solver.samples / 100).clamp(10, 200);
            let lines = verify::operator_battery(&y, &domain, n, 1e-12, cfg.solver.seed)?;
            print_battery(&lines);
            for l in &lines {
                if !l.pass {
                    failures.push(format!("{} ({} violations)", l.name, l.violations));
                }
            }
            artifacts.push(battery_table(cfg, "verify-operator", &lines).write(&dir, "verify_operator")?);
        }

        Subcommand::Eigen => {
            let y = young_of(cfg)?;
            let domain = domain_of(cfg)?;
            let p = cfg
                .problem
                .as_ref()
                .ok_or(Error::MissingSection("problem"))?;
            let opts = solver_opts(cfg);
            let bcs = bc_list(cfg)?;
            let mut results = Vec::new();
            let mut table = TableWriter::new(
                cfg,
                "eigen",
                vec!["bc", "mu", "Lambda", "lambda", "residual", "iters"],
            );
            for bc in &bcs {
                let r = eigen::solve_min(&y, bc, p.mu, &domain, &opts)?;
                println!(
                    "{:10} mu={:<8} Lambda={:<20} lambda={:<20} residual={:<10.3e} iters={} {}",
                    r.bc,
                    r.mu,
                    r.capital_lambda,
                    r.lambda,
                    r.stationarity_residual,
                    r.iterations,
                    if r.converged { "converged" } else { "NOT CONVERGED" }
                );
                println!(
                    "{:10} sign stats (pos, neg, zero) = {:?}, lambda_pair = {}",
                    "", r.sign_stats, r.lambda_pair
                );
                if !r.converged {
                    failures.push(format!(
                        "{}: residual {} above tol {}",
                        r.bc, r.stationarity_residual, opts.tol
                    ));
                }
                table.row(&[
                    RowValue::Str(r.bc.clone()),
                    RowValue::Num(r.mu),
                    RowValue::Num(r.capital_lambda),
                    RowValue::Num(r.lambda),
                    RowValue::Num(r.stationarity_residual),
                    RowValue::Int(r.iterations as i64),
                ]);
                artifacts.push(write_field(cfg, &dir, &format!("eigen_u_{}", r.bc), &r.u)?);
                results.push(r);
            }
            artifacts.push(table.write(&dir, "eigen")?);

            if results.len() == 4 {
                let set = eigen::BcSet {
                    regional: results[0].clone(),
                    neumann: results[1].clone(),
                    robin: results[2].clone(),
                    dirichlet: results[3].clone(),
                };
                match eigen::verify_order(&y, &set, 1e-4, 1e-6) {
                    Ok(rep) => {
                        for (na,(a, nb), b) in
                            rep.chain.iter().map(|(na, a, nb, b)| (na, (a, nb), b))
                        {
                            println!("ordering: Lambda_{na} = {a} <= Lambda_{nb} = {b}");
                        }
                    }
                    Err(e) => failures.push(format!("ordering: {e}")),
                }
            }
        }

        Subcommand::SweepMu => {
            let y = young_of(cfg)?;
            let domain = domain_of(cfg)?;
            let p = cfg
                .problem
                .as_ref()
                .ok_or(Error::MissingSection("problem"))?;
            let mu_list = if p.mu_list.is_empty() {
                vec![1e-2, 1e-1, 1.0, 1e1, 1e2]
            } else {
                p.mu_list.clone()
            };
            let mut table = TableWriter::new(
                cfg,
                "sweep-mu",
                vec!["bc", "mu", "Lambda", "lambda", "residual", "converged"],
            );
            for bc in bc_list(cfg)? {
                let rep = eigen::mu_sweep(&y, &bc, &mu_list, &domain, &solver_opts(cfg))?;
                for row in &rep.rows {
                    println!(
                        "{:10} mu={:<10.3e} Lambda={:<20} lambda={:<20} residual={:.3e} {}",
                        bc.tag(),
                        row.mu,
                        row.capital_lambda,
                        row.lambda,
                        row.residual,
                        if row.converged { "converged" } else { "NOT CONVERGED" }
                    );
                    if row.capital_lambda < 1.0 {
                        failures.push(format!(
                            "{}: Lambda(mu={}) = {} < 1",
                            bc.tag(),
                            row.mu,
                            row.capital_lambda
                        ));
                    }
                    if !row.converged {
                        failures.push(format!("{}: mu={} not converged", bc.tag(), row.mu));
                    }
                    table.row(&[
                        RowValue::Str(bc.tag().into()),
                        RowValue::Num(row.mu),
                        RowValue::Num(row.capital_lambda),
                        RowValue::Num(row.lambda),
                        RowValue::Num(row.residual),
                        RowValue::Bool(row.converged),
                    ]);
                }
                table.comment(&format!(
                    "{}: min_Lambda = {:.12e}, jensen_diameter_lower_bound = {:.12e}",
                    bc.tag(),
                    rep.min_lambda,
                    rep.lower_bound
                ));
                println!(
                    "{}: min Lambda over sweep {} (constructive lower bound {:.3e})",
                    bc.tag(),
                    rep.min_lambda,
                    rep.lower_bound
                );
            }
            artifacts.push(table.write(&dir, "sweep_mu")?);
        }

        Subcommand::Multiplicity => {
            let y = young_of(cfg)?;
            let domain = domain_of(cfg)?;
            let nlc = cfg
                .nonlinearities
                .as_ref()
                .ok_or(Error::MissingSection("nonlinearities"))?;
            let f_nl = Nonlinearity::make(&nlc.f, &nlc.f_params)?;
            let h_nl = Nonlinearity::make(&nlc.h, &nlc.h_params)?;
            let beta = cfg.beta();

            let class_a = multiplicity::check_class_a(&f_nl, &y, cfg.domain.dim, cfg.s);
            println!(
                "class A: certified={} growth_ok={} worst_margin={:.3e} at t={:.3e}",
                class_a.certified, class_a.growth_ok, class_a.worst_margin, class_a.worst_t
            );
            let hyp = multiplicity::check_hypotheses(&f_nl, &y, Theorem::ThreeSolution);
            println!(
                "limit estimates: near zero {:.3e}, at infinity {:.3e}, witness F = {:.3e}",
                hyp.limit_zero, hyp.limit_infinity, hyp.witness_value
            );

            let est = multiplicity::estimate_ricceri(&y, &f_nl, &domain, &beta, cfg.solver.seed)?;
            println!(
                "threshold estimates (heuristic): alpha_hat={:.3e} beta_hat={:.3e} delta_hat={:.3e} ({} samples)",
                est.alpha_hat, est.beta_hat, est.delta_hat, est.samples
            );

            let (lo, hi) = if nlc.lambda_min > 0.0 && nlc.lambda_max > nlc.lambda_min {
                (nlc.lambda_min, nlc.lambda_max)
            } else {
                (1.1 * est.delta_hat, 10.0 * est.delta_hat)
            };
            let lambdas: Vec<f64> = (0..nlc.lambda_count)
                .map(|i| {
                    lo * (hi / lo).powf(i as f64 / (nlc.lambda_count.max(2) - 1) as f64)
                })
                .collect();

            let mut points = TableWriter::new(
                cfg,
                "multiplicity",
                vec!["lambda", "mu", "psi", "residual", "x_norm"],
            );
            let mut summary = TableWriter::new(
                cfg,
                "multiplicity",
                vec![
                    "lambda",
                    "n_points",
                    "n_nontrivial",
                    "max_x_norm",
                    "rejected_duplicates",
                    "failed",
                ],
            );
            let mut best_count = 0usize;
            for &lambda in &lambdas {
                let rep = multiplicity::find_critical_points(
                    &y,
                    lambda,
                    nlc.mu_coeff,
                    &f_nl,
                    &h_nl,
                    &domain,
                    &beta,
                    cfg.solver.starts,
                    cfg.solver.separation,
                    1e-8,
                    cfg.solver.seed,
                )?;
                let nontrivial = rep.points.iter().filter(|p| p.x_norm > 0.0).count();
                let max_norm = rep.points.iter().fold(0.0f64, |m, p| m.max(p.x_norm));
                println!(
                    "lambda={:<12.4e} points={} nontrivial={} max|u|_X={:.4e} (dups {}, failed {})",
                    lambda,
                    rep.points.len(),
                    nontrivial,
                    max_norm,
                    rep.rejected_duplicates,
                    rep.failed
                );
                best_count = best_count.max(rep.points.len());
                for p in &rep.points {
                    points.row(&[
                        RowValue::Num(lambda),
                        RowValue::Num(nlc.mu_coeff),
                        RowValue::Num(p.psi_value),
                        RowValue::Num(p.gradient_residual),
                        RowValue::Num(p.x_norm),
                    ]);
                }
                summary.row(&[
                    RowValue::Num(lambda),
                    RowValue::Int(rep.points.len() as i64),
                    RowValue::Int(nontrivial as i64),
                    RowValue::Num(max_norm),
                    RowValue::Int(rep.rejected_duplicates as i64),
                    RowValue::Int(rep.failed as i64),
                ]);
            }
            println!("best count over the sweep: {best_count}");
            artifacts.push(points.write(&dir, "multiplicity_points")?);
            artifacts.push(summary.write(&dir, "multiplicity_summary")?);
        }

        Subcommand::Perimeter => {
            let y = young_of(cfg)?;
            let domain = domain_of(cfg)?;
            let p = operator::perimeter(&y, &domain);
            println!(
                "perimeter = {:.12e} (collar truncation tail estimate {:.3e})",
                p.value, p.truncation_tail
            );
            let mut table =
                TableWriter::new(cfg, "perimeter", vec!["value", "truncation_tail"]);
            table.row(&[RowValue::Num(p.value), RowValue::Num(p.truncation_tail)]);
            artifacts.push(table.write(&dir, "perimeter")?);
        }
    }

    let passed = failures.is_empty();
    if !passed {
        let manifest = dir.join("failures.txt");
        std::fs::write(&manifest, failures.join("\n") + "\n")?;
        artifacts.push(manifest);
        let json = dir.join("failures.json");
        std::fs::write(
            &json,
            serde_json::to_string_pretty(&serde_json::json!({
                "subcommand": cmd.name(),
                "config_sha256": cfg.sha256,
                "failures": failures,
            }))
            .unwrap(),
        )?;
        artifacts.push(json);
    }
    Ok(Outcome {
        passed,
        artifacts,
        failures,
    })
}

/// Writes a node-value table of one grid function for plotting.
fn write_field(
    cfg: &RunConfig,
    dir: &Path,
    stem: &str,
    u: &GridFunction,
) -> Result<PathBuf> {
    let d = u.domain();
    let mut table = TableWriter::new(cfg, "field", vec!["node", "x", "y", "region", "u"]);
    for i in 0..d.node_count() {
        let c = d.coord(i);
        table.row(&[
            RowValue::Int(i as i64),
            RowValue::Num(c[0]),
            RowValue::Num(c[1]),
            RowValue::Str(
                match d.region(i) {
                    crate::grid::Region::Interior => "interior",
                    crate::grid::Region::Exterior => "exterior",
                }
                .into(),
            ),
            RowValue::Num(u.at(i)),
        ]);
    }
    table.write(dir, stem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn tmpdir(tag: &str) -> String {
        let d = std::env::temp_dir().join(format!("fracg-cli-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&d);
        std::fs::create_dir_all(&d).unwrap();
        d.to_string_lossy().into_owned()
    }

    fn small_config(dir: &str) -> RunConfig {
        let text = format!(
            r#"[young]
family = "power"
params = [2.0]

[domain]
omega = [0.0, 1.0]
h = 0.1
collar = 0.5

[fractional]
s = 0.3

[problem]
bc = "all"
mu = 1.0

[solver]
samples = 500
tol = 1e-8

[output]
dir = "{dir}"
"#
        );
        parse_config(&text).unwrap()
    }

    #[test]
    fn verify_calculus_passes_and_writes() {
        let dir = tmpdir("calculus");
        let cfg = small_config(&dir);
        let out = dispatch(&cfg, Subcommand::VerifyCalculus).unwrap();
        assert!(out.passed, "{:?}", out.failures);
        assert!(out.artifacts.iter().any(|p| p.ends_with("verify_calculus.csv")));
    }

    #[test]
    fn eigen_all_writes_four_rows_and_field_tables() {
        let dir = tmpdir("eigen");
        let cfg = small_config(&dir);
        let out = dispatch(&cfg, Subcommand::Eigen).unwrap();
        assert!(out.passed, "{:?}", out.failures);
        let csv = std::fs::read_to_string(PathBuf::from(&dir).join("eigen.csv")).unwrap();
        let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows.len(), 5, "header + 4 bc rows:\n{csv}");
        for bc in ["regional", "neumann", "robin", "dirichlet"] {
            assert!(PathBuf::from(&dir).join(format!("eigen_u_{bc}.csv")).exists());
        }
    }

    #[test]
    fn multiplicity_without_section_is_missing_section() {
        let dir = tmpdir("missing");
        let cfg = small_config(&dir);
        match dispatch(&cfg, Subcommand::Multiplicity) {
            Err(Error::MissingSection(s)) => assert_eq!(s, "nonlinearities"),
            other => panic!("expected MissingSection, got {other:?}"),
        }
    }

    #[test]
    fn artifacts_are_bitwise_reproducible() {
        let dir = tmpdir("repro");
        let cfg = small_config(&dir);
        dispatch(&cfg, Subcommand::VerifyOperator).unwrap();
        let first = std::fs::read(PathBuf::from(&dir).join("verify_operator.csv")).unwrap();
        dispatch(&cfg, Subcommand::VerifyOperator).unwrap();
        let second = std::fs::read(PathBuf::from(&dir).join("verify_operator.csv")).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn json_lines_format_is_available() {
        let dir = tmpdir("jsonl");
        let mut cfg = small_config(&dir);
        cfg.output.format = "json-lines".into();
        let out = dispatch(&cfg, Subcommand::Perimeter).unwrap();
        assert!(out.passed);
        let path = PathBuf::from(&dir).join("perimeter.jsonl");
        let text = std::fs::read_to_string(path).unwrap();
        let mut lines = text.lines();
        let meta: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
        assert_eq!(meta["subcommand"], "perimeter");
        let row: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
        assert!(row["value"].as_f64().unwrap() > 0.0);
    }
}
