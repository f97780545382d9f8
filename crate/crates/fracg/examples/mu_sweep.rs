//! Constraint-level sweep: the quotient stays above 1 uniformly in μ,
//! exactly flat for homogeneous kernels and μ-dependent otherwise.
//!
//! ```bash
//! cargo run --release -p fracg --example mu_sweep
//! ```

use fracg::eigen::{mu_sweep, BoundaryCondition, SolverOptions};
use fracg::grid::{build_grid, OmegaSpec};
use fracg::young::YoungFunction;

fn main() -> fracg::Result<()> {
    let domain = build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, 1.0 / 32.0, 0.5, 0.3)?;
    let opts = SolverOptions {
        tol: 1e-8,
        ..Default::default()
    };
    let mu_list = [1e-2, 1e-1, 1.0, 1e1, 1e2];

    for y in [YoungFunction::power(2.0)?, YoungFunction::power_log(2.0)?] {
        println!("== {} (Dirichlet) ==", y.label());
        let rep = mu_sweep(&y, &BoundaryCondition::Dirichlet, &mu_list, &domain, &opts)?;
        for row in &rep.rows {
            println!(
                "   mu = {:<8.0e} Lambda = {:<22} lambda = {:<22} residual {:.2e}",
                row.mu, row.capital_lambda, row.lambda, row.residual
            );
        }
        println!(
            "   min Lambda = {} (Jensen/diameter lower bound {:.3e})",
            rep.min_lambda, rep.lower_bound
        );
        if y.is_power() {
            let base = rep.rows[0].capital_lambda;
            let spread = rep
                .rows
                .iter()
                .map(|r| (r.capital_lambda - base).abs() / base)
                .fold(0.0f64, f64::max);
            println!("   homogeneous case: relative spread across mu = {spread:.2e}");
        }
        println!();
    }
    Ok(())
}
