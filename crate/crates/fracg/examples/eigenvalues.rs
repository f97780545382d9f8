//! Constrained quotient minimization for the four boundary structures,
//! the ordering chain, and the eigenvalue/minimizer sandwich.
//!
//! ```bash
//! cargo run --release -p fracg --example eigenvalues
//! ```

use fracg::eigen::{dense_oracle, solve_min, verify_order, BcSet, BoundaryCondition, SolverOptions};
use fracg::grid::{build_grid, OmegaSpec};
use fracg::modulars::Beta;
use fracg::young::YoungFunction;

fn main() -> fracg::Result<()> {
    let domain = build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, 1.0 / 48.0, 0.5, 0.3)?;
    let opts = SolverOptions {
        tol: 1e-8,
        ..Default::default()
    };
    let beta = Beta::Constant(1.0);

    for y in [YoungFunction::power(2.0)?, YoungFunction::power_log(2.0)?] {
        println!("== {} at level mu = 1 ==", y.label());
        let mut results = Vec::new();
        for bc in [
            BoundaryCondition::RegionalNeumann,
            BoundaryCondition::Neumann,
            BoundaryCondition::Robin(beta.clone()),
            BoundaryCondition::Dirichlet,
        ] {
            let r = solve_min(&y, &bc, 1.0, &domain, &opts)?;
            println!(
                "   {:10} Lambda = {:<20} lambda = {:<20} residual {:.2e} ({} iters, signs {:?})",
                r.bc, r.capital_lambda, r.lambda, r.stationarity_residual, r.iterations, r.sign_stats
            );
            results.push(r);
        }

        let set = BcSet {
            regional: results[0].clone(),
            neumann: results[1].clone(),
            robin: results[2].clone(),
            dirichlet: results[3].clone(),
        };
        let rep = verify_order(&y, &set, 1e-4, 1e-6)?;
        println!("   ordering chain verified:");
        for (na, a, nb, b) in &rep.chain {
            println!("      Lambda_{na} = {a:.10} <= Lambda_{nb} = {b:.10}");
        }
        println!("   eigenvalue sandwich (p-/p+) Lambda <= lambda <= (p+/p-) Lambda:");
        for (name, lo, lam, hi) in &rep.sandwich {
            println!("      {name:10} {lo:.6} <= {lam:.6} <= {hi:.6}");
        }
        if y.is_power() {
            // homogeneous case: the quadratic pencil gives an external check
            let (q, _) = dense_oracle(&y, &domain, &BoundaryCondition::Dirichlet)
                .expect("quadratic oracle available");
            println!(
                "   dense pencil check (Dirichlet): solver {} vs oracle {}",
                set.dirichlet.capital_lambda,
                1.0 + q
            );
        }
        println!();
    }
    Ok(())
}
