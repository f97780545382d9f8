//! The full multiplicity pipeline: class membership, hypothesis
//! estimation, threshold sampling, and the deflated multistart search
//! that exhibits three critical points of the perturbed energy.
//!
//! ```bash
//! cargo run --release -p fracg --example three_solutions
//! ```

use fracg::grid::{build_grid, OmegaSpec};
use fracg::modulars::Beta;
use fracg::multiplicity::{
    check_class_a, check_hypotheses, estimate_ricceri, find_critical_points, Nonlinearity,
    Theorem,
};
use fracg::young::YoungFunction;

fn main() -> fracg::Result<()> {
    let domain = build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, 1.0 / 64.0, 0.5, 0.4)?;
    let y = YoungFunction::power(2.0)?;
    let beta = Beta::Constant(1.0);
    let (n, s) = (1, 0.4);

    println!("== admissibility of the example nonlinearities ==");
    for nl in [
        Nonlinearity::sine_power(4.0)?,
        Nonlinearity::sine_young(3.0)?,
        Nonlinearity::concave_convex(4.0, 5.0)?,
        Nonlinearity::piecewise_power(1.5, 4.0)?,
    ] {
        let rep = check_class_a(&nl, &y, n, s);
        let hyp = check_hypotheses(&nl, &y, Theorem::ThreeSolution);
        println!(
            "{:32} class-A certified: {:5}  limit estimates: zero {:+.2e}, infinity {:+.2e}",
            nl.label(),
            rep.certified,
            hyp.limit_zero,
            hyp.limit_infinity
        );
    }

    let pw = Nonlinearity::piecewise_power(1.5, 4.0)?;
    let env = check_hypotheses(&pw, &y, Theorem::GrowthEnvelope);
    println!("\ngrowth-envelope conditions for {}:", pw.label());
    for (name, ok, value) in &env.conditions {
        println!("   {:35} {}  ({value:.4e})", name, if *ok { "PASS" } else { "FAIL" });
    }

    println!("\n== threshold estimation (heuristic sampling) ==");
    let est = estimate_ricceri(&y, &pw, &domain, &beta, 42)?;
    println!(
        "alpha_hat = {:.3e}   beta_hat = {:.6e}   delta_hat = {:.6e}   ({} samples)",
        est.alpha_hat, est.beta_hat, est.delta_hat, est.samples
    );

    println!("\n== lambda sweep with 16 deflated starts each ==");
    let lambdas: Vec<f64> = (0..8)
        .map(|i| 1.1 * est.delta_hat * (10.0f64 / 1.1).powf(i as f64 / 7.0))
        .collect();
    let h_nl = Nonlinearity::zero();
    for &lambda in &lambdas {
        let rep = find_critical_points(
            &y, lambda, 0.0, &pw, &h_nl, &domain, &beta, 16, 1e-3, 1e-8, 42,
        )?;
        print!(
            "lambda = {:<12.4e} critical points: {} (nontrivial {})",
            lambda,
            rep.points.len(),
            rep.points.iter().filter(|p| p.x_norm > 0.0).count()
        );
        let mut psis: Vec<f64> = rep.points.iter().map(|p| p.psi_value).collect();
        psis.sort_by(|a, b| a.partial_cmp(b).unwrap());
        println!("   energies {psis:.4?}");
    }
    Ok(())
}
