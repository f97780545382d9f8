//! Discrete modulars and Luxemburg norms: region monotonicity, the
//! modular–norm sandwich, and the combined space norm.
//!
//! ```bash
//! cargo run --release -p fracg --example luxemburg_norms
//! ```

use fracg::fields;
use fracg::grid::{build_grid, GridFunction, OmegaSpec};
use fracg::modulars::{
    modular_g, modular_sg, norm_lg, seminorm_sg, x_norm, Beta, NodeRegion, PairRegion,
};
use fracg::young::YoungFunction;

fn main() -> fracg::Result<()> {
    let domain = build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, 0.02, 1.0, 0.3)?;
    let y = YoungFunction::power_log(2.0)?;
    let beta = Beta::Constant(1.0);

    println!(
        "grid: {} interior + {} exterior nodes, h = {}, tail estimate {:.3e}",
        domain.interior().len(),
        domain.exterior().len(),
        domain.h,
        domain.truncation_tail()
    );

    let bump = GridFunction::from_fn(&domain, |x, _| {
        if (0.0..=1.0).contains(&x) {
            (std::f64::consts::PI * x).sin().powi(2)
        } else {
            0.0
        }
    });

    println!("\nsmooth bump, all three pair regions:");
    for (name, region) in [
        ("regional", PairRegion::Regional),
        ("star", PairRegion::Star),
        ("full", PairRegion::Full),
    ] {
        println!(
            "   {name:9} modular {:.8e}   seminorm {:.8e}",
            modular_sg(&y, &bump, region),
            seminorm_sg(&y, &bump, region)
        );
    }

    println!("\nmodular–norm sandwich on random data:");
    let mut rng = fields::rng(7, 0);
    for k in 0..5 {
        let amp = 10f64.powf(k as f64 - 2.0);
        let u = fields::random_values(&domain, &mut rng, amp);
        let phi = modular_g(&y, &u, NodeRegion::Interior, None)?;
        let norm = norm_lg(&y, &u);
        println!(
            "   amp {amp:7.0e}: xi-({norm:.3e}) = {:.3e} <= Phi = {phi:.3e} <= xi+({norm:.3e}) = {:.3e}",
            y.xi_minus(norm),
            y.xi_plus(norm)
        );
        assert!(y.xi_minus(norm) <= phi * (1.0 + 1e-8));
        assert!(phi <= y.xi_plus(norm) * (1.0 + 1e-8));
    }

    println!("\ncombined space norm of the bump:");
    println!(
        "   [u]_star = {:.6e}, |u|_G = {:.6e}, |u|_beta = 0 (interior support), total {:.6e}",
        seminorm_sg(&y, &bump, PairRegion::Star),
        norm_lg(&y, &bump),
        x_norm(&y, &bump, &beta)?
    );

    // refinement consistency of the star modular on the fixed bump
    println!("\nself-refinement of the star modular:");
    let mut values = Vec::new();
    for k in 0..3 {
        let h = 0.04 / 2f64.powi(k);
        let d = build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, h, 1.0, 0.3)?;
        let u = GridFunction::from_fn(&d, |x, _| {
            if (0.0..=1.0).contains(&x) {
                (std::f64::consts::PI * x).sin().powi(2)
            } else {
                0.0
            }
        });
        let v = modular_sg(&y, &u, PairRegion::Star);
        println!("   h = {h:<8} star modular = {v:.8e}");
        values.push(v);
    }
    let order = ((values[0] - values[1]).abs() / (values[1] - values[2]).abs()).log2();
    println!("   empirical convergence order {order:.3}");
    Ok(())
}
