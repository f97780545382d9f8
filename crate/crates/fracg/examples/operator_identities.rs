//! The discrete fractional g-Laplacian and its exact identities:
//! divergence theorem, integration by parts, pairing/modular
//! consistency, and the fractional perimeter.
//!
//! ```bash
//! cargo run --release -p fracg --example operator_identities
//! ```

use fracg::fields;
use fracg::grid::{build_grid, OmegaSpec};
use fracg::operator::{
    apply_operator, interior_cancellation, normal_derivative, pairing, perimeter, OperatorKind,
    PairingKind,
};
use fracg::verify::operator_battery;
use fracg::young::YoungFunction;

fn main() -> fracg::Result<()> {
    let domain = build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, 0.02, 0.5, 0.3)?;
    let y = YoungFunction::power_log(2.0)?;
    let w = domain.cell_weight();

    let mut rng = fields::rng(3, 0);
    let u = fields::random_smooth(&domain, &mut rng);
    let v = fields::random_smooth(&domain, &mut rng);

    let a = apply_operator(&y, &u, OperatorKind::Full);
    let nd = normal_derivative(&y, &u);

    let interior_sum: f64 = domain.interior().iter().map(|&i| a.at(i) * w).sum();
    let exterior_sum: f64 = domain.exterior().iter().map(|&i| nd.at(i) * w).sum();
    println!("divergence identity:");
    println!("   sum over interior of the operator   = {interior_sum:+.15e}");
    println!("   sum over exterior of the derivative = {exterior_sum:+.15e}");
    println!("   defect = {:+.3e}", interior_sum + exterior_sum);

    let star = pairing(&y, &u, &v, PairingKind::Star);
    let rhs: f64 = domain
        .interior()
        .iter()
        .map(|&i| v.at(i) * a.at(i) * w)
        .sum::<f64>()
        + domain
            .exterior()
            .iter()
            .map(|&i| v.at(i) * nd.at(i) * w)
            .sum::<f64>();
    println!("\nintegration by parts:");
    println!("   star pairing      = {star:+.15e}");
    println!("   node-sum identity = {rhs:+.15e}");
    println!("   relative defect   = {:.3e}", ((star - rhs) / star).abs());

    println!(
        "\ninterior antisymmetric cancellation (pairwise sum): {:+.1e}",
        interior_cancellation(&y, &u)
    );

    println!("\nregional vs star vs full self-pairings:");
    println!("   regional = {:.8e}", pairing(&y, &u, &u, PairingKind::Regional));
    println!("   star     = {:.8e}", pairing(&y, &u, &u, PairingKind::Star));
    println!("   full     = {:.8e}", pairing(&y, &u, &u, PairingKind::Full));

    let quad = YoungFunction::power(2.0)?;
    let p = perimeter(&quad, &domain);
    println!(
        "\nfractional perimeter (quadratic kernel): {:.10e} (tail estimate {:.3e})",
        p.value, p.truncation_tail
    );

    println!("\nidentity battery over 25 random pairs at 1e-12:");
    let mut all = true;
    for line in operator_battery(&y, &domain, 25, 1e-12, 11)? {
        println!(
            "   {:50} {:>4} violations  {}",
            line.name,
            line.violations,
            if line.pass { "PASS" } else { "FAIL" }
        );
        all &= line.pass;
    }
    assert!(all);
    Ok(())
}
