//! Builds the critical embedding function `G*` by quadrature and
//! inversion, checks its power-case growth rate, and certifies envelope
//! domination for admissible nonlinearities.
//!
//! ```bash
//! cargo run --release -p fracg --example critical_function
//! ```

use fracg::young::{essentially_stronger, YoungFunction};

fn main() -> fracg::Result<()> {
    // Power case: for G = t²/2 in dimension 1 with s = 0.25 the critical
    // function grows like t^{np/(n-sp)} = t⁴.
    let g = YoungFunction::power(2.0)?;
    let star = g.critical_sobolev(1, 0.25)?;
    let slope = (star.value(1e4).ln() - star.value(1e2).ln()) / ((1e4f64).ln() - (1e2f64).ln());
    println!("critical function of t^2/2 (n=1, s=0.25):");
    println!("   log-log slope over [1e2, 1e4] = {slope:.6} (expected 4)");
    println!("   sampled indices = ({:.4}, {:.4})", star.p_minus(), star.p_plus());

    // At s = 0.5 the borderline integral diverges.
    match g.critical_sobolev(1, 0.5) {
        Err(e) => println!("   s = 0.5 is rejected: {e}"),
        Ok(_) => println!("   unexpected: s = 0.5 accepted"),
    }

    // Envelope domination: a subcritical power is essentially dominated
    // by G*, the critical-growth envelope is not.
    let wide = g.critical_sobolev(1, 0.4)?;
    println!("\nenvelope checks against the critical function (s = 0.4):");
    for q in [2.0, 3.0, 5.0] {
        let m = YoungFunction::power(q)?;
        let rep = essentially_stronger(&m, &wide)?;
        println!("   t^{q} << G*: {}", rep.holds);
    }

    // The log-perturbed family also has a critical function.
    let gl = YoungFunction::power_log(2.0)?;
    let star_l = gl.critical_sobolev(1, 0.25)?;
    println!(
        "\ncritical function of t^2 ln(1+t) (n=1, s=0.25): indices ({:.4}, {:.4})",
        star_l.p_minus(),
        star_l.p_plus()
    );
    for t in [1e-2, 1.0, 1e2, 1e4] {
        println!("   G*({t:.0e}) = {:.6e}", star_l.value(t));
    }
    Ok(())
}
