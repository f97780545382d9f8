//! Young-function calculus tour: families, indices, structure reports,
//! conjugates, and the pointwise inequality battery.
//!
//! ```bash
//! cargo run --release -p fracg --example young_calculus
//! ```

use fracg::verify::young_battery;
use fracg::young::{essentially_stronger, YoungFunction, DEFAULT_INDEX_GRID};

fn main() -> fracg::Result<()> {
    let families = [
        YoungFunction::power(2.0)?,
        YoungFunction::power(3.0)?,
        YoungFunction::power_log(2.0)?,
        YoungFunction::sum_of_powers(&[2.0, 4.0])?,
        YoungFunction::piecewise_power(1.5, 4.0)?,
    ];

    println!("== Simonenko indices (stored vs sampled) ==");
    for y in &families {
        let est = y.compute_indices(&DEFAULT_INDEX_GRID)?;
        println!(
            "{:32} stored ({}, {})  sampled ({:.6}, {:.6})  slack {:.1e}",
            y.label(),
            y.p_minus(),
            y.p_plus(),
            est.grid_inf,
            est.grid_sup,
            est.slack
        );
    }

    println!("\n== structure reports (n = 1, s = 0.25) ==");
    for y in &families {
        let rep = y.check_structure(1, 0.25);
        println!(
            "{:32} g1={} g2={} g3={} doubling constant {}",
            y.label(),
            rep.g1_holds,
            rep.g2_holds,
            rep.g3_holds,
            rep.delta2_constant
        );
    }

    println!("\n== conjugates ==");
    let square = &families[0];
    let conj = square.complementary()?;
    println!("conjugate of t^2/2 at 3 = {} (self-dual: 4.5)", conj.value(3.0));
    let cubic = YoungFunction::power(3.0)?;
    println!(
        "conjugate of t^3/3 at 1 = {} (t^{{3/2}}/(3/2): {})",
        cubic.complementary()?.value(1.0),
        2.0 / 3.0
    );

    println!("\n== essential domination ==");
    let t2 = YoungFunction::power(2.0)?;
    let t3 = YoungFunction::power(3.0)?;
    for (a, b) in [(&t2, &t3), (&t3, &t2)] {
        let rep = essentially_stronger(a, b)?;
        println!("{} << {} : {}", a.label(), b.label(), rep.holds);
        for th in &rep.thresholds {
            match th.threshold {
                Some(x) => println!("   a = {:<5} holds for x >= {:.3e}", th.a, x),
                None => println!("   a = {:<5} fails persistently", th.a),
            }
        }
    }

    println!("\n== inequality battery (10^4 samples per family) ==");
    let mut all_pass = true;
    for y in &families {
        println!("{}:", y.label());
        for line in young_battery(y, 10_000, 1e-10, 42)? {
            println!(
                "   {:55} {:>5} violations  worst {:+.2e}  {}",
                line.name,
                line.violations,
                line.worst_margin,
                if line.pass { "PASS" } else { "FAIL" }
            );
            all_pass &= line.pass;
        }
    }
    assert!(all_pass, "battery violations found");
    Ok(())
}
