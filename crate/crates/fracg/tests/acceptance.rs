//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test -p fracg --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use fracg::eigen::{self, BoundaryCondition, SolverOptions};
use fracg::fields;
use fracg::grid::{build_grid, DiscreteDomain, GridFunction, OmegaSpec};
use fracg::modulars::{modular_g, modular_sg, x_norm, Beta, NodeRegion, PairRegion};
use fracg::multiplicity::{self, Nonlinearity, Theorem};
use fracg::operator::{apply_operator, perimeter, OperatorKind};
use fracg::verify;
use fracg::young::YoungFunction;
use std::sync::Arc;

fn interval(h: f64, collar: f64, s: f64) -> Arc<DiscreteDomain> {
    build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, h, collar, s).unwrap()
}

fn families() -> Vec<YoungFunction> {
    vec![
        YoungFunction::power(2.0).unwrap(),
        YoungFunction::power(3.0).unwrap(),
        YoungFunction::power_log(2.0).unwrap(),
    ]
}

/// 1. Pointwise Young-function inequalities: zero violations over 10^4
///    random samples per family at 1e-10 relative slack.
#[test]
fn criterion_01_young_inequality_battery() {
    for y in families() {
        let lines = verify::young_battery(&y, 10_000, 1e-10, 42).unwrap();
        for l in &lines {
            assert_eq!(
                l.violations, 0,
                "{}: {} has {} violations (worst {:e})",
                y.label(),
                l.name,
                l.violations,
                l.worst_margin
            );
        }
    }
    println!("ACCEPTANCE 01 young-inequality battery: PASS");
}

/// 2. Modular–norm sandwich and Luxemburg roundtrip on 10^3 random grid
///    functions per family, 1e-8 slack.
#[test]
fn criterion_02_modular_norm_sandwich() {
    let domain = interval(0.05, 0.5, 0.3);
    for y in families() {
        let lines = verify::modular_battery(&y, &domain, 1000, 1e-8, 7).unwrap();
        for l in &lines {
            assert_eq!(
                l.violations, 0,
                "{}: {} has {} violations (worst {:e})",
                y.label(),
                l.name,
                l.violations,
                l.worst_margin
            );
        }
    }
    println!("ACCEPTANCE 02 modular-norm sandwich: PASS");
}

/// 3. Divergence and integration-by-parts identities to 1e-12 relative
///    on 100 random pairs per grid; interior cancellation exactly zero.
#[test]
fn criterion_03_divergence_and_integration_by_parts() {
    let grids: Vec<Arc<DiscreteDomain>> = vec![
        interval(0.05, 0.5, 0.3),
        interval(1.0 / 40.0, 0.5, 0.7),
        build_grid(
            OmegaSpec::Box2 {
                x: (0.0, 1.0),
                y: (0.0, 1.0),
            },
            0.125,
            0.25,
            0.4,
        )
        .unwrap(),
    ];
    for domain in &grids {
        for y in [
            YoungFunction::power(2.0).unwrap(),
            YoungFunction::power_log(2.0).unwrap(),
        ] {
            let lines = verify::operator_battery(&y, domain, 100, 1e-12, 3).unwrap();
            for l in &lines {
                assert_eq!(
                    l.violations,
                    0,
                    "{} on {}d grid: {} violated (worst {:e})",
                    y.label(),
                    domain.dim(),
                    l.name,
                    l.worst_margin
                );
            }
        }
    }
    println!("ACCEPTANCE 03 divergence / integration-by-parts: PASS");
}

/// 4. Quadratic-case oracle equivalence: the dense assembly reproduces
///    the matrix-free operator to 1e-12, and the minimized Dirichlet
///    quotient matches the dense pencil within 1%.
#[test]
fn criterion_04_dense_oracle_equivalence() {
    let s = 0.3;
    let domain = interval(1.0 / 128.0, 0.5, s);
    let y = YoungFunction::power(2.0).unwrap();
    let n = domain.node_count();
    let h = domain.cell_weight();

    // independent dense assembly straight from node coordinates
    let weight = |i: usize, j: usize| -> f64 {
        let r = domain.distance(i, j);
        r.powf(-(1.0 + 2.0 * s))
    };
    let mut rng = fields::rng(4, 0);
    let u = fields::random_values(&domain, &mut rng, 1.0);
    let a = apply_operator(&y, &u, OperatorKind::Full);
    for &i in domain.interior() {
        let mut acc = 0.0;
        for j in 0..n {
            if j != i {
                acc += 2.0 * (u.at(i) - u.at(j)) * weight(i, j) * h;
            }
        }
        assert!(
            (a.at(i) - acc).abs() <= 1e-12 * acc.abs().max(1e-6),
            "operator mismatch at node {i}: {} vs {}",
            a.at(i),
            acc
        );
    }

    // dense pencil for the Dirichlet quotient: interior block of the
    // seminorm Laplacian (full diagonal) against the mass h/2
    let interior = domain.interior();
    let ni = interior.len();
    assert_eq!(ni, 128);
    let mut l = nalgebra::DMatrix::<f64>::zeros(ni, ni);
    for (r, &i) in interior.iter().enumerate() {
        let mut diag = 0.0;
        for j in 0..n {
            if j != i {
                diag += h * h * weight(i, j);
            }
        }
        l[(r, r)] = diag;
        for (c, &j) in interior.iter().enumerate() {
            if c != r {
                l[(r, c)] = -h * h * weight(i, j);
            }
        }
    }
    let eig = l.symmetric_eigen();
    let lam_min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let oracle = 1.0 + lam_min / (0.5 * h);

    let opts = SolverOptions {
        tol: 1e-9,
        ..Default::default()
    };
    let r = eigen::solve_min(&y, &BoundaryCondition::Dirichlet, 1.0, &domain, &opts).unwrap();
    assert!(r.converged);
    assert!(
        (r.capital_lambda - oracle).abs() <= 0.01 * oracle,
        "solver {} vs pencil {}",
        r.capital_lambda,
        oracle
    );
    println!(
        "ACCEPTANCE 04 dense oracle equivalence: PASS (solver {} vs pencil {})",
        r.capital_lambda, oracle
    );
}

fn solve_all(
    y: &YoungFunction,
    domain: &Arc<DiscreteDomain>,
    mu: f64,
    opts: &SolverOptions,
) -> eigen::BcSet {
    let beta = Beta::Constant(1.0);
    eigen::BcSet {
        regional: eigen::solve_min(y, &BoundaryCondition::RegionalNeumann, mu, domain, opts)
            .unwrap(),
        neumann: eigen::solve_min(y, &BoundaryCondition::Neumann, mu, domain, opts).unwrap(),
        robin: eigen::solve_min(y, &BoundaryCondition::Robin(beta), mu, domain, opts).unwrap(),
        dirichlet: eigen::solve_min(y, &BoundaryCondition::Dirichlet, mu, domain, opts).unwrap(),
    }
}

/// 5 and 6. Ordering chain within 1e-4 relative slack on four instances
///    (two families × two fractional orders, β ≡ 1), plus the
///    eigenvalue/minimizer sandwich on every result and the equality
///    |λ − Λ| ≤ 1e-6 Λ in the homogeneous case.
#[test]
fn criterion_05_06_ordering_and_sandwich() {
    let opts = SolverOptions {
        tol: 1e-8,
        ..Default::default()
    };
    let mut checked = 0;
    for y in [
        YoungFunction::power(2.0).unwrap(),
        YoungFunction::power_log(2.0).unwrap(),
    ] {
        for s in [0.3, 0.6] {
            let domain = interval(1.0 / 32.0, 0.5, s);
            let set = solve_all(&y, &domain, 1.0, &opts);
            for r in [&set.regional, &set.neumann, &set.robin, &set.dirichlet] {
                assert!(r.converged, "{} s={s}: {} not converged", y.label(), r.bc);
            }
            let rep = eigen::verify_order(&y, &set, 1e-4, 1e-6)
                .unwrap_or_else(|e| panic!("{} s={s}: {e}", y.label()));
            assert_eq!(rep.chain.len(), 3);
            assert_eq!(rep.sandwich.len(), 4);
            if y.is_power() {
                assert_eq!(rep.power_equality_gap.len(), 4);
            }
            checked += 1;
        }
    }
    assert!(checked >= 3);
    println!("ACCEPTANCE 05 ordering chain: PASS ({checked} instances)");
    println!("ACCEPTANCE 06 eigenvalue/minimizer sandwich: PASS");
}

/// 7. μ-sweep over five decades: every quotient at least 1, and flat to
///    1e-4 relative in the homogeneous case.
#[test]
fn criterion_07_mu_sweep() {
    let mu_list = [1e-2, 1e-1, 1.0, 1e1, 1e2];
    let opts = SolverOptions {
        tol: 1e-9,
        ..Default::default()
    };
    for y in [
        YoungFunction::power(2.0).unwrap(),
        YoungFunction::power_log(2.0).unwrap(),
    ] {
        let domain = interval(1.0 / 24.0, 0.5, 0.3);
        let rep = eigen::mu_sweep(&y, &BoundaryCondition::Dirichlet, &mu_list, &domain, &opts)
            .unwrap();
        assert!(rep.min_lambda >= 1.0, "{}: min {}", y.label(), rep.min_lambda);
        for row in &rep.rows {
            assert!(row.converged, "{} mu={}", y.label(), row.mu);
        }
        if y.is_power() {
            let base = rep.rows[0].capital_lambda;
            for row in &rep.rows {
                assert!(
                    (row.capital_lambda - base).abs() <= 1e-4 * base,
                    "spread at mu={}: {} vs {}",
                    row.mu,
                    row.capital_lambda,
                    base
                );
            }
        }
    }
    println!("ACCEPTANCE 07 mu-sweep: PASS");
}

/// 8. Gradient checks against central differences (relative 1e-5, 50
///    pairs per nonlinearity) and the uniform monotonicity inequality
///    with zero violations on 10^3 pairs.
#[test]
fn criterion_08_gradient_and_monotonicity() {
    let domain = interval(1.0 / 16.0, 0.5, 0.4);
    let y = YoungFunction::power(2.0).unwrap();
    let beta = Beta::Constant(1.0);
    let zero = Nonlinearity::zero();
    let nls = [
        Nonlinearity::sine_power(4.0).unwrap(),
        Nonlinearity::sine_young(3.0).unwrap(),
        Nonlinearity::concave_convex(4.0, 5.0).unwrap(),
        Nonlinearity::piecewise_power(1.5, 4.0).unwrap(),
    ];
    let (lambda, mu) = (0.8, 0.1);

    for nl in &nls {
        for k in 0..50 {
            let mut rng = fields::rng(80, k);
            let u = fields::random_smooth(&domain, &mut rng);
            let v = fields::random_smooth(&domain, &mut rng);
            let eps = 1e-5 * u.max_abs().max(1.0);

            // coercive part
            let gj = multiplicity::gradient_psi(&y, &u, 0.0, 0.0, &zero, &zero, &beta).unwrap();
            let mut up = u.clone();
            up.axpy(eps, &v);
            let mut um = u.clone();
            um.axpy(-eps, &v);
            let fd_j = (multiplicity::energy_j(&y, &up, &beta).unwrap()
                - multiplicity::energy_j(&y, &um, &beta).unwrap())
                / (2.0 * eps);
            let lhs = gj.dot(&v);
            assert!(
                (lhs - fd_j).abs() <= 1e-5 * (1.0 + lhs.abs()),
                "J gradient: {lhs} vs {fd_j}"
            );

            // nonlinear integral: gradient is the density by nodes
            let w = domain.cell_weight();
            let gf: f64 = domain
                .interior()
                .iter()
                .map(|&i| nl.f(domain.coord(i)[0], u.at(i)) * v.at(i) * w)
                .sum();
            let fd_f = (multiplicity::integral_f(nl, &up) - multiplicity::integral_f(nl, &um))
                / (2.0 * eps);
            assert!(
                (gf - fd_f).abs() <= 1e-5 * (1.0 + gf.abs()),
                "{}: F gradient {gf} vs {fd_f}",
                nl.label()
            );

            // full energy
            let gp = multiplicity::gradient_psi(&y, &u, lambda, mu, nl, &zero, &beta).unwrap();
            let fd_p = (multiplicity::energy_psi(&y, &up, lambda, mu, nl, &zero, &beta).unwrap()
                - multiplicity::energy_psi(&y, &um, lambda, mu, nl, &zero, &beta).unwrap())
                / (2.0 * eps);
            let lhs = gp.dot(&v);
            assert!(
                (lhs - fd_p).abs() <= 1e-5 * (1.0 + lhs.abs()),
                "{}: Psi gradient {lhs} vs {fd_p}",
                nl.label()
            );
        }
    }

    // uniform monotonicity of the coercive part over 10^3 random pairs
    let yl = YoungFunction::power_log(2.0).unwrap();
    let mut violations = 0;
    for k in 0..1000 {
        let mut rng = fields::rng(88, k);
        let u = fields::random_values(&domain, &mut rng, 2.0);
        let v = fields::random_values(&domain, &mut rng, 2.0);
        let gu = multiplicity::gradient_psi(&yl, &u, 0.0, 0.0, &zero, &zero, &beta).unwrap();
        let gv = multiplicity::gradient_psi(&yl, &v, 0.0, 0.0, &zero, &zero, &beta).unwrap();
        let diff = u.sub(&v);
        let lhs = gu.sub(&gv).dot(&diff);
        let rhs = 4.0 * multiplicity::energy_j(&yl, &diff.scaled(0.5), &beta).unwrap();
        if lhs < rhs * (1.0 - 1e-10) - 1e-12 {
            violations += 1;
        }
    }
    assert_eq!(violations, 0, "monotonicity violations");
    println!("ACCEPTANCE 08 gradient checks and monotonicity: PASS");
}

/// 9. Hypothesis harness: the oscillatory and concave-convex examples
///    certify class-𝒜 and the limit conditions (alpha_hat at most 1e-3,
///    beta_hat positive); the piecewise example passes the three
///    growth-envelope conditions.
#[test]
fn criterion_09_hypothesis_harness() {
    let y = YoungFunction::power(2.0).unwrap();
    let (n, s) = (1, 0.4);
    let domain = interval(1.0 / 32.0, 0.5, s);
    let beta = Beta::Constant(1.0);

    for nl in [
        Nonlinearity::sine_power(4.0).unwrap(),
        Nonlinearity::concave_convex(4.0, 5.0).unwrap(),
    ] {
        let class_a = multiplicity::check_class_a(&nl, &y, n, s);
        assert!(class_a.certified, "{}: {:?}", nl.label(), class_a);
        let hyp = multiplicity::check_hypotheses(&nl, &y, Theorem::ThreeSolution);
        assert!(hyp.passes, "{}: {:?}", nl.label(), hyp);
        let est = multiplicity::estimate_ricceri(&y, &nl, &domain, &beta, 9).unwrap();
        assert!(
            est.alpha_hat <= 1e-3,
            "{}: alpha_hat = {}",
            nl.label(),
            est.alpha_hat
        );
        assert!(est.beta_hat > 0.0, "{}: beta_hat = {}", nl.label(), est.beta_hat);
    }

    let pw = Nonlinearity::piecewise_power(1.5, 4.0).unwrap();
    let rep = multiplicity::check_hypotheses(&pw, &y, Theorem::GrowthEnvelope);
    assert!(rep.passes, "{rep:?}");
    println!("ACCEPTANCE 09 hypothesis harness: PASS");
}

/// 10. Multiplicity at desk scale: piecewise exponents (1.5, 4) around
///     the quadratic kernel on a 64-cell grid, λ swept over 8 log-spaced
///     values in [1.1 δ̂, 10 δ̂], 16 starts, separation 1e-3: at least
///     one λ yields three or more critical points at residual 1e-8.
#[test]
fn criterion_10_multiplicity_sweep() {
    let domain = interval(1.0 / 64.0, 0.5, 0.4);
    assert_eq!(domain.interior().len(), 64);
    let y = YoungFunction::power(2.0).unwrap();
    let f_nl = Nonlinearity::piecewise_power(1.5, 4.0).unwrap();
    let h_nl = Nonlinearity::zero();
    let beta = Beta::Constant(1.0);

    let est = multiplicity::estimate_ricceri(&y, &f_nl, &domain, &beta, 42).unwrap();
    let (lo, hi) = (1.1 * est.delta_hat, 10.0 * est.delta_hat);
    let lambdas: Vec<f64> = (0..8)
        .map(|i| lo * (hi / lo).powf(i as f64 / 7.0))
        .collect();

    let mut best = 0usize;
    for &lambda in &lambdas {
        let rep = multiplicity::find_critical_points(
            &y, lambda, 0.0, &f_nl, &h_nl, &domain, &beta, 16, 1e-3, 1e-8, 42,
        )
        .unwrap();
        println!(
            "  lambda = {lambda:<12.4e} points = {} (nontrivial {}, duplicates {}, failed {})",
            rep.points.len(),
            rep.points.iter().filter(|p| p.x_norm > 0.0).count(),
            rep.rejected_duplicates,
            rep.failed
        );
        for p in &rep.points {
            assert!(
                p.gradient_residual <= 1e-8 * (1.0 + p.x_norm),
                "residual {} at norm {}",
                p.gradient_residual,
                p.x_norm
            );
        }
        for (i, a) in rep.points.iter().enumerate() {
            for b in rep.points.iter().skip(i + 1) {
                let d = x_norm(&y, &a.u.sub(&b.u), &beta).unwrap();
                assert!(d > 1e-3, "points closer than the separation: {d}");
            }
        }
        best = best.max(rep.points.len());
    }
    assert!(best >= 3, "best count over the sweep: {best}");
    println!("ACCEPTANCE 10 multiplicity sweep: PASS (best count {best})");
}

/// 11. Refinement sanity: interior modular, star modular, perimeter and
///     the Dirichlet quotient all exhibit empirical convergence order
///     above 0.5 across h, h/2, h/4 on a smooth 1D instance.
#[test]
fn criterion_11_refinement_orders() {
    let s = 0.2;
    let y = YoungFunction::power(2.0).unwrap();
    // smooth, compactly supported, and not symmetric under the cell
    // centering, so no quadrature rule is accidentally exact
    let smooth = |x: f64, _: f64| {
        if (0.0..=1.0).contains(&x) {
            (0.3 + x) * (std::f64::consts::PI * x).sin().powi(2)
        } else {
            0.0
        }
    };

    let order_of = |values: &[f64]| -> f64 {
        ((values[0] - values[1]).abs() / (values[1] - values[2]).abs()).log2()
    };

    let mut modular_int = Vec::new();
    let mut modular_star = Vec::new();
    let mut perim = Vec::new();
    let mut lam_d = Vec::new();
    let opts = SolverOptions {
        tol: 1e-9,
        n_starts: 4,
        ..Default::default()
    };
    for k in 0..3 {
        let h = 0.05 / 2f64.powi(k);
        let domain = interval(h, 0.5, s);
        let u = GridFunction::from_fn(&domain, smooth);
        modular_int.push(modular_g(&y, &u, NodeRegion::Interior, None).unwrap());
        modular_star.push(modular_sg(&y, &u, PairRegion::Star));
        perim.push(perimeter(&y, &domain).value);
        lam_d.push(
            eigen::solve_min(&y, &BoundaryCondition::Dirichlet, 1.0, &domain, &opts)
                .unwrap()
                .capital_lambda,
        );
    }

    for (name, values) in [
        ("interior modular", &modular_int),
        ("star modular", &modular_star),
        ("perimeter", &perim),
        ("Dirichlet quotient", &lam_d),
    ] {
        let order = order_of(values);
        println!("  {name}: values {values:?}, order {order:.3}");
        assert!(order > 0.5, "{name}: order {order}");
    }
    println!("ACCEPTANCE 11 refinement orders: PASS");
}
