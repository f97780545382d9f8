//! Randomized verification batteries.
//!
//! Each battery turns a family of inequalities into counted checks over
//! seeded random samples and reports violations with their worst
//! margins. The CLI `verify-calculus` / `verify-operator` subcommands
//! and the acceptance suite run these with pinned tolerances.

use crate::error::Result;
use crate::fields;
use crate::grid::{DiscreteDomain, GridFunction};
use crate::modulars::{
    modular_g, modular_sg, norm_lg, seminorm_sg, x_norm, Beta, NodeRegion, PairRegion,
};
use crate::operator::{
    apply_operator, interior_cancellation, normal_derivative, pairing, seminorm_gradient,
    OperatorKind, PairingKind,
};
use crate::young::YoungFunction;
use rand::prelude::*;
use std::sync::Arc;

/// One line of a battery report.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: String,
    pub samples: usize,
    pub violations: usize,
    /// Most negative margin observed (`≥ 0` when every sample passed).
    pub worst_margin: f64,
    pub pass: bool,
}

impl CheckLine {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            samples: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            pass: true,
        }
    }

    /// Records a margin; nonnegative means the inequality held.
    fn record(&mut self, margin: f64) {
        self.samples += 1;
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
        if margin < 0.0 {
            self.violations += 1;
            self.pass = false;
        }
    }
}

/// Pointwise Young-function inequality battery on `n_samples` random
/// `(a, b, t)` triples, log-uniform over `[1e-3, 1e3]`, with relative
/// slack `rel_slack`.
pub fn young_battery(
    y: &YoungFunction,
    n_samples: usize,
    rel_slack: f64,
    seed: u64,
) -> Result<Vec<CheckLine>> {
    let conj = y.complementary()?;
    let g2_holds = y.check_structure(1, 0.25).g2_holds;
    let delta2 = y.delta2_constant();

    let mut l1_lower = CheckLine::new("xi_minus(a)G(b) <= G(ab)");
    let mut l1_upper = CheckLine::new("G(ab) <= xi_plus(a)G(b)");
    let mut l2 = CheckLine::new("G(a+b) <= 2^{p+}(G(a)+G(b))");
    let mut young = CheckLine::new("ab <= G(a) + conj(b)");
    let mut conj_of_g = CheckLine::new("conj(g(t)) <= (p+ + 1)G(t)");
    let mut convexity = CheckLine::new("(G(a)+G(b))/2 >= G(|a+b|/2)+G(|a-b|/2)");

    let mut rng = fields::rng(seed, 100);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| 10f64.powf(rng.gen_range(-3.0..3.0));
    for _ in 0..n_samples {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let t = draw(&mut rng);

        // slack is relative to the dominating side of each inequality
        let gab = y.value(a * b);
        let up = y.xi_plus(a) * y.value(b);
        let lo = y.xi_minus(a) * y.value(b);
        l1_lower.record(gab - lo + rel_slack * gab.abs());
        l1_upper.record(up - gab + rel_slack * up.abs());

        let lhs = y.value(a + b);
        let rhs = delta2 * (y.value(a) + y.value(b));
        l2.record(rhs - lhs + rel_slack * rhs.abs());

        let rhs = y.value(a) + conj.value(b);
        young.record(rhs - a * b + rel_slack * rhs.abs());

        let rhs = (y.p_plus() + 1.0) * y.value(t);
        conj_of_g.record(rhs - conj.value(y.derivative(t)) + rel_slack * rhs.abs());

        if g2_holds {
            let sa = if rng.gen_bool(0.5) { a } else { -a };
            let sb = if rng.gen_bool(0.5) { b } else { -b };
            let lhs = 0.5 * (y.value(sa.abs()) + y.value(sb.abs()));
            let rhs = y.value((sa + sb).abs() / 2.0) + y.value((sa - sb).abs() / 2.0);
            convexity.record(lhs - rhs + rel_slack * lhs.abs());
        }
    }

    let mut out = vec![l1_lower, l1_upper, l2, young, conj_of_g];
    if g2_holds {
        out.push(convexity);
    }
    Ok(out)
}

/// Modular / Luxemburg-norm battery on `n_funcs` random grid functions.
pub fn modular_battery(
    y: &YoungFunction,
    domain: &Arc<DiscreteDomain>,
    n_funcs: usize,
    rel_slack: f64,
    seed: u64,
) -> Result<Vec<CheckLine>> {
    let mut sandwich_lg = CheckLine::new("xi_minus(|u|_G) <= Phi_G(u) <= xi_plus(|u|_G)");
    let mut sandwich_star = CheckLine::new("xi sandwich for the star seminorm");
    let mut roundtrip = CheckLine::new("Phi(u/|u|) = 1 within 1e-8");
    let mut monotone = CheckLine::new("regional <= star <= full modular");
    let mut homogeneity = CheckLine::new("x_norm(cu) = |c| x_norm(u)");
    let mut domination = CheckLine::new("regional seminorm <= star seminorm");
    let mut triangle = CheckLine::new("triangle inequality of |u|_G");

    let beta = Beta::Constant(1.0);
    let mut rng = fields::rng(seed, 200);
    let mut prev: Option<GridFunction> = None;
    for _ in 0..n_funcs {
        let amp = 10f64.powf(rng.gen_range(-2.0..2.0));
        let u = fields::random_values(domain, &mut rng, amp);

        let phi = modular_g(y, &u, NodeRegion::Interior, None)?;
        let norm = norm_lg(y, &u);
        if norm > 0.0 {
            sandwich_lg.record(phi - y.xi_minus(norm) + rel_slack * phi.abs());
            sandwich_lg.record(y.xi_plus(norm) - phi + rel_slack * y.xi_plus(norm));
            let unit = modular_g(y, &u.scaled(1.0 / norm), NodeRegion::Interior, None)?;
            roundtrip.record(1e-8 - (unit - 1.0).abs());
        }

        let phi_star = modular_sg(y, &u, PairRegion::Star);
        let sem = seminorm_sg(y, &u, PairRegion::Star);
        if sem > 0.0 {
            sandwich_star.record(phi_star - y.xi_minus(sem) + rel_slack * phi_star.abs());
            sandwich_star.record(y.xi_plus(sem) - phi_star + rel_slack * y.xi_plus(sem));
            let unit = modular_sg(y, &u.scaled(1.0 / sem), PairRegion::Star);
            roundtrip.record(1e-8 - (unit - 1.0).abs());
        }

        let reg = modular_sg(y, &u, PairRegion::Regional);
        let full = modular_sg(y, &u, PairRegion::Full);
        monotone.record(phi_star - reg);
        monotone.record(full - phi_star);
        domination.record(sem - seminorm_sg(y, &u, PairRegion::Regional) + rel_slack * sem);

        let c = 10f64.powf(rng.gen_range(-1.0..1.0));
        let n1 = x_norm(y, &u, &beta)?;
        let n2 = x_norm(y, &u.scaled(c), &beta)?;
        homogeneity.record(1e-8 * n2.max(1.0) - (n2 - c * n1).abs());

        if let Some(v) = prev.replace(u.clone()) {
            let s = u.add(&v);
            triangle.record(norm_lg(y, &v) + norm - norm_lg(y, &s) + 1e-8);
        }
    }

    Ok(vec![
        sandwich_lg,
        sandwich_star,
        roundtrip,
        monotone,
        homogeneity,
        domination,
        triangle,
    ])
}

/// Operator identity battery on `n_pairs` random function pairs.
pub fn operator_battery(
    y: &YoungFunction,
    domain: &Arc<DiscreteDomain>,
    n_pairs: usize,
    rel_tol: f64,
    seed: u64,
) -> Result<Vec<CheckLine>> {
    let mut divergence = CheckLine::new("sum of operator + normal derivative = 0");
    let mut parts = CheckLine::new("star pairing = interior + exterior sums");
    let mut cancel = CheckLine::new("interior antisymmetric cancellation exact");
    let mut nonneg = CheckLine::new("pairing(u,u) >= 0 and monotone in region");
    let mut odd = CheckLine::new("operator odd under sign flip");
    let mut grad = CheckLine::new("star pairing = derivative of star modular");

    let w = domain.cell_weight();
    for k in 0..n_pairs {
        let mut rng = fields::rng(seed, 300 + k as u64);
        let u = fields::random_values(domain, &mut rng, 1.0);
        let v = fields::random_values(domain, &mut rng, 1.0);

        let a = apply_operator(y, &u, OperatorKind::Full);
        let nd = normal_derivative(y, &u);
        let total: f64 = domain.interior().iter().map(|&i| a.at(i) * w).sum::<f64>()
            + domain.exterior().iter().map(|&i| nd.at(i) * w).sum::<f64>();
        let scale: f64 = domain
            .interior()
            .iter()
            .map(|&i| (a.at(i) * w).abs())
            .sum::<f64>()
            .max(1e-300);
        divergence.record(rel_tol - total.abs() / scale);

        let star = pairing(y, &u, &v, PairingKind::Star);
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
        parts.record(rel_tol - (star - rhs).abs() / star.abs().max(1e-300));

        cancel.record(if interior_cancellation(y, &u) == 0.0 {
            0.0
        } else {
            -1.0
        });

        let reg = pairing(y, &u, &u, PairingKind::Regional);
        let st = pairing(y, &u, &u, PairingKind::Star);
        let full = pairing(y, &u, &u, PairingKind::Full);
        nonneg.record(reg);
        nonneg.record(st - reg);
        nonneg.record(full - st);

        let am = apply_operator(y, &u.scaled(-1.0), OperatorKind::Full);
        let mut worst = 0.0f64;
        for (x, ym) in a.values().iter().zip(am.values()) {
            worst = worst.max((x + ym).abs());
        }
        odd.record(if worst == 0.0 { 0.0 } else { -worst });

        // directional-derivative consistency at a relative 1e-5
        let eps = 1e-5 * u.max_abs().max(1.0);
        let mut up = u.clone();
        up.axpy(eps, &v);
        let mut um = u.clone();
        um.axpy(-eps, &v);
        let fd = (modular_sg(y, &up, PairRegion::Star) - modular_sg(y, &um, PairRegion::Star))
            / (2.0 * eps);
        grad.record(1e-5 - (star - fd).abs() / star.abs().max(1e-300));
    }

    // gradient field reproduces the pairing against arbitrary directions
    let mut rng = fields::rng(seed, 900);
    let u = fields::random_values(domain, &mut rng, 1.0);
    let v = fields::random_values(domain, &mut rng, 1.0);
    let mut field = CheckLine::new("seminorm gradient reproduces pairing");
    for (region, kind) in [
        (PairRegion::Full, PairingKind::Full),
        (PairRegion::Star, PairingKind::Star),
        (PairRegion::Regional, PairingKind::Regional),
    ] {
        let g = seminorm_gradient(y, &u, region);
        let p = pairing(y, &u, &v, kind);
        field.record(1e-12 - (g.dot(&v) - p).abs() / p.abs().max(1e-300));
    }

    Ok(vec![divergence, parts, cancel, nonneg, odd, grad, field])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, OmegaSpec};

    #[test]
    fn batteries_pass_on_reference_families() {
        let domain = build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, 0.1, 0.5, 0.3).unwrap();
        for y in [
            YoungFunction::power(2.0).unwrap(),
            YoungFunction::power_log(2.0).unwrap(),
        ] {
            for line in young_battery(&y, 2000, 1e-10, 1).unwrap() {
                assert!(line.pass, "{}: {line:?}", y.label());
            }
            for line in modular_battery(&y, &domain, 100, 1e-8, 2).unwrap() {
                assert!(line.pass, "{}: {line:?}", y.label());
            }
            for line in operator_battery(&y, &domain, 10, 1e-12, 3).unwrap() {
                assert!(line.pass, "{}: {line:?}", y.label());
            }
        }
    }
}
