//! Three-solution machinery: the perturbed energy functional, growth
//! hypothesis harnesses, heuristic threshold estimation, and a
//! multistart/deflation search for critical points.
//!
//! The energy is
//!
//! ```text
//! Ψ(u) = 𝒥(u) − λ·ℱ(u) − μ·ℋ(u),
//! 𝒥(u) = Φ_{s,G,*}(u) + Φ_{G,Ω}(u) + Φ_{G,β,Ωᶜ}(u),
//! ℱ(u) = Σ_Ω F(x, u)·hⁿ,   ℋ(u) = Σ_Ω H(x, u)·hⁿ,
//! ```
//!
//! and critical points of Ψ are discrete weak solutions of the Robin
//! problem with right-hand side `λf + μh`.
//!
//! A nonlinearity is admissible ("class 𝒜") when `|f(x,t)| ≤
//! w·(1 + m(|t|))` for an envelope Young function `M` with `m = M'`
//! that is essentially dominated by the critical function `G*`. Both
//! halves are certified by sampling.
//!
//! The built-in families:
//!
//! - `sine_power(p)`: `F(t) = |sin t|^p`, a bounded oscillatory term;
//! - `sine_young(q)`: `F(t) = |sin t|^q/q`, its Young-composed variant
//!   (extended to `t < 0` through the even primitive, so `F = ∫f`
//!   globally);
//! - `concave_convex(p, q)`: `f(t) = |t|^{p−2}t − |t|^{q−2}t` extended
//!   oddly, so `F(t) = |t|^p/p − |t|^q/q` is even;
//! - `piecewise_power(α, β)` with `α < p⁻ ≤ p⁺ < β`: density exponent
//!   `β` on `|t| ≤ 1` and `α` on `|t| > 1`, making `F` steep near zero
//!   and flat at infinity — the shape demanded by the growth-envelope
//!   hypotheses (β must govern the origin and α the tails; the opposite
//!   assignment satisfies neither bound);
//! - `zero`: the trivial perturbation.
//!
//! The two abstract threshold quantities are estimated by sampling and
//! always labeled as heuristic: `alpha_hat` bounds the limsups of
//! `ℱ/𝒥` at zero and at infinity, `beta_hat` the supremum, and
//! `delta_hat = 1/beta_hat` is the lower end of the useful λ-range.

use crate::descent::{deflated_descent, DescentOptions, Objective};
use crate::error::{Error, Result};
use crate::fields;
use crate::grid::{DiscreteDomain, GridFunction};
use crate::modulars::{modular_g, modular_sg, x_norm, Beta, NodeRegion, PairRegion};
use crate::operator::seminorm_value_and_gradient;
use crate::young::{essentially_stronger, DominationReport, YoungFunction};
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum NlKind {
    SinePower { p: f64 },
    SineYoung { q: f64 },
    ConcaveConvex { p: f64, q: f64 },
    PiecewisePower { alpha: f64, beta: f64 },
    Zero,
    Custom { f: ScalarFn, big_f: ScalarFn },
}

/// A Carathéodory nonlinearity with its primitive, envelope and weight.
/// The built-in families are x-independent; x-dependence of a custom
/// density folds into the closures.
#[derive(Clone)]
pub struct Nonlinearity {
    kind: NlKind,
    envelope: YoungFunction,
    weight: f64,
    label: String,
}

impl std::fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Nonlinearity({})", self.label)
    }
}

fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl Nonlinearity {
    /// `F(t) = |sin t|^p`. The envelope exponent defaults to 2: any
    /// exponent envelopes a bounded density, and small ones maximize the
    /// margin against the critical function.
    pub fn sine_power(p: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::InvalidParams(format!(
                "sine_power needs p > 1, got {p}"
            )));
        }
        Ok(Self {
            kind: NlKind::SinePower { p },
            envelope: YoungFunction::power(2.0)?,
            weight: p,
            label: format!("sine_power(p={p})"),
        })
    }

    /// `F(t) = |sin t|^q / q`.
    pub fn sine_young(q: f64) -> Result<Self> {
        if !(q > 1.0) {
            return Err(Error::InvalidParams(format!(
                "sine_young needs q > 1, got {q}"
            )));
        }
        Ok(Self {
            kind: NlKind::SineYoung { q },
            envelope: YoungFunction::power(2.0)?,
            weight: 1.0,
            label: format!("sine_young(q={q})"),
        })
    }

    /// `f(t) = |t|^{p−2}t − |t|^{q−2}t`, `p < q`.
    pub fn concave_convex(p: f64, q: f64) -> Result<Self> {
        if !(1.0 < p && p < q) {
            return Err(Error::InvalidParams(format!(
                "concave_convex needs 1 < p < q, got ({p}, {q})"
            )));
        }
        Ok(Self {
            kind: NlKind::ConcaveConvex { p, q },
            envelope: YoungFunction::power(q)?,
            weight: 2.0,
            label: format!("concave_convex(p={p}, q={q})"),
        })
    }

    /// Piecewise power density: exponent `beta` on `|t| ≤ 1` and
    /// `alpha` on `|t| > 1` (`1 < alpha`, `1 < beta`).
    pub fn piecewise_power(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 1.0) || !(beta > 1.0) {
            return Err(Error::InvalidParams(format!(
                "piecewise_power needs alpha, beta > 1, got ({alpha}, {beta})"
            )));
        }
        Ok(Self {
            kind: NlKind::PiecewisePower { alpha, beta },
            envelope: YoungFunction::power(alpha)?,
            weight: 1.0,
            label: format!("piecewise_power(alpha={alpha}, beta={beta})"),
        })
    }

    pub fn zero() -> Self {
        Self {
            kind: NlKind::Zero,
            envelope: YoungFunction::power(2.0).expect("valid"),
            weight: 1.0,
            label: "zero".into(),
        }
    }

    /// User-supplied density and primitive (the primitive must satisfy
    /// `F(x, t) = ∫₀ᵗ f(x, ·)`).
    pub fn custom(
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        big_f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        envelope: YoungFunction,
        weight: f64,
        label: &str,
    ) -> Self {
        Self {
            kind: NlKind::Custom {
                f: Arc::new(f),
                big_f: Arc::new(big_f),
            },
            envelope,
            weight,
            label: label.into(),
        }
    }

    /// Factory used by the run configuration.
    pub fn make(id: &str, params: &[f64]) -> Result<Self> {
        match (id, params) {
            ("sine_power", [p]) => Self::sine_power(*p),
            ("sine_young", [q]) => Self::sine_young(*q),
            ("concave_convex", [p, q]) => Self::concave_convex(*p, *q),
            ("piecewise_power", [a, b]) => Self::piecewise_power(*a, *b),
            ("zero", []) => Ok(Self::zero()),
            _ => Err(Error::InvalidParams(format!(
                "unknown nonlinearity `{id}` with params {params:?}"
            ))),
        }
    }

    /// Replaces the envelope used for class-𝒜 certification.
    pub fn with_envelope(mut self, envelope: YoungFunction, weight: f64) -> Self {
        self.envelope = envelope;
        self.weight = weight;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn envelope(&self) -> &YoungFunction {
        &self.envelope
    }

    /// Density `f(x, t)`.
    pub fn f(&self, x: f64, t: f64) -> f64 {
        match &self.kind {
            NlKind::SinePower { p } => {
                let s = t.sin();
                p * s.abs().powf(p - 1.0) * sgn(s) * t.cos()
            }
            NlKind::SineYoung { q } => {
                let s = t.sin();
                s.abs().powf(q - 1.0) * sgn(s) * t.cos()
            }
            NlKind::ConcaveConvex { p, q } => {
                if t == 0.0 {
                    0.0
                } else {
                    t.abs().powf(p - 2.0) * t - t.abs().powf(q - 2.0) * t
                }
            }
            NlKind::PiecewisePower { alpha, beta } => {
                if t == 0.0 {
                    0.0
                } else if t.abs() <= 1.0 {
                    t.abs().powf(beta - 2.0) * t
                } else {
                    t.abs().powf(alpha - 2.0) * t
                }
            }
            NlKind::Zero => 0.0,
            NlKind::Custom { f, .. } => f(x, t),
        }
    }

    /// Primitive `F(x, t) = ∫₀ᵗ f(x, s) ds`.
    pub fn big_f(&self, x: f64, t: f64) -> f64 {
        let a = t.abs();
        match &self.kind {
            NlKind::SinePower { p } => t.sin().abs().powf(*p),
            NlKind::SineYoung { q } => t.sin().abs().powf(*q) / q,
            NlKind::ConcaveConvex { p, q } => a.powf(*p) / p - a.powf(*q) / q,
            NlKind::PiecewisePower { alpha, beta } => {
                if a <= 1.0 {
                    a.powf(*beta) / beta
                } else {
                    1.0 / beta - 1.0 / alpha + a.powf(*alpha) / alpha
                }
            }
            NlKind::Zero => 0.0,
            NlKind::Custom { big_f, .. } => big_f(x, t),
        }
    }

    /// A plateau height with `F > 0` there and `F ≥ 0` below, used by
    /// the positivity witness; `None` when the primitive has no sign.
    pub fn witness_height(&self) -> Option<f64> {
        match &self.kind {
            NlKind::SinePower { .. } | NlKind::SineYoung { .. } => Some(FRAC_PI_2),
            NlKind::ConcaveConvex { p, q } => {
                // F(τ) > 0 strictly below the crossing (q/p)^{1/(q−p)}
                Some((1.0f64).min(0.9 * (q / p).powf(1.0 / (q - p))))
            }
            NlKind::PiecewisePower { .. } => Some(1.0),
            NlKind::Zero => None,
            NlKind::Custom { .. } => Some(1.0),
        }
    }

    /// Comparison data for the growth-envelope hypotheses, where the
    /// family defines it.
    pub fn envelope_pair(&self) -> Option<EnvelopePair> {
        match &self.kind {
            NlKind::PiecewisePower { alpha, beta } => Some(EnvelopePair {
                tail: YoungFunction::power(*alpha).ok()?,
                origin: YoungFunction::power(*beta).ok()?,
                tau1: 1.0,
                tau2: 1.0,
            }),
            _ => None,
        }
    }
}

/// Comparison Young functions for the growth-envelope theorem: `tail`
/// controls `F` globally, `origin` controls it near zero on `[−τ₁, τ₁]`,
/// and `τ₂` is the positivity witness.
#[derive(Clone, Debug)]
pub struct EnvelopePair {
    pub tail: YoungFunction,
    pub origin: YoungFunction,
    pub tau1: f64,
    pub tau2: f64,
}

/// `𝒥(u)`: star seminorm modular + interior modular + β-weighted
/// exterior modular.
pub fn energy_j(y: &YoungFunction, u: &GridFunction, beta: &Beta) -> Result<f64> {
    Ok(modular_sg(y, u, PairRegion::Star)
        + modular_g(y, u, NodeRegion::Interior, None)?
        + modular_g(y, u, NodeRegion::Exterior, Some(beta))?)
}

/// Interior integral of the primitive, `Σ F(x_i, u_i) hⁿ`.
pub fn integral_f(nl: &Nonlinearity, u: &GridFunction) -> f64 {
    let d = u.domain();
    let w = d.cell_weight();
    d.interior()
        .iter()
        .map(|&i| nl.big_f(d.coord(i)[0], u.at(i)) * w)
        .sum()
}

/// `Ψ(u) = 𝒥(u) − λℱ(u) − μℋ(u)`; vanishes at `u ≡ 0`.
pub fn energy_psi(
    y: &YoungFunction,
    u: &GridFunction,
    lambda: f64,
    mu: f64,
    f_nl: &Nonlinearity,
    h_nl: &Nonlinearity,
    beta: &Beta,
) -> Result<f64> {
    Ok(energy_j(y, u, beta)? - lambda * integral_f(f_nl, u) - mu * integral_f(h_nl, u))
}

/// Node-wise gradient of Ψ.
pub fn gradient_psi(
    y: &YoungFunction,
    u: &GridFunction,
    lambda: f64,
    mu: f64,
    f_nl: &Nonlinearity,
    h_nl: &Nonlinearity,
    beta: &Beta,
) -> Result<GridFunction> {
    let (_, grad) = psi_value_and_gradient(y, u, lambda, mu, f_nl, h_nl, beta)?;
    Ok(grad)
}

fn psi_value_and_gradient(
    y: &YoungFunction,
    u: &GridFunction,
    lambda: f64,
    mu: f64,
    f_nl: &Nonlinearity,
    h_nl: &Nonlinearity,
    beta: &Beta,
) -> Result<(f64, GridFunction)> {
    let d = u.domain();
    beta.validate(d)?;
    let w = d.cell_weight();
    let (sem, mut grad) = seminorm_value_and_gradient(y, u, PairRegion::Star);
    let mut value = sem;
    for &i in d.interior() {
        let x = d.coord(i)[0];
        let t = u.at(i);
        value +=
            y.value(t.abs()) * w - lambda * f_nl.big_f(x, t) * w - mu * h_nl.big_f(x, t) * w;
        grad.values_mut()[i] +=
            (y.derivative_signed(t) - lambda * f_nl.f(x, t) - mu * h_nl.f(x, t)) * w;
    }
    for (rank, &i) in d.exterior().iter().enumerate() {
        let b = beta.at(rank);
        value += b * y.value(u.at(i).abs()) * w;
        grad.values_mut()[i] += b * y.derivative_signed(u.at(i)) * w;
    }
    Ok((value, grad))
}

/// Class-𝒜 certification report.
#[derive(Clone, Debug)]
pub struct ClassAReport {
    pub label: String,
    /// Subcriticality held, so the critical function existed.
    pub subcritical: bool,
    /// `|f| ≤ w(1 + m(|t|))` on the certification grid.
    pub growth_ok: bool,
    /// Worst margin `w(1+m) − |f|` over the grid (negative = violation).
    pub worst_margin: f64,
    /// Witness argument of the worst margin.
    pub worst_t: f64,
    /// Envelope essentially dominated by the critical function.
    pub domination: Option<DominationReport>,
    pub certified: bool,
}

/// Certifies membership in the admissible class against the critical
/// function of `(y, n, s)`.
pub fn check_class_a(nl: &Nonlinearity, y: &YoungFunction, n: usize, s: f64) -> ClassAReport {
    let star = y.critical_sobolev(n, s);
    let subcritical = star.is_ok();

    let mut worst = f64::INFINITY;
    let mut worst_t = 0.0;
    for i in 0..2400 {
        // linear sweep through ±12, then a signed log sweep to ±1e3
        let t = if i < 1200 {
            -12.0 + i as f64 / 50.0
        } else {
            let e = -1.0 + 4.0 * (i - 1200) as f64 / 1199.0;
            10f64.powf(e) * if i % 2 == 0 { 1.0 } else { -1.0 }
        };
        let bound = nl.weight * (1.0 + nl.envelope.derivative(t.abs()));
        let margin = bound - nl.f(0.0, t).abs();
        if margin < worst {
            worst = margin;
            worst_t = t;
        }
    }
    let growth_ok = worst >= -1e-12;

    let domination = match &star {
        Ok(gs) => essentially_stronger(nl.envelope(), gs).ok(),
        Err(_) => None,
    };
    let certified = subcritical && growth_ok && domination.as_ref().is_some_and(|d| d.holds);
    ClassAReport {
        label: nl.label.clone(),
        subcritical,
        growth_ok,
        worst_margin: worst,
        worst_t,
        domination,
        certified,
    }
}

/// Which hypothesis set to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    ThreeSolution,
    GrowthEnvelope,
}

/// Sampled hypothesis report; limit values are estimates from finite
/// grids, never asserted as exact.
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub label: String,
    pub theorem: Theorem,
    /// Estimated `limsup_{t→0} sup_± F/G` (max over the smallest decade).
    pub limit_zero: f64,
    /// Estimated `limsup_{t→∞} sup_± F/G`.
    pub limit_infinity: f64,
    /// The positivity witness `F(τ̂)`.
    pub witness_value: f64,
    pub passes: bool,
    /// Per-condition outcomes for the growth-envelope variant.
    pub conditions: Vec<(String, bool, f64)>,
}

fn ratio_sup(nl: &Nonlinearity, y: &YoungFunction, t: f64) -> f64 {
    let sup_f = nl.big_f(0.0, t).max(nl.big_f(0.0, -t));
    sup_f / y.value(t)
}

/// Checks the hypotheses of the chosen multiplicity theorem by sampling.
pub fn check_hypotheses(
    nl: &Nonlinearity,
    y: &YoungFunction,
    theorem: Theorem,
) -> HypothesisReport {
    match theorem {
        Theorem::ThreeSolution => {
            let tail_max = |lo: f64, hi: f64| -> f64 {
                let n = 40;
                (0..n)
                    .map(|i| {
                        let t = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
                        ratio_sup(nl, y, t)
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            let limit_zero = tail_max(1e-6, 1e-5);
            let limit_infinity = tail_max(1e5, 1e6);

            let (witness_value, witness_ok) = match nl.witness_height() {
                None => (0.0, false),
                Some(tau) => {
                    let fv = nl.big_f(0.0, tau);
                    let mut nonneg = true;
                    for i in 0..=200 {
                        if nl.big_f(0.0, tau * i as f64 / 200.0) < -1e-14 {
                            nonneg = false;
                            break;
                        }
                    }
                    (fv, fv > 0.0 && nonneg)
                }
            };
            let tol = 1e-3;
            HypothesisReport {
                label: nl.label.clone(),
                theorem,
                limit_zero,
                limit_infinity,
                witness_value,
                passes: limit_zero <= tol && limit_infinity <= tol && witness_ok,
                conditions: Vec::new(),
            }
        }
        Theorem::GrowthEnvelope => {
            let mut conditions = Vec::new();
            let mut all = true;
            match nl.envelope_pair() {
                None => {
                    all = false;
                    conditions.push(("comparison functions defined".into(), false, 0.0));
                }
                Some(pair) => {
                    // global tail bound F ≤ c₁(1 + B) with b⁺ < p⁻ and
                    // B essentially weaker than G
                    let tail_ratio = |t: f64| {
                        nl.big_f(0.0, t).max(nl.big_f(0.0, -t)) / (1.0 + pair.tail.value(t))
                    };
                    let mut c1: f64 = 0.0;
                    for i in 0..400 {
                        let t = 10f64.powf(-2.0 + 8.0 * i as f64 / 399.0);
                        c1 = c1.max(tail_ratio(t));
                    }
                    let bounded = tail_ratio(1e6) <= c1 * (1.0 + 1e-9)
                        && tail_ratio(1e6) <= tail_ratio(1e4) * 1.05;
                    let idx_ok = pair.tail.p_plus() < y.p_minus();
                    let dom_ok = essentially_stronger(&pair.tail, y)
                        .map(|r| r.holds)
                        .unwrap_or(false);
                    conditions.push(("tail bound F <= c1(1+B)".into(), bounded, c1));
                    conditions.push(("tail index b+ < p-".into(), idx_ok, pair.tail.p_plus()));
                    conditions.push(("B essentially weaker than G".into(), dom_ok, 0.0));
                    all &= bounded && idx_ok && dom_ok;

                    // origin bound F ≤ c₂ D on [−τ₁, τ₁] with d⁻ > p⁺
                    // and G essentially weaker than D
                    let mut c2: f64 = 0.0;
                    for i in 1..=300 {
                        let t = pair.tau1 * i as f64 / 300.0;
                        let denom = pair.origin.value(t);
                        if denom > 0.0 {
                            c2 = c2.max(nl.big_f(0.0, t).max(nl.big_f(0.0, -t)) / denom);
                        }
                    }
                    let origin_ok = c2.is_finite() && c2 > 0.0;
                    let idx2_ok = pair.origin.p_minus() > y.p_plus();
                    let dom2_ok = essentially_stronger(y, &pair.origin)
                        .map(|r| r.holds)
                        .unwrap_or(false);
                    conditions.push(("origin bound F <= c2 D".into(), origin_ok, c2));
                    conditions.push((
                        "origin index d- > p+".into(),
                        idx2_ok,
                        pair.origin.p_minus(),
                    ));
                    conditions.push(("G essentially weaker than D".into(), dom2_ok, 0.0));
                    all &= origin_ok && idx2_ok && dom2_ok;

                    // sign condition on [0, τ₂]
                    let fv = nl.big_f(0.0, pair.tau2);
                    let mut nonneg = true;
                    for i in 0..=200 {
                        if nl.big_f(0.0, pair.tau2 * i as f64 / 200.0) < -1e-14 {
                            nonneg = false;
                            break;
                        }
                    }
                    let sign_ok = fv > 0.0 && nonneg;
                    conditions.push(("sign condition on [0, tau2]".into(), sign_ok, fv));
                    all &= sign_ok;
                }
            }
            HypothesisReport {
                label: nl.label.clone(),
                theorem,
                limit_zero: f64::NAN,
                limit_infinity: f64::NAN,
                witness_value: f64::NAN,
                passes: all,
                conditions,
            }
        }
    }
}

/// Heuristic estimates of the abstract threshold quantities.
#[derive(Clone, Debug)]
pub struct RicceriEstimate {
    /// Estimate of `max{0, limsup_{‖u‖→∞} ℱ/𝒥, limsup_{u→0} ℱ/𝒥}`.
    pub alpha_hat: f64,
    /// Estimate of `sup ℱ/𝒥`.
    pub beta_hat: f64,
    /// `1/beta_hat`, the lower end of the admissible λ-interval.
    pub delta_hat: f64,
    pub samples: usize,
    /// The sampled maximizer of `ℱ/𝒥` (a good search seed).
    pub best_u: GridFunction,
}

/// Samples `ℱ/𝒥` along normalized random directions (scaled into the
/// near-zero and far ranges for `alpha_hat`, across the middle range for
/// `beta_hat`) and over plateau witnesses. Finite-sample estimates, not
/// certified limits.
pub fn estimate_ricceri(
    y: &YoungFunction,
    nl: &Nonlinearity,
    domain: &Arc<DiscreteDomain>,
    beta: &Beta,
    seed: u64,
) -> Result<RicceriEstimate> {
    beta.validate(domain)?;
    let n_dirs = 16;
    let mut dirs: Vec<GridFunction> = Vec::new();
    for k in 0..n_dirs {
        let mut rng = fields::rng(seed, 3000 + k);
        let u = fields::random_smooth(domain, &mut rng);
        let norm = x_norm(y, &u, beta)?;
        if norm > 0.0 {
            dirs.push(u.scaled(1.0 / norm));
        }
    }
    if let Some(tau) = nl.witness_height() {
        for &frac in &[0.25, 0.5, 0.75] {
            let p = fields::plateau(domain, tau, frac);
            let norm = x_norm(y, &p, beta)?;
            if norm > 0.0 {
                dirs.push(p.scaled(1.0 / norm));
            }
        }
    }

    let ratio = |u: &GridFunction| -> Result<Option<f64>> {
        let j = energy_j(y, u, beta)?;
        if j <= 0.0 {
            return Ok(None);
        }
        Ok(Some(integral_f(nl, u) / j))
    };

    let mut alpha_hat = 0.0f64;
    let mut samples = 0;
    for dir in &dirs {
        for &scale in &[1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 1e2, 3e2, 1e3, 3e3, 1e4] {
            if let Some(r) = ratio(&dir.scaled(scale))? {
                alpha_hat = alpha_hat.max(r);
                samples += 1;
            }
        }
    }

    let mut beta_hat = f64::NEG_INFINITY;
    let mut best_u: Option<GridFunction> = None;
    for dir in &dirs {
        for k in 0..=24 {
            let scale = 10f64.powf(-2.0 + 4.0 * k as f64 / 24.0);
            let u = dir.scaled(scale);
            if let Some(r) = ratio(&u)? {
                samples += 1;
                if r > beta_hat {
                    beta_hat = r;
                    best_u = Some(u);
                }
            }
        }
    }
    if !(beta_hat > 0.0) {
        return Err(Error::NoPositiveF);
    }
    Ok(RicceriEstimate {
        alpha_hat,
        beta_hat,
        delta_hat: 1.0 / beta_hat,
        samples,
        best_u: best_u.expect("positive ratio recorded"),
    })
}

/// An accepted critical point of Ψ.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub u: GridFunction,
    pub psi_value: f64,
    pub gradient_residual: f64,
    pub x_norm: f64,
}

/// Search diagnostics.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub points: Vec<CriticalPoint>,
    /// Converged runs rejected for landing within `separation` of an
    /// already-accepted point.
    pub rejected_duplicates: usize,
    /// Runs that never reached the residual target.
    pub failed: usize,
}

struct PsiProblem<'a> {
    y: &'a YoungFunction,
    lambda: f64,
    mu: f64,
    f_nl: &'a Nonlinearity,
    h_nl: &'a Nonlinearity,
    beta: &'a Beta,
    domain: Arc<DiscreteDomain>,
}

impl PsiProblem<'_> {
    fn wrap(&self, v: &[f64]) -> GridFunction {
        GridFunction::from_values(&self.domain, v.to_vec())
    }
}

impl Objective for PsiProblem<'_> {
    fn value(&self, u: &[f64]) -> f64 {
        energy_psi(
            self.y,
            &self.wrap(u),
            self.lambda,
            self.mu,
            self.f_nl,
            self.h_nl,
            self.beta,
        )
        .expect("beta validated upfront")
    }

    fn value_and_gradient(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let (v, g) = psi_value_and_gradient(
            self.y,
            &self.wrap(u),
            self.lambda,
            self.mu,
            self.f_nl,
            self.h_nl,
            self.beta,
        )
        .expect("beta validated upfront");
        (v, g.values().to_vec())
    }

    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        x_norm(self.y, &self.wrap(&diff), self.beta).expect("beta validated upfront")
    }
}

/// Multistart deflated search for critical points of Ψ.
///
/// Seeds: the zero function (stationary whenever both densities vanish
/// at the origin), plateau witnesses, the sampled ratio maximizer and
/// its mirror, and random smooth fields; sign flips of accepted points
/// are queued as extra starts. Accepted points satisfy
/// `‖∇Ψ(u)‖ ≤ tol_scale·(1 + ‖u‖_𝒳)` and are pairwise separated in the
/// 𝒳-norm, so a deflated search can never return into a known basin.
#[allow(clippy::too_many_arguments)]
pub fn find_critical_points(
    y: &YoungFunction,
    lambda: f64,
    mu: f64,
    f_nl: &Nonlinearity,
    h_nl: &Nonlinearity,
    domain: &Arc<DiscreteDomain>,
    beta: &Beta,
    n_starts: usize,
    separation: f64,
    tol_scale: f64,
    seed: u64,
) -> Result<SearchReport> {
    if !(lambda > 0.0) || mu < 0.0 {
        return Err(Error::ValidationError(format!(
            "need lambda > 0 and mu >= 0, got ({lambda}, {mu})"
        )));
    }
    beta.validate(domain)?;
    let problem = PsiProblem {
        y,
        lambda,
        mu,
        f_nl,
        h_nl,
        beta,
        domain: Arc::clone(domain),
    };

    let mut seeds: Vec<GridFunction> = Vec::new();
    seeds.push(GridFunction::zeros(domain));
    if let Some(tau) = f_nl.witness_height() {
        for &fr in &[0.5, 0.75] {
            seeds.push(fields::plateau(domain, tau, fr));
        }
    }
    if let Ok(est) = estimate_ricceri(y, f_nl, domain, beta, seed) {
        seeds.push(est.best_u.clone());
        seeds.push(est.best_u.scaled(-1.0));
    }
    let mut k = 0u64;
    while seeds.len() < n_starts {
        let mut rng = fields::rng(seed, 5000 + k);
        let amp = 10f64.powf(-1.0 + (k % 3) as f64);
        seeds.push(fields::random_smooth(domain, &mut rng).scaled(amp));
        k += 1;
    }
    seeds.truncate(n_starts.max(1));

    let opts = DescentOptions {
        grad_tol: tol_scale, // re-tested per point against 1 + ‖u‖_𝒳
        max_iter: 20_000,
        ..Default::default()
    };

    let mut accepted: Vec<CriticalPoint> = Vec::new();
    let mut accepted_raw: Vec<Vec<f64>> = Vec::new();
    let mut rejected_duplicates = 0;
    let mut failed = 0;
    let mut queue: Vec<GridFunction> = seeds;
    queue.reverse(); // pop from the front of the seed list first

    while let Some(s) = queue.pop() {
        let out = deflated_descent(&problem, s.values(), &accepted_raw, &opts);
        let u = GridFunction::from_values(domain, out.u.clone());
        let xn = x_norm(y, &u, beta)?;
        let scale = 1.0 + xn;
        if out.grad_norm > tol_scale * scale {
            failed += 1;
            continue;
        }
        let min_dist = accepted_raw
            .iter()
            .map(|p| problem.distance(&out.u, p))
            .fold(f64::INFINITY, f64::min);
        if min_dist <= separation {
            rejected_duplicates += 1;
            continue;
        }
        // a fresh critical point: queue its mirror image as a start
        if xn > separation {
            queue.push(u.scaled(-1.0));
        }
        accepted_raw.push(out.u.clone());
        accepted.push(CriticalPoint {
            u,
            psi_value: out.value,
            gradient_residual: out.grad_norm,
            x_norm: xn,
        });
    }

    Ok(SearchReport {
        points: accepted,
        rejected_duplicates,
        failed,
    })
}
