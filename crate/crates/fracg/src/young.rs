//! Young-function calculus.
//!
//! A Young function is a convex increasing `G: [0,∞) → [0,∞)` with
//! `G(0) = 0` and `G(t) = ∫₀ᵗ g`, where the density `g` is nondecreasing,
//! vanishes at zero and is positive for `t > 0`. Everything downstream
//! (modulars, norms, the nonlocal operator) only touches `G` and `g`
//! through [`YoungFunction`], so all growth assumptions are checked and
//! certified here.
//!
//! The growth condition kept throughout is
//!
//! ```text
//! 1 < p⁻ ≤ t·g(t)/G(t) ≤ p⁺ < ∞     for all t > 0,
//! ```
//!
//! which pins `G` between the two powers `t^{p⁻}` and `t^{p⁺}` up to
//! constants. The Simonenko indices `p⁻, p⁺` are stored on the function;
//! for built-in families they are the analytic limits of the ratio, for
//! tabulated functions they come from sampling widened by the observed
//! grid slack.
//!
//! Derived constructions:
//! - [`YoungFunction::complementary`]: the convex conjugate `G̃`,
//!   evaluated through the Legendre formula `G̃(t) = t·g⁻¹(t) − G(g⁻¹(t))`
//!   (exact at the contact point, so Young's inequality holds to
//!   roundoff on samples);
//! - [`YoungFunction::critical_sobolev`]: the critical function `G*` of
//!   the fractional embedding, built by quadrature of
//!   `G*⁻¹(t) = ∫₀ᵗ G⁻¹(τ) τ^{−(n+s)/n} dτ` and numeric inversion into a
//!   monotone log-log table.

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Default sampling grid for index estimation: log-spaced on [1e-6, 1e6].
pub const DEFAULT_INDEX_GRID: IndexGrid = IndexGrid {
    lo: 1e-6,
    hi: 1e6,
    points: 4000,
};

/// Relative tolerance for the monotone bisection inverting `g`.
pub const G_INVERSE_RTOL: f64 = 1e-12;

/// Relative tolerance of [`YoungFunction::inverse`].
pub const INVERSE_G_RTOL: f64 = 1e-12;

/// Number of log-spaced nodes in the tabulated representation of `G*`.
pub const CRITICAL_TABLE_POINTS: usize = 4096;

/// Log-spaced grid description for index sampling.
#[derive(Clone, Copy, Debug)]
pub struct IndexGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl IndexGrid {
    fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        let (la, lb) = (self.lo.ln(), self.hi.ln());
        let n = self.points.max(2);
        (0..n).map(move |i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
    }
}

#[derive(Clone, Debug)]
enum Kind {
    /// G(t) = t^p / p
    Power { p: f64 },
    /// G(t) = t^p ln(1 + t); indices (p, p+1)
    PowerLog { p: f64 },
    /// G(t) = Σ t^{p_i}
    SumOfPowers { exponents: Vec<f64> },
    /// g(t) = t^{α−1} for t ≤ 1, t^{β−1} for t > 1
    PiecewisePower { alpha: f64, beta: f64 },
    /// Convex conjugate of `base`, evaluated via the Legendre formula.
    Conjugate { base: Arc<YoungFunction> },
    /// Monotone log-log table with PCHIP interpolation (used for G*).
    Tabulated { table: Arc<LogLogTable> },
}

/// A Young function together with its Simonenko indices.
#[derive(Clone, Debug)]
pub struct YoungFunction {
    kind: Kind,
    p_minus: f64,
    p_plus: f64,
    label: String,
}

impl YoungFunction {
    /// `G(t) = t^p / p`, `p > 1`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidParams(format!(
                "power family needs p > 1, got {p}"
            )));
        }
        Ok(Self {
            kind: Kind::Power { p },
            p_minus: p,
            p_plus: p,
            label: format!("power(p={p})"),
        })
    }

    /// `G(t) = t^p ln(1+t)`, `p > 1`; the index ratio decreases from
    /// `p+1` at zero to `p` at infinity.
    pub fn power_log(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidParams(format!(
                "power_log family needs p > 1, got {p}"
            )));
        }
        Ok(Self {
            kind: Kind::PowerLog { p },
            p_minus: p,
            p_plus: p + 1.0,
            label: format!("power_log(p={p})"),
        })
    }

    /// `G(t) = Σ t^{p_i}` with every exponent `> 1`.
    pub fn sum_of_powers(exponents: &[f64]) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidParams("sum_of_powers needs exponents".into()));
        }
        for &p in exponents {
            if !(p > 1.0) || !p.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "sum_of_powers exponents must exceed 1, got {p}"
                )));
            }
        }
        let lo = exponents.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = exponents.iter().cloned().fold(0.0, f64::max);
        Ok(Self {
            kind: Kind::SumOfPowers {
                exponents: exponents.to_vec(),
            },
            p_minus: lo,
            p_plus: hi,
            label: format!("sum_of_powers({exponents:?})"),
        })
    }

    /// Density `t^{α−1}` below 1 and `t^{β−1}` above; both exponents `> 1`.
    pub fn piecewise_power(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 1.0) || !(beta > 1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "piecewise_power needs alpha, beta > 1, got ({alpha}, {beta})"
            )));
        }
        Ok(Self {
            kind: Kind::PiecewisePower { alpha, beta },
            p_minus: alpha.min(beta),
            p_plus: alpha.max(beta),
            label: format!("piecewise_power(alpha={alpha}, beta={beta})"),
        })
    }

    /// Young function interpolated from a monotone table of `(t, G(t))`
    /// nodes (log-log PCHIP between nodes, power extrapolation outside).
    /// Indices come from sampling, widened by the observed grid slack.
    pub fn from_table(ts: &[f64], values: &[f64], label: &str) -> Result<Self> {
        let table = LogLogTable::new(ts, values)?;
        let (lo, hi) = table.slope_range();
        let slack = 1e-6 * (1.0 + hi.abs());
        let y = Self {
            kind: Kind::Tabulated {
                table: Arc::new(table),
            },
            p_minus: lo - slack,
            p_plus: hi + slack,
            label: label.to_string(),
        };
        if !(y.p_minus > 1.0) {
            return Err(Error::InvalidParams(format!(
                "tabulated function has lower index {} <= 1",
                y.p_minus
            )));
        }
        y.validate_density()?;
        Ok(y)
    }

    /// Factory used by the run configuration: family name plus a flat
    /// parameter list (`tabulated` takes interleaved `t, G(t)` pairs).
    /// Validates the density on a sampling grid.
    pub fn make(family: &str, params: &[f64]) -> Result<Self> {
        let y = match family {
            "power" => {
                let p = one_param(family, params)?;
                Self::power(p)?
            }
            "power_log" => {
                let p = one_param(family, params)?;
                Self::power_log(p)?
            }
            "sum_of_powers" => Self::sum_of_powers(params)?,
            "piecewise_power" => {
                if params.len() != 2 {
                    return Err(Error::InvalidParams(format!(
                        "piecewise_power needs [alpha, beta], got {params:?}"
                    )));
                }
                Self::piecewise_power(params[0], params[1])?
            }
            "tabulated" => {
                if params.len() < 8 || !params.len().is_multiple_of(2) {
                    return Err(Error::InvalidParams(
                        "tabulated needs at least 4 interleaved (t, G) pairs".into(),
                    ));
                }
                let ts: Vec<f64> = params.iter().step_by(2).cloned().collect();
                let vs: Vec<f64> = params.iter().skip(1).step_by(2).cloned().collect();
                return Self::from_table(&ts, &vs, "tabulated");
            }
            other => {
                return Err(Error::InvalidParams(format!(
                    "unknown young family `{other}`"
                )))
            }
        };
        y.validate_density()?;
        Ok(y)
    }

    /// Lower Simonenko index.
    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    /// Upper Simonenko index.
    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True for the homogeneous family `t^p/p`, where eigenvalue and
    /// minimizer coincide exactly.
    pub fn is_power(&self) -> bool {
        matches!(self.kind, Kind::Power { .. })
    }

    /// Homogeneity exponent when the function is a pure power.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            Kind::Power { p } => Some(p),
            _ => None,
        }
    }

    /// `G(t)`; arguments `≤ 0` evaluate to 0 (callers pass `|u|`).
    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            // written over the shared factor t^{p-1} so that the index
            // ratio t·g/G evaluates to exactly p in floating point
            Kind::Power { p } => t * t.powf(p - 1.0) / p,
            Kind::PowerLog { p } => t.powf(*p) * t.ln_1p(),
            Kind::SumOfPowers { exponents } => exponents.iter().map(|&p| t.powf(p)).sum(),
            Kind::PiecewisePower { alpha, beta } => {
                if t <= 1.0 {
                    t.powf(*alpha) / alpha
                } else {
                    1.0 / alpha - 1.0 / beta + t.powf(*beta) / beta
                }
            }
            Kind::Conjugate { base } => {
                let w = base.g_inverse(t);
                (t * w - base.value(w)).max(0.0)
            }
            Kind::Tabulated { table } => table.value(t),
        }
    }

    /// Density `g(t) = G'(t)`.
    pub fn derivative(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Power { p } => t.powf(p - 1.0),
            Kind::PowerLog { p } => p * t.powf(p - 1.0) * t.ln_1p() + t.powf(*p) / (1.0 + t),
            Kind::SumOfPowers { exponents } => {
                exponents.iter().map(|&p| p * t.powf(p - 1.0)).sum()
            }
            Kind::PiecewisePower { alpha, beta } => {
                if t <= 1.0 {
                    t.powf(alpha - 1.0)
                } else {
                    t.powf(beta - 1.0)
                }
            }
            Kind::Conjugate { base } => base.g_inverse(t),
            Kind::Tabulated { table } => table.derivative(t),
        }
    }

    /// Odd extension of the density: `g(|t|)·sgn(t)`, with the 0/0 case
    /// defined as 0.
    pub fn derivative_signed(&self, t: f64) -> f64 {
        if t > 0.0 {
            self.derivative(t)
        } else if t < 0.0 {
            -self.derivative(-t)
        } else {
            0.0
        }
    }

    /// `ξ⁻(t) = min{t^{p⁻}, t^{p⁺}}`.
    pub fn xi_minus(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        t.powf(self.p_minus).min(t.powf(self.p_plus))
    }

    /// `ξ⁺(t) = max{t^{p⁻}, t^{p⁺}}`.
    pub fn xi_plus(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        t.powf(self.p_minus).max(t.powf(self.p_plus))
    }

    /// Doubling constant `𝐂 = 2^{p⁺}` of `G(a+b) ≤ 𝐂(G(a)+G(b))`.
    pub fn delta2_constant(&self) -> f64 {
        2f64.powf(self.p_plus)
    }

    /// Inverse of the density by monotone bisection (analytic where the
    /// family allows). `v ≤ 0` maps to 0.
    pub fn g_inverse(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Power { p } => v.powf(1.0 / (p - 1.0)),
            Kind::PiecewisePower { alpha, beta } => {
                if v <= 1.0 {
                    v.powf(1.0 / (alpha - 1.0))
                } else {
                    v.powf(1.0 / (beta - 1.0))
                }
            }
            _ => invert_increasing(|t| self.derivative(t), v, G_INVERSE_RTOL),
        }
    }

    /// Inverse of `G` itself: returns `t` with `|G(t) − v| ≤ rtol·max(v,1)`.
    pub fn inverse(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Power { p } => (v * p).powf(1.0 / p),
            _ => invert_increasing(|t| self.value(t), v, INVERSE_G_RTOL),
        }
    }

    /// Convex conjugate `G̃(t) = sup_w (t·w − G(w)) = ∫₀ᵗ g⁻¹`.
    ///
    /// Fails with [`Error::NonInvertible`] when the density has a flat
    /// segment wider than the inversion tolerance.
    pub fn complementary(&self) -> Result<Self> {
        self.scan_flat_segments()?;
        let conj = |q: f64| q / (q - 1.0);
        Ok(Self {
            kind: Kind::Conjugate {
                base: Arc::new(self.clone()),
            },
            p_minus: conj(self.p_plus),
            p_plus: conj(self.p_minus),
            label: format!("conjugate({})", self.label),
        })
    }

    /// Samples the index ratio `t·g(t)/G(t)` over a log grid and returns
    /// the (inf, sup) widened by the observed adjacent slack. Built-in
    /// families keep their analytic indices in `p_minus`/`p_plus`; this
    /// sampler is the validation route and the only route for tabulated
    /// functions.
    pub fn compute_indices(&self, grid: &IndexGrid) -> Result<IndexEstimate> {
        if grid.points < 1000 || grid.lo > 1e-6 || grid.hi < 1e6 {
            return Err(Error::InvalidParams(format!(
                "index grid must span [1e-6, 1e6] with at least 1000 points, got [{:e}, {:e}] x {}",
                grid.lo, grid.hi, grid.points
            )));
        }
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        let mut slack: f64 = 0.0;
        let mut prev: Option<f64> = None;
        let mut arg_inf = 0.0;
        let mut arg_sup = 0.0;
        for t in grid.samples() {
            let big = self.value(t);
            if big <= 0.0 {
                return Err(Error::DegenerateRatio { t });
            }
            let r = t * self.derivative(t) / big;
            if r < inf {
                inf = r;
                arg_inf = t;
            }
            if r > sup {
                sup = r;
                arg_sup = t;
            }
            if let Some(p) = prev {
                slack = slack.max((r - p).abs());
            }
            prev = Some(r);
        }
        Ok(IndexEstimate {
            p_minus: inf - slack,
            p_plus: sup + slack,
            grid_inf: inf,
            grid_sup: sup,
            slack,
            arg_inf,
            arg_sup,
        })
    }

    /// Structural report: growth condition, convexity of `t ↦ G(√t)`,
    /// subcriticality of the embedding integrals, and the doubling
    /// constant.
    pub fn check_structure(&self, n: usize, s: f64) -> StructureReport {
        let mut witnesses = Vec::new();

        // (g1): sampled ratio within the stored index window, p⁻ > 1.
        let est = self.compute_indices(&DEFAULT_INDEX_GRID);
        let (g1_holds, ratio_range) = match est {
            Ok(e) => {
                let tol = 1e-9 * (1.0 + self.p_plus.abs());
                let mut ok = self.p_minus > 1.0;
                if e.grid_inf < self.p_minus - e.slack - tol {
                    ok = false;
                    witnesses.push(Witness {
                        check: "g1-lower",
                        t: e.arg_inf,
                        value: e.grid_inf,
                    });
                }
                if e.grid_sup > self.p_plus + e.slack + tol {
                    ok = false;
                    witnesses.push(Witness {
                        check: "g1-upper",
                        t: e.arg_sup,
                        value: e.grid_sup,
                    });
                }
                if self.p_minus <= 1.0 {
                    witnesses.push(Witness {
                        check: "g1-degenerate",
                        t: e.arg_inf,
                        value: self.p_minus,
                    });
                }
                (ok, (e.grid_inf, e.grid_sup))
            }
            Err(Error::DegenerateRatio { t }) => {
                witnesses.push(Witness {
                    check: "g1-zero-G",
                    t,
                    value: 0.0,
                });
                (false, (f64::NAN, f64::NAN))
            }
            Err(_) => (false, (f64::NAN, f64::NAN)),
        };

        // (g2): secant slopes of H(t) = G(√t) must be nondecreasing.
        let (g2_holds, g2_worst_gap, g2_witness) = self.convexity_in_sqrt();
        if !g2_holds {
            witnesses.push(Witness {
                check: "g2-concave-segment",
                t: g2_witness,
                value: g2_worst_gap,
            });
        }

        // (g3): near-zero convergence and tail divergence of the
        // critical integrand G⁻¹(τ)·τ^{−(n+s)/n}.
        let q = (n as f64 + s) / n as f64;
        let e0 = self.integrand_exponent(q, 1e-12, 1e-9);
        let einf = self.integrand_exponent(q, 1e9, 1e12);
        let zero_ok = e0 > -1.0 + 1e-3;
        let tail_ok = einf >= -1.0 - 1e-3;
        let g3_holds = zero_ok && tail_ok;
        if !zero_ok {
            witnesses.push(Witness {
                check: "g3-zero-divergent",
                t: 1e-12,
                value: e0,
            });
        }
        if !tail_ok {
            witnesses.push(Witness {
                check: "g3-tail-convergent",
                t: 1e12,
                value: einf,
            });
        }
        let g3_zero_integral = if zero_ok {
            self.critical_integral(q, 1e-14, 1.0)
        } else {
            f64::INFINITY
        };

        StructureReport {
            label: self.label.clone(),
            p_minus: self.p_minus,
            p_plus: self.p_plus,
            g1_holds,
            g2_holds,
            g3_holds,
            delta2_constant: self.delta2_constant(),
            ratio_range,
            g2_worst_gap,
            g3_zero_exponent: e0,
            g3_tail_exponent: einf,
            g3_zero_integral,
            witnesses,
        }
    }

    /// Critical function `G*` of the embedding with dimension `n` and
    /// fractional order `s`, as a monotone tabulated Young function.
    pub fn critical_sobolev(&self, n: usize, s: f64) -> Result<Self> {
        if n == 0 || !(0.0 < s && s < 1.0) {
            return Err(Error::InvalidParams(format!(
                "critical function needs n ≥ 1 and s in (0,1), got n={n}, s={s}"
            )));
        }
        let q = (n as f64 + s) / n as f64;
        let e0 = self.integrand_exponent(q, 1e-12, 1e-9);
        if e0 <= -1.0 + 1e-3 {
            return Err(Error::NotSubcritical { exponent: e0 });
        }

        // Cumulative quadrature of φ(τ) = G⁻¹(τ) τ^{-q} on a log grid,
        // with the analytic power tail below the first node.
        let m = CRITICAL_TABLE_POINTS;
        let (la, lb) = ((1e-14f64).ln(), (1e14f64).ln());
        let dx = (lb - la) / (m - 1) as f64;
        let phi = |tau: f64| self.inverse(tau) * tau.powf(-q);
        let mut taus = Vec::with_capacity(m);
        let mut cum = Vec::with_capacity(m);
        let tau0 = la.exp();
        let head = phi(tau0) * tau0 / (e0 + 1.0);
        let mut acc = head;
        let mut prev_int = phi(tau0) * tau0; // integrand of ∫ φ(e^x) e^x dx
        taus.push(tau0);
        cum.push(acc);
        for i in 1..m {
            let tau = (la + dx * i as f64).exp();
            let integrand = phi(tau) * tau;
            acc += 0.5 * (prev_int + integrand) * dx;
            prev_int = integrand;
            taus.push(tau);
            cum.push(acc);
        }

        // Pairs (u = G*⁻¹(τ), G*(u) = τ) define the table for G*.
        let table = LogLogTable::new(&cum, &taus)?;
        let (pmin, pmax) = table.slope_range();
        let slack = 1e-6 * (1.0 + pmax);
        Ok(Self {
            kind: Kind::Tabulated {
                table: Arc::new(table),
            },
            p_minus: pmin - slack,
            p_plus: pmax + slack,
            label: format!("critical({}, n={n}, s={s})", self.label),
        })
    }

    /// Local log-log slope of the critical integrand over `[lo, hi]`.
    fn integrand_exponent(&self, q: f64, lo: f64, hi: f64) -> f64 {
        let phi = |tau: f64| self.inverse(tau) * tau.powf(-q);
        (phi(hi).ln() - phi(lo).ln()) / (hi.ln() - lo.ln())
    }

    /// Log-trapezoid value of `∫ φ` over `[lo, hi]` plus the analytic
    /// head below `lo`.
    fn critical_integral(&self, q: f64, lo: f64, hi: f64) -> f64 {
        let phi = |tau: f64| self.inverse(tau) * tau.powf(-q);
        let e0 = self.integrand_exponent(q, lo, lo * 1e3);
        let head = if e0 > -1.0 { phi(lo) * lo / (e0 + 1.0) } else { f64::INFINITY };
        let n = 4000;
        let (la, lb) = (lo.ln(), hi.ln());
        let dx = (lb - la) / n as f64;
        let mut acc = 0.0;
        let mut prev = phi(lo) * lo;
        for i in 1..=n {
            let tau = (la + dx * i as f64).exp();
            let f = phi(tau) * tau;
            acc += 0.5 * (prev + f) * dx;
            prev = f;
        }
        head + acc
    }

    /// Convexity of `H(t) = G(√t)` via monotonicity of secant slopes on
    /// a log grid. Returns (holds, worst relative slope drop, witness t).
    fn convexity_in_sqrt(&self) -> (bool, f64, f64) {
        let n = 1200;
        let (la, lb) = ((1e-8f64).ln(), (1e8f64).ln());
        let mut worst = f64::INFINITY;
        let mut witness = 0.0;
        let mut prev_t = la.exp();
        let mut prev_h = self.value(prev_t.sqrt());
        let mut prev_slope: Option<f64> = None;
        for i in 1..n {
            let t = (la + (lb - la) * i as f64 / (n - 1) as f64).exp();
            let h = self.value(t.sqrt());
            let slope = (h - prev_h) / (t - prev_t);
            if let Some(sp) = prev_slope {
                let scale = sp.abs().max(slope.abs()).max(1e-300);
                let gap = (slope - sp) / scale;
                if gap < worst {
                    worst = gap;
                    witness = prev_t;
                }
            }
            prev_slope = Some(slope);
            prev_t = t;
            prev_h = h;
        }
        (worst > -1e-9, worst, witness)
    }

    /// Flat-segment scan used as the precondition of `complementary`:
    /// a run of density values agreeing to 1e-12 relative over a span
    /// wider than the inversion tolerance rules out a usable inverse.
    fn scan_flat_segments(&self) -> Result<()> {
        let n = 3000;
        let (la, lb) = ((1e-9f64).ln(), (1e9f64).ln());
        let mut run_start: Option<(f64, f64)> = None;
        for i in 0..n {
            let t = (la + (lb - la) * i as f64 / (n - 1) as f64).exp();
            let g = self.derivative(t);
            match run_start {
                Some((t0, g0)) if (g - g0).abs() <= 1e-12 * g0.abs() => {
                    let width = t - t0;
                    if width > 1e-12 * t.max(1.0) {
                        return Err(Error::NonInvertible { t: t0, width });
                    }
                }
                _ => run_start = Some((t, g)),
            }
        }
        Ok(())
    }

    /// Density sanity sweep used by the config-facing factory.
    fn validate_density(&self) -> Result<()> {
        let mut prev = 0.0f64;
        for i in 0..600 {
            let t = (-12.0 + 24.0 * i as f64 / 599.0f64).exp2();
            let g = self.derivative(t);
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "density not finite/positive at t={t:e}"
                )));
            }
            if g < prev * (1.0 - 1e-12) {
                return Err(Error::InvalidParams(format!(
                    "density decreases near t={t:e}"
                )));
            }
            prev = g;
        }
        if self.derivative(0.0) != 0.0 {
            return Err(Error::InvalidParams("g(0) must be 0".into()));
        }
        Ok(())
    }
}

fn one_param(family: &str, params: &[f64]) -> Result<f64> {
    if params.len() != 1 {
        return Err(Error::InvalidParams(format!(
            "family `{family}` takes exactly one parameter, got {params:?}"
        )));
    }
    Ok(params[0])
}

/// Monotone bisection for a nondecreasing `f` with `f(0) = 0`:
/// the returned `t` satisfies `f(t) = v` within `rtol` in argument.
fn invert_increasing(f: impl Fn(f64) -> f64, v: f64, rtol: f64) -> f64 {
    let mut hi = 1.0f64;
    let mut guard = 0;
    while f(hi) < v && guard < 4200 {
        hi *= 2.0;
        guard += 1;
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < v {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rtol * hi.max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Result of sampling-based index estimation.
#[derive(Clone, Copy, Debug)]
pub struct IndexEstimate {
    /// Grid infimum widened downward by the slack.
    pub p_minus: f64,
    /// Grid supremum widened upward by the slack.
    pub p_plus: f64,
    pub grid_inf: f64,
    pub grid_sup: f64,
    /// Largest jump of the ratio between adjacent grid points; zero for
    /// a constant ratio, so pure powers come back exact.
    pub slack: f64,
    pub arg_inf: f64,
    pub arg_sup: f64,
}

/// Worst-violation record attached to a structure report.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub check: &'static str,
    pub t: f64,
    pub value: f64,
}

/// Outcome of [`YoungFunction::check_structure`].
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub label: String,
    pub p_minus: f64,
    pub p_plus: f64,
    pub g1_holds: bool,
    pub g2_holds: bool,
    pub g3_holds: bool,
    /// Exactly `2^{p⁺}`.
    pub delta2_constant: f64,
    /// Sampled (inf, sup) of the index ratio.
    pub ratio_range: (f64, f64),
    /// Most negative relative slope increment of `t ↦ G(√t)`.
    pub g2_worst_gap: f64,
    pub g3_zero_exponent: f64,
    pub g3_tail_exponent: f64,
    pub g3_zero_integral: f64,
    pub witnesses: Vec<Witness>,
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "label            = {}", self.label)?;
        writeln!(f, "p_minus          = {}", self.p_minus)?;
        writeln!(f, "p_plus           = {}", self.p_plus)?;
        writeln!(f, "g1_holds         = {}", self.g1_holds)?;
        writeln!(f, "g2_holds         = {}", self.g2_holds)?;
        writeln!(f, "g3_holds         = {}", self.g3_holds)?;
        writeln!(f, "delta2_constant  = {}", self.delta2_constant)?;
        writeln!(
            f,
            "ratio_range      = [{}, {}]",
            self.ratio_range.0, self.ratio_range.1
        )?;
        writeln!(f, "g2_worst_gap     = {:e}", self.g2_worst_gap)?;
        writeln!(f, "g3_zero_exponent = {}", self.g3_zero_exponent)?;
        writeln!(f, "g3_tail_exponent = {}", self.g3_tail_exponent)?;
        writeln!(f, "g3_zero_integral = {:e}", self.g3_zero_integral)?;
        for w in &self.witnesses {
            writeln!(f, "witness          = {} at t={:e} value={:e}", w.check, w.t, w.value)?;
        }
        Ok(())
    }
}

/// Per-`a` threshold found by the essential-domination scan.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DominationThreshold {
    pub a: f64,
    /// Smallest sampled `x` beyond which `A(x) ≤ B(ax)` held through the
    /// end of the scan; `None` when the comparison failed persistently.
    pub threshold: Option<f64>,
}

/// Outcome of [`essentially_stronger`].
#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub holds: bool,
    pub thresholds: Vec<DominationThreshold>,
}

/// Decides `A ≺≺ B` (for each `a > 0` eventually `A(x) ≤ B(ax)`) by a
/// finite scan over `a ∈ {1, 0.5, 0.1, 0.01}` and `x` log-spaced on
/// `[1e-2, 1e12]`. Returns [`Error::Inconclusive`] when the comparison
/// still oscillates within the last sampled decade instead of guessing.
pub fn essentially_stronger(a_fn: &YoungFunction, b_fn: &YoungFunction) -> Result<DominationReport> {
    const A_SET: [f64; 4] = [1.0, 0.5, 0.1, 0.01];
    let n = 1800;
    let (la, lb) = ((1e-2f64).ln(), (1e12f64).ln());
    let xs: Vec<f64> = (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect();
    let last_decade = xs.iter().position(|&x| x >= 1e11).unwrap_or(n - 1);

    let mut holds = true;
    let mut thresholds = Vec::new();
    for &a in &A_SET {
        let ok: Vec<bool> = xs
            .iter()
            .map(|&x| a_fn.value(x) <= b_fn.value(a * x) * (1.0 + 1e-12))
            .collect();
        let last_fail = ok.iter().rposition(|&b| !b);
        match last_fail {
            None => thresholds.push(DominationThreshold {
                a,
                threshold: Some(xs[0]),
            }),
            Some(i) if i == n - 1 => {
                let tail_has_pass = ok[last_decade..].iter().any(|&b| b);
                if tail_has_pass {
                    return Err(Error::Inconclusive { a });
                }
                holds = false;
                thresholds.push(DominationThreshold { a, threshold: None });
            }
            Some(i) => thresholds.push(DominationThreshold {
                a,
                threshold: Some(xs[i + 1]),
            }),
        }
    }
    Ok(DominationReport { holds, thresholds })
}

/// Strictly increasing log-log table with monotone cubic (PCHIP)
/// interpolation and power-law extrapolation from the end slopes.
#[derive(Clone, Debug)]
pub struct LogLogTable {
    ln_x: Vec<f64>,
    ln_y: Vec<f64>,
    slope: Vec<f64>,
}

impl LogLogTable {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() || x.len() < 4 {
            return Err(Error::InvalidParams(
                "table needs matching x/y with at least 4 nodes".into(),
            ));
        }
        let mut ln_x = Vec::with_capacity(x.len());
        let mut ln_y = Vec::with_capacity(x.len());
        for (&a, &b) in x.iter().zip(y) {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::InvalidParams("table nodes must be positive".into()));
            }
            if let Some(&last) = ln_x.last() {
                if a.ln() <= last {
                    continue; // drop non-increasing duplicates
                }
            }
            ln_x.push(a.ln());
            ln_y.push(b.ln());
        }
        let slope = pchip_slopes(&ln_x, &ln_y);
        Ok(Self { ln_x, ln_y, slope })
    }

    fn locate(&self, lx: f64) -> usize {
        match self
            .ln_x
            .binary_search_by(|v| v.partial_cmp(&lx).unwrap())
        {
            Ok(i) => i.min(self.ln_x.len() - 2),
            Err(0) => 0,
            Err(i) if i >= self.ln_x.len() => self.ln_x.len() - 2,
            Err(i) => i - 1,
        }
    }

    fn eval_ln(&self, lx: f64) -> (f64, f64) {
        let n = self.ln_x.len();
        if lx <= self.ln_x[0] {
            let d = self.slope[0];
            return (self.ln_y[0] + d * (lx - self.ln_x[0]), d);
        }
        if lx >= self.ln_x[n - 1] {
            let d = self.slope[n - 1];
            return (self.ln_y[n - 1] + d * (lx - self.ln_x[n - 1]), d);
        }
        let i = self.locate(lx);
        let h = self.ln_x[i + 1] - self.ln_x[i];
        let t = (lx - self.ln_x[i]) / h;
        let (y0, y1) = (self.ln_y[i], self.ln_y[i + 1]);
        let (m0, m1) = (self.slope[i] * h, self.slope[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let val = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let dval = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        (val, dval)
    }

    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.eval_ln(x.ln()).0.exp()
    }

    /// Derivative via the chain rule `y'(x) = y/x · d ln y/d ln x`.
    pub fn derivative(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let (ly, d) = self.eval_ln(x.ln());
        (ly.exp() / x) * d.max(0.0)
    }

    /// Range of log-log slopes, i.e. of the index ratio at the nodes.
    pub fn slope_range(&self) -> (f64, f64) {
        let lo = self.slope.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.slope.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// Fritsch–Carlson monotone slopes.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut h = Vec::with_capacity(n - 1);
    let mut delta = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let hi = x[i + 1] - x[i];
        h.push(hi);
        delta.push((y[i + 1] - y[i]) / hi);
    }
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_family_evaluates() {
        let y = YoungFunction::power(2.0).unwrap();
        assert_relative_eq!(y.value(2.0), 2.0);
        assert_relative_eq!(y.derivative(2.0), 2.0);
        assert_eq!(y.value(0.0), 0.0);
        assert_eq!(y.derivative(0.0), 0.0);
    }

    #[test]
    fn subunit_exponent_rejected() {
        assert!(matches!(
            YoungFunction::make("power", &[0.9]),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn sum_of_powers_evaluates() {
        let y = YoungFunction::make("sum_of_powers", &[2.0, 4.0]).unwrap();
        assert_relative_eq!(y.value(1.0), 2.0);
        assert_relative_eq!(y.derivative(1.0), 6.0);
        assert_eq!((y.p_minus(), y.p_plus()), (2.0, 4.0));
    }

    #[test]
    fn indices_exact_for_powers() {
        let y = YoungFunction::power(3.0).unwrap();
        let est = y.compute_indices(&DEFAULT_INDEX_GRID).unwrap();
        assert_eq!(est.p_minus, 3.0);
        assert_eq!(est.p_plus, 3.0);
        assert_eq!(est.slack, 0.0);
    }

    #[test]
    fn indices_for_sum_of_powers() {
        let y = YoungFunction::sum_of_powers(&[2.0, 4.0]).unwrap();
        let est = y.compute_indices(&DEFAULT_INDEX_GRID).unwrap();
        assert!((est.grid_inf - 2.0).abs() < 1e-9, "inf {}", est.grid_inf);
        assert!((est.grid_sup - 4.0).abs() < 1e-9, "sup {}", est.grid_sup);
    }

    // Sampling oracle for the log-perturbed family: the analytic limits
    // of t·g/G for G = t^p ln(1+t) are p (t → ∞) and p+1 (t → 0).
    #[test]
    fn indices_for_power_log() {
        let y = YoungFunction::power_log(2.0).unwrap();
        assert_eq!((y.p_minus(), y.p_plus()), (2.0, 3.0));
        let est = y.compute_indices(&DEFAULT_INDEX_GRID).unwrap();
        assert!(est.grid_inf > 2.0 && est.grid_inf < 2.1, "inf {}", est.grid_inf);
        assert!(est.grid_sup > 2.999 && est.grid_sup <= 3.0, "sup {}", est.grid_sup);
    }

    #[test]
    fn conjugate_of_square_is_self_dual() {
        let y = YoungFunction::power(2.0).unwrap();
        let c = y.complementary().unwrap();
        assert_relative_eq!(c.value(3.0), 4.5, max_relative = 1e-10);
    }

    #[test]
    fn conjugate_of_cubic() {
        let y = YoungFunction::power(3.0).unwrap();
        let c = y.complementary().unwrap();
        // conjugate of t³/3 is t^{3/2}/(3/2)
        assert_relative_eq!(c.value(1.0), 2.0 / 3.0, max_relative = 1e-10);
        assert_relative_eq!(c.p_minus(), 1.5);
        assert_relative_eq!(c.p_plus(), 1.5);
    }

    // Exhaustive grid oracle for Young's inequality ab ≤ G(a) + G̃(b).
    #[test]
    fn young_inequality_on_grid() {
        let y = YoungFunction::power_log(2.0).unwrap();
        let c = y.complementary().unwrap();
        for i in 0..=40 {
            for j in 0..=40 {
                let a = 10.0 * i as f64 / 40.0;
                let b = 10.0 * j as f64 / 40.0;
                let lhs = a * b;
                let rhs = y.value(a) + c.value(b);
                assert!(
                    lhs <= rhs * (1.0 + 1e-10) + 1e-12,
                    "violated at a={a}, b={b}: {lhs} > {rhs}"
                );
            }
        }
    }

    #[test]
    fn inverse_roundtrips() {
        let y = YoungFunction::power(2.0).unwrap();
        assert_relative_eq!(y.inverse(2.0), 2.0, max_relative = 1e-12);
        assert_eq!(y.inverse(0.0), 0.0);

        let yl = YoungFunction::power_log(2.0).unwrap();
        let t = yl.inverse(5.0);
        assert_relative_eq!(yl.value(t), 5.0, max_relative = 1e-10);
    }

    #[test]
    fn inverse_is_monotone() {
        let y = YoungFunction::power_log(2.5).unwrap();
        let mut prev = 0.0;
        for i in 1..50 {
            let v = 10f64.powf(-4.0 + 8.0 * i as f64 / 49.0);
            let t = y.inverse(v);
            assert!(t >= prev);
            prev = t;
        }
    }

    #[test]
    fn structure_power2() {
        let y = YoungFunction::power(2.0).unwrap();
        let rep = y.check_structure(1, 0.25);
        assert!(rep.g1_holds);
        assert!(rep.g2_holds, "G(√t) = t/2 is linear, hence convex");
        assert!(rep.g3_holds);
        assert_eq!(rep.delta2_constant, 4.0);
    }

    #[test]
    fn structure_power_1_5_fails_g2() {
        let y = YoungFunction::power(1.5).unwrap();
        let rep = y.check_structure(1, 0.25);
        assert!(!rep.g2_holds, "G(√t) = t^{{0.75}}/1.5 is concave");
        assert!(rep.witnesses.iter().any(|w| w.check == "g2-concave-segment"));
    }

    // Second-difference oracle with h-refinement: convexity of G(√t) for
    // the log-perturbed family is confirmed at shrinking steps.
    #[test]
    fn structure_power_log_g2_by_second_differences() {
        let y = YoungFunction::power_log(2.3).unwrap();
        let rep = y.check_structure(1, 0.25);
        assert!(rep.g2_holds);
        let h_of = |t: f64| y.value(t.sqrt());
        for &t in &[0.3, 1.0, 7.0, 80.0] {
            for &h in &[1e-2, 1e-3] {
                let d2 = h_of(t + h) - 2.0 * h_of(t) + h_of(t - h);
                assert!(d2 > -1e-12, "second difference at t={t}, h={h}: {d2}");
            }
        }
    }

    #[test]
    fn critical_function_power_case_slope() {
        // n = 1, s = 0.25, p = 2 → G* grows like t^{np/(n-sp)} = t⁴.
        let y = YoungFunction::power(2.0).unwrap();
        let star = y.critical_sobolev(1, 0.25).unwrap();
        let slope =
            (star.value(1e4).ln() - star.value(1e2).ln()) / ((1e4f64).ln() - (1e2f64).ln());
        assert!((slope - 4.0).abs() < 0.02, "log-log slope {slope}");
    }

    #[test]
    fn critical_function_critical_s_rejected() {
        let y = YoungFunction::power(2.0).unwrap();
        match y.critical_sobolev(1, 0.5) {
            Err(Error::NotSubcritical { exponent }) => {
                assert!((exponent + 1.0).abs() < 1e-3, "exponent {exponent}")
            }
            other => panic!("expected NotSubcritical, got {other:?}"),
        }
    }

    // Convexity via second differences on samples.
    #[test]
    fn critical_function_monotone_and_convex() {
        let y = YoungFunction::power(2.0).unwrap();
        let star = y.critical_sobolev(1, 0.1).unwrap();
        let mut prev = 0.0;
        for i in 0..200 {
            let t = 10f64.powf(-3.0 + 6.0 * i as f64 / 199.0);
            let v = star.value(t);
            assert!(v > prev);
            prev = v;
        }
        for i in 1..60 {
            let t = 10f64.powf(-1.0 + 2.0 * i as f64 / 60.0);
            let h = 0.05 * t;
            let d2 = star.value(t + h) - 2.0 * star.value(t) + star.value(t - h);
            assert!(d2 > -1e-8 * star.value(t), "d2 at t={t}: {d2}");
        }
    }

    #[test]
    fn domination_basic_cases() {
        let t2 = YoungFunction::power(2.0).unwrap();
        let t3 = YoungFunction::power(3.0).unwrap();
        assert!(essentially_stronger(&t2, &t3).unwrap().holds);
        assert!(!essentially_stronger(&t3, &t2).unwrap().holds);
    }

    #[test]
    fn domination_fails_for_scaled_copy() {
        // 2t² does not essentially dominate t²: fails for a < 1/√2.
        let a = YoungFunction::power(2.0).unwrap();
        let b = YoungFunction::sum_of_powers(&[2.0]).unwrap(); // t²
        let rep = essentially_stronger(&b, &a).unwrap();
        assert!(!rep.holds);
    }

    #[test]
    fn piecewise_power_density_is_continuous() {
        let y = YoungFunction::piecewise_power(1.5, 4.0).unwrap();
        assert_relative_eq!(y.derivative(1.0), 1.0);
        assert_relative_eq!(y.derivative(1.0 + 1e-12), 1.0, max_relative = 1e-9);
        assert_eq!((y.p_minus(), y.p_plus()), (1.5, 4.0));
    }

    #[test]
    fn quadrature_identity_g_integrates_to_big_g() {
        for y in [
            YoungFunction::power(2.0).unwrap(),
            YoungFunction::power_log(2.0).unwrap(),
            YoungFunction::piecewise_power(1.5, 4.0).unwrap(),
        ] {
            for &t in &[0.37, 1.0, 5.3] {
                let n = 20000;
                let dt = t / n as f64;
                let mut acc = 0.0;
                for i in 0..n {
                    let a = i as f64 * dt;
                    let b = a + dt;
                    acc += dt / 6.0
                        * (y.derivative(a) + 4.0 * y.derivative(0.5 * (a + b)) + y.derivative(b));
                }
                assert_relative_eq!(acc, y.value(t), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn tabulated_family_roundtrips() {
        // sample t³/3 on a log grid and rebuild it from the table
        let base = YoungFunction::power(3.0).unwrap();
        let mut params = Vec::new();
        for i in 0..64 {
            let t = 10f64.powf(-4.0 + 8.0 * i as f64 / 63.0);
            params.push(t);
            params.push(base.value(t));
        }
        let tab = YoungFunction::make("tabulated", &params).unwrap();
        assert!((tab.p_minus() - 3.0).abs() < 1e-3);
        assert!((tab.p_plus() - 3.0).abs() < 1e-3);
        for &t in &[1e-3, 0.3, 1.0, 40.0, 1e3] {
            assert_relative_eq!(tab.value(t), base.value(t), max_relative = 1e-6);
        }
        // extrapolation beyond the table keeps the power growth
        assert_relative_eq!(tab.value(1e6), base.value(1e6), max_relative = 1e-4);
    }

    #[test]
    fn flat_density_segment_blocks_the_conjugate() {
        // hand-built table with a constant stretch of G, so the density
        // vanishes identically over it (bypasses the factory validation
        // to exercise the guard)
        let ts = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
        let gs = [0.25, 1.0, 1.0, 1.0, 64.0, 256.0];
        let table = LogLogTable::new(&ts, &gs).unwrap();
        let y = YoungFunction {
            kind: Kind::Tabulated {
                table: Arc::new(table),
            },
            p_minus: 2.0,
            p_plus: 3.0,
            label: "flat-stretch".into(),
        };
        assert_eq!(y.derivative(2.0), 0.0, "plateau has zero density");
        match y.complementary() {
            Err(Error::NonInvertible { width, .. }) => assert!(width > 1e-12),
            other => panic!("expected NonInvertible, got {other:?}"),
        }
    }

    #[test]
    fn conjugate_indices_are_conjugate_exponents() {
        let y = YoungFunction::power_log(2.0).unwrap(); // (2, 3)
        let c = y.complementary().unwrap();
        assert_relative_eq!(c.p_minus(), 1.5); // 3/(3-1)
        assert_relative_eq!(c.p_plus(), 2.0); // 2/(2-1)
        let est = c.compute_indices(&DEFAULT_INDEX_GRID).unwrap();
        assert!(est.grid_inf > 1.49 && est.grid_sup < 2.01);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // growth sandwich and doubling across random arguments AND
            // random family parameters
            #[test]
            fn growth_and_doubling_hold(
                p in 1.1..4.0f64,
                a in 1e-3..1e3f64,
                b in 1e-3..1e3f64,
            ) {
                let y = YoungFunction::power_log(p).unwrap();
                let gab = y.value(a * b);
                prop_assert!(y.xi_minus(a) * y.value(b) <= gab * (1.0 + 1e-10));
                prop_assert!(gab <= y.xi_plus(a) * y.value(b) * (1.0 + 1e-10));
                let lhs = y.value(a + b);
                let rhs = y.delta2_constant() * (y.value(a) + y.value(b));
                prop_assert!(lhs <= rhs * (1.0 + 1e-10));
            }

            // the defining property of the conjugate: the product never
            // beats the sum, and equality is reached on the contact set
            #[test]
            fn conjugate_duality_holds(
                p in 1.2..3.5f64,
                a in 1e-3..1e2f64,
                b in 1e-3..1e2f64,
            ) {
                let y = YoungFunction::power_log(p).unwrap();
                let c = y.complementary().unwrap();
                let rhs = y.value(a) + c.value(b);
                prop_assert!(a * b <= rhs * (1.0 + 1e-10));
                // contact: b = g(a) makes Young's inequality an equality
                let gb = y.derivative(a);
                let touch = y.value(a) + c.value(gb);
                prop_assert!((a * gb - touch).abs() <= 1e-8 * (1.0 + touch.abs()));
            }

            // inversion is a two-sided roundtrip on the sampled range
            #[test]
            fn inverse_roundtrip_property(p in 1.1..4.0f64, v in 1e-6..1e6f64) {
                let y = YoungFunction::power_log(p).unwrap();
                let t = y.inverse(v);
                prop_assert!((y.value(t) - v).abs() <= 1e-9 * v.max(1.0));
                let w = y.g_inverse(y.derivative(t));
                prop_assert!((w - t).abs() <= 1e-9 * t.max(1e-9));
            }
        }
    }
}
