//! Discrete modulars and Luxemburg norms.
//!
//! Pairwise modulars sum the symmetric integrand `G(|D_s u|)` against
//! the measure weights over *ordered* pairs of distinct nodes, matching
//! the double integrals they discretize; since the summand is symmetric
//! this is computed as twice the unordered-pair sum. Three pair regions
//! appear:
//!
//! - `Full`: all pairs (the seminorm over the whole space),
//! - `Regional`: interior × interior,
//! - `Star`: all pairs except exterior × exterior.
//!
//! The regional pair set is contained in the star set, which is
//! contained in the full set, so the corresponding modulars are ordered
//! for every function.
//!
//! A Luxemburg norm is `inf { λ > 0 : Φ(u/λ) ≤ 1 }`, computed by
//! bisection on the strictly decreasing map `λ ↦ Φ(u/λ)`; the bracket is
//! grown/shrunk geometrically before bisecting, so no a-priori bound is
//! needed.

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Region};
use crate::young::YoungFunction;
use rayon::prelude::*;

/// Relative tolerance of the Luxemburg bisection.
pub const LUXEMBURG_RTOL: f64 = 1e-10;

/// Pair regions of the double-integral modulars.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRegion {
    Full,
    Regional,
    Star,
}

impl PairRegion {
    /// Membership of the ordered pair `(i, j)` by node regions.
    #[inline]
    pub fn admits(&self, ri: Region, rj: Region) -> bool {
        match self {
            PairRegion::Full => true,
            PairRegion::Regional => ri == Region::Interior && rj == Region::Interior,
            PairRegion::Star => ri == Region::Interior || rj == Region::Interior,
        }
    }
}

/// Node regions of the single-integral modular.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeRegion {
    Interior,
    Exterior,
}

/// Exterior weight β, constant or tabulated per exterior node (in the
/// order of `domain.exterior()`).
#[derive(Clone, Debug)]
pub enum Beta {
    Constant(f64),
    PerExterior(Vec<f64>),
}

impl Beta {
    pub fn validate(&self, domain: &crate::grid::DiscreteDomain) -> Result<()> {
        match self {
            Beta::Constant(b) => {
                if !(*b > 0.0) || !b.is_finite() {
                    return Err(Error::NonPositiveBeta {
                        node: 0,
                        value: *b,
                    });
                }
            }
            Beta::PerExterior(v) => {
                if v.len() != domain.exterior().len() {
                    return Err(Error::ValidationError(format!(
                        "beta table has {} entries for {} exterior nodes",
                        v.len(),
                        domain.exterior().len()
                    )));
                }
                for (rank, &b) in v.iter().enumerate() {
                    if !(b > 0.0) || !b.is_finite() {
                        return Err(Error::NonPositiveBeta {
                            node: domain.exterior()[rank],
                            value: b,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Weight of the exterior node with the given rank.
    #[inline]
    pub fn at(&self, ext_rank: usize) -> f64 {
        match self {
            Beta::Constant(b) => *b,
            Beta::PerExterior(v) => v[ext_rank],
        }
    }
}

/// `Φ_G(u)` over one node region: `Σ G(|u_i|)·h^n`, optionally weighted
/// by β on the exterior.
pub fn modular_g(
    y: &YoungFunction,
    u: &GridFunction,
    region: NodeRegion,
    beta: Option<&Beta>,
) -> Result<f64> {
    let d = u.domain();
    if let Some(b) = beta {
        b.validate(d)?;
    }
    let w = d.cell_weight();
    let sum = match region {
        NodeRegion::Interior => d
            .interior()
            .iter()
            .map(|&i| y.value(u.at(i).abs()) * w)
            .sum(),
        NodeRegion::Exterior => d
            .exterior()
            .iter()
            .enumerate()
            .map(|(rank, &i)| {
                let bw = beta.map_or(1.0, |b| b.at(rank));
                bw * y.value(u.at(i).abs()) * w
            })
            .sum(),
    };
    Ok(sum)
}

/// Deterministic parallel reduction over unordered pairs: per-row
/// partial sums are computed in parallel (each row sequentially) and
/// folded in row order, so results do not depend on thread scheduling.
pub(crate) fn pair_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for j in (i + 1)..n {
                acc += f(i, j);
            }
            acc
        })
        .collect();
    rows.into_iter().sum()
}

/// `Φ_{s,G}(u)` over a pair region: the ordered-pair sum of
/// `G(|D_s u|)·dμ`-weights (twice the unordered sum).
pub fn modular_sg(y: &YoungFunction, u: &GridFunction, region: PairRegion) -> f64 {
    let d = u.domain();
    let n = d.node_count();
    let ks = d.kernel_s();
    let mu = d.kernel_mu();
    2.0 * pair_sum(n, |i, j| {
        if !region.admits(d.region(i), d.region(j)) {
            return 0.0;
        }
        let q = (u.at(i) - u.at(j)) * ks.at(i, j);
        if q == 0.0 {
            0.0
        } else {
            y.value(q.abs()) * mu.at(i, j)
        }
    })
}

/// Luxemburg norm of a modular given as a closure `λ ↦ Φ(u/λ)`.
///
/// Returns 0 when the modular stays ≤ 1 for every scale (the zero
/// function, or a constant under a seminorm-type modular). Otherwise the
/// bracket `Φ(u/lo) > 1 ≥ Φ(u/hi)` is grown geometrically and bisected.
pub fn luxemburg_norm(modular_scaled: impl Fn(f64) -> f64, scale_hint: f64) -> f64 {
    let start = scale_hint.max(1e-300);
    let (mut lo, mut hi);
    if modular_scaled(start) > 1.0 {
        lo = start;
        hi = start * 2.0;
        let mut guard = 0;
        while modular_scaled(hi) > 1.0 {
            lo = hi;
            hi *= 2.0;
            guard += 1;
            if guard > 4200 || !hi.is_finite() {
                return f64::INFINITY;
            }
        }
    } else {
        hi = start;
        lo = start / 2.0;
        let mut guard = 0;
        while modular_scaled(lo) <= 1.0 {
            hi = lo;
            lo /= 2.0;
            guard += 1;
            if guard > 4200 || lo < 1e-300 {
                return 0.0;
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if modular_scaled(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= LUXEMBURG_RTOL * hi {
            break;
        }
    }
    hi
}

/// Luxemburg norm of `Φ_{G,Ω}` (interior).
pub fn norm_lg(y: &YoungFunction, u: &GridFunction) -> f64 {
    if u.interior_max_abs() == 0.0 {
        return 0.0;
    }
    let hint = u.max_abs() * u.domain().node_count() as f64;
    luxemburg_norm(
        |lam| modular_g(y, &u.scaled(1.0 / lam), NodeRegion::Interior, None).unwrap(),
        hint,
    )
}

/// Luxemburg seminorm of `Φ_{s,G}` over a pair region.
pub fn seminorm_sg(y: &YoungFunction, u: &GridFunction, region: PairRegion) -> f64 {
    if modular_sg(y, u, region) == 0.0 {
        return 0.0;
    }
    let hint = u.max_abs() * u.domain().node_count() as f64;
    luxemburg_norm(|lam| modular_sg(y, &u.scaled(1.0 / lam), region), hint)
}

/// Luxemburg norm of the β-weighted exterior modular.
pub fn norm_lg_beta(y: &YoungFunction, u: &GridFunction, beta: &Beta) -> Result<f64> {
    beta.validate(u.domain())?;
    let ext_max = u
        .domain()
        .exterior()
        .iter()
        .fold(0.0f64, |m, &i| m.max(u.at(i).abs()));
    if ext_max == 0.0 {
        return Ok(0.0);
    }
    let hint = u.max_abs() * u.domain().node_count() as f64;
    Ok(luxemburg_norm(
        |lam| modular_g(y, &u.scaled(1.0 / lam), NodeRegion::Exterior, Some(beta)).unwrap(),
        hint,
    ))
}

/// The combined space norm: star seminorm + interior Orlicz norm +
/// β-weighted exterior norm.
pub fn x_norm(y: &YoungFunction, u: &GridFunction, beta: &Beta) -> Result<f64> {
    Ok(seminorm_sg(y, u, PairRegion::Star) + norm_lg(y, u) + norm_lg_beta(y, u, beta)?)
}
