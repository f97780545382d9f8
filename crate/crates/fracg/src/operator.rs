//! Matrix-free discrete fractional g-Laplacian and its companions.
//!
//! At an interior node the operator is the principal-value sum
//!
//! ```text
//! (−Δ_g)^s u(x_i) = 2 Σ_{j≠i} g(|D_s u(i,j)|) sgn(D_s u(i,j)) h^n |x_i−x_j|^{−(n+s)},
//! ```
//!
//! with the 0/0 integrand defined as 0 where `u_i = u_j`. The regional
//! variant restricts `j` to interior nodes. The nonlocal normal
//! derivative carries the same leading 2 and sums over interior `j` at
//! exterior nodes; with that normalization the discrete divergence
//! identity and the integration-by-parts identity are exact
//! rearrangements of one finite sum, and every pairing below is the
//! directional derivative of the matching seminorm modular. (Keeping the
//! factor on only one of the two densities would break both identities
//! by a factor of two.)

use crate::grid::{GridFunction, Region};
use crate::modulars::{pair_sum, PairRegion};
use crate::young::YoungFunction;
use rayon::prelude::*;

/// Pair range of the operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Full,
    Regional,
}

/// Applies the operator at every interior node; exterior entries of the
/// result are zero. Odd in `u` by construction.
pub fn apply_operator(y: &YoungFunction, u: &GridFunction, kind: OperatorKind) -> GridFunction {
    let d = u.domain();
    let n = d.node_count();
    let ks = d.kernel_s();
    let mu = d.kernel_mu();
    let inv_w = 1.0 / d.cell_weight();
    let restrict_interior = kind == OperatorKind::Regional;

    let mut out = GridFunction::zeros(d);
    let interior: Vec<usize> = d.interior().to_vec();
    let vals: Vec<f64> = interior
        .par_iter()
        .map(|&i| {
            let mut acc = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                if restrict_interior && d.region(j) != Region::Interior {
                    continue;
                }
                let q = (u.at(i) - u.at(j)) * ks.at(i, j);
                if q != 0.0 {
                    acc += y.derivative_signed(q) * ks.at(i, j) * mu.at(i, j);
                }
            }
            2.0 * acc * inv_w
        })
        .collect();
    for (&i, v) in interior.iter().zip(vals) {
        out.values_mut()[i] = v;
    }
    out
}

/// Nonlocal normal derivative at every exterior node; interior entries
/// of the result are zero.
pub fn normal_derivative(y: &YoungFunction, u: &GridFunction) -> GridFunction {
    let d = u.domain();
    let ks = d.kernel_s();
    let mu = d.kernel_mu();
    let inv_w = 1.0 / d.cell_weight();

    let mut out = GridFunction::zeros(d);
    let exterior: Vec<usize> = d.exterior().to_vec();
    let interior: Vec<usize> = d.interior().to_vec();
    let vals: Vec<f64> = exterior
        .par_iter()
        .map(|&i| {
            let mut acc = 0.0;
            for &j in &interior {
                let q = (u.at(i) - u.at(j)) * ks.at(i, j);
                if q != 0.0 {
                    acc += y.derivative_signed(q) * ks.at(i, j) * mu.at(i, j);
                }
            }
            2.0 * acc * inv_w
        })
        .collect();
    for (&i, v) in exterior.iter().zip(vals) {
        out.values_mut()[i] = v;
    }
    out
}

/// Pairing kind; `Star` excludes exterior × exterior pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingKind {
    Full,
    Regional,
    Star,
}

impl PairingKind {
    pub fn pair_region(self) -> PairRegion {
        match self {
            PairingKind::Full => PairRegion::Full,
            PairingKind::Regional => PairRegion::Regional,
            PairingKind::Star => PairRegion::Star,
        }
    }
}

/// Duality pairing `Σ g(|D_s u|) sgn(D_s u) D_s v dμ` over the ordered
/// pairs of the kind; equals the directional derivative of the matching
/// seminorm modular at `u` in direction `v`. Bilinear in `v`, and
/// `pairing(u, u, ·) ≥ 0`.
pub fn pairing(y: &YoungFunction, u: &GridFunction, v: &GridFunction, kind: PairingKind) -> f64 {
    let d = u.domain();
    assert!(
        std::sync::Arc::ptr_eq(d, v.domain()),
        "pairing arguments live on different domains"
    );
    let region = kind.pair_region();
    let n = d.node_count();
    let ks = d.kernel_s();
    let mu = d.kernel_mu();
    2.0 * pair_sum(n, |i, j| {
        if !region.admits(d.region(i), d.region(j)) {
            return 0.0;
        }
        let qu = (u.at(i) - u.at(j)) * ks.at(i, j);
        if qu == 0.0 {
            return 0.0;
        }
        let qv = (v.at(i) - v.at(j)) * ks.at(i, j);
        y.derivative_signed(qu) * qv * mu.at(i, j)
    })
}

/// Gradient of the seminorm modular `u ↦ Φ_{s,G}(u; region)` with
/// respect to the node values, as a full-length grid function.
pub fn seminorm_gradient(y: &YoungFunction, u: &GridFunction, region: PairRegion) -> GridFunction {
    let d = u.domain();
    let n = d.node_count();
    let ks = d.kernel_s();
    let mu = d.kernel_mu();
    let vals: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let rk = d.region(k);
            let mut acc = 0.0;
            for j in 0..n {
                if j == k || !region.admits(rk, d.region(j)) {
                    continue;
                }
                let q = (u.at(k) - u.at(j)) * ks.at(k, j);
                if q != 0.0 {
                    acc += y.derivative_signed(q) * ks.at(k, j) * mu.at(k, j);
                }
            }
            2.0 * acc
        })
        .collect();
    GridFunction::from_values(d, vals)
}

/// Seminorm modular value and gradient in one pairwise sweep.
pub fn seminorm_value_and_gradient(
    y: &YoungFunction,
    u: &GridFunction,
    region: PairRegion,
) -> (f64, GridFunction) {
    let d = u.domain();
    let n = d.node_count();
    let ks = d.kernel_s();
    let mu = d.kernel_mu();
    let rows: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let rk = d.region(k);
            let mut grad = 0.0;
            let mut val = 0.0;
            for j in 0..n {
                if j == k || !region.admits(rk, d.region(j)) {
                    continue;
                }
                let q = (u.at(k) - u.at(j)) * ks.at(k, j);
                if q != 0.0 {
                    grad += y.derivative_signed(q) * ks.at(k, j) * mu.at(k, j);
                    val += y.value(q.abs()) * mu.at(k, j);
                }
            }
            (val, 2.0 * grad)
        })
        .collect();
    // each ordered pair was visited once through its first index
    let value = rows.iter().map(|r| r.0).sum();
    let grad = GridFunction::from_values(d, rows.into_iter().map(|r| r.1).collect());
    (value, grad)
}

/// Interior antisymmetric cancellation, summed pair-by-pair so the
/// result is exactly zero in floating point: each unordered interior
/// pair contributes `t + (−t)`.
pub fn interior_cancellation(y: &YoungFunction, u: &GridFunction) -> f64 {
    let d = u.domain();
    let ks = d.kernel_s();
    let mu = d.kernel_mu();
    let interior: Vec<usize> = d.interior().to_vec();
    let mut acc = 0.0;
    for (a, &i) in interior.iter().enumerate() {
        for &j in interior.iter().skip(a + 1) {
            let q = (u.at(i) - u.at(j)) * ks.at(i, j);
            if q != 0.0 {
                let t = y.derivative_signed(q) * ks.at(i, j) * mu.at(i, j);
                acc += t + (-t);
            }
        }
    }
    acc
}

/// Fractional perimeter of Ω under the kernel density `g`.
#[derive(Clone, Copy, Debug)]
pub struct PerimeterResult {
    pub value: f64,
    /// Kernel mass beyond the collar, inherited from the grid build.
    pub truncation_tail: f64,
}

/// `Per_{s,g}(Ω) = Σ_{i∈Ω, j∈Ωᶜ} g(|x_i−x_j|^{−s}) h^{2n} |x_i−x_j|^{−(n+s)}`,
/// over the truncated exterior.
pub fn perimeter(y: &YoungFunction, domain: &crate::grid::DiscreteDomain) -> PerimeterResult {
    let ks = domain.kernel_s();
    let mu = domain.kernel_mu();
    let interior: Vec<usize> = domain.interior().to_vec();
    let exterior: Vec<usize> = domain.exterior().to_vec();
    let rows: Vec<f64> = interior
        .par_iter()
        .map(|&i| {
            let mut acc = 0.0;
            for &j in &exterior {
                acc += y.derivative(ks.at(i, j)) * ks.at(i, j) * mu.at(i, j);
            }
            acc
        })
        .collect();
    PerimeterResult {
        value: rows.into_iter().sum(),
        truncation_tail: domain.truncation_tail(),
    }
}
