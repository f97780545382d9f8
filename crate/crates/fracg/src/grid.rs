//! Uniform cell-centered grids over a bounded domain and a truncated
//! exterior collar, with dense pairwise kernel tables.
//!
//! The truncation of the unbounded exterior is explicit: beyond the
//! collar of width `collar` the kernel tail `∫ |x−y|^{−(n+s)}` is
//! reported as an error estimate rather than integrated. Kernel tables
//! are dense `O(N²)` and symmetric to the last bit; the diagonal is
//! excluded, which realizes the principal value on uniform grids
//! (symmetric node pairs cancel the leading odd singular contribution).

use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::sync::Arc;

/// Region tag of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interior,
    Exterior,
}

/// The bounded domain: an interval in 1D, an axis-aligned box in 2D.
#[derive(Clone, Copy, Debug)]
pub enum OmegaSpec {
    Interval { a: f64, b: f64 },
    Box2 { x: (f64, f64), y: (f64, f64) },
}

impl OmegaSpec {
    pub fn dim(&self) -> usize {
        match self {
            OmegaSpec::Interval { .. } => 1,
            OmegaSpec::Box2 { .. } => 2,
        }
    }

    fn widths(&self) -> Vec<f64> {
        match self {
            OmegaSpec::Interval { a, b } => vec![b - a],
            OmegaSpec::Box2 { x, y } => vec![x.1 - x.0, y.1 - y.0],
        }
    }

    /// Lebesgue measure of the domain.
    pub fn measure(&self) -> f64 {
        self.widths().iter().product()
    }

    pub fn diameter(&self) -> f64 {
        match self {
            OmegaSpec::Interval { a, b } => b - a,
            OmegaSpec::Box2 { x, y } => ((x.1 - x.0).powi(2) + (y.1 - y.0).powi(2)).sqrt(),
        }
    }
}

/// Dense symmetric pair table with an excluded (zero) diagonal.
#[derive(Clone, Debug)]
pub struct PairTable {
    n: usize,
    data: Vec<f64>,
}

impl PairTable {
    fn build(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Discretization of Ω and its exterior collar.
///
/// Nodes are cell centers of a uniform grid over the enlarged box; each
/// node is tagged interior or exterior by construction (index
/// arithmetic, no floating-point containment tests). `kernel_s` holds
/// `|x_i−x_j|^{−s}` and `kernel_mu` holds `h^{2n}·|x_i−x_j|^{−n}`, the
/// weights of the singular measure.
#[derive(Debug)]
pub struct DiscreteDomain {
    pub omega: OmegaSpec,
    pub h: f64,
    pub collar: f64,
    pub s: f64,
    dim: usize,
    coords: Vec<[f64; 2]>,
    region: Vec<Region>,
    interior: Vec<usize>,
    exterior: Vec<usize>,
    cell_weight: f64,
    kernel_s: PairTable,
    kernel_mu: PairTable,
    tail_estimate: f64,
}

impl DiscreteDomain {
    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coord(&self, i: usize) -> [f64; 2] {
        self.coords[i]
    }

    pub fn region(&self, i: usize) -> Region {
        self.region[i]
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn exterior(&self) -> &[usize] {
        &self.exterior
    }

    /// Quadrature weight of one cell, `h^n`.
    pub fn cell_weight(&self) -> f64 {
        self.cell_weight
    }

    pub fn kernel_s(&self) -> &PairTable {
        &self.kernel_s
    }

    pub fn kernel_mu(&self) -> &PairTable {
        &self.kernel_mu
    }

    /// Reported bound on the kernel mass ignored by the collar
    /// truncation: `∫_Ω ∫_{|x−y|>R} |x−y|^{−(n+s)} dy dx`.
    pub fn truncation_tail(&self) -> f64 {
        self.tail_estimate
    }

    /// Euclidean distance between two nodes.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let a = self.coords[i];
        let b = self.coords[j];
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    }
}

/// Builds the grid. Interior cell counts per axis are `⌈width/h⌉`, the
/// collar adds `⌈collar/h⌉` cells per side.
pub fn build_grid(omega: OmegaSpec, h: f64, collar: f64, s: f64) -> Result<Arc<DiscreteDomain>> {
    if !(h > 0.0) {
        return Err(Error::BadGeometry(format!("h must be positive, got {h}")));
    }
    if !(collar > 0.0) {
        return Err(Error::BadGeometry(format!(
            "collar must be positive, got {collar}"
        )));
    }
    if !(0.0 < s && s < 1.0) {
        return Err(Error::BadGeometry(format!("s must lie in (0,1), got {s}")));
    }
    for w in omega.widths() {
        if !(w > 0.0) {
            return Err(Error::BadGeometry("domain has nonpositive width".into()));
        }
        if h >= w {
            return Err(Error::BadGeometry(format!(
                "h = {h} must be smaller than the domain width {w}"
            )));
        }
    }

    let cells = |w: f64| (w / h - 1e-9).ceil().max(1.0) as usize;
    let c = (collar / h - 1e-9).ceil().max(1.0) as usize;

    let dim = omega.dim();
    let (coords, region) = match omega {
        OmegaSpec::Interval { a, .. } => {
            let m = cells(omega.widths()[0]);
            let total = m + 2 * c;
            let mut coords = Vec::with_capacity(total);
            let mut region = Vec::with_capacity(total);
            for i in 0..total {
                let x = a + ((i as f64) - (c as f64) + 0.5) * h;
                coords.push([x, 0.0]);
                region.push(if i >= c && i < c + m {
                    Region::Interior
                } else {
                    Region::Exterior
                });
            }
            (coords, region)
        }
        OmegaSpec::Box2 { x, y } => {
            let mx = cells(x.1 - x.0);
            let my = cells(y.1 - y.0);
            let (tx, ty) = (mx + 2 * c, my + 2 * c);
            let mut coords = Vec::with_capacity(tx * ty);
            let mut region = Vec::with_capacity(tx * ty);
            for iy in 0..ty {
                for ix in 0..tx {
                    let px = x.0 + ((ix as f64) - (c as f64) + 0.5) * h;
                    let py = y.0 + ((iy as f64) - (c as f64) + 0.5) * h;
                    coords.push([px, py]);
                    let inside =
                        ix >= c && ix < c + mx && iy >= c && iy < c + my;
                    region.push(if inside {
                        Region::Interior
                    } else {
                        Region::Exterior
                    });
                }
            }
            (coords, region)
        }
    };

    let n = coords.len();
    let dist = |i: usize, j: usize| -> f64 {
        let (a, b) = (coords[i], coords[j]);
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    };
    let kernel_s = PairTable::build(n, |i, j| dist(i, j).powf(-s));
    let cell_weight = h.powi(dim as i32);
    let mu_scale = cell_weight * cell_weight;
    let kernel_mu = PairTable::build(n, |i, j| mu_scale * dist(i, j).powf(-(dim as f64)));

    let interior: Vec<usize> = (0..n).filter(|&i| region[i] == Region::Interior).collect();
    let exterior: Vec<usize> = (0..n).filter(|&i| region[i] == Region::Exterior).collect();

    // Surface measure of the unit sphere: 2 in 1D, 2π in 2D.
    let sigma = if dim == 1 { 2.0 } else { 2.0 * PI };
    let tail_estimate = omega.measure() * sigma * collar.powf(-s) / s;

    Ok(Arc::new(DiscreteDomain {
        omega,
        h,
        collar,
        s,
        dim,
        coords,
        region,
        interior,
        exterior,
        cell_weight,
        kernel_s,
        kernel_mu,
        tail_estimate,
    }))
}

/// Same domain rebuilt at half the spacing.
pub fn refined(domain: &DiscreteDomain) -> Result<Arc<DiscreteDomain>> {
    build_grid(domain.omega, domain.h / 2.0, domain.collar, domain.s)
}

/// Node-indexed real values bound to one [`DiscreteDomain`].
#[derive(Clone, Debug)]
pub struct GridFunction {
    domain: Arc<DiscreteDomain>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(domain: &Arc<DiscreteDomain>) -> Self {
        Self {
            domain: Arc::clone(domain),
            values: vec![0.0; domain.node_count()],
        }
    }

    pub fn constant(domain: &Arc<DiscreteDomain>, c: f64) -> Self {
        Self {
            domain: Arc::clone(domain),
            values: vec![c; domain.node_count()],
        }
    }

    /// Samples `f` at the node coordinates.
    pub fn from_fn(domain: &Arc<DiscreteDomain>, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..domain.node_count())
            .map(|i| {
                let c = domain.coord(i);
                f(c[0], c[1])
            })
            .collect();
        Self {
            domain: Arc::clone(domain),
            values,
        }
    }

    pub fn from_values(domain: &Arc<DiscreteDomain>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), domain.node_count(), "value/node count mismatch");
        Self {
            domain: Arc::clone(domain),
            values,
        }
    }

    pub fn domain(&self) -> &Arc<DiscreteDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    fn check_same_domain(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.domain, &other.domain),
            "grid functions live on different domains"
        );
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: f64, other: &Self) {
        self.check_same_domain(other);
        for (v, w) in self.values.iter_mut().zip(&other.values) {
            *v += c * w;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_domain(other);
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_domain(other);
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// Euclidean inner product over all nodes.
    pub fn dot(&self, other: &Self) -> f64 {
        self.check_same_domain(other);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Zeroes exterior values (Dirichlet constraint).
    pub fn zero_exterior(&mut self) {
        let ext: Vec<usize> = self.domain.exterior().to_vec();
        for i in ext {
            self.values[i] = 0.0;
        }
    }

    /// Maximum absolute value over the interior.
    pub fn interior_max_abs(&self) -> f64 {
        self.domain
            .interior()
            .iter()
            .fold(0.0f64, |m, &i| m.max(self.values[i].abs()))
    }

    /// Counts of positive / negative / zero interior values.
    pub fn sign_stats(&self) -> (usize, usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        let mut zero = 0;
        for &i in self.domain.interior() {
            let v = self.values[i];
            if v > 0.0 {
                pos += 1;
            } else if v < 0.0 {
                neg += 1;
            } else {
                zero += 1;
            }
        }
        (pos, neg, zero)
    }
}

/// The s-Hölder quotient `(u_i − u_j)·|x_i−x_j|^{−s}`; antisymmetric in
/// the pair, rejected on the diagonal.
pub fn holder_quotient(u: &GridFunction, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::DiagonalPair(i));
    }
    let d = u.domain();
    Ok((u.at(i) - u.at(j)) * d.kernel_s().at(i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_interval(h: f64, collar: f64) -> Arc<DiscreteDomain> {
        build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, h, collar, 0.3).unwrap()
    }

    #[test]
    fn counts_on_unit_interval() {
        let d = unit_interval(0.1, 1.0);
        assert_eq!(d.interior().len(), 10);
        assert_eq!(d.exterior().len(), 20);
        assert_eq!(d.node_count(), 30);
    }

    #[test]
    fn zero_collar_rejected() {
        let r = build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, 0.1, 0.0, 0.3);
        assert!(matches!(r, Err(Error::BadGeometry(_))));
    }

    #[test]
    fn coarse_h_rejected() {
        let r = build_grid(OmegaSpec::Interval { a: 0.0, b: 1.0 }, 1.0, 1.0, 0.3);
        assert!(matches!(r, Err(Error::BadGeometry(_))));
    }

    #[test]
    fn refinement_doubles_counts() {
        let d = unit_interval(0.1, 0.5);
        let r = refined(&d).unwrap();
        assert_eq!(r.interior().len(), 2 * d.interior().len());
        assert_eq!(r.exterior().len(), 2 * d.exterior().len());
    }

    #[test]
    fn kernel_tables_are_bitwise_symmetric() {
        let d = unit_interval(0.125, 0.5);
        let n = d.node_count();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(d.kernel_s().at(i, j).to_bits(), d.kernel_s().at(j, i).to_bits());
                assert_eq!(d.kernel_mu().at(i, j).to_bits(), d.kernel_mu().at(j, i).to_bits());
            }
            assert_eq!(d.kernel_s().at(i, i), 0.0);
        }
    }

    #[test]
    fn two_dimensional_tagging() {
        let d = build_grid(
            OmegaSpec::Box2 {
                x: (0.0, 1.0),
                y: (0.0, 1.0),
            },
            0.25,
            0.5,
            0.4,
        )
        .unwrap();
        assert_eq!(d.interior().len(), 16);
        assert_eq!(d.node_count(), 64);
        for &i in d.interior() {
            let c = d.coord(i);
            assert!(c[0] > 0.0 && c[0] < 1.0 && c[1] > 0.0 && c[1] < 1.0);
        }
        for &i in d.exterior() {
            let c = d.coord(i);
            assert!(c[0] <= 0.0 || c[0] >= 1.0 || c[1] <= 0.0 || c[1] >= 1.0);
        }
    }

    #[test]
    fn holder_quotient_basics() {
        let d = unit_interval(0.1, 0.5);
        let constant = GridFunction::constant(&d, 3.0);
        assert_eq!(holder_quotient(&constant, 0, 5).unwrap(), 0.0);

        let linear = GridFunction::from_fn(&d, |x, _| x);
        let q = holder_quotient(&linear, 7, 3).unwrap();
        let dist = d.distance(7, 3);
        let expect = (d.coord(7)[0] - d.coord(3)[0]) * dist.powf(-0.3);
        assert_relative_eq!(q, expect, max_relative = 1e-14);

        // antisymmetry
        let q_swapped = holder_quotient(&linear, 3, 7).unwrap();
        assert_eq!(q.to_bits(), (-q_swapped).to_bits());

        assert!(matches!(
            holder_quotient(&linear, 4, 4),
            Err(Error::DiagonalPair(4))
        ));
    }
}
