//! Seeded construction of test fields: smooth random combinations of
//! low-frequency modes, plateau witnesses, and raw noise.

use crate::grid::{DiscreteDomain, GridFunction, OmegaSpec};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

/// Deterministic sub-stream RNG: one master seed, one label per use.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9))
            .wrapping_add(0x94D0_49BB_1331_11EB),
    )
}

fn box_bounds(omega: OmegaSpec, collar: f64) -> ((f64, f64), (f64, f64)) {
    match omega {
        OmegaSpec::Interval { a, b } => ((a - collar, b + collar), (0.0, 1.0)),
        OmegaSpec::Box2 { x, y } => ((x.0 - collar, x.1 + collar), (y.0 - collar, y.1 + collar)),
    }
}

/// Random smooth field over the whole truncated box: a few Fourier
/// modes with `1/k²` decay, so refinement tests see a fixed function.
pub fn random_smooth(domain: &Arc<DiscreteDomain>, rng: &mut ChaCha8Rng) -> GridFunction {
    let ((ax, bx), (ay, by)) = box_bounds(domain.omega, domain.collar);
    let modes = 6;
    if domain.dim() == 1 {
        let coef: Vec<(f64, f64)> = (0..modes)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        GridFunction::from_fn(domain, move |x, _| {
            let t = (x - ax) / (bx - ax);
            coef.iter()
                .enumerate()
                .map(|(k, &(a, b))| {
                    let kk = (k + 1) as f64;
                    (a * (kk * PI * t).cos() + b * (kk * PI * t).sin()) / (kk * kk)
                })
                .sum()
        })
    } else {
        let m = 3usize;
        let coef: Vec<f64> = (0..m * m * 4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        GridFunction::from_fn(domain, move |x, y| {
            let tx = (x - ax) / (bx - ax);
            let ty = (y - ay) / (by - ay);
            let mut acc = 0.0;
            for kx in 0..m {
                for ky in 0..m {
                    let base = 4 * (kx * m + ky);
                    let (fx, fy) = ((kx + 1) as f64 * PI * tx, (ky + 1) as f64 * PI * ty);
                    let decay = 1.0 / (((kx + 1) * (kx + 1) + (ky + 1) * (ky + 1)) as f64);
                    acc += decay
                        * (coef[base] * fx.cos() * fy.cos()
                            + coef[base + 1] * fx.cos() * fy.sin()
                            + coef[base + 2] * fx.sin() * fy.cos()
                            + coef[base + 3] * fx.sin() * fy.sin());
                }
            }
            acc
        })
    }
}

/// Independent uniform values on every node (rough test data).
pub fn random_values(domain: &Arc<DiscreteDomain>, rng: &mut ChaCha8Rng, amp: f64) -> GridFunction {
    GridFunction::from_values(
        domain,
        (0..domain.node_count())
            .map(|_| amp * rng.gen_range(-1.0..1.0))
            .collect(),
    )
}

/// Plateau witness: equal to `height` on a centered compact core
/// occupying `core_fraction` of each axis of Ω, interpolated linearly to
/// zero inside Ω, and zero outside. Used to certify positive
/// nonlinearity integrals.
pub fn plateau(domain: &Arc<DiscreteDomain>, height: f64, core_fraction: f64) -> GridFunction {
    let frac = core_fraction.clamp(0.05, 0.95);
    let profile = |t: f64, a: f64, b: f64| -> f64 {
        // tent profile: 1 on the core, linear ramp to 0 at ∂Ω
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let core = frac * half;
        let ramp = half - core;
        let d = (t - mid).abs();
        if d <= core {
            1.0
        } else if d >= half {
            0.0
        } else {
            (half - d) / ramp
        }
    };
    match domain.omega {
        OmegaSpec::Interval { a, b } => {
            GridFunction::from_fn(domain, move |x, _| height * profile(x, a, b))
        }
        OmegaSpec::Box2 { x, y } => GridFunction::from_fn(domain, move |px, py| {
            height * profile(px, x.0, x.1).min(profile(py, y.0, y.1))
        }),
    }
}
