//! Shared helpers for the integration suites: the independent 6D
//! quadrature oracle and deterministic random-pair generation.
#![allow(dead_code)] // each test binary uses a different subset

use cubature::{integrate, CubatureResult};
use formfactor::{Axis, AxisBox};
use rand::Rng;

/// Tidal kernel along one coordinate axis, on a 6D point
/// (ax, ay, az, bx, by, bz).
pub fn axis_kernel(p: &[f64], axis: Axis) -> f64 {
    let dx = p[0] - p[3];
    let dy = p[1] - p[4];
    let dz = p[2] - p[5];
    let d2 = dx * dx + dy * dy + dz * dz;
    let da = match axis {
        Axis::X => dx,
        Axis::Y => dy,
        Axis::Z => dz,
    };
    (3.0 * da * da - d2) / (d2 * d2 * d2.sqrt())
}

/// Brute-force adaptive quadrature of the pair coupling integral: the
/// independent oracle the closed-form corner sums are checked against.
pub fn quad_box_pair(
    a: &AxisBox,
    b: &AxisBox,
    axis: Axis,
    rel_tol: f64,
    max_evals: u64,
) -> CubatureResult {
    let ai = a.intervals();
    let bi = b.intervals();
    let lo = [ai[0].0, ai[1].0, ai[2].0, bi[0].0, bi[1].0, bi[2].0];
    let hi = [ai[0].1, ai[1].1, ai[2].1, bi[0].1, bi[1].1, bi[2].1];
    integrate(
        |p: &[f64]| axis_kernel(p, axis),
        &lo,
        &hi,
        0.0,
        rel_tol,
        max_evals,
    )
}

/// A random box with per-axis extents in [0.3, 1.5] anchored near the
/// origin.
pub fn random_box<R: Rng>(rng: &mut R) -> AxisBox {
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for k in 0..3 {
        lo[k] = rng.gen_range(-0.5..0.5);
        hi[k] = lo[k] + rng.gen_range(0.3..1.5);
    }
    AxisBox::new(lo[0], hi[0], lo[1], hi[1], lo[2], hi[2]).unwrap()
}

/// A random well-separated companion for `a`: displaced along a random
/// axis by a clear gap, with lateral offsets at most half the gap so the
/// z-kernel integrand keeps one sign (bounded away from the magic angle).
pub fn displaced_companion<R: Rng>(rng: &mut R, a: &AxisBox) -> AxisBox {
    let axis = rng.gen_range(0..3usize);
    let gap = rng.gen_range(0.4..2.5);
    let iv = a.intervals();
    let size = [
        rng.gen_range(0.3..1.5),
        rng.gen_range(0.3..1.5),
        rng.gen_range(0.3..1.5),
    ];
    let mut lo = [0.0; 3];
    for k in 0..3 {
        if k == axis {
            lo[k] = iv[k].1 + gap;
        } else {
            lo[k] = iv[k].0 + rng.gen_range(-0.5 * gap..0.5 * gap);
        }
    }
    AxisBox::new(
        lo[0],
        lo[0] + size[0],
        lo[1],
        lo[1] + size[1],
        lo[2],
        lo[2] + size[2],
    )
    .unwrap()
}

/// Comb tooth boxes rebuilt from the documented layout (side A tooth i,
/// side B tooth j, both 1-based).
pub fn comb_tooth_a(tooth_height: f64, teeth: u32, i: u32) -> AxisBox {
    let n2 = 2.0 * teeth as f64;
    AxisBox::new(
        (2 * i - 2) as f64 / n2,
        (2 * i - 1) as f64 / n2,
        0.0,
        1.0,
        0.0,
        tooth_height,
    )
    .unwrap()
}

pub fn comb_tooth_b(tooth_height: f64, teeth: u32, j: u32) -> AxisBox {
    let n2 = 2.0 * teeth as f64;
    AxisBox::new(
        (2 * j - 1) as f64 / n2,
        (2 * j) as f64 / n2,
        0.0,
        1.0,
        0.0,
        tooth_height,
    )
    .unwrap()
}
