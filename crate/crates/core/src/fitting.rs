//! Conversion of (potential, mesh) into fitted segments.
//!
//! The piecewise-constant fit samples the potential at segment midpoints. The
//! extended fit matches the secant slope of the data against the slope of the
//! `2/cos^2` barrier through a precomputed table, then adjusts the additive
//! constant so the model integrates to the midpoint rule over the segment.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::basis::{Segment, SegmentModel};
use crate::mesh::Mesh;

/// Fitting method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Piecewise-constant midpoint fit.
    Pruess,
    /// Shifted `2/cos^2` fit with slope and integral matching.
    Extended,
}

/// Number of table nodes.
pub const SLOPE_TABLE_NODES: usize = 201;

/// Slope-matching table: 201 pairs `(u_j, t_j)` with `u_j` uniform on
/// `[-10, 10]` and `t_j` solving `q'(t_j) = u_j^3` for the barrier slope
/// `q'(t) = 4 tan(t) (1 + tan^2 t)`. Cube-root spacing keeps moderate slopes
/// well resolved; the covered slope range is `[-1000, 1000]`.
#[derive(Debug, Clone)]
pub struct SlopeTable {
    /// `(u_j, t_j)` with `u_j` strictly increasing.
    pub nodes: Vec<(f64, f64)>,
}

impl SlopeTable {
    pub fn u_min(&self) -> f64 {
        self.nodes[0].0
    }

    pub fn u_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1].0
    }
}

/// Builds the slope table by solving `4 s^3 + 4 s = u^3` for `s = tan(t)` at
/// each node (Cardano root, polished by Newton) and taking `t = atan(s)`.
pub fn build_slope_table() -> SlopeTable {
    let mut nodes = Vec::with_capacity(SLOPE_TABLE_NODES);
    let step = 0.1;
    for j in 0..SLOPE_TABLE_NODES {
        let u = -10.0 + step * j as f64;
        let s = solve_slope_cubic(u * u * u);
        nodes.push((u, s.atan()));
    }
    SlopeTable { nodes }
}

/// Process-wide table, built on first use and shared immutably.
pub fn slope_table() -> &'static SlopeTable {
    static TABLE: OnceLock<SlopeTable> = OnceLock::new();
    TABLE.get_or_init(build_slope_table)
}

/// Unique real root of `4 s^3 + 4 s - g = 0`.
fn solve_slope_cubic(g: f64) -> f64 {
    // Depressed form s^3 + s - g/4 = 0; the discriminant is always positive.
    let half_q = g / 8.0;
    let disc = (half_q * half_q + 1.0 / 27.0).sqrt();
    let mut s = (half_q + disc).cbrt() + (half_q - disc).cbrt();
    // Two Newton steps recover the precision lost to cancellation in the
    // smaller cube root.
    for _ in 0..2 {
        let f = 4.0 * s * s * s + 4.0 * s - g;
        let df = 12.0 * s * s + 4.0;
        s -= f / df;
    }
    s
}

/// Barrier shift whose slope matches `slope`, by sign-preserving cube root
/// and linear interpolation in the table's `u` coordinate. Slopes beyond the
/// covered range clamp to the table ends.
pub fn lookup_z(slope: f64, table: &SlopeTable) -> f64 {
    let u = slope.cbrt().clamp(table.u_min(), table.u_max());
    let step = (table.u_max() - table.u_min()) / (table.nodes.len() - 1) as f64;
    let pos = (u - table.u_min()) / step;
    let idx = (pos.floor() as usize).min(table.nodes.len() - 2);
    let frac = pos - idx as f64;
    let (_, t0) = table.nodes[idx];
    let (_, t1) = table.nodes[idx + 1];
    t0 + frac * (t1 - t0)
}

/// Fits one segment model per mesh subinterval.
pub fn fit_segments<F: Fn(f64) -> f64>(
    p: &F,
    mesh: &Mesh,
    method: Method,
    table: &SlopeTable,
) -> Vec<Segment> {
    mesh.intervals()
        .map(|(a, b)| {
            let length = b - a;
            let m = 0.5 * (a + b);
            let model = match method {
                Method::Pruess => SegmentModel::Constant { alpha: p(m) },
                Method::Extended => {
                    let secant = (p(b) - p(a)) / length;
                    let mut shift = lookup_z(secant, table);
                    let half = length / 2.0;
                    // Keep both barrier evaluation points clear of the poles.
                    let reach = FRAC_PI_2 - half - 1e-6;
                    if shift.abs() > reach {
                        shift = reach.copysign(shift);
                    }
                    let alpha = p(m) - 2.0 * ((shift + half).tan() - (shift - half).tan()) / length;
                    SegmentModel::CosSq { alpha, shift }
                }
            };
            Segment {
                left: a,
                length,
                model,
            }
        })
        .collect()
}
