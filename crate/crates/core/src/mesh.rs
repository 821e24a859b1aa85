//! Mesh construction and the approximation penalties that drive it.
//!
//! Sample points are either uniform or chosen to minimize the summed L2
//! misfit between the potential and its local (constant or secant-linear)
//! approximation. The adaptive construction seeds breakpoints by
//! equidistributing a derivative-based error density, then polishes them with
//! single-breakpoint golden-section sweeps on the exact penalty sum.

use crate::error::{Error, Result};

/// Smallest admissible breakpoint spacing.
pub const MIN_SPACING: f64 = 1e-8;

/// Panels per segment for the composite Simpson penalty quadrature.
const PENALTY_PANELS: usize = 64;

/// All segment penalties below this count as flat: adaptive construction
/// degenerates and falls back to the uniform mesh.
const FLAT_PENALTY: f64 = 1e-14;

/// Which local approximation a penalty measures the misfit of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyKind {
    /// Midpoint-constant approximation.
    Constant,
    /// Secant line through the segment endpoints, anchored at the midpoint
    /// value.
    Linear,
}

/// Strictly increasing breakpoints spanning `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    points: Vec<f64>,
}

impl Mesh {
    pub fn new(points: Vec<f64>) -> Result<Mesh> {
        if points.len() < 2 {
            return Err(Error::Mesh("need at least two breakpoints".into()));
        }
        if points[0] != 0.0 || *points.last().unwrap() != 1.0 {
            return Err(Error::Mesh(format!(
                "breakpoints must span [0, 1], got [{}, {}]",
                points[0],
                points.last().unwrap()
            )));
        }
        for w in points.windows(2) {
            if !(w[1] - w[0] > MIN_SPACING) {
                return Err(Error::Mesh(format!(
                    "breakpoints {} and {} closer than {MIN_SPACING}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Mesh { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    /// Iterator over the subintervals `(x_k, x_{k+1})`.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }
}

/// `K` equal subintervals.
pub fn uniform_mesh(k: usize) -> Result<Mesh> {
    if k == 0 {
        return Err(Error::Mesh("subinterval count must be at least 1".into()));
    }
    let points = (0..=k).map(|i| i as f64 / k as f64).collect();
    Mesh::new(points)
}

/// Composite Simpson rule with `panels` panels (two subintervals each).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = 2 * panels.max(1);
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// L2 misfit of the local approximation of `p` on `[a, b]`.
///
/// `Constant` integrates `(p - p(m))^2`; `Linear` integrates the squared
/// deviation from the endpoint secant through the midpoint value.
pub fn segment_penalty<F: Fn(f64) -> f64>(p: &F, a: f64, b: f64, kind: PenaltyKind) -> f64 {
    assert!(0.0 <= a && a < b && b <= 1.0, "bad segment [{a}, {b}]");
    let m = 0.5 * (a + b);
    let pm = p(m);
    match kind {
        PenaltyKind::Constant => simpson(
            |x| {
                let d = p(x) - pm;
                d * d
            },
            a,
            b,
            PENALTY_PANELS,
        ),
        PenaltyKind::Linear => {
            let slope = (p(b) - p(a)) / (b - a);
            simpson(
                |x| {
                    let d = p(x) - (slope * (x - m) + pm);
                    d * d
                },
                a,
                b,
                PENALTY_PANELS,
            )
        }
    }
}

/// Per-segment penalties of a mesh.
pub fn mesh_penalties<F: Fn(f64) -> f64>(p: &F, mesh: &Mesh, kind: PenaltyKind) -> Vec<f64> {
    mesh.intervals()
        .map(|(a, b)| segment_penalty(p, a, b, kind))
        .collect()
}

/// Total penalty of a mesh.
pub fn total_penalty<F: Fn(f64) -> f64>(p: &F, mesh: &Mesh, kind: PenaltyKind) -> f64 {
    mesh_penalties(p, mesh, kind).iter().sum()
}

/// Penalty-minimizing mesh with `K` subintervals.
///
/// Breakpoints start at equal quantiles of the integrated error density
/// (`|p'|^(2/3)` for the constant penalty, `|p''|^(2/5)` for the linear one,
/// the exponents of the leading-order local penalty), then up to 20 sweeps of
/// golden-section refinement move one breakpoint at a time. The sweeps also
/// run from the uniform seed, which rescues potentials whose density
/// concentrates pathologically (oscillatory derivatives near an endpoint);
/// the better of the two results wins. The result never has a larger total
/// penalty than the uniform mesh; flat potentials fall back to it outright.
pub fn adaptive_mesh<F: Fn(f64) -> f64>(p: F, k: usize, kind: PenaltyKind) -> Result<Mesh> {
    if k < 2 {
        return Err(Error::Mesh(
            "adaptive mesh needs at least 2 subintervals".into(),
        ));
    }
    let uniform = uniform_mesh(k)?;
    let uniform_pens = mesh_penalties(&p, &uniform, kind);
    if uniform_pens.iter().all(|&v| v < FLAT_PENALTY) {
        return Ok(uniform);
    }
    let uniform_total: f64 = uniform_pens.iter().sum();

    let (quantile_pts, quantile_total) = sweep(&p, quantile_seed(&p, k, kind), kind);
    let (uniform_pts, uniform_swept_total) = sweep(&p, uniform.points().to_vec(), kind);
    let (pts, total) = if quantile_total <= uniform_swept_total {
        (quantile_pts, quantile_total)
    } else {
        (uniform_pts, uniform_swept_total)
    };

    if total > uniform_total {
        return Ok(uniform);
    }
    Mesh::new(pts)
}

/// Golden-section sweeps over the interior breakpoints, one at a time.
fn sweep<F: Fn(f64) -> f64>(p: &F, mut pts: Vec<f64>, kind: PenaltyKind) -> (Vec<f64>, f64) {
    let k = pts.len() - 1;
    let margin = 1e-7;
    let mut total = pairwise_total(p, &pts, kind);
    for _sweep in 0..20 {
        for i in 1..k {
            let lo = pts[i - 1] + margin;
            let hi = pts[i + 1] - margin;
            if hi <= lo {
                continue;
            }
            let local = |x: f64| {
                segment_penalty(p, pts[i - 1], x, kind) + segment_penalty(p, x, pts[i + 1], kind)
            };
            let current = local(pts[i]);
            let (xm, vm) = golden_min(&local, lo, hi);
            if vm < current - 1e-13 * current.abs().max(1e-30) {
                pts[i] = xm;
            }
        }
        let new_total = pairwise_total(p, &pts, kind);
        if total - new_total < 1e-10 * total.max(1e-300) {
            total = new_total;
            break;
        }
        total = new_total;
    }
    (pts, total)
}

fn pairwise_total<F: Fn(f64) -> f64>(p: &F, pts: &[f64], kind: PenaltyKind) -> f64 {
    pts.windows(2)
        .map(|w| segment_penalty(p, w[0], w[1], kind))
        .sum()
}

/// Breakpoints at equal quantiles of the integrated error density.
fn quantile_seed<F: Fn(f64) -> f64>(p: &F, k: usize, kind: PenaltyKind) -> Vec<f64> {
    const GRID: usize = 4096;
    let exponent = match kind {
        PenaltyKind::Constant => 2.0 / 3.0,
        PenaltyKind::Linear => 2.0 / 5.0,
    };
    let h = 1.0 / GRID as f64;
    let mut density = Vec::with_capacity(GRID + 1);
    let mut max_d = 0.0f64;
    for i in 0..=GRID {
        let x = i as f64 * h;
        let d = match kind {
            PenaltyKind::Constant => deriv1(p, x).abs(),
            PenaltyKind::Linear => deriv2(p, x).abs(),
        }
        .powf(exponent);
        max_d = max_d.max(d);
        density.push(d);
    }
    // Floor keeps the cumulative strictly increasing where p is locally flat.
    let floor = 1e-9 * (1.0 + max_d);
    let mut cumulative = vec![0.0; GRID + 1];
    for i in 1..=GRID {
        cumulative[i] = cumulative[i - 1] + 0.5 * (density[i] + density[i - 1] + 2.0 * floor) * h;
    }
    let mass = cumulative[GRID];

    let mut pts = vec![0.0; k + 1];
    pts[k] = 1.0;
    let mut cursor = 0;
    for (j, pt) in pts.iter_mut().enumerate().take(k).skip(1) {
        let target = mass * j as f64 / k as f64;
        while cursor < GRID && cumulative[cursor + 1] < target {
            cursor += 1;
        }
        let span = cumulative[cursor + 1] - cumulative[cursor];
        let frac = if span > 0.0 {
            (target - cumulative[cursor]) / span
        } else {
            0.5
        };
        *pt = (cursor as f64 + frac) * h;
    }
    // Enforce spacing for quantiles collapsing onto flat density plateaus.
    let sep = 1e-6;
    for j in 1..=k {
        if pts[j] < pts[j - 1] + sep {
            pts[j] = pts[j - 1] + sep;
        }
    }
    for j in (0..k).rev() {
        if pts[j] > pts[j + 1] - sep {
            pts[j] = pts[j + 1] - sep;
        }
    }
    pts[0] = 0.0;
    pts[k] = 1.0;
    pts
}

fn deriv1<F: Fn(f64) -> f64>(p: &F, x: f64) -> f64 {
    let h = 1e-5;
    if x < h {
        (p(x + h) - p(x)) / h
    } else if x > 1.0 - h {
        (p(x) - p(x - h)) / h
    } else {
        (p(x + h) - p(x - h)) / (2.0 * h)
    }
}

fn deriv2<F: Fn(f64) -> f64>(p: &F, x: f64) -> f64 {
    let h = 1e-5;
    if x < h {
        (p(x + 2.0 * h) - 2.0 * p(x + h) + p(x)) / (h * h)
    } else if x > 1.0 - h {
        (p(x) - 2.0 * p(x - h) + p(x - 2.0 * h)) / (h * h)
    } else {
        (p(x + h) - 2.0 * p(x) + p(x - h)) / (h * h)
    }
}

/// Golden-section minimum of `f` on `[a, b]`; returns `(x, f(x))`.
fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..60 {
        if b - a < 1e-12 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let xm = 0.5 * (a + b);
    (xm, f(xm))
}
