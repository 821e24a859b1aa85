//! Closed-form solution bases and per-segment transfer matrices.
//!
//! Each mesh subinterval carries one of two local models for the potential:
//! a constant `alpha`, or the shifted barrier `alpha + 2/cos^2(x - m + z)`.
//! Both admit elementary fundamental solutions, so the propagator of
//! `(y, y')` across a subinterval is available in closed form for every real
//! spectral parameter `lambda`.

use crate::error::{Error, Result};
use crate::special::{phase_c, phase_s, phase_s_deriv};

/// Half-width of the spectral window around `sigma = 1` inside which the
/// extended basis switches to its removable-singularity expansion.
const SIGMA_ONE_WINDOW: f64 = 1e-5;

/// Real 2x2 propagator of `(y, y')` across a subinterval.
///
/// Columns are the local fundamental solutions normalized to the identity at
/// the left endpoint; the Wronskian of the underlying equation is constant,
/// so the determinant is 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub t11: f64,
    pub t12: f64,
    pub t21: f64,
    pub t22: f64,
}

impl TransferMatrix {
    pub fn identity() -> Self {
        Self {
            t11: 1.0,
            t12: 0.0,
            t21: 0.0,
            t22: 1.0,
        }
    }

    pub fn det(&self) -> f64 {
        self.t11 * self.t22 - self.t12 * self.t21
    }

    /// `self * rhs` (matrix product, self applied after rhs).
    pub fn compose(&self, rhs: &TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            t11: self.t11 * rhs.t11 + self.t12 * rhs.t21,
            t12: self.t11 * rhs.t12 + self.t12 * rhs.t22,
            t21: self.t21 * rhs.t11 + self.t22 * rhs.t21,
            t22: self.t21 * rhs.t12 + self.t22 * rhs.t22,
        }
    }

    /// Adjugate; the exact inverse for unimodular matrices.
    pub fn adjugate(&self) -> TransferMatrix {
        TransferMatrix {
            t11: self.t22,
            t12: -self.t12,
            t21: -self.t21,
            t22: self.t11,
        }
    }

    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (
            self.t11 * v.0 + self.t12 * v.1,
            self.t21 * v.0 + self.t22 * v.1,
        )
    }
}

/// Local model for the potential on one subinterval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentModel {
    /// `p(x) ~= alpha`
    Constant { alpha: f64 },
    /// `p(x) ~= alpha + 2/cos^2(x - m + shift)` where `m` is the segment
    /// midpoint; `shift` places the barrier so its slope matches the data.
    CosSq { alpha: f64, shift: f64 },
}

/// One fitted subinterval `[left, left + length)` with its local model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub left: f64,
    pub length: f64,
    pub model: SegmentModel,
}

impl Segment {
    pub fn midpoint(&self) -> f64 {
        self.left + self.length / 2.0
    }

    pub fn right(&self) -> f64 {
        self.left + self.length
    }

    pub fn alpha(&self) -> f64 {
        match self.model {
            SegmentModel::Constant { alpha } => alpha,
            SegmentModel::CosSq { alpha, .. } => alpha,
        }
    }

    /// Value of the local model at a point of the subinterval.
    pub fn model_value(&self, x: f64) -> f64 {
        match self.model {
            SegmentModel::Constant { alpha } => alpha,
            SegmentModel::CosSq { alpha, shift } => alpha + cossq(x - self.midpoint() + shift),
        }
    }

    /// Checks the geometric invariants: positive length, and for the cos^2
    /// model both evaluation endpoints strictly inside `(-pi/2, pi/2)`.
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) {
            return Err(Error::SegmentMismatch(format!(
                "segment at {} has nonpositive length {}",
                self.left, self.length
            )));
        }
        if let SegmentModel::CosSq { shift, .. } = self.model {
            let half = self.length / 2.0;
            let reach = shift.abs() + half;
            if reach >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::BasisPole {
                    x: shift + half.copysign(shift),
                });
            }
        }
        Ok(())
    }
}

/// The model barrier `q(x) = 2/cos^2(x)`.
pub fn cossq(x: f64) -> f64 {
    let c = x.cos();
    2.0 / (c * c)
}

/// `q'(x) = 4 tan(x) (1 + tan^2 x)`; strictly increasing on `(-pi/2, pi/2)`.
pub fn cossq_slope(x: f64) -> f64 {
    let t = x.tan();
    4.0 * t * (1.0 + t * t)
}

/// `q''(x) = 4 (1 + tan^2 x)(1 + 3 tan^2 x)`; positive everywhere.
pub fn cossq_curvature(x: f64) -> f64 {
    let t2 = x.tan().powi(2);
    4.0 * (1.0 + t2) * (1.0 + 3.0 * t2)
}

/// Propagator across a constant-potential interval of length `l`.
///
/// Exact for a truly constant potential and valid for all real `lambda`,
/// including `lambda <= alpha`, through the entire phase kernels.
pub fn constant_transfer(l: f64, alpha: f64, lambda: f64) -> TransferMatrix {
    let dw = lambda - alpha;
    let w = dw * l * l;
    let c = phase_c(w);
    let s = phase_s(w);
    TransferMatrix {
        t11: c,
        t12: l * s,
        t21: -dw * l * s,
        t22: c,
    }
}

/// Fundamental matrix `[[Y1, Y2], [Y1', Y2']]` of
/// `-y'' + (2/cos^2 x) y = sigma y`, normalized to the identity at `x = 0`.
///
/// The `1/(1 - sigma)` prefactors of the second solution have a removable
/// singularity at `sigma = 1`; inside a small window the quotient is replaced
/// by the derivative of its numerator at the midpoint spectral point, which
/// agrees with the quotient to second order in `sigma - 1`.
pub fn extended_basis(x: f64, sigma: f64) -> Result<TransferMatrix> {
    if x.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::BasisPole { x });
    }
    let t = x.tan();
    let sec2 = 1.0 + t * t;

    let w = sigma * x * x;
    let c = phase_c(w); // cos(sqrt(sigma) x)
    let s = x * phase_s(w); // sin(sqrt(sigma) x)/sqrt(sigma)

    let y1 = c + t * s;
    let y1p = t * c + (sec2 - sigma) * s;

    let (y2, y2p) = if (sigma - 1.0).abs() < SIGMA_ONE_WINDOW {
        // Y2 = N(sigma)/(1 - sigma) with N(1) = 0; the midpoint spectral
        // derivative -N'((1+sigma)/2) matches the quotient to O((sigma-1)^2).
        let sm = 0.5 * (1.0 + sigma);
        let wm = sm * x * x;
        let cm = phase_c(wm);
        let ssm = x * phase_s(wm);
        let dc = -x * ssm / 2.0; // d/dsigma of cos(sqrt(sigma) x)
        let ds = x * x * x * phase_s_deriv(wm); // d/dsigma of sin(..)/sqrt(..)
        let y2 = -(t * dc - ssm - sm * ds);
        let y2p = -(-cm + (sec2 - sm) * dc - t * ssm - sm * t * ds);
        (y2, y2p)
    } else {
        let denom = 1.0 - sigma;
        (
            (t * c - sigma * s) / denom,
            ((sec2 - sigma) * c - sigma * t * s) / denom,
        )
    };

    Ok(TransferMatrix {
        t11: y1,
        t12: y2,
        t21: y1p,
        t22: y2p,
    })
}

/// Propagator of `(y, y')` across a fitted segment at spectral point `lambda`.
pub fn model_transfer(seg: &Segment, lambda: f64) -> Result<TransferMatrix> {
    seg.validate()?;
    match seg.model {
        SegmentModel::Constant { alpha } => Ok(constant_transfer(seg.length, alpha, lambda)),
        SegmentModel::CosSq { alpha, shift } => {
            let sigma = lambda - alpha;
            let half = seg.length / 2.0;
            Ok(cossq_transfer(
                seg.length,
                shift - half,
                shift + half,
                sigma,
            ))
        }
    }
}

/// Closed form of `B(xr, sigma) adj(B(xl, sigma))` for the extended basis.
///
/// Multiplying the basis matrices directly is unstable deep in the hyperbolic
/// regime: both factors grow like `exp(sqrt(-sigma) |x|)` while the product
/// stays of size `exp(sqrt(-sigma) l)`. Expanding the product by the angle
/// addition formulas cancels the growing components identically, leaving
/// phase kernels of the segment length only with tangent-polynomial
/// coefficients.
fn cossq_transfer(length: f64, xl: f64, xr: f64, sigma: f64) -> TransferMatrix {
    let tl = xl.tan();
    let tr = xr.tan();
    let ql = 1.0 + tl * tl;
    let qr = 1.0 + tr * tr;

    if (sigma - 1.0).abs() < SIGMA_ONE_WINDOW {
        // Each entry is N(sigma)/(1 - sigma) with N(1) = 0; use the midpoint
        // spectral derivative as in `extended_basis`.
        let sm = 0.5 * (1.0 + sigma);
        let w = sm * length * length;
        let cd = phase_c(w);
        let sd = length * phase_s(w);
        let dcd = -0.5 * length * sd;
        let dsd = length * length * length * phase_s_deriv(w);
        let al = ql - sm;
        let ar = qr - sm;
        let entry = |p: f64, dp: f64, q: f64, dq: f64| -(dp * cd + p * dcd + dq * sd + q * dsd);
        TransferMatrix {
            t11: entry(al - tr * tl, -1.0, tr * al + sm * tl, tl - tr),
            t12: entry(tr - tl, 0.0, -(sm + tr * tl), -1.0),
            t21: entry(
                tr * al - tl * ar,
                tl - tr,
                ar * al + sm * tr * tl,
                tr * tl - ar - al,
            ),
            t22: entry(ar - tr * tl, -1.0, -(sm * tr + tl * ar), tl - tr),
        }
    } else {
        let w = sigma * length * length;
        let cd = phase_c(w);
        let sd = length * phase_s(w);
        let al = ql - sigma;
        let ar = qr - sigma;
        let inv = 1.0 / (1.0 - sigma);
        TransferMatrix {
            t11: ((al - tr * tl) * cd + (tr * al + sigma * tl) * sd) * inv,
            t12: ((tr - tl) * cd - (sigma + tr * tl) * sd) * inv,
            t21: ((tr * al - tl * ar) * cd + (ar * al + sigma * tr * tl) * sd) * inv,
            t22: ((ar - tr * tl) * cd - (sigma * tr + tl * ar) * sd) * inv,
        }
    }
}
