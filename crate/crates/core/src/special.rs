//! Scalar phase kernels shared by every solution basis.
//!
//! The transfer matrices need `cos(sqrt(w))` and `sin(sqrt(w))/sqrt(w)` as
//! functions of the *squared* phase `w`. Both are entire in `w`, so extending
//! them through `w <= 0` (where they turn into hyperbolic functions) removes
//! all branching on the sign of `lambda - alpha` at call sites.

/// Below this magnitude both kernels switch to a short Taylor series, which
/// keeps them smooth through `w = 0` and avoids `0/0` in the sinc-like kernel.
const SERIES_CUTOFF: f64 = 1e-4;

/// Entire extension of `cos(sqrt(w))`: `cosh(sqrt(-w))` for negative `w`.
pub fn phase_c(w: f64) -> f64 {
    if w.abs() <= SERIES_CUTOFF {
        // 1 - w/2! + w^2/4! - w^3/6! + w^4/8! - w^5/10!
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..6u32 {
            let k = 2.0 * n as f64;
            term *= -w / (k * (k - 1.0));
            sum += term;
        }
        sum
    } else if w > 0.0 {
        w.sqrt().cos()
    } else {
        (-w).sqrt().cosh()
    }
}

/// Entire extension of `sin(sqrt(w))/sqrt(w)`: equals 1 at `w = 0` and
/// `sinh(sqrt(-w))/sqrt(-w)` for negative `w`.
pub fn phase_s(w: f64) -> f64 {
    if w.abs() <= SERIES_CUTOFF {
        // 1 - w/3! + w^2/5! - w^3/7! + w^4/9! - w^5/11!
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..6u32 {
            let k = 2.0 * n as f64;
            term *= -w / (k * (k + 1.0));
            sum += term;
        }
        sum
    } else if w > 0.0 {
        let r = w.sqrt();
        r.sin() / r
    } else {
        let r = (-w).sqrt();
        r.sinh() / r
    }
}

/// Derivative of [`phase_s`] with respect to `w`.
///
/// Away from zero this is `(phase_c - phase_s)/(2w)`; near zero that quotient
/// cancels badly, so a series takes over. Used by the basis module to expand
/// the extended basis around its removable `sigma = 1` singularity.
pub(crate) fn phase_s_deriv(w: f64) -> f64 {
    if w.abs() <= 1e-2 {
        // -1/6 + w/60 - w^2/1680 + w^3/90720 - w^4/7_983_360
        let c = [
            -1.0 / 6.0,
            1.0 / 60.0,
            -1.0 / 1680.0,
            1.0 / 90_720.0,
            -1.0 / 7_983_360.0,
        ];
        let mut sum = 0.0;
        for &ck in c.iter().rev() {
            sum = sum * w + ck;
        }
        sum
    } else {
        (phase_c(w) - phase_s(w)) / (2.0 * w)
    }
}
