//! Commutation (Darboux) transformations.
//!
//! Factoring `L - mu = F- F+` around a nonvanishing solution and recombining
//! the factors produces a new operator whose solutions are images of the old
//! ones under `F+ = D - y1'/y1`. Starting from the zero potential this
//! generates families of exactly solvable problems; the solver's extended
//! segment model is the single-commutation barrier `2/cos^2`. This module is
//! the generation and cross-checking machinery for those families.

use std::sync::Arc;

use crate::error::{Error, Result};

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Relative threshold under which a seed solution counts as vanished.
const POLE_THRESHOLD: f64 = 1e-12;

/// A solution of `-y'' + p0 y = mu y` used to seed a commutation, with its
/// derivative and the interval on which it is known to be nonvanishing.
#[derive(Clone)]
pub struct SeedSolution {
    pub mu: f64,
    pub interval: (f64, f64),
    value: Eval,
    derivative: Eval,
}

impl SeedSolution {
    pub fn new<F, G>(mu: f64, interval: (f64, f64), value: F, derivative: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            mu,
            interval,
            value: Arc::new(value),
            derivative: Arc::new(derivative),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }

    /// `y'/y`, failing where the seed vanishes (the transform is singular
    /// there).
    pub fn log_derivative(&self, x: f64) -> Result<f64> {
        let y = self.value(x);
        let dy = self.derivative(x);
        if y.abs() < POLE_THRESHOLD * dy.abs().max(1.0) {
            return Err(Error::SeedPole { x });
        }
        Ok(dy / y)
    }
}

/// Potential produced by one or more commutations, evaluated pointwise with
/// pole detection.
pub struct TransformedPotential {
    eval: Box<dyn Fn(f64) -> Result<f64> + Send + Sync>,
    pub interval: (f64, f64),
    /// Spectral shifts `mu` applied, outermost last.
    pub shifts: Vec<f64>,
    pub description: String,
}

impl TransformedPotential {
    pub fn eval(&self, x: f64) -> Result<f64> {
        (self.eval)(x)
    }
}

/// Single commutation: `p1 = -p0 + 2 mu + 2 (y1'/y1)^2`.
pub fn single_commute<P>(p0: P, seed: SeedSolution) -> TransformedPotential
where
    P: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let interval = seed.interval;
    let mu = seed.mu;
    let description = format!("single commutation at mu = {mu}");
    let eval = move |x: f64| -> Result<f64> {
        let ratio = seed.log_derivative(x)?;
        Ok(-p0(x) + 2.0 * mu + 2.0 * ratio * ratio)
    };
    TransformedPotential {
        eval: Box::new(eval),
        interval,
        shifts: vec![mu],
        description,
    }
}

/// The solution map `F+ z = z' - (y1'/y1) z` of a single commutation.
///
/// If `z` solves the seed's equation at spectral point `lambda`, the returned
/// evaluator solves the transformed equation at the same `lambda`.
pub fn apply_f_plus<Z, DZ>(
    seed: SeedSolution,
    z: Z,
    dz: DZ,
) -> impl Fn(f64) -> Result<f64> + Send + Sync
where
    Z: Fn(f64) -> f64 + Send + Sync,
    DZ: Fn(f64) -> f64 + Send + Sync,
{
    move |x: f64| {
        let ratio = seed.log_derivative(x)?;
        Ok(dz(x) - ratio * z(x))
    }
}

/// Double commutation of the zero potential seeded by `cos(sqrt(mu1) x)` and
/// then `sin(sqrt(mu2) x)`, evaluated in closed form.
///
/// The closed form divides by the intermediate seed
/// `z2 = sqrt(mu2) cos(sqrt(mu2) x) + sqrt(mu1) tan(sqrt(mu1) x) sin(sqrt(mu2) x)`,
/// so evaluation reports a pole where `z2` vanishes. Requires `mu1 != mu2`
/// and both positive (the trigonometric form).
pub fn double_commute_potential(mu1: f64, mu2: f64) -> TransformedPotential {
    assert!(
        mu1 > 0.0 && mu2 > 0.0 && mu1 != mu2,
        "double commutation needs distinct positive spectral shifts"
    );
    let r1 = mu1.sqrt();
    let r2 = mu2.sqrt();
    // Valid until the first pole of either tangent factor.
    let reach = std::f64::consts::FRAC_PI_2 / r1.max(r2);
    let description = format!("double commutation at mu = ({mu1}, {mu2})");

    let eval = move |x: f64| -> Result<f64> {
        let c1 = (r1 * x).cos();
        if c1.abs() < POLE_THRESHOLD {
            return Err(Error::SeedPole { x });
        }
        let t1 = (r1 * x).tan();
        let s2 = (r2 * x).sin();
        let c2 = (r2 * x).cos();
        let z2 = r2 * c2 + r1 * t1 * s2;
        let z2p = -mu2 * s2 + mu1 * (1.0 + t1 * t1) * s2 + r1 * r2 * t1 * c2;
        if z2.abs() < POLE_THRESHOLD * z2p.abs().max(1.0) {
            return Err(Error::SeedPole { x });
        }
        // The bracketed ratio with tan(sqrt(mu2) x) folded into the numerator
        // so the cot factor stays finite at x = 0.
        let t2 = (r2 * x).tan();
        let num = ((mu1 - mu2) + mu1 * t1 * t1) * t2 + r1 * r2 * t1;
        let den = r2 + r1 * t1 * t2;
        let ratio = num / den;
        Ok(-2.0 * mu1 / (c1 * c1) + 2.0 * mu2 + 2.0 * ratio * ratio)
    };

    TransformedPotential {
        eval: Box::new(eval),
        interval: (-reach, reach),
        shifts: vec![mu1, mu2],
        description,
    }
}

/// A solution together with its higher derivatives: `deriv(x, k)` returns the
/// k-th derivative at `x`, with `k = 0` the value itself. Derivatives are
/// supplied analytically by the caller; the determinant formula below
/// amplifies numerical differentiation noise too much to tolerate it.
#[derive(Clone)]
pub struct SmoothSolution {
    eval: Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>,
}

impl SmoothSolution {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(f64, usize) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
        }
    }

    pub fn deriv(&self, x: f64, order: usize) -> f64 {
        (self.eval)(x, order)
    }
}

/// n-fold commutation map evaluated at one point: the ratio of the bordered
/// Wronskian determinant of `(z, y_1, ..., y_n)` to the Wronskian of the
/// seeds, with sign `(-1)^n`. For `n = 1` this reduces to `F+ z`.
pub fn n_commute_apply(seeds: &[SmoothSolution], z: &SmoothSolution, x: f64) -> Result<f64> {
    let n = seeds.len();
    assert!(n >= 1, "need at least one seed");

    let mut wronskian = vec![vec![0.0; n]; n];
    for (j, row) in wronskian.iter_mut().enumerate() {
        for (i, entry) in row.iter_mut().enumerate() {
            *entry = seeds[i].deriv(x, j);
        }
    }
    // Hadamard-style scale for the singularity threshold.
    let scale: f64 = wronskian
        .iter()
        .map(|row| row.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300))
        .product();
    let den = det_in_place(wronskian);
    if den.abs() < POLE_THRESHOLD * scale.max(1.0) {
        return Err(Error::SingularWronskian { x });
    }

    let mut bordered = vec![vec![0.0; n + 1]; n + 1];
    for (j, row) in bordered.iter_mut().enumerate() {
        row[0] = z.deriv(x, j);
        for i in 0..n {
            row[i + 1] = seeds[i].deriv(x, j);
        }
    }
    let num = det_in_place(bordered);

    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * num / den)
}

/// Solutions of the inverse-square barrier equation obtained by commuting the
/// free equation at `mu = 0`: `(y1, y2)` both solve `-y'' + (2/x^2) y = lambda y`.
pub fn bessel_basis(lambda: f64, x: f64) -> Result<(f64, f64)> {
    if x == 0.0 || lambda <= 0.0 {
        return Err(Error::BesselDomain { x, lambda });
    }
    let r = lambda.sqrt();
    let rx = r * x;
    let y1 = rx.sin() + rx.cos() / rx;
    let y2 = rx.cos() - rx.sin() / rx;
    Ok((y1, y2))
}

/// Determinant by Gaussian elimination with partial pivoting; the matrices
/// here are tiny (n <= 6).
fn det_in_place(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    det
}
