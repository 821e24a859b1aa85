//! Eigenvalue location by transfer-matrix shooting.
//!
//! The fundamental matrix over `[0, 1]` is the ordered product of the
//! per-segment closed-form propagators. Boundary data turn it into a scalar
//! characteristic whose roots are the eigenvalues of the fitted problem;
//! roots are bracketed by a sign-change scan and refined by bisection.

use std::f64::consts::PI;

use crate::basis::{model_transfer, Segment, TransferMatrix};
use crate::error::{Error, Result};
use crate::fitting::{fit_segments, slope_table, Method};
use crate::mesh::{uniform_mesh, Mesh};
use crate::potentials::PotentialSpec;

/// Separated boundary conditions
/// `a0 y(0) + a1 y'(0) = 0`, `b0 y(1) + b1 y'(1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConditions {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
}

impl BoundaryConditions {
    pub fn new(a0: f64, a1: f64, b0: f64, b1: f64) -> Result<Self> {
        if (a0 == 0.0 && a1 == 0.0) || (b0 == 0.0 && b1 == 0.0) {
            return Err(Error::DegenerateBoundary);
        }
        Ok(Self { a0, a1, b0, b1 })
    }

    /// `y(0) = y(1) = 0`.
    pub fn dirichlet() -> Self {
        Self {
            a0: 1.0,
            a1: 0.0,
            b0: 1.0,
            b1: 0.0,
        }
    }

    /// `y'(0) = y'(1) = 0`.
    pub fn neumann() -> Self {
        Self {
            a0: 0.0,
            a1: 1.0,
            b0: 0.0,
            b1: 1.0,
        }
    }
}

/// A fitted eigenvalue problem: potential, boundary data, mesh, and the
/// per-subinterval models the solver actually propagates through.
#[derive(Debug, Clone)]
pub struct Problem {
    potential: PotentialSpec,
    pub bc: BoundaryConditions,
    pub mesh: Mesh,
    pub method: Method,
    segments: Vec<Segment>,
}

impl Problem {
    /// Fits the potential on the mesh with the chosen method.
    pub fn new(
        potential: PotentialSpec,
        bc: BoundaryConditions,
        mesh: Mesh,
        method: Method,
    ) -> Result<Self> {
        let segments = fit_segments(&|x| potential.eval(x), &mesh, method, slope_table());
        for seg in &segments {
            seg.validate()?;
        }
        Ok(Self {
            potential,
            bc,
            mesh,
            method,
            segments,
        })
    }

    /// Assembles a problem from externally supplied segments, checking that
    /// they tile the mesh exactly.
    pub fn from_parts(
        potential: PotentialSpec,
        bc: BoundaryConditions,
        mesh: Mesh,
        method: Method,
        segments: Vec<Segment>,
    ) -> Result<Self> {
        if segments.len() != mesh.segment_count() {
            return Err(Error::SegmentMismatch(format!(
                "{} segments for {} subintervals",
                segments.len(),
                mesh.segment_count()
            )));
        }
        for (seg, (a, b)) in segments.iter().zip(mesh.intervals()) {
            if (seg.left - a).abs() > 1e-12 || (seg.right() - b).abs() > 1e-12 {
                return Err(Error::SegmentMismatch(format!(
                    "segment [{}, {}] does not tile subinterval [{a}, {b}]",
                    seg.left,
                    seg.right()
                )));
            }
            seg.validate()?;
        }
        Ok(Self {
            potential,
            bc,
            mesh,
            method,
            segments,
        })
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    fn alpha_min(&self) -> f64 {
        self.segments
            .iter()
            .map(Segment::alpha)
            .fold(f64::INFINITY, f64::min)
    }

    fn alpha_mean(&self) -> f64 {
        self.segments.iter().map(Segment::alpha).sum::<f64>() / self.segments.len() as f64
    }
}

/// One located eigenvalue with its final bisection bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResult {
    /// 1-based position in the spectrum as counted by the scan.
    pub index: usize,
    pub lambda: f64,
    /// Final bracket `(lo, hi)`; the characteristic changes sign over it.
    pub bracket: (f64, f64),
    /// Characteristic evaluations spent in bisection.
    pub iterations: usize,
    pub method: Method,
}

/// Scan and bisection controls.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Bracket width target, relative to `max(1, |lambda|)`.
    pub rel_tolerance: f64,
    pub max_bisection_iters: usize,
    /// Scan step before the first root is found.
    pub initial_step: f64,
    /// Fraction of the previous spectral gap used as the next scan step.
    pub gap_fraction: f64,
    /// Hard scan ceiling; when unset a generous counting bound is used.
    pub lambda_ceiling: Option<f64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            rel_tolerance: 1e-10,
            max_bisection_iters: 200,
            initial_step: 1.0f64.max(PI * PI / 4.0),
            gap_fraction: 0.25,
            lambda_ceiling: None,
        }
    }
}

/// Ordered product `T_{K-1} ... T_1 T_0` of the segment propagators.
pub fn system_matrix(problem: &Problem, lambda: f64) -> Result<TransferMatrix> {
    let mut total = TransferMatrix::identity();
    for seg in &problem.segments {
        total = model_transfer(seg, lambda)?.compose(&total);
    }
    Ok(total)
}

/// Boundary characteristic `D(lambda)`; its roots are the eigenvalues.
///
/// The initial vector `(a1, -a0)` satisfies the left condition identically,
/// so `D = b0 (T v)_1 + b1 (T v)_2`. For Dirichlet data this is `-T12`, the
/// sign-flipped value of the second fundamental solution at the right end.
pub fn characteristic(problem: &Problem, lambda: f64) -> Result<f64> {
    let t = system_matrix(problem, lambda)?;
    let v = (problem.bc.a1, -problem.bc.a0);
    let w = t.apply(v);
    Ok(problem.bc.b0 * w.0 + problem.bc.b1 * w.1)
}

/// Locates the `count` smallest roots of the characteristic.
///
/// The scan starts just below the smallest fitted `alpha`, steps by a
/// fraction of the last spectral gap, and bisects every bracketing sign
/// change. A Weyl-style counting estimate guards against silently renumbered
/// spectra when a root slips between scan points.
pub fn find_eigenvalues(
    problem: &Problem,
    count: usize,
    config: &SolveConfig,
) -> Result<Vec<EigenResult>> {
    if count == 0 {
        return Err(Error::Config("eigenvalue count must be at least 1".into()));
    }
    if !(config.rel_tolerance > 0.0) {
        return Err(Error::Config("tolerance must be positive".into()));
    }

    let lambda_min = problem.alpha_min() - 1.0;
    let ceiling = config.lambda_ceiling.unwrap_or_else(|| {
        let n = (count + 2) as f64;
        lambda_min + 4.0 * n * n * PI * PI
    });

    let mut results: Vec<EigenResult> = Vec::with_capacity(count);
    let mut lam = lambda_min;
    let mut f_prev = characteristic(problem, lam)?;
    let mut step = config.initial_step;
    let mut last_root = lambda_min;

    while results.len() < count {
        let next = lam + step;
        if next > ceiling {
            return Err(Error::ScanExhausted {
                ceiling,
                found: results.len(),
                requested: count,
            });
        }
        let f_next = characteristic(problem, next)?;
        if f_prev != 0.0 && f_prev * f_next <= 0.0 {
            let (lambda, bracket, iterations) = bisect(problem, lam, next, f_prev, config)?;
            results.push(EigenResult {
                index: results.len() + 1,
                lambda,
                bracket,
                iterations,
                method: problem.method,
            });
            step = ((lambda - last_root) * config.gap_fraction).max(1e-3);
            last_root = lambda;
        }
        lam = next;
        f_prev = f_next;
    }

    let top = results.last().unwrap().lambda;
    let estimate = ((top - problem.alpha_mean()).max(0.0).sqrt() / PI).round() as i64;
    if (estimate - count as i64).abs() > 1 {
        return Err(Error::MissedRootSuspected {
            found: count,
            lambda: top,
            estimate: estimate.max(0) as usize,
        });
    }

    Ok(results)
}

fn bisect(
    problem: &Problem,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    config: &SolveConfig,
) -> Result<(f64, (f64, f64), usize)> {
    let mut iterations = 0;
    while iterations < config.max_bisection_iters {
        let tol = config.rel_tolerance * lo.abs().max(hi.abs()).max(1.0);
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = characteristic(problem, mid)?;
        iterations += 1;
        if f_mid == 0.0 {
            // Dead-center hit: the bracket already straddles the root.
            lo = mid - 0.25 * tol;
            hi = mid + 0.25 * tol;
            break;
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok((0.5 * (lo + hi), (lo, hi), iterations))
}

/// Reference spectrum: the piecewise-constant pipeline on a fine uniform
/// mesh. Used as the comparison standard for convergence studies.
pub fn oracle_eigenvalues(
    potential: &PotentialSpec,
    bc: BoundaryConditions,
    count: usize,
    k_ref: usize,
) -> Result<Vec<f64>> {
    if k_ref < 128 {
        return Err(Error::Config(format!(
            "reference mesh needs at least 128 subintervals, got {k_ref}"
        )));
    }
    let mesh = uniform_mesh(k_ref)?;
    let problem = Problem::new(potential.clone(), bc, mesh, Method::Pruess)?;
    let results = find_eigenvalues(&problem, count, &SolveConfig::default())?;
    Ok(results.into_iter().map(|r| r.lambda).collect())
}
