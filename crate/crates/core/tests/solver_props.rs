//! Whole-pipeline checks: the assembled transfer matrix against direct
//! numerical integration, exactness on potentials the fit reproduces
//! identically, and the regularity of the characteristic over scan ranges.

use pruess::basis::{Segment, SegmentModel, TransferMatrix};
use pruess::fitting::Method;
use pruess::mesh::uniform_mesh;
use pruess::potentials::{builtin, CaseId, PotentialSpec};
use pruess::solver::{
    characteristic, find_eigenvalues, oracle_eigenvalues, system_matrix, BoundaryConditions,
    Problem, SolveConfig,
};
use std::f64::consts::PI;

fn rk4_transfer<V: Fn(f64) -> f64>(
    v: &V,
    a: f64,
    b: f64,
    lambda: f64,
    steps: usize,
) -> TransferMatrix {
    let h = (b - a) / steps as f64;
    let mut m = TransferMatrix::identity();
    let deriv = |x: f64, m: &TransferMatrix| {
        let w = v(x) - lambda;
        TransferMatrix {
            t11: m.t21,
            t12: m.t22,
            t21: w * m.t11,
            t22: w * m.t12,
        }
    };
    let add = |m: &TransferMatrix, k: &TransferMatrix, c: f64| TransferMatrix {
        t11: m.t11 + c * k.t11,
        t12: m.t12 + c * k.t12,
        t21: m.t21 + c * k.t21,
        t22: m.t22 + c * k.t22,
    };
    for i in 0..steps {
        let x = a + i as f64 * h;
        let k1 = deriv(x, &m);
        let k2 = deriv(x + h / 2.0, &add(&m, &k1, h / 2.0));
        let k3 = deriv(x + h / 2.0, &add(&m, &k2, h / 2.0));
        let k4 = deriv(x + h, &add(&m, &k3, h));
        m = TransferMatrix {
            t11: m.t11 + h / 6.0 * (k1.t11 + 2.0 * k2.t11 + 2.0 * k3.t11 + k4.t11),
            t12: m.t12 + h / 6.0 * (k1.t12 + 2.0 * k2.t12 + 2.0 * k3.t12 + k4.t12),
            t21: m.t21 + h / 6.0 * (k1.t21 + 2.0 * k2.t21 + 2.0 * k3.t21 + k4.t21),
            t22: m.t22 + h / 6.0 * (k1.t22 + 2.0 * k2.t22 + 2.0 * k3.t22 + k4.t22),
        };
    }
    m
}

/// RK4 propagation of the fitted piecewise model, segment by segment so the
/// model's jumps at breakpoints are never stepped across.
fn rk4_model_matrix(problem: &Problem, lambda: f64, steps_per_segment: usize) -> TransferMatrix {
    let mut total = TransferMatrix::identity();
    for seg in problem.segments() {
        let t = rk4_transfer(
            &|x| seg.model_value(x),
            seg.left,
            seg.right(),
            lambda,
            steps_per_segment,
        );
        total = t.compose(&total);
    }
    total
}

#[test]
fn system_matrix_matches_rk4_of_fitted_model() {
    let problem = Problem::new(
        builtin(CaseId::Case2),
        BoundaryConditions::dirichlet(),
        uniform_mesh(16).unwrap(),
        Method::Extended,
    )
    .unwrap();
    let lambda = 50.0;
    let t = system_matrix(&problem, lambda).unwrap();
    assert!((t.det() - 1.0).abs() < 1e-9);
    let oracle = rk4_model_matrix(&problem, lambda, 10_000);
    for (got, want) in [
        (t.t11, oracle.t11),
        (t.t12, oracle.t12),
        (t.t21, oracle.t21),
        (t.t22, oracle.t22),
    ] {
        assert!(
            (got - want).abs() < 1e-8 * want.abs().max(1.0),
            "{got} vs {want}"
        );
    }
}

#[test]
fn piecewise_constant_potential_is_solved_exactly() {
    // On a potential that is exactly constant per subinterval the midpoint
    // fit is the identity, so the coarse mesh and the dense reference see
    // the same operator.
    let staircase = PotentialSpec::new("staircase", "steps 3, 7, -1, 4", |x| {
        if x < 0.25 {
            3.0
        } else if x < 0.5 {
            7.0
        } else if x < 0.75 {
            -1.0
        } else {
            4.0
        }
    });
    let problem = Problem::new(
        staircase.clone(),
        BoundaryConditions::dirichlet(),
        uniform_mesh(4).unwrap(),
        Method::Pruess,
    )
    .unwrap();
    let coarse = find_eigenvalues(&problem, 5, &SolveConfig::default()).unwrap();
    let dense = oracle_eigenvalues(&staircase, BoundaryConditions::dirichlet(), 5, 4096).unwrap();
    for (c, d) in coarse.iter().zip(&dense) {
        assert!(
            (c.lambda - d).abs() < 1e-9 * d.abs().max(1.0),
            "{} vs {d}",
            c.lambda
        );
    }
}

#[test]
fn barrier_model_potential_is_solved_exactly() {
    // A single-segment problem whose potential IS the fitted model: the
    // closed-form eigenvalues must agree with direct integration of that
    // same potential.
    let (alpha, shift) = (3.0, 0.2);
    let center = 0.5 - shift;
    let g = move |x: f64| alpha + 2.0 / (x - center).cos().powi(2);
    let potential = PotentialSpec::new("barrier", "alpha + 2/cos^2(x - c)", g);
    let mesh = uniform_mesh(1).unwrap();
    let segments = vec![Segment {
        left: 0.0,
        length: 1.0,
        model: SegmentModel::CosSq { alpha, shift },
    }];
    let problem = Problem::from_parts(
        potential,
        BoundaryConditions::dirichlet(),
        mesh,
        Method::Extended,
        segments,
    )
    .unwrap();
    let roots = find_eigenvalues(&problem, 3, &SolveConfig::default()).unwrap();

    for r in &roots {
        // Independent root of the RK4 characteristic around the solver value.
        let d = |lam: f64| -rk4_transfer(&g, 0.0, 1.0, lam, 100_000).t12;
        let (mut lo, mut hi) = (r.lambda - 0.5, r.lambda + 0.5);
        let mut f_lo = d(lo);
        assert!(f_lo * d(hi) < 0.0, "oracle bracket failed at {}", r.lambda);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let f_mid = d(mid);
            if f_lo * f_mid <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                f_lo = f_mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!(
            (r.lambda - oracle).abs() < 1e-7,
            "lambda {} vs oracle {oracle}",
            r.lambda
        );
    }
}

#[test]
fn characteristic_is_finite_over_scan_ranges() {
    for case in CaseId::ALL {
        for method in [Method::Pruess, Method::Extended] {
            let problem = Problem::new(
                builtin(case),
                BoundaryConditions::dirichlet(),
                uniform_mesh(16).unwrap(),
                method,
            )
            .unwrap();
            let lambda_min = problem
                .segments()
                .iter()
                .map(|s| s.alpha())
                .fold(f64::INFINITY, f64::min)
                - 1.0;
            let mut lam = lambda_min;
            while lam < 7000.0 {
                let d = characteristic(&problem, lam).unwrap();
                assert!(d.is_finite(), "{case} {method:?} at lambda = {lam}");
                lam += 3.7;
            }
        }
    }
}

#[test]
fn spectra_strictly_increase() {
    for case in CaseId::ALL {
        let problem = Problem::new(
            builtin(case),
            BoundaryConditions::dirichlet(),
            uniform_mesh(16).unwrap(),
            Method::Pruess,
        )
        .unwrap();
        let roots = find_eigenvalues(&problem, 12, &SolveConfig::default()).unwrap();
        for pair in roots.windows(2) {
            assert!(pair[1].lambda > pair[0].lambda, "{case}");
        }
    }
}

#[test]
fn neumann_and_mixed_spectra() {
    // Free equation under other separated conditions: y'(0) = y'(1) = 0 has
    // lambda_n = (n-1)^2 pi^2; y(0) = y'(1) = 0 has lambda_n = (n-1/2)^2 pi^2.
    let zero = || PotentialSpec::new("zero", "0", |_| 0.0);
    let neumann = Problem::new(
        zero(),
        BoundaryConditions::neumann(),
        uniform_mesh(1).unwrap(),
        Method::Pruess,
    )
    .unwrap();
    let roots = find_eigenvalues(&neumann, 4, &SolveConfig::default()).unwrap();
    for (i, r) in roots.iter().enumerate() {
        let exact = (i as f64 * PI).powi(2);
        assert!(
            (r.lambda - exact).abs() < 1e-8 * exact.max(1.0),
            "neumann lambda_{}: {} vs {exact}",
            i + 1,
            r.lambda
        );
    }

    let mixed = Problem::new(
        zero(),
        BoundaryConditions::new(1.0, 0.0, 0.0, 1.0).unwrap(),
        uniform_mesh(1).unwrap(),
        Method::Pruess,
    )
    .unwrap();
    let roots = find_eigenvalues(&mixed, 4, &SolveConfig::default()).unwrap();
    for (i, r) in roots.iter().enumerate() {
        let exact = ((i as f64 + 0.5) * PI).powi(2);
        assert!(
            (r.lambda - exact).abs() < 1e-8 * exact,
            "mixed lambda_{}: {} vs {exact}",
            i + 1,
            r.lambda
        );
    }
}

#[test]
fn general_boundary_data_brackets_roots() {
    // A Robin-type condition on a varying potential: no closed form, but the
    // located roots must be genuine sign changes of the characteristic.
    let problem = Problem::new(
        builtin(CaseId::Case5),
        BoundaryConditions::new(1.0, -0.3, 2.0, 1.0).unwrap(),
        uniform_mesh(16).unwrap(),
        Method::Extended,
    )
    .unwrap();
    let roots = find_eigenvalues(&problem, 6, &SolveConfig::default()).unwrap();
    for pair in roots.windows(2) {
        assert!(pair[1].lambda > pair[0].lambda);
    }
    for r in &roots {
        let (lo, hi) = r.bracket;
        let f_lo = characteristic(&problem, lo).unwrap();
        let f_hi = characteristic(&problem, hi).unwrap();
        assert!(f_lo * f_hi <= 0.0);
        assert!(hi - lo <= 1e-10 * lo.abs().max(hi.abs()).max(1.0));
    }
}

#[test]
fn free_spectrum_against_weyl() {
    let problem = Problem::new(
        PotentialSpec::new("zero", "0", |_| 0.0),
        BoundaryConditions::dirichlet(),
        uniform_mesh(1).unwrap(),
        Method::Pruess,
    )
    .unwrap();
    let roots = find_eigenvalues(&problem, 25, &SolveConfig::default()).unwrap();
    for (i, r) in roots.iter().enumerate() {
        let n = (i + 1) as f64;
        assert!((r.lambda - n * n * PI * PI).abs() < 1e-8 * (n * n * PI * PI));
    }
}

#[test]
fn reference_solution_self_convergence() {
    // Successive mesh doublings of the dense reference shrink roughly like
    // h^2 on the first potential.
    let p = builtin(CaseId::Case1);
    let bc = BoundaryConditions::dirichlet();
    let l1 = oracle_eigenvalues(&p, bc, 1, 1024).unwrap()[0];
    let l2 = oracle_eigenvalues(&p, bc, 1, 2048).unwrap()[0];
    let l3 = oracle_eigenvalues(&p, bc, 1, 4096).unwrap()[0];
    let ratio = (l1 - l3).abs() / (l2 - l3).abs().max(1e-15);
    // (e1 - e3)/(e2 - e3) for h^2 decay is about (1 - 1/16)/(1/4 - 1/16) = 5.
    assert!(
        (3.5..7.0).contains(&ratio),
        "self-convergence ratio {ratio}"
    );
}
