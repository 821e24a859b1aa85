//! Differential-equation residual checks for the commutation machinery: every
//! transformed solution must solve its transformed equation, and the closed
//! double-commutation form must agree with the recursive construction.

use pruess::commutation::{
    apply_f_plus, bessel_basis, double_commute_potential, n_commute_apply, single_commute,
    SeedSolution, SmoothSolution,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn second_derivative<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

#[test]
fn transformed_solution_solves_transformed_equation() {
    // Seed cos(2x) at mu = 4 turns the free equation into the 8/cos^2(2x)
    // barrier; the image of sin(sqrt(l)x)/sqrt(l) must solve it.
    let mu = 4.0;
    let seed = || {
        SeedSolution::new(
            mu,
            (-0.78, 0.78),
            |x: f64| (2.0 * x).cos(),
            |x: f64| -2.0 * (2.0 * x).sin(),
        )
    };
    let p1 = single_commute(|_| 0.0, seed());
    for &x in &[-0.6f64, -0.2, 0.3, 0.7] {
        let expected = 8.0 / (2.0 * x).cos().powi(2);
        assert!((p1.eval(x).unwrap() - expected).abs() < 1e-9 * expected);
    }

    let lambda: f64 = 11.0;
    let r = lambda.sqrt();
    let u = apply_f_plus(seed(), move |x| (r * x).sin() / r, move |x| (r * x).cos());
    let h = 1e-3;
    for &x in &[-0.5f64, 0.0, 0.25, 0.6] {
        let eval = |t: f64| u(t).unwrap();
        let upp = second_derivative(&eval, x, h);
        let residual = -upp + (p1.eval(x).unwrap() - lambda) * eval(x);
        assert!(residual.abs() < 1e-6, "x = {x}: residual {residual}");
    }
}

#[test]
fn double_commutation_matches_recursion() {
    // Closed form against p2 = -p1 + 2 mu2 + 2 (z2'/z2)^2 with the explicit
    // intermediate seed, on a 100-point grid.
    let (mu1, mu2) = (1.0f64, 2.0f64);
    let (r1, r2) = (mu1.sqrt(), mu2.sqrt());
    let p2 = double_commute_potential(mu1, mu2);
    for i in 0..=100 {
        let x = 0.5 * i as f64 / 100.0;
        let t1 = (r1 * x).tan();
        let s2 = (r2 * x).sin();
        let c2 = (r2 * x).cos();
        let z2 = r2 * c2 + r1 * t1 * s2;
        let z2p = -mu2 * s2 + mu1 * (1.0 + t1 * t1) * s2 + r1 * r2 * t1 * c2;
        let p1 = 2.0 * mu1 / (r1 * x).cos().powi(2);
        let recursive = -p1 + 2.0 * mu2 + 2.0 * (z2p / z2) * (z2p / z2);
        let direct = p2.eval(x).unwrap();
        assert!(
            (direct - recursive).abs() < 1e-9 * recursive.abs().max(1.0),
            "x = {x}: {direct} vs {recursive}"
        );
    }
}

fn sin_jet(freq: f64) -> SmoothSolution {
    SmoothSolution::new(move |x, k| {
        let scale = freq.powi(k as i32);
        match k % 4 {
            0 => scale * (freq * x).sin(),
            1 => scale * (freq * x).cos(),
            2 => -scale * (freq * x).sin(),
            _ => -scale * (freq * x).cos(),
        }
    })
}

fn cos_jet(freq: f64) -> SmoothSolution {
    SmoothSolution::new(move |x, k| {
        let scale = freq.powi(k as i32);
        match k % 4 {
            0 => scale * (freq * x).cos(),
            1 => -scale * (freq * x).sin(),
            2 => -scale * (freq * x).cos(),
            _ => scale * (freq * x).sin(),
        }
    })
}

#[test]
fn double_commuted_solutions_solve_their_equation() {
    let (mu1, mu2) = (1.0, 2.0);
    let p2 = double_commute_potential(mu1, mu2);
    let lambda: f64 = 7.0;
    let seeds = [cos_jet(mu1.sqrt()), sin_jet(mu2.sqrt())];
    let z = sin_jet(lambda.sqrt());
    let u = |x: f64| n_commute_apply(&seeds, &z, x).unwrap();
    let h = 1e-3;
    for &x in &[0.05f64, 0.15, 0.3, 0.45] {
        let upp = second_derivative(&u, x, h);
        let residual = -upp + (p2.eval(x).unwrap() - lambda) * u(x);
        assert!(residual.abs() < 1e-5, "x = {x}: residual {residual}");
    }
}

#[test]
fn n_commute_agrees_with_bordered_determinant_formula() {
    // Hand-expanded 3x3 determinant over the seed Wronskian as the oracle.
    let mut rng = StdRng::seed_from_u64(1234);
    for _ in 0..50 {
        let mu1: f64 = rng.gen_range(0.5..4.0);
        let mu2: f64 = rng.gen_range(0.5..4.0);
        if (mu1 - mu2).abs() < 0.1 {
            continue;
        }
        let lambda: f64 = rng.gen_range(5.0..40.0);
        let x: f64 = rng.gen_range(0.02..0.4);

        let seeds = [cos_jet(mu1.sqrt()), sin_jet(mu2.sqrt())];
        let z = sin_jet(lambda.sqrt());
        let got = n_commute_apply(&seeds, &z, x).unwrap();

        let (y1, y1p, y1pp) = (
            seeds[0].deriv(x, 0),
            seeds[0].deriv(x, 1),
            seeds[0].deriv(x, 2),
        );
        let (y2, y2p, y2pp) = (
            seeds[1].deriv(x, 0),
            seeds[1].deriv(x, 1),
            seeds[1].deriv(x, 2),
        );
        let (z0, z1, z2) = (z.deriv(x, 0), z.deriv(x, 1), z.deriv(x, 2));
        let det3 = z0 * (y1p * y2pp - y2p * y1pp) - y1 * (z1 * y2pp - y2p * z2)
            + y2 * (z1 * y1pp - y1p * z2);
        let oracle = det3 / (y1 * y2p - y1p * y2);
        assert!(
            (got - oracle).abs() < 1e-9 * oracle.abs().max(1.0),
            "x = {x}: {got} vs {oracle}"
        );
    }
}

#[test]
fn f_plus_is_invertible_off_the_seed_eigenvalue() {
    // The solution map has matrix determinant lambda - mu, so it preserves
    // two-dimensional solution spaces away from the seed eigenvalue.
    let mut rng = StdRng::seed_from_u64(99);
    let mu = 1.0;
    for _ in 0..100 {
        let x: f64 = rng.gen_range(-1.3..1.3);
        let lambda: f64 = rng.gen_range(-5.0..50.0);
        let ratio = -x.tan(); // y'/y for the cos seed
        let ratio_deriv = -(1.0 + x.tan() * x.tan());
        let p = 0.0;
        let det = ratio * ratio - (p - lambda - ratio_deriv);
        assert!(
            (det - (lambda - mu)).abs() < 1e-9 * (lambda - mu).abs().max(1.0),
            "x = {x}, lambda = {lambda}: det {det}"
        );
    }
}

#[test]
fn bessel_solutions_solve_inverse_square_equation() {
    let mut rng = StdRng::seed_from_u64(2024);
    let h = 1e-4;
    for _ in 0..100 {
        let lambda: f64 = rng.gen_range(0.5..150.0);
        let x: f64 = rng.gen_range(0.15..3.0);
        for col in 0..2 {
            let y = |t: f64| {
                let (y1, y2) = bessel_basis(lambda, t).unwrap();
                if col == 0 {
                    y1
                } else {
                    y2
                }
            };
            let ypp = second_derivative(&y, x, h);
            let residual = -ypp + (2.0 / (x * x) - lambda) * y(x);
            let scale = 1.0 + (lambda * y(x)).abs();
            assert!(
                residual.abs() < 1e-6 * scale,
                "lambda = {lambda}, x = {x}, col {col}: {residual}"
            );
        }
    }
}

#[test]
fn repeated_commutation_generates_inverse_square_family() {
    // m = 1: seed x at mu = 0 gives 2/x^2. m = 2: commuting that with its
    // zero-energy solution x^2 gives 6/x^2 = m(m+1)/x^2.
    let p1 = single_commute(|_| 0.0, SeedSolution::new(0.0, (0.0, 10.0), |x| x, |_| 1.0));
    let p2 = single_commute(
        move |x| p1.eval(x).unwrap(),
        SeedSolution::new(0.0, (0.0, 10.0), |x| x * x, |x| 2.0 * x),
    );
    for &x in &[0.2f64, 0.7, 1.9] {
        assert!((p2.eval(x).unwrap() - 6.0 / (x * x)).abs() < 1e-9 / (x * x));
    }
}
