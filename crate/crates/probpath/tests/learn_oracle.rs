//! The trust-region trainer against independent numerics.
//!
//! Derivatives are checked with finite differences and a from-scratch
//! gradient formula; the optimizer is checked against plain gradient
//! descent run to a far tighter tolerance than either solver's comparison
//! threshold. The objective is strongly convex (unit quadratic plus convex
//! loss), so both solvers must land on the same unique minimizer.

mod common;

use common::{central_diff_grad, gd_minimize, oracle_gradient, rng};
use probpath::learn::{
    gradient, hessian_vec, objective, train_binary, train_binary_from, BinaryProblem,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_problem(rng: &mut ChaCha8Rng, n: usize, d: usize, c: f64) -> (Vec<Vec<f64>>, Vec<f64>, BinaryProblem) {
    let xs: Vec<Vec<f64>> =
        (0..n).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let ys: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let problem = BinaryProblem::new(&xs, &ys, c).unwrap();
    (xs, ys, problem)
}

#[test]
fn gradient_matches_central_differences_and_the_direct_formula() {
    let mut rng = rng(0x64AD);
    for &c in &[0.5, 1.0, 5.0] {
        for _ in 0..5 {
            let (xs, ys, problem) = random_problem(&mut rng, 30, 4, c);
            let w: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            let g = gradient(&problem, &w);

            let fd = central_diff_grad(&|v| objective(&problem, v), &w, 1e-5);
            let scale = g.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
            for j in 0..4 {
                assert!(
                    (g[j] - fd[j]).abs() / scale <= 1e-5,
                    "C={c}: coordinate {j}: analytic={} finite-diff={}",
                    g[j],
                    fd[j]
                );
            }

            let direct = oracle_gradient(&xs, &ys, c, &w);
            for j in 0..4 {
                assert!(
                    (g[j] - direct[j]).abs() / scale <= 1e-10,
                    "C={c}: coordinate {j}: analytic={} direct={}",
                    g[j],
                    direct[j]
                );
            }
        }
    }
}

#[test]
fn hessian_vector_products_match_gradient_differences() {
    let mut rng = rng(0x8E55);
    for &c in &[0.5, 1.0, 5.0] {
        for _ in 0..5 {
            let (_, _, problem) = random_problem(&mut rng, 30, 4, c);
            let w: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            let mut v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut v {
                *x /= norm;
            }

            let hv = hessian_vec(&problem, &w, &v);
            let h = 1e-4;
            let wp: Vec<f64> = w.iter().zip(&v).map(|(a, b)| a + h * b).collect();
            let wm: Vec<f64> = w.iter().zip(&v).map(|(a, b)| a - h * b).collect();
            let gp = gradient(&problem, &wp);
            let gm = gradient(&problem, &wm);
            let scale = hv.iter().map(|x| x.abs()).fold(1.0f64, f64::max);
            for j in 0..4 {
                let fd = (gp[j] - gm[j]) / (2.0 * h);
                assert!(
                    (hv[j] - fd).abs() / scale <= 1e-4,
                    "C={c}: coordinate {j}: hessian-vec={} grad-diff={fd}",
                    hv[j]
                );
            }
        }
    }
}

#[test]
fn trust_region_newton_agrees_with_gradient_descent() {
    let mut rng = rng(0x7A09);
    for &c in &[0.1, 1.0, 10.0] {
        let (xs, ys, problem) = random_problem(&mut rng, 50, 5, c);
        let (w, info) = train_binary(&problem, 1e-6, 200).unwrap();
        assert!(info.converged, "C={c}: trainer hit the iteration cap");
        let oracle = gd_minimize(&xs, &ys, c);
        for j in 0..5 {
            assert!(
                (w[j] - oracle[j]).abs() <= 1e-4,
                "C={c}: coordinate {j}: newton={} descent={}",
                w[j],
                oracle[j]
            );
        }
    }
}

#[test]
fn any_starting_point_reaches_the_same_minimizer() {
    let mut rng = rng(0x57A7);
    let (_, _, problem) = random_problem(&mut rng, 40, 5, 1.0);
    let (from_zero, _) = train_binary(&problem, 1e-6, 200).unwrap();
    let far: Vec<f64> = (0..5).map(|_| rng.random_range(-10.0..10.0)).collect();
    let (from_far, info) = train_binary_from(&problem, 1e-6, 200, &far).unwrap();
    assert!(info.converged);
    for j in 0..5 {
        assert!(
            (from_zero[j] - from_far[j]).abs() <= 1e-4,
            "coordinate {j}: {} vs {}",
            from_zero[j],
            from_far[j]
        );
    }
}

#[test]
fn objective_never_increases_across_iteration_budgets() {
    let mut rng = rng(0x0B7);
    let (_, _, problem) = random_problem(&mut rng, 50, 5, 2.0);
    // An unreachable tolerance forces each run to spend its whole budget,
    // so the k-th run's weights are the optimizer's k-th iterate.
    let mut last = objective(&problem, &vec![0.0; 5]);
    for k in 1..=25 {
        let (w, _) = train_binary(&problem, 1e-15, k).unwrap();
        let f = objective(&problem, &w);
        assert!(
            f <= last + 1e-12,
            "iterate {k} raised the objective: {last} -> {f}"
        );
        last = f;
    }
}

#[test]
fn recovers_a_planted_linear_rule() {
    let mut rng = rng(0x91A);
    let truth = [1.5, -2.0, 0.5, 0.0, 3.0];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for _ in 0..400 {
        let x: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
        let z: f64 = x.iter().zip(&truth).map(|(a, b)| a * b).sum();
        if z.abs() < 0.1 {
            continue; // keep a margin so the rule is learnable
        }
        ys.push(if z > 0.0 { 1.0 } else { -1.0 });
        xs.push(x);
    }
    let problem = BinaryProblem::new(&xs, &ys, 10.0).unwrap();
    let (w, _) = train_binary(&problem, 1e-5, 200).unwrap();
    let correct = xs
        .iter()
        .zip(&ys)
        .filter(|(x, &y)| {
            let z: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
            (z > 0.0) == (y > 0.0)
        })
        .count();
    assert!(
        correct as f64 >= 0.95 * ys.len() as f64,
        "only {correct} of {} training points classified correctly",
        ys.len()
    );
}
