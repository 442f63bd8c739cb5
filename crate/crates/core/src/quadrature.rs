//! Quadrature rules shared by the averaging and cross-section routines.

use std::f64::consts::{PI, TAU};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrates `f` over each panel `[edges[i], edges[i+1]]` with the given
/// Gauss–Legendre rule and sums the panels.
pub fn composite_gauss<F: Fn(f64) -> f64>(f: F, edges: &[f64], rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (nodes, weights) = rule;
    edges
        .windows(2)
        .map(|w| {
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[1] + w[0]);
            half * nodes
                .iter()
                .zip(weights)
                .map(|(&t, &wt)| wt * f(mid + half * t))
                .sum::<f64>()
        })
        .sum()
}

/// Mean of a 2π-periodic function by the `n`-point trapezoid rule.
///
/// For integrands analytic in a strip this converges geometrically in `n`.
pub fn periodic_mean<T, F>(f: F, n: usize) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Div<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    let h = TAU / n as f64;
    (0..n)
        .map(|j| f(h * j as f64))
        .fold(T::default(), |a, b| a + b)
        / n as f64
}
