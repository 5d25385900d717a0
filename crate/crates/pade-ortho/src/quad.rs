//! Gauss-type quadrature rules on the reference interval [-1, 1].
//!
//! Chebyshev rules have closed-form nodes; Gauss-Legendre nodes are found by
//! Newton iteration on the Legendre recurrence and cached per order since the
//! node-doubling driver requests the same orders over and over.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights of a rule on [-1, 1].
pub(crate) struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Chebyshev (first kind): integrates f(t) dt / sqrt(1 - t^2).
pub(crate) fn gauss_chebyshev_first(n: usize) -> Rule {
    let w = std::f64::consts::PI / n as f64;
    let nodes = (0..n)
        .map(|j| ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
        .collect();
    Rule { nodes, weights: vec![w; n] }
}

/// Gauss-Chebyshev (second kind): integrates f(t) sqrt(1 - t^2) dt.
pub(crate) fn gauss_chebyshev_second(n: usize) -> Rule {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 1..=n {
        let angle = j as f64 * std::f64::consts::PI / (n + 1) as f64;
        nodes.push(angle.cos());
        weights.push(std::f64::consts::PI / (n + 1) as f64 * angle.sin().powi(2));
    }
    Rule { nodes, weights }
}

/// Gauss-Legendre: integrates f(t) dt.
pub(crate) fn gauss_legendre(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(compute_gauss_legendre(n));
    cache.lock().unwrap().insert(n, Arc::clone(&rule));
    rule
}

fn compute_gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // Roots are symmetric; solve for the non-negative half.
    for k in 0..n.div_ceil(2) {
        // Tricomi-style initial guess.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -x;
        weights[k] = w;
        nodes[n - 1 - k] = x;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        let mid = n / 2;
        nodes[mid] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[mid] = 2.0 / (d * d);
    }
    Rule { nodes, weights }
}

/// Value and derivative of the (monic-free) Legendre polynomial P_n at x.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chebyshev_first_integrates_constants() {
        // integral of dt / sqrt(1 - t^2) over [-1, 1] is pi.
        let rule = gauss_chebyshev_first(16);
        let total: f64 = rule.weights.iter().sum();
        assert_relative_eq!(total, std::f64::consts::PI, epsilon = 1e-14);
    }

    #[test]
    fn chebyshev_second_integrates_constants() {
        // integral of sqrt(1 - t^2) dt over [-1, 1] is pi / 2.
        let rule = gauss_chebyshev_second(32);
        let total: f64 = rule.weights.iter().sum();
        assert_relative_eq!(total, std::f64::consts::PI / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn legendre_exact_for_polynomials() {
        let rule = gauss_legendre(8);
        // Exact for degree <= 15: check t^8 whose integral is 2/9.
        let val: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| w * t.powi(8))
            .sum();
        assert_relative_eq!(val, 2.0 / 9.0, epsilon = 1e-14);
        // And an odd power integrates to zero.
        let odd: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| w * t.powi(7))
            .sum();
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn legendre_high_order_stays_accurate() {
        let rule = gauss_legendre(513);
        let total: f64 = rule.weights.iter().sum();
        assert_relative_eq!(total, 2.0, epsilon = 1e-12);
        // exp integrates to e - 1/e.
        let val: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| w * t.exp())
            .sum();
        assert_relative_eq!(val, 1f64.exp() - (-1f64).exp(), epsilon = 1e-12);
    }
}
