//! Small quadrature toolbox: Gauss–Legendre nodes and a composite
//! trapezoid rule (the latter is kept for brute-force oracles in tests).

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre polynomial from the Chebyshev initial guess.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 2);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = (order + 1) / 2;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// ∫ₐᵇ f via Gauss–Legendre of the given order.
pub fn integrate_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Composite trapezoid rule with `panels + 1` equally spaced evaluations.
pub fn integrate_trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 1);
    let h = (b - a) / panels as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..panels {
        sum += f(a + i as f64 * h);
    }
    sum * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_weights_sum_to_interval_length() {
        for order in [2usize, 8, 31, 64] {
            let (_, w) = gauss_legendre(order);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "order {order}: {total}");
        }
    }

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // order q is exact through degree 2q-1
        let f = |x: f64| 5.0 * x.powi(7) - 3.0 * x.powi(4) + x - 2.0;
        let exact = {
            let prim = |x: f64| 5.0 / 8.0 * x.powi(8) - 0.6 * x.powi(5) + 0.5 * x * x - 2.0 * x;
            prim(1.5) - prim(-0.5)
        };
        let got = integrate_gl(f, -0.5, 1.5, 4);
        assert!((got - exact).abs() < 1e-12);
    }

    #[test]
    fn gl_handles_smooth_transcendentals() {
        let got = integrate_gl(|x| (-x * x / 2.0).exp(), -8.0, 8.0, 64);
        let exact = (2.0 * std::f64::consts::PI).sqrt();
        assert!((got - exact).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_converges() {
        let got = integrate_trapezoid(|x| x.sin(), 0.0, std::f64::consts::PI, 1 << 12);
        assert!((got - 2.0).abs() < 1e-6);
    }
}
