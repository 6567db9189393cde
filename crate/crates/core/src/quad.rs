//! Adaptive Gauss–Legendre quadrature.
//!
//! Compensator integrals and impact-kernel integrals are evaluated with a
//! 15-point Gauss–Legendre rule refined by interval bisection until the
//! panel estimate is reproduced by its two halves within the requested
//! absolute tolerance. The integrands here are products of exponentials,
//! so convergence is fast and the recursion stays shallow.

/// 15-point Gauss–Legendre nodes on [-1, 1] (positive half; rule is symmetric).
const GL_NODES: [f64; 8] = [
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601700,
    0.8482065834104272,
    0.9372733924007059,
    0.9879925180204854,
];

/// Weights paired with `GL_NODES`.
const GL_WEIGHTS: [f64; 8] = [
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
];

fn gl15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = GL_WEIGHTS[0] * f(c);
    for i in 1..8 {
        let dx = h * GL_NODES[i];
        sum += GL_WEIGHTS[i] * (f(c + dx) + f(c - dx));
    }
    sum * h
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl15(f, a, m);
    let right = gl15(f, m, b);
    let refined = left + right;
    if (refined - whole).abs() <= tol || depth >= 40 {
        return refined;
    }
    adaptive(f, a, m, left, 0.5 * tol, depth + 1) + adaptive(f, m, b, right, 0.5 * tol, depth + 1)
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let whole = gl15(&f, a, b);
    adaptive(&f, a, b, whole, tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_is_exact() {
        // GL15 integrates degree <= 29 exactly.
        let v = integrate(|x| x.powi(7) - 3.0 * x.powi(2) + 1.0, -1.0, 2.0, 1e-12);
        let exact = |x: f64| x.powi(8) / 8.0 - x.powi(3) + x;
        assert_abs_diff_eq!(v, exact(2.0) - exact(-1.0), epsilon = 1e-12);
    }

    #[test]
    fn decaying_exponential() {
        let v = integrate(|x| (-0.8 * x).exp(), 0.0, 5.0, 1e-12);
        assert_abs_diff_eq!(v, (1.0 - (-4.0f64).exp()) / 0.8, epsilon = 1e-11);
    }

    #[test]
    fn exponential_product_matches_closed_form() {
        // (e^{0.2 s} - 1) e^{-0.8 s} on [0.3, 1.0], the shape that shows up
        // in compensator integrals with a linear jump map.
        let v = integrate(|s| ((0.2 * s).exp() - 1.0) * (-0.8 * s).exp(), 0.3, 1.0, 1e-12);
        let anti = |s: f64| (-0.6 * s).exp() / -0.6 - (-0.8 * s).exp() / -0.8;
        assert_abs_diff_eq!(v, anti(1.0) - anti(0.3), epsilon = 1e-11);
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(integrate(|x| x.exp(), 1.3, 1.3, 1e-10), 0.0);
    }

    #[test]
    fn oscillatory_integrand_refines() {
        let v = integrate(|x| (10.0 * x).sin(), 0.0, 3.0, 1e-11);
        assert_abs_diff_eq!(v, (1.0 - (30.0f64).cos()) / 10.0, epsilon = 1e-10);
    }
}
