//! Gauss–Jacobi nodes and weights via the Golub–Welsch algorithm.
//!
//! The rules here live on [0,1] with weight u^b (1-u)^a folded into the
//! weights, so integrands with boundary weight singularities (a or b close to
//! -1) cost no accuracy.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::special::log_gamma;

/// A quadrature rule on [0,1]: Σ w_i h(u_i) ≈ ∫₀¹ u^b (1-u)^a h(u) du.
#[derive(Debug, Clone)]
pub struct Rule01 {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Jacobi rule of degree `deg` on [0,1] for the weight u^b (1-u)^a.
///
/// `a` is the exponent at u = 1 and `b` the exponent at u = 0; both must
/// exceed -1. Exact for polynomial h up to degree 2·deg − 1.
pub fn gauss_jacobi_01(deg: usize, a: f64, b: f64) -> Result<Rule01> {
    if deg < 2 {
        return Err(Error::InvalidParameter(format!(
            "quadrature degree must be at least 2, got {deg}"
        )));
    }
    if !(a > -1.0) || !(b > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "Jacobi exponents must exceed -1, got a={a}, b={b}"
        )));
    }

    // Symmetric Jacobi matrix for the weight (1-x)^a (1+x)^b on [-1,1].
    let (alpha, beta) = (a, b);
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    let mut diag = (beta - alpha) / (2.0 + alpha + beta);
    for k in 0..deg - 1 {
        let kp1 = (k + 1) as f64;
        let denom = 2.0 * kp1 + alpha + beta;
        let off = 2.0 / denom
            * (kp1 * (kp1 + alpha) * (kp1 + beta) * (kp1 + alpha + beta)
                / ((denom + 1.0) * (denom - 1.0)))
                .sqrt();
        m[(k, k)] = diag;
        m[(k, k + 1)] = off;
        m[(k + 1, k)] = off;
        diag = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
    }
    m[(deg - 1, deg - 1)] = diag;

    let eigen = m.symmetric_eigen();

    // μ0 = ∫_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
    let log_mu0 = (alpha + beta + 1.0) * 2f64.ln() + log_gamma(alpha + 1.0)
        + log_gamma(beta + 1.0)
        - log_gamma(alpha + beta + 2.0);
    let mu0 = log_mu0.exp();

    let mut pairs: Vec<(f64, f64)> = eigen
        .eigenvalues
        .iter()
        .copied()
        .zip(eigen.eigenvectors.row(0).iter().map(|v| v * v * mu0))
        .collect();
    pairs.sort_unstable_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

    // Map x ∈ [-1,1] to u = (x+1)/2; the weight picks up 2^{-(a+b+1)}.
    let scale = (-(alpha + beta + 1.0) * 2f64.ln()).exp();
    let nodes = pairs.iter().map(|&(x, _)| 0.5 * (x + 1.0)).collect();
    let weights = pairs.iter().map(|&(_, w)| w * scale).collect();
    Ok(Rule01 { nodes, weights })
}

/// Plain Gauss–Legendre rule mapped to [lo, hi] (no weight folded in).
pub fn gauss_legendre(deg: usize, lo: f64, hi: f64) -> Result<Rule01> {
    let base = gauss_jacobi_01(deg, 0.0, 0.0)?;
    let span = hi - lo;
    Ok(Rule01 {
        nodes: base.nodes.iter().map(|&u| lo + span * u).collect(),
        weights: base.weights.iter().map(|&w| w * span).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn apply(rule: &Rule01, h: impl Fn(f64) -> f64) -> f64 {
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&u, &w)| w * h(u))
            .sum()
    }

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(8, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(apply(&rule, |_| 1.0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(apply(&rule, |u| u * u * u), 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(apply(&rule, |u| u.powi(10)), 1.0 / 11.0, epsilon = 1e-13);
    }

    #[test]
    fn jacobi_total_mass_is_beta_function() {
        // ∫₀¹ u^{1.5} (1-u)^{-0.5} du = B(2.5, 0.5)
        let rule = gauss_jacobi_01(16, -0.5, 1.5).unwrap();
        let expected = (log_gamma(2.5) + log_gamma(0.5) - log_gamma(3.0)).exp();
        assert_abs_diff_eq!(apply(&rule, |_| 1.0), expected, epsilon = 1e-12);
    }

    #[test]
    fn jacobi_handles_singular_weight() {
        // ∫₀¹ (1-u)^{-0.9} u du = B(2, 0.1)
        let rule = gauss_jacobi_01(24, -0.9, 0.0).unwrap();
        let expected = (log_gamma(2.0) + log_gamma(0.1) - log_gamma(2.1)).exp();
        assert_abs_diff_eq!(apply(&rule, |u| u), expected, epsilon = 1e-11);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gauss_jacobi_01(1, 0.0, 0.0).is_err());
        assert!(gauss_jacobi_01(4, -1.0, 0.0).is_err());
        assert!(gauss_jacobi_01(4, 0.0, -1.5).is_err());
    }
}
