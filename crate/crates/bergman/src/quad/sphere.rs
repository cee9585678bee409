//! Quadrature and sampling on the unit sphere of ℂⁿ.
//!
//! The deterministic rule uses the factorization of the uniform measure σ on
//! S_n: the squared moduli (|ζ₁|²,…,|ζₙ|²) are uniform on the simplex and the
//! phases are independent and uniform on the circle. The simplex directions
//! get Gauss–Jacobi nodes (stick-breaking marginals are Beta(1, n−k)), the
//! phases get equispaced points, which integrate trigonometric polynomials
//! exactly up to the phase count.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::ball::CPoint;
use crate::error::Result;
use crate::quad::jacobi::gauss_jacobi_01;

/// Deterministic cubature rule on the unit sphere of ℂⁿ; weights sum to 1.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub n: usize,
    pub points: Vec<CPoint>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// Builds the tensor rule with `simplex_order` nodes per stick-breaking
    /// level and `phase_order` equispaced points per phase circle.
    pub fn new(n: usize, simplex_order: usize, phase_order: usize) -> Result<Self> {
        assert!(n >= 1);
        let simplex_order = simplex_order.max(2);
        let phase_order = phase_order.max(2);

        // Moduli-squared vectors t with weights, built by stick-breaking:
        // level k has marginal density (n-k)(1-s)^{n-k-1} on [0,1].
        let mut stack: Vec<(Vec<f64>, f64, f64)> = vec![(Vec::new(), 1.0, 1.0)];
        for k in 1..n {
            let a = (n - k - 1) as f64;
            let rule = gauss_jacobi_01(simplex_order, a, 0.0)?;
            let norm = (n - k) as f64; // 1/B(1, n-k)
            let mut next = Vec::with_capacity(stack.len() * simplex_order);
            for (t, w, remaining) in &stack {
                for (&s, &ws) in rule.nodes.iter().zip(&rule.weights) {
                    let mut t2 = t.clone();
                    t2.push(s * remaining);
                    next.push((t2, w * ws * norm, remaining * (1.0 - s)));
                }
            }
            stack = next;
        }

        let phase_w = 1.0 / phase_order as f64;
        let phases: Vec<Complex64> = (0..phase_order)
            .map(|j| {
                let theta = std::f64::consts::TAU * j as f64 / phase_order as f64;
                Complex64::from_polar(1.0, theta)
            })
            .collect();

        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (t, w, remaining) in &stack {
            let mut moduli: Vec<f64> = t.iter().map(|&tk| tk.sqrt()).collect();
            moduli.push(remaining.sqrt());
            // Tensor over the n phase circles.
            let mut idx = vec![0usize; n];
            loop {
                let coords: Vec<Complex64> = (0..n).map(|k| moduli[k] * phases[idx[k]]).collect();
                points.push(CPoint::new(coords));
                weights.push(w * phase_w.powi(n as i32));
                // advance the odometer
                let mut k = 0;
                loop {
                    idx[k] += 1;
                    if idx[k] < phase_order {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                    if k == n {
                        break;
                    }
                }
                if k == n {
                    break;
                }
            }
        }
        Ok(Self { n, points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Σ w_j g(ζ_j), a deterministic estimate of ∫_{S_n} g dσ.
    pub fn integrate(&self, mut g: impl FnMut(&CPoint) -> f64) -> f64 {
        let vals: Vec<f64> = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * g(p))
            .collect();
        super::pairwise_sum(&vals)
    }
}

/// Draws a uniformly distributed point of the unit sphere of ℂⁿ by
/// normalizing a standard complex Gaussian vector.
pub fn sample_sphere(rng: &mut impl Rng, n: usize) -> CPoint {
    loop {
        let coords: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return CPoint::new(coords.iter().map(|c| c / norm).collect());
        }
    }
}

/// The antithetic partner ζ ↦ −ζ.
pub fn antithetic(p: &CPoint) -> CPoint {
    CPoint::new(p.coords().iter().map(|c| -c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::sphere_monomial_integral;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weights_sum_to_one() {
        for n in 1..=3 {
            let rule = SphereRule::new(n, 6, 8).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn points_lie_on_sphere() {
        let rule = SphereRule::new(3, 4, 4).unwrap();
        for p in &rule.points {
            assert_abs_diff_eq!(p.norm_sq(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn integrates_monomial_moduli_exactly() {
        // ∫ |ζ^m|² dσ = (n-1)! m! / (n-1+|m|)!
        for n in 1..=3usize {
            let rule = SphereRule::new(n, 8, 10).unwrap();
            for m1 in 0..=3u32 {
                for m2 in 0..=2u32 {
                    let mut m = vec![m1];
                    if n >= 2 {
                        m.push(m2);
                    }
                    m.resize(n, 0);
                    let got = rule.integrate(|zeta| {
                        zeta.coords()
                            .iter()
                            .zip(&m)
                            .map(|(c, &mk)| c.norm_sqr().powi(mk as i32))
                            .product()
                    });
                    let expected = sphere_monomial_integral(&m, n);
                    assert_abs_diff_eq!(got, expected, epsilon = 1e-12 * (1.0 + expected));
                }
            }
        }
    }

    #[test]
    fn phase_orthogonality() {
        // ∫ ζ₁ conj(ζ₂) dσ = 0 by phase symmetry.
        let rule = SphereRule::new(2, 6, 8).unwrap();
        let re = rule.integrate(|z| (z.coord(0) * z.coord(1).conj()).re);
        let im = rule.integrate(|z| (z.coord(0) * z.coord(1).conj()).im);
        assert_abs_diff_eq!(re, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(im, 0.0, epsilon = 1e-13);
    }
}
