//! Holomorphic test functions with exact or numeric first partial
//! derivatives, and the derivative functionals Rf, |∇f| and |∇̃f|.

use num_complex::Complex64;

use crate::ball::{hermitian_inner, Automorphism, CPoint};
use crate::error::{Error, Result};

/// A representable holomorphic function on the unit ball of ℂⁿ.
#[derive(Debug, Clone)]
pub enum HoloFunction {
    /// Finite sum of monomials z^m with complex coefficients.
    Polynomial {
        n: usize,
        terms: Vec<(Vec<u32>, Complex64)>,
    },
    /// z ↦ scale · (1 − ⟨z,a⟩)^{−s}, holomorphic on the closed ball for |a| < 1.
    KernelPower {
        center: CPoint,
        exponent: f64,
        scale: Complex64,
    },
    /// outer ∘ φ for an automorphism φ.
    Composed {
        inner: Automorphism,
        outer: Box<HoloFunction>,
    },
    Sum(Box<HoloFunction>, Box<HoloFunction>),
    Scale(Complex64, Box<HoloFunction>),
}

impl HoloFunction {
    pub fn constant(n: usize, c: Complex64) -> Self {
        HoloFunction::Polynomial {
            n,
            terms: vec![(vec![0; n], c)],
        }
    }

    /// The coordinate function z ↦ z_k.
    pub fn coordinate(n: usize, k: usize) -> Self {
        let mut m = vec![0u32; n];
        m[k] = 1;
        HoloFunction::Polynomial {
            n,
            terms: vec![(m, Complex64::ONE)],
        }
    }

    pub fn monomial(n: usize, m: Vec<u32>, coeff: Complex64) -> Self {
        assert_eq!(m.len(), n);
        HoloFunction::Polynomial {
            n,
            terms: vec![(m, coeff)],
        }
    }

    pub fn kernel_power(center: CPoint, exponent: f64, scale: Complex64) -> Self {
        HoloFunction::KernelPower {
            center,
            exponent,
            scale,
        }
    }

    pub fn composed(inner: Automorphism, outer: HoloFunction) -> Self {
        HoloFunction::Composed {
            inner,
            outer: Box::new(outer),
        }
    }

    pub fn scaled(c: Complex64, f: HoloFunction) -> Self {
        HoloFunction::Scale(c, Box::new(f))
    }

    pub fn dim(&self) -> usize {
        match self {
            HoloFunction::Polynomial { n, .. } => *n,
            HoloFunction::KernelPower { center, .. } => center.dim(),
            HoloFunction::Composed { inner, .. } => inner.dim(),
            HoloFunction::Sum(a, _) => a.dim(),
            HoloFunction::Scale(_, f) => f.dim(),
        }
    }

    pub fn eval(&self, z: &CPoint) -> Result<Complex64> {
        match self {
            HoloFunction::Polynomial { n, terms } => {
                if z.dim() != *n {
                    return Err(Error::DimensionMismatch {
                        left: *n,
                        right: z.dim(),
                    });
                }
                let mut acc = Complex64::ZERO;
                for (m, coeff) in terms {
                    let mut term = *coeff;
                    for (k, &mk) in m.iter().enumerate() {
                        term *= z.coord(k).powu(mk);
                    }
                    acc += term;
                }
                Ok(acc)
            }
            HoloFunction::KernelPower {
                center,
                exponent,
                scale,
            } => {
                let base = Complex64::ONE - hermitian_inner(z, center)?;
                if base.norm() == 0.0 {
                    return Err(Error::Numeric(
                        "kernel power evaluated on its singularity".into(),
                    ));
                }
                Ok(scale * base.powf(-exponent))
            }
            HoloFunction::Composed { inner, outer } => outer.eval(&inner.apply(z)?),
            HoloFunction::Sum(a, b) => Ok(a.eval(z)? + b.eval(z)?),
            HoloFunction::Scale(c, f) => Ok(c * f.eval(z)?),
        }
    }

    /// The vector of holomorphic partials ∂f/∂z_k at z.
    ///
    /// Exact for polynomials, kernel powers and their sums/scalings; central
    /// complex differences through any composition with an automorphism.
    pub fn partials(&self, z: &CPoint) -> Result<Vec<Complex64>> {
        match self {
            HoloFunction::Polynomial { n, terms } => {
                if z.dim() != *n {
                    return Err(Error::DimensionMismatch {
                        left: *n,
                        right: z.dim(),
                    });
                }
                let mut out = vec![Complex64::ZERO; *n];
                for (m, coeff) in terms {
                    for (k, &mk) in m.iter().enumerate() {
                        if mk == 0 {
                            continue;
                        }
                        let mut term = *coeff * f64::from(mk);
                        for (j, &mj) in m.iter().enumerate() {
                            let e = if j == k { mj - 1 } else { mj };
                            term *= z.coord(j).powu(e);
                        }
                        out[k] += term;
                    }
                }
                Ok(out)
            }
            HoloFunction::KernelPower {
                center,
                exponent,
                scale,
            } => {
                let base = Complex64::ONE - hermitian_inner(z, center)?;
                let factor = scale * exponent * base.powf(-exponent - 1.0);
                Ok(center
                    .coords()
                    .iter()
                    .map(|a| factor * a.conj())
                    .collect())
            }
            HoloFunction::Composed { .. } => self.numeric_partials(z),
            HoloFunction::Sum(a, b) => {
                let pa = a.partials(z)?;
                let pb = b.partials(z)?;
                Ok(pa.iter().zip(&pb).map(|(x, y)| x + y).collect())
            }
            HoloFunction::Scale(c, f) => {
                Ok(f.partials(z)?.into_iter().map(|p| c * p).collect())
            }
        }
    }

    /// Central complex differences along one real direction per coordinate;
    /// legitimate because f is holomorphic, so one real direction determines
    /// the full complex derivative.
    fn numeric_partials(&self, z: &CPoint) -> Result<Vec<Complex64>> {
        let base_step = f64::EPSILON.cbrt() * (1.0 + z.norm());
        // stay inside the ball when z is near the boundary
        let h = base_step.min(0.5 * (1.0 - z.norm())).max(1e-12);
        let n = z.dim();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut plus = z.coords().to_vec();
            let mut minus = z.coords().to_vec();
            plus[k] += Complex64::new(h, 0.0);
            minus[k] -= Complex64::new(h, 0.0);
            let fp = self.eval(&CPoint::new(plus))?;
            let fm = self.eval(&CPoint::new(minus))?;
            let d = (fp - fm) / (2.0 * h);
            if !d.re.is_finite() || !d.im.is_finite() {
                return Err(Error::Numeric(format!(
                    "central difference failed at coordinate {k} (step {h:.3e})"
                )));
            }
            out.push(d);
        }
        Ok(out)
    }
}

/// Value plus every first-order derivative functional at one point.
#[derive(Debug, Clone)]
pub struct DerivativeBundle {
    pub value: Complex64,
    pub partials: Vec<Complex64>,
    /// Rf(z) = Σ z_k ∂f/∂z_k
    pub radial: Complex64,
    /// |∇f(z)|
    pub grad_norm: f64,
    /// |∇̃f(z)|
    pub inv_grad_norm: f64,
}

impl DerivativeBundle {
    pub fn compute(f: &HoloFunction, z: &CPoint) -> Result<Self> {
        let value = f.eval(z)?;
        let partials = f.partials(z)?;
        let radial: Complex64 = z
            .coords()
            .iter()
            .zip(&partials)
            .map(|(zk, pk)| zk * pk)
            .sum();
        let grad_sq: f64 = partials.iter().map(|p| p.norm_sqr()).sum();
        let grad_norm = grad_sq.sqrt();
        let inv_grad_norm = invariant_norm_from_parts(z.norm_sq(), grad_sq, radial.norm_sqr())?;
        Ok(Self {
            value,
            partials,
            radial,
            grad_norm,
            inv_grad_norm,
        })
    }
}

/// |∇̃f|² = (1−|z|²)(|∇f|² − |Rf|²), with a roundoff clamp on the radicand.
fn invariant_norm_from_parts(z_sq: f64, grad_sq: f64, radial_sq: f64) -> Result<f64> {
    let radicand = (1.0 - z_sq) * (grad_sq - radial_sq);
    let scale = (1.0 + grad_sq).max(1.0);
    if radicand < -1e-12 * scale {
        return Err(Error::Numeric(format!(
            "negative invariant-gradient radicand {radicand:.3e}"
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Rf(z) = Σ z_k ∂f/∂z_k.
pub fn radial_derivative(f: &HoloFunction, z: &CPoint) -> Result<Complex64> {
    Ok(DerivativeBundle::compute(f, z)?.radial)
}

/// |∇f(z)|, the ℓ²-norm of the holomorphic partials.
pub fn gradient_norm(f: &HoloFunction, z: &CPoint) -> Result<f64> {
    Ok(DerivativeBundle::compute(f, z)?.grad_norm)
}

/// |∇̃f(z)| via the identity path.
pub fn invariant_gradient_norm(f: &HoloFunction, z: &CPoint) -> Result<f64> {
    Ok(DerivativeBundle::compute(f, z)?.inv_grad_norm)
}

/// |∇̃f(z)| = |∇(f∘φ_z)(0)|, the defining formula. Serves as the oracle for
/// the identity path.
pub fn invariant_gradient_definitional(f: &HoloFunction, z: &CPoint) -> Result<f64> {
    if !z.is_interior() {
        return Err(Error::OutsideBall { norm: z.norm() });
    }
    let composed = HoloFunction::composed(Automorphism::involution(z.clone()), f.clone());
    let partials = composed.numeric_partials(&CPoint::origin(z.dim()))?;
    Ok(partials.iter().map(|p| p.norm_sqr()).sum::<f64>().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_interior(rng: &mut StdRng, n: usize, max_norm: f64) -> CPoint {
        loop {
            let coords: Vec<Complex64> = (0..n)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let p = CPoint::new(coords);
            if p.norm() < max_norm {
                return p;
            }
        }
    }

    /// A small family of test functions in dimension n.
    fn test_family(n: usize) -> Vec<HoloFunction> {
        let mut fam = vec![
            HoloFunction::constant(n, c(1.0, 0.0)),
            HoloFunction::coordinate(n, 0),
            HoloFunction::monomial(n, {
                let mut m = vec![0; n];
                m[0] = 2;
                m
            }, c(1.0, -0.5)),
            HoloFunction::kernel_power(
                CPoint::from_reals(&{
                    let mut a = vec![0.0; n];
                    a[0] = 0.5;
                    a
                }),
                2.0,
                c(1.0, 0.0),
            ),
        ];
        if n >= 2 {
            let mut m = vec![0; n];
            m[0] = 1;
            m[1] = 1;
            fam.push(HoloFunction::monomial(n, m, c(0.0, 1.0)));
        }
        fam
    }

    #[test]
    fn eval_examples() {
        let one = HoloFunction::constant(2, c(1.0, 0.0));
        let z = CPoint::from_reals(&[0.3, 0.2]);
        assert_eq!(one.eval(&z).unwrap(), c(1.0, 0.0));

        let f = HoloFunction::monomial(2, vec![2, 0], c(1.0, 0.0));
        let z = CPoint::from_reals(&[0.5, 0.0]);
        assert_abs_diff_eq!(f.eval(&z).unwrap().re, 0.25, epsilon = 1e-15);

        // n=1 kernel power at z=0.5: (1 − 0.25)^{-2} = 16/9
        let k = HoloFunction::kernel_power(CPoint::from_reals(&[0.5]), 2.0, c(1.0, 0.0));
        let z = CPoint::from_reals(&[0.5]);
        assert_abs_diff_eq!(k.eval(&z).unwrap().re, 1.0 / 0.5625, epsilon = 1e-14);
        assert_abs_diff_eq!(k.eval(&z).unwrap().im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn partials_examples() {
        let constant = HoloFunction::constant(3, c(2.0, 1.0));
        let z = CPoint::from_reals(&[0.1, 0.2, 0.3]);
        for p in constant.partials(&z).unwrap() {
            assert_eq!(p, Complex64::ZERO);
        }

        // f = z₁z₂ at (0.3, 0.4i) → (0.4i, 0.3)
        let f = HoloFunction::monomial(2, vec![1, 1], c(1.0, 0.0));
        let z = CPoint::new(vec![c(0.3, 0.0), c(0.0, 0.4)]);
        let p = f.partials(&z).unwrap();
        assert_abs_diff_eq!(p[0].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p[0].im, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1].re, 0.3, epsilon = 1e-15);

        // kernel power, s=1, a=0.5, derivative at 0 is 0.5
        let k = HoloFunction::kernel_power(CPoint::from_reals(&[0.5]), 1.0, c(1.0, 0.0));
        let p = k.partials(&CPoint::origin(1)).unwrap();
        assert_abs_diff_eq!(p[0].re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn radial_derivative_on_homogeneous_polynomials() {
        // R(z₁²z₂) = 3 z₁²z₂
        let f = HoloFunction::monomial(2, vec![2, 1], c(1.0, 0.0));
        let z = CPoint::new(vec![c(0.2, 0.3), c(-0.1, 0.4)]);
        let r = radial_derivative(&f, &z).unwrap();
        let v = f.eval(&z).unwrap();
        assert_abs_diff_eq!((r - 3.0 * v).norm(), 0.0, epsilon = 1e-15);

        // constants are annihilated
        let one = HoloFunction::constant(2, c(5.0, -1.0));
        assert_eq!(radial_derivative(&one, &z).unwrap(), Complex64::ZERO);

        // n=1, f=z² at 0.5 → 0.5
        let f = HoloFunction::monomial(1, vec![2], c(1.0, 0.0));
        let r = radial_derivative(&f, &CPoint::from_reals(&[0.5])).unwrap();
        assert_abs_diff_eq!(r.re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn gradient_norm_examples() {
        let f = HoloFunction::coordinate(2, 0);
        let z = CPoint::from_reals(&[0.4, 0.1]);
        assert_abs_diff_eq!(gradient_norm(&f, &z).unwrap(), 1.0, epsilon = 1e-15);

        // f = z₁ + 2z₂ → |∇f| = √5
        let f = HoloFunction::Sum(
            Box::new(HoloFunction::coordinate(2, 0)),
            Box::new(HoloFunction::scaled(
                c(2.0, 0.0),
                HoloFunction::coordinate(2, 1),
            )),
        );
        assert_abs_diff_eq!(gradient_norm(&f, &z).unwrap(), 5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn invariant_gradient_one_dim_closed_form() {
        // n=1: |∇̃f(z)| = (1−|z|²)|f′(z)|
        let f = HoloFunction::coordinate(1, 0);
        let z = CPoint::from_reals(&[0.5]);
        assert_abs_diff_eq!(
            invariant_gradient_norm(&f, &z).unwrap(),
            0.75,
            epsilon = 1e-14
        );

        let f2 = HoloFunction::monomial(1, vec![2], c(1.0, 0.0));
        assert_abs_diff_eq!(
            invariant_gradient_definitional(&f2, &z).unwrap(),
            0.75,
            epsilon = 1e-8
        );
    }

    #[test]
    fn definitional_equals_gradient_norm_at_origin() {
        let f = HoloFunction::monomial(2, vec![1, 1], c(1.0, 0.0));
        let mut rng = StdRng::seed_from_u64(3);
        let z = random_interior(&mut rng, 2, 0.8);
        let g0 = gradient_norm(&f, &CPoint::origin(2)).unwrap();
        let d0 = invariant_gradient_definitional(&f, &CPoint::origin(2)).unwrap();
        assert_abs_diff_eq!(g0, d0, epsilon = 1e-9);
        // and away from the origin the two invariant-gradient paths agree
        let ident = invariant_gradient_norm(&f, &z).unwrap();
        let defn = invariant_gradient_definitional(&f, &z).unwrap();
        assert!((ident - defn).abs() / (1.0 + ident) < 1e-6);
    }

    #[test]
    fn identity_path_matches_definitional_on_family() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in [1usize, 2, 3] {
            for f in test_family(n) {
                for _ in 0..20 {
                    let z = random_interior(&mut rng, n, 0.9);
                    let ident = invariant_gradient_norm(&f, &z).unwrap();
                    let defn = invariant_gradient_definitional(&f, &z).unwrap();
                    assert!(
                        (ident - defn).abs() / (1.0 + ident) < 1e-5,
                        "n={n}, identity {ident} vs definitional {defn}"
                    );
                }
            }
        }
    }

    #[test]
    fn chain_inequality_holds() {
        let mut rng = StdRng::seed_from_u64(13);
        for n in [1usize, 2] {
            for f in test_family(n) {
                for _ in 0..100 {
                    let z = random_interior(&mut rng, n, 0.95);
                    let b = DerivativeBundle::compute(&f, &z).unwrap();
                    let w = 1.0 - z.norm_sq();
                    assert!(w * b.radial.norm() <= w * b.grad_norm + 1e-9);
                    assert!(w * b.grad_norm <= b.inv_grad_norm + 1e-9);
                }
            }
        }
    }

    #[test]
    fn finite_differences_match_exact_partials() {
        // observed convergence order under step halving should be ~2
        let f = HoloFunction::kernel_power(CPoint::from_reals(&[0.4, 0.2]), 3.0, c(1.0, 0.0));
        let z = CPoint::from_reals(&[0.3, -0.2]);
        let exact = f.partials(&z).unwrap();
        let diff_at = |h: f64| {
            let mut plus = z.coords().to_vec();
            let mut minus = z.coords().to_vec();
            plus[0] += c(h, 0.0);
            minus[0] -= c(h, 0.0);
            let fp = f.eval(&CPoint::new(plus)).unwrap();
            let fm = f.eval(&CPoint::new(minus)).unwrap();
            ((fp - fm) / (2.0 * h) - exact[0]).norm()
        };
        let e1 = diff_at(1e-3);
        let e2 = diff_at(5e-4);
        let order = (e1 / e2).log2();
        assert!(order > 1.9, "observed order {order}");
    }

    #[test]
    fn mobius_invariance_of_invariant_gradient() {
        let mut rng = StdRng::seed_from_u64(17);
        for n in [1usize, 2] {
            for f in test_family(n) {
                for _ in 0..10 {
                    let a = random_interior(&mut rng, n, 0.7);
                    let z = random_interior(&mut rng, n, 0.7);
                    let phi = Automorphism::involution(a);
                    let composed = HoloFunction::composed(phi.clone(), f.clone());
                    let lhs = invariant_gradient_definitional(&composed, &z).unwrap();
                    let rhs = invariant_gradient_norm(&f, &phi.apply(&z).unwrap()).unwrap();
                    assert!(
                        (lhs - rhs).abs() / (1.0 + rhs) < 1e-5,
                        "n={n}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }
}
