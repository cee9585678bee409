//! Complex-ball primitives: points, automorphisms, pseudo-hyperbolic balls and
//! the invariant measure density.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{IntegralEstimate, QuadratureSpec, Region, WeightedMeasure};

/// A point of ℂⁿ, meant to lie in the (closed) unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoint {
    coords: Vec<Complex64>,
}

impl CPoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        assert!(!coords.is_empty(), "dimension must be at least 1");
        Self { coords }
    }

    /// Point with the given real coordinates.
    pub fn from_reals(coords: &[f64]) -> Self {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn origin(n: usize) -> Self {
        Self::new(vec![Complex64::ZERO; n])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn coord(&self, k: usize) -> Complex64 {
        self.coords[k]
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_interior(&self) -> bool {
        self.norm_sq() < 1.0
    }

    /// Returns a copy shifted by `delta` along every coordinate (both real and
    /// imaginary parts). Used by the singular-point jitter policy.
    pub fn jitter(&self, delta: f64) -> Self {
        Self::new(
            self.coords
                .iter()
                .map(|c| c + Complex64::new(delta, delta))
                .collect(),
        )
    }

    fn check_interior(&self) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(Error::OutsideBall { norm: self.norm() })
        }
    }
}

/// ⟨z,w⟩ = Σ z_k conj(w_k).
pub fn hermitian_inner(z: &CPoint, w: &CPoint) -> Result<Complex64> {
    if z.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            left: z.dim(),
            right: w.dim(),
        });
    }
    Ok(z.coords
        .iter()
        .zip(&w.coords)
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// The involutive automorphism φ_a with φ_a(0) = a, φ_a(a) = 0, φ_a∘φ_a = id.
///
/// Uses the projection form φ_a(z) = (a − P_a z − s_a Q_a z)/(1 − ⟨z,a⟩) with
/// s_a = √(1−|a|²), P_a the projection onto span{a} and Q_a = I − P_a.
/// For a = 0 this degenerates to z ↦ −z.
pub fn involution_apply(a: &CPoint, z: &CPoint) -> Result<CPoint> {
    if a.dim() != z.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: z.dim(),
        });
    }
    a.check_interior()?;
    z.check_interior()?;

    let a_sq = a.norm_sq();
    if a_sq == 0.0 {
        return Ok(CPoint::new(z.coords.iter().map(|c| -c).collect()));
    }
    let s = (1.0 - a_sq).sqrt();
    let za = hermitian_inner(z, a)?;
    let denom = Complex64::ONE - za;
    let proj = za / a_sq; // P_a z = proj * a
    let coords = a
        .coords
        .iter()
        .zip(&z.coords)
        .map(|(&ak, &zk)| {
            let p = proj * ak;
            let q = zk - p;
            (ak - p - s * q) / denom
        })
        .collect();
    Ok(CPoint::new(coords))
}

/// (1−|a|²)(1−|z|²)/|1−⟨z,a⟩|², which equals 1−|φ_a(z)|².
pub fn one_minus_sq_identity(a: &CPoint, z: &CPoint) -> Result<f64> {
    a.check_interior()?;
    z.check_interior()?;
    let za = hermitian_inner(z, a)?;
    let denom = (Complex64::ONE - za).norm_sqr();
    Ok((1.0 - a.norm_sq()) * (1.0 - z.norm_sq()) / denom)
}

/// An automorphism of the unit ball: either a unitary or an involution φ_a.
#[derive(Debug, Clone)]
pub enum Automorphism {
    Unitary(DMatrix<Complex64>),
    Involution(CPoint),
}

impl Automorphism {
    pub fn involution(a: CPoint) -> Self {
        Automorphism::Involution(a)
    }

    pub fn dim(&self) -> usize {
        match self {
            Automorphism::Unitary(u) => u.nrows(),
            Automorphism::Involution(a) => a.dim(),
        }
    }

    pub fn apply(&self, z: &CPoint) -> Result<CPoint> {
        match self {
            Automorphism::Unitary(u) => {
                if u.ncols() != z.dim() {
                    return Err(Error::DimensionMismatch {
                        left: u.ncols(),
                        right: z.dim(),
                    });
                }
                let v = nalgebra::DVector::from_column_slice(z.coords());
                let out = u * v;
                Ok(CPoint::new(out.iter().copied().collect()))
            }
            Automorphism::Involution(a) => involution_apply(a, z),
        }
    }
}

/// D(z,ρ) = {w : |φ_z(w)| < ρ}.
#[derive(Debug, Clone)]
pub struct PseudoHyperbolicBall {
    pub center: CPoint,
    pub radius: f64,
}

impl PseudoHyperbolicBall {
    pub fn new(center: CPoint, radius: f64) -> Result<Self> {
        if !(0.0 < radius && radius < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "pseudo-hyperbolic radius must lie in (0,1), got {radius}"
            )));
        }
        center.check_interior()?;
        Ok(Self { center, radius })
    }

    pub fn contains(&self, w: &CPoint) -> Result<bool> {
        in_pseudo_ball(&self.center, self.radius, w)
    }
}

/// Membership test w ∈ D(center, ρ).
pub fn in_pseudo_ball(center: &CPoint, rho: f64, w: &CPoint) -> Result<bool> {
    if !(0.0 < rho && rho < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "pseudo-hyperbolic radius must lie in (0,1), got {rho}"
        )));
    }
    // |φ_z(w)|² = 1 − (1−|z|²)(1−|w|²)/|1−⟨w,z⟩|², cheaper than applying φ_z.
    let one_minus = one_minus_sq_identity(center, w)?;
    Ok(1.0 - one_minus < rho * rho)
}

/// Density of the invariant measure dτ = dv/(1−|w|²)^{n+1} at w.
pub fn invariant_density(w: &CPoint) -> Result<f64> {
    w.check_interior()?;
    let n = w.dim() as i32;
    Ok((1.0 - w.norm_sq()).powi(-(n + 1)))
}

/// Monte Carlo estimate of the normalized volume v(D(center, ρ)).
pub fn pseudo_ball_volume(
    center: &CPoint,
    rho: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    center.check_interior()?;
    if !(0.0 < rho && rho < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "pseudo-hyperbolic radius must lie in (0,1), got {rho}"
        )));
    }
    let n = center.dim();
    let measure = WeightedMeasure::new(n, 0.0)?;
    let mc_spec = spec.with_region(Region::FullBall).force_monte_carlo();
    let center = center.clone();
    crate::quad::integrate_ball(
        |w| {
            if in_pseudo_ball(&center, rho, w).unwrap_or(false) {
                1.0
            } else {
                0.0
            }
        },
        &measure,
        &mc_spec,
    )
}

/// Monte Carlo estimate of the τ-mass ∫_{D(z,ρ)} dτ(w), which is a constant
/// independent of z.
pub fn pseudo_ball_tau_mass(
    center: &CPoint,
    rho: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    center.check_interior()?;
    let n = center.dim();
    let measure = WeightedMeasure::new(n, 0.0)?;
    let mc_spec = spec.with_region(Region::FullBall).force_monte_carlo();
    let center = center.clone();
    crate::quad::integrate_ball(
        |w| {
            if in_pseudo_ball(&center, rho, w).unwrap_or(false) {
                invariant_density(w).unwrap_or(0.0)
            } else {
                0.0
            }
        },
        &measure,
        &mc_spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn random_interior_point(rng: &mut StdRng, n: usize, max_norm: f64) -> CPoint {
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

    #[test]
    fn inner_product_examples() {
        let n2_zero = CPoint::origin(2);
        assert_eq!(
            hermitian_inner(&n2_zero, &n2_zero).unwrap(),
            Complex64::ZERO
        );

        let e1 = CPoint::new(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let e2 = CPoint::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(hermitian_inner(&e1, &e2).unwrap(), Complex64::ZERO);

        // n=1: ⟨0.5, 0.5i⟩ = 0.5 · (−0.5i) = −0.25i
        let z = CPoint::new(vec![c(0.5, 0.0)]);
        let w = CPoint::new(vec![c(0.0, 0.5)]);
        let inner = hermitian_inner(&z, &w).unwrap();
        assert_abs_diff_eq!(inner.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(inner.im, -0.25, epsilon = 1e-15);
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let z = CPoint::origin(2);
        let w = CPoint::origin(3);
        assert!(matches!(
            hermitian_inner(&z, &w),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn involution_defining_properties() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [1usize, 2, 3] {
            for _ in 0..50 {
                let a = random_interior_point(&mut rng, n, 0.95);
                let zero = CPoint::origin(n);
                let at_zero = involution_apply(&a, &zero).unwrap();
                let at_a = involution_apply(&a, &a).unwrap();
                for k in 0..n {
                    assert_abs_diff_eq!(at_zero.coord(k).re, a.coord(k).re, epsilon = 1e-12);
                    assert_abs_diff_eq!(at_zero.coord(k).im, a.coord(k).im, epsilon = 1e-12);
                    assert_abs_diff_eq!(at_a.coord(k).norm(), 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn involution_one_dim_closed_form() {
        // n=1: φ_a(z) = (a−z)/(1−āz); a=0.5, z=0.25 gives 0.25/0.875.
        let a = CPoint::from_reals(&[0.5]);
        let z = CPoint::from_reals(&[0.25]);
        let out = involution_apply(&a, &z).unwrap();
        assert_abs_diff_eq!(out.coord(0).re, 0.25 / 0.875, epsilon = 1e-15);
        assert_abs_diff_eq!(out.coord(0).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn involution_rejects_boundary() {
        let a = CPoint::from_reals(&[1.0]);
        let z = CPoint::from_reals(&[0.0]);
        assert!(matches!(
            involution_apply(&a, &z),
            Err(Error::OutsideBall { .. })
        ));
        assert!(matches!(
            involution_apply(&z, &a),
            Err(Error::OutsideBall { .. })
        ));
    }

    #[test]
    fn one_minus_sq_examples() {
        let zero = CPoint::origin(1);
        let z = CPoint::from_reals(&[0.3]);
        assert_abs_diff_eq!(
            one_minus_sq_identity(&zero, &z).unwrap(),
            1.0 - 0.09,
            epsilon = 1e-15
        );
        let a = CPoint::from_reals(&[0.5]);
        assert_abs_diff_eq!(one_minus_sq_identity(&a, &a).unwrap(), 1.0, epsilon = 1e-15);

        let phi = involution_apply(&a, &CPoint::from_reals(&[0.25])).unwrap();
        assert_abs_diff_eq!(
            one_minus_sq_identity(&a, &CPoint::from_reals(&[0.25])).unwrap(),
            1.0 - phi.norm_sq(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn pseudo_ball_membership_examples() {
        let center = CPoint::from_reals(&[0.0]);
        assert!(in_pseudo_ball(&center, 0.1, &center).unwrap());
        assert!(!in_pseudo_ball(&center, 0.5, &CPoint::from_reals(&[0.6])).unwrap());

        let center = CPoint::from_reals(&[0.5]);
        // |φ_{0.5}(0.25)| = 0.285714… < 0.3
        assert!(in_pseudo_ball(&center, 0.3, &CPoint::from_reals(&[0.25])).unwrap());
        assert!(matches!(
            in_pseudo_ball(&center, 1.5, &center),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn invariant_density_examples() {
        assert_abs_diff_eq!(
            invariant_density(&CPoint::origin(1)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        // n=1, |w|² = 0.5 → 0.5⁻² = 4
        let w = CPoint::from_reals(&[0.5f64.sqrt()]);
        assert_abs_diff_eq!(invariant_density(&w).unwrap(), 4.0, epsilon = 1e-12);
        // n=2, |w|² = 0.75 → 0.25⁻³ = 64
        let w = CPoint::from_reals(&[0.5, 0.5f64.sqrt()]);
        assert_abs_diff_eq!(invariant_density(&w).unwrap(), 64.0, epsilon = 1e-11);
    }

    #[test]
    fn unitary_preserves_norm() {
        // 2x2 rotation mixed with a phase.
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[
                c(0.6, 0.0),
                c(0.0, 0.8),
                c(0.0, 0.8),
                c(0.6, 0.0),
            ],
        );
        let phi = Automorphism::Unitary(u);
        let z = CPoint::new(vec![c(0.3, 0.1), c(-0.2, 0.4)]);
        let out = phi.apply(&z).unwrap();
        assert_abs_diff_eq!(out.norm_sq(), z.norm_sq(), epsilon = 1e-14);
    }

    proptest! {
        #[test]
        fn involution_is_an_involution(seed in 0u64..1000, n in 1usize..4) {
            let mut rng = StdRng::seed_from_u64(seed);
            let a = random_interior_point(&mut rng, n, 0.95);
            let z = random_interior_point(&mut rng, n, 0.95);
            let once = involution_apply(&a, &z).unwrap();
            prop_assert!(once.is_interior());
            let twice = involution_apply(&a, &once).unwrap();
            for k in 0..n {
                prop_assert!((twice.coord(k) - z.coord(k)).norm() < 1e-10);
            }
        }

        #[test]
        fn identity_matches_involution(seed in 0u64..1000, n in 1usize..4) {
            let mut rng = StdRng::seed_from_u64(seed);
            let a = random_interior_point(&mut rng, n, 0.95);
            let z = random_interior_point(&mut rng, n, 0.95);
            let phi = involution_apply(&a, &z).unwrap();
            let lhs = 1.0 - phi.norm_sq();
            let rhs = one_minus_sq_identity(&a, &z).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }

        #[test]
        fn pseudo_ball_membership_is_symmetric(seed in 0u64..1000, n in 1usize..4) {
            let mut rng = StdRng::seed_from_u64(seed);
            let z = random_interior_point(&mut rng, n, 0.95);
            let w = random_interior_point(&mut rng, n, 0.95);
            let rho = rng.random_range(0.05..0.95);
            prop_assert_eq!(
                in_pseudo_ball(&z, rho, &w).unwrap(),
                in_pseudo_ball(&w, rho, &z).unwrap()
            );
        }
    }
}
