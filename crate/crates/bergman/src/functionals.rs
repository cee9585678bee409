//! The four derivative functionals
//!
//!   I₁ = ∫ |f|^p dv_α                        I₂ = ∫ |f|^{p−q} [(1−|z|²)|Rf|]^q dv_α
//!   I₃ = ∫ |f|^{p−q} [(1−|z|²)|∇f|]^q dv_α   I₄ = ∫ |f|^{p−q} |∇̃f|^q dv_α
//!
//! together with comparability reports, the related embedding and local
//! inequalities, and the truncation profile showing the exponent range
//! 0 < q < p+2 cannot be enlarged.

use crate::ball::CPoint;
use crate::error::{Error, Result};
use crate::holo::{DerivativeBundle, HoloFunction};
use crate::quad::{
    classify_growth, integrate_ball_multi, integrate_graded, GrowthClass, IntegralEstimate,
    QuadratureSpec, Region, WeightedMeasure,
};
use crate::special::real_pow;

/// Exponents and weight for one functional evaluation.
#[derive(Debug, Clone, Copy)]
pub struct WeightParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
}

impl WeightParams {
    pub fn new(n: usize, p: f64, q: f64, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if !(p > 0.0) || !(q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "exponents must be positive, got p={p}, q={q}"
            )));
        }
        if !(alpha > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "weight exponent must exceed -1, got alpha={alpha}"
            )));
        }
        Ok(Self { n, p, q, alpha })
    }

    /// Whether (p, q) lies in the range where the four quantities are
    /// comparable; q ≥ p+2 is allowed but every report carries this flag.
    pub fn in_range(&self) -> bool {
        self.q < self.p + 2.0
    }

    pub fn measure(&self) -> Result<WeightedMeasure> {
        WeightedMeasure::new(self.n, self.alpha)
    }
}

/// |f|^{p−q}·m^q with m one of the three derivative magnitudes. Zeros of f
/// take their limit value when p ≥ q; for p < q they come out infinite and
/// fall to the quadrature module's singular-point policy.
fn weighted_term(f_mod: f64, m: f64, p: f64, q: f64) -> f64 {
    real_pow(f_mod, p - q) * real_pow(m, q)
}

/// All four functionals over one shared sample set.
pub fn all_functionals(
    f: &HoloFunction,
    params: &WeightParams,
    spec: &QuadratureSpec,
) -> Result<[IntegralEstimate; 4]> {
    if f.dim() != params.n {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: params.n,
        });
    }
    let measure = params.measure()?;
    let (p, q) = (params.p, params.q);
    let out = integrate_ball_multi(
        |z, buf| match DerivativeBundle::compute(f, z) {
            Ok(b) => {
                let fm = b.value.norm();
                let one_minus = 1.0 - z.norm_sq();
                buf[0] = real_pow(fm, p);
                buf[1] = weighted_term(fm, one_minus * b.radial.norm(), p, q);
                buf[2] = weighted_term(fm, one_minus * b.grad_norm, p, q);
                buf[3] = weighted_term(fm, b.inv_grad_norm, p, q);
            }
            Err(_) => buf.fill(f64::NAN),
        },
        4,
        &measure,
        spec,
    )?;
    Ok([out[0], out[1], out[2], out[3]])
}

pub fn i1(
    f: &HoloFunction,
    params: &WeightParams,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    Ok(all_functionals(f, params, spec)?[0])
}

pub fn i2(
    f: &HoloFunction,
    params: &WeightParams,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    Ok(all_functionals(f, params, spec)?[1])
}

pub fn i3(
    f: &HoloFunction,
    params: &WeightParams,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    Ok(all_functionals(f, params, spec)?[2])
}

pub fn i4(
    f: &HoloFunction,
    params: &WeightParams,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    Ok(all_functionals(f, params, spec)?[3])
}

/// The three ∫|f_i|^p dv_α with f₁=(1−|z|²)|Rf|, f₂=(1−|z|²)|∇f|, f₃=|∇̃f|;
/// identical (bit for bit) to I₂, I₃, I₄ at q = p because it runs the same
/// code path.
pub fn theorem1_quantities(
    f: &HoloFunction,
    params: &WeightParams,
    spec: &QuadratureSpec,
) -> Result<[IntegralEstimate; 3]> {
    let at_qp = WeightParams {
        q: params.p,
        ..*params
    };
    let [_, a, b, c] = all_functionals(f, &at_qp, spec)?;
    Ok([a, b, c])
}

/// One function's worth of comparability data.
#[derive(Debug, Clone)]
pub struct FunctionalRow {
    pub label: String,
    pub estimates: [IntegralEstimate; 4],
    pub f0_pow_p: f64,
}

impl FunctionalRow {
    /// (|f(0)|^p + I_k)/I₁ for k = 2, 3, 4; None when I₁ = 0.
    pub fn ratios(&self) -> Option<[f64; 3]> {
        let i1 = self.estimates[0].value;
        if i1 <= 0.0 {
            return None;
        }
        Some([
            (self.f0_pow_p + self.estimates[1].value) / i1,
            (self.f0_pow_p + self.estimates[2].value) / i1,
            (self.f0_pow_p + self.estimates[3].value) / i1,
        ])
    }
}

/// Comparability data over a family of functions.
#[derive(Debug, Clone)]
pub struct ComparabilityReport {
    pub params: WeightParams,
    pub in_range: bool,
    pub rows: Vec<FunctionalRow>,
    /// min/max of (|f(0)|^p + I_k)/I₁ for k = 2, 3, 4, over rows with I₁ > 0.
    pub ratio_min: [f64; 3],
    pub ratio_max: [f64; 3],
}

pub fn comparability_report(
    family: &[(String, HoloFunction)],
    params: &WeightParams,
    spec: &QuadratureSpec,
) -> Result<ComparabilityReport> {
    let mut rows = Vec::with_capacity(family.len());
    let mut ratio_min = [f64::INFINITY; 3];
    let mut ratio_max = [f64::NEG_INFINITY; 3];
    for (label, f) in family {
        let estimates = all_functionals(f, params, spec)?;
        let f0 = f.eval(&CPoint::origin(params.n))?.norm();
        let row = FunctionalRow {
            label: label.clone(),
            estimates,
            f0_pow_p: real_pow(f0, params.p),
        };
        if let Some(r) = row.ratios() {
            for k in 0..3 {
                ratio_min[k] = ratio_min[k].min(r[k]);
                ratio_max[k] = ratio_max[k].max(r[k]);
            }
        }
        rows.push(row);
    }
    Ok(ComparabilityReport {
        params: *params,
        in_range: params.in_range(),
        rows,
        ratio_min,
        ratio_max,
    })
}

/// ∫|f| dv_β ≤ C (∫|f|^p dv_α)^{1/p} with β = (n+1+α)/p − (n+1), for
/// 0 < p ≤ 1. Returns LHS/RHS.
pub fn embedding_check(
    f: &HoloFunction,
    p: f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "embedding check needs 0 < p <= 1, got p={p}"
        )));
    }
    let n = f.dim();
    let beta = (n as f64 + 1.0 + alpha) / p - (n as f64 + 1.0);
    let lhs = {
        let m = WeightedMeasure::new(n, beta)?;
        crate::quad::integrate_ball(|z| f.eval(z).map(|v| v.norm()).unwrap_or(f64::NAN), &m, spec)?
    };
    let rhs = {
        let m = WeightedMeasure::new(n, alpha)?;
        crate::quad::integrate_ball(
            |z| real_pow(f.eval(z).map(|v| v.norm()).unwrap_or(f64::NAN), p),
            &m,
            spec,
        )?
    };
    Ok(lhs.value / real_pow(rhs.value, 1.0 / p))
}

/// The two directions of the unweighted norm comparison
/// ∫|f|^p dv ≍ |f(0)|^p + ∫|f|^{p−2}|∇̃f|² dv.
/// Returns (LHS/RHS, RHS/LHS) with RHS the bracketed quantity.
pub fn lemma9_check(f: &HoloFunction, p: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let n = f.dim();
    let measure = WeightedMeasure::new(n, 0.0)?;
    let out = integrate_ball_multi(
        |z, buf| match DerivativeBundle::compute(f, z) {
            Ok(b) => {
                let fm = b.value.norm();
                buf[0] = real_pow(fm, p);
                buf[1] = real_pow(fm, p - 2.0) * b.inv_grad_norm * b.inv_grad_norm;
            }
            Err(_) => buf.fill(f64::NAN),
        },
        2,
        &measure,
        spec,
    )?;
    let f0 = f.eval(&CPoint::origin(n))?.norm();
    let lhs = out[0].value;
    let rhs = real_pow(f0, p) + out[1].value;
    Ok((lhs / rhs, rhs / lhs))
}

/// Result of the local inequality probe
/// ∫_{|z|<1/4} |f|^{p−q}|∇̃f|^q dv_α ≤ C ∫_{|z|<3/4} |f|^p dv_α.
#[derive(Debug, Clone)]
pub struct Lemma10Check {
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    pub numerator_class: GrowthClass,
    pub profile: Vec<(f64, f64)>,
}

/// Runs the local inequality with a truncation ladder |f| ≥ ε on the
/// numerator, so a genuinely divergent numerator (q ≥ p+2 with f vanishing
/// inside the small ball) is flagged instead of reported as a large number.
pub fn lemma10_local_check(
    f: &HoloFunction,
    p: f64,
    q: f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<Lemma10Check> {
    let n = f.dim();
    let measure = WeightedMeasure::new(n, alpha)?;
    // Shallow dyadic ladder: Monte Carlo populates the shell ε ≤ |f| < 2ε
    // with ~N·ε² points, so cutoffs much below 2⁻⁶ are pure noise.
    let cutoffs: Vec<f64> = (1..=6).map(|k| 2f64.powi(-k)).collect();
    let k = cutoffs.len();

    let inner_spec = spec
        .with_region(Region::EuclideanBall(0.25))
        .force_monte_carlo();
    let truncated = integrate_ball_multi(
        |z, buf| match DerivativeBundle::compute(f, z) {
            Ok(b) => {
                let fm = b.value.norm();
                for (j, &eps) in cutoffs.iter().enumerate() {
                    buf[j] = if fm >= eps {
                        weighted_term(fm, b.inv_grad_norm, p, q)
                    } else {
                        0.0
                    };
                }
            }
            Err(_) => buf.fill(f64::NAN),
        },
        k,
        &measure,
        &inner_spec,
    )?;
    let profile: Vec<(f64, f64)> = cutoffs
        .iter()
        .zip(&truncated)
        .map(|(&e, est)| (e, est.value))
        .collect();
    let numerator_class = classify_growth(&profile);
    let numerator = profile.last().unwrap().1;

    let outer_spec = spec.with_region(Region::EuclideanBall(0.75));
    let denominator = crate::quad::integrate_ball(
        |z| real_pow(f.eval(z).map(|v| v.norm()).unwrap_or(f64::NAN), p),
        &measure,
        &outer_spec,
    )?
    .value;

    Ok(Lemma10Check {
        numerator,
        denominator,
        ratio: numerator / denominator,
        numerator_class,
        profile,
    })
}

/// Truncation profile of the extremal example f(z) = z₁.
#[derive(Debug, Clone)]
pub struct SharpnessProfile {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub n: usize,
    /// (ε, truncated integral) with the region shrunk away from {z₁ = 0}.
    pub entries: Vec<(f64, f64)>,
    pub class: GrowthClass,
}

/// For f(z) = z₁ the integrand of I₄ factors through polar coordinates: a
/// radial piece r^{2n−1+p−q} near 0 and a sphere-slice piece |ζ₁|^{p−q}.
/// Both factors are truncated at ε and the product profiled; q < p+2 gives a
/// convergent profile, q = p+2 a logarithmic one, q > p+2 a power of 1/ε.
pub fn sharpness_profile(
    p: f64,
    alpha: f64,
    n: usize,
    q: f64,
    cutoffs: &[f64],
) -> Result<SharpnessProfile> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    if !(alpha > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "weight exponent must exceed -1, got alpha={alpha}"
        )));
    }
    if cutoffs.len() < 5 {
        return Err(Error::InvalidParameter(
            "need at least 5 cutoffs to classify growth".into(),
        ));
    }
    let radial_exp = 2.0 * n as f64 - 1.0 + p - q;
    let radial = |eps: f64| {
        integrate_graded(|r| real_pow(r, radial_exp), eps, 0.5, true, false, 16)
    };
    // ∫_{|ζ₁|≥ε} |ζ₁|^{p−q} dσ reduced to a disk integral; constant factors
    // are irrelevant to the growth class, so the n−1 = 0 case is just 1.
    let slice = |eps: f64| {
        if n == 1 {
            1.0
        } else {
            integrate_graded(
                |rho| real_pow(rho, p - q + 1.0) * real_pow(1.0 - rho * rho, n as f64 - 2.0),
                eps,
                1.0,
                true,
                false,
                16,
            )
        }
    };
    let mut entries: Vec<(f64, f64)> = cutoffs.iter().map(|&e| (e, radial(e) * slice(e))).collect();
    entries.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let class = classify_growth(&entries);
    Ok(SharpnessProfile {
        p,
        q,
        alpha,
        n,
        entries,
        class,
    })
}
