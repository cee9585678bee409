//! Weighted measures dv_α on the unit ball of ℂⁿ and the integration engines:
//! a polar product rule (Gauss–Jacobi radial × deterministic sphere rule),
//! plain Monte Carlo and radius-stratified Monte Carlo.

pub mod divergence;
pub mod jacobi;
pub mod sphere;

pub use divergence::{classify_growth, default_cutoffs, fit_log_slope, GrowthClass};
pub use sphere::SphereRule;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::ContinuousCDF;

use crate::ball::{in_pseudo_ball, CPoint};
use crate::error::{Error, Result};
use crate::special::{log_gamma, log_multi_factorial};

/// Fixed-order pairwise summation; deterministic and more accurate than a
/// running sum.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

/// c_α = Γ(n+1+α) / (n! Γ(α+1)), the constant making dv_α a probability
/// measure.
pub fn normalizing_constant(n: usize, alpha: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "weight exponent must exceed -1, got alpha={alpha}"
        )));
    }
    Ok((log_gamma(n as f64 + 1.0 + alpha)
        - log_gamma(n as f64 + 1.0)
        - log_gamma(alpha + 1.0))
    .exp())
}

/// The probability measure dv_α = c_α (1−|z|²)^α dv on the unit ball of ℂⁿ.
#[derive(Debug, Clone)]
pub struct WeightedMeasure {
    pub n: usize,
    pub alpha: f64,
    pub c_alpha: f64,
}

impl WeightedMeasure {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        Ok(Self {
            n,
            alpha,
            c_alpha: normalizing_constant(n, alpha)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ProductRule,
    MonteCarlo,
    StratifiedMc,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ProductRule => "product-rule",
            Method::MonteCarlo => "monte-carlo",
            Method::StratifiedMc => "stratified-mc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "product-rule" => Ok(Method::ProductRule),
            "monte-carlo" => Ok(Method::MonteCarlo),
            "stratified-mc" => Ok(Method::StratifiedMc),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

/// Integration region inside the unit ball.
#[derive(Debug, Clone)]
pub enum Region {
    FullBall,
    /// |z| < r
    EuclideanBall(f64),
    /// |φ_center(z)| < rho; Monte Carlo only.
    PseudoBall { center: CPoint, rho: f64 },
    /// inner < |z| < outer
    Annulus { inner: f64, outer: f64 },
}

impl Region {
    fn validate(&self) -> Result<()> {
        match self {
            Region::FullBall => Ok(()),
            Region::EuclideanBall(r) => {
                if *r > 0.0 && *r <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "euclidean-ball radius must lie in (0,1], got {r}"
                    )))
                }
            }
            Region::PseudoBall { center, rho } => {
                if !center.is_interior() {
                    return Err(Error::OutsideBall {
                        norm: center.norm(),
                    });
                }
                if *rho > 0.0 && *rho < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "pseudo-ball radius must lie in (0,1), got {rho}"
                    )))
                }
            }
            Region::Annulus { inner, outer } => {
                if *inner >= 0.0 && inner < outer && *outer <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "annulus needs 0 <= inner < outer <= 1, got ({inner}, {outer})"
                    )))
                }
            }
        }
    }

    fn contains(&self, z: &CPoint) -> bool {
        match self {
            Region::FullBall => true,
            Region::EuclideanBall(r) => z.norm_sq() < r * r,
            Region::PseudoBall { center, rho } => {
                in_pseudo_ball(center, *rho, z).unwrap_or(false)
            }
            Region::Annulus { inner, outer } => {
                let n2 = z.norm_sq();
                n2 > inner * inner && n2 < outer * outer
            }
        }
    }

    /// Radial interval in the variable u = r², when the region is radial.
    fn radial_interval(&self) -> Option<(f64, f64)> {
        match self {
            Region::FullBall => Some((0.0, 1.0)),
            Region::EuclideanBall(r) => Some((0.0, r * r)),
            Region::Annulus { inner, outer } => Some((inner * inner, outer * outer)),
            Region::PseudoBall { .. } => None,
        }
    }
}

/// Everything the integrators need besides measure and integrand.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub method: Method,
    pub radial_order: usize,
    pub sphere_samples: usize,
    pub mc_samples: usize,
    pub seed: u64,
    pub region: Region,
}

impl QuadratureSpec {
    pub fn product(radial_order: usize, sphere_samples: usize) -> Self {
        Self {
            method: Method::ProductRule,
            radial_order,
            sphere_samples,
            mc_samples: 100_000,
            seed: 0,
            region: Region::FullBall,
        }
    }

    pub fn monte_carlo(mc_samples: usize, seed: u64) -> Self {
        Self {
            method: Method::MonteCarlo,
            radial_order: 32,
            sphere_samples: 32,
            mc_samples,
            seed,
            region: Region::FullBall,
        }
    }

    pub fn stratified(mc_samples: usize, seed: u64) -> Self {
        Self {
            method: Method::StratifiedMc,
            ..Self::monte_carlo(mc_samples, seed)
        }
    }

    pub fn with_region(&self, region: Region) -> Self {
        Self {
            region,
            ..self.clone()
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn force_monte_carlo(&self) -> Self {
        let method = match self.method {
            Method::ProductRule => Method::MonteCarlo,
            m => m,
        };
        Self {
            method,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.radial_order < 2 || self.sphere_samples == 0 || self.mc_samples == 0 {
            return Err(Error::InvalidParameter(
                "sample counts and rule orders must be positive".into(),
            ));
        }
        self.region.validate()
    }

    fn simplex_order(&self) -> usize {
        (self.sphere_samples / 2).max(2)
    }
}

/// Result of a single integral evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    /// 0 for deterministic rules.
    pub stderr: f64,
    pub samples_used: u64,
    /// When set, `value` is a lower bound from a truncated region.
    pub diverged: bool,
    /// Sample points rejected by the singular-point policy.
    pub singular_rejects: u64,
}

impl IntegralEstimate {
    pub fn exact(value: f64, samples_used: u64) -> Self {
        Self {
            value,
            stderr: 0.0,
            samples_used,
            diverged: false,
            singular_rejects: 0,
        }
    }
}

const JITTER: f64 = 1e-12;
const MAX_REJECTS: u64 = 10_000;

/// Integrates a vector-valued integrand; all components share the same sample
/// points. This is what guarantees same-sample comparability of the
/// functionals built on top.
pub fn integrate_ball_multi<F>(
    mut g: F,
    k: usize,
    measure: &WeightedMeasure,
    spec: &QuadratureSpec,
) -> Result<Vec<IntegralEstimate>>
where
    F: FnMut(&CPoint, &mut [f64]),
{
    spec.validate()?;
    match spec.method {
        Method::ProductRule => product_rule_multi(&mut g, k, measure, spec),
        Method::MonteCarlo => monte_carlo_multi(&mut g, k, measure, spec, false),
        Method::StratifiedMc => monte_carlo_multi(&mut g, k, measure, spec, true),
    }
}

/// ∫ g dv_α over the region in `spec`.
pub fn integrate_ball<F>(
    mut g: F,
    measure: &WeightedMeasure,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate>
where
    F: FnMut(&CPoint) -> f64,
{
    let mut out = integrate_ball_multi(|z, buf| buf[0] = g(z), 1, measure, spec)?;
    Ok(out.pop().unwrap())
}

/// Complex-valued integral, integrating real and imaginary parts jointly.
pub fn integrate_ball_complex<F>(
    mut g: F,
    measure: &WeightedMeasure,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)>
where
    F: FnMut(&CPoint) -> Complex64,
{
    let parts = integrate_ball_multi(
        |z, buf| {
            let v = g(z);
            buf[0] = v.re;
            buf[1] = v.im;
        },
        2,
        measure,
        spec,
    )?;
    let value = Complex64::new(parts[0].value, parts[1].value);
    let stderr = parts[0].stderr.hypot(parts[1].stderr);
    Ok((value, stderr))
}

/// Evaluates with the singular-point policy: one jitter retry, then `None`.
fn eval_with_jitter<F>(g: &mut F, z: &CPoint, buf: &mut [f64]) -> bool
where
    F: FnMut(&CPoint, &mut [f64]),
{
    g(z, buf);
    if buf.iter().all(|v| v.is_finite()) {
        return true;
    }
    let zj = z.jitter(JITTER);
    if zj.is_interior() {
        g(&zj, buf);
        if buf.iter().all(|v| v.is_finite()) {
            return true;
        }
    }
    false
}

fn product_rule_multi<F>(
    g: &mut F,
    k: usize,
    measure: &WeightedMeasure,
    spec: &QuadratureSpec,
) -> Result<Vec<IntegralEstimate>>
where
    F: FnMut(&CPoint, &mut [f64]),
{
    let n = measure.n;
    let (u_lo, u_hi) = spec.region.radial_interval().ok_or_else(|| {
        Error::InvalidParameter("product rule does not support pseudo-ball regions".into())
    })?;

    // Radial rule in u = r²: the full-ball case absorbs u^{n-1}(1-u)^α into
    // Gauss–Jacobi weights, sub-intervals fold the weight explicitly.
    let radial = if matches!(spec.region, Region::FullBall) {
        let mut rule = jacobi::gauss_jacobi_01(spec.radial_order, measure.alpha, n as f64 - 1.0)?;
        let factor = measure.c_alpha * n as f64;
        for w in &mut rule.weights {
            *w *= factor;
        }
        rule
    } else {
        let mut rule = jacobi::gauss_legendre(spec.radial_order, u_lo, u_hi)?;
        let factor = measure.c_alpha * n as f64;
        for (u, w) in rule.nodes.iter().zip(rule.weights.iter_mut()) {
            *w *= factor * u.powi(n as i32 - 1) * (1.0 - u).powf(measure.alpha);
        }
        rule
    };

    let sphere = SphereRule::new(n, spec.simplex_order(), spec.sphere_samples)?;
    let mut buf = vec![0.0f64; k];
    let mut rejects = 0u64;
    let mut shell_totals: Vec<Vec<f64>> = vec![Vec::with_capacity(radial.nodes.len()); k];
    let mut shell_vals: Vec<Vec<f64>> = vec![vec![0.0; sphere.len()]; k];

    for (&u, &wu) in radial.nodes.iter().zip(&radial.weights) {
        let r = u.sqrt();
        for (j, (zeta, &ws)) in sphere.points.iter().zip(&sphere.weights).enumerate() {
            let z = CPoint::new(zeta.coords().iter().map(|c| c * r).collect());
            if eval_with_jitter(g, &z, &mut buf) {
                for c in 0..k {
                    shell_vals[c][j] = ws * buf[c];
                }
            } else {
                rejects += 1;
                for c in 0..k {
                    shell_vals[c][j] = 0.0;
                }
            }
        }
        for c in 0..k {
            let s = pairwise_sum(&shell_vals[c]);
            shell_totals[c].push(wu * s);
        }
    }

    let samples = (radial.nodes.len() * sphere.len()) as u64;
    Ok((0..k)
        .map(|c| IntegralEstimate {
            value: pairwise_sum(&shell_totals[c]),
            stderr: 0.0,
            samples_used: samples,
            diverged: false,
            singular_rejects: rejects,
        })
        .collect())
}

/// Inverse CDF of u = r² under dv_α, i.e. Beta(n, α+1).
struct RadialSampler {
    beta: statrs::distribution::Beta,
}

impl RadialSampler {
    fn new(n: usize, alpha: f64) -> Result<Self> {
        let beta = statrs::distribution::Beta::new(n as f64, alpha + 1.0)
            .map_err(|e| Error::InvalidParameter(format!("radial sampler: {e}")))?;
        Ok(Self { beta })
    }

    fn quantile(&self, p: f64) -> f64 {
        self.beta.inverse_cdf(p.clamp(1e-300, 1.0 - 1e-16))
    }
}

fn monte_carlo_multi<F>(
    g: &mut F,
    k: usize,
    measure: &WeightedMeasure,
    spec: &QuadratureSpec,
    stratified: bool,
) -> Result<Vec<IntegralEstimate>>
where
    F: FnMut(&CPoint, &mut [f64]),
{
    let n = measure.n;
    let sampler = RadialSampler::new(n, measure.alpha)?;
    let mut rejects = 0u64;
    let mut buf = vec![0.0f64; k];

    let strata = if stratified {
        32.min(spec.mc_samples.max(2) / 2)
    } else {
        1
    };
    let per_stratum = (spec.mc_samples / strata).max(2);
    let total = strata * per_stratum;

    // Per-component, per-stratum sample values; fixed-shape so the reduction
    // order never depends on scheduling.
    let mut values: Vec<Vec<Vec<f64>>> = vec![vec![Vec::with_capacity(per_stratum); strata]; k];

    for s in 0..strata {
        // deterministic split of the stream per stratum
        let mut rng =
            ChaCha8Rng::seed_from_u64(spec.seed ^ (s as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut pending: Option<(f64, CPoint)> = None;
        for _ in 0..per_stratum {
            let mut attempts = 0u64;
            let sample = loop {
                // antithetic pairs share the radius and flip the direction
                let (r, dir) = match pending.take() {
                    Some((r, d)) => (r, sphere::antithetic(&d)),
                    None => {
                        let p = if stratified {
                            (s as f64 + rng.random::<f64>()) / strata as f64
                        } else {
                            rng.random::<f64>()
                        };
                        let u = sampler.quantile(p);
                        let d = sphere::sample_sphere(&mut rng, n);
                        let r = u.sqrt().min(1.0 - 1e-16);
                        pending = Some((r, d.clone()));
                        (r, d)
                    }
                };
                let z = CPoint::new(dir.coords().iter().map(|c| c * r).collect());
                if !spec.region.contains(&z) {
                    buf.iter_mut().for_each(|v| *v = 0.0);
                    break &buf;
                }
                if eval_with_jitter(g, &z, &mut buf) {
                    break &buf;
                }
                rejects += 1;
                attempts += 1;
                pending = None; // resample fresh after a rejected point
                if rejects > MAX_REJECTS || attempts > 100 {
                    return Err(Error::Numeric(format!(
                        "too many non-finite integrand values ({rejects} rejected samples)"
                    )));
                }
            };
            for c in 0..k {
                values[c][s].push(sample[c]);
            }
        }
    }

    let mut out = Vec::with_capacity(k);
    for comp in &values {
        let mut value = 0.0;
        let mut var = 0.0;
        for stratum in comp {
            let nk = stratum.len() as f64;
            let mean = pairwise_sum(stratum) / nk;
            let devs: Vec<f64> = stratum.iter().map(|v| (v - mean) * (v - mean)).collect();
            let s2 = pairwise_sum(&devs) / (nk - 1.0);
            value += mean / strata as f64;
            var += s2 / (nk * (strata * strata) as f64);
        }
        out.push(IntegralEstimate {
            value,
            stderr: var.sqrt(),
            samples_used: total as u64,
            diverged: false,
            singular_rejects: rejects,
        });
    }
    Ok(out)
}

/// ∫_{S_n} |ζ^m|² dσ = (n−1)! m! / (n−1+|m|)!  (equals 1 for every m when n=1).
pub fn sphere_monomial_integral(m: &[u32], n: usize) -> f64 {
    assert_eq!(m.len(), n);
    let total: u32 = m.iter().sum();
    (log_gamma(n as f64) + log_multi_factorial(m) - log_gamma((n + total as usize) as f64)).exp()
}

/// ∫_{𝔹ₙ} |z^m|² dv_α = m! Γ(n+1+α) / Γ(n+1+|m|+α).
pub fn ball_monomial_norm(m: &[u32], n: usize, alpha: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "weight exponent must exceed -1, got alpha={alpha}"
        )));
    }
    assert_eq!(m.len(), n);
    let total: u32 = m.iter().sum();
    Ok((log_multi_factorial(m) + log_gamma(n as f64 + 1.0 + alpha)
        - log_gamma(n as f64 + 1.0 + f64::from(total) + alpha))
    .exp())
}

/// Computes the same integral twice: direct Monte Carlo and via the polar
/// product rule. The two must agree within combined error bars.
pub fn polar_decompose_check<F>(
    mut g: F,
    measure: &WeightedMeasure,
    spec: &QuadratureSpec,
) -> Result<(IntegralEstimate, IntegralEstimate)>
where
    F: FnMut(&CPoint) -> f64 + Clone,
{
    let mc = integrate_ball(&mut g, measure, &spec.force_monte_carlo())?;
    let mut product_spec = spec.clone();
    product_spec.method = Method::ProductRule;
    let polar = integrate_ball(&mut g, measure, &product_spec)?;
    Ok((mc, polar))
}

/// Composite Gauss–Legendre over geometric panels; `grade_lo`/`grade_hi`
/// cluster panels toward the endpoints for integrands steep there.
pub fn integrate_graded(
    h: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grade_lo: bool,
    grade_hi: bool,
    deg: usize,
) -> f64 {
    assert!(lo < hi);
    let span = hi - lo;
    let mut cuts = vec![lo, hi];
    if grade_lo && lo > 0.0 {
        let mut x = lo * 2.0;
        while x < hi / 2.0 {
            cuts.push(x);
            x *= 2.0;
        }
    }
    if grade_hi {
        let mut gap = span / 4.0;
        while gap > span * 2f64.powi(-14) {
            cuts.push(hi - gap);
            gap /= 2.0;
        }
    }
    if !grade_lo && !grade_hi {
        for i in 1..4 {
            cuts.push(lo + span * i as f64 / 4.0);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let mut panel_sums = Vec::new();
    for w in cuts.windows(2) {
        let rule = jacobi::gauss_legendre(deg, w[0], w[1]).expect("valid GL panel");
        let vals: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &wt)| wt * h(x))
            .collect();
        panel_sums.push(pairwise_sum(&vals));
    }
    pairwise_sum(&panel_sums)
}

/// Both sides of the sphere-slice reduction for ∫_{S_n} |ζ₁|^c dσ, n ≥ 2.
#[derive(Debug, Clone)]
pub struct SliceCheck {
    pub sphere: IntegralEstimate,
    pub disk: IntegralEstimate,
    pub sphere_class: GrowthClass,
    pub disk_class: GrowthClass,
    pub sphere_profile: Vec<(f64, f64)>,
    pub disk_profile: Vec<(f64, f64)>,
}

/// Checks ∫_{S_n}|ζ₁|^c dσ = κ ∫_𝔻 |w|^c (1−|w|²)^{n−2} dA with κ calibrated
/// at c = 0. For c ≤ −2 both sides are flagged divergent via truncation
/// profiles instead of returning a number on faith.
pub fn slice_reduction_check(c: f64, n: usize, spec: &QuadratureSpec) -> Result<SliceCheck> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "slice reduction needs dimension n >= 2".into(),
        ));
    }

    // Sphere side: Monte Carlo with a truncation ladder on |ζ₁|.
    let cutoffs_mc: Vec<f64> = (1..=7).map(|k| 2f64.powi(-k)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let nsamp = spec.mc_samples.max(1000);
    let mut samples: Vec<f64> = Vec::with_capacity(nsamp);
    let mut moduli: Vec<f64> = Vec::with_capacity(nsamp);
    for _ in 0..nsamp {
        let zeta = sphere::sample_sphere(&mut rng, n);
        moduli.push(zeta.coord(0).norm());
    }
    let mut sphere_profile = Vec::new();
    for &eps in &cutoffs_mc {
        let vals: Vec<f64> = moduli
            .iter()
            .map(|&m| if m >= eps { m.powf(c) } else { 0.0 })
            .collect();
        sphere_profile.push((eps, pairwise_sum(&vals) / nsamp as f64));
        if eps == *cutoffs_mc.last().unwrap() {
            samples = vals;
        }
    }
    let sphere_class = classify_growth(&sphere_profile);
    let mean = pairwise_sum(&samples) / nsamp as f64;
    let devs: Vec<f64> = samples.iter().map(|v| (v - mean) * (v - mean)).collect();
    let stderr = (pairwise_sum(&devs) / ((nsamp - 1) * nsamp) as f64).sqrt();
    let sphere_est = IntegralEstimate {
        value: mean,
        stderr,
        samples_used: nsamp as u64,
        diverged: sphere_class.is_divergent(),
        singular_rejects: 0,
    };

    // Disk side: raw(c) = 2π ∫_ε^1 r^{c+1} (1−r²)^{n−2} dr, κ = 1/raw(0).
    let raw = |cc: f64, eps: f64| {
        std::f64::consts::TAU
            * integrate_graded(
                |r| r.powf(cc + 1.0) * (1.0 - r * r).powi(n as i32 - 2),
                eps,
                1.0,
                true,
                false,
                16,
            )
    };
    let kappa = 1.0 / raw(0.0, 0.0);
    let disk_profile: Vec<(f64, f64)> = default_cutoffs()
        .into_iter()
        .map(|eps| (eps, kappa * raw(c, eps)))
        .collect();
    let disk_class = classify_growth(&disk_profile);
    let disk_est = IntegralEstimate {
        value: disk_profile.last().unwrap().1,
        stderr: 0.0,
        samples_used: 0,
        diverged: disk_class.is_divergent(),
        singular_rejects: 0,
    };

    Ok(SliceCheck {
        sphere: sphere_est,
        disk: disk_est,
        sphere_class,
        disk_class,
        sphere_profile,
        disk_profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn measure(n: usize, alpha: f64) -> WeightedMeasure {
        WeightedMeasure::new(n, alpha).unwrap()
    }

    #[test]
    fn normalizing_constant_examples() {
        for n in 1..=4 {
            assert_abs_diff_eq!(normalizing_constant(n, 0.0).unwrap(), 1.0, epsilon = 1e-13);
        }
        // n=1, α=1 → Γ(3)/(1!·Γ(2)) = 2
        assert_abs_diff_eq!(normalizing_constant(1, 1.0).unwrap(), 2.0, epsilon = 1e-13);
        // n=2, α=1 → Γ(4)/(2!·Γ(2)) = 3
        assert_abs_diff_eq!(normalizing_constant(2, 1.0).unwrap(), 3.0, epsilon = 1e-13);
        assert!(normalizing_constant(1, -1.0).is_err());
    }

    #[test]
    fn product_rule_normalization() {
        for n in 1..=3usize {
            for &alpha in &[-0.5, 0.0, 1.0, 2.5] {
                let spec = QuadratureSpec::product(24, 8);
                let est = integrate_ball(|_| 1.0, &measure(n, alpha), &spec).unwrap();
                assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-10);
                assert_eq!(est.stderr, 0.0);
            }
        }
    }

    #[test]
    fn product_rule_monomial_examples() {
        // ∫|z₁|² dv over the disk = 1/2
        let spec = QuadratureSpec::product(24, 16);
        let est = integrate_ball(
            |z| z.coord(0).norm_sqr(),
            &measure(1, 0.0),
            &spec,
        )
        .unwrap();
        assert_abs_diff_eq!(est.value, 0.5, epsilon = 1e-12);

        // ∫|z₁|² dv over 𝔹₂ = 1/3
        let est = integrate_ball(
            |z| z.coord(0).norm_sqr(),
            &measure(2, 0.0),
            &spec,
        )
        .unwrap();
        assert_abs_diff_eq!(est.value, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn monomial_formula_examples() {
        assert_abs_diff_eq!(sphere_monomial_integral(&[0, 0], 2), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sphere_monomial_integral(&[1, 0], 2), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(
            sphere_monomial_integral(&[1, 1, 0], 3),
            1.0 / 12.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(ball_monomial_norm(&[0], 1, 0.7).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ball_monomial_norm(&[1], 1, 0.0).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(
            ball_monomial_norm(&[1, 0], 2, 1.0).unwrap(),
            0.25,
            epsilon = 1e-14
        );
    }

    #[test]
    fn monte_carlo_matches_exact_monomial() {
        let spec = QuadratureSpec::monte_carlo(200_000, 42);
        let est = integrate_ball(
            |z| z.coord(0).norm_sqr(),
            &measure(2, 1.0),
            &spec,
        )
        .unwrap();
        let exact = ball_monomial_norm(&[1, 0], 2, 1.0).unwrap();
        assert!(
            (est.value - exact).abs() < 4.0 * est.stderr,
            "mc {} vs exact {} (stderr {})",
            est.value,
            exact,
            est.stderr
        );
    }

    #[test]
    fn stratified_beats_or_matches_plain_mc() {
        let plain = integrate_ball(
            |z| z.norm_sq(),
            &measure(1, 0.0),
            &QuadratureSpec::monte_carlo(100_000, 7),
        )
        .unwrap();
        let strat = integrate_ball(
            |z| z.norm_sq(),
            &measure(1, 0.0),
            &QuadratureSpec::stratified(100_000, 7),
        )
        .unwrap();
        assert_abs_diff_eq!(plain.value, 0.5, epsilon = 5.0 * plain.stderr.max(1e-4));
        assert_abs_diff_eq!(strat.value, 0.5, epsilon = 5.0 * strat.stderr.max(1e-4));
        assert!(strat.stderr < plain.stderr * 1.2);
    }

    #[test]
    fn determinism_bit_identical() {
        for spec in [
            QuadratureSpec::monte_carlo(20_000, 99),
            QuadratureSpec::stratified(20_000, 99),
            QuadratureSpec::product(16, 8),
        ] {
            let a = integrate_ball(|z| (1.0 - z.norm_sq()).recip(), &measure(2, 0.5), &spec)
                .unwrap();
            let b = integrate_ball(|z| (1.0 - z.norm_sq()).recip(), &measure(2, 0.5), &spec)
                .unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn region_monotonicity() {
        let spec = QuadratureSpec::product(24, 8);
        let mut last = 0.0;
        for &r in &[0.3, 0.5, 0.7, 0.9, 1.0] {
            let est = integrate_ball(
                |z| 1.0 + z.norm_sq(),
                &measure(1, 0.0),
                &spec.with_region(Region::EuclideanBall(r)),
            )
            .unwrap();
            assert!(est.value >= last - 1e-12);
            last = est.value;
        }
    }

    #[test]
    fn annulus_region_is_consistent() {
        let spec = QuadratureSpec::product(24, 8);
        let inner = integrate_ball(
            |_| 1.0,
            &measure(1, 0.0),
            &spec.with_region(Region::EuclideanBall(0.5)),
        )
        .unwrap();
        let ring = integrate_ball(
            |_| 1.0,
            &measure(1, 0.0),
            &spec.with_region(Region::Annulus {
                inner: 0.5,
                outer: 1.0,
            }),
        )
        .unwrap();
        assert_abs_diff_eq!(inner.value + ring.value, 1.0, epsilon = 1e-9);
        // v(|z|<0.5) = 0.25 in the normalized disk
        assert_abs_diff_eq!(inner.value, 0.25, epsilon = 1e-10);
    }

    #[test]
    fn polar_decomposition_agrees() {
        // radial integrand, n=1: both paths give 1/2
        let spec = QuadratureSpec::monte_carlo(100_000, 3);
        let (mc, polar) =
            polar_decompose_check(|z| z.norm_sq(), &measure(1, 0.0), &spec).unwrap();
        assert_abs_diff_eq!(polar.value, 0.5, epsilon = 1e-10);
        assert!((mc.value - polar.value).abs() < 4.0 * mc.stderr);

        // singular on a hyperplane but integrable for n=2
        let (mc, polar) = polar_decompose_check(
            |z| z.coord(0).norm().recip(),
            &measure(2, 0.0),
            &QuadratureSpec {
                sphere_samples: 48,
                radial_order: 32,
                ..QuadratureSpec::monte_carlo(200_000, 5)
            },
        )
        .unwrap();
        assert!(mc.value.is_finite() && polar.value.is_finite());
        assert!(
            (mc.value - polar.value).abs() < 4.0 * mc.stderr.max(0.01 * polar.value),
            "mc {} vs polar {}",
            mc.value,
            polar.value
        );
    }

    #[test]
    fn singular_point_policy_counts_rejects() {
        // integrand infinite exactly at the origin; the jitter rescues it
        let spec = QuadratureSpec::product(8, 4);
        let est = integrate_ball(
            |z| {
                let m = z.coord(0).norm();
                if m == 0.0 {
                    f64::INFINITY
                } else {
                    m.sqrt()
                }
            },
            &measure(1, 0.0),
            &spec,
        )
        .unwrap();
        assert!(est.value.is_finite());
    }

    #[test]
    fn slice_reduction_cases() {
        let spec = QuadratureSpec::monte_carlo(200_000, 11);
        // c = 0: both sides 1 after calibration
        let chk = slice_reduction_check(0.0, 2, &spec).unwrap();
        // the sphere side truncates below the last cutoff, so allow its ~ε² bias
        assert_abs_diff_eq!(chk.sphere.value, 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(chk.disk.value, 1.0, epsilon = 1e-8);
        assert!(!chk.sphere.diverged && !chk.disk.diverged);

        // c = 2, n = 2: sphere value 1/2
        let chk = slice_reduction_check(2.0, 2, &spec).unwrap();
        assert!((chk.sphere.value - 0.5).abs() < 4.0 * chk.sphere.stderr.max(1e-3));
        assert_abs_diff_eq!(chk.disk.value, 0.5, epsilon = 1e-8);
        assert!(
            (chk.sphere.value - chk.disk.value).abs() < 4.0 * chk.sphere.stderr.max(1e-3)
        );

        // c = −2: both sides diverge
        let chk = slice_reduction_check(-2.0, 2, &spec).unwrap();
        assert!(chk.sphere.diverged, "sphere side should diverge: {:?}", chk.sphere_class);
        assert!(chk.disk.diverged, "disk side should diverge: {:?}", chk.disk_class);
    }

    #[test]
    fn pseudo_ball_region_needs_monte_carlo() {
        let center = CPoint::from_reals(&[0.3]);
        let region = Region::PseudoBall {
            center: center.clone(),
            rho: 0.5,
        };
        let spec = QuadratureSpec::product(8, 4).with_region(region.clone());
        assert!(integrate_ball(|_| 1.0, &measure(1, 0.0), &spec).is_err());
        let est = integrate_ball(
            |_| 1.0,
            &measure(1, 0.0),
            &QuadratureSpec::monte_carlo(50_000, 2).with_region(region),
        )
        .unwrap();
        assert!(est.value > 0.0 && est.value < 1.0);
    }
}
