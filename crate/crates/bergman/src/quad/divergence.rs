//! Growth classification of truncated-integral sequences.
//!
//! A single quadrature cannot certify that an integral is infinite; instead we
//! evaluate a sequence of truncations T(ε) for ε = 2⁻³, 2⁻⁴, … and classify
//! how the sequence grows as ε shrinks.

/// How a truncated-integral sequence behaves as the cutoff ε → 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthClass {
    /// Successive differences decay; the integral converges.
    Convergent,
    /// T(ε) grows like slope · ln(1/ε).
    LogDivergent { slope: f64 },
    /// T(ε) grows like a power of 1/ε.
    PowerDivergent { exponent: f64 },
}

impl GrowthClass {
    pub fn is_divergent(&self) -> bool {
        !matches!(self, GrowthClass::Convergent)
    }

    pub fn label(&self) -> &'static str {
        match self {
            GrowthClass::Convergent => "convergent",
            GrowthClass::LogDivergent { .. } => "log-divergent",
            GrowthClass::PowerDivergent { .. } => "power-divergent",
        }
    }
}

/// Default cutoff ladder 2⁻³ … 2⁻¹⁶.
pub fn default_cutoffs() -> Vec<f64> {
    (3..=16).map(|k| 2f64.powi(-k)).collect()
}

/// Classifies a profile of (ε_k, T_k) with ε strictly decreasing by a constant
/// factor (a dyadic ladder). Looks at the ratio of successive differences
/// D_k = T_{k+1} − T_k: decaying ratios mean convergence, unit ratios mean
/// logarithmic growth, growing ratios mean power growth.
pub fn classify_growth(entries: &[(f64, f64)]) -> GrowthClass {
    assert!(entries.len() >= 5, "need at least 5 truncations to classify");
    let diffs: Vec<f64> = entries.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let tail = &diffs[diffs.len().saturating_sub(5)..];
    let scale = entries.last().unwrap().1.abs().max(1.0);

    // All tail increments negligible: already converged.
    if tail.iter().all(|d| d.abs() < 1e-9 * scale) {
        return GrowthClass::Convergent;
    }

    let mut ratios = Vec::new();
    for w in tail.windows(2) {
        if w[0].abs() > 1e-300 {
            ratios.push(w[1] / w[0]);
        }
    }
    let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;

    if mean_ratio < 0.85 {
        GrowthClass::Convergent
    } else if mean_ratio <= 1.18 {
        GrowthClass::LogDivergent {
            slope: fit_log_slope(entries),
        }
    } else {
        let step = entries[0].0 / entries[1].0; // cutoff shrink factor per step
        GrowthClass::PowerDivergent {
            exponent: mean_ratio.ln() / step.ln(),
        }
    }
}

/// Least-squares slope of T against ln(1/ε) over the tail of the profile.
pub fn fit_log_slope(entries: &[(f64, f64)]) -> f64 {
    let tail = &entries[entries.len().saturating_sub(6)..];
    let xs: Vec<f64> = tail.iter().map(|&(e, _)| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = tail.iter().map(|&(_, t)| t).collect();
    slope(&xs, &ys)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    cov / var
}
