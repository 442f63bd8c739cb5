//! Absorption cross-sections from the extension-averaged S-matrix.
//!
//! All routes report the dimensionless product `k·σ`; the dimensional
//! cross-section (a length, the problem being two-dimensional) is attached
//! when a momentum is known.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use thiserror::Error;

use crate::extensions::{averaged_s, Channel};
use crate::quadrature::{composite_gauss, gauss_legendre};

/// Smallest accepted node budget for the continuum integral.
pub const MIN_QUAD_POINTS: usize = 64;
/// Relative agreement required between a quadrature and its refinement.
pub const QUAD_REFINEMENT_TOL: f64 = 1e-10;
/// Node budget used by [`correction_integral`].
pub const DEFAULT_QUAD_POINTS: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AbsorptionError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge: {coarse} vs {fine}")]
    QuadratureNotConverged { coarse: f64, fine: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbsorptionMethod {
    Sum,
    Integral,
    ClosedForm,
    FiniteRadius,
}

impl AbsorptionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            AbsorptionMethod::Sum => "sum",
            AbsorptionMethod::Integral => "integral",
            AbsorptionMethod::ClosedForm => "closed",
            AbsorptionMethod::FiniteRadius => "finite",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbsorptionResult {
    /// `k·σ_abs`, dimensionless.
    pub sigma_k: f64,
    /// `σ_abs` in length units, when the momentum is known.
    pub sigma: Option<f64>,
    pub channels_used: usize,
    pub method: AbsorptionMethod,
}

fn positive(name: &str, v: f64) -> Result<(), AbsorptionError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(AbsorptionError::InvalidArgument(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn non_negative(name: &str, v: f64) -> Result<(), AbsorptionError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(AbsorptionError::InvalidArgument(format!(
            "{name} must be non-negative, got {v}"
        )))
    }
}

/// Largest `|m|` that can take part in the partial-wave sum: `⌊√μ²⌋`.
/// A channel at exactly `|m| = μ` has `ν = 0` and is skipped by the sum.
pub fn channel_limit(mu_sq: f64) -> Result<i64, AbsorptionError> {
    positive("mu^2", mu_sq)?;
    let mut limit = mu_sq.sqrt().floor() as i64;
    // guard the floor against sqrt rounding
    while ((limit + 1) as f64).powi(2) <= mu_sq {
        limit += 1;
    }
    while limit > 0 && (limit as f64).powi(2) > mu_sq {
        limit -= 1;
    }
    Ok(limit)
}

/// Partial-wave sum `k σ = Σ_m (1 − |⟨S_m⟩|²)` over channels with `ν² > 0`.
pub fn sigma_sum(mu_sq: f64, k: f64) -> Result<AbsorptionResult, AbsorptionError> {
    positive("k", k)?;
    let limit = channel_limit(mu_sq)?;
    let mut total = 0.0;
    let mut used = 0usize;
    // accumulate from the weakest channels up
    for m in (0..=limit).rev() {
        let Ok(ch) = Channel::new(m, mu_sq) else {
            continue;
        };
        let weight = if m == 0 { 1.0 } else { 2.0 };
        total += weight * averaged_s(&ch).absorption();
        used += if m == 0 { 1 } else { 2 };
    }
    Ok(AbsorptionResult {
        sigma_k: total,
        sigma: Some(total / k),
        channels_used: used,
        method: AbsorptionMethod::Sum,
    })
}

/// Panel edges on `[0, π/2]` for integrands in `s` with a boundary layer of
/// width `1/(2πμ)` at `s = 0`, after the substitution `m = μ cos s`.
fn graded_edges(mu: f64) -> Vec<f64> {
    let layer = 1.0 / (2.0 * PI * mu);
    let mut edges = vec![0.0];
    let mut t = layer.min(FRAC_PI_4);
    while t < FRAC_PI_2 {
        edges.push(t);
        t *= 2.0;
    }
    edges.push(FRAC_PI_2);
    edges
}

/// Integrates `g(s)` over `[0, π/2]` on the graded mesh with about
/// `quad_points` nodes, then again with twice as many.
fn refined_integral<G: Fn(f64) -> f64>(
    g: G,
    mu: f64,
    quad_points: usize,
) -> Result<f64, AbsorptionError> {
    let edges = graded_edges(mu);
    let panels = edges.len() - 1;
    let per_panel = quad_points.div_ceil(panels).max(8);
    let coarse = composite_gauss(&g, &edges, &gauss_legendre(per_panel));
    let fine = composite_gauss(&g, &edges, &gauss_legendre(2 * per_panel));
    let scale = fine.abs().max(f64::MIN_POSITIVE);
    if (fine - coarse).abs() > QUAD_REFINEMENT_TOL * scale {
        return Err(AbsorptionError::QuadratureNotConverged { coarse, fine });
    }
    Ok(fine)
}

/// Continuum form `k σ = 2 ∫₀^μ [1 − e^{−2π√(μ² − m²)}] dm`.
///
/// The square-root endpoint at `m = μ` is removed by `m = μ cos s`, which
/// turns the integrand into the smooth `μ sin s (1 − e^{−2πμ sin s})`.
pub fn sigma_integral(
    mu: f64,
    k: f64,
    quad_points: usize,
) -> Result<AbsorptionResult, AbsorptionError> {
    positive("mu", mu)?;
    positive("k", k)?;
    if quad_points < MIN_QUAD_POINTS {
        return Err(AbsorptionError::InvalidArgument(format!(
            "need at least {MIN_QUAD_POINTS} quadrature points, got {quad_points}"
        )));
    }
    let z = 2.0 * PI * mu;
    let half = refined_integral(|s| mu * s.sin() * -(-z * s.sin()).exp_m1(), mu, quad_points)?;
    let sigma_k = 2.0 * half;
    Ok(AbsorptionResult {
        sigma_k,
        sigma: Some(sigma_k / k),
        channels_used: 0,
        method: AbsorptionMethod::Integral,
    })
}

/// `I(μ) = ∫₀^μ e^{−2π√(μ² − m²)} dm`, the deficit of the continuum form:
/// `k σ = 2μ − 2 I(μ)`. For large `μ`, `I(μ) ≈ 1/(4π² μ)`.
pub fn correction_integral(mu: f64) -> Result<f64, AbsorptionError> {
    positive("mu", mu)?;
    let z = 2.0 * PI * mu;
    refined_integral(
        |s| mu * s.sin() * (-z * s.sin()).exp(),
        mu,
        DEFAULT_QUAD_POINTS,
    )
}

/// Power law `I(μ) ≈ c μ^{−p}` fitted by least squares in log–log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub prefactor: f64,
}

pub fn correction_decay_fit(mus: &[f64]) -> Result<DecayFit, AbsorptionError> {
    if mus.len() < 2 {
        return Err(AbsorptionError::InvalidArgument(
            "decay fit needs at least two points".into(),
        ));
    }
    let pts = mus
        .iter()
        .map(|&mu| Ok((mu.ln(), correction_integral(mu)?.ln())))
        .collect::<Result<Vec<_>, AbsorptionError>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(AbsorptionError::InvalidArgument(
            "decay fit needs distinct mu values".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok(DecayFit {
        exponent: -slope,
        prefactor: (my - slope * mx).exp(),
    })
}

/// Both algebraic forms of the zero-radius classical-limit cross-section.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedForm {
    pub result: AbsorptionResult,
    /// `4λ√(αM)/k` with `k = Mv`.
    pub momentum_form: f64,
    /// `2√((4α/M)(λ²/v²))`.
    pub velocity_form: f64,
}

fn coupling_area(alpha: f64, mass: f64, lambda: f64, v: f64) -> f64 {
    (4.0 * alpha / mass) * (lambda * lambda / (v * v))
}

pub fn sigma_closed_form(
    alpha: f64,
    mass: f64,
    lambda: f64,
    v: f64,
) -> Result<ClosedForm, AbsorptionError> {
    positive("alpha", alpha)?;
    positive("mass", mass)?;
    positive("lambda", lambda)?;
    positive("velocity", v)?;
    let k = mass * v;
    let momentum_form = 4.0 * lambda * (alpha * mass).sqrt() / k;
    let velocity_form = 2.0 * coupling_area(alpha, mass, lambda, v).sqrt();
    Ok(ClosedForm {
        result: AbsorptionResult {
            sigma_k: k * velocity_form,
            sigma: Some(velocity_form),
            channels_used: 0,
            method: AbsorptionMethod::ClosedForm,
        },
        momentum_form,
        velocity_form,
    })
}

/// Classical capture by a wire of radius `R_w`: `σ = 2√(R_w² + (4α/M)(λ²/v²))`.
pub fn sigma_finite_radius(
    r_wire: f64,
    alpha: f64,
    mass: f64,
    lambda: f64,
    v: f64,
) -> Result<AbsorptionResult, AbsorptionError> {
    non_negative("wire radius", r_wire)?;
    non_negative("lambda", lambda)?;
    positive("alpha", alpha)?;
    positive("mass", mass)?;
    positive("velocity", v)?;
    let sigma = 2.0 * (r_wire * r_wire + coupling_area(alpha, mass, lambda, v)).sqrt();
    Ok(AbsorptionResult {
        sigma_k: mass * v * sigma,
        sigma: Some(sigma),
        channels_used: 0,
        method: AbsorptionMethod::FiniteRadius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_limits() {
        assert_eq!(channel_limit(6.25).unwrap(), 2);
        assert_eq!(channel_limit(4.0).unwrap(), 2);
        assert_eq!(channel_limit(0.81).unwrap(), 0);
        assert_eq!(channel_limit(1e6).unwrap(), 1000);
        assert!(channel_limit(0.0).is_err());
    }

    #[test]
    fn perfect_square_edge_channel_is_skipped() {
        let r = sigma_sum(4.0, 1.0).unwrap();
        assert_eq!(r.channels_used, 3);
    }

    #[test]
    fn single_channel_sums() {
        let r = sigma_sum(0.25, 2.0).unwrap();
        assert_eq!(r.channels_used, 1);
        assert!((r.sigma_k - (1.0 - (-PI).exp())).abs() < 1e-15);
        assert!((r.sigma.unwrap() - r.sigma_k / 2.0).abs() < 1e-16);
        let r = sigma_sum(0.81, 1.0).unwrap();
        assert!((r.sigma_k - (1.0 - (-1.8 * PI).exp())).abs() < 1e-15);
    }

    #[test]
    fn integral_rejects_small_budgets() {
        assert!(sigma_integral(10.0, 1.0, 63).is_err());
        assert!(sigma_integral(0.0, 1.0, 64).is_err());
        assert!(sigma_integral(1.0, -1.0, 64).is_err());
    }

    #[test]
    fn closed_form_checks() {
        assert!(sigma_closed_form(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(sigma_finite_radius(-1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(sigma_finite_radius(1.0, 1.0, 1.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn graded_mesh_resolves_layer() {
        let e = graded_edges(1000.0);
        assert_eq!(e[0], 0.0);
        assert!(e[1] < 2e-4);
        assert_eq!(*e.last().unwrap(), FRAC_PI_2);
        assert!(e.windows(2).all(|w| w[1] > w[0]));
    }
}
