//! Bound-state ladder of a single self-adjoint extension.
//!
//! In the alternative convention the S-matrix `S̃` has poles at `k = iκ` with
//! `κ_n = e^{(θ' − 2πn)/(2ν)}`, `θ' = π − θ`, measured in units of the
//! reference scale `M` of the `ln(k/M)` term. The ladder is geometric with
//! ratio `e^{−π/ν}`, accumulates at zero and is unbounded above, so fixing one
//! level fixes the extension.

use std::f64::consts::{PI, TAU};
use std::ops::RangeInclusive;

use thiserror::Error;

/// Largest `|ln κ|` accepted before the ladder is declared out of range.
pub const MAX_LOG_KAPPA: f64 = 700.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("level n = {n} has ln(kappa) = {exponent}, outside the representable range")]
    RangeTooWide { n: i64, exponent: f64 },
    #[error("no sign change of the pole function on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("bracket [{lo}, {hi}] spans a full ladder spacing and may hold several poles")]
    MultipleRoots { lo: f64, hi: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundState {
    pub n: i64,
    pub kappa: f64,
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSlice {
    pub states: Vec<BoundState>,
    pub theta_prime: f64,
    pub nu: f64,
}

impl SpectrumSlice {
    /// Ratio of successive levels, `e^{−π/ν}`.
    pub fn ladder_ratio(&self) -> f64 {
        (-PI / self.nu).exp()
    }
}

fn check_nu(nu: f64) -> Result<(), SpectrumError> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(SpectrumError::InvalidArgument(format!(
            "need nu > 0, got {nu}"
        )));
    }
    Ok(())
}

/// Levels `κ_n = e^{(θ' − 2πn)/(2ν)}` for `n` in `n_range`, with energies
/// `−κ²/(2M)`.
pub fn bound_spectrum(
    nu: f64,
    theta_prime: f64,
    mass: f64,
    n_range: RangeInclusive<i64>,
) -> Result<SpectrumSlice, SpectrumError> {
    check_nu(nu)?;
    if !(0.0..TAU).contains(&theta_prime) {
        return Err(SpectrumError::InvalidArgument(format!(
            "theta' must lie in [0, 2pi), got {theta_prime}"
        )));
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(SpectrumError::InvalidArgument(format!(
            "need mass > 0, got {mass}"
        )));
    }
    if n_range.is_empty() {
        return Err(SpectrumError::InvalidArgument("empty level range".into()));
    }
    let states = n_range
        .map(|n| {
            let exponent = (theta_prime - TAU * n as f64) / (2.0 * nu);
            if exponent.abs() > MAX_LOG_KAPPA {
                return Err(SpectrumError::RangeTooWide { n, exponent });
            }
            let kappa = exponent.exp();
            let energy = -kappa * kappa / (2.0 * mass);
            if !energy.is_finite() {
                return Err(SpectrumError::RangeTooWide { n, exponent });
            }
            Ok(BoundState { n, kappa, energy })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumSlice {
        states,
        theta_prime,
        nu,
    })
}

/// Real function whose zeros are the bound-state poles of `S̃` at `k = iκ`.
///
/// With `k = iκ`, `ln(k/M) = ln(κ/M) + iπ/2`, and the denominator of `S̃`
/// becomes `e^{−νπ/2}(e^{iψ} + 1)` with `ψ = θ + 2ν ln(κ/M)` real. That
/// vanishes exactly where `cos(ψ/2) = 0`, which changes sign at every pole.
pub fn pole_function(nu: f64, theta_m: f64, mass: f64, kappa: f64) -> f64 {
    (0.5 * (theta_m + 2.0 * nu * (kappa / mass).ln())).cos()
}

/// Locates the single pole of `S̃` inside `bracket` by bisection in `ln κ`.
pub fn find_pole_numeric(
    nu: f64,
    theta_m: f64,
    mass: f64,
    bracket: (f64, f64),
) -> Result<f64, SpectrumError> {
    check_nu(nu)?;
    let (lo, hi) = bracket;
    if !(mass.is_finite() && mass > 0.0 && theta_m.is_finite()) {
        return Err(SpectrumError::InvalidArgument(format!(
            "need finite theta and mass > 0, got theta = {theta_m}, mass = {mass}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(SpectrumError::InvalidArgument(format!(
            "bad bracket [{lo}, {hi}]"
        )));
    }
    // consecutive poles are a factor e^{π/ν} apart
    if (hi / lo).ln() >= PI / nu {
        return Err(SpectrumError::MultipleRoots { lo, hi });
    }
    let f = |t: f64| pole_function(nu, theta_m, mass, t.exp());
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(lo);
    }
    if fb == 0.0 {
        return Ok(hi);
    }
    if fa.signum() == fb.signum() {
        return Err(SpectrumError::NoSignChange { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid.exp());
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// All poles of `S̃` with `κ` in `[lo, hi]`, found by scanning `ln κ` in
/// steps of a quarter ladder spacing and bisecting each sign change.
pub fn find_poles_in(
    nu: f64,
    theta_m: f64,
    mass: f64,
    range: (f64, f64),
) -> Result<Vec<f64>, SpectrumError> {
    check_nu(nu)?;
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(SpectrumError::InvalidArgument(format!(
            "bad range [{lo}, {hi}]"
        )));
    }
    let step = 0.25 * PI / nu;
    let (t_lo, t_hi) = (lo.ln(), hi.ln());
    let panels = ((t_hi - t_lo) / step).ceil().max(1.0) as usize;
    let h = (t_hi - t_lo) / panels as f64;
    let mut roots = Vec::new();
    for i in 0..panels {
        let a = (t_lo + h * i as f64).exp();
        let b = if i + 1 == panels {
            hi
        } else {
            (t_lo + h * (i + 1) as f64).exp()
        };
        match find_pole_numeric(nu, theta_m, mass, (a, b)) {
            Ok(root) => {
                // a root sitting exactly on a shared panel edge is found twice
                if roots
                    .last()
                    .is_none_or(|&last: &f64| (root / last - 1.0).abs() > 1e-12)
                {
                    roots.push(root);
                }
            }
            Err(SpectrumError::NoSignChange { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(roots)
}

/// The `θ' ∈ [0, 2π)` whose ladder contains `kappa_ref`.
pub fn extension_from_level(nu: f64, kappa_ref: f64) -> Result<f64, SpectrumError> {
    check_nu(nu)?;
    if !(kappa_ref.is_finite() && kappa_ref > 0.0) {
        return Err(SpectrumError::InvalidArgument(format!(
            "need kappa_ref > 0, got {kappa_ref}"
        )));
    }
    let theta = (2.0 * nu * kappa_ref.ln()).rem_euclid(TAU);
    Ok(if theta >= TAU { 0.0 } else { theta })
}

/// Index `n` of the ladder level closest to `kappa` for extension `theta_prime`.
pub fn level_index(nu: f64, theta_prime: f64, kappa: f64) -> i64 {
    ((theta_prime - 2.0 * nu * kappa.ln()) / TAU).round() as i64
}
