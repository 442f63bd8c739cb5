//! Partial-wave S-matrices for the self-adjoint extensions of the radial
//! Hamiltonian, and their average over all extensions.
//!
//! For a channel with index `ν` the regular solution is
//! `φ(kr) = e^{iγ} J_{iν}(kr) − e^{−iγ} J_{−iν}(kr)`, one for each extension
//! phase `γ`. Every such extension scatters elastically (`|S| = 1`); the
//! uniform average over `γ` is the real number `e^{−νπ}`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::periodic_mean;
use crate::specfun::{asymptotic_threshold, bessel_j, hankel_terms, SpecfunError};

/// Minimum number of nodes for the periodic averaging quadrature.
pub const MIN_AVERAGE_POINTS: usize = 16;
/// Minimum number of wavefunction samples in a Jost fit.
pub const MIN_JOST_SAMPLES: usize = 32;
/// Design condition number above which a Jost fit is rejected.
pub const MAX_JOST_CONDITION: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtensionError {
    #[error("channel m = {m}, mu^2 = {mu_sq} is outside the attractive singular regime (need mu^2 > m^2)")]
    InvalidChannel { m: i64, mu_sq: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("ill-conditioned Jost fit (condition number {condition:e})")]
    IllConditionedFit { condition: f64 },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// One angular-momentum channel of the attractive `1/r²` problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Channel {
    m: i64,
    mu_sq: f64,
    nu: f64,
}

impl Channel {
    /// Channel `m` at coupling `μ² = 4αλ²M`. Requires `ν² = μ² − m² > 0`.
    pub fn new(m: i64, mu_sq: f64) -> Result<Self, ExtensionError> {
        let nu_sq = mu_sq - (m as f64) * (m as f64);
        if !(mu_sq.is_finite() && mu_sq > 0.0 && nu_sq > 0.0) {
            return Err(ExtensionError::InvalidChannel { m, mu_sq });
        }
        Ok(Channel {
            m,
            mu_sq,
            nu: nu_sq.sqrt(),
        })
    }

    /// The `m = 0` channel whose index is `nu`.
    pub fn from_nu(nu: f64) -> Result<Self, ExtensionError> {
        Channel::new(0, nu * nu)
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn mu_sq(&self) -> f64 {
        self.mu_sq
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// Phase `γ ∈ [0, 2π)` selecting one self-adjoint extension.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ExtensionPhase(f64);

impl ExtensionPhase {
    pub fn new(gamma: f64) -> Result<Self, ExtensionError> {
        if !gamma.is_finite() {
            return Err(ExtensionError::InvalidArgument(format!(
                "extension phase must be finite, got {gamma}"
            )));
        }
        let mut g = gamma.rem_euclid(TAU);
        if g >= TAU {
            g = 0.0;
        }
        Ok(ExtensionPhase(g))
    }

    pub fn gamma(&self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SMatrixKind {
    PerExtension,
    Averaged,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SMatrixElement {
    pub value: Complex64,
    pub kind: SMatrixKind,
}

impl SMatrixElement {
    /// `1 − |S|²`, the absorbed flux fraction of the channel.
    pub fn absorption(&self) -> f64 {
        1.0 - self.value.norm_sqr()
    }
}

/// Numerator and denominator of the per-extension S-matrix, both scaled by
/// `e^{−νπ/2}` so large `ν` cannot overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SMatrixFraction {
    pub numerator: Complex64,
    pub denominator: Complex64,
}

impl SMatrixFraction {
    pub fn ratio(&self) -> Complex64 {
        self.numerator / self.denominator
    }
}

/// `S(γ) = (e^{iγ}e^{νπ/2} − e^{−iγ}e^{−νπ/2}) / (e^{iγ}e^{−νπ/2} − e^{−iγ}e^{νπ/2})`
/// as a fraction.
pub fn s_matrix_fraction(ch: &Channel, phase: ExtensionPhase) -> SMatrixFraction {
    let q = (-ch.nu * PI).exp();
    let (s, c) = phase.gamma().sin_cos();
    // e^{iγ} − e^{−iγ} q  and  e^{iγ} q − e^{−iγ}; the second is −conj of the first
    SMatrixFraction {
        numerator: Complex64::new(c - c * q, s + s * q),
        denominator: Complex64::new(c * q - c, s * q + s),
    }
}

/// Per-extension partial-wave S-matrix. Unimodular for every phase.
pub fn s_matrix(ch: &Channel, phase: ExtensionPhase) -> SMatrixElement {
    SMatrixElement {
        value: s_matrix_fraction(ch, phase).ratio(),
        kind: SMatrixKind::PerExtension,
    }
}

/// Average of [`s_matrix`] over all extension phases: `⟨S⟩ = e^{−νπ}`.
pub fn averaged_s(ch: &Channel) -> SMatrixElement {
    SMatrixElement {
        value: Complex64::new((-ch.nu * PI).exp(), 0.0),
        kind: SMatrixKind::Averaged,
    }
}

/// `(1/2π) ∫₀^{2π} S(γ) dγ` by the periodic trapezoid rule on `n_points` nodes.
///
/// The Fourier coefficients of `S(γ)` decay like `e^{−νπ j}`, so the error
/// falls off as `e^{−νπ n/2}`.
pub fn averaged_s_numeric(ch: &Channel, n_points: usize) -> Result<Complex64, ExtensionError> {
    check_points(n_points)?;
    Ok(periodic_mean(
        |g| s_matrix(ch, ExtensionPhase(g)).value,
        n_points,
    ))
}

fn check_points(n_points: usize) -> Result<(), ExtensionError> {
    if n_points < MIN_AVERAGE_POINTS {
        return Err(ExtensionError::InvalidArgument(format!(
            "averaging needs at least {MIN_AVERAGE_POINTS} points, got {n_points}"
        )));
    }
    Ok(())
}

fn check_scale(k: f64, mass: f64) -> Result<(), ExtensionError> {
    if !(k.is_finite() && k > 0.0 && mass.is_finite() && mass > 0.0) {
        return Err(ExtensionError::InvalidArgument(format!(
            "need k > 0 and mass > 0, got k = {k}, mass = {mass}"
        )));
    }
    Ok(())
}

/// Numerator and denominator of the alternative-convention S-matrix
///
/// `S̃ = (e^{iψ}e^{−νπ/2} + e^{νπ/2}) / (e^{iψ}e^{νπ/2} + e^{−νπ/2})`,
/// `ψ = θ + 2ν ln(k/M)`, for a possibly complex momentum `k`. Both parts are
/// scaled by `e^{−νπ/2}`. Bound states sit at the zeros of the denominator
/// on the positive imaginary `k` axis.
pub fn theta_fraction(nu: f64, theta: f64, k: Complex64, mass: f64) -> SMatrixFraction {
    let q = (-nu * PI).exp();
    let psi = theta + 2.0 * nu * (k / mass).ln();
    let rot = (Complex64::i() * psi).exp();
    SMatrixFraction {
        numerator: rot * q + 1.0,
        denominator: rot + q,
    }
}

/// Alternative-convention S-matrix `S̃` at real momentum `k`, with extension
/// phase `theta` and reference scale `mass` in the logarithm.
pub fn s_matrix_theta(
    ch: &Channel,
    theta: f64,
    k: f64,
    mass: f64,
) -> Result<SMatrixElement, ExtensionError> {
    check_scale(k, mass)?;
    if !theta.is_finite() {
        return Err(ExtensionError::InvalidArgument(format!(
            "phase must be finite, got {theta}"
        )));
    }
    Ok(SMatrixElement {
        value: theta_fraction(ch.nu, theta, Complex64::new(k, 0.0), mass).ratio(),
        kind: SMatrixKind::PerExtension,
    })
}

/// Average of [`s_matrix_theta`] over `θ' ∈ [0, 2π)`, with `θ = π − θ'`.
pub fn averaged_theta_numeric(
    ch: &Channel,
    k: f64,
    mass: f64,
    n_points: usize,
) -> Result<Complex64, ExtensionError> {
    check_points(n_points)?;
    check_scale(k, mass)?;
    Ok(periodic_mean(
        |theta_prime| theta_fraction(ch.nu, PI - theta_prime, Complex64::new(k, 0.0), mass).ratio(),
        n_points,
    ))
}

/// Coefficients of the outgoing and incoming radial waves, up to a common
/// constant. Only `l_minus / l_plus` is meaningful.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JostPair {
    pub l_minus: Complex64,
    pub l_plus: Complex64,
    /// Condition number of the least-squares design.
    pub condition_number: f64,
    /// Root-mean-square residual of the fit, relative to the data norm.
    pub relative_residual: f64,
}

impl JostPair {
    pub fn ratio(&self) -> Complex64 {
        self.l_minus / self.l_plus
    }
}

/// Extracts the Jost coefficients by fitting the wavefunction at large `kr`.
///
/// `φ(kr)` is evaluated from the Bessel engine on `samples` equally spaced
/// radii in `r_window` and fitted to
/// `√(2kr) φ ≃ L₋ h₊(kr) − L₊ h₋(kr)`, where
/// `h±(x) = e^{±i(x − 3π/4)} Σ_k (±i)^k a_k / x^k` are the outgoing and
/// incoming waves including their Hankel corrections. At leading order this
/// is `L₋ e^{ikr} − L₊ e^{−ikr}` up to the constant phase `3π/4`, the one for
/// which the free `m = 0` wave has `S = 1`.
pub fn jost_from_asymptotics(
    ch: &Channel,
    phase: ExtensionPhase,
    k: f64,
    r_window: (f64, f64),
    samples: usize,
) -> Result<JostPair, ExtensionError> {
    let (r_min, r_max) = r_window;
    if !(k.is_finite() && k > 0.0) {
        return Err(ExtensionError::InvalidArgument(format!(
            "need k > 0, got {k}"
        )));
    }
    if !(r_min.is_finite() && r_max.is_finite() && r_min > 0.0 && r_max > r_min) {
        return Err(ExtensionError::InvalidArgument(format!(
            "bad radial window [{r_min}, {r_max}]"
        )));
    }
    if samples < MIN_JOST_SAMPLES {
        return Err(ExtensionError::InvalidArgument(format!(
            "Jost fit needs at least {MIN_JOST_SAMPLES} samples, got {samples}"
        )));
    }
    let order = Complex64::new(0.0, ch.nu);
    let min_x = asymptotic_threshold(order);
    if k * r_min < min_x {
        return Err(SpecfunError::OutsideValidityRegion {
            order,
            x: k * r_min,
            min_x,
        }
        .into());
    }

    let e_plus = Complex64::from_polar(1.0, phase.gamma());
    let e_minus = e_plus.conj();
    let ref_phase = 3.0 * PI / 4.0;

    let mut col_out = Vec::with_capacity(samples);
    let mut col_in = Vec::with_capacity(samples);
    let mut data = Vec::with_capacity(samples);
    for j in 0..samples {
        let r = r_min + (r_max - r_min) * j as f64 / (samples - 1) as f64;
        let x = k * r;
        let phi = e_plus * bessel_j(order, x)?.value - e_minus * bessel_j(-order, x)?.value;
        data.push(phi * (2.0 * x).sqrt());

        let (terms, _) = hankel_terms(order, x);
        let mut w_out = Complex64::new(0.0, 0.0);
        let mut w_in = Complex64::new(0.0, 0.0);
        let mut ik = Complex64::new(1.0, 0.0);
        for t in &terms {
            w_out += ik * t;
            w_in += ik.conj() * t;
            ik *= Complex64::i();
        }
        col_out.push(Complex64::from_polar(1.0, x - ref_phase) * w_out);
        col_in.push(-Complex64::from_polar(1.0, -(x - ref_phase)) * w_in);
    }

    let (coef, condition, residual) = least_squares_two(&col_out, &col_in, &data);
    if condition > MAX_JOST_CONDITION || !condition.is_finite() {
        return Err(ExtensionError::IllConditionedFit { condition });
    }
    Ok(JostPair {
        l_minus: coef[0],
        l_plus: coef[1],
        condition_number: condition,
        relative_residual: residual,
    })
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Least squares for two complex columns by modified Gram–Schmidt.
/// Returns the coefficients, the condition number of the design and the
/// relative residual.
fn least_squares_two(
    a1: &[Complex64],
    a2: &[Complex64],
    y: &[Complex64],
) -> ([Complex64; 2], f64, f64) {
    let r11 = norm(a1);
    if r11 == 0.0 {
        return ([Complex64::new(0.0, 0.0); 2], f64::INFINITY, f64::INFINITY);
    }
    let q1: Vec<Complex64> = a1.iter().map(|z| z / r11).collect();
    let r12 = dot(&q1, a2);
    let v: Vec<Complex64> = a2.iter().zip(&q1).map(|(a, q)| a - r12 * q).collect();
    let r22 = norm(&v);
    // singular values of R = [[r11, r12], [0, r22]]
    let fro = r11 * r11 + r12.norm_sqr() + r22 * r22;
    let det = r11 * r22;
    let disc = (fro * fro - 4.0 * det * det).max(0.0).sqrt();
    let s_max = (0.5 * (fro + disc)).sqrt();
    let s_min_sq = 0.5 * (fro - disc);
    // recompute the small one from the determinant to avoid cancellation
    let s_min = if s_max > 0.0 {
        det / s_max
    } else {
        s_min_sq.max(0.0).sqrt()
    };
    let condition = if s_min > 0.0 {
        s_max / s_min
    } else {
        f64::INFINITY
    };
    if r22 == 0.0 {
        return ([Complex64::new(0.0, 0.0); 2], f64::INFINITY, f64::INFINITY);
    }
    let q2: Vec<Complex64> = v.iter().map(|z| z / r22).collect();
    let b1 = dot(&q1, y);
    let b2 = dot(&q2, y);
    let x2 = b2 / r22;
    let x1 = (b1 - r12 * x2) / r11;
    let resid: Vec<Complex64> = y
        .iter()
        .zip(a1.iter().zip(a2))
        .map(|(yy, (u, w))| yy - x1 * u - x2 * w)
        .collect();
    let rel = norm(&resid) / norm(y).max(f64::MIN_POSITIVE);
    ([x1, x2], condition, rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn phase(g: f64) -> ExtensionPhase {
        ExtensionPhase::new(g).unwrap()
    }

    #[test]
    fn channel_construction() {
        let ch = Channel::new(1, 5.0).unwrap();
        assert_eq!(ch.nu(), 2.0);
        assert!(Channel::new(2, 4.0).is_err());
        assert!(Channel::new(3, 4.0).is_err());
        assert!(Channel::new(0, 0.0).is_err());
        assert!(Channel::new(0, f64::NAN).is_err());
        assert_eq!(
            Channel::new(-1, 5.0).unwrap().nu(),
            Channel::new(1, 5.0).unwrap().nu()
        );
    }

    #[test]
    fn phase_normalization() {
        assert_eq!(phase(0.0).gamma(), 0.0);
        assert!((phase(-FRAC_PI_2).gamma() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert!(phase(TAU).gamma() < 1e-15);
        assert!(ExtensionPhase::new(f64::INFINITY).is_err());
    }

    #[test]
    fn quarter_turn_gives_unity() {
        for nu in [0.05, 1.0, 4.0, 30.0] {
            let s = s_matrix(&Channel::from_nu(nu).unwrap(), phase(FRAC_PI_2)).value;
            assert!(
                (s - Complex64::new(1.0, 0.0)).norm() < 1e-15,
                "nu {nu}: {s}"
            );
        }
    }

    #[test]
    fn zero_phase_gives_minus_one() {
        for nu in [0.05, 1.0, 4.0, 30.0] {
            let s = s_matrix(&Channel::from_nu(nu).unwrap(), phase(0.0)).value;
            assert!(
                (s + Complex64::new(1.0, 0.0)).norm() < 1e-15,
                "nu {nu}: {s}"
            );
        }
    }

    #[test]
    fn s_matrix_fixture_value() {
        // ν = 1, γ = 1, evaluated at 50 digits
        let s = s_matrix(&Channel::from_nu(1.0).unwrap(), phase(1.0)).value;
        let want = Complex64::new(0.485_002_176_085_893_74, -0.874_512_943_981_933_1);
        assert!((s - want).norm() < 1e-15, "{s}");
    }

    #[test]
    fn denominator_is_minus_conjugate_numerator() {
        for g in [0.0, 0.3, 2.0, 4.4] {
            let f = s_matrix_fraction(&Channel::from_nu(0.8).unwrap(), phase(g));
            assert_eq!(f.denominator, -f.numerator.conj());
        }
    }

    #[test]
    fn averaged_limits() {
        let one = averaged_s(&Channel::from_nu(1.0).unwrap());
        assert_eq!(one.kind, SMatrixKind::Averaged);
        assert!((one.value.re - (-PI).exp()).abs() < 1e-17);
        let tiny = averaged_s(&Channel::from_nu(1e-9).unwrap());
        assert!((tiny.value.re - 1.0).abs() < 1e-8);
        let three = averaged_s(&Channel::from_nu(3.0).unwrap());
        assert!((three.value.re - (-3.0 * PI).exp()).abs() < 1e-20);
    }

    #[test]
    fn averaging_rejects_few_points() {
        let ch = Channel::from_nu(1.0).unwrap();
        assert!(averaged_s_numeric(&ch, 15).is_err());
        assert!(averaged_s_numeric(&ch, 16).is_ok());
    }

    #[test]
    fn theta_form_special_phases() {
        let ch = Channel::from_nu(1.7).unwrap();
        // θ + 2ν ln(k/M) = 0 with k = M
        let s0 = s_matrix_theta(&ch, 0.0, 2.0, 2.0).unwrap().value;
        assert!((s0 - 1.0).norm() < 1e-15);
        let spi = s_matrix_theta(&ch, PI, 2.0, 2.0).unwrap().value;
        assert!((spi + 1.0).norm() < 1e-15);
        // same ψ reached through the logarithm
        let k = 3.0;
        let theta = -2.0 * ch.nu() * (k / 1.5f64).ln();
        let s = s_matrix_theta(&ch, theta, k, 1.5).unwrap().value;
        assert!((s - 1.0).norm() < 1e-14);
        assert!(s_matrix_theta(&ch, 0.0, -1.0, 1.0).is_err());
        assert!(s_matrix_theta(&ch, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn jost_validation() {
        let ch = Channel::from_nu(1.0).unwrap();
        let p = phase(2.0);
        assert!(matches!(
            jost_from_asymptotics(&ch, p, 1.0, (5.0, 10.0), 64),
            Err(ExtensionError::Specfun(
                SpecfunError::OutsideValidityRegion { .. }
            ))
        ));
        assert!(jost_from_asymptotics(&ch, p, 1.0, (100.0, 200.0), 8).is_err());
        assert!(jost_from_asymptotics(&ch, p, 0.0, (100.0, 200.0), 64).is_err());
        assert!(jost_from_asymptotics(&ch, p, 1.0, (200.0, 100.0), 64).is_err());
    }

    #[test]
    fn jost_window_too_narrow_is_ill_conditioned() {
        let ch = Channel::from_nu(1.0).unwrap();
        let r = jost_from_asymptotics(&ch, phase(2.0), 1.0, (100.0, 100.0 + 1e-9), 64);
        assert!(
            matches!(r, Err(ExtensionError::IllConditionedFit { .. })),
            "{r:?}"
        );
    }
}
