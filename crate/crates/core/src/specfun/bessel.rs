use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::dd::{CDd, Dd};
use super::gamma::complex_gamma;
use super::SpecfunError;

/// Largest order modulus accepted by [`bessel_j`].
pub const MAX_ORDER: f64 = 50.0;
/// Largest argument accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 500.0;
/// Upper end of the region where the power series is always used.
pub const SERIES_REGION: f64 = 30.0;
/// Relative accuracy that [`bessel_j`] certifies before flagging `AccuracyLoss`.
pub const TARGET_RELATIVE_ERROR: f64 = 1e-12;

// The double-double series stays usable a little past SERIES_REGION; it is
// tried there only when the Hankel expansion misses the target.
const SERIES_FALLBACK_LIMIT: f64 = 80.0;
const MAX_SERIES_TERMS: usize = 4000;
const MAX_HANKEL_TERMS: usize = 200;
// 2^-104, unit roundoff of double-double
const DD_EPS: f64 = 4.93e-32;

/// Which evaluation route produced a [`SeriesEvalReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselEngine {
    PowerSeries,
    Hankel,
}

/// Value of a truncated expansion together with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesEvalReport {
    pub value: Complex64,
    pub terms_used: usize,
    /// Absolute error estimate: truncation (first omitted term times 2) plus rounding.
    pub tail_bound: f64,
    pub engine: BesselEngine,
}

impl SeriesEvalReport {
    pub fn relative_bound(&self) -> f64 {
        let scale = self.value.norm();
        if scale == 0.0 {
            f64::INFINITY
        } else {
            self.tail_bound / scale
        }
    }
}

/// Bessel function of the first kind `J_order(x)` for complex order and real `x > 0`.
///
/// For `x <= 30` the ascending series
/// `Σ_k (-1)^k (x/2)^(2k+order) / (k! Γ(k+1+order))` is summed in
/// double-double arithmetic, so the alternating cancellation does not eat
/// into the result. Beyond that the Hankel asymptotic expansion is used,
/// truncated at its smallest term, with the series as a fallback where it
/// gives the tighter bound.
///
/// When no route reaches a relative bound of [`TARGET_RELATIVE_ERROR`] the
/// best report is still returned, inside [`SpecfunError::AccuracyLoss`].
pub fn bessel_j(order: Complex64, x: f64) -> Result<SeriesEvalReport, SpecfunError> {
    if !(order.re.is_finite() && order.im.is_finite() && x.is_finite()) {
        return Err(SpecfunError::NonFinite);
    }
    if x <= 0.0 {
        return Err(SpecfunError::NonPositiveArgument { x });
    }
    if order.norm() > MAX_ORDER || x > MAX_ARGUMENT {
        return Err(SpecfunError::OutOfDomain { order, x });
    }

    // J_{-n} = (-1)^n J_n for integer n; the ascending series hits a
    // zero divisor there otherwise.
    if order.im == 0.0 && order.re < 0.0 && order.re.fract() == 0.0 {
        let mut report = bessel_j(-order, x)?;
        if (order.re as i64) % 2 != 0 {
            report.value = -report.value;
        }
        return Ok(report);
    }

    let report = if x <= SERIES_REGION {
        power_series(order, x)?
    } else {
        let hankel = hankel_expansion(order, x);
        if hankel.relative_bound() > TARGET_RELATIVE_ERROR && x <= SERIES_FALLBACK_LIMIT {
            let series = power_series(order, x)?;
            if series.tail_bound < hankel.tail_bound {
                series
            } else {
                hankel
            }
        } else {
            hankel
        }
    };

    if !(report.value.re.is_finite() && report.value.im.is_finite()) {
        return Err(SpecfunError::NonFinite);
    }
    if report.relative_bound() > TARGET_RELATIVE_ERROR {
        return Err(SpecfunError::AccuracyLoss { report });
    }
    Ok(report)
}

fn power_series(order: Complex64, x: f64) -> Result<SeriesEvalReport, SpecfunError> {
    // J = (x/2)^p / Γ(1+p) · Σ c_k,  c_k = c_{k-1} · (-x²/4) / (k (k+p))
    let gamma = complex_gamma(order + 1.0)?;
    let prefactor = (order * (0.5 * x).ln()).exp() / gamma;

    let quarter_sq = -Dd::from_prod(x, x) * Dd::from_f64(0.25);
    let q_abs = 0.25 * x * x;

    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut abs_sum: f64 = 1.0;
    let mut k = 0usize;
    let mut omitted = 0.0;
    loop {
        k += 1;
        if k > MAX_SERIES_TERMS {
            break;
        }
        let kf = k as f64;
        let denom = CDd {
            re: Dd::from_f64(kf * kf) + Dd::from_prod(kf, order.re),
            im: Dd::from_prod(kf, order.im),
        };
        term = term.scale(quarter_sq).div(denom);
        let mag = term.norm_f64();
        let ratio = q_abs / ((kf + 1.0) * Complex64::new(kf + 1.0 + order.re, order.im).norm());
        if ratio <= 0.5 && mag <= 1e-34 * abs_sum.max(sum.norm_f64()) {
            omitted = mag;
            break;
        }
        sum = sum + term;
        abs_sum += mag;
    }

    let series = Complex64::new(sum.re.to_f64(), sum.im.to_f64());
    let value = prefactor * series;
    let pref_abs = prefactor.norm();
    let rounding = pref_abs * abs_sum * DD_EPS * (k as f64 + 4.0)
        + value.norm() * f64::EPSILON * (4.0 + order.norm() * (0.5 * x).ln().abs());
    Ok(SeriesEvalReport {
        value,
        terms_used: k,
        tail_bound: 2.0 * pref_abs * omitted + rounding,
        engine: BesselEngine::PowerSeries,
    })
}

/// Coefficients `a_k(p) / x^k` of the Hankel expansion, truncated before
/// the terms start to grow. Returns the retained terms and the magnitude of
/// the first omitted one.
pub(crate) fn hankel_terms(order: Complex64, x: f64) -> (Vec<Complex64>, f64) {
    let four_p_sq = 4.0 * order * order;
    let mut terms = vec![Complex64::new(1.0, 0.0)];
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev_mag = 1.0;
    for k in 1..=MAX_HANKEL_TERMS {
        let odd = (2 * k - 1) as f64;
        term = term * (four_p_sq - odd * odd) / (8.0 * k as f64 * x);
        let mag = term.norm();
        if mag == 0.0 {
            // half-integer order: the expansion terminates
            return (terms, 0.0);
        }
        if mag >= prev_mag || mag < 1e-17 {
            return (terms, mag);
        }
        terms.push(term);
        prev_mag = mag;
    }
    (terms, prev_mag)
}

fn hankel_expansion(order: Complex64, x: f64) -> SeriesEvalReport {
    let (terms, omitted) = hankel_terms(order, x);
    let mut p = Complex64::new(0.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    for (k, t) in terms.iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
    }
    let omega = x - order * FRAC_PI_2 - FRAC_PI_4;
    let (c, s) = (omega.cos(), omega.sin());
    let amp = (2.0 / (PI * x)).sqrt();
    let value = amp * (p * c - q * s);
    let envelope = amp * (c.norm() + s.norm());
    // the phase ω is computed in f64; its absolute error scales with x
    let rounding = envelope * f64::EPSILON * (8.0 + x);
    SeriesEvalReport {
        value,
        terms_used: terms.len(),
        tail_bound: 2.0 * envelope * omitted + rounding,
        engine: BesselEngine::Hankel,
    }
}

/// Leading large-argument form `√(2/(πx)) cos(x − order·π/2 − π/4)`.
///
/// Restricted to `x >= 10 (1 + |order|²)`.
pub fn bessel_asymptotic(order: Complex64, x: f64) -> Result<Complex64, SpecfunError> {
    if !(order.re.is_finite() && order.im.is_finite() && x.is_finite()) {
        return Err(SpecfunError::NonFinite);
    }
    let min_x = asymptotic_threshold(order);
    if x < min_x {
        return Err(SpecfunError::OutsideValidityRegion { order, x, min_x });
    }
    let omega = x - order * FRAC_PI_2 - FRAC_PI_4;
    Ok((2.0 / (PI * x)).sqrt() * omega.cos())
}

/// Smallest argument at which [`bessel_asymptotic`] may be used.
pub fn asymptotic_threshold(order: Complex64) -> f64 {
    10.0 * (1.0 + order.norm_sqr())
}
