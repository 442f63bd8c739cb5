//! Physical inputs for a charged wire and a polarizable atom, and sweeps over
//! them.
//!
//! All quantities are in one natural-unit system (`ħ = c = 1`) chosen by the
//! caller; nothing here converts units.

use std::collections::HashSet;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::absorption::{
    sigma_closed_form, sigma_finite_radius, sigma_integral, sigma_sum, DEFAULT_QUAD_POINTS,
};
use crate::classical::{effective_beta, estimate_capture, CaptureStudy, DEFAULT_TOLERANCE};

/// Keys accepted in a scenario file.
pub const SCENARIO_KEYS: [&str; 5] = ["lambda", "alpha", "mass", "velocity", "wire_radius"];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("cannot read scenario file: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WireScenario {
    /// Line charge density `λ`.
    pub lambda: f64,
    /// Atomic polarizability `α`.
    pub alpha: f64,
    pub mass: f64,
    pub velocity: f64,
    pub wire_radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessGroups {
    /// `μ² = 4αλ²M`.
    pub mu_sq: f64,
    /// `k = Mv`.
    pub k: f64,
    /// `ℰ = ½Mv²`.
    pub energy: f64,
}

impl DimensionlessGroups {
    pub fn mu(&self) -> f64 {
        self.mu_sq.sqrt()
    }
}

impl WireScenario {
    pub fn new(
        lambda: f64,
        alpha: f64,
        mass: f64,
        velocity: f64,
        wire_radius: f64,
    ) -> Result<Self, ScenarioError> {
        let s = WireScenario {
            lambda,
            alpha,
            mass,
            velocity,
            wire_radius,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (name, v) in [("lambda", self.lambda), ("wire_radius", self.wire_radius)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ScenarioError::InvalidArgument(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("alpha", self.alpha),
            ("mass", self.mass),
            ("velocity", self.velocity),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ScenarioError::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

pub fn derive_groups(s: &WireScenario) -> DimensionlessGroups {
    let k = s.mass * s.velocity;
    DimensionlessGroups {
        mu_sq: 4.0 * s.alpha * s.lambda * s.lambda * s.mass,
        k,
        energy: 0.5 * s.mass * s.velocity * s.velocity,
    }
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
/// `wire_radius` defaults to zero, every other key is required, and unknown
/// or repeated keys are rejected.
pub fn parse_scenario(text: &str) -> Result<WireScenario, ScenarioError> {
    let mut values: [Option<f64>; 5] = [None; 5];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ScenarioError::Parse {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
        let key = key.trim();
        let slot = SCENARIO_KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| ScenarioError::Parse {
                line,
                message: format!("unknown key `{key}`"),
            })?;
        if values[slot].is_some() {
            return Err(ScenarioError::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        let v: f64 = value.trim().parse().map_err(|_| ScenarioError::Parse {
            line,
            message: format!("`{}` is not a number", value.trim()),
        })?;
        values[slot] = Some(v);
    }
    let get = |i: usize| values[i].ok_or(ScenarioError::MissingKey(SCENARIO_KEYS[i]));
    WireScenario::new(get(0)?, get(1)?, get(2)?, get(3)?, values[4].unwrap_or(0.0))
}

pub fn load_scenario(path: &Path) -> Result<WireScenario, ScenarioError> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    Lambda,
    Velocity,
    WireRadius,
    /// `μ = √(4αλ²M)`, varied through `λ`.
    Mu,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::Lambda => "lambda",
            SweepParameter::Velocity => "velocity",
            SweepParameter::WireRadius => "wire_radius",
            SweepParameter::Mu => "mu",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lambda" => Some(SweepParameter::Lambda),
            "velocity" => Some(SweepParameter::Velocity),
            "wire_radius" => Some(SweepParameter::WireRadius),
            "mu" => Some(SweepParameter::Mu),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepOutput {
    Sum,
    Integral,
    ClosedForm,
    FiniteRadius,
    ClassicalMc,
}

impl SweepOutput {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepOutput::Sum => "sum",
            SweepOutput::Integral => "integral",
            SweepOutput::ClosedForm => "closed_form",
            SweepOutput::FiniteRadius => "finite_radius",
            SweepOutput::ClassicalMc => "classical_mc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sum" => Some(SweepOutput::Sum),
            "integral" => Some(SweepOutput::Integral),
            "closed_form" => Some(SweepOutput::ClosedForm),
            "finite_radius" => Some(SweepOutput::FiniteRadius),
            "classical_mc" => Some(SweepOutput::ClassicalMc),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    parameter: SweepParameter,
    grid: Vec<f64>,
    outputs: Vec<SweepOutput>,
    /// Trajectories per grid point for `classical_mc`.
    pub mc_samples: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn new(
        parameter: SweepParameter,
        grid: Vec<f64>,
        outputs: Vec<SweepOutput>,
    ) -> Result<Self, ScenarioError> {
        if grid.is_empty() {
            return Err(ScenarioError::InvalidArgument("grid is empty".into()));
        }
        if grid.iter().any(|v| !v.is_finite()) {
            return Err(ScenarioError::InvalidArgument(
                "grid has non-finite values".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ScenarioError::InvalidArgument(
                "grid must be strictly increasing".into(),
            ));
        }
        let mut seen = HashSet::new();
        let outputs: Vec<SweepOutput> = outputs.into_iter().filter(|o| seen.insert(*o)).collect();
        if outputs.is_empty() {
            return Err(ScenarioError::InvalidArgument(
                "no outputs requested".into(),
            ));
        }
        Ok(SweepSpec {
            parameter,
            grid,
            outputs,
            mc_samples: 2000,
            seed: 0,
        })
    }

    pub fn parameter(&self) -> SweepParameter {
        self.parameter
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn outputs(&self) -> &[SweepOutput] {
        &self.outputs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub output: SweepOutput,
    /// Resolved scenario at this grid point, when valid.
    pub scenario: Option<WireScenario>,
    pub groups: Option<DimensionlessGroups>,
    pub sigma_k: Option<f64>,
    pub sigma: Option<f64>,
    pub channels_used: Option<usize>,
    /// `|σ_sum − σ_integral|·k/(2μ)` when both are requested and succeed.
    pub gap: Option<f64>,
    pub error: Option<String>,
}

struct Evaluation {
    sigma_k: f64,
    sigma: Option<f64>,
    channels_used: usize,
}

fn apply(base: &WireScenario, parameter: SweepParameter, value: f64) -> WireScenario {
    let mut s = *base;
    match parameter {
        SweepParameter::Lambda => s.lambda = value,
        SweepParameter::Velocity => s.velocity = value,
        SweepParameter::WireRadius => s.wire_radius = value,
        SweepParameter::Mu => s.lambda = value / (2.0 * (s.alpha * s.mass).sqrt()),
    }
    s
}

fn evaluate(
    s: &WireScenario,
    g: &DimensionlessGroups,
    output: SweepOutput,
    spec: &SweepSpec,
) -> Result<Evaluation, String> {
    let r = match output {
        SweepOutput::Sum => sigma_sum(g.mu_sq, g.k),
        SweepOutput::Integral => sigma_integral(g.mu(), g.k, DEFAULT_QUAD_POINTS),
        SweepOutput::ClosedForm => {
            sigma_closed_form(s.alpha, s.mass, s.lambda, s.velocity).map(|c| c.result)
        }
        SweepOutput::FiniteRadius => {
            sigma_finite_radius(s.wire_radius, s.alpha, s.mass, s.lambda, s.velocity)
        }
        SweepOutput::ClassicalMc => {
            let beta = effective_beta(s.wire_radius, g.energy, s.alpha, s.lambda)
                .map_err(|e| e.to_string())?;
            let est = estimate_capture(&CaptureStudy {
                beta,
                energy: g.energy,
                mass: s.mass,
                range_factor: 2.0,
                samples: spec.mc_samples,
                seed: spec.seed,
                tolerance: DEFAULT_TOLERANCE,
            })
            .map_err(|e| e.to_string())?;
            return Ok(Evaluation {
                sigma_k: g.k * est.sigma,
                sigma: Some(est.sigma),
                channels_used: 0,
            });
        }
    };
    r.map(|r| Evaluation {
        sigma_k: r.sigma_k,
        sigma: r.sigma,
        channels_used: r.channels_used,
    })
    .map_err(|e| e.to_string())
}

fn point_rows(base: &WireScenario, spec: &SweepSpec, value: f64) -> Vec<SweepRow> {
    let s = apply(base, spec.parameter, value);
    if let Err(e) = s.validate() {
        return spec
            .outputs
            .iter()
            .map(|&output| SweepRow {
                value,
                output,
                scenario: None,
                groups: None,
                sigma_k: None,
                sigma: None,
                channels_used: None,
                gap: None,
                error: Some(e.to_string()),
            })
            .collect();
    }
    let g = derive_groups(&s);
    let results: Vec<Result<Evaluation, String>> = spec
        .outputs
        .iter()
        .map(|&o| evaluate(&s, &g, o, spec))
        .collect();
    let find = |want: SweepOutput| {
        spec.outputs
            .iter()
            .position(|&o| o == want)
            .and_then(|i| results[i].as_ref().ok())
            .map(|r| r.sigma_k)
    };
    let gap = match (find(SweepOutput::Sum), find(SweepOutput::Integral)) {
        (Some(a), Some(b)) => Some((a - b).abs() / (2.0 * g.mu())),
        _ => None,
    };
    spec.outputs
        .iter()
        .zip(results)
        .map(|(&output, r)| {
            let is_quantum = matches!(output, SweepOutput::Sum | SweepOutput::Integral);
            let mut row = SweepRow {
                value,
                output,
                scenario: Some(s),
                groups: Some(g),
                sigma_k: None,
                sigma: None,
                channels_used: None,
                gap: if is_quantum { gap } else { None },
                error: None,
            };
            match r {
                Ok(r) => {
                    row.sigma_k = Some(r.sigma_k);
                    row.sigma = r.sigma;
                    row.channels_used = Some(r.channels_used);
                }
                Err(e) => row.error = Some(e),
            }
            row
        })
        .collect()
}

/// Evaluates every requested output at every grid point. Rows come out in
/// grid order, and within a grid point in the order the outputs were given.
/// Failures are recorded in the row's `error` field.
pub fn run_sweep(base: &WireScenario, spec: &SweepSpec) -> Vec<SweepRow> {
    spec.grid
        .par_iter()
        .map(|&v| point_rows(base, spec, v))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}
