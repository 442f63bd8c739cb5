//! `wirescat`: absorption of polarizable atoms by a charged wire.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wirescat::absorption::{
    correction_decay_fit, correction_integral, sigma_closed_form, sigma_finite_radius,
    sigma_integral, sigma_sum, AbsorptionError, AbsorptionResult, DEFAULT_QUAD_POINTS,
};
use wirescat::classical::{
    effective_beta, estimate_capture, CaptureStudy, ClassicalError, DEFAULT_TOLERANCE,
};
use wirescat::extensions::{
    averaged_s, s_matrix, s_matrix_theta, Channel, ExtensionError, ExtensionPhase,
};
use wirescat::scenario::{
    derive_groups, load_scenario, run_sweep, ScenarioError, SweepOutput, SweepParameter, SweepSpec,
    WireScenario,
};
use wirescat::spectrum::{bound_spectrum, SpectrumError};

use output::{Cell, Envelope, OutputArgs};

/// Exit status 1: a computation failed or could not reach its accuracy.
/// Exit status 2: the request itself was invalid.
enum Failure {
    Numerical(String),
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Numerical(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Numerical(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<ExtensionError> for Failure {
    fn from(e: ExtensionError) -> Self {
        match e {
            ExtensionError::InvalidChannel { .. } | ExtensionError::InvalidArgument(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<SpectrumError> for Failure {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<AbsorptionError> for Failure {
    fn from(e: AbsorptionError) -> Self {
        match e {
            AbsorptionError::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<ClassicalError> for Failure {
    fn from(e: ClassicalError) -> Self {
        match e {
            ClassicalError::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "wirescat",
    version,
    about = "Absorption of polarizable atoms by a charged wire"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partial-wave S-matrix for one channel.
    Smatrix(SmatrixArgs),
    /// Absorption cross-section by one method.
    Xsection(XsectionArgs),
    /// Bound-state ladder of one self-adjoint extension.
    Spectrum(SpectrumArgs),
    /// Approach of the quantum cross-section to its classical value.
    LimitStudy(LimitArgs),
    /// Monte Carlo capture cross-section from classical trajectories.
    ClassicalMc(ClassicalArgs),
    /// Evaluate several cross-sections over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct SmatrixArgs {
    /// Imaginary-order index ν > 0.
    #[arg(long)]
    nu: f64,
    /// Extension phase γ of the standard convention.
    #[arg(long, conflicts_with_all = ["theta", "average"])]
    gamma: Option<f64>,
    /// Extension phase θ of the alternative convention; needs --k.
    #[arg(long, requires = "k", conflicts_with = "average")]
    theta: Option<f64>,
    /// Momentum for --theta.
    #[arg(long, requires = "theta")]
    k: Option<f64>,
    /// Reference scale in ln(k/M) for --theta.
    #[arg(long, default_value_t = 1.0, requires = "theta")]
    mass: f64,
    /// Average over all extensions.
    #[arg(long)]
    average: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
struct ScenarioArgs {
    /// Scenario file with `key = value` lines.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Line charge λ (overrides the file).
    #[arg(long)]
    lambda: Option<f64>,
    /// Polarizability α (overrides the file).
    #[arg(long)]
    alpha: Option<f64>,
    /// Atom mass M (overrides the file).
    #[arg(long)]
    mass: Option<f64>,
    /// Atom velocity v (overrides the file).
    #[arg(long)]
    velocity: Option<f64>,
    /// Wire radius R_w (overrides the file).
    #[arg(long)]
    wire_radius: Option<f64>,
}

impl ScenarioArgs {
    fn given(&self) -> bool {
        self.scenario.is_some()
            || self.lambda.is_some()
            || self.alpha.is_some()
            || self.mass.is_some()
            || self.velocity.is_some()
            || self.wire_radius.is_some()
    }

    fn resolve(&self) -> Result<WireScenario, Failure> {
        let file = match &self.scenario {
            Some(p) => Some(load_scenario(p)?),
            None => None,
        };
        let pick = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
            flag.or(from_file).ok_or_else(|| {
                Failure::Usage(format!(
                    "missing --{name} (or a --scenario file providing it)"
                ))
            })
        };
        let s = WireScenario::new(
            pick(self.lambda, file.map(|f| f.lambda), "lambda")?,
            pick(self.alpha, file.map(|f| f.alpha), "alpha")?,
            pick(self.mass, file.map(|f| f.mass), "mass")?,
            pick(self.velocity, file.map(|f| f.velocity), "velocity")?,
            self.wire_radius
                .or(file.map(|f| f.wire_radius))
                .unwrap_or(0.0),
        )?;
        Ok(s)
    }

    fn echo(&self, env: &mut Envelope, s: &WireScenario) {
        if let Some(p) = &self.scenario {
            env.meta("scenario_file", p.display().to_string());
        }
        env.meta("lambda", s.lambda);
        env.meta("alpha", s.alpha);
        env.meta("mass", s.mass);
        env.meta("velocity", s.velocity);
        env.meta("wire_radius", s.wire_radius);
        let g = derive_groups(s);
        env.meta("mu_sq", g.mu_sq);
        env.meta("k", g.k);
        env.meta("energy", g.energy);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Sum,
    Integral,
    Closed,
    Finite,
}

#[derive(Args, Debug)]
struct XsectionArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Coupling μ² directly, instead of a scenario (sum and integral only).
    #[arg(long, conflicts_with_all = ["scenario", "lambda", "alpha", "mass", "velocity", "wire_radius"])]
    mu_sq: Option<f64>,
    /// Momentum used with --mu-sq.
    #[arg(long, requires = "mu_sq", default_value_t = 1.0)]
    k: f64,
    /// Base Gauss–Legendre points per panel for --method integral.
    #[arg(long, default_value_t = DEFAULT_QUAD_POINTS)]
    quad_points: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    nu: f64,
    /// Extension parameter θ' in [0, 2π).
    #[arg(long)]
    theta_prime: f64,
    #[arg(long, allow_hyphen_values = true)]
    n_min: i64,
    #[arg(long, allow_hyphen_values = true)]
    n_max: i64,
    /// Mass used in the binding energy −κ²/(2M).
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Comma-separated coupling values μ.
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    mu: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = DEFAULT_QUAD_POINTS)]
    quad_points: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ClassicalArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Number of trajectories (one per impact-parameter stratum).
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative local error per integration step.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Impact parameters are drawn from [0, range_factor · ρ_max].
    #[arg(long, default_value_t = 2.0)]
    range_factor: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Parameter to vary: lambda, velocity, wire_radius or mu.
    #[arg(long, value_parser = parse_parameter)]
    parameter: SweepParameter,
    /// Comma-separated, strictly increasing grid.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    grid: Vec<f64>,
    /// Comma-separated outputs: sum, integral, closed_form, finite_radius,
    /// classical_mc.
    #[arg(long, value_delimiter = ',', value_parser = parse_output, required = true)]
    outputs: Vec<SweepOutput>,
    /// Trajectories per grid point for classical_mc.
    #[arg(long, default_value_t = 2000)]
    mc_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_parameter(s: &str) -> Result<SweepParameter, String> {
    SweepParameter::parse(s).ok_or_else(|| format!("unknown sweep parameter `{s}`"))
}

fn parse_output(s: &str) -> Result<SweepOutput, String> {
    SweepOutput::parse(s).ok_or_else(|| format!("unknown sweep output `{s}`"))
}

fn emit(env: Envelope, out: &OutputArgs) -> Result<(), Failure> {
    env.emit(out).map_err(Failure::Usage)
}

fn cmd_smatrix(a: &SmatrixArgs) -> Result<(), Failure> {
    let ch = Channel::from_nu(a.nu)?;
    let mut env = Envelope::new("smatrix", vec!["re", "im", "abs"]);
    env.meta("nu", a.nu);
    let value = if a.average {
        env.meta("mode", "average");
        averaged_s(&ch).value
    } else if let Some(gamma) = a.gamma {
        let phase = ExtensionPhase::new(gamma)?;
        env.meta("mode", "gamma");
        env.meta("gamma", phase.gamma());
        s_matrix(&ch, phase).value
    } else if let (Some(theta), Some(k)) = (a.theta, a.k) {
        env.meta("mode", "theta");
        env.meta("theta", theta);
        env.meta("k", k);
        env.meta("mass", a.mass);
        s_matrix_theta(&ch, theta, k, a.mass)?.value
    } else {
        return Err(Failure::Usage(
            "give one of --gamma, --theta with --k, or --average".into(),
        ));
    };
    env.push(vec![value.re.into(), value.im.into(), value.norm().into()]);
    emit(env, &a.out)
}

fn result_row(mu: f64, k: f64, r: &AbsorptionResult) -> Vec<Cell> {
    vec![
        mu.into(),
        k.into(),
        r.sigma_k.into(),
        r.sigma.into(),
        r.method.as_str().into(),
        r.channels_used.into(),
    ]
}

fn cmd_xsection(a: &XsectionArgs) -> Result<(), Failure> {
    let columns = vec!["mu", "k", "sigma_k", "sigma", "method", "channels_used"];
    let mut env = Envelope::new("xsection", columns);
    let (mu_sq, k, scenario) = match a.mu_sq {
        Some(mu_sq) => {
            if matches!(a.method, Method::Closed | Method::Finite) {
                return Err(Failure::Usage(
                    "--method closed and finite need scenario parameters, not --mu-sq".into(),
                ));
            }
            env.meta("mu_sq", mu_sq);
            env.meta("k", a.k);
            (mu_sq, a.k, None)
        }
        None => {
            if !a.scenario.given() {
                return Err(Failure::Usage(
                    "give --mu-sq or scenario parameters (--scenario or --lambda etc.)".into(),
                ));
            }
            let s = a.scenario.resolve()?;
            a.scenario.echo(&mut env, &s);
            let g = derive_groups(&s);
            (g.mu_sq, g.k, Some(s))
        }
    };
    env.meta("method", format!("{:?}", a.method).to_lowercase());
    let r = match (a.method, scenario) {
        (Method::Sum, _) => sigma_sum(mu_sq, k)?,
        (Method::Integral, _) => {
            env.meta("quad_points", a.quad_points);
            sigma_integral(mu_sq.sqrt(), k, a.quad_points)?
        }
        (Method::Closed, Some(s)) => {
            sigma_closed_form(s.alpha, s.mass, s.lambda, s.velocity)?.result
        }
        (Method::Finite, Some(s)) => {
            sigma_finite_radius(s.wire_radius, s.alpha, s.mass, s.lambda, s.velocity)?
        }
        _ => unreachable!("checked above"),
    };
    env.push(result_row(mu_sq.sqrt(), k, &r));
    emit(env, &a.out)
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<(), Failure> {
    let mut env = Envelope::new("spectrum", vec!["n", "kappa", "energy", "ratio"]);
    env.meta("nu", a.nu);
    env.meta("theta_prime", a.theta_prime);
    env.meta("n_min", a.n_min);
    env.meta("n_max", a.n_max);
    env.meta("mass", a.mass);
    let slice = bound_spectrum(a.nu, a.theta_prime, a.mass, a.n_min..=a.n_max)?;
    let mut prev: Option<f64> = None;
    for s in &slice.states {
        env.push(vec![
            s.n.into(),
            s.kappa.into(),
            s.energy.into(),
            prev.map(|p| s.kappa / p).into(),
        ]);
        prev = Some(s.kappa);
    }
    env.summary("ladder_ratio", slice.ladder_ratio());
    emit(env, &a.out)
}

fn cmd_limit_study(a: &LimitArgs) -> Result<(), Failure> {
    let columns = vec![
        "mu",
        "sigma_k_sum",
        "sigma_k_integral",
        "two_mu",
        "correction",
        "ratio",
        "gap",
    ];
    let mut env = Envelope::new("limit-study", columns);
    env.meta(
        "mu",
        a.mu.iter()
            .map(|m| format!("{m}"))
            .collect::<Vec<_>>()
            .join(";"),
    );
    env.meta("k", a.k);
    env.meta("quad_points", a.quad_points);
    for &mu in &a.mu {
        let sum = sigma_sum(mu * mu, a.k)?;
        let integral = sigma_integral(mu, a.k, a.quad_points)?;
        let corr = correction_integral(mu)?;
        env.push(vec![
            mu.into(),
            sum.sigma_k.into(),
            integral.sigma_k.into(),
            (2.0 * mu).into(),
            corr.into(),
            (integral.sigma_k / (2.0 * mu)).into(),
            ((sum.sigma_k - integral.sigma_k).abs() / (2.0 * mu)).into(),
        ]);
    }
    if a.mu.len() >= 2 {
        let fit = correction_decay_fit(&a.mu)?;
        env.summary("decay_exponent", fit.exponent);
        env.summary("decay_prefactor", fit.prefactor);
    }
    emit(env, &a.out)
}

fn cmd_classical_mc(a: &ClassicalArgs) -> Result<(), Failure> {
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let s = a.scenario.resolve()?;
    let g = derive_groups(&s);
    let columns = vec!["impact_parameter", "captured", "min_radius", "steps"];
    let mut env = Envelope::new("classical-mc", columns);
    a.scenario.echo(&mut env, &s);
    env.meta("samples", a.samples);
    env.meta("seed", a.seed);
    env.meta("tolerance", a.tolerance);
    env.meta("range_factor", a.range_factor);
    let beta = effective_beta(s.wire_radius, g.energy, s.alpha, s.lambda)?;
    env.meta("beta", beta);
    let est = estimate_capture(&CaptureStudy {
        beta,
        energy: g.energy,
        mass: s.mass,
        range_factor: a.range_factor,
        samples: a.samples,
        seed: a.seed,
        tolerance: a.tolerance,
    })?;
    for t in &est.samples {
        env.push(vec![
            t.impact_parameter.into(),
            t.outcome.captured.into(),
            t.outcome.min_radius_reached.into(),
            t.outcome.steps.into(),
        ]);
    }
    let exact = sigma_finite_radius(s.wire_radius, s.alpha, s.mass, s.lambda, s.velocity)?;
    let exact_sigma = exact.sigma.unwrap_or(f64::NAN);
    env.summary("rho_max", est.rho_max);
    env.summary("captured", est.captured);
    env.summary("sigma", est.sigma);
    env.summary("sigma_k", g.k * est.sigma);
    env.summary("boundary", est.boundary);
    env.summary("sigma_boundary", 2.0 * est.boundary);
    env.summary("sigma_finite_radius", exact_sigma);
    env.summary(
        "relative_error",
        (est.sigma - exact_sigma).abs() / exact_sigma,
    );
    env.summary("misclassified", est.misclassified);
    emit(env, &a.out)
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), Failure> {
    let s = a.scenario.resolve()?;
    let mut spec = SweepSpec::new(a.parameter, a.grid.clone(), a.outputs.clone())?;
    spec.mc_samples = a.mc_samples;
    spec.seed = a.seed;
    let columns = vec![
        "value",
        "output",
        "mu_sq",
        "k",
        "energy",
        "k_rw",
        "sigma_k",
        "sigma",
        "channels_used",
        "gap",
        "error",
    ];
    let mut env = Envelope::new("sweep", columns);
    a.scenario.echo(&mut env, &s);
    env.meta("parameter", spec.parameter().as_str());
    env.meta(
        "grid",
        spec.grid()
            .iter()
            .map(|v| format!("{v}"))
            .collect::<Vec<_>>()
            .join(";"),
    );
    env.meta(
        "outputs",
        spec.outputs()
            .iter()
            .map(|o| o.as_str())
            .collect::<Vec<_>>()
            .join(";"),
    );
    env.meta("mc_samples", a.mc_samples);
    env.meta("seed", a.seed);
    for r in run_sweep(&s, &spec) {
        let g = r.groups;
        env.push(vec![
            r.value.into(),
            r.output.as_str().into(),
            g.map(|g| g.mu_sq).into(),
            g.map(|g| g.k).into(),
            g.map(|g| g.energy).into(),
            r.scenario.zip(g).map(|(s, g)| g.k * s.wire_radius).into(),
            r.sigma_k.into(),
            r.sigma.into(),
            r.channels_used.into(),
            r.gap.into(),
            r.error.into(),
        ]);
    }
    emit(env, &a.out)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Smatrix(a) => cmd_smatrix(a),
        Command::Xsection(a) => cmd_xsection(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::LimitStudy(a) => cmd_limit_study(a),
        Command::ClassicalMc(a) => cmd_classical_mc(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
