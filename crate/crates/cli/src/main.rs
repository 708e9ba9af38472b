use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hopfield_core::basis::diagonalize;
use hopfield_core::dynamics::{
    auto_step, collective_rates, steady_state_second_moments, trajectory, SecondMoments,
    TRAJECTORY_HEADER,
};
use hopfield_core::format::format_g;
use hopfield_core::sweep::{
    evaluate_row, evaluate_state, run_sweep, scenario, write_csv, Axis, PointSpec, SweepSpec,
    SCENARIOS,
};
use hopfield_core::verify::verify;

mod config;

use config::FileConfig;

#[derive(Parser)]
#[command(
    name = "hopfield",
    version,
    about = "Correlations of two ultrastrongly coupled bosonic modes"
)]
struct Cli {
    /// TOML file with default values for any flag (flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write results here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polariton frequencies and Bogoliubov coefficients
    Diagonalize(ModelArgs),
    /// Correlation measures of a single state as one CSV row
    Point {
        #[command(flatten)]
        model: ModelArgs,
        /// Also print the bare-basis covariance matrix
        #[arg(long)]
        dump_cov: bool,
    },
    /// Grid evaluation over one or two parameters
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Preset name (see --list-scenarios)
        #[arg(long)]
        scenario: Option<String>,
        /// name:start:stop:count with name in {lambda, wa, wb, T}; at most twice
        #[arg(long)]
        axis: Vec<String>,
        /// Worker threads (defaults to available cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Print the preset names and exit
        #[arg(long)]
        list_scenarios: bool,
    },
    /// Polariton second moments relaxing from vacuum
    Dynamics {
        #[command(flatten)]
        model: ModelArgs,
        /// Integration time (defaults to 50 / slowest relaxation rate)
        #[arg(long)]
        t_final: Option<f64>,
        /// RK4 step (defaults to 0.05 / max(omega_U, rates))
        #[arg(long)]
        dt: Option<f64>,
        /// Emit every n-th step (defaults to about 200 rows)
        #[arg(long)]
        every: Option<usize>,
    },
    /// Run the numerical self-checks
    Verify {
        /// Worker threads for the determinism check
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args, Default)]
struct ModelArgs {
    /// Cavity frequency
    #[arg(long)]
    wa: Option<f64>,
    /// Matter frequency [default: 1]
    #[arg(long)]
    wb: Option<f64>,
    /// Coupling strength
    #[arg(long)]
    lambda: Option<f64>,
    /// Rotating (mixing) coupling, overrides --lambda
    #[arg(long)]
    lambda1: Option<f64>,
    /// Counter-rotating (squeezing) coupling, overrides --lambda
    #[arg(long)]
    lambda2: Option<f64>,
    /// auto (lambda^2/wb), zero, or a value
    #[arg(long)]
    diamag: Option<String>,
    /// full, squeezing or mixing
    #[arg(long)]
    coupling: Option<String>,
    /// Bath temperature
    #[arg(long)]
    temp: Option<f64>,
    /// Cavity coupling slope to the bath
    #[arg(long)]
    gamma_a: Option<f64>,
    /// Matter coupling slope to the bath
    #[arg(long)]
    gamma_b: Option<f64>,
    /// ground or thermal
    #[arg(long)]
    state: Option<String>,
}

impl ModelArgs {
    /// Applies config values and then flags on top of `base`.
    fn apply(&self, cfg: &FileConfig, mut base: PointSpec) -> Result<PointSpec> {
        if let Some(v) = self.wa.or(cfg.wa) {
            base.wa = v;
        }
        if let Some(v) = self.wb.or(cfg.wb) {
            base.wb = v;
        }
        if let Some(v) = self.lambda.or(cfg.lambda) {
            base.lambda = v;
        }
        if let Some(v) = self.lambda1.or(cfg.lambda1) {
            base.lambda1 = Some(v);
        }
        if let Some(v) = self.lambda2.or(cfg.lambda2) {
            base.lambda2 = Some(v);
        }
        if let Some(v) = self
            .diamag
            .clone()
            .or_else(|| cfg.diamag.as_ref().map(|d| d.as_flag()))
        {
            base.diamag = v.parse()?;
        }
        if let Some(v) = self.coupling.as_ref().or(cfg.coupling.as_ref()) {
            base.coupling = v.parse()?;
        }
        if let Some(v) = self.temp.or(cfg.temp) {
            base.temperature = v;
        }
        if let Some(v) = self.gamma_a.or(cfg.gamma_a) {
            base.gamma_a = v;
        }
        if let Some(v) = self.gamma_b.or(cfg.gamma_b) {
            base.gamma_b = v;
        }
        if let Some(v) = self.state.as_ref().or(cfg.state.as_ref()) {
            base.state = v.parse()?;
        }
        Ok(base)
    }
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn coefficients(c: [f64; 4]) -> String {
    c.map(format_g).join(",")
}

fn cmd_diagonalize(spec: &PointSpec, out: &mut dyn Write) -> Result<()> {
    let basis = diagonalize(&spec.params()?)?;
    writeln!(out, "omega_U={}", format_g(basis.omega_upper()))?;
    writeln!(out, "omega_L={}", format_g(basis.omega_lower()))?;
    writeln!(out, "gap={}", format_g(basis.gap()))?;
    match basis.theta() {
        Some(t) => writeln!(out, "theta={}", format_g(t))?,
        None => writeln!(out, "theta=none")?,
    }
    writeln!(out, "upper={}", coefficients(basis.coeffs_upper()))?;
    writeln!(out, "lower={}", coefficients(basis.coeffs_lower()))?;
    Ok(())
}

fn cmd_point(spec: &PointSpec, dump_cov: bool, out: &mut dyn Write) -> Result<()> {
    let row = evaluate_row(spec);
    write_csv(std::slice::from_ref(&row), &mut *out)?;
    if !row.stable() {
        eprintln!("warning: point is unstable or invalid; measures left empty");
    } else if dump_cov {
        let (_, gamma) = evaluate_state(&spec.params()?, &spec.environment()?, spec.state)?;
        writeln!(out)?;
        write!(out, "{gamma}")?;
    }
    Ok(())
}

fn cmd_dynamics(
    spec: &PointSpec,
    t_final: Option<f64>,
    dt: Option<f64>,
    every: Option<usize>,
    out: &mut dyn Write,
) -> Result<()> {
    let basis = diagonalize(&spec.params()?)?;
    let rates = collective_rates(&basis, &spec.environment()?);
    let t_final = match t_final {
        Some(t) => t,
        None => {
            steady_state_second_moments(&rates)?;
            50.0 / rates.slowest_relaxation()
        }
    };
    let dt = dt.unwrap_or_else(|| auto_step(&rates, &basis));
    let every = every.unwrap_or_else(|| ((t_final / dt / 200.0).ceil() as usize).max(1));
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for (t, s) in trajectory(&SecondMoments::vacuum(), &rates, &basis, t_final, dt, every)? {
        let fields = [
            t, s.occ_u, s.occ_l, s.sq_u.re, s.sq_u.im, s.sq_l.re, s.sq_l.im, s.cross.re, s.cross.im,
        ]
        .map(format_g);
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

fn sweep_spec(
    model: &ModelArgs,
    cfg: &FileConfig,
    name: Option<&String>,
    axes: &[String],
) -> Result<SweepSpec> {
    let name = name
        .or(cfg.scenario.as_ref())
        .map_or("custom", String::as_str);
    let mut spec = scenario(name)?;
    spec.base = model.apply(cfg, spec.base)?;
    let axes = if axes.is_empty() {
        cfg.axis.clone().unwrap_or_default()
    } else {
        axes.to_vec()
    };
    if axes.len() > 2 {
        bail!("--axis may be given at most twice");
    }
    if !axes.is_empty() {
        spec.axes = axes
            .iter()
            .map(|a| a.parse::<Axis>())
            .collect::<Result<_, _>>()?;
    }
    spec.validate()?;
    Ok(spec)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let output = cli
        .output
        .clone()
        .or_else(|| cfg.output.clone().map(PathBuf::from));
    let mut out = open_output(output.as_ref())?;
    let code = match &cli.command {
        Command::Diagonalize(model) => {
            cmd_diagonalize(&model.apply(&cfg, PointSpec::default())?, &mut out)?;
            ExitCode::SUCCESS
        }
        Command::Point { model, dump_cov } => {
            let dump = *dump_cov || cfg.dump_cov.unwrap_or(false);
            cmd_point(&model.apply(&cfg, PointSpec::default())?, dump, &mut out)?;
            ExitCode::SUCCESS
        }
        Command::Sweep {
            model,
            scenario,
            axis,
            jobs,
            list_scenarios,
        } => {
            if *list_scenarios {
                for (name, description) in SCENARIOS {
                    writeln!(out, "{name:<8} {description}")?;
                }
            } else {
                let spec = sweep_spec(model, &cfg, scenario.as_ref(), axis)?;
                let jobs = jobs.or(cfg.jobs).unwrap_or_else(default_jobs);
                write_csv(&run_sweep(&spec, jobs)?, &mut out)?;
            }
            ExitCode::SUCCESS
        }
        Command::Dynamics {
            model,
            t_final,
            dt,
            every,
        } => {
            let spec = model.apply(&cfg, PointSpec::default())?;
            cmd_dynamics(
                &spec,
                t_final.or(cfg.t_final),
                dt.or(cfg.dt),
                every.or(cfg.every),
                &mut out,
            )?;
            ExitCode::SUCCESS
        }
        Command::Verify { jobs } => {
            let report = verify(jobs.or(cfg.jobs).unwrap_or_else(default_jobs));
            write!(out, "{report}")?;
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
