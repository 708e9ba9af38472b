//! Single-point evaluation and parameter sweeps with CSV output.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::basis::{normal_modes, PolaritonBasis};
use crate::correlations::CorrelationReport;
use crate::covariance::{
    ground_state_covariance_generic, thermal_covariance_generic, CovarianceMatrix,
};
use crate::error::{Error, Result};
use crate::format::format_g;
use crate::model::{build_dynamical_matrix, ModelParams};
use crate::thermal::{Environment, DEFAULT_GAMMA};

pub const CSV_HEADER: &str =
    "lambda,wa,wb,T,omega_U,omega_L,E_N,G_ab,G_ba,mu_a,mu_b,mu_ab,N_a,N_b,class,stable";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Ground,
    Thermal,
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground" => Ok(StateKind::Ground),
            "thermal" => Ok(StateKind::Thermal),
            other => Err(Error::Parse(format!(
                "unknown state {other:?} (expected ground or thermal)"
            ))),
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Ground => "ground",
            StateKind::Thermal => "thermal",
        })
    }
}

/// How the diamagnetic coefficient is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiamagMode {
    /// `D = λ²/ω_b` with `λ = max(λ₁, λ₂)`.
    Auto,
    Zero,
    Value(f64),
}

impl FromStr for DiamagMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(DiamagMode::Auto),
            "zero" => Ok(DiamagMode::Zero),
            v => v.parse::<f64>().map(DiamagMode::Value).map_err(|_| {
                Error::Parse(format!("diamag must be auto, zero or a number (got {v:?})"))
            }),
        }
    }
}

impl fmt::Display for DiamagMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiamagMode::Auto => f.write_str("auto"),
            DiamagMode::Zero => f.write_str("zero"),
            DiamagMode::Value(v) => write!(f, "{v}"),
        }
    }
}

/// Which coupling terms a scalar `λ` switches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    Full,
    SqueezingOnly,
    MixingOnly,
}

impl FromStr for CouplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(CouplingKind::Full),
            "squeezing" => Ok(CouplingKind::SqueezingOnly),
            "mixing" => Ok(CouplingKind::MixingOnly),
            other => Err(Error::Parse(format!(
                "unknown coupling {other:?} (expected full, squeezing or mixing)"
            ))),
        }
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingKind::Full => "full",
            CouplingKind::SqueezingOnly => "squeezing",
            CouplingKind::MixingOnly => "mixing",
        })
    }
}

/// Everything needed to evaluate one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub wa: f64,
    pub wb: f64,
    pub lambda: f64,
    /// Explicit mixing coupling, overriding `lambda` and `coupling`.
    pub lambda1: Option<f64>,
    /// Explicit squeezing coupling, overriding `lambda` and `coupling`.
    pub lambda2: Option<f64>,
    pub coupling: CouplingKind,
    pub diamag: DiamagMode,
    pub temperature: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub state: StateKind,
}

impl Default for PointSpec {
    fn default() -> Self {
        Self {
            wa: 1.0,
            wb: 1.0,
            lambda: 0.0,
            lambda1: None,
            lambda2: None,
            coupling: CouplingKind::Full,
            diamag: DiamagMode::Auto,
            temperature: 0.0,
            gamma_a: DEFAULT_GAMMA,
            gamma_b: DEFAULT_GAMMA,
            state: StateKind::Thermal,
        }
    }
}

impl PointSpec {
    pub fn couplings(&self) -> (f64, f64) {
        let (l1, l2) = match self.coupling {
            CouplingKind::Full => (self.lambda, self.lambda),
            CouplingKind::SqueezingOnly => (0.0, self.lambda),
            CouplingKind::MixingOnly => (self.lambda, 0.0),
        };
        (self.lambda1.unwrap_or(l1), self.lambda2.unwrap_or(l2))
    }

    pub fn params(&self) -> Result<ModelParams> {
        let (l1, l2) = self.couplings();
        let d = match self.diamag {
            DiamagMode::Auto => l1.max(l2).powi(2) / self.wb,
            DiamagMode::Zero => 0.0,
            DiamagMode::Value(v) => v,
        };
        ModelParams::new(self.wa, self.wb, l1, l2, d)
    }

    pub fn environment(&self) -> Result<Environment> {
        Environment::new(self.temperature, self.gamma_a, self.gamma_b)
    }

    fn set(&mut self, axis: AxisName, value: f64) {
        match axis {
            AxisName::Lambda => self.lambda = value,
            AxisName::Wa => self.wa = value,
            AxisName::Wb => self.wb = value,
            AxisName::Temperature => self.temperature = value,
        }
    }
}

/// Normal modes and bare-basis covariance of one point.
pub fn evaluate_state(
    params: &ModelParams,
    env: &Environment,
    state: StateKind,
) -> Result<(PolaritonBasis, CovarianceMatrix)> {
    let basis = normal_modes(&build_dynamical_matrix(params))?;
    let gamma = match state {
        StateKind::Ground => ground_state_covariance_generic(&basis),
        StateKind::Thermal => thermal_covariance_generic(&basis, env.temperature()),
    };
    Ok((basis, gamma))
}

/// Diagonalize, build the state and evaluate every correlation measure.
/// The ground state ignores `env`.
pub fn run_point(
    params: &ModelParams,
    env: &Environment,
    state: StateKind,
) -> Result<CorrelationReport> {
    let (_, gamma) = evaluate_state(params, env, state)?;
    CorrelationReport::from_covariance(&gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisName {
    Lambda,
    Wa,
    Wb,
    Temperature,
}

impl FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(AxisName::Lambda),
            "wa" => Ok(AxisName::Wa),
            "wb" => Ok(AxisName::Wb),
            "T" | "temp" => Ok(AxisName::Temperature),
            other => Err(Error::Parse(format!(
                "unknown axis {other:?} (expected lambda, wa, wb or T)"
            ))),
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxisName::Lambda => "lambda",
            AxisName::Wa => "wa",
            AxisName::Wb => "wb",
            AxisName::Temperature => "T",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: AxisName,
    pub values: Vec<f64>,
}

impl Axis {
    /// `count ≥ 2` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(name: AxisName, start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParams(format!(
                "axis {name} needs count >= 2 (got {count})"
            )));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "axis {name} has non-finite bounds"
            )));
        }
        let step = (stop - start) / (count - 1) as f64;
        let values = (0..count)
            .map(|i| {
                if i == count - 1 {
                    stop
                } else {
                    start + step * i as f64
                }
            })
            .collect();
        Ok(Self { name, values })
    }

    pub fn values(name: AxisName, values: &[f64]) -> Self {
        Self {
            name,
            values: values.to_vec(),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `name:start:stop:count`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, start, stop, count] = parts[..] else {
            return Err(Error::Parse(format!(
                "axis must be name:start:stop:count (got {s:?})"
            )));
        };
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|e| Error::Parse(format!("axis bound {t:?}: {e}")))
        };
        let count = count
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("axis count {count:?}: {e}")))?;
        Axis::linspace(name.parse()?, num(start)?, num(stop)?, count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scenario: String,
    pub base: PointSpec,
    pub axes: Vec<Axis>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidParams(format!(
                "a sweep needs one or two axes (got {})",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::InvalidParams(format!(
                "axis {} given twice",
                self.axes[0].name
            )));
        }
        Ok(())
    }

    /// Grid points in row-major order, the first axis varying slowest.
    pub fn points(&self) -> Vec<PointSpec> {
        let mut out = vec![self.base];
        for axis in &self.axes {
            out = out
                .iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |&v| {
                        let mut q = *p;
                        q.set(axis.name, v);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

/// Named presets with their fixed parameters. Axis extents are best-effort
/// ranges and can be replaced with `--axis`.
pub const SCENARIOS: &[(&str, &str)] = &[
    (
        "fig2a",
        "ground-state E_N vs lambda for wa in {0.5, 1, 2}, D = lambda^2/wb",
    ),
    (
        "fig2b",
        "ground-state steering vs lambda for wa in {0.5, 1, 2}, D = lambda^2/wb",
    ),
    (
        "fig2c",
        "ground state with squeezing coupling only, D = 0, wa = 1",
    ),
    (
        "fig2d",
        "ground state with mixing coupling only, D = 0, wa = 1",
    ),
    ("fig3a", "thermal E_N over (wa, lambda) at T = 0.15"),
    ("fig3b", "thermal E_N over (T, lambda) at wa = 1"),
    ("fig4", "thermal steering over (wa, lambda) at T = 0.15"),
    ("fig4cd", "thermal steering over (T, lambda) at wa = 1"),
    (
        "fig5",
        "resonant thermal state vs lambda at T = 0.25, D = lambda^2/wb",
    ),
    (
        "fig5cd",
        "resonant thermal state vs lambda at T = 0.25, D = 0",
    ),
    ("fig6", "thermal state vs wa at lambda = 0.25, T = 0.2"),
    ("fig6c", "thermal state vs T at lambda = 0.25, wa = 0.1"),
    ("fig6d", "thermal state vs T at lambda = 0.25, wa = 5"),
    (
        "fig8",
        "off-resonant thermal state vs lambda at wa = 2, T = 0.25, D = 0",
    ),
    ("custom", "base point from flags, axes from --axis"),
];

fn lin(name: AxisName, start: f64, stop: f64, count: usize) -> Axis {
    Axis::linspace(name, start, stop, count).expect("preset axes are valid")
}

/// Looks up a preset by name (`fig6a` and `fig6ab` alias `fig6`).
pub fn scenario(name: &str) -> Result<SweepSpec> {
    let thermal = |t: f64| PointSpec {
        temperature: t,
        state: StateKind::Thermal,
        ..PointSpec::default()
    };
    let ground = PointSpec {
        state: StateKind::Ground,
        ..PointSpec::default()
    };
    let lambda_axis = lin(AxisName::Lambda, 0.01, 1.2, 120);
    let (base, axes) = match name {
        "fig2a" | "fig2b" => (
            ground,
            vec![Axis::values(AxisName::Wa, &[0.5, 1.0, 2.0]), lambda_axis],
        ),
        "fig2c" => (
            PointSpec {
                coupling: CouplingKind::SqueezingOnly,
                diamag: DiamagMode::Zero,
                ..ground
            },
            vec![lambda_axis],
        ),
        "fig2d" => (
            PointSpec {
                coupling: CouplingKind::MixingOnly,
                diamag: DiamagMode::Zero,
                ..ground
            },
            vec![lambda_axis],
        ),
        "fig3a" | "fig4" => (
            thermal(0.15),
            vec![
                lin(AxisName::Wa, 0.1, 2.0, 40),
                lin(AxisName::Lambda, 0.01, 1.2, 40),
            ],
        ),
        "fig3b" | "fig4cd" => (
            thermal(0.15),
            vec![
                lin(AxisName::Temperature, 0.01, 1.0, 40),
                lin(AxisName::Lambda, 0.01, 1.2, 40),
            ],
        ),
        "fig5" => (thermal(0.25), vec![lambda_axis]),
        "fig5cd" => (
            PointSpec {
                diamag: DiamagMode::Zero,
                ..thermal(0.25)
            },
            vec![lin(AxisName::Lambda, 0.01, 0.499, 120)],
        ),
        "fig6" | "fig6a" | "fig6ab" => (
            PointSpec {
                lambda: 0.25,
                ..thermal(0.2)
            },
            vec![lin(AxisName::Wa, 0.05, 5.0, 100)],
        ),
        "fig6c" | "fig6d" => (
            PointSpec {
                lambda: 0.25,
                wa: if name == "fig6c" { 0.1 } else { 5.0 },
                ..thermal(0.2)
            },
            vec![lin(AxisName::Temperature, 0.01, 1.0, 100)],
        ),
        "fig8" => (
            PointSpec {
                wa: 2.0,
                diamag: DiamagMode::Zero,
                ..thermal(0.25)
            },
            vec![lin(AxisName::Lambda, 0.01, 0.7, 70)],
        ),
        "custom" => (PointSpec::default(), Vec::new()),
        other => return Err(Error::InvalidParams(format!("unknown scenario {other:?}"))),
    };
    Ok(SweepSpec {
        scenario: name.to_string(),
        base,
        axes,
    })
}

/// One CSV row; `report` is `None` for unstable or invalid points.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub lambda: f64,
    pub wa: f64,
    pub wb: f64,
    pub temperature: f64,
    pub frequencies: Option<(f64, f64)>,
    pub report: Option<CorrelationReport>,
}

impl ResultRow {
    pub fn stable(&self) -> bool {
        self.report.is_some()
    }

    pub fn to_csv(&self) -> String {
        let mut fields = vec![
            format_g(self.lambda),
            format_g(self.wa),
            format_g(self.wb),
            format_g(self.temperature),
        ];
        match (self.frequencies, &self.report) {
            (Some((wu, wl)), Some(r)) => {
                fields.extend(
                    [
                        wu, wl, r.e_n, r.g_ab, r.g_ba, r.mu_a, r.mu_b, r.mu_ab, r.n_a, r.n_b,
                    ]
                    .map(format_g),
                );
                fields.push(r.classification.to_string());
                fields.push("true".into());
            }
            _ => {
                fields.extend(std::iter::repeat_n(String::new(), 11));
                fields.push("false".into());
            }
        }
        fields.join(",")
    }
}

pub fn evaluate_row(point: &PointSpec) -> ResultRow {
    let (l1, l2) = point.couplings();
    let mut row = ResultRow {
        lambda: l1.max(l2),
        wa: point.wa,
        wb: point.wb,
        temperature: point.temperature,
        frequencies: None,
        report: None,
    };
    let outcome = point.params().and_then(|p| {
        let env = point.environment()?;
        let (basis, gamma) = evaluate_state(&p, &env, point.state)?;
        Ok((
            (basis.omega_upper(), basis.omega_lower()),
            CorrelationReport::from_covariance(&gamma)?,
        ))
    });
    if let Ok((freqs, report)) = outcome {
        row.frequencies = Some(freqs);
        row.report = Some(report);
    }
    row
}

/// Evaluates every grid point on `jobs` worker threads; rows come back in
/// grid order regardless of `jobs`.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let points = spec.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    Ok(pool.install(|| points.par_iter().map(evaluate_row).collect()))
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    Ok(())
}

pub fn csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV is UTF-8")
}
