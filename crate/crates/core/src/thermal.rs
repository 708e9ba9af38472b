//! Bose–Einstein occupations and the common reservoir.

use crate::error::{Error, Result};

/// Default Ohmic slope used when none is given.
pub const DEFAULT_GAMMA: f64 = 0.01;

/// Thermal occupation `N(ω) = 1/(e^{ω/T} - 1)`, exactly 0 at `T = 0`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (omega / temperature).exp_m1()
}

/// `coth(ω/2T)` evaluated as `1 + 2N(ω)`, finite at `T = 0`.
pub fn coth_half(omega: f64, temperature: f64) -> f64 {
    1.0 + 2.0 * thermal_occupation(omega, temperature)
}

/// Reservoir temperature and Ohmic slopes `η^ν(ω) = γ^ν ω` of the bath
/// coupled to mode a and mode b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    temperature: f64,
    gamma_a: f64,
    gamma_b: f64,
}

impl Environment {
    pub fn new(temperature: f64, gamma_a: f64, gamma_b: f64) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "temperature must be >= 0 (got {temperature})"
            )));
        }
        if !(gamma_a > 0.0 && gamma_b > 0.0 && gamma_a.is_finite() && gamma_b.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "Ohmic slopes must be positive (gamma_a = {gamma_a}, gamma_b = {gamma_b})"
            )));
        }
        Ok(Self {
            temperature,
            gamma_a,
            gamma_b,
        })
    }

    /// Environment at temperature `T` with both slopes at [`DEFAULT_GAMMA`].
    pub fn at_temperature(temperature: f64) -> Result<Self> {
        Self::new(temperature, DEFAULT_GAMMA, DEFAULT_GAMMA)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn gamma_a(&self) -> f64 {
        self.gamma_a
    }

    pub fn gamma_b(&self) -> f64 {
        self.gamma_b
    }
}
