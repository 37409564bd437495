use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Oscillation frequency used inside the damped convolution kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DampedFrequency {
    /// `sin(ω (t - τ))` with prefactor `1/ω`.
    #[default]
    Literal,
    /// `sin(ω_d (t - τ))` with prefactor `1/ω_d`, where `ω_d = ω sqrt(1 - ξ²)` and `ξ = rate / ω`.
    Corrected,
}

impl FromStr for DampedFrequency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Self::Literal),
            "corrected" => Ok(Self::Corrected),
            other => Err(Error::usage(format!(
                "damped frequency must be `literal` or `corrected`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for DampedFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Literal => "literal",
            Self::Corrected => "corrected",
        })
    }
}

/// Linear single-degree-of-freedom oscillator, `ẍ + 2ξω ẋ + ω² x = -ä`.
///
/// Mass, stiffness and damping never appear individually; the system is
/// fully described by `omega` (ω² = K/M) and `damping_rate` (ξω = C/2M).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdofSystem {
    omega: f64,
    damping_rate: f64,
    kernel: DampedFrequency,
}

impl SdofSystem {
    pub fn new(omega: f64, damping_rate: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::domain(format!("omega must be positive, got {omega}")));
        }
        if !(damping_rate.is_finite() && damping_rate >= 0.0) {
            return Err(Error::domain(format!(
                "damping rate must be non-negative, got {damping_rate}"
            )));
        }
        Ok(Self {
            omega,
            damping_rate,
            kernel: DampedFrequency::Literal,
        })
    }

    pub fn undamped(omega: f64) -> Result<Self> {
        Self::new(omega, 0.0)
    }

    /// System whose period is `period`, using the `T = 1/ω` convention.
    pub fn from_period(period: f64, damping: DampingSpec) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::domain(format!("period must be positive, got {period}")));
        }
        let omega = 1.0 / period;
        Self::new(omega, damping.rate_for(omega)?)
    }

    pub fn with_kernel(mut self, kernel: DampedFrequency) -> Result<Self> {
        if kernel == DampedFrequency::Corrected && self.damping_ratio() >= 1.0 {
            return Err(Error::domain(format!(
                "corrected damped frequency needs damping ratio < 1, got {}",
                self.damping_ratio()
            )));
        }
        self.kernel = kernel;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn damping_rate(&self) -> f64 {
        self.damping_rate
    }

    pub fn kernel(&self) -> DampedFrequency {
        self.kernel
    }

    /// `1/ω`.
    pub fn period(&self) -> f64 {
        1.0 / self.omega
    }

    /// ξ = rate / ω.
    pub fn damping_ratio(&self) -> f64 {
        self.damping_rate / self.omega
    }

    /// Frequency inside the kernel's sine (and the inverse of its prefactor).
    pub fn kernel_frequency(&self) -> f64 {
        match self.kernel {
            DampedFrequency::Literal => self.omega,
            DampedFrequency::Corrected => {
                let xi = self.damping_ratio();
                self.omega * (1.0 - xi * xi).sqrt()
            }
        }
    }
}

/// How damping is specified when the frequency varies (e.g. across a spectrum sweep).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DampingSpec {
    /// Dimensionless ratio ξ; the rate is ξω for each ω.
    Ratio(f64),
    /// Fixed decay rate ξω in 1/s.
    Rate(f64),
}

impl DampingSpec {
    pub fn rate_for(&self, omega: f64) -> Result<f64> {
        let rate = match *self {
            DampingSpec::Ratio(xi) => {
                if !(xi.is_finite() && xi >= 0.0) {
                    return Err(Error::domain(format!("damping ratio must be non-negative, got {xi}")));
                }
                xi * omega
            }
            DampingSpec::Rate(c) => {
                if !(c.is_finite() && c >= 0.0) {
                    return Err(Error::domain(format!("damping rate must be non-negative, got {c}")));
                }
                c
            }
        };
        Ok(rate)
    }
}

impl fmt::Display for DampingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DampingSpec::Ratio(xi) => write!(f, "ratio:{xi}"),
            DampingSpec::Rate(c) => write!(f, "rate:{c}"),
        }
    }
}

impl FromStr for DampingSpec {
    type Err = Error;

    /// Parses `ratio:<ξ>` or `rate:<ξω>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::usage(format!("damping must be `ratio:<x>` or `rate:<x>`, got `{s}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::usage(format!("invalid damping value `{value}`")))?;
        match kind.trim() {
            "ratio" => Ok(DampingSpec::Ratio(value)),
            "rate" => Ok(DampingSpec::Rate(value)),
            other => Err(Error::usage(format!("unknown damping kind `{other}`"))),
        }
    }
}
