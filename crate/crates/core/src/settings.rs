use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Base of the logarithm used for every entropy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogBase {
    /// Bits.
    #[default]
    #[serde(rename = "2")]
    Two,
    /// Nats.
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    /// Converts a quantity measured in nats into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Two => nats / std::f64::consts::LN_2,
            LogBase::E => nats,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Two => "bits",
            LogBase::E => "nats",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Two => f.write_str("2"),
            LogBase::E => f.write_str("e"),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            other => Err(Error::Config(format!(
                "log base must be 2 or e, got {other:?}"
            ))),
        }
    }
}

/// Numerical knobs shared by the entropy and correlation routines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub base: LogBase,
    /// Eigenvalues above `support_threshold · λ_max` span the support.
    pub support_threshold: f64,
    /// Support containment holds when `‖(I − P_σ) P_τ‖_max` is at most this.
    pub containment_tol: f64,
    /// Largest total dimension of any operator that may be materialized.
    pub dim_cap: usize,
}

impl Settings {
    pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-9;
    pub const DEFAULT_CONTAINMENT_TOL: f64 = 1e-7;
    pub const DEFAULT_DIM_CAP: usize = 4096;

    pub fn with_base(mut self, base: LogBase) -> Self {
        self.base = base;
        self
    }

    pub fn with_dim_cap(mut self, cap: usize) -> Self {
        self.dim_cap = cap;
        self
    }

    pub(crate) fn check_cap(&self, dim: Option<usize>) -> crate::Result<usize> {
        match dim {
            Some(d) if d <= self.dim_cap => Ok(d),
            Some(d) => Err(Error::DimensionCapExceeded {
                dim: d,
                cap: self.dim_cap,
            }),
            None => Err(Error::DimensionCapExceeded {
                dim: usize::MAX,
                cap: self.dim_cap,
            }),
        }
    }
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            base: LogBase::Two,
            support_threshold: Self::DEFAULT_SUPPORT_THRESHOLD,
            containment_tol: Self::DEFAULT_CONTAINMENT_TOL,
            dim_cap: Self::DEFAULT_DIM_CAP,
        }
    }
}
