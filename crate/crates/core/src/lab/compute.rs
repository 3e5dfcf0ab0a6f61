use std::path::Path;
use std::str::FromStr;

use super::ReportRecord;
use crate::correlations::{
    cross_term, dtc_relent_sum, dtc_relent_tensor, dual_total_correlation, gap_report, j_n,
    jtilde_n, total_correlation,
};
use crate::entropy::ExtendedReal;
use crate::states::{read_state, MultipartiteState};
use crate::{Error, LogBase, Result, Settings};

/// A quantity selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    DualTotalCorrelation,
    TotalCorrelation,
    RelentSum,
    RelentTensor,
    J,
    Jtilde,
    Cross(usize, usize),
    Report,
}

const QUANTITIES: &str = "I, T, eq3, eq4, J, Jtilde, cross:i,j, report";

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let q = match s {
            "I" => Quantity::DualTotalCorrelation,
            "T" => Quantity::TotalCorrelation,
            "eq3" => Quantity::RelentSum,
            "eq4" => Quantity::RelentTensor,
            "J" => Quantity::J,
            "Jtilde" => Quantity::Jtilde,
            "report" => Quantity::Report,
            other => {
                let pair = other.strip_prefix("cross:").and_then(|rest| {
                    let (i, j) = rest.split_once(',')?;
                    Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
                });
                let Some((i, j)) = pair else {
                    return Err(Error::Config(format!(
                        "unknown quantity {other:?} ({QUANTITIES})"
                    )));
                };
                Quantity::Cross(i, j)
            }
        };
        Ok(q)
    }
}

#[derive(Clone, Debug)]
pub enum Computed {
    Scalar { value: ExtendedReal, base: LogBase },
    Report(Box<ReportRecord>),
}

impl Computed {
    /// The line printed by the CLI.
    pub fn render(&self) -> String {
        match self {
            Computed::Scalar { value, base } => format_scalar(*value, *base),
            Computed::Report(r) => r.render(),
        }
    }
}

/// `"3.000000000 bits"`, or `"inf (support violation)"`.
pub fn format_scalar(value: ExtendedReal, base: LogBase) -> String {
    match value {
        ExtendedReal::Finite(x) => format!("{x:.9} {}", base.unit()),
        ExtendedReal::PositiveInfinity => "inf (support violation)".to_string(),
    }
}

pub fn compute_state(
    state: &MultipartiteState,
    quantity: Quantity,
    settings: &Settings,
) -> Result<Computed> {
    let value = match quantity {
        Quantity::DualTotalCorrelation => {
            ExtendedReal::Finite(dual_total_correlation(state, settings)?.value)
        }
        Quantity::TotalCorrelation => total_correlation(state, settings)?,
        Quantity::RelentSum => dtc_relent_sum(state, settings)?,
        Quantity::RelentTensor => dtc_relent_tensor(state, settings)?,
        Quantity::J => j_n(state, settings)?,
        Quantity::Jtilde => jtilde_n(state, settings)?,
        Quantity::Cross(i, j) => cross_term(state, (i, j), settings)?,
        Quantity::Report => {
            let report = gap_report(state, settings)?;
            return Ok(Computed::Report(Box::new(ReportRecord::new(
                "state", report,
            ))));
        }
    };
    Ok(Computed::Scalar {
        value,
        base: settings.base,
    })
}

/// Reads a state file and evaluates `quantity` on it.
pub fn compute(
    path: impl AsRef<Path>,
    quantity: Quantity,
    settings: &Settings,
) -> Result<Computed> {
    let path = path.as_ref();
    let state = read_state(path)?;
    let mut out = compute_state(&state, quantity, settings)?;
    if let Computed::Report(r) = &mut out {
        r.name = path.display().to_string();
    }
    Ok(out)
}

/// Process exit status for an error: 3 for the dimension cap, 2 for bad
/// input, 1 for anything else.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::DimensionCapExceeded { .. } => 3,
        e if e.is_validation() => 2,
        Error::Io(_)
        | Error::Json(_)
        | Error::Format(_)
        | Error::Config(_)
        | Error::UnknownDemo(_) => 2,
        _ => 1,
    }
}
