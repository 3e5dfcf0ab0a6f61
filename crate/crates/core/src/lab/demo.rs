use std::str::FromStr;

use super::ReportRecord;
use crate::correlations::gap_report;
use crate::states::{ghz, product_state, random_mixed, MultipartiteState};
use crate::{Error, Result, Settings};

/// Built-in demonstration states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemoName {
    /// `GHZ_3`: `J_3` and `J̃_3` are infinite while `I_3 = 3` bits.
    Ghz,
    /// Three independent copies of one mixed qubit: every quantity vanishes.
    /// (With different single-party marginals `J_3` is positive, since it
    /// pairs subsystems by position.)
    Product,
    /// A Bell pair: at `n = 2` everything coincides at 2 bits.
    Bell,
    /// A full-rank random three-qubit state (seed 42) with a finite `J̃_3 ≠ I_3`.
    Mixed,
}

impl DemoName {
    pub const ALL: [DemoName; 4] = [
        DemoName::Ghz,
        DemoName::Product,
        DemoName::Bell,
        DemoName::Mixed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DemoName::Ghz => "ghz",
            DemoName::Product => "product",
            DemoName::Bell => "bell",
            DemoName::Mixed => "mixed",
        }
    }

    pub fn state(self) -> Result<MultipartiteState> {
        match self {
            DemoName::Ghz => ghz(3, 2),
            DemoName::Product => {
                let qubit = random_mixed(vec![2], 2, 100)?;
                product_state(&[qubit.clone(), qubit.clone(), qubit])
            }
            DemoName::Bell => ghz(2, 2),
            DemoName::Mixed => random_mixed(vec![2, 2, 2], 8, 42),
        }
    }
}

impl FromStr for DemoName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DemoName::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::UnknownDemo(s.to_string()))
    }
}

pub fn demo(name: &str, settings: &Settings) -> Result<ReportRecord> {
    let which: DemoName = name.parse()?;
    let report = gap_report(&which.state()?, settings)?;
    Ok(ReportRecord::new(which.as_str(), report))
}
