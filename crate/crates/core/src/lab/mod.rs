//! Demonstrations, seeded Monte Carlo sweeps and machine-readable reports.
//!
//! Reports are JSON lines: one [`ReportRecord`] per sample followed by a
//! final `{"summary": …}` object. `+∞` is written as the string `"inf"` next
//! to an explicit `"infinite": true` flag, never as a sentinel number.

mod compute;
mod demo;

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

pub use compute::{compute, compute_state, exit_code, format_scalar, Computed, Quantity};
pub use demo::{demo, DemoName};

use crate::correlations::{gap_report, Gap, GapReport, Outcome};
use crate::states::{random_mixed, random_pure, MultipartiteState};
use crate::{Error, Result, Settings};

/// Random-state family sampled by a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    Pure,
    FullRank,
    Rank(usize),
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(Ensemble::Pure),
            "full-rank" | "full" => Ok(Ensemble::FullRank),
            other => other
                .strip_prefix("rank-")
                .or_else(|| other.strip_prefix("rank:"))
                .and_then(|r| r.parse().ok())
                .filter(|&r: &usize| r >= 1)
                .map(Ensemble::Rank)
                .ok_or_else(|| {
                    Error::Config(format!(
                        "unknown ensemble {other:?} (pure, full-rank, rank-R)"
                    ))
                }),
        }
    }
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ensemble::Pure => f.write_str("pure"),
            Ensemble::FullRank => f.write_str("full-rank"),
            Ensemble::Rank(r) => write!(f, "rank-{r}"),
        }
    }
}

impl Serialize for Ensemble {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    /// Local dimensions; the number of parties is `dims.len()`.
    pub dims: Vec<usize>,
    pub ensemble: Ensemble,
    pub samples: usize,
    pub seed: u64,
    pub settings: Settings,
    /// `|quantity − I_n|` above this counts as a genuine difference.
    pub gap_threshold: f64,
}

impl SweepConfig {
    pub const DEFAULT_GAP_THRESHOLD: f64 = 1e-3;

    pub fn new(dims: Vec<usize>, ensemble: Ensemble, samples: usize, seed: u64) -> Self {
        SweepConfig {
            dims,
            ensemble,
            samples,
            seed,
            settings: Settings::default(),
            gap_threshold: Self::DEFAULT_GAP_THRESHOLD,
        }
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.dims.len() < 2 {
            return Err(Error::Config(format!(
                "need at least 2 parties, got dims {:?}",
                self.dims
            )));
        }
        if self.dims.contains(&0) {
            return Err(Error::Config("local dimensions must be positive".into()));
        }
        let dim = self
            .dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&d| d <= self.settings.dim_cap)
            .ok_or_else(|| {
                Error::Config(format!(
                    "total dimension of {:?} exceeds the cap {}",
                    self.dims, self.settings.dim_cap
                ))
            })?;
        if let Ensemble::Rank(r) = self.ensemble {
            if r == 0 || dim.checked_mul(r).is_none_or(|d| d > self.settings.dim_cap) {
                return Err(Error::Config(format!(
                    "rank {r} is outside 1..={}",
                    self.settings.dim_cap / dim
                )));
            }
        }
        for (name, x) in [
            ("support threshold", self.settings.support_threshold),
            ("containment tolerance", self.settings.containment_tol),
            ("gap threshold", self.gap_threshold),
        ] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {x}")));
            }
        }
        Ok(())
    }

    fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// The `index`-th sample and the seed it was drawn with.
    pub fn sample(&self, index: usize) -> Result<(u64, MultipartiteState)> {
        let seed = derive_seed(self.seed, index as u64);
        let state = match self.ensemble {
            Ensemble::Pure => random_pure(self.dims.clone(), seed)?,
            Ensemble::FullRank => random_mixed(self.dims.clone(), self.total_dim(), seed)?,
            Ensemble::Rank(r) => random_mixed(self.dims.clone(), r, seed)?,
        };
        Ok((seed, state))
    }
}

/// SplitMix64 over `(master, index)`: per-sample seeds that do not depend on
/// evaluation order, so serial and parallel sweeps agree.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One evaluated state: a demo or a sweep sample.
#[derive(Clone, Debug)]
pub struct ReportRecord {
    pub name: String,
    pub sample: Option<usize>,
    pub seed: Option<u64>,
    pub gap_threshold: f64,
    pub report: GapReport,
}

impl ReportRecord {
    pub fn new(name: impl Into<String>, report: GapReport) -> Self {
        ReportRecord {
            name: name.into(),
            sample: None,
            seed: None,
            gap_threshold: SweepConfig::DEFAULT_GAP_THRESHOLD,
            report,
        }
    }

    pub fn j_n_support_violation(&self) -> bool {
        self.report
            .j_n_support
            .as_ref()
            .is_some_and(|s| !s.contained)
    }

    pub fn jtilde_n_support_violation(&self) -> bool {
        self.report
            .jtilde_n_support
            .as_ref()
            .is_some_and(|s| !s.contained)
    }

    pub fn borderline_support(&self) -> bool {
        [&self.report.j_n_support, &self.report.jtilde_n_support]
            .iter()
            .any(|s| s.as_ref().is_some_and(|s| s.borderline))
    }

    /// `Some(true)` when `|J̃_n − I_n|` exceeds the gap threshold.
    pub fn jtilde_differs(&self) -> Option<bool> {
        self.report.gaps.jtilde_n.exceeds(self.gap_threshold)
    }

    pub fn j_differs(&self) -> Option<bool> {
        self.report.gaps.j_n.exceeds(self.gap_threshold)
    }

    pub fn to_json(&self, include_timings: bool) -> Value {
        let mut v = json!({
            "name": self.name,
            "sample": self.sample,
            "seed": self.seed,
            "report": self.report,
            "flags": {
                "gap_threshold": self.gap_threshold,
                "j_n_support_violation": self.j_n_support_violation(),
                "jtilde_n_support_violation": self.jtilde_n_support_violation(),
                "borderline_support": self.borderline_support(),
                "j_n_differs": self.j_differs(),
                "jtilde_n_differs": self.jtilde_differs(),
            },
        });
        if include_timings {
            v["timings_ms"] = json!(self.report.timings);
        }
        v
    }

    /// Human-readable table.
    pub fn render(&self) -> String {
        let r = &self.report;
        let unit = r.base.unit();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} (dims {:?}, log base {}):",
            self.name, r.dims, r.base
        );
        let n = r.n_parties;
        let rows: [(String, &Outcome, Option<Gap>); 6] = [
            (format!("I_{n}  (entropies)"), &r.i_n, None),
            (format!("T_{n}  (total correlation)"), &r.t_n, None),
            (
                "Eq3  (sum of matched rel. entropies)".into(),
                &r.eq3,
                Some(r.gaps.eq3),
            ),
            (
                "Eq4  (matched tensor rel. entropy)".into(),
                &r.eq4,
                Some(r.gaps.eq4),
            ),
            (
                format!("J_{n}  (ascending product)"),
                &r.j_n,
                Some(r.gaps.j_n),
            ),
            (
                format!("J~_{n} (descending product)"),
                &r.jtilde_n,
                Some(r.gaps.jtilde_n),
            ),
        ];
        for (label, value, gap) in rows {
            let shown = match value {
                Outcome::Value(v) if v.is_finite() => format!("{v:.9} {unit}"),
                Outcome::Value(_) => "inf (support violation)".to_string(),
                Outcome::Failed(e) => format!("unavailable: {e}"),
            };
            let gap = match gap {
                Some(Gap::Finite(x)) => format!("  gap {x:+.3e}"),
                Some(Gap::Infinite) => "  gap inf".into(),
                Some(Gap::Undefined) => "  gap undefined".into(),
                Some(Gap::Unavailable) | None => String::new(),
            };
            let _ = writeln!(out, "  {label:<40} {shown}{gap}");
        }
        if let Some(t) = &r.jtilde3 {
            let _ = writeln!(
                out,
                "  J~_3 terms: S(12) = {:.6}, -tr(r3 x r1 log r31) = {}, S(23) = {:.6}, -2S = {:.6}",
                tidy(t.s12),
                t.cross_31.finite().map_or("inf".into(), |x| format!("{:.6}", tidy(x))),
                tidy(t.s23),
                tidy(t.minus_2s)
            );
        }
        for (name, support) in [("J", &r.j_n_support), ("J~", &r.jtilde_n_support)] {
            if let Some(s) = support.as_ref().filter(|s| !s.contained) {
                let dir: Vec<String> = s
                    .violating_direction
                    .iter()
                    .map(|c| format!("({:+.4}{:+.4}i)|{}>", c.re, c.im, c.basis))
                    .collect();
                let _ = writeln!(
                    out,
                    "  {name}: supp(first) not in supp(second), mismatch {:.3e}{}; leaked direction {}",
                    s.mismatch,
                    if s.borderline { " (borderline)" } else { "" },
                    dir.join(" ")
                );
            }
        }
        out
    }
}

/// Rounding residue such as `-2e-16` would otherwise print as `-0.000000`.
fn tidy(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

/// Aggregate statistics over a sweep.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepSummary {
    pub samples: usize,
    pub n_parties: usize,
    pub dims: Vec<usize>,
    pub ensemble: String,
    pub seed: u64,
    pub base: String,
    pub gap_threshold: f64,
    /// Samples with `|J̃_n − I_n| > gap_threshold` (infinite gaps included).
    pub jtilde_flagged: usize,
    pub jtilde_flagged_fraction: f64,
    /// Samples with a finite `|J̃_n − I_n| ≤ gap_threshold`.
    pub jtilde_inconclusive: usize,
    pub jtilde_infinite: usize,
    pub jtilde_gap_min: Option<f64>,
    pub jtilde_gap_max: Option<f64>,
    pub jtilde_gap_mean: Option<f64>,
    pub jtilde_gap_positive: usize,
    pub jtilde_gap_negative: usize,
    pub j_flagged: usize,
    pub j_support_violations: usize,
    pub jtilde_support_violations: usize,
    pub borderline_support: usize,
    /// Largest `|Eq3 − I_n|` or `|Eq4 − I_n|` seen.
    pub max_equivalence_deviation: Option<f64>,
    /// Number of per-field failures (e.g. dimension cap) across all records.
    pub failed_fields: usize,
}

impl SweepSummary {
    pub fn from_records(cfg: &SweepConfig, records: &[ReportRecord]) -> Self {
        let mut s = SweepSummary {
            samples: records.len(),
            n_parties: cfg.n_parties(),
            dims: cfg.dims.clone(),
            ensemble: cfg.ensemble.to_string(),
            seed: cfg.seed,
            base: cfg.settings.base.to_string(),
            gap_threshold: cfg.gap_threshold,
            ..Default::default()
        };
        let mut finite_gaps = Vec::new();
        for rec in records {
            let r = &rec.report;
            if rec.jtilde_differs() == Some(true) {
                s.jtilde_flagged += 1;
            }
            if rec.jtilde_differs() == Some(false) {
                s.jtilde_inconclusive += 1;
            }
            if rec.j_differs() == Some(true) {
                s.j_flagged += 1;
            }
            match r.gaps.jtilde_n {
                Gap::Finite(g) => {
                    finite_gaps.push(g);
                    if g > 0.0 {
                        s.jtilde_gap_positive += 1;
                    } else if g < 0.0 {
                        s.jtilde_gap_negative += 1;
                    }
                }
                Gap::Infinite => s.jtilde_infinite += 1,
                _ => {}
            }
            s.j_support_violations += usize::from(rec.j_n_support_violation());
            s.jtilde_support_violations += usize::from(rec.jtilde_n_support_violation());
            s.borderline_support += usize::from(rec.borderline_support());
            if let Some(d) = r.equivalence_deviation() {
                s.max_equivalence_deviation =
                    Some(s.max_equivalence_deviation.map_or(d, |m: f64| m.max(d)));
            }
            s.failed_fields += [&r.i_n, &r.t_n, &r.eq3, &r.eq4, &r.j_n, &r.jtilde_n]
                .iter()
                .filter(|o| matches!(o, Outcome::Failed(_)))
                .count();
        }
        if !records.is_empty() {
            s.jtilde_flagged_fraction = s.jtilde_flagged as f64 / records.len() as f64;
        }
        if !finite_gaps.is_empty() {
            s.jtilde_gap_min = finite_gaps.iter().copied().reduce(f64::min);
            s.jtilde_gap_max = finite_gaps.iter().copied().reduce(f64::max);
            s.jtilde_gap_mean = Some(finite_gaps.iter().sum::<f64>() / finite_gaps.len() as f64);
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub records: Vec<ReportRecord>,
    pub summary: SweepSummary,
}

impl SweepOutcome {
    /// Writes the JSON-lines report: one record per line, then the summary.
    pub fn write_jsonl<W: Write>(&self, mut w: W, include_timings: bool) -> Result<()> {
        for rec in &self.records {
            serde_json::to_writer(&mut w, &rec.to_json(include_timings))?;
            w.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut w, &json!({ "summary": self.summary }))?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn to_jsonl(&self, include_timings: bool) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf, include_timings)
            .expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }
}

fn evaluate_sample(cfg: &SweepConfig, index: usize) -> Result<ReportRecord> {
    let (seed, state) = cfg.sample(index)?;
    let report = gap_report(&state, &cfg.settings)?;
    Ok(ReportRecord {
        name: format!("sample-{index}"),
        sample: Some(index),
        seed: Some(seed),
        gap_threshold: cfg.gap_threshold,
        report,
    })
}

/// Evaluates `cfg.samples` seeded random states. Deterministic given the config.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    #[cfg(feature = "parallel")]
    let records = {
        use rayon::prelude::*;
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| evaluate_sample(cfg, i))
            .collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let records = (0..cfg.samples)
        .map(|i| evaluate_sample(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let summary = SweepSummary::from_records(cfg, &records);
    Ok(SweepOutcome { records, summary })
}

#[cfg(test)]
mod tests;
