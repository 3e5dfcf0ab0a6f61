//! Multipartite correlation quantities.
//!
//! Conventions: parties are numbered `1..=n`, `k̄` is the cyclic complement
//! `(k+1, …, n, 1, …, k−1)` and `ρ_k̄` is the marginal on those parties in
//! exactly that order.
//!
//! | function | quantity |
//! |---|---|
//! | [`dual_total_correlation`] | `I_n = Σ_k S(ρ_k̄) − (n−1) S(ρ)` |
//! | [`total_correlation`] | `T_n = S(ρ ‖ ⊗_k ρ_k)` |
//! | [`dtc_relent_sum`] | `Σ_k S(ρ_{k k̄} ‖ ρ_k ⊗ ρ_k̄) − T_n` |
//! | [`dtc_relent_tensor`] | `S(⊗_k ρ_{k k̄} ‖ ⊗_k (ρ_k ⊗ ρ_k̄)) − T_n` |
//! | [`j_n`] | `S(ρ^{⊗(n−1)} ‖ ρ_1̄ ⊗ ρ_2̄ ⊗ … ⊗ ρ_n̄)`, positional |
//! | [`jtilde_n`] | `S(ρ^{⊗(n−1)} ‖ ρ_n̄ ⊗ … ⊗ ρ_1̄)`, positional |
//!
//! The first four agree. `J_n` and `J̃_n` do not agree with `I_n` once `n ≥ 3`.
//! For `n = 3`, [`jtilde3_decomposition`] splits `J̃_3` into entropies plus
//! one cross term `−tr(ρ_3 ⊗ ρ_1 log ρ_31)`, which is where it departs from `I_3`.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::entropy::{
    self, cross_log_trace_detailed, dominant_components, relative_entropy,
    relative_entropy_of_matrices, von_neumann_entropy, Evaluated, ExtendedReal, SupportCheck,
};
use crate::states::{
    cyclic_complement, cyclic_order, marginal, permute, replicate, tensor, tensor_all,
    MultipartiteState,
};
use crate::{Error, LogBase, Result, Settings};

fn require_parties(s: &MultipartiteState, min: usize) -> Result<usize> {
    let n = s.n_parties();
    if n < min {
        return Err(Error::TooFewParties { min, found: n });
    }
    Ok(n)
}

/// Each term of `I_n` alongside the total.
#[derive(Clone, Debug, Serialize)]
pub struct DtcBreakdown {
    /// `(k̄, S(ρ_k̄))` for `k = 1..=n`.
    pub marginal_entropies: Vec<(Vec<usize>, f64)>,
    pub global_entropy: f64,
    pub value: f64,
}

pub fn dual_total_correlation(s: &MultipartiteState, settings: &Settings) -> Result<DtcBreakdown> {
    let n = require_parties(s, 2)?;
    let mut marginal_entropies = Vec::with_capacity(n);
    for k in 1..=n {
        let parties = cyclic_complement(k, n)?;
        let ent = von_neumann_entropy(&marginal(s, &parties)?, settings.base)?;
        marginal_entropies.push((parties, ent));
    }
    let global_entropy = von_neumann_entropy(s, settings.base)?;
    let value =
        marginal_entropies.iter().map(|(_, e)| e).sum::<f64>() - (n - 1) as f64 * global_entropy;
    Ok(DtcBreakdown {
        marginal_entropies,
        global_entropy,
        value,
    })
}

fn single_marginals(s: &MultipartiteState) -> Result<Vec<MultipartiteState>> {
    (1..=s.n_parties()).map(|k| marginal(s, &[k])).collect()
}

/// `S(ρ ‖ ρ_1 ⊗ … ⊗ ρ_n)`.
pub fn total_correlation(s: &MultipartiteState, settings: &Settings) -> Result<ExtendedReal> {
    require_parties(s, 2)?;
    let singles = single_marginals(s)?;
    let product = tensor_all(&singles).expect("at least two parties");
    relative_entropy(s, &product, settings)
}

/// `ρ_k ⊗ ρ_k̄`, the reference state matched to `ρ_{k k̄}`.
fn split_reference(s: &MultipartiteState, k: usize) -> Result<MultipartiteState> {
    let n = s.n_parties();
    Ok(tensor(
        &marginal(s, &[k])?,
        &marginal(s, &cyclic_complement(k, n)?)?,
    ))
}

/// `Σ_k S(ρ_{k k̄} ‖ ρ_k ⊗ ρ_k̄) − S(ρ ‖ ⊗_k ρ_k)`, each term with `ρ`
/// permuted so party `k` comes first.
pub fn dtc_relent_sum(s: &MultipartiteState, settings: &Settings) -> Result<ExtendedReal> {
    let n = require_parties(s, 2)?;
    let mut sum = ExtendedReal::Finite(0.0);
    for k in 1..=n {
        let matched = permute(s, &cyclic_order(k, n)?)?;
        sum = sum + relative_entropy(&matched, &split_reference(s, k)?, settings)?;
    }
    sum.checked_sub(total_correlation(s, settings)?)
}

/// `S(ρ_{12…n} ⊗ ρ_{23…n1} ⊗ … ‖ ⊗_k (ρ_k ⊗ ρ_k̄)) − S(ρ ‖ ⊗_k ρ_k)`, with
/// both arguments materialized as `D^n`-dimensional operators.
pub fn dtc_relent_tensor(s: &MultipartiteState, settings: &Settings) -> Result<ExtendedReal> {
    let n = require_parties(s, 2)?;
    settings.check_cap(s.dim().checked_pow(n as u32))?;
    let rotated = (1..=n)
        .map(|k| permute(s, &cyclic_order(k, n)?))
        .collect::<Result<Vec<_>>>()?;
    let references = (1..=n)
        .map(|k| split_reference(s, k))
        .collect::<Result<Vec<_>>>()?;
    let first = tensor_all(&rotated).expect("n >= 2");
    let second = tensor_all(&references).expect("n >= 2");
    let joint = relative_entropy_of_matrices(first.matrix(), second.matrix(), settings)?;
    joint.value.checked_sub(total_correlation(s, settings)?)
}

fn copies_against_marginals(
    s: &MultipartiteState,
    order: impl Iterator<Item = usize>,
    settings: &Settings,
) -> Result<Evaluated> {
    let n = require_parties(s, 2)?;
    let copies = replicate(s, n - 1, settings.dim_cap)?;
    let marginals = order
        .map(|k| marginal(s, &cyclic_complement(k, n)?))
        .collect::<Result<Vec<_>>>()?;
    let product = tensor_all(&marginals).expect("n >= 2");
    relative_entropy_of_matrices(copies.matrix(), product.matrix(), settings)
}

/// `J_n` with its support diagnostics.
pub fn j_n_detailed(s: &MultipartiteState, settings: &Settings) -> Result<Evaluated> {
    copies_against_marginals(s, 1..=s.n_parties(), settings)
}

/// `S(ρ^{⊗(n−1)} ‖ ρ_1̄ ⊗ ρ_2̄ ⊗ … ⊗ ρ_n̄)` taken literally: both arguments are
/// `D^{n−1}`-dimensional matrices compared position by position, with no
/// re-matching of subsystems. For `n = 3` this is
/// `S(ρ_123 ⊗ ρ_123 ‖ ρ_23 ⊗ ρ_31 ⊗ ρ_12)`.
pub fn j_n(s: &MultipartiteState, settings: &Settings) -> Result<ExtendedReal> {
    Ok(j_n_detailed(s, settings)?.value)
}

/// `J̃_n` with its support diagnostics.
pub fn jtilde_n_detailed(s: &MultipartiteState, settings: &Settings) -> Result<Evaluated> {
    copies_against_marginals(s, (1..=s.n_parties()).rev(), settings)
}

/// `S(ρ^{⊗(n−1)} ‖ ρ_n̄ ⊗ … ⊗ ρ_1̄)`: the product runs from `k = n` down to
/// `1`, which lines each marginal up with the copy parties it acts on
/// (`ρ_123 ⊗ ρ_123` against `ρ_12 ⊗ ρ_31 ⊗ ρ_23` for `n = 3`).
pub fn jtilde_n(s: &MultipartiteState, settings: &Settings) -> Result<ExtendedReal> {
    Ok(jtilde_n_detailed(s, settings)?.value)
}

/// `−tr(ρ_i ⊗ ρ_j log ρ_ij)`.
pub fn cross_term(
    s: &MultipartiteState,
    pair: (usize, usize),
    settings: &Settings,
) -> Result<ExtendedReal> {
    Ok(cross_term_detailed(s, pair, settings)?.value)
}

pub fn cross_term_detailed(
    s: &MultipartiteState,
    pair: (usize, usize),
    settings: &Settings,
) -> Result<Evaluated> {
    let (i, j) = pair;
    if i == j {
        return Err(Error::InvalidPartySet(format!(
            "cross term needs two distinct parties, got ({i}, {j})"
        )));
    }
    let product = tensor(&marginal(s, &[i])?, &marginal(s, &[j])?);
    let joint = marginal(s, &[i, j])?;
    cross_log_trace_detailed(&product, &joint, settings)
}

/// Term-by-term expansion of `J̃_3`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Jtilde3Terms {
    /// `S(ρ_12)`
    pub s12: f64,
    /// `−tr(ρ_3 ⊗ ρ_1 log ρ_31)`; would be `S(ρ_31)` only if `ρ_31 = ρ_3 ⊗ ρ_1`.
    pub cross_31: ExtendedReal,
    /// `S(ρ_23)`
    pub s23: f64,
    /// `−2 S(ρ)`
    pub minus_2s: f64,
    pub total: ExtendedReal,
}

pub fn jtilde3_decomposition(s: &MultipartiteState, settings: &Settings) -> Result<Jtilde3Terms> {
    if s.n_parties() != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            found: s.n_parties(),
        });
    }
    let s12 = von_neumann_entropy(&marginal(s, &[1, 2])?, settings.base)?;
    let cross_31 = cross_term(s, (3, 1), settings)?;
    let s23 = von_neumann_entropy(&marginal(s, &[2, 3])?, settings.base)?;
    let minus_2s = -2.0 * von_neumann_entropy(s, settings.base)?;
    let total = ExtendedReal::Finite(s12) + cross_31 + s23 + minus_2s;
    Ok(Jtilde3Terms {
        s12,
        cross_31,
        s23,
        minus_2s,
        total,
    })
}

/// A quantity in a [`GapReport`]: a value, or the reason it is missing.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Value(ExtendedReal),
    Failed(String),
}

impl Outcome {
    pub fn value(&self) -> Option<ExtendedReal> {
        match self {
            Outcome::Value(v) => Some(*v),
            Outcome::Failed(_) => None,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        self.value().and_then(ExtendedReal::finite)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Outcome::Value(ExtendedReal::PositiveInfinity))
    }
}

impl<E: std::fmt::Display> From<std::result::Result<ExtendedReal, E>> for Outcome {
    fn from(r: std::result::Result<ExtendedReal, E>) -> Self {
        match r {
            Ok(v) => Outcome::Value(v),
            Err(e) => Outcome::Failed(e.to_string()),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Outcome::Value(v) => v.serialize(serializer),
            Outcome::Failed(e) => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("error", e)?;
                map.end()
            }
        }
    }
}

/// `quantity − I_n` under extended-real rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gap {
    Finite(f64),
    Infinite,
    /// Both sides infinite, or `I_n` itself infinite.
    Undefined,
    /// One side failed to compute.
    Unavailable,
}

impl Gap {
    pub fn between(quantity: &Outcome, reference: &Outcome) -> Gap {
        match (quantity.value(), reference.value()) {
            (Some(q), Some(r)) => match q.checked_sub(r) {
                Ok(ExtendedReal::Finite(x)) => Gap::Finite(x),
                Ok(ExtendedReal::PositiveInfinity) => Gap::Infinite,
                Err(_) => Gap::Undefined,
            },
            _ => Gap::Unavailable,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Gap::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// `|gap| > threshold`, with `+∞` counting as exceeding; `None` when no
    /// comparison is possible.
    pub fn exceeds(self, threshold: f64) -> Option<bool> {
        match self {
            Gap::Finite(x) => Some(x.abs() > threshold),
            Gap::Infinite => Some(true),
            Gap::Undefined | Gap::Unavailable => None,
        }
    }
}

impl Serialize for Gap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Gap::Finite(x) => serializer.serialize_f64(*x),
            Gap::Infinite => serializer.serialize_str("inf"),
            Gap::Undefined => serializer.serialize_str("undefined"),
            Gap::Unavailable => serializer.serialize_none(),
        }
    }
}

/// Differences of each alternative form from `I_n`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Gaps {
    pub eq3: Gap,
    pub eq4: Gap,
    pub j_n: Gap,
    pub jtilde_n: Gap,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisComponent {
    pub basis: String,
    pub re: f64,
    pub im: f64,
}

/// Support diagnostics for one relative entropy, ready for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct SupportSummary {
    pub contained: bool,
    pub mismatch: f64,
    pub borderline: bool,
    pub tau_rank: Option<usize>,
    pub sigma_rank: usize,
    /// Leading components of the leaked direction, largest first.
    pub violating_direction: Vec<BasisComponent>,
}

impl SupportSummary {
    fn new(check: &SupportCheck, dims: &[usize]) -> Self {
        let violating_direction = check
            .violating_direction
            .as_deref()
            .map(|v| {
                dominant_components(v, dims, 1e-6, 8)
                    .into_iter()
                    .map(|(basis, a)| BasisComponent {
                        basis,
                        re: clean(a.re),
                        im: clean(a.im),
                    })
                    .collect()
            })
            .unwrap_or_default();
        SupportSummary {
            contained: check.contained,
            mismatch: check.mismatch,
            borderline: check.borderline,
            tau_rank: check.tau_rank,
            sigma_rank: check.sigma_rank,
            violating_direction,
        }
    }
}

/// Rounds away the last few bits so witness amplitudes print stably.
fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Wall-clock milliseconds per computed quantity.
pub type Timings = BTreeMap<&'static str, f64>;

/// Every correlation quantity for one state, and the gaps between them.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub n_parties: usize,
    pub dims: Vec<usize>,
    pub base: LogBase,
    pub i_n: Outcome,
    pub t_n: Outcome,
    pub eq3: Outcome,
    pub eq4: Outcome,
    pub j_n: Outcome,
    pub jtilde_n: Outcome,
    pub gaps: Gaps,
    pub j_n_support: Option<SupportSummary>,
    pub jtilde_n_support: Option<SupportSummary>,
    /// Only for three parties.
    pub jtilde3: Option<Jtilde3Terms>,
    #[serde(skip)]
    pub timings: Timings,
}

impl GapReport {
    /// Largest `|Eq3 − I_n|`, `|Eq4 − I_n|` among finite values.
    pub fn equivalence_deviation(&self) -> Option<f64> {
        [self.gaps.eq3, self.gaps.eq4]
            .iter()
            .filter_map(|g| g.finite())
            .map(f64::abs)
            .reduce(f64::max)
    }
}

/// Assembles every quantity. Failures (say, a dimension cap) are recorded
/// per field and do not abort the rest.
pub fn gap_report(s: &MultipartiteState, settings: &Settings) -> Result<GapReport> {
    let n = require_parties(s, 2)?;
    let mut timings = Timings::new();

    let i_n: Outcome = timed(&mut timings, "i_n", || {
        dual_total_correlation(s, settings).map(|b| ExtendedReal::Finite(b.value))
    })
    .into();
    let t_n: Outcome = timed(&mut timings, "t_n", || total_correlation(s, settings)).into();
    let eq3: Outcome = timed(&mut timings, "eq3", || dtc_relent_sum(s, settings)).into();
    let eq4: Outcome = timed(&mut timings, "eq4", || dtc_relent_tensor(s, settings)).into();

    let dims = s.dims().to_vec();
    let copy_dims: Vec<usize> = (0..n - 1).flat_map(|_| dims.iter().copied()).collect();
    let split = |r: Result<Evaluated>| -> (Outcome, Option<SupportSummary>) {
        match r {
            Ok(ev) => (
                Outcome::Value(ev.value),
                Some(SupportSummary::new(&ev.support, &copy_dims)),
            ),
            Err(e) => (Outcome::Failed(e.to_string()), None),
        }
    };
    let (j_n, j_n_support) = split(timed(&mut timings, "j_n", || j_n_detailed(s, settings)));
    let (jtilde_n, jtilde_n_support) = split(timed(&mut timings, "jtilde_n", || {
        jtilde_n_detailed(s, settings)
    }));

    let jtilde3 = if n == 3 {
        Some(timed(&mut timings, "jtilde3", || {
            jtilde3_decomposition(s, settings)
        })?)
    } else {
        None
    };

    let gaps = Gaps {
        eq3: Gap::between(&eq3, &i_n),
        eq4: Gap::between(&eq4, &i_n),
        j_n: Gap::between(&j_n, &i_n),
        jtilde_n: Gap::between(&jtilde_n, &i_n),
    };
    Ok(GapReport {
        n_parties: n,
        dims,
        base: settings.base,
        i_n,
        t_n,
        eq3,
        eq4,
        j_n,
        jtilde_n,
        gaps,
        j_n_support,
        jtilde_n_support,
        jtilde3,
        timings,
    })
}

#[cfg(not(target_arch = "wasm32"))]
fn timed<T>(timings: &mut Timings, key: &'static str, f: impl FnOnce() -> T) -> T {
    let start = std::time::Instant::now();
    let out = f();
    timings.insert(key, start.elapsed().as_secs_f64() * 1e3);
    out
}

// No monotonic clock on wasm32-unknown-unknown.
#[cfg(target_arch = "wasm32")]
fn timed<T>(_timings: &mut Timings, _key: &'static str, f: impl FnOnce() -> T) -> T {
    f()
}

/// Shorthand for [`entropy::von_neumann_entropy`] of a marginal.
pub fn marginal_entropy(s: &MultipartiteState, keep: &[usize], base: LogBase) -> Result<f64> {
    entropy::von_neumann_entropy(&marginal(s, keep)?, base)
}
