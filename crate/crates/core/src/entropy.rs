//! Spectral kernels: Hermitian eigendecomposition, numerical support,
//! von Neumann entropy and quantum relative entropy.
//!
//! Relative entropy follows the support rule
//!
//! ```text
//! S(τ‖σ) = tr τ log τ − tr τ log σ   if supp τ ⊆ supp σ
//!        = +∞                         otherwise
//! ```
//!
//! Supports are numerical: an eigenvector belongs to the support when its
//! eigenvalue exceeds `support_threshold · λ_max`. Containment is then judged
//! by `‖(I − P_σ) P_τ‖_max ≤ containment_tol`.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use faer::Mat;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::linalg::{self, ZERO};
use crate::states::{MultipartiteState, TOL_HERM, TOL_PSD};
use crate::{c64, ComplexMatrix, Error, LogBase, Result, Settings};

/// Relative entropies slightly below zero are rounding noise and get clamped.
const NEGATIVE_SLACK: f64 = 1e-8;

/// A real number or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PositiveInfinity,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::PositiveInfinity => None,
        }
    }

    /// `self − rhs`. `∞ − ∞` and `x − ∞` have no value in this codomain.
    pub fn checked_sub(self, rhs: ExtendedReal) -> Result<ExtendedReal> {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => Ok(ExtendedReal::Finite(a - b)),
            (ExtendedReal::PositiveInfinity, ExtendedReal::Finite(_)) => {
                Ok(ExtendedReal::PositiveInfinity)
            }
            (ExtendedReal::PositiveInfinity, ExtendedReal::PositiveInfinity) => {
                Err(Error::UndefinedArithmetic("inf - inf"))
            }
            (ExtendedReal::Finite(_), ExtendedReal::PositiveInfinity) => {
                Err(Error::UndefinedArithmetic("x - inf"))
            }
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::PositiveInfinity,
        }
    }
}

impl Add<f64> for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: f64) -> ExtendedReal {
        self + ExtendedReal::Finite(rhs)
    }
}

impl Sum for ExtendedReal {
    fn sum<I: Iterator<Item = ExtendedReal>>(iter: I) -> Self {
        iter.fold(ExtendedReal::Finite(0.0), Add::add)
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        ExtendedReal::Finite(x)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => match f.precision() {
                Some(p) => write!(f, "{x:.p$}"),
                None => write!(f, "{x}"),
            },
            ExtendedReal::PositiveInfinity => f.write_str("inf"),
        }
    }
}

/// `{"value": 1.5, "infinite": false}` or `{"value": "inf", "infinite": true}`.
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        match self {
            ExtendedReal::Finite(x) => map.serialize_entry("value", x)?,
            ExtendedReal::PositiveInfinity => map.serialize_entry("value", "inf")?,
        }
        map.serialize_entry("infinite", &self.is_infinite())?;
        map.end()
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// Number of eigenvalues above `rel_threshold · λ_max`.
    pub fn rank(&self, rel_threshold: f64) -> usize {
        support_rank(&self.eigenvalues, rel_threshold)
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.nrows();
        let scaled = Mat::from_fn(n, n, |i, k| v[(i, k)] * self.eigenvalues[k]);
        &scaled * v.adjoint()
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let defect = linalg::hermiticity_defect(m.as_ref());
    if defect > TOL_HERM * linalg::max_norm(m.as_ref()) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

fn clamp_small_negatives(values: &mut [f64]) {
    for v in values {
        if *v < 0.0 && *v > -TOL_PSD {
            *v = 0.0;
        }
    }
}

pub fn spectrum(m: &ComplexMatrix) -> Result<Spectrum> {
    check_hermitian(m)?;
    let (mut eigenvalues, eigenvectors) = linalg::eigh(m.as_ref())?;
    clamp_small_negatives(&mut eigenvalues);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (descending); cheaper than [`spectrum`].
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut values = linalg::eigvalsh(m.as_ref())?;
    clamp_small_negatives(&mut values);
    Ok(values)
}

fn support_rank(values: &[f64], rel_threshold: f64) -> usize {
    let cutoff = rel_threshold * values.first().copied().unwrap_or(0.0).max(0.0);
    values.iter().take_while(|&&v| v > cutoff).count()
}

/// `−Σ λ log λ` of a spectrum, with `0 log 0 = 0`.
pub fn shannon_of_spectrum(values: &[f64], base: LogBase) -> f64 {
    let nats: f64 = values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.ln())
        .sum();
    base.from_nats(nats).max(0.0)
}

pub fn von_neumann_entropy(s: &MultipartiteState, base: LogBase) -> Result<f64> {
    Ok(shannon_of_spectrum(&eigenvalues(s.matrix())?, base))
}

/// Orthogonal projector onto the numerical support of a state.
#[derive(Clone, Debug)]
pub struct SupportProjector {
    pub projector: ComplexMatrix,
    pub rank: usize,
    /// Absolute eigenvalue cutoff, `rel_threshold · λ_max`.
    pub threshold_used: f64,
}

pub fn support_projector(s: &MultipartiteState, rel_threshold: f64) -> Result<SupportProjector> {
    let spec = spectrum(s.matrix())?;
    let rank = spec.rank(rel_threshold);
    let threshold_used = rel_threshold * spec.eigenvalues.first().copied().unwrap_or(0.0);
    let v = spec.eigenvectors.subcols(0, rank);
    let projector = v * v.adjoint();
    Ok(SupportProjector {
        projector,
        rank,
        threshold_used,
    })
}

/// Outcome of the support comparison `supp τ ⊆ supp σ`.
#[derive(Clone, Debug, Serialize)]
pub struct SupportCheck {
    pub contained: bool,
    /// `‖(I − P_σ) P_τ‖_max`.
    pub mismatch: f64,
    /// Containment failed, but only by less than ten times the tolerance.
    pub borderline: bool,
    /// `None` when it did not need computing (σ has full support).
    pub tau_rank: Option<usize>,
    pub sigma_rank: usize,
    /// Unit vector in `(I − P_σ) supp τ` of largest leakage, when containment fails.
    #[serde(skip)]
    pub violating_direction: Option<Vec<c64>>,
}

/// Pre-computed spectral data for a pair `(τ, σ)`.
struct PairAnalysis {
    tau_values: Option<Vec<f64>>,
    sigma: Spectrum,
    sigma_rank: usize,
    check: SupportCheck,
}

fn analyze_pair(
    tau: &ComplexMatrix,
    sigma: &ComplexMatrix,
    settings: &Settings,
    need_tau_values: bool,
) -> Result<PairAnalysis> {
    if tau.nrows() != sigma.nrows() {
        return Err(Error::DimensionMismatch {
            expected: tau.nrows(),
            found: sigma.nrows(),
        });
    }
    let dim = sigma.nrows();
    let sigma_spec = spectrum(sigma)?;
    let sigma_rank = sigma_spec.rank(settings.support_threshold);

    if sigma_rank == dim {
        let tau_values = if need_tau_values {
            Some(eigenvalues(tau)?)
        } else {
            None
        };
        let tau_rank = tau_values
            .as_deref()
            .map(|v| support_rank(v, settings.support_threshold));
        let check = SupportCheck {
            contained: true,
            mismatch: 0.0,
            borderline: false,
            tau_rank,
            sigma_rank,
            violating_direction: None,
        };
        return Ok(PairAnalysis {
            tau_values,
            sigma: sigma_spec,
            sigma_rank,
            check,
        });
    }

    let tau_spec = spectrum(tau)?;
    let tau_rank = tau_spec.rank(settings.support_threshold);
    let vt = tau_spec.eigenvectors.subcols(0, tau_rank);
    let vs = sigma_spec.eigenvectors.subcols(0, sigma_rank);
    // (I − P_σ) V_τ, one column per support vector of τ
    let leak = vt - vs * (vs.adjoint() * vt);
    let mismatch = linalg::max_norm((&leak * vt.adjoint()).as_ref());
    let contained = mismatch <= settings.containment_tol;
    let borderline = !contained && mismatch <= 10.0 * settings.containment_tol;

    let violating_direction = (!contained)
        .then(|| {
            (0..tau_rank)
                .map(|c| (c, leak.col(c).norm_l2()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .filter(|&(_, norm)| norm > 0.0)
                .map(|(c, norm)| (0..dim).map(|i| leak[(i, c)] / norm).collect())
        })
        .flatten();

    let check = SupportCheck {
        contained,
        mismatch,
        borderline,
        tau_rank: Some(tau_rank),
        sigma_rank,
        violating_direction,
    };
    Ok(PairAnalysis {
        tau_values: Some(tau_spec.eigenvalues),
        sigma: sigma_spec,
        sigma_rank,
        check,
    })
}

/// `tr(τ log σ)` in nats, with `log σ` taken on the first `rank` eigenvectors of σ.
fn trace_against_log(tau: &ComplexMatrix, sigma: &Spectrum, rank: usize) -> f64 {
    if rank == 0 {
        return 0.0;
    }
    let vs = sigma.eigenvectors.subcols(0, rank);
    let tv = tau * vs;
    let dim = tau.nrows();
    (0..rank)
        .map(|k| {
            let expectation: c64 = (0..dim).map(|i| vs[(i, k)].conj() * tv[(i, k)]).sum();
            expectation.re * sigma.eigenvalues[k].ln()
        })
        .sum()
}

pub fn support_check(
    tau: &MultipartiteState,
    sigma: &MultipartiteState,
    settings: &Settings,
) -> Result<SupportCheck> {
    Ok(analyze_pair(tau.matrix(), sigma.matrix(), settings, false)?.check)
}

/// `supp τ ⊆ supp σ` at the default support threshold and containment tolerance `tol`.
pub fn support_contained(
    tau: &MultipartiteState,
    sigma: &MultipartiteState,
    tol: f64,
) -> Result<bool> {
    let settings = Settings {
        containment_tol: tol,
        ..Settings::default()
    };
    Ok(support_check(tau, sigma, &settings)?.contained)
}

/// A relative entropy or cross term, with the support diagnostics behind it.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub value: ExtendedReal,
    pub support: SupportCheck,
}

pub fn relative_entropy_detailed(
    tau: &MultipartiteState,
    sigma: &MultipartiteState,
    settings: &Settings,
) -> Result<Evaluated> {
    relative_entropy_of_matrices(tau.matrix(), sigma.matrix(), settings)
}

pub(crate) fn relative_entropy_of_matrices(
    tau: &ComplexMatrix,
    sigma: &ComplexMatrix,
    settings: &Settings,
) -> Result<Evaluated> {
    let pair = analyze_pair(tau, sigma, settings, true)?;
    if !pair.check.contained {
        return Ok(Evaluated {
            value: ExtendedReal::PositiveInfinity,
            support: pair.check,
        });
    }
    let tau_values = pair.tau_values.as_deref().unwrap_or_default();
    let tau_rank = support_rank(tau_values, settings.support_threshold);
    let tau_log_tau: f64 = tau_values[..tau_rank].iter().map(|&v| v * v.ln()).sum();
    let tau_log_sigma = trace_against_log(tau, &pair.sigma, pair.sigma_rank);
    let mut value = settings.base.from_nats(tau_log_tau - tau_log_sigma);
    if (-NEGATIVE_SLACK..0.0).contains(&value) {
        value = 0.0;
    }
    Ok(Evaluated {
        value: ExtendedReal::Finite(value),
        support: pair.check,
    })
}

pub fn relative_entropy(
    tau: &MultipartiteState,
    sigma: &MultipartiteState,
    settings: &Settings,
) -> Result<ExtendedReal> {
    Ok(relative_entropy_detailed(tau, sigma, settings)?.value)
}

/// `−tr(a log b)`, or `+∞` when `supp a ⊄ supp b`.
pub fn cross_log_trace_detailed(
    a: &MultipartiteState,
    b: &MultipartiteState,
    settings: &Settings,
) -> Result<Evaluated> {
    let pair = analyze_pair(a.matrix(), b.matrix(), settings, false)?;
    if !pair.check.contained {
        return Ok(Evaluated {
            value: ExtendedReal::PositiveInfinity,
            support: pair.check,
        });
    }
    let nats = -trace_against_log(a.matrix(), &pair.sigma, pair.sigma_rank);
    Ok(Evaluated {
        value: ExtendedReal::Finite(settings.base.from_nats(nats)),
        support: pair.check,
    })
}

pub fn cross_log_trace(
    a: &MultipartiteState,
    b: &MultipartiteState,
    settings: &Settings,
) -> Result<ExtendedReal> {
    Ok(cross_log_trace_detailed(a, b, settings)?.value)
}

/// The largest components of a vector as `(basis label, amplitude)` pairs,
/// ordered by magnitude.
pub fn dominant_components(
    v: &[c64],
    dims: &[usize],
    min_abs: f64,
    limit: usize,
) -> Vec<(String, c64)> {
    let mut parts: Vec<(usize, c64)> = v
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, a)| a.norm() > min_abs)
        .collect();
    parts.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()).then(a.0.cmp(&b.0)));
    parts.truncate(limit);
    parts
        .into_iter()
        .map(|(i, a)| {
            (
                crate::states::basis_label(i, dims),
                if a.norm() < 1e-15 { ZERO } else { a },
            )
        })
        .collect()
}
