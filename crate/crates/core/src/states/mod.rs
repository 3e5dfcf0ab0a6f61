//! Multipartite density matrices and the algebra on them.
//!
//! Parties are numbered from 1, matching the usual `ρ_12…n` notation. Matrix
//! arithmetic is always positional: party 1 is the most significant tensor
//! factor, and labels are carried along only for reporting.

mod channel;
mod constructors;
mod io;

use std::collections::HashSet;

use faer::Mat;

pub use channel::KrausChannel;
pub use constructors::{
    ghz, maximally_mixed, mixture, product_state, pure_state, random_mixed, random_pure, w_state,
};
pub use io::{parse_state_json, read_state, state_to_json, write_state};

use crate::linalg;
#[cfg(test)]
use crate::linalg::{ONE, ZERO};
use crate::{c64, ComplexMatrix, Error, Result};

/// Hermiticity tolerance, relative to the max-norm of the matrix.
pub const TOL_HERM: f64 = 1e-10;
/// Allowed deviation of the trace from 1.
pub const TOL_TRACE: f64 = 1e-10;
/// Eigenvalues down to `-TOL_PSD` are accepted and treated as zero.
pub const TOL_PSD: f64 = 1e-10;
/// Allowed max-norm deviation of `Σ K†K` from the identity.
pub const TOL_CPTP: f64 = 1e-10;

/// A density matrix over an ordered list of parties with local dimensions `dims`.
#[derive(Clone, Debug)]
pub struct MultipartiteState {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl MultipartiteState {
    /// Validates `matrix` as a density matrix over `dims`.
    ///
    /// The Hermitian part `(M + M†)/2` is what gets stored, so tiny
    /// antihermitian noise from upstream arithmetic is removed.
    pub fn new(
        matrix: ComplexMatrix,
        dims: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let dim = check_dims(&dims)?;
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        if !linalg::all_finite(matrix.as_ref()) {
            return Err(Error::NonFinite);
        }
        let scale = linalg::max_norm(matrix.as_ref());
        let defect = linalg::hermiticity_defect(matrix.as_ref());
        if defect > TOL_HERM * scale {
            return Err(Error::NotHermitian(defect));
        }
        let matrix = linalg::hermitian_part(matrix.as_ref());
        let tr = linalg::trace(matrix.as_ref()).re;
        if (tr - 1.0).abs() > TOL_TRACE {
            return Err(Error::NotUnitTrace(tr));
        }
        let labels = resolve_labels(labels, dims.len())?;
        let min_eig = linalg::eigvalsh(matrix.as_ref())?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -TOL_PSD {
            return Err(Error::NotPsd(min_eig));
        }
        Ok(MultipartiteState {
            matrix,
            dims,
            labels,
        })
    }

    /// Assembles a state from parts already known to be valid.
    pub(crate) fn from_parts(matrix: ComplexMatrix, dims: Vec<usize>, labels: Vec<String>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.nrows());
        debug_assert_eq!(dims.len(), labels.len());
        MultipartiteState {
            matrix,
            dims,
            labels,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> c64 {
        linalg::trace(self.matrix.as_ref())
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Alias of [`MultipartiteState::new`].
pub fn make_state(
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    labels: Option<Vec<String>>,
) -> Result<MultipartiteState> {
    MultipartiteState::new(matrix, dims, labels)
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidPartySet(
            "a state needs at least one party".into(),
        ));
    }
    if let Some(pos) = dims.iter().position(|&d| d == 0) {
        return Err(Error::InvalidPartySet(format!(
            "party {} has dimension 0",
            pos + 1
        )));
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or(Error::DimensionCapExceeded {
            dim: usize::MAX,
            cap: usize::MAX,
        })
}

fn resolve_labels(labels: Option<Vec<String>>, n: usize) -> Result<Vec<String>> {
    let labels = labels.unwrap_or_else(|| (1..=n).map(|k| k.to_string()).collect());
    if labels.len() != n {
        return Err(Error::InvalidLabels(format!(
            "{} labels for {} parties",
            labels.len(),
            n
        )));
    }
    let mut seen = HashSet::new();
    for l in &labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidLabels(format!("duplicate label {l:?}")));
        }
    }
    Ok(labels)
}

/// Positional tensor product `a ⊗ b`.
///
/// Labels of `b` that collide with earlier ones get a `'` suffix per copy, so
/// `tensor(ρ_123, ρ_123)` is labelled `1,2,3,1',2',3'`.
pub fn tensor(a: &MultipartiteState, b: &MultipartiteState) -> MultipartiteState {
    let matrix = linalg::kron(a.matrix.as_ref(), b.matrix.as_ref());
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    let mut labels = a.labels.clone();
    for l in &b.labels {
        let mut tagged = l.clone();
        while labels.contains(&tagged) {
            tagged.push('\'');
        }
        labels.push(tagged);
    }
    MultipartiteState::from_parts(matrix, dims, labels)
}

/// Tensor product of a nonempty list of states, left to right.
pub fn tensor_all<'a, I>(states: I) -> Option<MultipartiteState>
where
    I: IntoIterator<Item = &'a MultipartiteState>,
{
    let mut iter = states.into_iter();
    let first = iter.next()?.clone();
    Some(iter.fold(first, |acc, s| tensor(&acc, s)))
}

/// The ordered party list `(k+1, …, n, 1, …, k−1)`.
pub fn cyclic_complement(k: usize, n: usize) -> Result<Vec<usize>> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            expected: ">= 2".into(),
        });
    }
    if k < 1 || k > n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            expected: format!("1..={n}"),
        });
    }
    Ok((k + 1..=n).chain(1..k).collect())
}

/// `(k, k+1, …, n, 1, …, k−1)`: party `k` followed by its cyclic complement.
pub(crate) fn cyclic_order(k: usize, n: usize) -> Result<Vec<usize>> {
    let mut order = vec![k];
    order.extend(cyclic_complement(k, n)?);
    Ok(order)
}

/// Reduced state on `keep`, with the parties arranged exactly in that order.
pub fn marginal(s: &MultipartiteState, keep: &[usize]) -> Result<MultipartiteState> {
    let n = s.n_parties();
    if keep.is_empty() {
        return Err(Error::InvalidPartySet(
            "cannot keep an empty set of parties".into(),
        ));
    }
    let mut seen = vec![false; n];
    for &p in keep {
        if p < 1 || p > n {
            return Err(Error::InvalidPartySet(format!(
                "party {p} is not in 1..={n}"
            )));
        }
        if std::mem::replace(&mut seen[p - 1], true) {
            return Err(Error::InvalidPartySet(format!("party {p} listed twice")));
        }
    }
    let zero_based: Vec<usize> = keep.iter().map(|p| p - 1).collect();
    let matrix = reduce(&s.matrix, &s.dims, &zero_based);
    let dims = zero_based.iter().map(|&p| s.dims[p]).collect();
    let labels = zero_based.iter().map(|&p| s.labels[p].clone()).collect();
    Ok(MultipartiteState::from_parts(matrix, dims, labels))
}

/// Traces out the parties in `drop`; the rest keep their relative order.
pub fn partial_trace(s: &MultipartiteState, drop: &[usize]) -> Result<MultipartiteState> {
    let n = s.n_parties();
    let mut dropped = vec![false; n];
    for &p in drop {
        if p < 1 || p > n {
            return Err(Error::InvalidPartySet(format!(
                "party {p} is not in 1..={n}"
            )));
        }
        if std::mem::replace(&mut dropped[p - 1], true) {
            return Err(Error::InvalidPartySet(format!("party {p} listed twice")));
        }
    }
    let keep: Vec<usize> = (1..=n).filter(|p| !dropped[p - 1]).collect();
    if keep.is_empty() {
        return Err(Error::InvalidPartySet(
            "cannot trace out every party".into(),
        ));
    }
    marginal(s, &keep)
}

/// Reorders parties so that new position `i` holds old party `perm[i]`.
pub fn permute(s: &MultipartiteState, perm: &[usize]) -> Result<MultipartiteState> {
    let n = s.n_parties();
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} for {} parties",
            perm.len(),
            n
        )));
    }
    marginal(s, perm).map_err(|e| match e {
        Error::InvalidPartySet(msg) => Error::InvalidPermutation(msg),
        other => other,
    })
}

/// `m`-fold positional tensor power, each copy's labels tagged with `'`.
pub fn replicate(s: &MultipartiteState, m: usize, dim_cap: usize) -> Result<MultipartiteState> {
    if m < 1 {
        return Err(Error::OutOfRange {
            what: "m",
            value: m,
            expected: ">= 1".into(),
        });
    }
    let total = s.dim().checked_pow(m as u32);
    match total {
        Some(d) if d <= dim_cap => {}
        Some(d) => {
            return Err(Error::DimensionCapExceeded {
                dim: d,
                cap: dim_cap,
            })
        }
        None => {
            return Err(Error::DimensionCapExceeded {
                dim: usize::MAX,
                cap: dim_cap,
            })
        }
    }
    let mut out = s.clone();
    for _ in 1..m {
        out = tensor(&out, s);
    }
    Ok(out)
}

/// Applies `ch` to party `party` (1-based): `Σ_j (I⊗K_j⊗I) ρ (I⊗K_j⊗I)†`.
pub fn apply_local_channel(
    s: &MultipartiteState,
    party: usize,
    ch: &KrausChannel,
) -> Result<MultipartiteState> {
    let n = s.n_parties();
    if party < 1 || party > n {
        return Err(Error::InvalidPartySet(format!(
            "party {party} is not in 1..={n}"
        )));
    }
    let d = s.dims[party - 1];
    if ch.party_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: ch.party_dim(),
        });
    }
    let left: usize = s.dims[..party - 1].iter().product();
    let right: usize = s.dims[party..].iter().product();
    let dim = s.dim();
    let mut out = Mat::<c64>::zeros(dim, dim);
    for k in ch.kraus() {
        let e = linalg::embed(k.as_ref(), left, right);
        out += &e * &s.matrix * e.adjoint();
    }
    MultipartiteState::new(out, s.dims.clone(), Some(s.labels.clone()))
}

/// Core index gymnastics behind `marginal`, `permute` and `partial_trace`.
///
/// `keep` holds zero-based positions in the desired output order. Every
/// party not in `keep` is traced out.
fn reduce(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> ComplexMatrix {
    let n = dims.len();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let offsets = |parties: &[usize]| -> Vec<usize> {
        parties.iter().fold(vec![0usize], |acc, &p| {
            let (d, stride) = (dims[p], strides[p]);
            acc.iter()
                .flat_map(|&o| (0..d).map(move |digit| o + digit * stride))
                .collect()
        })
    };
    let traced: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();
    let kept = offsets(keep);
    let summed = offsets(&traced);
    Mat::from_fn(kept.len(), kept.len(), |i, j| {
        summed.iter().map(|&t| m[(kept[i] + t, kept[j] + t)]).sum()
    })
}

/// Projector `|v⟩⟨v|` for a normalized vector.
pub(crate) fn outer(v: &[c64]) -> ComplexMatrix {
    Mat::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
}

#[cfg(test)]
pub(crate) fn diagonal(values: &[f64]) -> ComplexMatrix {
    Mat::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            c64::new(values[i], 0.0)
        } else {
            ZERO
        }
    })
}

#[cfg(test)]
pub(crate) fn basis_vector(dim: usize, index: usize) -> Vec<c64> {
    (0..dim)
        .map(|i| if i == index { ONE } else { ZERO })
        .collect()
}

/// Formats a positional basis index as its per-party digits, e.g. `000111`.
pub fn basis_label(index: usize, dims: &[usize]) -> String {
    let mut digits = Vec::with_capacity(dims.len());
    let mut rest = index;
    for &d in dims.iter().rev() {
        digits.push(rest % d);
        rest /= d;
    }
    digits.reverse();
    let sep = if dims.iter().all(|&d| d <= 10) {
        ""
    } else {
        ","
    };
    digits
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}
