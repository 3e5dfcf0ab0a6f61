//! Thin helpers over faer used by the state and entropy modules.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{
    self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors, SelfAdjointEvdParams,
};
use faer::{Auto, Mat, MatRef, Par, Side};

use crate::{c64, ComplexMatrix, Error, Result};

pub(crate) const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: c64 = c64 { re: 1.0, im: 0.0 };

pub(crate) fn max_norm(m: MatRef<'_, c64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

/// `max |M − M†|` entrywise.
pub(crate) fn hermiticity_defect(m: MatRef<'_, c64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn hermitian_part(m: MatRef<'_, c64>) -> ComplexMatrix {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * 0.5
    })
}

pub(crate) fn all_finite(m: MatRef<'_, c64>) -> bool {
    (0..m.ncols())
        .all(|j| (0..m.nrows()).all(|i| m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()))
}

pub(crate) fn trace(m: MatRef<'_, c64>) -> c64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

pub(crate) fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> ComplexMatrix {
    let mut out = Mat::zeros(a.nrows() * b.nrows(), a.ncols() * b.ncols());
    faer::linalg::kron::kron(out.as_mut(), a, b);
    out
}

/// `I_left ⊗ op ⊗ I_right`.
pub(crate) fn embed(op: MatRef<'_, c64>, left: usize, right: usize) -> ComplexMatrix {
    let inner = kron(op, Mat::<c64>::identity(right, right).as_ref());
    kron(Mat::<c64>::identity(left, left).as_ref(), inner.as_ref())
}

/// Sizes above this use divide-and-conquer on the tridiagonal form by default.
const DIVIDE_AND_CONQUER_MIN: usize = 128;

/// Divide-and-conquer fails to converge on some very sparse structured
/// operators (e.g. `|GHZ⟩⟨GHZ| ⊗ |GHZ'⟩⟨GHZ'| ⊗ |GHZ''⟩⟨GHZ''|`), so below
/// this fraction of nonzero entries the QR-iteration path is used instead.
const DIVIDE_AND_CONQUER_MIN_DENSITY: f64 = 0.25;

fn density(m: MatRef<'_, c64>) -> f64 {
    let n = m.nrows();
    if n == 0 {
        return 1.0;
    }
    let nonzero = (0..n)
        .map(|j| (j..n).filter(|&i| m[(i, j)] != ZERO).count())
        .sum::<usize>();
    nonzero as f64 / (n * (n + 1) / 2) as f64
}

/// Eigenpairs by implicit QR on the tridiagonal form, eigenvalues ascending.
fn eigh_qr_iteration(m: MatRef<'_, c64>) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.nrows();
    let mut params = <SelfAdjointEvdParams as Auto<c64>>::auto();
    params.recursion_threshold = n + 1;
    let mut u = Mat::<c64>::zeros(n, n);
    let mut s = Diag::<c64>::zeros(n);
    let mut buf = MemBuffer::new(self_adjoint_evd_scratch::<c64>(
        n,
        ComputeEigenvectors::Yes,
        Par::Seq,
        params.into(),
    ));
    self_adjoint_evd(
        m,
        s.as_mut(),
        Some(u.as_mut()),
        Par::Seq,
        MemStack::new(&mut buf),
        params.into(),
    )
    .map_err(|_| Error::EigenFailure)?;
    let s = s.column_vector();
    Ok(((0..n).map(|k| s[k].re).collect(), u))
}

fn eigh_ascending(m: MatRef<'_, c64>) -> Result<(Vec<f64>, ComplexMatrix)> {
    if m.nrows() > DIVIDE_AND_CONQUER_MIN && density(m) >= DIVIDE_AND_CONQUER_MIN_DENSITY {
        if let Ok(evd) = m.self_adjoint_eigen(Side::Lower) {
            let s = evd.S().column_vector();
            return Ok((
                (0..m.nrows()).map(|k| s[k].re).collect(),
                evd.U().to_owned(),
            ));
        }
    }
    eigh_qr_iteration(m)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.
pub(crate) fn eigh(m: MatRef<'_, c64>) -> Result<(Vec<f64>, ComplexMatrix)> {
    let (mut values, u) = eigh_ascending(m)?;
    let n = m.nrows();
    values.reverse();
    let vectors = Mat::from_fn(n, n, |i, k| u[(i, n - 1 - k)]);
    Ok((values, vectors))
}

/// Eigenvalues only, descending.
pub(crate) fn eigvalsh(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    let mut values = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::EigenFailure)?;
    values.reverse();
    Ok(values)
}
