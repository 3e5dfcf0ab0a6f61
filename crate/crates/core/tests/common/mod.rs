//! Independent dense reference implementations on nalgebra, sharing nothing
//! with the library beyond the input matrices.

#![allow(dead_code)]

use multicorr::states::MultipartiteState;
use multicorr::ComplexMatrix;
use nalgebra::{Complex, DMatrix};

pub type Dense = DMatrix<Complex<f64>>;

pub fn dense(m: &ComplexMatrix) -> Dense {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        Complex::new(z.re, z.im)
    })
}

pub fn state_dense(s: &MultipartiteState) -> Dense {
    dense(s.matrix())
}

/// Eigenvalues, unclamped.
pub fn eigvals(m: &Dense) -> Vec<f64> {
    let mut v: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `f(m)` through the spectral decomposition; `f` sees every eigenvalue.
pub fn apply_fn(m: &Dense, f: impl Fn(f64) -> f64) -> Dense {
    let eig = m.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex::new(f(x), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

fn xlog2x(x: f64) -> f64 {
    if x > 1e-14 {
        x * x.log2()
    } else {
        0.0
    }
}

pub fn entropy_bits(m: &Dense) -> f64 {
    -eigvals(m).into_iter().map(xlog2x).sum::<f64>()
}

/// `log₂` of a full-rank positive matrix.
pub fn log2m(m: &Dense) -> Dense {
    apply_fn(m, |x| {
        assert!(
            x > 1e-12,
            "oracle log needs a full-rank argument, got eigenvalue {x}"
        );
        x.log2()
    })
}

/// `S(τ‖σ)` in bits for full-rank `σ`.
pub fn relative_entropy_bits(tau: &Dense, sigma: &Dense) -> f64 {
    -entropy_bits(tau) - (tau * log2m(sigma)).trace().re
}

/// `−tr(a log₂ b)` for full-rank `b`.
pub fn cross_log_trace_bits(a: &Dense, b: &Dense) -> f64 {
    -(a * log2m(b)).trace().re
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    a.kronecker(b)
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Reduced state on the 1-based `keep` parties, in the order listed, by
/// summing matrix elements whose traced-out digits agree.
pub fn marginal(m: &Dense, dims: &[usize], keep: &[usize]) -> Dense {
    let out_dims: Vec<usize> = keep.iter().map(|&k| dims[k - 1]).collect();
    let out_dim: usize = out_dims.iter().product();
    let traced: Vec<usize> = (1..=dims.len()).filter(|k| !keep.contains(k)).collect();
    let pack = |dg: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k - 1] + dg[k - 1]);
    let mut out = DMatrix::zeros(out_dim, out_dim);
    for i in 0..m.nrows() {
        let di = digits(i, dims);
        for j in 0..m.ncols() {
            let dj = digits(j, dims);
            if traced.iter().all(|&k| di[k - 1] == dj[k - 1]) {
                out[(pack(&di), pack(&dj))] += m[(i, j)];
            }
        }
    }
    out
}

pub fn max_abs(m: &Dense) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
