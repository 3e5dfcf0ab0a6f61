//! Standard and seeded random states.

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{check_dims, outer, partial_trace, tensor_all, MultipartiteState};
use crate::linalg::ZERO;
use crate::{c64, ComplexMatrix, Error, Result};

/// `rows × cols` matrix of i.i.d. standard complex Gaussians.
pub(crate) fn ginibre<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64::new(re * scale, im * scale)
    })
}

/// `|ψ⟩⟨ψ|` for the given amplitudes, normalized first.
pub fn pure_state(amplitudes: &[c64], dims: Vec<usize>) -> Result<MultipartiteState> {
    let dim = check_dims(&dims)?;
    if amplitudes.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: amplitudes.len(),
        });
    }
    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Format(
            "state vector has zero or non-finite norm".into(),
        ));
    }
    let v: Vec<c64> = amplitudes.iter().map(|a| a / norm).collect();
    MultipartiteState::new(outer(&v), dims, None)
}

/// `(Σ_i |i…i⟩)/√d` on `n` parties of dimension `d`.
pub fn ghz(n: usize, d: usize) -> Result<MultipartiteState> {
    if n < 1 || d < 1 {
        return Err(Error::InvalidPartySet(
            "GHZ state needs n ≥ 1 and d ≥ 1".into(),
        ));
    }
    let dims = vec![d; n];
    let dim = check_dims(&dims)?;
    // |i…i⟩ sits at index i·(d^{n−1} + … + 1)
    let step = (0..n).fold(0usize, |acc, _| acc * d + 1);
    let mut amps = vec![ZERO; dim];
    for i in 0..d {
        amps[i * step] = c64::new(1.0, 0.0);
    }
    pure_state(&amps, dims)
}

/// `(|10…0⟩ + |01…0⟩ + … + |0…01⟩)/√n` on qubits.
pub fn w_state(n: usize) -> Result<MultipartiteState> {
    if n < 1 {
        return Err(Error::InvalidPartySet("W state needs n ≥ 1".into()));
    }
    let dims = vec![2; n];
    let dim = check_dims(&dims)?;
    let mut amps = vec![ZERO; dim];
    for k in 0..n {
        amps[1 << k] = c64::new(1.0, 0.0);
    }
    pure_state(&amps, dims)
}

/// Positional tensor product of single- or multi-party states.
pub fn product_state(factors: &[MultipartiteState]) -> Result<MultipartiteState> {
    tensor_all(factors).ok_or_else(|| Error::InvalidPartySet("product of zero states".into()))
}

pub fn maximally_mixed(dims: Vec<usize>) -> Result<MultipartiteState> {
    let dim = check_dims(&dims)?;
    let matrix = Mat::from_fn(dim, dim, |i, j| {
        if i == j {
            c64::new(1.0 / dim as f64, 0.0)
        } else {
            ZERO
        }
    });
    MultipartiteState::new(matrix, dims, None)
}

/// `(1 − p) a + p b`, keeping the labels of `a`.
pub fn mixture(a: &MultipartiteState, b: &MultipartiteState, p: f64) -> Result<MultipartiteState> {
    if a.dims() != b.dims() {
        return Err(Error::InvalidPartySet(format!(
            "cannot mix dims {:?} with {:?}",
            a.dims(),
            b.dims()
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Format(format!(
            "mixing weight {p} is outside [0, 1]"
        )));
    }
    let (wa, wb) = (c64::new(1.0 - p, 0.0), c64::new(p, 0.0));
    let (ma, mb) = (a.matrix(), b.matrix());
    let matrix = Mat::from_fn(a.dim(), a.dim(), |i, j| wa * ma[(i, j)] + wb * mb[(i, j)]);
    MultipartiteState::new(matrix, a.dims().to_vec(), Some(a.labels().to_vec()))
}

/// Haar-random pure state (normalized complex Gaussian vector).
pub fn random_pure(dims: Vec<usize>, seed: u64) -> Result<MultipartiteState> {
    let dim = check_dims(&dims)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(&mut rng, dim, 1);
    let amps: Vec<c64> = (0..dim).map(|i| g[(i, 0)]).collect();
    pure_state(&amps, dims)
}

/// Random mixed state of the given rank: a random pure state on
/// `system ⊗ C^rank` with the ancilla traced out.
///
/// With `rank ≥ dim` the result has full support almost surely.
pub fn random_mixed(dims: Vec<usize>, rank: usize, seed: u64) -> Result<MultipartiteState> {
    if rank < 1 {
        return Err(Error::OutOfRange {
            what: "rank",
            value: rank,
            expected: ">= 1".into(),
        });
    }
    let n = dims.len();
    let mut extended = dims;
    extended.push(rank);
    let joint = random_pure(extended, seed)?;
    let reduced = partial_trace(&joint, &[n + 1])?;
    let (matrix, dims) = (reduced.matrix, reduced.dims);
    MultipartiteState::new(matrix, dims, None)
}
