use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::constructors::ginibre;
use super::TOL_CPTP;
use crate::linalg::{self, ONE, ZERO};
use crate::{c64, ComplexMatrix, Error, Result};

/// A single-party CPTP map in Kraus form.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    party_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates shapes and completeness `Σ K†K = I`.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let d = first.nrows();
        if d == 0 {
            return Err(Error::InvalidChannel(
                "zero-dimensional Kraus operator".into(),
            ));
        }
        let mut sum = Mat::<c64>::zeros(d, d);
        for (j, k) in kraus.iter().enumerate() {
            if k.nrows() != d || k.ncols() != d {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operator {j} is {}x{}, expected {d}x{d}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            if !linalg::all_finite(k.as_ref()) {
                return Err(Error::NonFinite);
            }
            sum += k.adjoint() * k;
        }
        let defect = linalg::max_norm((&sum - Mat::<c64>::identity(d, d)).as_ref());
        if defect > TOL_CPTP {
            return Err(Error::InvalidChannel(format!(
                "Σ K†K deviates from I by {defect:e}"
            )));
        }
        Ok(KrausChannel {
            party_dim: d,
            kraus,
        })
    }

    pub fn party_dim(&self) -> usize {
        self.party_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(vec![Mat::identity(d, d)])
    }

    /// `ρ ↦ (1−p) ρ + p tr(ρ) I/d`, built from the `d²` clock-and-shift operators.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!(
                "depolarizing probability {p} not in [0, 1]"
            )));
        }
        let dd = (d * d) as f64;
        let omega = 2.0 * std::f64::consts::PI / d as f64;
        let mut kraus = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let weight = if a == 0 && b == 0 {
                    1.0 - p + p / dd
                } else {
                    p / dd
                };
                if weight == 0.0 {
                    continue;
                }
                let amp = weight.sqrt();
                // X^a Z^b |j⟩ = ω^{bj} |j + a⟩
                kraus.push(Mat::from_fn(d, d, |row, col| {
                    if row == (col + a) % d {
                        c64::from_polar(amp, omega * (b * col) as f64)
                    } else {
                        ZERO
                    }
                }));
            }
        }
        Self::new(kraus)
    }

    /// Complete dephasing in the computational basis.
    pub fn dephasing(d: usize) -> Result<Self> {
        let kraus = (0..d)
            .map(|k| Mat::from_fn(d, d, |i, j| if i == k && j == k { ONE } else { ZERO }))
            .collect();
        Self::new(kraus)
    }

    /// Qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidChannel(format!(
                "damping {gamma} not in [0, 1]"
            )));
        }
        let k0 = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => ONE,
            (1, 1) => c64::new((1.0 - gamma).sqrt(), 0.0),
            _ => ZERO,
        });
        let k1 = Mat::from_fn(2, 2, |i, j| {
            if (i, j) == (0, 1) {
                c64::new(gamma.sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        Self::new(vec![k0, k1])
    }

    /// Random channel with `n_kraus` operators, cut from a Haar-like isometry
    /// `C^d → C^{d·n_kraus}` (QR of a Ginibre matrix).
    pub fn random(d: usize, n_kraus: usize, seed: u64) -> Result<Self> {
        if d == 0 || n_kraus == 0 {
            return Err(Error::InvalidChannel(
                "random channel needs d ≥ 1 and at least one Kraus operator".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = ginibre(&mut rng, d * n_kraus, d);
        let q = g.qr().compute_thin_Q();
        let kraus = (0..n_kraus)
            .map(|j| Mat::from_fn(d, d, |row, col| q[(j * d + row, col)]))
            .collect();
        Self::new(kraus)
    }
}
