//! Seeded random streams and Haar-distributed samplers.
//!
//! Every sampler is a pure function of the generator state it is handed. Parallel
//! work derives one [`SeedStream`] child per task index, so results never depend
//! on scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::gram::GramWeight;
use super::operator::DenseOperator;
use super::vector::ComplexVector;
use super::{inner_unchecked, norm_std, norm_unchecked, INPUT_TOL};
use crate::error::{Error, Result};

pub type StreamRng = ChaCha8Rng;

/// Root of a tree of deterministic random substreams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeedStream {
    key: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { key: splitmix64(seed) }
    }

    /// Substream for task `index`; distinct indices give unrelated streams.
    pub fn child(&self, index: u64) -> Self {
        Self { key: splitmix64(self.key ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D))) }
    }

    /// Stable identifier of this substream, reported alongside failures.
    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn from_key(key: u64) -> Self {
        Self { key }
    }

    pub fn rng(&self) -> StreamRng {
        ChaCha8Rng::seed_from_u64(self.key)
    }
}

/// Standard complex Gaussian scalar, `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Vector of i.i.d. standard complex Gaussians.
pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    assert!(dim >= 2, "dimension must be at least 2");
    ComplexVector::from_vec_unchecked((0..dim).map(|_| complex_gaussian(rng)).collect())
}

/// Uniform point on the `G`-unit sphere of ℂⁿ.
pub fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R, g: &GramWeight) -> Result<ComplexVector> {
    if dim < 2 {
        return Err(Error::Dimension(format!("dimension must be at least 2, got {dim}")));
    }
    g.check_dim(dim)?;
    loop {
        let z = gaussian_vector(dim, rng);
        let r = norm_std(&z);
        if r > 0.0 {
            return Ok(g.from_standard(&z.scaled_real(1.0 / r)));
        }
    }
}

/// Uniform unit vector in the `G`-orthogonal complement of the unit vector `y`.
pub fn random_unit_orthogonal<R: Rng + ?Sized>(
    y: &ComplexVector,
    rng: &mut R,
    g: &GramWeight,
) -> Result<ComplexVector> {
    g.check_dim(y.dim())?;
    let ny = norm_unchecked(y, g);
    if (ny - 1.0).abs() > INPUT_TOL {
        return Err(Error::Parameter(format!("expected a unit vector, got norm {ny}")));
    }
    loop {
        let w = g.from_standard(&gaussian_vector(y.dim(), rng));
        let w = w.axpy(-inner_unchecked(&w, y, g), y);
        let w = w.axpy(-inner_unchecked(&w, y, g), y);
        let r = norm_unchecked(&w, g);
        // A draw almost parallel to y loses too many digits in the projection.
        if r > 1e-6 {
            let t = w.scaled_real(1.0 / r);
            return Ok(t.axpy(-inner_unchecked(&t, y, g), y));
        }
    }
}

/// Haar-distributed unitary: orthonormalized complex Gaussian columns, which is
/// the QR factor whose `R` has a positive real diagonal.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DenseOperator> {
    if dim < 2 {
        return Err(Error::Dimension(format!("dimension must be at least 2, got {dim}")));
    }
    'draw: loop {
        let mut cols: Vec<ComplexVector> = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut v = gaussian_vector(dim, rng);
            // Classical Gram–Schmidt, applied twice.
            for _ in 0..2 {
                for q in &cols {
                    v = v.axpy(-super::inner_std(&v, q), q);
                }
            }
            let r = norm_std(&v);
            if r < 1e-8 {
                continue 'draw;
            }
            cols.push(v.scaled_real(1.0 / r));
        }
        let mut u = DenseOperator::zeros(dim);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..dim {
                u.set(i, j, c[i]);
            }
        }
        return Ok(u);
    }
}
