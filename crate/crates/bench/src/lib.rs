//! Shared fixtures for the benchmarks.

use qradius_core::numeric::sampling::gaussian_vector;
use qradius_core::{DenseOperator, RankOnePair, SeedStream};

/// Gaussian pair in ℂ^dim drawn from `seed`.
pub fn random_pair(dim: usize, seed: u64) -> RankOnePair {
    let mut rng = SeedStream::new(seed).rng();
    RankOnePair::new(gaussian_vector(dim, &mut rng), gaussian_vector(dim, &mut rng)).unwrap()
}

/// Dense Gaussian matrix of size n.
pub fn random_matrix(n: usize, seed: u64) -> DenseOperator {
    let mut rng = SeedStream::new(seed).rng();
    DenseOperator::from_rows((0..n).map(|_| gaussian_vector(n, &mut rng).into_entries()).collect()).unwrap()
}
