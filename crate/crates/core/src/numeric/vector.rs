use std::ops::{Add, Index, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Element of ℂⁿ with n ≥ 2.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::Dimension(format!("vectors need dimension at least 2, got {}", entries.len())));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parameter("vector entries must be finite".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 2, "dimension must be at least 2");
        Self { entries: vec![Complex64::new(0.0, 0.0); dim] }
    }

    /// Standard basis vector `e_{k+1}` (zero-based `k`).
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<Complex64>) -> Self {
        debug_assert!(entries.len() >= 2);
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { entries: self.entries.iter().map(|z| z * c).collect() }
    }

    pub fn scaled_real(&self, c: f64) -> Self {
        Self { entries: self.entries.iter().map(|z| z * c).collect() }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: Complex64, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self { entries: self.entries.iter().zip(&other.entries).map(|(x, y)| x + c * y).collect() }
    }

    /// Concatenation `(self, other)`, used for direct sums ℂⁿ ⊕ ℂᵐ.
    pub fn concat(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self { entries }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("vector dimensions {} and {} differ", self.dim(), other.dim())));
        }
        Ok(())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;

    fn add(self, rhs: Self) -> ComplexVector {
        self.axpy(Complex64::new(1.0, 0.0), rhs)
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;

    fn sub(self, rhs: Self) -> ComplexVector {
        self.axpy(Complex64::new(-1.0, 0.0), rhs)
    }
}

/// On-disk form: `{"dim": n, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct VectorFile {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VectorFile { dim: self.dim(), entries: self.entries.iter().map(|z| [z.re, z.im]).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = VectorFile::deserialize(deserializer)?;
        if file.entries.len() != file.dim {
            return Err(serde::de::Error::custom(format!(
                "dim is {} but {} entries were given",
                file.dim,
                file.entries.len()
            )));
        }
        ComplexVector::new(file.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}
