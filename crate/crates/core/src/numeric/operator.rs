use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::vector::ComplexVector;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix of size n ≥ 2, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::Dimension(format!("operators need n ≥ 2, got {n}")));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "matrix is not square: row of length {} in a {n}-row matrix",
                bad.len()
            )));
        }
        let data: Vec<Complex64> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parameter("matrix entries must be finite".into()));
        }
        Ok(Self { n, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect()).collect())
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 2, "operator size must be at least 2");
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    /// Outer product `u·v*`.
    pub fn outer(u: &ComplexVector, v: &ComplexVector) -> Self {
        assert_eq!(u.dim(), v.dim());
        let n = u.dim();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(u[i] * v[j].conj());
            }
        }
        Self { n, data }
    }

    /// Builds the 2×2 block matrix `[[tl, tr], [bl, br]]`.
    pub fn block(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Result<Self> {
        let n = tl.n;
        if [tr.n, bl.n, br.n].iter().any(|&m| m != n) {
            return Err(Error::Dimension("blocks must share one size".into()));
        }
        let mut out = Self::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, tl.get(i, j));
                out.set(i, j + n, tr.get(i, j));
                out.set(i + n, j, bl.get(i, j));
                out.set(i + n, j + n, br.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.n + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.n).map(<[Complex64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec_unchecked((0..self.n).map(|i| self.get(i, j)).collect())
    }

    pub fn apply(&self, x: &ComplexVector) -> ComplexVector {
        assert_eq!(x.dim(), self.n, "operator/vector size mismatch");
        let out = self.data.chunks(self.n).map(|row| row.iter().zip(x.entries()).map(|(a, b)| a * b).sum()).collect();
        ComplexVector::from_vec_unchecked(out)
    }

    /// `A*x` without forming the adjoint.
    pub fn apply_adjoint(&self, x: &ComplexVector) -> ComplexVector {
        assert_eq!(x.dim(), self.n, "operator/vector size mismatch");
        let mut out = vec![ZERO; self.n];
        for (i, row) in self.data.chunks(self.n).enumerate() {
            let xi = x[i];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * xi;
            }
        }
        ComplexVector::from_vec_unchecked(out)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut m = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| m[a * n + col].norm().total_cmp(&m[b * n + col].norm()))
                .expect("non-empty range");
            if m[pivot * n + col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = m[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = m[r * n + col] / p;
                for j in col..n {
                    let v = m[col * n + j];
                    m[r * n + j] -= factor * v;
                }
            }
        }
        det
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;

    fn add(self, rhs: Self) -> DenseOperator {
        assert_eq!(self.n, rhs.n);
        DenseOperator { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: Self) -> DenseOperator {
        self.matmul(rhs)
    }
}

/// On-disk form: `{"n": n, "rows": [[[re, im], ...], ...], "gram": optional same shape}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<[f64; 2]>>>,
}

fn parse_rows(n: usize, rows: &[Vec<[f64; 2]>]) -> Result<DenseOperator> {
    if rows.len() != n {
        return Err(Error::Dimension(format!("n is {n} but {} rows were given", rows.len())));
    }
    DenseOperator::from_rows(rows.iter().map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect())
}

fn encode_rows(m: &DenseOperator) -> Vec<Vec<[f64; 2]>> {
    m.rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect()
}

impl MatrixFile {
    pub fn from_operator(m: &DenseOperator) -> Self {
        Self { n: m.n(), rows: encode_rows(m), gram: None }
    }

    pub fn operator(&self) -> Result<DenseOperator> {
        parse_rows(self.n, &self.rows)
    }

    pub fn gram_matrix(&self) -> Result<Option<DenseOperator>> {
        self.gram.as_deref().map(|g| parse_rows(self.n, g)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_square() {
        let err = DenseOperator::from_rows(vec![vec![ONE, ZERO], vec![ONE]]);
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn adjoint_application_matches_explicit_adjoint() {
        let a =
            DenseOperator::from_rows(vec![vec![c(1.0, 2.0), c(0.0, -1.0)], vec![c(3.0, 0.5), c(-2.0, 1.0)]]).unwrap();
        let x = ComplexVector::new(vec![c(0.3, -0.7), c(1.1, 0.2)]).unwrap();
        assert!(a.apply_adjoint(&x).max_abs_diff(&a.adjoint().apply(&x)) < 1e-15);
    }

    #[test]
    fn determinant_small_cases() {
        let m = DenseOperator::from_real_rows(&[&[0.0, 2.0], &[3.0, 1.0]]).unwrap();
        assert!((m.determinant() - c(-6.0, 0.0)).norm() < 1e-14);
        let d = DenseOperator::diagonal(&[c(0.0, 1.0), c(2.0, 0.0), c(-1.0, 0.0)]);
        assert!((d.determinant() - c(0.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn matrix_file_roundtrip() {
        let json = r#"{"n":2,"rows":[[[0,0],[1,0]],[[0,0],[0,0]]]}"#;
        let f: MatrixFile = serde_json::from_str(json).unwrap();
        let m = f.operator().unwrap();
        assert_eq!(m.get(0, 1), ONE);
        assert!(f.gram_matrix().unwrap().is_none());
    }

    #[test]
    fn matrix_file_row_count_mismatch() {
        let f: MatrixFile = serde_json::from_str(r#"{"n":3,"rows":[[[0,0],[1,0]],[[0,0],[0,0]]]}"#).unwrap();
        assert!(f.operator().is_err());
    }
}
