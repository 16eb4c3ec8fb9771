use num_complex::Complex64;

use super::operator::DenseOperator;
use super::vector::ComplexVector;
use crate::error::{Error, Result};

/// Hermitian tolerance for user-supplied Gram matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Hermitian positive-definite matrix `G` defining `⟨x, y⟩_G = ⟨Gx, y⟩`.
///
/// The Cholesky factor `G = L L*` is computed once at construction; it doubles as
/// the positive-definiteness check and as the isometry `x ↦ L* x` onto standard ℂⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct GramWeight {
    matrix: DenseOperator,
    cholesky: DenseOperator,
    identity: bool,
}

impl GramWeight {
    pub fn identity(n: usize) -> Self {
        Self { matrix: DenseOperator::identity(n), cholesky: DenseOperator::identity(n), identity: true }
    }

    pub fn new(matrix: DenseOperator) -> Result<Self> {
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::NotPositiveDefinite("matrix is not hermitian".into()));
        }
        let cholesky = cholesky(&matrix)?;
        let identity = matrix == DenseOperator::identity(matrix.n());
        Ok(Self { matrix, cholesky, identity })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(DenseOperator::diagonal(&values.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>()))
    }

    pub fn dim(&self) -> usize {
        self.matrix.n()
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn matrix(&self) -> &DenseOperator {
        &self.matrix
    }

    /// Lower-triangular `L` with `G = L L*`.
    pub fn cholesky_factor(&self) -> &DenseOperator {
        &self.cholesky
    }

    /// `G ⊕ G` on ℂⁿ ⊕ ℂⁿ.
    pub fn direct_sum(&self) -> Self {
        let zero = DenseOperator::zeros(self.dim());
        let matrix = DenseOperator::block(&self.matrix, &zero, &zero, &self.matrix).expect("equal blocks");
        let cholesky = DenseOperator::block(&self.cholesky, &zero, &zero, &self.cholesky).expect("equal blocks");
        Self { matrix, cholesky, identity: self.identity }
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::Dimension(format!(
                "gram weight has size {} but vectors have dimension {dim}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// `x ↦ L* x`, an isometry from (ℂⁿ, ⟨·,·⟩_G) onto standard ℂⁿ.
    pub fn to_standard(&self, x: &ComplexVector) -> ComplexVector {
        if self.identity {
            return x.clone();
        }
        self.cholesky.apply_adjoint(x)
    }

    /// Inverse of [`GramWeight::to_standard`]: solves `L* x = z`.
    pub fn from_standard(&self, z: &ComplexVector) -> ComplexVector {
        if self.identity {
            return z.clone();
        }
        let n = self.dim();
        let l = &self.cholesky;
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            // (L*)[i][j] = conj(L[j][i]), upper triangular.
            let mut s = z[i];
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                s -= l.get(j, i).conj() * xj;
            }
            x[i] = s / l.get(i, i).re;
        }
        ComplexVector::from_vec_unchecked(x)
    }

    /// Matrix of `A` in the standard coordinates given by [`GramWeight::to_standard`],
    /// i.e. `L* A L^{-*}`. Numerical ranges under `G` of `A` equal the standard
    /// numerical ranges of the result.
    pub fn operator_to_standard(&self, a: &DenseOperator) -> DenseOperator {
        if self.identity {
            return a.clone();
        }
        let n = self.dim();
        let cols: Vec<ComplexVector> = (0..n)
            .map(|j| {
                let col = self.from_standard(&ComplexVector::basis(n, j));
                self.to_standard(&a.apply(&col))
            })
            .collect();
        let mut out = DenseOperator::zeros(n);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                out.set(i, j, col[i]);
            }
        }
        out
    }
}

fn cholesky(g: &DenseOperator) -> Result<DenseOperator> {
    let n = g.n();
    let mut l = DenseOperator::zeros(n);
    for j in 0..n {
        let mut d = g.get(j, j).re;
        for k in 0..j {
            d -= l.get(j, k).norm_sqr();
        }
        if d.is_nan() || d <= 0.0 {
            return Err(Error::NotPositiveDefinite(format!("non-positive pivot {d:e} at column {j}")));
        }
        let d = d.sqrt();
        l.set(j, j, Complex64::new(d, 0.0));
        for i in j + 1..n {
            let mut s = g.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, s / d);
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let m = DenseOperator::from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]).unwrap();
        assert!(matches!(GramWeight::new(m), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn rejects_indefinite() {
        let m = DenseOperator::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(matches!(GramWeight::new(m), Err(Error::NotPositiveDefinite(_))));
        assert!(GramWeight::diagonal(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn cholesky_reconstructs() {
        let g = DenseOperator::from_rows(vec![
            vec![Complex64::new(4.0, 0.0), Complex64::new(1.0, -1.0)],
            vec![Complex64::new(1.0, 1.0), Complex64::new(3.0, 0.0)],
        ])
        .unwrap();
        let w = GramWeight::new(g.clone()).unwrap();
        let l = w.cholesky_factor();
        assert!(l.matmul(&l.adjoint()).max_abs_diff(&g) < 1e-14);
    }

    #[test]
    fn standard_coordinates_roundtrip() {
        let w = GramWeight::diagonal(&[4.0, 9.0]).unwrap();
        let x = ComplexVector::from_real(&[1.0, -2.0]).unwrap();
        let z = w.to_standard(&x);
        assert!(z.max_abs_diff(&ComplexVector::from_real(&[2.0, -6.0]).unwrap()) < 1e-15);
        assert!(w.from_standard(&z).max_abs_diff(&x) < 1e-15);
    }
}
