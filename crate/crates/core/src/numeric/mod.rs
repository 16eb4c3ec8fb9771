//! Complex linear algebra on ℂⁿ and seeded sampling primitives.
//!
//! Inner products are linear in the first slot and conjugate-linear in the second,
//! `⟨x, y⟩_G = Σᵢⱼ G[i][j]·x[j]·conj(y[i])`. With this convention the rank-one
//! operator `x ↦ ⟨x, a⟩ b` has the matrix `b·a*` under the standard weight.

mod gram;
mod operator;
pub mod sampling;
mod vector;

use num_complex::Complex64;

pub use gram::{GramWeight, HERMITIAN_TOL};
pub use operator::{DenseOperator, MatrixFile};
pub use sampling::{random_unit, random_unit_orthogonal, random_unitary, SeedStream};
pub use vector::ComplexVector;

use crate::error::{Error, Result};

/// Tolerance for vectors this crate constructs.
pub const CONSTRUCTED_TOL: f64 = 1e-12;
/// Tolerance for unit-norm checks on caller-supplied vectors.
pub const INPUT_TOL: f64 = 1e-9;

/// `⟨x, y⟩_G`.
pub fn inner(x: &ComplexVector, y: &ComplexVector, g: &GramWeight) -> Result<Complex64> {
    x.check_same_dim(y)?;
    g.check_dim(x.dim())?;
    Ok(inner_unchecked(x, y, g))
}

pub(crate) fn inner_unchecked(x: &ComplexVector, y: &ComplexVector, g: &GramWeight) -> Complex64 {
    if g.is_identity() {
        return inner_std(x, y);
    }
    inner_std(&g.matrix().apply(x), y)
}

/// Standard inner product `Σ x[i]·conj(y[i])`.
#[inline]
pub fn inner_std(x: &ComplexVector, y: &ComplexVector) -> Complex64 {
    x.entries().iter().zip(y.entries()).map(|(a, b)| a * b.conj()).sum()
}

#[inline]
pub fn norm_std(x: &ComplexVector) -> f64 {
    x.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm(x: &ComplexVector, g: &GramWeight) -> Result<f64> {
    g.check_dim(x.dim())?;
    Ok(norm_unchecked(x, g))
}

pub(crate) fn norm_unchecked(x: &ComplexVector, g: &GramWeight) -> f64 {
    if g.is_identity() {
        return norm_std(x);
    }
    // Through the isometry, so the result is a true Euclidean norm and never NaN.
    norm_std(&g.to_standard(x))
}

/// Component of `x` that is `G`-orthogonal to `u`: `x − (⟨x,u⟩/⟨u,u⟩)·u`.
pub fn project_off(x: &ComplexVector, u: &ComplexVector, g: &GramWeight) -> Result<ComplexVector> {
    x.check_same_dim(u)?;
    g.check_dim(x.dim())?;
    let uu = norm_unchecked(u, g).powi(2);
    if uu == 0.0 {
        return Err(Error::DegenerateInput("cannot project off the zero vector".into()));
    }
    Ok(project_off_unchecked(x, u, uu, g))
}

fn project_off_unchecked(x: &ComplexVector, u: &ComplexVector, uu: f64, g: &GramWeight) -> ComplexVector {
    let once = x.axpy(-inner_unchecked(x, u, g) / uu, u);
    // Second pass removes the cancellation residue of the first.
    once.axpy(-inner_unchecked(&once, u, g) / uu, u)
}

pub fn normalize(x: &ComplexVector, g: &GramWeight) -> Result<ComplexVector> {
    let n = norm(x, g)?;
    if n == 0.0 {
        return Err(Error::DegenerateInput("cannot normalize the zero vector".into()));
    }
    Ok(x.scaled_real(1.0 / n))
}

/// Deterministic unit vector `G`-orthogonal to `u`: the first standard basis
/// direction not parallel to `u`, Gram–Schmidt-corrected.
pub fn orthogonal_unit(u: &ComplexVector, g: &GramWeight) -> Result<ComplexVector> {
    g.check_dim(u.dim())?;
    let uu = norm_unchecked(u, g).powi(2);
    if uu == 0.0 {
        return Err(Error::DegenerateInput("zero vector has no distinguished complement".into()));
    }
    let n = u.dim();
    // Pick the basis vector with the largest residual; ties go to the lowest index.
    let mut best: Option<(f64, ComplexVector)> = None;
    for k in 0..n {
        let e = ComplexVector::basis(n, k);
        let r = project_off_unchecked(&e, u, uu, g);
        let rn = norm_unchecked(&r, g);
        let en = norm_unchecked(&e, g);
        if rn > 0.5 * en {
            return Ok(r.scaled_real(1.0 / rn));
        }
        if best.as_ref().map_or(true, |(b, _)| rn / en > *b) {
            best = Some((rn / en, r.scaled_real(1.0 / rn)));
        }
    }
    Ok(best.expect("n ≥ 2").1)
}
