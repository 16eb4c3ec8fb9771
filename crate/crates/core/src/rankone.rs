//! Closed-form q-numerical radius of rank-one operators `a⊗b : x ↦ ⟨x, a⟩ b`.
//!
//! For `q ∈ [0, 1]`
//!
//! ```text
//! ω_q(a⊗b) = (‖a‖‖b‖ + q|⟨a,b⟩|)/2 + (√(1−q²)/2)·√(‖a‖²‖b‖² − |⟨a,b⟩|²)
//! ```
//!
//! which only depends on `‖a‖`, `‖b‖` and `|⟨a,b⟩|`. Everything else in this module
//! (the λ_q factor, the q-profile and its derivatives, block embeddings, the
//! generalized Buzano bound, analytic functions of `a⊗b`) is derived from it.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_unit_interval, Error, Result};
use crate::numeric::{
    inner_unchecked, norm_unchecked, orthogonal_unit, project_off, ComplexVector, DenseOperator, GramWeight,
    CONSTRUCTED_TOL,
};

/// `|⟨a,b⟩| ≤ ORTHOGONAL_BRANCH·‖a‖‖b‖` selects the orthogonal branch of λ_q.
pub const ORTHOGONAL_BRANCH: f64 = 1e-14;
/// `‖b₁‖` below this (for unit `a`, `b`) counts as linearly dependent.
pub const DEPENDENT_TOL: f64 = 1e-12;

/// The operator `a⊗b` under the inner product of a [`GramWeight`], with cached
/// `‖a‖`, `‖b‖` and `⟨a, b⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOnePair {
    a: ComplexVector,
    b: ComplexVector,
    g: GramWeight,
    norm_a_sq: f64,
    norm_b_sq: f64,
    inner_ab: Complex64,
    gap: f64,
}

impl RankOnePair {
    /// Pair under the standard inner product.
    pub fn new(a: ComplexVector, b: ComplexVector) -> Result<Self> {
        let g = GramWeight::identity(a.dim());
        Self::with_gram(a, b, g)
    }

    pub fn with_gram(a: ComplexVector, b: ComplexVector, g: GramWeight) -> Result<Self> {
        a.check_same_dim(&b)?;
        g.check_dim(a.dim())?;
        let norm_a_sq = squared_norm(&a, &g);
        let norm_b_sq = squared_norm(&b, &g);
        let inner_ab = inner_unchecked(&a, &b, &g);
        let nn = (norm_a_sq * norm_b_sq).sqrt();
        if inner_ab.norm() > nn + CONSTRUCTED_TOL * nn.max(1.0) {
            return Err(Error::Numerical(format!("|⟨a,b⟩| = {} exceeds ‖a‖‖b‖ = {nn}", inner_ab.norm())));
        }
        let gap = if norm_a_sq == 0.0 || norm_b_sq == 0.0 {
            0.0
        } else {
            // ‖b‖·‖a − λb‖ with the optimal λ = ⟨a,b⟩/‖b‖², and the mirrored term.
            // The sum is order-independent, so (a, b) and (b, a) agree bitwise.
            let off_b = norm_b_sq.sqrt() * squared_norm(&a.axpy(-inner_ab / norm_b_sq, &b), &g).sqrt();
            let off_a = norm_a_sq.sqrt() * squared_norm(&b.axpy(-inner_ab.conj() / norm_a_sq, &a), &g).sqrt();
            0.5 * (off_b + off_a)
        };
        Ok(Self { a, b, g, norm_a_sq, norm_b_sq, inner_ab, gap })
    }

    pub fn from_real(a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(ComplexVector::from_real(a)?, ComplexVector::from_real(b)?)
    }

    pub fn a(&self) -> &ComplexVector {
        &self.a
    }

    pub fn b(&self) -> &ComplexVector {
        &self.b
    }

    pub fn gram(&self) -> &GramWeight {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn norm_a(&self) -> f64 {
        self.norm_a_sq.sqrt()
    }

    pub fn norm_b(&self) -> f64 {
        self.norm_b_sq.sqrt()
    }

    /// `⟨a, b⟩` under the pair's Gram weight.
    pub fn inner_ab(&self) -> Complex64 {
        self.inner_ab
    }

    /// `‖a⊗b‖ = ‖a‖‖b‖`.
    pub fn operator_norm(&self) -> f64 {
        (self.norm_a_sq * self.norm_b_sq).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.norm_a_sq == 0.0 || self.norm_b_sq == 0.0
    }

    /// The pair `(b, a)`, i.e. the adjoint operator `b⊗a`.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
            g: self.g.clone(),
            norm_a_sq: self.norm_b_sq,
            norm_b_sq: self.norm_a_sq,
            inner_ab: self.inner_ab.conj(),
            gap: self.gap,
        }
    }

    fn require_nonzero(&self, what: &str) -> Result<()> {
        if self.is_zero() {
            return Err(Error::DegenerateInput(format!("{what} is undefined for the zero operator")));
        }
        Ok(())
    }

    /// `√(‖a‖²‖b‖² − |⟨a,b⟩|²)`, evaluated as `‖b‖·min_λ ‖a − λb‖` so that nearly
    /// parallel pairs do not lose half their digits to cancellation.
    pub fn cauchy_schwarz_gap(&self) -> f64 {
        self.gap
    }

    /// ω_q(a⊗b) in closed form. Zero operators give 0.
    pub fn radius(&self, q: f64) -> Result<f64> {
        check_unit_interval("q", q)?;
        if self.is_zero() {
            return Ok(0.0);
        }
        let nn = self.operator_norm();
        let ab = self.inner_ab.norm();
        let gap = self.gap;
        Ok((nn + q * ab) / 2.0 + ((1.0 - q * q).sqrt() / 2.0) * gap)
    }

    /// λ_q(a⊗b) ∈ [0, 1] with `ω_q = λ_q·‖a‖‖b‖`, through its phase form
    /// `(1 + cos(arccos q − arctan √((‖a‖‖b‖/|⟨a,b⟩|)² − 1)))/2`.
    pub fn lambda_factor(&self, q: f64) -> Result<f64> {
        check_unit_interval("q", q)?;
        self.require_nonzero("λ_q")?;
        let nn = self.operator_norm();
        let ab = self.inner_ab.norm();
        if ab <= ORTHOGONAL_BRANCH * nn {
            return Ok((1.0 + (1.0 - q * q).sqrt()) / 2.0);
        }
        let ratio = nn / ab;
        let tangent = (ratio * ratio - 1.0).max(0.0).sqrt();
        Ok((1.0 + (q.acos() - tangent.atan()).cos()) / 2.0)
    }

    /// The unique maximizer `|⟨a,b⟩|/(‖a‖‖b‖)` of `q ↦ ω_q(a⊗b)`.
    pub fn q_star(&self) -> Result<f64> {
        self.require_nonzero("q*")?;
        Ok((self.inner_ab.norm() / self.operator_norm()).clamp(0.0, 1.0))
    }

    /// Value and first two derivatives of `f(q) = ω_q(a⊗b)` on the open interval.
    pub fn profile(&self, q: f64) -> Result<ProfilePoint> {
        self.require_nonzero("the q-profile")?;
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Parameter(format!("derivatives need q in (0, 1), got {q}")));
        }
        let gap = self.gap;
        let c = 1.0 - q * q;
        let s = c.sqrt();
        Ok(ProfilePoint {
            q,
            f: self.radius(q)?,
            f1: self.inner_ab.norm() / 2.0 - q / (2.0 * s) * gap,
            f2: -gap / (2.0 * c * s),
        })
    }

    /// `(min, max)` of `f` over `[0, 1]`:
    /// `((‖a‖‖b‖ + min{|⟨a,b⟩|, gap})/2, ‖a‖‖b‖)`.
    pub fn profile_range(&self) -> Result<(f64, f64)> {
        self.require_nonzero("the q-profile")?;
        let nn = self.operator_norm();
        let gap = self.gap;
        Ok(((nn + self.inner_ab.norm().min(gap)) / 2.0, nn))
    }

    /// Generalized Buzano bound: for unit `x, y` with `⟨x,y⟩ = q`,
    /// `|⟨a,x⟩⟨b,y⟩|` never exceeds this value.
    pub fn buzano_bound(&self, q: f64) -> Result<f64> {
        self.radius(q)
    }

    /// Matrix `M` with `Mx = ⟨x, a⟩_G b`, i.e. `b·(Ga)*`.
    pub fn as_matrix(&self) -> DenseOperator {
        DenseOperator::outer(&self.b, &self.g.matrix().apply(&self.a))
    }

    /// `q|⟨(a⊗b)y, y⟩| + √(1−q²)|⟨(a⊗b)t, y⟩|`, evaluated through the matrix.
    pub fn objective(&self, q: f64, y: &ComplexVector, t: &ComplexVector) -> f64 {
        let m = self.as_matrix();
        let s = (1.0 - q * q).max(0.0).sqrt();
        q * inner_unchecked(&m.apply(y), y, &self.g).norm() + s * inner_unchecked(&m.apply(t), y, &self.g).norm()
    }

    /// Orthonormal pair `(y, t)` attaining the supremum for the normalized pair
    /// `(a/‖a‖, b/‖b‖)`.
    ///
    /// With `q = cos α`, `|⟨a,b⟩| = cos γ`, `β = (α+γ)/2`, `u = b₁/‖b₁‖` where `b₁` is
    /// the part of `b` orthogonal to `a` and `φ = e^{i arg⟨a,b⟩}` (`arg 0 = 0`):
    /// `y = cos β·a + sin β·φu`, `t = sin β·a − cos β·φu`. For dependent `a, b`
    /// the fixed complement direction of [`orthogonal_unit`] stands in for `u`.
    pub fn witness_vectors(&self, q: f64) -> Result<(ComplexVector, ComplexVector)> {
        check_unit_interval("q", q)?;
        self.require_nonzero("a witness pair")?;
        let g = &self.g;
        let a = self.a.scaled_real(1.0 / self.norm_a());
        let b = self.b.scaled_real(1.0 / self.norm_b());
        let b1 = project_off(&b, &a, g)?;
        let b1_norm = norm_unchecked(&b1, g);
        let u = if b1_norm > DEPENDENT_TOL {
            let u = b1.scaled_real(1.0 / b1_norm);
            let u = u.axpy(-inner_unchecked(&u, &a, g), &a);
            u.scaled_real(1.0 / norm_unchecked(&u, g))
        } else {
            orthogonal_unit(&a, g)?
        };
        let ab = inner_unchecked(&a, &b, g);
        let phase = Complex64::from_polar(1.0, ab.arg());
        let alpha = q.acos();
        let gamma = b1_norm.atan2(ab.norm());
        let (sin_beta, cos_beta) = ((alpha + gamma) / 2.0).sin_cos();
        let pu = u.scaled(phase);
        let y = a.scaled_real(cos_beta).axpy(Complex64::new(sin_beta, 0.0), &pu);
        let t = a.scaled_real(sin_beta).axpy(Complex64::new(-cos_beta, 0.0), &pu);
        Ok((y, t))
    }

    /// Pair `((a, 0), (b, 0))` on ℂⁿ ⊕ ℂⁿ; its operator is `[[a⊗b, 0], [0, 0]]`.
    pub fn diagonal_embedding(&self) -> Self {
        let z = ComplexVector::zeros(self.dim());
        Self::with_gram(self.a.concat(&z), self.b.concat(&z), self.g.direct_sum())
            .expect("embedding preserves the pair invariants")
    }

    /// Pair `((0, a), (b, 0))` on ℂⁿ ⊕ ℂⁿ; its operator is `[[0, a⊗b], [0, 0]]`.
    pub fn offdiagonal_embedding(&self) -> Self {
        let z = ComplexVector::zeros(self.dim());
        Self::with_gram(z.concat(&self.a), self.b.concat(&z), self.g.direct_sum())
            .expect("embedding preserves the pair invariants")
    }

    /// The block matrix `[[a⊗b, 0], [0, 0]]`; same ω_q as `a⊗b`.
    pub fn embed_diagonal(&self) -> DenseOperator {
        let z = DenseOperator::zeros(self.dim());
        DenseOperator::block(&self.as_matrix(), &z, &z, &z).expect("equal block sizes")
    }

    /// The block matrix `[[0, a⊗b], [0, 0]]`.
    pub fn embed_offdiagonal(&self) -> DenseOperator {
        let z = DenseOperator::zeros(self.dim());
        DenseOperator::block(&z, &self.as_matrix(), &z, &z).expect("equal block sizes")
    }

    /// Exact ω_q of [`RankOnePair::embed_offdiagonal`]: `(1 + √(1−q²))/2·‖a‖‖b‖`.
    pub fn offdiagonal_radius(&self, q: f64) -> Result<f64> {
        check_unit_interval("q", q)?;
        Ok((1.0 + (1.0 - q * q).sqrt()) / 2.0 * self.operator_norm())
    }

    /// `Σ_{k≥1} α_k ⟨b,a⟩^{k−1}`, the scalar multiplying `a⊗b` in `f(a⊗b)`.
    pub fn series_multiplier(&self, s: &PowerSeries) -> Complex64 {
        s.shifted_sum(self.inner_ab.conj())
    }

    /// `f(a⊗b) = (Σ_{k≥1} α_k⟨b,a⟩^{k−1})·(a⊗b) + α₀·I`.
    pub fn analytic_image(&self, s: &PowerSeries) -> DenseOperator {
        let scaled = self.as_matrix().scaled(self.series_multiplier(s));
        &scaled + &DenseOperator::identity(self.dim()).scaled(s.constant())
    }

    /// Upper bound `ω_q(a⊗b)·|Σ_{k≥1} α_k⟨b,a⟩^{k−1}| + q|α₀|` on ω_q(f(a⊗b)).
    pub fn analytic_bound(&self, s: &PowerSeries, q: f64) -> Result<f64> {
        Ok(self.radius(q)? * self.series_multiplier(s).norm() + q * s.constant().norm())
    }

    /// Full report without oracle fields.
    pub fn report(&self, q: f64, with_witness: bool) -> Result<RadiusReport> {
        let radius = self.radius(q)?;
        let lambda_q = self.lambda_factor(q)?;
        let q_star = self.q_star()?;
        let (witness_y, witness_t) = if with_witness {
            let (y, t) = self.witness_vectors(q)?;
            (Some(y), Some(t))
        } else {
            (None, None)
        };
        Ok(RadiusReport {
            q,
            radius,
            lambda_q: Some(lambda_q),
            q_star: Some(q_star),
            witness_y,
            witness_t,
            oracle_estimate: None,
            oracle_gap: None,
        })
    }
}

/// `f(q)`, `f′(q)`, `f″(q)` for `f(q) = ω_q(a⊗b)`.
fn squared_norm(x: &ComplexVector, g: &GramWeight) -> f64 {
    inner_unchecked(x, x, g).re.max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub q: f64,
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
}

/// Finite power series `f(λ) = Σ α_k λ^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coefficients: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Parameter("a power series needs at least one coefficient".into()));
        }
        Ok(Self { coefficients })
    }

    pub fn from_real(coefficients: &[f64]) -> Result<Self> {
        Self::new(coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `f(λ) = λ^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); k + 1];
        coefficients[k] = Complex64::new(1.0, 0.0);
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn constant(&self) -> Complex64 {
        self.coefficients[0]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// `Σ_{k≥1} α_k z^{k−1}`.
    pub fn shifted_sum(&self, z: Complex64) -> Complex64 {
        self.coefficients[1..].iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }
}

/// Closed-form values for one `(a, b, q)`, optionally certified by the oracle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusReport {
    pub q: f64,
    pub radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_y: Option<ComplexVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_t: Option<ComplexVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_gap: Option<f64>,
}

impl RadiusReport {
    /// Bare report carrying only `q` and the radius.
    pub fn radius_only(q: f64, radius: f64) -> Self {
        Self {
            q,
            radius,
            lambda_q: None,
            q_star: None,
            witness_y: None,
            witness_t: None,
            oracle_estimate: None,
            oracle_gap: None,
        }
    }

    pub fn with_oracle(mut self, estimate: f64) -> Self {
        self.oracle_estimate = Some(estimate);
        self.oracle_gap = Some(self.radius - estimate);
        self
    }
}
