//! Brute-force estimation of the q-numerical range and radius of a dense operator.
//!
//! The radius is the supremum of `q|⟨Ay,y⟩| + √(1−q²)|⟨At,y⟩|` over orthonormal
//! pairs `(y, t)`. For fixed `y` the maximum over `t ⊥ y` is `‖(I − yy*)A*y‖`,
//! attained at `t ∝ (I − yy*)A*y`, so the search runs over `y` alone with a
//! derivative-free random-restart hill climb. Every accepted value is a point of
//! the range, hence the estimate approaches the radius from below.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_unit_interval, Error, Result};
use crate::numeric::sampling::gaussian_vector;
use crate::numeric::{
    inner_std, norm_std, orthogonal_unit, random_unit, random_unit_orthogonal, ComplexVector, DenseOperator,
    GramWeight, SeedStream, INPUT_TOL,
};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    pub restarts: usize,
    /// Random candidates drawn per restart; the best one starts the climb.
    pub samples_per_restart: usize,
    /// Initial proposal step, in radians along the sphere.
    pub initial_step: f64,
    pub step_shrink: f64,
    pub min_step: f64,
    /// Consecutive rejections that count as a full round; `None` uses `4n`.
    pub rejections_per_round: Option<usize>,
    /// Hard cap on objective evaluations per restart.
    pub max_evaluations: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            samples_per_restart: 1,
            initial_step: 0.5,
            step_shrink: 0.5,
            min_step: 1e-6,
            rejections_per_round: None,
            max_evaluations: 200_000,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn with_restarts(restarts: usize, seed: u64) -> Self {
        Self { restarts, seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Parameter(msg.to_string()));
        if self.restarts < 1 {
            return bad("restarts must be at least 1");
        }
        if self.samples_per_restart < 1 {
            return bad("samples_per_restart must be at least 1");
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return bad("initial_step must be positive");
        }
        if !(self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return bad("step_shrink must lie in (0, 1)");
        }
        if self.min_step.is_nan() || self.min_step <= 0.0 {
            return bad("min_step must be positive");
        }
        if self.rejections_per_round == Some(0) {
            return bad("rejections_per_round must be at least 1");
        }
        Ok(())
    }
}

/// A point `q⟨Ay,y⟩ + √(1−|q|²)⟨At,y⟩` of the q-numerical range with its pair.
#[derive(Clone, Debug, PartialEq)]
pub struct RangePoint {
    pub value: Complex64,
    pub y: ComplexVector,
    pub t: ComplexVector,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub witness_y: ComplexVector,
    pub witness_t: ComplexVector,
}

/// Reduced objective at one `y`, with the maximizing `t` when it is unique up to phase.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedValue {
    pub value: f64,
    pub t: Option<ComplexVector>,
}

fn check_q_modulus(q: Complex64) -> Result<f64> {
    let m = q.norm();
    if m.is_nan() || m > 1.0 + 1e-12 {
        return Err(Error::Parameter(format!("|q| = {m} exceeds 1")));
    }
    Ok((1.0 - m * m).max(0.0).sqrt())
}

fn check_square(a: &DenseOperator, dim: usize) -> Result<()> {
    if a.n() != dim {
        return Err(Error::Dimension(format!("operator has size {} but vectors have dimension {dim}", a.n())));
    }
    Ok(())
}

/// `⟨Ax, y⟩` with `x = q·y + √(1−|q|²)·t` for a given orthonormal pair.
pub fn range_point(a: &DenseOperator, q: Complex64, y: &ComplexVector, t: &ComplexVector) -> Result<RangePoint> {
    let s = check_q_modulus(q)?;
    check_square(a, y.dim())?;
    y.check_same_dim(t)?;
    let x = y.scaled(q).axpy(Complex64::new(s, 0.0), t);
    Ok(RangePoint { value: inner_std(&a.apply(&x), y), y: y.clone(), t: t.clone() })
}

/// One point of `W_q(A)` from a Haar-random orthonormal pair.
pub fn direct_sample<R: Rng + ?Sized>(a: &DenseOperator, q: Complex64, rng: &mut R) -> Result<RangePoint> {
    check_q_modulus(q)?;
    let id = GramWeight::identity(a.n());
    let y = random_unit(a.n(), rng, &id)?;
    let t = random_unit_orthogonal(&y, rng, &id)?;
    range_point(a, q, &y, &t)
}

/// `count` i.i.d. range points; point `i` uses substream `i` of `stream`.
pub fn sample_range_cloud(
    a: &DenseOperator,
    q: Complex64,
    count: usize,
    stream: SeedStream,
) -> Result<Vec<RangePoint>> {
    check_q_modulus(q)?;
    (0..count).into_par_iter().map(|i| direct_sample(a, q, &mut stream.child(i as u64).rng())).collect()
}

pub fn max_modulus(points: &[RangePoint]) -> f64 {
    points.iter().map(|p| p.value.norm()).fold(0.0, f64::max)
}

#[inline]
fn reduced(a: &DenseOperator, q: f64, s: f64, y: &ComplexVector) -> (f64, ComplexVector) {
    let diag = inner_std(&a.apply(y), y);
    let w = a.apply_adjoint(y);
    let p = w.axpy(-inner_std(&w, y), y);
    (q * diag.norm() + s * norm_std(&p), p)
}

/// `h(y) = q|⟨Ay,y⟩| + √(1−q²)·‖(I − yy*)A*y‖` for unit `y`.
pub fn reduced_objective(a: &DenseOperator, q: f64, y: &ComplexVector) -> Result<ReducedValue> {
    check_unit_interval("q", q)?;
    check_square(a, y.dim())?;
    let ny = norm_std(y);
    if (ny - 1.0).abs() > INPUT_TOL {
        return Err(Error::Parameter(format!("expected a unit vector, got norm {ny}")));
    }
    let s = (1.0 - q * q).sqrt();
    let (value, p) = reduced(a, q, s, y);
    let pn = norm_std(&p);
    let t = (pn > 0.0).then(|| {
        let t = p.scaled_real(1.0 / pn);
        let t = t.axpy(-inner_std(&t, y), y);
        t.scaled_real(1.0 / norm_std(&t))
    });
    Ok(ReducedValue { value, t })
}

fn normalized(v: &ComplexVector) -> ComplexVector {
    v.scaled_real(1.0 / norm_std(v))
}

struct Climb {
    value: f64,
    y: ComplexVector,
}

fn hill_climb(
    a: &DenseOperator,
    q: f64,
    cfg: &OracleConfig,
    start: Option<&ComplexVector>,
    stream: SeedStream,
) -> Climb {
    let n = a.n();
    let s = (1.0 - q * q).sqrt();
    let id = GramWeight::identity(n);
    let mut rng = stream.rng();
    let h = |y: &ComplexVector| reduced(a, q, s, y).0;

    let (mut y, mut value) = match start {
        Some(y0) => {
            let y0 = normalized(y0);
            let v = h(&y0);
            (y0, v)
        }
        None => {
            let mut best: Option<(ComplexVector, f64)> = None;
            for _ in 0..cfg.samples_per_restart {
                let cand = random_unit(n, &mut rng, &id).expect("n ≥ 2");
                let v = h(&cand);
                if best.as_ref().map_or(true, |(_, b)| v > *b) {
                    best = Some((cand, v));
                }
            }
            best.expect("samples_per_restart ≥ 1")
        }
    };

    let round = cfg.rejections_per_round.unwrap_or(4 * n);
    let mut step = cfg.initial_step;
    let mut rejections = 0;
    let mut evaluations = 0;
    while step >= cfg.min_step && evaluations < cfg.max_evaluations {
        let d = gaussian_vector(n, &mut rng);
        let d = d.axpy(-inner_std(&d, &y), &y);
        let dn = norm_std(&d);
        if dn == 0.0 {
            continue;
        }
        let cand = normalized(&y.axpy(Complex64::new(step / dn, 0.0), &d));
        let v = h(&cand);
        evaluations += 1;
        if v > value {
            y = cand;
            value = v;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= round {
                step *= cfg.step_shrink;
                rejections = 0;
            }
        }
    }
    Climb { value, y }
}

/// Lower estimate of ω_q(A) from `cfg.restarts` independent climbs.
pub fn estimate_radius(a: &DenseOperator, q: f64, cfg: &OracleConfig) -> Result<Estimate> {
    estimate_radius_from(a, q, cfg, &[])
}

/// As [`estimate_radius`], with restart `i < starts.len()` beginning at `starts[i]`.
pub fn estimate_radius_from(
    a: &DenseOperator,
    q: f64,
    cfg: &OracleConfig,
    starts: &[ComplexVector],
) -> Result<Estimate> {
    check_unit_interval("q", q)?;
    cfg.validate()?;
    for y in starts {
        check_square(a, y.dim())?;
        if norm_std(y) == 0.0 {
            return Err(Error::DegenerateInput("start vector is zero".into()));
        }
    }
    let root = SeedStream::new(cfg.seed);
    let climbs: Vec<Climb> = (0..cfg.restarts.max(starts.len()))
        .into_par_iter()
        .map(|i| hill_climb(a, q, cfg, starts.get(i), root.child(i as u64)))
        .collect();
    // First maximum wins, independent of scheduling.
    let best =
        climbs.into_iter().reduce(|best, c| if c.value > best.value { c } else { best }).expect("at least one restart");
    let reduced = reduced_objective(a, q, &best.y)?;
    let t = match reduced.t {
        Some(t) => t,
        None => orthogonal_unit(&best.y, &GramWeight::identity(a.n()))?,
    };
    Ok(Estimate { estimate: best.value, witness_y: best.y, witness_t: t })
}

/// ω_q of `A` under the inner product of `g`, estimated in the isometric
/// standard coordinates. Witnesses are mapped back to the original coordinates.
pub fn estimate_radius_gram(a: &DenseOperator, g: &GramWeight, q: f64, cfg: &OracleConfig) -> Result<Estimate> {
    check_square(a, g.dim())?;
    let est = estimate_radius(&g.operator_to_standard(a), q, cfg)?;
    Ok(Estimate {
        estimate: est.estimate,
        witness_y: g.from_standard(&est.witness_y),
        witness_t: g.from_standard(&est.witness_t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nilpotent() -> DenseOperator {
        DenseOperator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn direct_sample_identity_gives_q() {
        let mut rng = SeedStream::new(1).rng();
        for q in [c(0.3, 0.0), c(0.0, -0.9), c(0.6, 0.8)] {
            let p = direct_sample(&DenseOperator::identity(3), q, &mut rng).unwrap();
            assert!((p.value - q).norm() <= 1e-12);
        }
    }

    #[test]
    fn direct_sample_zero_operator() {
        let p = direct_sample(&DenseOperator::zeros(2), c(0.4, 0.1), &mut SeedStream::new(1).rng()).unwrap();
        assert_eq!(p.value.norm(), 0.0);
    }

    #[test]
    fn direct_sample_rejects_q_outside_disk() {
        let err = direct_sample(&DenseOperator::identity(2), c(0.9, 0.5), &mut SeedStream::new(1).rng());
        assert!(matches!(err, Err(Error::Parameter(_))));
    }

    #[test]
    fn range_point_by_hand() {
        let p =
            range_point(&nilpotent(), c(0.0, 0.0), &ComplexVector::basis(2, 0), &ComplexVector::basis(2, 1)).unwrap();
        assert_eq!(p.value, c(1.0, 0.0));
    }

    #[test]
    fn sampled_points_satisfy_constraints() {
        let a = DenseOperator::from_rows(vec![
            vec![c(1.0, 2.0), c(0.0, -1.0), c(0.5, 0.0)],
            vec![c(3.0, 0.5), c(-2.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, 1.0), c(1.0, 1.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let q = c(0.3, -0.4);
        let s = (1.0 - q.norm_sqr()).sqrt();
        for p in sample_range_cloud(&a, q, 200, SeedStream::new(4)).unwrap() {
            assert!((norm_std(&p.y) - 1.0).abs() <= 1e-12);
            assert!((norm_std(&p.t) - 1.0).abs() <= 1e-12);
            assert!(inner_std(&p.t, &p.y).norm() <= 1e-12);
            let x = p.y.scaled(q).axpy(c(s, 0.0), &p.t);
            assert!((norm_std(&x) - 1.0).abs() <= 1e-12);
            assert!((inner_std(&x, &p.y) - q).norm() <= 1e-12);
            let formula = q * inner_std(&a.apply(&p.y), &p.y) + s * inner_std(&a.apply(&p.t), &p.y);
            assert!((p.value - formula).norm() <= 1e-12);
        }
    }

    #[test]
    fn reduced_objective_examples() {
        let id3 = DenseOperator::identity(3);
        let mut rng = SeedStream::new(3).rng();
        for _ in 0..10 {
            let y = random_unit(3, &mut rng, &GramWeight::identity(3)).unwrap();
            let r = reduced_objective(&id3, 0.35, &y).unwrap();
            assert!((r.value - 0.35).abs() < 1e-15);
        }
        let r = reduced_objective(&nilpotent(), 0.0, &ComplexVector::basis(2, 0)).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.t.unwrap(), ComplexVector::basis(2, 1));
    }

    #[test]
    fn reduced_objective_dominates_samples_with_same_y() {
        let a =
            DenseOperator::from_rows(vec![vec![c(0.2, 1.0), c(-1.0, 0.3)], vec![c(0.7, 0.0), c(0.1, -0.5)]]).unwrap();
        let q = 0.45;
        let mut rng = SeedStream::new(8).rng();
        for _ in 0..100 {
            let p = direct_sample(&a, c(q, 0.0), &mut rng).unwrap();
            let h = reduced_objective(&a, q, &p.y).unwrap().value;
            assert!(p.value.norm() <= h + 1e-12);
        }
    }

    #[test]
    fn reduced_objective_rejects_non_unit() {
        let y = ComplexVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(reduced_objective(&nilpotent(), 0.2, &y), Err(Error::Parameter(_))));
    }

    #[test]
    fn estimate_examples() {
        let cfg = OracleConfig::default();
        let e = estimate_radius(&DenseOperator::identity(3), 0.3, &cfg).unwrap();
        assert!((e.estimate - 0.3).abs() < 1e-9);
        let e = estimate_radius(&nilpotent(), 0.6, &cfg).unwrap();
        assert!((e.estimate - 0.9).abs() < 1e-6, "{}", e.estimate);
        assert!(e.estimate <= 0.9 + 1e-9);
    }

    #[test]
    fn estimate_rejects_bad_parameters() {
        assert!(estimate_radius(&nilpotent(), 1.5, &OracleConfig::default()).is_err());
        let cfg = OracleConfig { restarts: 0, ..OracleConfig::default() };
        assert!(estimate_radius(&nilpotent(), 0.5, &cfg).is_err());
        let cfg = OracleConfig { step_shrink: 1.0, ..OracleConfig::default() };
        assert!(estimate_radius(&nilpotent(), 0.5, &cfg).is_err());
    }

    #[test]
    fn estimate_witness_reproduces_estimate() {
        let a = DenseOperator::from_rows(vec![
            vec![c(0.2, 1.0), c(-1.0, 0.3), c(0.0, 0.0)],
            vec![c(0.7, 0.0), c(0.1, -0.5), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(0.3, 0.3), c(-0.4, 0.0)],
        ])
        .unwrap();
        let q = 0.7;
        let e = estimate_radius(&a, q, &OracleConfig::default()).unwrap();
        assert!(inner_std(&e.witness_t, &e.witness_y).norm() <= 1e-12);
        let p = range_point(&a, c(q, 0.0), &e.witness_y, &e.witness_t).unwrap();
        // |⟨Ax,y⟩| for the optimal t equals the reduced objective up to the phases
        // of the two terms; it can only be smaller.
        assert!(p.value.norm() <= e.estimate + 1e-12);
        let h = reduced_objective(&a, q, &e.witness_y).unwrap().value;
        assert!((h - e.estimate).abs() <= 1e-12);
    }

    #[test]
    fn estimate_is_deterministic_across_thread_counts() {
        let a =
            DenseOperator::from_rows(vec![vec![c(0.2, 1.0), c(-1.0, 0.3)], vec![c(0.7, 0.0), c(0.1, -0.5)]]).unwrap();
        let cfg = OracleConfig::with_restarts(16, 99);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_radius(&a, 0.4, &cfg).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one.estimate.to_bits(), run(3).estimate.to_bits());
    }

    #[test]
    fn gram_estimate_matches_weighted_closed_form() {
        // a = e1, b = e2 under G = diag(1, 4): ‖b‖ = 2, ⟨a,b⟩ = 0.
        let g = GramWeight::diagonal(&[1.0, 4.0]).unwrap();
        let pair =
            crate::rankone::RankOnePair::with_gram(ComplexVector::basis(2, 0), ComplexVector::basis(2, 1), g.clone())
                .unwrap();
        let e = estimate_radius_gram(&pair.as_matrix(), &g, 0.5, &OracleConfig::default()).unwrap();
        assert!((e.estimate - 1.8660254037844393).abs() < 1e-6);
    }
}
