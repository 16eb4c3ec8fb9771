//! q-numerical radius of rank-one operators on ℂⁿ.
//!
//! * [`numeric`]: complex vectors, dense operators, Gram-weighted inner products
//!   and seeded Haar samplers.
//! * [`rankone`]: closed-form ω_q(a⊗b) and everything derived from it.
//! * [`oracle`]: brute-force lower estimates of ω_q(A) for arbitrary dense `A`.
//! * [`verify`]: seeded property suites tying the closed forms to the oracle.

pub mod error;
pub mod json;
pub mod numeric;
pub mod oracle;
pub mod rankone;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::{inner, norm, project_off, ComplexVector, DenseOperator, GramWeight, MatrixFile, SeedStream};
pub use oracle::{estimate_radius, Estimate, OracleConfig, RangePoint};
pub use rankone::{PowerSeries, ProfilePoint, RadiusReport, RankOnePair};
pub use verify::{Suite, SuiteParams, SuiteReport};

pub use num_complex::Complex64;
