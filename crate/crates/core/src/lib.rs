//! Multiplication operators and their semigroups on discretized spaces of
//! vector-valued functions that vanish at infinity.
//!
//! A symbol field `phi` assigns to every point of a base space a diagonal
//! (centre) operator on a finite-dimensional complex lattice. Multiplying
//! sections pointwise by `phi` gives the operator `M_phi`; exponentiating
//! gives the flow `T(t) = exp(t phi)`. Both objects are governed entirely by
//! the pointwise data, and this crate computes their norms, spectra, domains,
//! growth bounds, continuity profiles, and symbol recovery from samples.
//!
//! The crates are generic over the real scalar (`f32` or `f64`) via the
//! [`scalar::Real`] trait; the aliases at the crate root fix `f64`, the
//! `*32` variants fix `f32`.
//!
//! - [`lattice`]: vectors with sup/p/weighted norms and diagonal operators.
//! - [`space`]: finite, truncated-sequence and interval-grid base spaces,
//!   and sections (vector-valued functions) over them.
//! - [`dsl`]: a small expression language for defining symbol entries.
//! - [`mulop`]: the multiplication operator, its norm, domain and spectrum.
//! - [`semigroup`]: the induced flow, its growth and continuity, and
//!   recovery of the symbol from sampled multipliers.

pub mod dsl;
pub mod lattice;
pub mod mulop;
pub mod scalar;
pub mod semigroup;
pub mod space;

pub use num_complex::Complex;
pub use scalar::Real;

/// Complex scalar in double precision.
pub type C64 = Complex<f64>;
/// Complex scalar in single precision.
pub type C32 = Complex<f32>;

pub type NormSpec64 = lattice::NormSpec<f64>;
pub type LatticeVector64 = lattice::LatticeVector<f64>;
pub type CentralOperator64 = lattice::CentralOperator<f64>;
pub type SpaceModel64 = space::SpaceModel<f64>;
pub type Section64 = space::Section<f64>;
pub type Expr64 = dsl::Expr<f64>;
pub type PhiSpec64 = dsl::PhiSpec<f64>;
pub type PhiField64 = mulop::PhiField<f64>;
pub type MulOperator64 = mulop::MulOperator<f64>;
pub type SemigroupEvaluator64 = semigroup::SemigroupEvaluator<f64>;

pub type NormSpec32 = lattice::NormSpec<f32>;
pub type LatticeVector32 = lattice::LatticeVector<f32>;
pub type CentralOperator32 = lattice::CentralOperator<f32>;
pub type SpaceModel32 = space::SpaceModel<f32>;
pub type Section32 = space::Section<f32>;
pub type Expr32 = dsl::Expr<f32>;
pub type PhiSpec32 = dsl::PhiSpec<f32>;
pub type PhiField32 = mulop::PhiField<f32>;
pub type MulOperator32 = mulop::MulOperator<f32>;
pub type SemigroupEvaluator32 = semigroup::SemigroupEvaluator<f32>;
