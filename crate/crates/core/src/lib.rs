//! Exact symbolic engine for the Z3-graded Grassmann algebra, the k = 3
//! parafermionic oscillator, and their coherent-state calculus.
//!
//! Everything downstream of the scalar field is exact: coefficients live in
//! the cyclotomic field Q(zeta) with zeta = e^{i pi/6}, so the cube root of
//! unity q, the imaginary unit i, and the q-deformed brackets [n] are all
//! represented without rounding. Floating point only appears in the bosonic
//! factor of the supersymmetric module and in the numeric cross-checks.
//!
//! Module map:
//! - [`scalars`]: the coefficient field, q-brackets, conjugation, embedding.
//! - [`grassmann`]: graded words and canonical normalization for N generator
//!   pairs, in the `Constrained` and `Relational` rule modes.
//! - [`berezin`]: graded Berezin integration, the double integral, and the
//!   differential transposition table.
//! - [`oscillator`]: the deformed ladder algebra, its normal order, and the
//!   exact 3x3 Fock representation.
//! - [`states`]: mixed operator/Grassmann rewriting, coherent kets and bras,
//!   overlaps, weight solving, and identity resolutions under explicit
//!   [`states::ConventionConfig`] phase conventions.
//! - [`bargmann`]: holomorphic-style representatives and the weighted inner
//!   product that reproduces the Fock pairing.
//! - [`susy`]: truncated boson ladder, joint coherent states, displacement.
//! - [`audit`]: the convention auditor (pass/fail table per identity).
//! - [`verify`]: runnable invariant suites mirroring the unit-test oracles.

pub mod audit;
pub mod bargmann;
pub mod berezin;
pub mod error;
pub mod grassmann;
pub mod oscillator;
pub mod scalars;
pub mod states;
pub mod susy;
pub mod verify;

pub use error::CoreError;
pub use scalars::{CycScalar, Rational};
