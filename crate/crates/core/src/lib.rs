//! Exact-arithmetic differential algebra engine.
//!
//! Everything runs over arbitrary-precision rationals:
//!
//! - [`diffpoly`]: differential polynomial rings in jet variables with
//!   canonical forms, formal derivations, and homomorphism substitution;
//! - [`series`]: truncated Laurent/Taylor series with tracked precision,
//!   the classical q-expansions (Eisenstein, Δ, j), the Weierstrass
//!   ℘-series, and algebraic-relation fitting by exact null spaces;
//! - [`prolong`]: arc spaces of affine varieties, the prolongation point
//!   map and its projections, and desk-scale differential-closure fitting;
//! - [`logderiv`]: logarithmic derivatives on products of commutative
//!   algebraic groups, Schwarzian operators, the constant-Möbius orbit
//!   decision, and the fitted operator annihilating the j-expansion.

pub mod diffpoly;
pub mod logderiv;
pub mod prolong;
pub mod rat;
pub mod ring;
pub mod series;

pub use rat::Rat;
pub use ring::DiffRing;
