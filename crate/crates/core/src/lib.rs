//! Exact computations in Hoffman's algebra `ℚ⟨x,y⟩` of multiple zeta values.
//!
//! The crate provides the free algebra itself ([`ncpoly`]), the duality
//! anti-automorphism and the derivations `∂ₙ` ([`hoffman`]), truncated power
//! series in three central variables with the automorphisms `Δ_t`
//! ([`series`]), exact checks of the generating-function identities relating
//! duality and derivation relations ([`identities`]), a rational span solver
//! producing membership certificates ([`relspan`]), and a floating-point
//! evaluator for the MZV map `Z` ([`numeric`]).

pub mod error;
pub mod hoffman;
pub mod identities;
pub mod ncpoly;
pub mod numeric;
pub mod relspan;
pub mod series;

pub use error::{Error, Result};
pub use hoffman::{derivation, dn_generator, one_minus_tau, tau, DerivationId, Index};
pub use ncpoly::{Letter, NcPoly, Scalar, Word};
pub use series::{delta_exp, delta_subst, Monomial3, Series3, VarId};
