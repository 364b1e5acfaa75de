//! Computational operator algebras at finite dimension.
//!
//! The crate makes a family of C*-algebraic constructions executable for
//! algebras of the form ⊕ₖ M_{nₖ}(ℂ): state-space metrics and their
//! equivalences, the GNS construction with explicit intertwiners, constructive
//! Kadison transitivity, U(1) cocycles and Chern numbers of ground-state line
//! bundles over a discretized sphere, product ground states of non-interacting
//! spin chains, and the exact arithmetic of supernatural numbers with the
//! K-theory and homotopy tables of UHF algebras.
//!
//! Everything numerical is deterministic: fixed eigenvalue ordering, pinned
//! eigenvector phases, fixed summation orders, and seeded randomness only.
//! Tolerances are centralized in [`numerics::NumericPolicy`].

pub mod algebra;
pub mod bundles;
pub mod chain;
pub mod gns;
pub mod kadison;
pub mod ktheory;
pub mod numerics;
pub mod projgeom;
pub mod sampling;
pub mod selftest;
