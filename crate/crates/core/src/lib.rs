//! Exact computation with valued-field invariants.
//!
//! The crate models value groups as finite lexicographic products of
//! computable subgroups of the rationals, describes unibranched Galois
//! extensions of prime degree by their numerical invariants, and decides
//! the isomorphism class of the Kahler differential module of the induced
//! valuation-ring extension, along with the deeply-ramified field
//! conditions that govern when all such modules vanish.

pub mod deeply_ramified;
pub mod descriptor;
pub mod extensions;
pub mod gen;
pub mod kahler;
pub mod ordered_groups;
pub mod rational;

pub use rational::Rat;
