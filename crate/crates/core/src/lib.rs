//! Matchings between finite subsets of groups and between finite-dimensional
//! subspaces of field extensions.
//!
//! The group side covers matchability with Hall-violator certificates,
//! multiplicity functions and acyclic matchings, coset-based sufficient
//! conditions, relative matchings under homomorphisms, and prime-order
//! families without the acyclic matching property. The linear side works over
//! exact rationals inside Laurent polynomial windows of `Q(t)` or inside
//! structure-constant algebras, and covers matched bases, linear Hall
//! violators, translates of subalgebras, strong matchings and the scaling
//! construction of acyclic linear matchings.

pub mod bipartite;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod group;
pub mod hom;
pub mod linear;
pub mod matching;
pub mod primes;
pub mod relative;

pub use error::{Error, Result};
pub use group::{Element, Group, GroupSpec, Side, Subgroup};
pub use hom::Homomorphism;
pub use matching::{AcyclicSearch, Census, Matching, Multiplicity, SubsetPair};
