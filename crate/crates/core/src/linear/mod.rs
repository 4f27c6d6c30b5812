//! Matchings between subspaces of a field extension, computed with exact
//! rational arithmetic.

pub mod ambient;
pub mod iso;
pub mod matched;
pub mod rational;
pub mod scaling;
pub mod strong;
pub mod subspace;

pub use ambient::{AlgebraElement, Ambient, AmbientSpec, StructureAlgebra};
pub use iso::LinearIso;
pub use matched::{
    contains_translate, is_matched_basis, linear_hall_violator, match_basis, translate_obstruction, BasisMatch,
    LinearHallViolator, OrderedBasis, TranslateWitness,
};
pub use rational::Q;
pub use scaling::{
    classify_equivalent_pair, find_acyclic_linear_matching, find_scaling, is_equivalent, AcyclicLinearMatching,
    EquivalenceBranch, EquivalentTriple, LinearCertificate,
};
pub use strong::{strong_matching, strong_matching_exists, StrongVerdict};
pub use subspace::{Subspace, SubspaceSpec};
