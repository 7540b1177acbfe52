//! Exact-arithmetic toolkit for the stratum catalog of moduli of elliptic
//! K3 surfaces with a section.
//!
//! The crate computes and cross-checks the combinatorial, arithmetic and
//! lattice-theoretic data attached to the fifty positive-dimensional strata
//! that arise simultaneously from monodromy groups and from fiber root
//! lattices:
//!
//! - [`fibers`]: Kodaira fiber types, the vanishing-order dictionary, local
//!   monodromy, and configuration rank/dimension formulas;
//! - [`permcover`]: permutation triples for finite-index subgroups of the
//!   modular group, with passports, conjugacy, and constrained enumeration;
//! - [`hurwitz`]: the braid action on factorization tuples and block
//!   factorizations of branched covers;
//! - [`budget`]: the Euler-number budget tables and stratum dimension bounds;
//! - [`congruence`]: congruence subgroups of SL(2,Z), indices, and
//!   Mordell-Weil torsion inference;
//! - [`ratfun`]: exact rational polynomial arithmetic, branching passports,
//!   and the j-map and Weierstrass family identities;
//! - [`lattices`]: ADE lattices, discriminant forms, isotropic subgroups and
//!   overlattices, Dynkin symmetry groups, genus and component counting;
//! - [`catalog`]: the embedded stratum table and the verifier tying all
//!   modules together.
//!
//! All arithmetic is exact (integers and rationals); nothing is floating
//! point.  See the `k3strata` binary for the command-line surface.

pub mod budget;
pub mod catalog;
pub mod cli;
pub mod congruence;
pub mod fibers;
pub mod hurwitz;
pub mod lattices;
pub mod perm;
pub mod permcover;
pub mod ratfun;
pub mod report;
pub mod roots;

pub use perm::Perm;
pub use permcover::PermTriple;
pub use roots::{RootSum, RootSymbol};
