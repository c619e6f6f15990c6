//! Homological degree data for quotients of quiver path algebras by
//! homogeneous ideals: noncommutative Gröbner bases, admissible-path chains,
//! an independent linear-algebra resolution oracle, and decision procedures
//! for d-Koszul, 2-d-determined and related properties.
pub mod betti;
pub mod chains;
pub mod experiment;
pub mod field;
pub mod format;
pub mod freealg;
pub mod groebner;
pub mod koszul;
pub mod linalg;
pub mod quiver;
pub mod resolution;
