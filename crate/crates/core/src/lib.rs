//! Constructions of intersecting r-partite r-uniform hypergraphs with large
//! cover number, an exact cover-number solver to check them, and the prime
//! decompositions that select which construction applies to a given `r`.

mod bitset;
pub mod cli;
pub mod compose;
pub mod cover;
pub mod gf;
pub mod hypergraph;
pub mod planes;
pub mod primes;

pub use compose::{build_chain, compose_extremal, compose_near_extremal, Placement};
pub use cover::{matching_number, solve_exact, verify_cover, CoverCertificate, SolveOptions};
pub use hypergraph::{extend_universal, PartiteHypergraph};
pub use planes::{build_affine, build_ap, build_j_gadget, build_projective, truncate_projective};
pub use primes::ChainDecomposition;
