pub mod arith;
pub mod constructions;
pub mod embedding;
pub mod graph;
pub mod search;
pub mod spectral;
pub mod spherical;
