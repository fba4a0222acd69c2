pub mod arrangement;
pub mod charpoly;
pub mod counting;
pub mod derivations;
pub mod field;
pub mod format;
pub mod harness;
pub mod lattice;
pub mod linalg;
pub mod poly;
