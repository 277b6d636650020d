//! Integer factorization toolkit: difference-of-squares scans, residue-class
//! methods, exact lattice reduction, and a small-root solver for the factoring
//! polynomial `(P0 + x)(Q0 + y) - N`.

pub mod arith;
pub mod coppersmith;
pub mod fermat;
pub mod instances;
pub mod lattice;
pub mod matrix;
pub mod polynomial;
pub mod residue;

pub use arith::{Int, Nat};
