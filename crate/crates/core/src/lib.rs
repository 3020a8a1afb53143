//! Exactly-1 3SAT solving by scan, incompatibility checks and discards over
//! the inverse Petri net of a formula.

pub mod bench;
pub mod cli;
pub mod formula;
pub mod net;
pub mod oracle;
pub mod reduction;
pub mod scope;
pub mod solver;
