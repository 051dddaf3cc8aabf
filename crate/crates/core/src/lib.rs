pub mod arith;
pub mod cli;
pub mod error;
pub mod ffspace;
pub mod gauss;
pub mod hecke;
pub mod jacobi;
pub mod lattice;
pub mod suite;
pub mod theta;
