//! Exact renormalization circuits and free-fermion numerics for chiral
//! topological lattice models: Pauli/stabilizer algebra, CNOT
//! coarse-graining circuits, a fermion-to-spin bosonization dictionary,
//! Bogoliubov-de Gennes interpolation paths with quasi-adiabatic
//! continuation, and certificate-producing verification routines.

pub mod bdg;
pub mod cli;
pub mod boson;
pub mod dense;
pub mod error;
pub mod lattice;
pub mod meraqle;
pub mod pauli;
pub mod qa;
pub mod renorm;

pub use error::{Error, Result};
