//! Quasinormal frequencies of Kerr-AdS black holes.
//!
//! The stationary Klein-Gordon operator is written in coordinates that are
//! smooth across the event horizon and extended a little beyond it, so the
//! frequency problem becomes a polynomial eigenvalue problem on a fixed
//! domain with a Bessel-type boundary condition at conformal infinity.

pub mod bessel_bc;
pub mod cli;
pub mod geometry;
pub mod linalg;
pub mod phase_space;
pub mod qnf_solver;

pub use num_complex::Complex64 as C64;
