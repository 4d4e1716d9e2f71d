//! Sums of squares via Gram spectrahedra.

pub mod binary;
pub mod config;
pub mod gram;
pub mod hermitian;
pub mod kummer;
pub(crate) mod linalg;
pub mod poly;
pub mod polytope;
pub mod sdp;
