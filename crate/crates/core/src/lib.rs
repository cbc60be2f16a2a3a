//! Verification of Property O for odd-symplectic Grassmannians IG(k, 2n+1).
//!
//! The pipeline runs from the Schubert basis ([`partitions`]) through the quantum
//! Chevalley rule ([`chevalley`]) to the matrix of quantum multiplication by
//! `c_1` ([`operator`]). Its quantum Bruhat graph ([`graph`]) gives an exact
//! verdict and its eigenvalues ([`spectrum`]) a numeric one.

pub mod chevalley;
pub mod cli;
pub mod error;
pub mod graph;
pub mod operator;
pub mod partitions;
pub mod spectrum;

pub use error::{Error, Result};
pub use partitions::{OddPartition, Shape};
