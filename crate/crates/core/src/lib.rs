//! Exact enumeration of PSU(3,q) acting on the Baer subplanes of its Hermitian plane.

pub mod action;
pub mod error;
pub mod field;
pub mod geometry;
pub mod group;
pub mod involution;
pub mod lab;
pub mod matrix;
pub mod saxl;

pub use error::{Error, Result};
