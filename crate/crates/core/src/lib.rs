//! Gradings of exceptional and classical Lie algebras, weight diagrams, and
//! ampleness of graded components.

pub mod ampleness;
pub mod classify;
pub mod cxlinalg;
pub mod data;
pub mod error;
pub mod grading;
pub mod harness;
pub mod mpchar;
pub mod rootsys;
pub mod spinor;
pub mod walkdiag;

pub use error::{Error, Result};
