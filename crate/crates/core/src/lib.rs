//! Exact construction and verification of Shapovalov elements.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod hpoly;
pub mod linalg;
pub mod rational;
pub mod rootdata;
pub mod liealg;
pub mod uea;
pub mod shap;
pub mod verma;
pub mod golden;
pub mod typea;
pub mod suites;
pub mod cli;
