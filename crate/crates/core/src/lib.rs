//! Infinitely divisible with respect to time (IDT) processes: constructions,
//! associated Lévy processes, and law-level statistical verification.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod constructions;
pub mod error;
pub mod fields;
pub mod ito;
pub mod kernels;
pub mod levy;
pub mod linalg;
pub mod measure;
pub mod quad;
pub mod report;
pub mod rng;
pub mod sample;
pub mod sheet;
pub mod verify;

pub use error::{Error, Result};
