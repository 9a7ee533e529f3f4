//! Density-matrix simulation of magic state distillation with the
//! five-qubit code.
//!
//! The crate covers faulty magic-state preparation ([`magic`]), the
//! distillation round in projective and decode-then-decompose form
//! ([`five_qubit`]), per-qubit dephasing during the decode circuit
//! ([`noise`]) and the ensemble partial-tomography reconstruction of the
//! decoded mixture ([`tomography`]).
//!
//! ```
//! use magicdist::{five_qubit, magic};
//!
//! let rho = magic::prepare_faulty_direct(0.9).unwrap().tensor_power(5);
//! let outcome = five_qubit::distill_decode(&rho).unwrap();
//! assert!(outcome.p_out().unwrap() > 0.9);
//! ```

pub mod error;
pub mod five_qubit;
pub mod gates;
pub mod magic;
pub mod noise;
pub mod state;
pub mod tomography;

pub use error::{Error, Result};
pub use five_qubit::DistillationOutcome;
pub use gates::GateOp;
pub use state::{BlochVector, DensityOperator};
