//! Thermodynamic formalism for subshifts of finite type with locally
//! constant potentials.
//!
//! The crate computes topological pressure through two independent routes
//! (transfer-operator spectra and definitional partition sums), builds the
//! equilibrium Markov measure from Perron eigendata, realizes the
//! Legendre-Fenchel duality between pressure and entropy on sampled curves,
//! and detects first-order phase transitions as corners of pressure
//! envelopes over reducible systems.
//!
//! ```
//! use thermopress_core::sft::{golden_mean, Potential};
//! use thermopress_core::spectral::pressure;
//!
//! // Topological entropy of the golden mean shift is log((1+sqrt(5))/2).
//! let sys = golden_mean();
//! let zero = Potential::zero(&sys);
//! let p = pressure(&zero).unwrap();
//! assert!((p - 0.4812118250596035).abs() < 1e-12);
//! ```
//!
//! The crate is `no_std`-compatible: disable the default `std` feature and
//! enable `libm` to route float math through `libm` instead.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("thermopress-core needs either the `std` or the `libm` feature");

extern crate alloc;

pub mod duality;
pub mod math;
pub mod partition;
pub mod phase;
pub mod sft;
pub mod spectral;

pub use duality::{ConjugateCurve, PressureCurve, SubdiffInterval};
pub use partition::PartitionSumResult;
pub use phase::{ComponentReport, CornerReport, EnvelopeCurve};
pub use sft::{golden_mean, make_sft, Potential, SftSystem, Word};
pub use spectral::{MarkovMeasure, SpectralTriple, TransferMatrix};
