//! Two consecutive uses of a `d`-dimensional Weyl channel with correlated
//! (memory) noise.
//!
//! The crate evaluates the mutual information reachable with product and
//! maximally entangled input states, both through closed-form output spectra
//! and through a brute-force Kraus-sum oracle, and locates the memory value
//! `mu_c` at which entangled inputs overtake product inputs.
//!
//! Module map:
//!
//! - [`linalg`]: dense complex matrices, Kronecker product, Hermitian Jacobi
//!   eigensolver, von Neumann entropy.
//! - [`weyl`]: displacement operators `U_{m,n}` and fast conjugation.
//! - [`states`]: Schmidt-diagonal inputs and the one-parameter ansatz.
//! - [`channel`]: noise tensor, oracle channel map, phase averaging.
//! - [`closedform`]: structured output states and their spectra.
//! - [`errata`]: reference forms of the closed-form clauses that disagree
//!   with the oracle, with measured deviations.
//! - [`analysis`]: mutual-information curves, crossover search, sweeps and
//!   validation reports.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod channel;
pub mod closedform;
mod error;
pub mod errata;
pub mod linalg;
pub mod states;
pub mod weyl;

pub use analysis::{
    CrossoverReport, CrossoverStatus, EvalOptions, InputKind, MICurve, Method, MiPoint,
    ValidationReport,
};
pub use channel::{ChannelSpec, Family, NoiseTable};
pub use closedform::{ClosedFormOutput, Parity};
pub use errata::ErratumRecord;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Spectrum};
pub use num_complex::Complex64;
pub use states::SchmidtSpec;
pub use weyl::WeylIndex;
