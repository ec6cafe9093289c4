//! Unitary Stern-Gerlach model: exact spinor wavepackets in a linear field,
//! spin-resolved Wigner matrices with phase-space coarse graining, and the
//! entropy and information a finite-resolution screen extracts.
//!
//! ```
//! use sterngerlach::{derive_scales, entanglement_entropy, PhysicalParams};
//!
//! let params = PhysicalParams::silver();
//! let scales = derive_scales(&params).unwrap();
//! let e = entanglement_entropy(scales.tau3, &scales).unwrap();
//! assert!((e.s_ent - 0.6239).abs() < 1e-3);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod config;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod information;
pub mod oracle;
pub mod params;
pub mod phase_space;
pub mod quad;
pub mod special;

pub use dynamics::{
    evolve_free_after_field, evolve_in_field, kernel, state_amplitude, AmplitudeMode, KernelBranch, Spin,
    SpinorWavepacket,
};
pub use error::{Error, Result};
pub use information::{entanglement_entropy, mean_information, reduced_spin_density, screen_distribution};
pub use params::{derive_scales, DerivedScales, PhysicalParams, UnitSystem};
