//! Dephasing dynamics and entanglement entropy of a two-level system coupled
//! to an oscillator bath.
//!
//! Two couplings are supported: the X-model, where the dimer displaces each
//! oscillator, and the D-model, where it shifts their frequencies (with
//! optional tunneling and exchange terms). The crate provides
//!
//! * exact closed-form dynamics for finite mode sets ([`discrete`]),
//! * first-order corrections in the tunneling ratio `V / Omega`,
//! * continuum-limit decoherence factors, closed forms and asymptotics
//!   ([`continuum`]),
//! * a brute-force truncated Fock space propagator used as a reference
//!   ([`oracle`]),
//! * the special functions these need ([`special`]).

pub mod cli;
pub mod continuum;
pub mod discrete;
pub mod error;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
