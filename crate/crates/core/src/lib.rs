//! Numerics for extremal quasiconformal mappings on the Heisenberg group.
//!
//! The Heisenberg group `ℂ × ℝ` carries a contact structure whose horizontal
//! curve families admit a modulus, in close analogy with extremal length in
//! the plane. This crate computes those moduli, checks admissibility of
//! densities, evaluates distortion of quasiconformal maps, and constructs
//! minimizers of the mean distortion functional by lifting solutions of a
//! boundary-value problem posed on the Poincaré half-plane.
//!
//! Organization:
//!
//! * [`heis`] — group arithmetic, the Korányi norm, the bundle projection
//!   `Π(z,t) = t + i|z|²` and its chart, and the contact form.
//! * [`curves`] — horizontal curves, horizontal lifts of half-plane curves,
//!   line integrals of densities, and foliations.
//! * [`hol`] — holomorphic rectangle-to-half-plane maps with Newton inversion.
//! * [`modulus`] — densities, energies, admissibility, closed-form moduli,
//!   pull-back and push-forward densities.
//! * [`qcmaps`] — quasiconformal maps, horizontal derivatives, Beltrami
//!   coefficient, distortion, mean distortion, and the two explicit extremal
//!   maps (cylinders and spherical annuli).
//! * [`lift`] — the generalized lift construction: compatibility check,
//!   boundary-profile ODE, angular potential, map assembly, and verification
//!   of the commutative diagram.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature and enable `libm` for builds without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod curves;
mod error;
pub mod heis;
pub mod hol;
pub mod lift;
pub mod modulus;
pub mod qcmaps;
pub mod quad;

pub use error::{Error, Result};
pub use num_complex::Complex64;
