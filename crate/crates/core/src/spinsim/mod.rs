//! Dense state-vector simulation of an n-spin-1/2 system.
//!
//! Conventions used throughout:
//!
//! - spin operators are `I_a = sigma_a / 2` for `a = x, y, z`;
//! - basis index bit `mu` describes spin `mu`, and bit value 0 is the `+1/2`
//!   eigenstate of `I_z` for that spin, so `|0>` (index 0) is the
//!   fully-polarized ground state of the collective `I_z`;
//! - global phases are carried along, never normalized away — every kernel
//!   downstream is a squared modulus, where they cancel.
//!
//! The data-encoding unitary is a product of one segment per input
//! coordinate. Each segment conjugates a Trotterized double-quantum
//! evolution `prod_{mu<nu} exp(-i dt d_{mu,nu} (IyIy - IxIx))` by collective
//! z rotations whose angle is the input coordinate.

mod encode;
mod state;
mod system;

pub use encode::{encode, encode_adjoint, evolve_segment, evolve_segment_adjoint};
pub use encode::{DataPoint, EncodingParams};
pub use state::StateVector;
pub use system::SpinSystem;

/// Hard upper bound on the spin count; the amplitude vector has `2^n` entries.
pub const MAX_SPINS: usize = 26;
