//! Kernel evaluation on top of the spin simulator.
//!
//! Two kernels share the convention `k(x, x) = 1`:
//!
//! - the pure-state kernel `|<0|U(xj)^dag U(xi)|0>|^2`, cheap (two state
//!   evolutions per entry) and bounded to `[0, 1]`;
//! - the ensemble trace kernel `Tr(A(xi) A(xj)) / Tr(I_z^2)` with
//!   `A(x) = U(x) I_z U(x)^dag`, exact but exponentially heavier (`2^n`
//!   basis evolutions per entry) and signed.

mod gram;
mod kernel;
mod mqspec;
mod profile;

pub use gram::{gram, gram_fast_1d, gram_trace, GramMatrix, GramMeta, KernelKind};
pub use kernel::{
    encode_points, kernel, kernel_uncompute, kernel_vector, trace_kernel, trace_kernel_with_cap,
    EncodedStates, DEFAULT_TRACE_CAP,
};
pub use mqspec::{mq_spectrum, mq_spectrum_of_system, MqSpectrum, DEFAULT_MQ_SAMPLES};
pub use profile::{fwhm, kernel_profile_1d, Profile1d};
