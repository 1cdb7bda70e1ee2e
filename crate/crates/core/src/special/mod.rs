//! Self-contained special functions: gamma, the complex lower incomplete
//! gamma function, the sine integral and coherent-state number amplitudes.

mod coherent;
mod gamma;
mod incgamma;
mod sici;

pub use coherent::{poisson_tail, CoherentAmplitudes};
pub use gamma::{gamma, ln_gamma};
pub use incgamma::{lower_incomplete_gamma, upper_incomplete_gamma};
pub use sici::sine_integral;
