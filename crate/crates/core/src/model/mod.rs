//! Domain types shared by every engine: the dimer initial state, discrete
//! mode sets, frequency windows, continuum spectral models, and the reduced
//! density matrices and spectra the engines produce.

mod density;
mod modes;
mod spectral;
mod state;
mod window;

pub use density::{
    hermitian_eigenvalues_2x2, von_neumann_entropy, EntanglementSpectrum, Matrix2c,
    QubitDensityMatrix, ReservoirBasis, ReservoirReducedState, NEGATIVE_EIGENVALUE_TOL,
};
pub use modes::{CouplingParams, DiscreteModeSet, Interaction, Mode};
pub use spectral::{CouplingFn, SpectralDensity, SpectralModel};
pub use state::DimerInitialState;
pub use window::FrequencyWindow;
