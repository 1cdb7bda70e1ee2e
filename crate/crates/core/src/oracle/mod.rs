//! Brute-force reference: exact evolution of the dimer and a truncated set
//! of discrete modes, used to check the analytic results.

mod hamiltonian;
mod propagate;
mod reduce;
mod space;

pub use hamiltonian::{build_hamiltonian_d, build_hamiltonian_x, SparseHamiltonian};
pub use propagate::Propagator;
pub use reduce::{
    embed, oracle_entanglement_spectrum, reduce_dimer, reduce_window, residual_report,
    spectrum_gap, window_frame, window_spectrum,
};
pub use space::{FullStateVector, TruncatedSpace, DEFAULT_CAP};

use crate::error::Result;
use crate::model::{DimerInitialState, DiscreteModeSet, Interaction};

/// Exact `|psi(t)>` for a product initial state on `space`.
pub fn evolve_exact(
    state: &DimerInitialState,
    modes: &DiscreteModeSet,
    space: &TruncatedSpace,
    times: &[f64],
) -> Result<Vec<FullStateVector>> {
    let h = match modes.interaction() {
        Interaction::X => build_hamiltonian_x(modes, space)?,
        Interaction::D => build_hamiltonian_d(modes, space)?,
    };
    let u = Propagator::new(&h)?;
    let psi0 = FullStateVector::product(state, modes, space)?;
    times
        .iter()
        .map(|&t| {
            Ok(FullStateVector {
                amplitudes: u.evolve(&psi0.amplitudes, t)?,
                space: space.clone(),
                tail_budget: psi0.tail_budget,
            })
        })
        .collect()
}
