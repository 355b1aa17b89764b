//! Clock ⊗ motion dynamics under the mass-energy coupled Hamiltonian.
//!
//! The Hamiltonian is diagonal in the clock basis, so it is stored as two
//! motional blocks and every propagator is a pair `(U_g, U_e)`. Excited-branch
//! propagators are kept in the frame rotating at the bare clock frequency; the
//! scalar `e^{−iω_c t}` is only applied for lab-frame states.

mod hamiltonian;
mod params;
mod propagator;
mod state;

pub use hamiltonian::{build_hamiltonian, BlockHamiltonian};
pub use params::{constants, ClockParams, Species};
pub use propagator::{
    diagonal_sods_propagator, exact_propagator, oracle_propagator, perturbative_propagator,
    Propagator, PropagatorSet, Variant,
};
pub use state::{
    evolve, mixed_state_evolution, reduce_to_clock, ClockReducedState, ClockSuperposition,
    CompositeState, Frame,
};
