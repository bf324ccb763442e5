//! Catalog of quantum operations and GKLS generators on finite truncations.

pub mod bosonic;
pub mod catalog;
pub mod finite;
pub mod fock;
pub mod hs;
pub mod kraus;
pub mod volterra;

pub use bosonic::{
    emission_absorption_generator, geometric_tail, jaynes_cummings_generator, jaynes_cummings_stationary_state,
    parity_projector, qou_generator, qou_stationary_state, sinc_sqrt, two_photon_generator,
    two_photon_invariant_states, two_photon_limit, JcOrdering, JcParams,
};
pub use catalog::{catalog, BuiltOperator, CatalogEntry, ChannelSpec, GeneratorSpec, MatrixSpec, OperatorKind, StateSpec};
pub use finite::{
    depolarizing, depolarizing_generator, depolarizing_limit_projector, hamiltonian_generator, level_projection,
    maximally_mixed, oscillator_conjugation, oscillator_eigenvalue, oscillator_hamiltonian, oscillator_mask_projector,
    trace_replacement, validate_state,
};
pub use fock::{
    annihilation, coherent_state, creation, diag_fn, diagonal_state, fock_projector, ket, number, CoherentState,
    TruncationSpec,
};
pub use hs::{hs_embed, hs_inclusion, HsEmbedding};
pub use kraus::{attenuator, KrausChannel};
pub use volterra::{volterra_contraction, volterra_contraction_with, VolterraDemo, VolterraRule};
