//! Lossy pruning, branch rearrangement and Schmidt forms.

mod prune;
mod schmidt;

pub use prune::{
    analyze, path_controls, prune, prune_pair, rearrange_branches, restored_state, subtree_overlap,
    PruneAnalysis,
};
pub use schmidt::{
    build_multilinear_system, phase_fixed_basis, schmidt_2q, solve_generalized_schmidt,
    BasisAngles, GeneralizedSchmidt, LocalBasisTransform, MultilinearEquation, MultilinearSystem,
    SchmidtWarning, TwoQubitSchmidt, MAX_SCHMIDT_QUBITS, MAX_SYSTEM_QUBITS, SOLVER_STARTS,
};
