//! Circuit back-ends and the separability test.

mod pyramidal;
mod separability;
mod subtree;

pub use pyramidal::{
    level_operator, pyramidal_level_circuit, pyramidal_levels, synth_pyramidal,
    synth_pyramidal_with, PyramidalLevel, PyramidalOptions,
};
pub use separability::{is_separable, is_separable_with, SeparabilityVerdict, EPS_ANGLE};
pub use subtree::{
    subtree_factors, synth_subtree, synth_subtree_with, SubtreeFactor, SubtreeOptions,
    IDENTITY_TOLERANCE,
};
