use serde::Serialize;

use crate::error::Result;
use crate::mat2;
use crate::tree::{canonicalize, PsiTree};

/// Default largest entrywise gap between two node unitaries treated as equal.
pub const EPS_ANGLE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    /// `(level, position)` of the first node whose unitary differs from the
    /// leftmost one of its level.
    pub first_violation: Option<(usize, usize)>,
}

pub fn is_separable(tree: &PsiTree) -> Result<SeparabilityVerdict> {
    is_separable_with(tree, EPS_ANGLE)
}

/// Canonicalizes, then scans levels top-down and left to right comparing
/// every live node's `Rz(φ)Ry(θ)` with the leftmost node of its level.
pub fn is_separable_with(tree: &PsiTree, eps_angle: f64) -> Result<SeparabilityVerdict> {
    let (canon, _) = canonicalize(tree)?;
    for j in 1..canon.n() {
        let lead = canon.node(j, 0).unitary();
        for (i, node) in canon.level(j).iter().enumerate().skip(1) {
            if !node.dead && mat2::max_diff(&node.unitary(), &lead) > eps_angle {
                return Ok(SeparabilityVerdict {
                    separable: false,
                    first_violation: Some((j, i)),
                });
            }
        }
    }
    Ok(SeparabilityVerdict {
        separable: true,
        first_violation: None,
    })
}
