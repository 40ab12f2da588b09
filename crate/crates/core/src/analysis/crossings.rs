use alloc::vec::Vec;

use crate::walk::Trajectory;

/// Positions `i` with `shadows[i]` and `shadows[i + 1]` nonzero and of opposite sign.
pub fn sign_changes(shadows: &[f64]) -> Vec<usize> {
    shadows
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] != 0.0 && w[1] != 0.0 && (w[0] < 0.0) != (w[1] < 0.0))
        .map(|(i, _)| i)
        .collect()
}

/// Steps `n` at which the shadow changes sign between `Ŝ_n` and `Ŝ_{n+1}`.
/// A start at 0 is never counted.
pub fn detect_crossings(traj: &Trajectory) -> Vec<usize> {
    let shadows: Vec<f64> = traj.shadows().collect();
    sign_changes(&shadows)
}
