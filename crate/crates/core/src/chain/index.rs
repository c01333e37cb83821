//! Mapping between spider sites and `(level, phase)` coordinates.
//!
//! Level `n` holds `N` phases. Phase 0 is the body at level 0 and depth `n`
//! of leg `N` for `n >= 1`; phase `k = 1..N-1` is depth `n + 1` of leg `k`.
//! Every other module goes through these two functions for that offset.

use serde::{Deserialize, Serialize};

/// A vertex of the spider graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Site {
    Body,
    /// `leg` in `1..=N`, `depth >= 1`.
    Leg { leg: usize, depth: usize },
}

/// Block coordinates of a state in the block-tridiagonal operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateIndex {
    pub level: usize,
    pub phase: usize,
}

impl StateIndex {
    pub const BODY: StateIndex = StateIndex { level: 0, phase: 0 };

    pub fn new(level: usize, phase: usize) -> Self {
        StateIndex { level, phase }
    }

    /// Row/column of this state in a dense truncation.
    pub fn flat(&self, n_legs: usize) -> usize {
        self.level * n_legs + self.phase
    }
}

pub fn site_of(n_legs: usize, idx: StateIndex) -> Site {
    debug_assert!(idx.phase < n_legs);
    match (idx.level, idx.phase) {
        (0, 0) => Site::Body,
        (n, 0) => Site::Leg {
            leg: n_legs,
            depth: n,
        },
        (n, k) => Site::Leg {
            leg: k,
            depth: n + 1,
        },
    }
}

pub fn index_of(n_legs: usize, site: Site) -> StateIndex {
    match site {
        Site::Body => StateIndex::BODY,
        Site::Leg { leg, depth } if leg == n_legs => StateIndex::new(depth, 0),
        Site::Leg { leg, depth } => StateIndex::new(depth - 1, leg),
    }
}

/// Leg and depth feeding the diagonal entry `phase` of a level-`level`
/// block. Level 0, phase 0 maps to depth 0 of leg `N` (the body, where
/// `a_{0,N} = alpha_N`).
pub fn leg_depth(n_legs: usize, level: usize, phase: usize) -> (usize, usize) {
    if phase == 0 {
        (n_legs, level)
    } else {
        (phase, level + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_small_spider() {
        for n in 1..5 {
            for level in 0..6 {
                for phase in 0..n {
                    let idx = StateIndex::new(level, phase);
                    assert_eq!(index_of(n, site_of(n, idx)), idx);
                }
            }
        }
    }

    #[test]
    fn leg_n_sits_one_level_behind() {
        assert_eq!(site_of(3, StateIndex::new(1, 0)), Site::Leg { leg: 3, depth: 1 });
        assert_eq!(site_of(3, StateIndex::new(0, 2)), Site::Leg { leg: 2, depth: 1 });
        assert_eq!(leg_depth(3, 0, 0), (3, 0));
        assert_eq!(leg_depth(3, 4, 1), (1, 5));
    }
}
