//! Bookkeeping for forking if-statements.
//!
//! A subroutine body containing forking ifs is interpreted once per
//! classical path. Each run is driven by a [`ForkPath`]: decisions up to the
//! forced prefix follow the prefix, later ones take the true branch. The
//! gates of a run are cut into segments at every decision; a segment is
//! emitted gated on the conjunction of the decisions before it, and only if
//! no earlier path already emitted it.

use crate::tape::GateTape;

use super::CondExpr;

/// Upper bound on the number of classical paths explored for one call.
pub const MAX_FORK_PATHS: usize = 1 << 16;

#[derive(Debug, Clone, Default)]
pub struct ForkPath {
    forced: Vec<bool>,
    decisions: Vec<(CondExpr, bool)>,
    segments: Vec<(usize, GateTape)>,
}

impl ForkPath {
    /// The all-true path.
    pub fn first() -> Self {
        Self::default()
    }

    /// Closes the current segment and records a decision on `cond`.
    /// Returns the branch this path takes.
    pub fn decide(&mut self, cond: CondExpr, segment: GateTape) -> bool {
        let k = self.decisions.len();
        self.segments.push((k, segment));
        let branch = self.forced.get(k).copied().unwrap_or(true);
        self.decisions.push((cond, branch));
        branch
    }

    /// Closes the final segment at the end of the body.
    pub fn finish(&mut self, segment: GateTape) {
        self.segments.push((self.decisions.len(), segment));
    }

    pub fn decisions(&self) -> &[(CondExpr, bool)] {
        &self.decisions
    }

    /// Conjunction of the first `k` decisions with their polarities.
    pub fn condition_after(&self, k: usize) -> CondExpr {
        self.decisions[..k]
            .iter()
            .map(|(c, b)| if *b { c.clone() } else { CondExpr::not(c.clone()) })
            .fold(CondExpr::Const(true), CondExpr::and)
    }

    /// The condition under which this whole path is taken.
    pub fn condition(&self) -> CondExpr {
        self.condition_after(self.decisions.len())
    }

    /// Segments first produced by this path, with their gating conditions.
    /// Segments before the divergence point repeat an earlier path's.
    pub fn new_segments(&self) -> impl Iterator<Item = (CondExpr, &GateTape)> {
        let shared = self.forced.len();
        self.segments.iter().filter(move |(k, _)| *k >= shared).map(|(k, t)| (self.condition_after(*k), t))
    }

    /// The next path in depth-first order: flip the last true decision.
    pub fn next(&self) -> Option<ForkPath> {
        let j = self.decisions.iter().rposition(|(_, b)| *b)?;
        let mut forced: Vec<bool> = self.decisions[..j].iter().map(|(_, b)| *b).collect();
        forced.push(false);
        Some(ForkPath { forced, ..ForkPath::default() })
    }
}

#[cfg(test)]
mod tests {
    use super::super::to_xdnf;
    use super::*;
    use crate::machine::PrimitiveGate;

    fn seg(q: usize) -> GateTape {
        GateTape::from_gates([PrimitiveGate::x(q)])
    }

    /// Drives paths over a body `seg(9); if c0 {..} seg(10); if c1 {..} seg(11)`.
    fn explore() -> Vec<ForkPath> {
        let mut out = Vec::new();
        let mut path = Some(ForkPath::first());
        while let Some(mut p) = path {
            p.decide(CondExpr::qubit(0), seg(9));
            p.decide(CondExpr::qubit(1), seg(10));
            p.finish(seg(11));
            path = p.next();
            out.push(p);
        }
        out
    }

    #[test]
    fn depth_first_true_first() {
        let paths = explore();
        let branches: Vec<Vec<bool>> = paths.iter().map(|p| p.decisions().iter().map(|(_, b)| *b).collect()).collect();
        assert_eq!(branches, vec![vec![true, true], vec![true, false], vec![false, true], vec![false, false]]);
    }

    #[test]
    fn shared_segments_emitted_once() {
        let emitted: Vec<usize> = explore().iter().map(|p| p.new_segments().count()).collect();
        assert_eq!(emitted, vec![3, 1, 2, 1]);
    }

    #[test]
    fn paths_are_exclusive_and_exhaustive() {
        let sum =
            explore().iter().fold(crate::qcond::ZhegalkinPoly::zero(), |acc, p| acc.xor(&to_xdnf(&p.condition())));
        assert!(sum.is_one());
        for basis in 0..4 {
            assert_eq!(explore().iter().filter(|p| p.condition().eval(basis)).count(), 1);
        }
    }
}
