use alloc::vec::Vec;

/// Unvisited positions of one sorted line array.
///
/// Two path-compressed forests map every position to the nearest alive
/// position at or to its right (resp. left), so deletion is O(1) and
/// neighbour queries are amortised near-constant.
#[derive(Clone, Debug)]
pub struct LineIndex {
    alive: Vec<bool>,
    // right[i]: parent toward the first alive position >= i; `len` is the sentinel.
    right: Vec<u32>,
    // left[i + 1]: parent toward the last alive position <= i; 0 is the sentinel.
    left: Vec<u32>,
    live: usize,
}

impl LineIndex {
    pub fn new(len: usize) -> LineIndex {
        assert!(len < u32::MAX as usize, "line too long for the index");
        LineIndex {
            alive: alloc::vec![true; len],
            right: (0..=len as u32).collect(),
            left: (0..=len as u32).collect(),
            live: len,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.alive.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }

    /// Number of positions not yet removed.
    #[inline]
    pub fn live(&self) -> usize {
        self.live
    }

    #[inline]
    pub fn is_alive(&self, i: usize) -> bool {
        self.alive[i]
    }

    pub fn remove(&mut self, i: usize) {
        if !self.alive[i] {
            return;
        }
        self.alive[i] = false;
        self.live -= 1;
        self.right[i] = i as u32 + 1;
        self.left[i + 1] = i as u32;
    }

    fn root(forest: &mut [u32], mut i: usize) -> usize {
        while forest[i] as usize != i {
            let parent = forest[i] as usize;
            let grand = forest[parent];
            forest[i] = grand;
            i = grand as usize;
        }
        i
    }

    /// First alive position `>= i`.
    #[inline]
    pub fn succ(&mut self, i: usize) -> Option<usize> {
        if i >= self.len() {
            return None;
        }
        let j = Self::root(&mut self.right, i);
        (j < self.len()).then_some(j)
    }

    /// Last alive position `< i`.
    #[inline]
    pub fn pred_before(&mut self, i: usize) -> Option<usize> {
        let start = i.min(self.len());
        let k = Self::root(&mut self.left, start);
        k.checked_sub(1)
    }
}

/// Unvisited points of a realization, one [`LineIndex`] per line.
#[derive(Clone, Debug)]
pub struct UnvisitedSet {
    pub(crate) lines: [LineIndex; 2],
}

impl UnvisitedSet {
    pub fn new(len0: usize, len1: usize) -> UnvisitedSet {
        UnvisitedSet {
            lines: [LineIndex::new(len0), LineIndex::new(len1)],
        }
    }

    pub fn remaining(&self) -> usize {
        self.lines[0].live() + self.lines[1].live()
    }

    pub fn line(&self, line: crate::Line) -> &LineIndex {
        &self.lines[line.index()]
    }

    pub fn line_mut(&mut self, line: crate::Line) -> &mut LineIndex {
        &mut self.lines[line.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbours_after_removal() {
        let mut ix = LineIndex::new(6);
        assert_eq!(ix.succ(0), Some(0));
        assert_eq!(ix.pred_before(0), None);
        assert_eq!(ix.pred_before(6), Some(5));
        for i in [1, 2, 4] {
            ix.remove(i);
        }
        assert_eq!(ix.succ(1), Some(3));
        assert_eq!(ix.succ(4), Some(5));
        assert_eq!(ix.pred_before(3), Some(0));
        assert_eq!(ix.pred_before(5), Some(3));
        ix.remove(5);
        assert_eq!(ix.succ(4), None);
        assert_eq!(ix.pred_before(6), Some(3));
        assert_eq!(ix.live(), 2);
        ix.remove(5);
        assert_eq!(ix.live(), 2);
    }

    #[test]
    fn empty_line() {
        let mut ix = LineIndex::new(0);
        assert_eq!(ix.succ(0), None);
        assert_eq!(ix.pred_before(0), None);
    }

    #[test]
    fn matches_linear_scan() {
        let n = 200;
        let mut ix = LineIndex::new(n);
        let mut alive = alloc::vec![true; n];
        let mut state = 12345u64;
        for _ in 0..n {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let i = (state >> 33) as usize % n;
            ix.remove(i);
            alive[i] = false;
            for q in 0..=n {
                let succ = (q..n).find(|&j| alive[j]);
                let pred = (0..q).rev().find(|&j| alive[j]);
                assert_eq!(ix.succ(q), succ);
                assert_eq!(ix.pred_before(q), pred);
            }
        }
    }
}
