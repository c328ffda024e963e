use std::collections::VecDeque;

use rustc_hash::FxHashMap;

/// Influence vectors of failed search states, with the shallowest depth at
/// which each failed.
///
/// Under a static variable order, a state at depth `d` can only add
/// variables at positions `>= d`. If a state with the same influence failed
/// at depth `d0 <= d`, it had every option the current state has, so the
/// current state fails too.
///
/// Records live in layers so that a caller can discard those that are only
/// valid for part of a larger search (see [`NoGoodStore::push_layer`]).
/// The total number of entries is capped; the oldest are evicted first.
#[derive(Debug, Clone)]
pub struct NoGoodStore {
    layers: Vec<FxHashMap<Box<[u32]>, u32>>,
    fifo: VecDeque<(usize, Box<[u32]>)>,
    cap: usize,
    len: usize,
}

pub const DEFAULT_NOGOOD_CAP: usize = 1_000_000;

impl Default for NoGoodStore {
    fn default() -> Self {
        NoGoodStore::new(DEFAULT_NOGOOD_CAP)
    }
}

impl NoGoodStore {
    pub fn new(cap: usize) -> Self {
        NoGoodStore {
            layers: vec![FxHashMap::default()],
            fifo: VecDeque::new(),
            cap: cap.max(1),
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of layers (at least one).
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Opens a new layer; records go to the newest layer.
    pub fn push_layer(&mut self) {
        self.layers.push(FxHashMap::default());
    }

    /// Drops layers until `keep` remain (never fewer than one).
    pub fn truncate(&mut self, keep: usize) {
        let keep = keep.max(1);
        while self.layers.len() > keep {
            let l = self.layers.pop().expect("non-empty");
            self.len -= l.len();
        }
    }

    /// Stores `depth` for `vector` unless an equal or shallower record exists.
    pub fn record(&mut self, vector: &[u32], depth: u32) -> bool {
        if self.lookup(vector).is_some_and(|d| d <= depth) {
            return false;
        }
        let top = self.layers.len() - 1;
        match self.layers[top].get_mut(vector) {
            Some(d) => *d = depth,
            None => {
                let key: Box<[u32]> = vector.into();
                self.layers[top].insert(key.clone(), depth);
                self.fifo.push_back((top, key));
                self.len += 1;
                self.evict();
            }
        }
        true
    }

    fn evict(&mut self) {
        while self.len > self.cap {
            let Some((layer, key)) = self.fifo.pop_front() else {
                break;
            };
            if let Some(l) = self.layers.get_mut(layer) {
                if l.remove(&key).is_some() {
                    self.len -= 1;
                }
            }
        }
    }

    /// Shallowest recorded depth for `vector` over all layers.
    pub fn lookup(&self, vector: &[u32]) -> Option<u32> {
        self.layers
            .iter()
            .filter_map(|l| l.get(vector).copied())
            .min()
    }

    /// True iff `vector` failed before at a depth no greater than `depth`.
    pub fn matches(&self, vector: &[u32], depth: u32) -> bool {
        self.lookup(vector).is_some_and(|d| d <= depth)
    }
}

/// Free-function form of [`NoGoodStore::record`].
pub fn record_nogood(store: &mut NoGoodStore, vector: &[u32], depth: u32) {
    store.record(vector, depth);
}

/// Free-function form of [`NoGoodStore::matches`].
pub fn match_nogood(store: &NoGoodStore, vector: &[u32], depth: u32) -> bool {
    store.matches(vector, depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_rule() {
        let mut s = NoGoodStore::default();
        record_nogood(&mut s, &[1, 2], 7);
        assert!(match_nogood(&s, &[1, 2], 9));
        assert!(match_nogood(&s, &[1, 2], 7));
        assert!(!match_nogood(&s, &[1, 2], 5));
        assert!(!match_nogood(&s, &[2, 1], 9));
        record_nogood(&mut s, &[1, 2], 4);
        assert!(match_nogood(&s, &[1, 2], 5));
        record_nogood(&mut s, &[1, 2], 8);
        assert_eq!(s.lookup(&[1, 2]), Some(4));
    }

    #[test]
    fn layers_and_cap() {
        let mut s = NoGoodStore::new(2);
        s.record(&[0], 1);
        s.push_layer();
        s.record(&[1], 1);
        assert!(s.matches(&[0], 3) && s.matches(&[1], 3));
        s.truncate(1);
        assert!(!s.matches(&[1], 3));
        assert_eq!(s.len(), 1);
        s.record(&[2], 1);
        s.record(&[3], 1);
        assert_eq!(s.len(), 2);
        assert!(!s.matches(&[0], 9), "oldest entry evicted");
    }
}
