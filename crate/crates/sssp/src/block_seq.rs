//! Partial-sorting structure: Insert, BatchPrepend, and Pull with a
//! separating bound.
//!
//! Entries live in two sequences of bounded blocks. `d0` holds batches that
//! were prepended (each batch smaller than everything live at the time), `d1`
//! holds individually inserted entries, each of its blocks carrying an upper
//! bound held in an ordered index. Blocks are value-sorted across a sequence
//! but unsorted inside; deletion is lazy through per-key handles.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::order::{Bound, OpCounters, PathKey};
use crate::select::select_nth_by;

#[derive(Debug, Error, PartialEq)]
pub enum BlockSeqError {
    #[error("block capacity must be >= 1")]
    BadCapacity,
    #[error("value for key {0} is not below the global bound")]
    ValueAboveBound(u32),
}

/// Instrumentation for the amortized-cost accounting tests.
#[derive(Clone, Copy, Debug, Default)]
pub struct BlockStats {
    pub inserts: u64,
    pub batch_items: u64,
    pub pulls: u64,
    pub index_searches: u64,
    pub splits: u64,
    pub split_work: u64,
    pub max_d1_blocks: u64,
}

type Pair = (u32, PathKey);

#[derive(Clone, Copy, Debug, PartialEq)]
enum Home {
    D0,
    /// Position in the d1 bound index: (block upper bound, tie-break seq).
    D1(Bound, u64),
}

#[derive(Clone, Debug)]
struct Block {
    slots: Vec<Option<Pair>>,
    live: usize,
    home: Home,
}

impl Block {
    fn new(home: Home) -> Self {
        Block {
            slots: Vec::new(),
            live: 0,
            home,
        }
    }

    fn live_entries(&self) -> impl Iterator<Item = &Pair> {
        self.slots.iter().flatten()
    }
}

#[derive(Clone, Copy, Debug)]
struct Handle {
    block: usize,
    slot: usize,
    value: PathKey,
}

#[derive(Debug)]
pub struct BlockSeq {
    m: usize,
    bound: Bound,
    blocks: Vec<Block>,
    free: Vec<usize>,
    /// Front = smallest batch.
    d0: VecDeque<usize>,
    /// Block upper bounds -> block id, ordered; this is the d1 sequence.
    d1_index: BTreeMap<(Bound, u64), usize>,
    seq: u64,
    key_map: HashMap<u32, Handle>,
    pub counters: OpCounters,
    pub stats: BlockStats,
}

impl BlockSeq {
    /// Empty structure; d1 starts with a single empty block bounded by `bound`.
    pub fn new(m: usize, bound: Bound) -> Result<Self, BlockSeqError> {
        if m < 1 {
            return Err(BlockSeqError::BadCapacity);
        }
        let mut ds = BlockSeq {
            m,
            bound,
            blocks: Vec::new(),
            free: Vec::new(),
            d0: VecDeque::new(),
            d1_index: BTreeMap::new(),
            seq: 0,
            key_map: HashMap::new(),
            counters: OpCounters::default(),
            stats: BlockStats::default(),
        };
        ds.new_d1_block(bound);
        Ok(ds)
    }

    pub fn is_empty(&self) -> bool {
        self.key_map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.key_map.len()
    }

    pub fn bound(&self) -> Bound {
        self.bound
    }

    fn alloc(&mut self, home: Home) -> usize {
        if let Some(id) = self.free.pop() {
            self.blocks[id] = Block::new(home);
            id
        } else {
            self.blocks.push(Block::new(home));
            self.blocks.len() - 1
        }
    }

    fn new_d1_block(&mut self, upper: Bound) -> usize {
        self.seq += 1;
        let key = (upper, self.seq);
        let id = self.alloc(Home::D1(upper, self.seq));
        self.d1_index.insert(key, id);
        self.stats.max_d1_blocks = self.stats.max_d1_blocks.max(self.d1_index.len() as u64);
        id
    }

    /// One comparison per level of the ordered index.
    fn charge_index_search(&mut self) {
        self.stats.index_searches += 1;
        let blocks = self.d1_index.len().max(1) as u64;
        self.counters.comparisons += 64 - blocks.leading_zeros() as u64;
    }

    fn compare(&mut self, a: &PathKey, b: &PathKey) -> std::cmp::Ordering {
        self.counters.comparisons += 1;
        a.cmp(b)
    }

    /// Unlink the live entry of `key`; the slot goes dead in place.
    fn unlink(&mut self, key: u32) {
        let h = self.key_map.remove(&key).expect("unlink of absent key");
        let block = &mut self.blocks[h.block];
        debug_assert_eq!(block.slots[h.slot].map(|(k, _)| k), Some(key));
        block.slots[h.slot] = None;
        block.live -= 1;
        if block.live == 0 {
            self.retire_if_possible(h.block);
        }
    }

    /// Drop an empty block. The d1 block carrying the global bound is kept
    /// as the landing site for future inserts; empty d0 blocks are dropped
    /// lazily when they surface at the front during a pull.
    fn retire_if_possible(&mut self, id: usize) {
        match self.blocks[id].home {
            Home::D0 => {
                self.blocks[id].slots.clear();
            }
            Home::D1(upper, seq) => {
                if upper == self.bound {
                    self.blocks[id].slots.clear();
                    return;
                }
                self.charge_index_search();
                self.d1_index.remove(&(upper, seq));
                self.blocks[id].slots.clear();
                self.free.push(id);
            }
        }
    }

    fn place(&mut self, block_id: usize, pair: Pair) {
        let block = &mut self.blocks[block_id];
        let slot = block.slots.len();
        block.slots.push(Some(pair));
        block.live += 1;
        self.key_map.insert(
            pair.0,
            Handle {
                block: block_id,
                slot,
                value: pair.1,
            },
        );
    }

    /// Insert a key/value pair; an existing entry is replaced only by a
    /// strictly smaller value.
    pub fn insert(&mut self, key: u32, value: PathKey) -> Result<(), BlockSeqError> {
        let mut scratch = OpCounters::default();
        if self.bound.at_or_above(&value, &mut scratch) {
            self.counters.merge(&scratch);
            return Err(BlockSeqError::ValueAboveBound(key));
        }
        self.counters.merge(&scratch);
        self.stats.inserts += 1;

        if let Some(h) = self.key_map.get(&key).copied() {
            if self.compare(&value, &h.value) != std::cmp::Ordering::Less {
                return Ok(());
            }
            self.unlink(key);
        }

        // Smallest d1 upper bound >= value.
        self.charge_index_search();
        let probe = (Bound::Finite(value), 0u64);
        let block_id = match self.d1_index.range(probe..).next() {
            Some((_, &id)) => id,
            // All d1 blocks with bound >= value were retired; the sentinel
            // bound block always matches since value < bound, except when a
            // previous split narrowed every bound. Recreate the sentinel.
            None => self.new_d1_block(self.bound),
        };
        self.place(block_id, (key, value));
        if self.blocks[block_id].slots.len() > self.m {
            self.split(block_id);
        }
        Ok(())
    }

    /// Split an over-full d1 block at the median of its live entries.
    fn split(&mut self, id: usize) {
        self.stats.splits += 1;
        let (upper, seq) = match self.blocks[id].home {
            Home::D1(u, s) => (u, s),
            Home::D0 => unreachable!("split only applies to d1 blocks"),
        };
        let mut live: Vec<Pair> = self.blocks[id].live_entries().copied().collect();
        self.stats.split_work += live.len() as u64;
        if live.len() <= 1 {
            // All slack was dead slots; compact in place.
            let pairs = live;
            self.blocks[id].slots.clear();
            self.blocks[id].live = 0;
            for p in pairs {
                self.place(id, p);
            }
            return;
        }
        let mid = live.len() / 2;
        let mut comparisons = 0u64;
        select_nth_by(&mut live, mid, &mut |a: &Pair, b: &Pair| {
            comparisons += 1;
            a.1.cmp(&b.1)
        });
        self.counters.comparisons += comparisons;
        let upper_half = live.split_off(mid);
        let lower_half = live;
        // The lower block's bound is its own maximum: strictly below the
        // median, so the index orders the two halves correctly even when the
        // median equals the original block bound.
        let lower_bound = Bound::Finite(lower_half.iter().map(|p| p.1).max().unwrap());

        // Existing block keeps (upper, seq) and receives the upper half; a
        // fresh block with the median bound takes the lower half.
        self.blocks[id].slots.clear();
        self.blocks[id].live = 0;
        for p in upper_half {
            self.place(id, p);
        }
        let low_id = self.new_d1_block(lower_bound);
        self.charge_index_search();
        for p in lower_half {
            self.place(low_id, p);
        }
        let _ = (upper, seq);
    }

    /// Prepend pairs that are all strictly smaller than every live value.
    /// Duplicate keys keep the smallest value; keys already live are
    /// superseded.
    pub fn batch_prepend(&mut self, pairs: &[Pair]) -> Result<(), BlockSeqError> {
        if pairs.is_empty() {
            return Ok(());
        }
        let mut scratch = OpCounters::default();
        for &(k, v) in pairs {
            if self.bound.at_or_above(&v, &mut scratch) {
                self.counters.merge(&scratch);
                return Err(BlockSeqError::ValueAboveBound(k));
            }
        }
        self.counters.merge(&scratch);

        #[cfg(debug_assertions)]
        if let Some(min_live) = self.min_live_value() {
            for &(k, v) in pairs {
                assert!(
                    v < min_live,
                    "batch_prepend order violation: key {k} value {v:?} >= min live {min_live:?}"
                );
            }
        }

        // Keep the smallest value per key within the batch.
        let mut best: HashMap<u32, PathKey> = HashMap::with_capacity(pairs.len());
        for &(k, v) in pairs {
            match best.entry(k) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    if self.compare(&v, e.get()) == std::cmp::Ordering::Less {
                        e.insert(v);
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
            }
        }
        let deduped: Vec<Pair> = best.into_iter().collect();
        self.stats.batch_items += deduped.len() as u64;
        for &(k, _) in &deduped {
            if self.key_map.contains_key(&k) {
                self.unlink(k);
            }
        }

        // Cut into value-ordered chunks of at most ceil(M/2) by repeated
        // median splits, then push them at the front smallest-last.
        let half = self.m.div_ceil(2);
        let mut chunks: Vec<Vec<Pair>> = Vec::new();
        if deduped.len() <= self.m {
            chunks.push(deduped);
        } else {
            let mut stack = vec![deduped];
            while let Some(mut part) = stack.pop() {
                if part.len() <= half {
                    chunks.push(part);
                    continue;
                }
                let mid = part.len() / 2;
                let mut comparisons = 0u64;
                select_nth_by(&mut part, mid, &mut |a: &Pair, b: &Pair| {
                    comparisons += 1;
                    a.1.cmp(&b.1)
                });
                self.counters.comparisons += comparisons;
                let upper = part.split_off(mid);
                stack.push(part);
                stack.push(upper);
            }
            // The stack discipline above yields chunks in no fixed order;
            // order them by their minimum value before prepending.
            chunks.sort_by(|a, b| {
                let min_a = a.iter().map(|p| p.1).min().unwrap();
                let min_b = b.iter().map(|p| p.1).min().unwrap();
                self.counters.comparisons += 1;
                min_a.cmp(&min_b)
            });
        }
        for chunk in chunks.into_iter().rev() {
            if chunk.is_empty() {
                continue;
            }
            let id = self.alloc(Home::D0);
            self.d0.push_front(id);
            for p in chunk {
                self.place(id, p);
            }
        }
        Ok(())
    }

    /// Smallest live value, scanning the first non-empty block of each
    /// sequence (blocks are value-sorted across a sequence).
    pub fn min_live_value(&self) -> Option<PathKey> {
        let d0_min = self
            .d0
            .iter()
            .find(|&&id| self.blocks[id].live > 0)
            .and_then(|&id| self.blocks[id].live_entries().map(|p| p.1).min());
        let d1_min = self
            .d1_index
            .values()
            .find(|&&id| self.blocks[id].live > 0)
            .and_then(|&id| self.blocks[id].live_entries().map(|p| p.1).min());
        match (d0_min, d1_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Remove and return up to M keys with the smallest live values plus a
    /// bound separating them from everything left: the minimum remaining
    /// value, or the global bound when the structure was emptied.
    pub fn pull(&mut self) -> (Vec<Pair>, Bound) {
        self.stats.pulls += 1;

        // Drop spent d0 blocks that surfaced at the front.
        while matches!(self.d0.front(), Some(&id) if self.blocks[id].live == 0) {
            let id = self.d0.pop_front().unwrap();
            self.blocks[id].slots.clear();
            self.free.push(id);
        }

        // Prefix of whole blocks from each sequence until M live entries.
        let mut candidates: Vec<Pair> = Vec::new();
        let mut collected0 = 0usize;
        let mut exhausted0 = true;
        for &id in &self.d0 {
            if collected0 >= self.m {
                exhausted0 = false;
                break;
            }
            collected0 += self.blocks[id].live;
            candidates.extend(self.blocks[id].live_entries().copied());
        }
        let mut collected1 = 0usize;
        let mut exhausted1 = true;
        for &id in self.d1_index.values() {
            if collected1 >= self.m {
                exhausted1 = false;
                break;
            }
            collected1 += self.blocks[id].live;
            candidates.extend(self.blocks[id].live_entries().copied());
        }

        let take = if exhausted0 && exhausted1 && candidates.len() <= self.m {
            candidates.len()
        } else {
            self.m.min(candidates.len())
        };
        if take < candidates.len() {
            let mut comparisons = 0u64;
            select_nth_by(&mut candidates, take - 1, &mut |a: &Pair, b: &Pair| {
                comparisons += 1;
                a.1.cmp(&b.1)
            });
            self.counters.comparisons += comparisons;
        }
        let pulled: Vec<Pair> = candidates[..take].to_vec();
        for &(k, _) in &pulled {
            self.unlink(k);
        }

        let x = match self.min_live_value() {
            None => self.bound,
            Some(min) => {
                self.counters.comparisons += 1;
                Bound::Finite(min)
            }
        };
        (pulled, x)
    }
}

/// Sorted-map reference model and the shared differential driver, used by
/// both the unit tests and the acceptance suite.
pub mod differential {
    use super::*;
    use crate::generate::SplitMix64;
    use std::collections::BTreeSet;

    /// Reference implementation: fully sorted map with the same dedup rules.
    pub struct Reference {
        m: usize,
        bound: Bound,
        by_value: BTreeSet<(PathKey, u32)>,
        by_key: HashMap<u32, PathKey>,
    }

    impl Reference {
        pub fn new(m: usize, bound: Bound) -> Self {
            Reference {
                m,
                bound,
                by_value: BTreeSet::new(),
                by_key: HashMap::new(),
            }
        }

        pub fn is_empty(&self) -> bool {
            self.by_key.is_empty()
        }

        pub fn offer(&mut self, key: u32, value: PathKey) {
            match self.by_key.get(&key) {
                Some(&old) if old <= value => return,
                Some(&old) => {
                    self.by_value.remove(&(old, key));
                }
                None => {}
            }
            self.by_key.insert(key, value);
            self.by_value.insert((value, key));
        }

        pub fn pull(&mut self) -> (Vec<Pair>, Bound) {
            let mut out = Vec::new();
            while out.len() < self.m {
                match self.by_value.pop_first() {
                    Some((v, k)) => {
                        self.by_key.remove(&k);
                        out.push((k, v));
                    }
                    None => break,
                }
            }
            let x = match self.by_value.first() {
                None => self.bound,
                Some(&(v, _)) => Bound::Finite(v),
            };
            (out, x)
        }

        pub fn min_live(&self) -> Option<PathKey> {
            self.by_value.first().map(|&(v, _)| v)
        }
    }

    /// Drive both implementations with the same random valid sequence and
    /// compare every pull. Shared by the acceptance suite.
    pub fn differential_round(seed: u64, m: usize, ops: usize) {
        let mut rng = SplitMix64::new(seed);
        let bound = Bound::Infinity;
        let mut ds = BlockSeq::new(m, bound).unwrap();
        let mut reference = Reference::new(m, bound);
        let mut next_key = 0u32;
        for _ in 0..ops {
            match rng.next_below(5) {
                0 | 1 => {
                    // insert: fresh or repeated key, any value
                    let k = if next_key > 0 && rng.next_below(3) == 0 {
                        rng.next_below(next_key as u64) as u32
                    } else {
                        next_key += 1;
                        next_key - 1
                    };
                    let v = PathKey::new(rng.next_below(1 << 20) as f64, 1, k);
                    ds.insert(k, v).unwrap();
                    reference.offer(k, v);
                }
                2 => {
                    // batch_prepend strictly below the live minimum; integer
                    // lengths keep the strictness check exact
                    let floor = reference
                        .min_live()
                        .map(|k| k.length as u64)
                        .unwrap_or(1 << 20);
                    if floor == 0 {
                        continue;
                    }
                    let count = 1 + rng.next_below(2 * m as u64 + 2) as usize;
                    let mut pairs = Vec::new();
                    for _ in 0..count {
                        let k = if next_key > 0 && rng.next_below(4) == 0 {
                            rng.next_below(next_key as u64) as u32
                        } else {
                            next_key += 1;
                            next_key - 1
                        };
                        let v = PathKey::new(rng.next_below(floor) as f64, 1, k);
                        pairs.push((k, v));
                    }
                    ds.batch_prepend(&pairs).unwrap();
                    for (k, v) in pairs {
                        reference.offer(k, v);
                    }
                }
                _ => {
                    let (got, gx) = ds.pull();
                    let (want, wx) = reference.pull();
                    let got_set: BTreeSet<Pair> = got.into_iter().collect();
                    let want_set: BTreeSet<Pair> = want.into_iter().collect();
                    assert_eq!(got_set, want_set, "pull mismatch (seed {seed}, M {m})");
                    assert_eq!(gx, wx, "separating bound mismatch (seed {seed}, M {m})");
                    if let Some(max_pulled) = got_set.iter().map(|p| p.1).max() {
                        match gx {
                            Bound::Finite(x) => assert!(max_pulled < x),
                            Bound::Infinity => {}
                        }
                    }
                    assert_eq!(ds.is_empty(), reference.is_empty());
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::differential::differential_round;
    use crate::generate::SplitMix64;
    use super::*;
    use std::collections::BTreeSet;

    fn key(len: f64, ep: u32) -> PathKey {
        PathKey::new(len, 1, ep)
    }

    #[test]
    fn initialize_cases() {
        assert!(BlockSeq::new(2, Bound::Infinity).unwrap().is_empty());
        let b = Bound::Finite(key(9.0, 0));
        assert_eq!(BlockSeq::new(1, b).unwrap().bound(), b);
        assert_eq!(
            BlockSeq::new(0, Bound::Infinity).unwrap_err(),
            BlockSeqError::BadCapacity
        );
    }

    #[test]
    fn insert_keeps_smaller_value() {
        let mut ds = BlockSeq::new(4, Bound::Infinity).unwrap();
        ds.insert(7, key(5.0, 7)).unwrap();
        assert_eq!(ds.len(), 1);
        ds.insert(7, key(7.0, 7)).unwrap();
        assert_eq!(ds.key_map[&7].value, key(5.0, 7));
        ds.insert(7, key(3.0, 7)).unwrap();
        assert_eq!(ds.key_map[&7].value, key(3.0, 7));
    }

    #[test]
    fn insert_above_bound_rejected() {
        let mut ds = BlockSeq::new(2, Bound::Finite(key(4.0, 0))).unwrap();
        assert_eq!(
            ds.insert(1, key(4.5, 1)),
            Err(BlockSeqError::ValueAboveBound(1))
        );
    }

    #[test]
    fn pull_examples() {
        let mut ds = BlockSeq::new(2, Bound::Infinity).unwrap();
        ds.insert(0, key(5.0, 0)).unwrap();
        ds.insert(1, key(3.0, 1)).unwrap();
        ds.insert(2, key(9.0, 2)).unwrap();
        let (pulled, x) = ds.pull();
        let keys: BTreeSet<u32> = pulled.iter().map(|p| p.0).collect();
        assert_eq!(keys, BTreeSet::from([0, 1]));
        assert_eq!(x, Bound::Finite(key(9.0, 2)));

        let mut ds = BlockSeq::new(2, Bound::Infinity).unwrap();
        ds.insert(0, key(5.0, 0)).unwrap();
        let (pulled, x) = ds.pull();
        assert_eq!(pulled.len(), 1);
        assert_eq!(x, Bound::Infinity);

        let mut ds = BlockSeq::new(2, Bound::Infinity).unwrap();
        let (pulled, x) = ds.pull();
        assert!(pulled.is_empty());
        assert_eq!(x, Bound::Infinity);
    }

    #[test]
    fn batch_prepend_dedup_and_block_sizes() {
        let mut ds = BlockSeq::new(2, Bound::Infinity).unwrap();
        ds.batch_prepend(&[(4, key(2.0, 4)), (4, key(1.0, 4))]).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.key_map[&4].value, key(1.0, 4));

        let mut ds = BlockSeq::new(2, Bound::Infinity).unwrap();
        let pairs: Vec<Pair> = (0..5).map(|i| (i, key(i as f64, i))).collect();
        ds.batch_prepend(&pairs).unwrap();
        assert!(ds.d0.len() >= 3);
        // Each block holds at most ceil(M/2) = 1 element, values ascending
        // across blocks.
        let mut last_max: Option<PathKey> = None;
        for &id in &ds.d0 {
            let vals: Vec<PathKey> = ds.blocks[id].live_entries().map(|p| p.1).collect();
            assert!(vals.len() <= 1);
            if let (Some(prev), Some(min)) = (last_max, vals.iter().min()) {
                assert!(prev < *min);
            }
            if let Some(max) = vals.iter().max() {
                last_max = Some(*max);
            }
        }
        ds.batch_prepend(&[]).unwrap();
        assert_eq!(ds.len(), 5);
    }

    #[test]
    fn is_empty_transitions() {
        let mut ds = BlockSeq::new(2, Bound::Infinity).unwrap();
        assert!(ds.is_empty());
        ds.insert(0, key(1.0, 0)).unwrap();
        assert!(!ds.is_empty());
        loop {
            let (pulled, _) = ds.pull();
            if pulled.is_empty() {
                break;
            }
        }
        assert!(ds.is_empty());
    }

    #[test]
    fn differential_smoke() {
        for m in [1usize, 2, 4, 16] {
            for seed in 0..25 {
                differential_round(seed * 31 + m as u64, m, 300);
            }
        }
    }

    // d1 block count stays O(N / M) with a generous constant, and split work
    // stays linear in the insert count.
    #[test]
    fn amortized_accounting() {
        let mut rng = SplitMix64::new(2024);
        for m in [1usize, 4, 16] {
            let mut ds = BlockSeq::new(m, Bound::Infinity).unwrap();
            let n_ops = 1000u64;
            for i in 0..n_ops {
                let v = PathKey::new(rng.next_below(1 << 16) as f64, 1, i as u32);
                ds.insert(i as u32, v).unwrap();
            }
            let bound = 8 * (n_ops / m as u64).max(1);
            assert!(
                ds.stats.max_d1_blocks <= bound,
                "blocks {} > {bound} at M={m}",
                ds.stats.max_d1_blocks
            );
            assert!(ds.stats.split_work <= 8 * n_ops);
            let per_insert = ds.stats.index_searches as f64 / n_ops as f64;
            assert!(per_insert <= 4.0, "index searches per insert {per_insert}");
        }
    }
}
