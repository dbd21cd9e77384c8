//! Binary min-heap over path keys, charging one comparison per key compare.

use crate::order::{OpCounters, PathKey};

#[derive(Clone, Debug, Default)]
pub struct MinHeap {
    data: Vec<(PathKey, u32)>,
}

impl MinHeap {
    pub fn new() -> Self {
        MinHeap { data: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn push(&mut self, key: PathKey, v: u32, counters: &mut OpCounters) {
        self.data.push((key, v));
        let mut i = self.data.len() - 1;
        while i > 0 {
            let p = (i - 1) / 2;
            counters.comparisons += 1;
            if self.data[i].0 < self.data[p].0 {
                self.data.swap(i, p);
                i = p;
            } else {
                break;
            }
        }
    }

    pub fn pop(&mut self, counters: &mut OpCounters) -> Option<(PathKey, u32)> {
        let n = self.data.len();
        if n == 0 {
            return None;
        }
        self.data.swap(0, n - 1);
        let out = self.data.pop();
        let n = self.data.len();
        let mut i = 0;
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let mut best = l;
            if r < n {
                counters.comparisons += 1;
                if self.data[r].0 < self.data[l].0 {
                    best = r;
                }
            }
            counters.comparisons += 1;
            if self.data[best].0 < self.data[i].0 {
                self.data.swap(i, best);
                i = best;
            } else {
                break;
            }
        }
        out
    }
}
