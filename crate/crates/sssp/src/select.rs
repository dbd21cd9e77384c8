//! Deterministic linear-time selection (median of medians).

use std::cmp::Ordering;

/// Reorder `items` so that the element with rank `n` (0-based) sits at index
/// `n`, everything before it compares less-or-equal, and everything after it
/// compares greater-or-equal. Deterministic median-of-medians pivoting.
pub fn select_nth_by<T, F>(items: &mut [T], n: usize, cmp: &mut F)
where
    F: FnMut(&T, &T) -> Ordering,
{
    assert!(n < items.len());
    let mut slice = items;
    let mut rank = n;
    loop {
        if slice.len() <= 5 {
            insertion_sort(slice, cmp);
            return;
        }
        let pivot = median_of_medians(slice, cmp);
        let (lt, eq) = partition(slice, pivot, cmp);
        if rank < lt {
            slice = &mut slice[..lt];
        } else if rank < lt + eq {
            return;
        } else {
            rank -= lt + eq;
            slice = &mut slice[lt + eq..];
        }
    }
}

fn insertion_sort<T, F: FnMut(&T, &T) -> Ordering>(items: &mut [T], cmp: &mut F) {
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && cmp(&items[j - 1], &items[j]) == Ordering::Greater {
            items.swap(j - 1, j);
            j -= 1;
        }
    }
}

/// Index of a guaranteed 30/70 pivot: the median of the group-of-5 medians.
fn median_of_medians<T, F: FnMut(&T, &T) -> Ordering>(items: &mut [T], cmp: &mut F) -> usize {
    let mut groups = 0;
    let len = items.len();
    for start in (0..len).step_by(5) {
        let end = (start + 5).min(len);
        insertion_sort(&mut items[start..end], cmp);
        let median = start + (end - start) / 2;
        items.swap(groups, median);
        groups += 1;
    }
    // Recursively select the median of the collected medians in the prefix.
    select_nth_by(&mut items[..groups], groups / 2, cmp);
    groups / 2
}

/// Three-way partition around the element at `pivot`; returns the sizes of
/// the less-than and equal regions.
fn partition<T, F: FnMut(&T, &T) -> Ordering>(
    items: &mut [T],
    pivot: usize,
    cmp: &mut F,
) -> (usize, usize) {
    let last = items.len() - 1;
    items.swap(pivot, last);
    let mut lt = 0;
    for i in 0..last {
        if cmp(&items[i], &items[last]) == Ordering::Less {
            items.swap(i, lt);
            lt += 1;
        }
    }
    let mut eq = 0;
    for i in lt..last {
        if cmp(&items[i], &items[last]) == Ordering::Equal {
            items.swap(i, lt + eq);
            eq += 1;
        }
    }
    items.swap(last, lt + eq);
    eq += 1;
    (lt, eq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::SplitMix64;

    #[test]
    fn matches_sort_oracle() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..300 {
            let len = 1 + rng.next_below(200) as usize;
            let items: Vec<u64> = (0..len).map(|_| rng.next_below(50)).collect();
            let mut sorted = items.clone();
            sorted.sort_unstable();
            let n = rng.next_below(len as u64) as usize;
            let mut work = items.clone();
            select_nth_by(&mut work, n, &mut |a, b| a.cmp(b));
            assert_eq!(work[n], sorted[n], "rank {n} of {items:?}");
            assert!(work[..n].iter().all(|x| *x <= sorted[n]));
            assert!(work[n + 1..].iter().all(|x| *x >= sorted[n]));
        }
    }
}
