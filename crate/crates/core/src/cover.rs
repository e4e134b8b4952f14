//! Exact minimum set cover over small candidate families.
//!
//! Candidates are tried in ascending cardinality and, within a cardinality,
//! in lexicographic order of their positions, so the first cover found is the
//! lexicographically least minimum one.

use crate::mask::SubsetMask;

/// Indices (into `candidates`) of a minimum-cardinality cover of `target`, or
/// `None` when even the union of all candidates misses part of it.
pub fn min_cover_exact(candidates: &[SubsetMask], target: SubsetMask) -> Option<Vec<usize>> {
    min_cover_bounded(candidates, target, candidates.len())
}

/// Like [`min_cover_exact`] but gives up on covers larger than `max_size`.
pub fn min_cover_bounded(
    candidates: &[SubsetMask],
    target: SubsetMask,
    max_size: usize,
) -> Option<Vec<usize>> {
    let t = target.bits();
    if t == 0 {
        return Some(Vec::new());
    }
    // suffix[i] = union of candidates[i..]
    let mut suffix = vec![0u64; candidates.len() + 1];
    for i in (0..candidates.len()).rev() {
        suffix[i] = suffix[i + 1] | candidates[i].bits();
    }
    if suffix[0] & t != t {
        return None;
    }
    let bits: Vec<u64> = candidates.iter().map(|c| c.bits()).collect();
    let mut chosen = Vec::new();
    for k in 1..=max_size.min(candidates.len()) {
        if search(&bits, &suffix, t, 0, k, &mut chosen) {
            return Some(chosen);
        }
    }
    None
}

fn search(bits: &[u64], suffix: &[u64], missing: u64, start: usize, k: usize, chosen: &mut Vec<usize>) -> bool {
    if missing == 0 {
        return true;
    }
    if k == 0 || suffix[start] & missing != missing {
        return false;
    }
    // The lowest missing element must be covered by some pick from here on;
    // still try picks in index order so the result stays lexicographically least.
    for i in start..bits.len() {
        if bits.len() - i < k {
            break;
        }
        if suffix[i] & missing != missing {
            break;
        }
        chosen.push(i);
        if search(bits, suffix, missing & !bits[i], i + 1, k - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Greedy cover: repeatedly take the candidate covering most of what is left,
/// lowest index on ties. Returned indices are sorted.
pub fn greedy_cover(candidates: &[SubsetMask], target: SubsetMask) -> Option<Vec<usize>> {
    let mut missing = target.bits();
    let mut chosen = Vec::new();
    while missing != 0 {
        let (best, gain) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (c.bits() & missing).count_ones()))
            .fold((usize::MAX, 0), |acc, (i, g)| if g > acc.1 { (i, g) } else { acc });
        if gain == 0 {
            return None;
        }
        chosen.push(best);
        missing &= !candidates[best].bits();
    }
    chosen.sort_unstable();
    Some(chosen)
}
