//! Partitions of a domain, minimum covering witnesses for their cells, and
//! worst-case sweeps over all partitions of a group.

mod cover;
mod sweep;

pub use cover::{min_cover, CoverCertificate, CoverMode, CoverOutcome};
pub use sweep::{
    delta_worst_case, proven_bound, run_sweep, worst_case_table, BoundRecord, SweepConfig,
    SweepProgress, SweepState, DEFAULT_CHUNK,
};

use serde::{Deserialize, Serialize};

use crate::algebra::Permutation;
use crate::error::{Error, Result};
use crate::mask::SubsetMask;

/// A labeling of the elements of `domain` (ascending) with cell ids in `0..cells`.
///
/// Labels always form a restricted growth string: the first element is in
/// cell 0 and each new cell id is one more than the largest seen so far.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    domain: SubsetMask,
    labels: Vec<u8>,
    cells: usize,
}

impl Partition {
    /// Validates the labeling. Empty cells are rejected unless `allow_empty`.
    pub fn new(domain: SubsetMask, labels: Vec<u8>, cells: usize, allow_empty: bool) -> Result<Self> {
        if labels.len() != domain.len() {
            return Err(Error::Dimension(format!(
                "{} labels for a domain of {} elements",
                labels.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l as usize >= cells) {
            return Err(Error::InvalidArgument(format!("label {bad} outside 0..{cells}")));
        }
        if !allow_empty && (0..cells).any(|c| !labels.contains(&(c as u8))) {
            return Err(Error::InvalidArgument("a partition cell is empty".into()));
        }
        Ok(Partition {
            domain,
            labels: normalize(&labels),
            cells,
        })
    }

    /// Builds from explicit cells, which must be pairwise disjoint.
    pub fn from_cells(cells: &[SubsetMask]) -> Result<Self> {
        let width = cells.first().map(|c| c.width()).unwrap_or(0);
        let mut domain = SubsetMask::empty(width);
        for c in cells {
            if c.intersects(domain) {
                return Err(Error::InvalidArgument("partition cells overlap".into()));
            }
            domain = domain.union(*c);
        }
        let labels = domain
            .iter()
            .map(|x| cells.iter().position(|c| c.contains(x)).unwrap() as u8)
            .collect();
        Partition::new(domain, labels, cells.len(), true)
    }

    pub fn domain(&self) -> SubsetMask {
        self.domain
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub fn cell(&self, i: usize) -> SubsetMask {
        let mut m = SubsetMask::empty(self.domain.width());
        for (x, &l) in self.domain.iter().zip(&self.labels) {
            if l as usize == i {
                m.insert(x);
            }
        }
        m
    }

    pub fn cell_masks(&self) -> Vec<SubsetMask> {
        (0..self.cells).map(|i| self.cell(i)).collect()
    }

    /// Same partition over a universe of `width` elements. Deserialized masks
    /// only know their largest element, so loaded partitions need this.
    pub fn with_width(mut self, width: usize) -> Result<Self> {
        self.domain = self
            .domain
            .with_width(width)
            .ok_or_else(|| Error::Dimension(format!("partition domain does not fit in width {width}")))?;
        Ok(self)
    }

    /// Largest minus smallest cell size.
    pub fn imbalance(&self) -> usize {
        let sizes: Vec<usize> = self.cell_masks().iter().map(|c| c.len()).collect();
        sizes.iter().max().unwrap_or(&0) - sizes.iter().min().unwrap_or(&0)
    }

    /// Image under an element permutation that maps the domain onto itself.
    pub fn permuted(&self, pi: &Permutation) -> Partition {
        let cells: Vec<SubsetMask> = self.cell_masks().iter().map(|&c| pi.apply_mask(c)).collect();
        let domain = pi.apply_mask(self.domain);
        debug_assert_eq!(domain, self.domain);
        let labels: Vec<u8> = domain
            .iter()
            .map(|x| cells.iter().position(|c| c.contains(x)).unwrap() as u8)
            .collect();
        Partition {
            domain,
            labels: normalize(&labels),
            cells: self.cells,
        }
    }

    /// Whether no automorphism maps this labeling to a lexicographically
    /// smaller one.
    pub fn is_canonical(&self, symmetry: &[Permutation]) -> bool {
        symmetry.iter().all(|pi| self.permuted(pi).labels >= self.labels)
    }
}

/// Relabels cells in order of first appearance.
fn normalize(labels: &[u8]) -> Vec<u8> {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    labels
        .iter()
        .map(|&l| {
            if map[l as usize] == u8::MAX {
                map[l as usize] = next;
                next += 1;
            }
            map[l as usize]
        })
        .collect()
}

/// Restricted growth strings of length `len` using at most `cells` labels,
/// in lexicographic order.
struct Rgs {
    len: usize,
    cells: usize,
    labels: Vec<u8>,
    started: bool,
    done: bool,
}

impl Rgs {
    fn new(len: usize, cells: usize) -> Self {
        Rgs {
            len,
            cells,
            labels: vec![0; len],
            started: false,
            done: cells == 0 && len > 0,
        }
    }
}

impl Iterator for Rgs {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.labels.clone());
        }
        let mut prefix_max = vec![0u8; self.len];
        for i in 1..self.len {
            prefix_max[i] = prefix_max[i - 1].max(self.labels[i - 1]);
        }
        for i in (1..self.len).rev() {
            let l = self.labels[i];
            if (l as usize) + 1 < self.cells && l <= prefix_max[i] {
                self.labels[i] = l + 1;
                for x in &mut self.labels[i + 1..] {
                    *x = 0;
                }
                return Some(self.labels.clone());
            }
        }
        self.done = true;
        None
    }
}

/// All partitions of `domain` into `cells` cells, one per cell relabeling
/// class and, when `symmetry` is given, one per orbit of those permutations
/// (the lexicographically least labeling). The permutations must map `domain`
/// onto itself.
pub fn enumerate_partitions<'a>(
    domain: SubsetMask,
    cells: usize,
    symmetry: Option<&'a [Permutation]>,
    allow_empty: bool,
) -> impl Iterator<Item = Partition> + 'a {
    let len = domain.len();
    Rgs::new(len, cells)
        .filter(move |labels| {
            allow_empty || labels.iter().copied().max().map_or(cells == 0, |m| m as usize + 1 == cells)
        })
        .map(move |labels| Partition {
            domain,
            labels,
            cells,
        })
        .filter(move |p| symmetry.is_none_or(|sym| p.is_canonical(sym)))
}

/// Every partition equivalent to `p` under `symmetry` (which must be a group).
pub fn orbit(p: &Partition, symmetry: &[Permutation]) -> Vec<Partition> {
    let mut out: Vec<Partition> = symmetry.iter().map(|pi| p.permuted(pi)).collect();
    out.sort_by(|a, b| a.labels.cmp(&b.labels));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{automorphisms, build_family};

    /// S(n, k) by the recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1).
    fn stirling2(n: usize, k: usize) -> usize {
        let mut t = vec![vec![0usize; k + 1]; n + 1];
        t[0][0] = 1;
        for i in 1..=n {
            for j in 1..=k.min(i) {
                t[i][j] = j * t[i - 1][j] + t[i - 1][j - 1];
            }
        }
        t[n][k]
    }

    #[test]
    fn counts_match_stirling_numbers() {
        assert_eq!(enumerate_partitions(SubsetMask::full(4), 2, None, false).count(), 7);
        for n in 1..=8 {
            for k in 1..=n {
                let count = enumerate_partitions(SubsetMask::full(n), k, None, false).count();
                assert_eq!(count, stirling2(n, k), "S({n},{k})");
            }
        }
        let with_empty = enumerate_partitions(SubsetMask::full(5), 3, None, true).count();
        assert_eq!(with_empty, stirling2(5, 1) + stirling2(5, 2) + stirling2(5, 3));
        assert_eq!(enumerate_partitions(SubsetMask::full(3), 4, None, false).count(), 0);
    }

    #[test]
    fn single_cell() {
        let d = SubsetMask::from_elements(6, [1, 2, 5]);
        let all: Vec<_> = enumerate_partitions(d, 1, None, false).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].cell(0), d);
    }

    #[test]
    fn symmetry_reduces_and_orbits_cover_everything() {
        let z4 = build_family(&"cyclic:4".parse().unwrap()).unwrap();
        let auts = automorphisms(&z4).unwrap();
        let reps: Vec<_> = enumerate_partitions(z4.full(), 2, Some(&auts), false).collect();
        assert!(reps.len() <= 7);
        let mut covered: Vec<Partition> = reps.iter().flat_map(|p| orbit(p, &auts)).collect();
        covered.sort_by(|a, b| a.labels.cmp(&b.labels));
        covered.dedup();
        let all: Vec<_> = enumerate_partitions(z4.full(), 2, None, false).collect();
        assert_eq!(covered, all);
    }

    #[test]
    fn from_cells_and_back() {
        let a = SubsetMask::from_elements(5, [0, 3]);
        let b = SubsetMask::from_elements(5, [1, 4]);
        let p = Partition::from_cells(&[b, a]).unwrap();
        assert_eq!(p.labels(), &[0, 1, 0, 1]);
        assert_eq!(p.cell(0), a);
        assert_eq!(p.cell(1), b);
        assert!(Partition::from_cells(&[a, a]).is_err());
        assert!(Partition::new(a, vec![0, 0], 2, false).is_err());
        assert!(Partition::new(a, vec![0, 2], 2, true).is_err());
    }
}
