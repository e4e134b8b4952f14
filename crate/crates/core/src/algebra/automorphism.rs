use serde::Serialize;

use super::FinSemigroup;
use crate::error::{Error, Result};
use crate::mask::SubsetMask;

pub const DEFAULT_AUTOMORPHISM_LIMIT: usize = 12;

/// A permutation of `0..n`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Panics unless `images` is a permutation.
    pub fn from_images(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            assert!(x < images.len() && !seen[x], "not a permutation: {images:?}");
            seen[x] = true;
        }
        Permutation(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }

    pub fn apply_mask(&self, m: SubsetMask) -> SubsetMask {
        SubsetMask::from_elements(m.width(), m.iter().map(|x| self.0[x]))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// All table-preserving permutations, in lexicographic order of image lists.
pub fn automorphisms(s: &FinSemigroup) -> Result<Vec<Permutation>> {
    automorphisms_with_limit(s, DEFAULT_AUTOMORPHISM_LIMIT)
}

pub fn automorphisms_with_limit(s: &FinSemigroup, limit: usize) -> Result<Vec<Permutation>> {
    let n = s.order();
    if n > limit {
        return Err(Error::SizeLimitExceeded(format!(
            "automorphism search on order {n} (limit {limit})"
        )));
    }
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut preimage = vec![usize::MAX; n];
    extend(s, 0, &mut image, &mut preimage, &mut out);
    Ok(out)
}

fn extend(
    s: &FinSemigroup,
    k: usize,
    image: &mut [usize],
    preimage: &mut [usize],
    out: &mut Vec<Permutation>,
) {
    let n = s.order();
    if k == n {
        out.push(Permutation(image.to_vec()));
        return;
    }
    for candidate in 0..n {
        if preimage[candidate] != usize::MAX {
            continue;
        }
        image[k] = candidate;
        preimage[candidate] = k;
        if consistent(s, k, image, preimage) {
            extend(s, k + 1, image, preimage, out);
        }
        preimage[candidate] = usize::MAX;
        image[k] = usize::MAX;
    }
}

/// Checks every pair involving the newly assigned `k` against the partial map.
fn consistent(s: &FinSemigroup, k: usize, image: &[usize], preimage: &[usize]) -> bool {
    for i in 0..=k {
        for (a, b) in [(i, k), (k, i)] {
            let p = s.mul(a, b);
            let target = s.mul(image[a], image[b]);
            if p <= k {
                if image[p] != target {
                    return false;
                }
            } else if preimage[target] != usize::MAX {
                // the product's image is already taken by some other element
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_family, enumerate_semigroups, FamilySpec};

    fn build(s: &str) -> FinSemigroup {
        build_family(&s.parse().unwrap()).unwrap()
    }

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_force(s: &FinSemigroup) -> Vec<Permutation> {
        let n = s.order();
        let mut out: Vec<Permutation> = all_permutations(n)
            .into_iter()
            .filter(|p| (0..n).all(|a| (0..n).all(|b| p[s.mul(a, b)] == s.mul(p[a], p[b]))))
            .map(Permutation)
            .collect();
        out.sort();
        out
    }

    #[test]
    fn z4_has_two() {
        let auts = automorphisms(&build("cyclic:4")).unwrap();
        assert_eq!(auts, vec![Permutation(vec![0, 1, 2, 3]), Permutation(vec![0, 3, 2, 1])]);
    }

    #[test]
    fn z2_has_one() {
        assert_eq!(automorphisms(&build("cyclic:2")).unwrap().len(), 1);
    }

    #[test]
    fn right_zero_has_all() {
        assert_eq!(automorphisms(&build("rightzero:4")).unwrap().len(), 24);
        assert_eq!(automorphisms(&build("rightzero:5")).unwrap().len(), 120);
    }

    #[test]
    fn matches_brute_force() {
        for spec in ["cyclic:6", "symmetric:3", "dihedral:3", "null:4", "product:cyclic:2,cyclic:2", "transformation:2", "leftzero:3"] {
            let s = build(spec);
            assert_eq!(automorphisms(&s).unwrap(), brute_force(&s), "{spec}");
        }
        for s in enumerate_semigroups(3).unwrap() {
            assert_eq!(automorphisms(&s).unwrap(), brute_force(&s));
        }
    }

    #[test]
    fn closed_under_composition() {
        for spec in ["quaternion8", "dihedral:4", "cyclic:12", "alternating:4"] {
            let s = build(spec);
            let auts = automorphisms(&s).unwrap();
            for a in &auts {
                for b in &auts {
                    assert!(auts.contains(&a.compose(b)), "{spec}");
                }
            }
        }
        assert_eq!(automorphisms(&build("quaternion8")).unwrap().len(), 24);
        assert_eq!(automorphisms(&build("product:cyclic:2,cyclic:2,cyclic:2")).unwrap().len(), 168);
    }

    #[test]
    fn limit_is_enforced() {
        let s = build_family(&FamilySpec::Cyclic(13)).unwrap();
        assert!(matches!(automorphisms(&s), Err(Error::SizeLimitExceeded(_))));
        assert_eq!(automorphisms_with_limit(&s, 13).unwrap().len(), 12);
    }
}
