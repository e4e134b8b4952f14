//! Fixed-width subsets of `{0, .., width-1}` packed into a single `u64`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported semigroup order.
pub const MAX_WIDTH: usize = 64;

/// A subset of the elements of a finite semigroup.
///
/// Bits at positions `>= width` are always clear, so equality and ordering
/// compare the represented sets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u64,
    width: u8,
}

#[inline]
fn width_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl SubsetMask {
    pub fn empty(width: usize) -> Self {
        assert!(width <= MAX_WIDTH, "mask width {width} exceeds {MAX_WIDTH}");
        SubsetMask {
            bits: 0,
            width: width as u8,
        }
    }

    pub fn full(width: usize) -> Self {
        assert!(width <= MAX_WIDTH, "mask width {width} exceeds {MAX_WIDTH}");
        SubsetMask {
            bits: width_mask(width),
            width: width as u8,
        }
    }

    /// Builds a mask from raw bits; bits beyond `width` are dropped.
    pub fn from_bits(width: usize, bits: u64) -> Self {
        assert!(width <= MAX_WIDTH, "mask width {width} exceeds {MAX_WIDTH}");
        SubsetMask {
            bits: bits & width_mask(width),
            width: width as u8,
        }
    }

    pub fn singleton(width: usize, x: usize) -> Self {
        assert!(x < width, "element {x} out of range for width {width}");
        SubsetMask::from_bits(width, 1u64 << x)
    }

    /// Panics if an element is out of range.
    pub fn from_elements<I: IntoIterator<Item = usize>>(width: usize, elements: I) -> Self {
        let mut m = SubsetMask::empty(width);
        for x in elements {
            m.insert(x);
        }
        m
    }

    /// Fallible variant of [`SubsetMask::from_elements`] for untrusted input.
    pub fn try_from_elements(width: usize, elements: &[usize]) -> Option<Self> {
        if width > MAX_WIDTH || elements.iter().any(|&x| x >= width) {
            return None;
        }
        Some(SubsetMask::from_elements(width, elements.iter().copied()))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn width(self) -> usize {
        self.width as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_full(self) -> bool {
        self.bits == width_mask(self.width())
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        x < self.width() && (self.bits >> x) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        assert!(x < self.width(), "element {x} out of range for width {}", self.width);
        self.bits |= 1u64 << x;
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        if x < self.width() {
            self.bits &= !(1u64 << x);
        }
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        SubsetMask {
            bits: self.bits | other.bits,
            width: self.width,
        }
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        SubsetMask {
            bits: self.bits & other.bits,
            width: self.width,
        }
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        SubsetMask {
            bits: self.bits & !other.bits,
            width: self.width,
        }
    }

    #[inline]
    pub fn complement(self) -> Self {
        SubsetMask {
            bits: !self.bits & width_mask(self.width()),
            width: self.width,
        }
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_superset(self, other: Self) -> bool {
        other.is_subset(self)
    }

    #[inline]
    pub fn intersects(self, other: Self) -> bool {
        self.bits & other.bits != 0
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    /// Elements in ascending order.
    pub fn iter(self) -> Elements {
        Elements { bits: self.bits }
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, in ascending order of their raw bits.
    pub fn subsets(self) -> Subsets {
        Subsets {
            universe: self.bits,
            next: Some(0),
            width: self.width,
        }
    }

    /// All supersets of `self` within the full mask, in ascending order of raw bits.
    pub fn supersets(self) -> impl Iterator<Item = SubsetMask> {
        let base = self;
        self.complement().subsets().map(move |extra| base.union(extra))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Deserializes from an element list; the width is taken as one past the
/// largest element and must be fixed up by the caller with [`SubsetMask::with_width`].
impl<'de> Deserialize<'de> for SubsetMask {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let elements = Vec::<usize>::deserialize(deserializer)?;
        let width = elements.iter().map(|&x| x + 1).max().unwrap_or(0);
        SubsetMask::try_from_elements(width, &elements)
            .ok_or_else(|| serde::de::Error::custom("element index exceeds 63"))
    }
}

impl SubsetMask {
    /// Reinterprets the mask at a different width. Returns `None` if an element
    /// would fall outside the new width.
    pub fn with_width(self, width: usize) -> Option<Self> {
        if width > MAX_WIDTH || self.bits & !width_mask(width) != 0 {
            return None;
        }
        Some(SubsetMask {
            bits: self.bits,
            width: width as u8,
        })
    }
}

pub struct Elements {
    bits: u64,
}

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let x = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

/// Submask enumeration in increasing numeric order.
pub struct Subsets {
    universe: u64,
    next: Option<u64>,
    width: u8,
}

impl Iterator for Subsets {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        // Next submask in increasing order: (cur - universe) & universe, wrapping.
        let succ = cur.wrapping_sub(self.universe) & self.universe;
        self.next = (succ != 0).then_some(succ);
        Some(SubsetMask {
            bits: cur,
            width: self.width,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_empty() {
        let f = SubsetMask::full(5);
        assert_eq!(f.len(), 5);
        assert!(f.is_full());
        assert!(f.complement().is_empty());
        assert!(SubsetMask::full(64).is_full());
        assert_eq!(SubsetMask::full(64).len(), 64);
        assert_eq!(SubsetMask::empty(0).subsets().count(), 1);
    }

    #[test]
    fn subsets_and_supersets_counts() {
        let m = SubsetMask::from_elements(6, [1, 3, 4]);
        let subs: Vec<_> = m.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.windows(2).all(|w| w[0].bits() < w[1].bits()));
        assert!(subs.iter().all(|s| s.is_subset(m)));
        let sups: Vec<_> = m.supersets().collect();
        assert_eq!(sups.len(), 8);
        assert!(sups.iter().all(|s| s.is_superset(m)));
    }

    #[test]
    fn serde_as_element_list() {
        let m = SubsetMask::from_elements(6, [0, 2, 4]);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[0,2,4]");
        let back: SubsetMask = serde_json::from_str("[0,2,4]").unwrap();
        assert_eq!(back.with_width(6), Some(m));
        assert!(serde_json::from_str::<SubsetMask>("[64]").is_err());
    }

    proptest! {
        #[test]
        fn boolean_algebra_laws(width in 1usize..=64, a in any::<u64>(), b in any::<u64>()) {
            let a = SubsetMask::from_bits(width, a);
            let b = SubsetMask::from_bits(width, b);
            prop_assert_eq!(a.union(b).complement(), a.complement().intersection(b.complement()));
            prop_assert_eq!(a.difference(b), a.intersection(b.complement()));
            prop_assert!(a.intersection(b).is_subset(a));
            prop_assert!(a.is_subset(a.union(b)));
            prop_assert_eq!(a.complement().complement(), a);
            prop_assert_eq!(SubsetMask::from_elements(width, a.iter()), a);
            prop_assert!(a.iter().all(|x| x < width));
        }
    }
}
