//! Finite semigroups given by Cayley tables.

mod automorphism;
mod enumerate;
mod families;

pub use automorphism::{automorphisms, automorphisms_with_limit, Permutation, DEFAULT_AUTOMORPHISM_LIMIT};
pub use enumerate::{enumerate_semigroups, MAX_ENUMERATION_ORDER};
pub use families::{build_family, FamilySpec};

use crate::error::{Error, Result};
use crate::mask::{SubsetMask, MAX_WIDTH};

/// An element of a finite semigroup, identified by its row in the Cayley table.
pub type Element = usize;

/// A finite semigroup with a validated, associative Cayley table.
///
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSemigroup {
    name: String,
    order: usize,
    table: Vec<u8>,
    identity: Option<Element>,
    inverses: Option<Vec<Element>>,
}

impl FinSemigroup {
    /// Validates a row-major table (`rows[i][j] = i*j`).
    pub fn from_table(name: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::Dimension("a semigroup needs at least one element".into()));
        }
        if order > MAX_WIDTH {
            return Err(Error::SizeLimitExceeded(format!(
                "order {order} exceeds the supported maximum {MAX_WIDTH}"
            )));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::Dimension(format!(
                        "entry [{i}][{j}] = {v} is outside 0..{order}"
                    )));
                }
                table.push(v as u8);
            }
        }
        Self::from_flat(name.into(), order, table)
    }

    /// Builds from a product function. The function is trusted to stay in range.
    pub fn from_fn(
        name: impl Into<String>,
        order: usize,
        mut mul: impl FnMut(Element, Element) -> Element,
    ) -> Result<Self> {
        if order == 0 || order > MAX_WIDTH {
            return Err(Error::SizeLimitExceeded(format!(
                "order {order} is outside 1..={MAX_WIDTH}"
            )));
        }
        let mut table = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                let v = mul(i, j);
                debug_assert!(v < order);
                table.push(v as u8);
            }
        }
        Self::from_flat(name.into(), order, table)
    }

    pub(crate) fn from_flat(name: String, order: usize, table: Vec<u8>) -> Result<Self> {
        debug_assert_eq!(table.len(), order * order);
        if let Some((a, b, c)) = first_non_associative_triple(order, &table) {
            let at = |x: usize, y: usize| table[x * order + y] as usize;
            return Err(Error::Associativity {
                a,
                b,
                c,
                left: at(at(a, b), c),
                right: at(a, at(b, c)),
            });
        }
        Ok(Self::with_flags(name, order, table))
    }

    fn with_flags(name: String, order: usize, table: Vec<u8>) -> Self {
        let at = |x: usize, y: usize| table[x * order + y] as usize;
        let identity = (0..order).find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x));
        let inverses = identity.and_then(|e| {
            (0..order)
                .map(|x| (0..order).find(|&y| at(x, y) == e && at(y, x) == e))
                .collect::<Option<Vec<_>>>()
        });
        FinSemigroup {
            name,
            order,
            table,
            identity,
            inverses,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.order + b] as usize
    }

    pub fn identity(&self) -> Option<Element> {
        self.identity
    }

    pub fn is_group(&self) -> bool {
        self.inverses.is_some()
    }

    pub fn inverse(&self, x: Element) -> Option<Element> {
        self.inverses.as_ref().map(|inv| inv[x])
    }

    pub fn inverses(&self) -> Option<&[Element]> {
        self.inverses.as_deref()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|r| r.iter().map(|&v| v as usize).collect())
            .collect()
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.order)
    }

    pub fn empty(&self) -> SubsetMask {
        SubsetMask::empty(self.order)
    }

    pub fn mask(&self, elements: &[usize]) -> Result<SubsetMask> {
        SubsetMask::try_from_elements(self.order, elements).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "subset {elements:?} has elements outside 0..{}",
                self.order
            ))
        })
    }

    /// `a⁻¹B = {x : a·x ∈ B}`.
    pub fn left_quotient(&self, a: Element, b: SubsetMask) -> SubsetMask {
        let row = &self.table[a * self.order..(a + 1) * self.order];
        let mut bits = 0u64;
        for (x, &v) in row.iter().enumerate() {
            bits |= ((b.bits() >> v) & 1) << x;
        }
        SubsetMask::from_bits(self.order, bits)
    }

    /// `A⁻¹B`, the union of `a⁻¹B` over `a ∈ A`.
    pub fn set_quotient(&self, a: SubsetMask, b: SubsetMask) -> SubsetMask {
        a.iter()
            .fold(self.empty(), |acc, x| acc.union(self.left_quotient(x, b)))
    }

    /// `{x : x·g ∈ B}`.
    pub fn right_quotient(&self, b: SubsetMask, g: Element) -> SubsetMask {
        let mut bits = 0u64;
        for x in 0..self.order {
            bits |= ((b.bits() >> self.mul(x, g)) & 1) << x;
        }
        SubsetMask::from_bits(self.order, bits)
    }

    /// `a·B`.
    pub fn translate_set(&self, a: Element, b: SubsetMask) -> SubsetMask {
        let row = &self.table[a * self.order..(a + 1) * self.order];
        let bits = b.iter().fold(0u64, |acc, x| acc | (1u64 << row[x]));
        SubsetMask::from_bits(self.order, bits)
    }

    /// `B·a`.
    pub fn right_translate_set(&self, b: SubsetMask, a: Element) -> SubsetMask {
        let bits = b.iter().fold(0u64, |acc, x| acc | (1u64 << self.mul(x, a)));
        SubsetMask::from_bits(self.order, bits)
    }

    /// `A·B`.
    pub fn product_set(&self, a: SubsetMask, b: SubsetMask) -> SubsetMask {
        a.iter()
            .fold(self.empty(), |acc, x| acc.union(self.translate_set(x, b)))
    }

    /// `A·A⁻¹ = {a·b⁻¹ : a, b ∈ A}`. Groups only.
    pub fn quotient_pairs(&self, a: SubsetMask) -> Result<SubsetMask> {
        let inv = self
            .inverses
            .as_ref()
            .ok_or_else(|| Error::NotAGroup(format!("{} has no inverses", self.name)))?;
        let inv_a = SubsetMask::from_elements(self.order, a.iter().map(|x| inv[x]));
        Ok(self.product_set(a, inv_a))
    }

    /// Whether `within·within ⊆ within`.
    pub fn is_closed(&self, within: SubsetMask) -> bool {
        within
            .iter()
            .all(|x| self.translate_set(x, within).is_subset(within))
    }

    /// All minimal left ideals of the subsemigroup induced on `within`, sorted
    /// by smallest element.
    ///
    /// Uses the principal left ideals `L(x) = {x} ∪ within·x`: a left ideal is
    /// minimal exactly when it is an inclusion-minimal principal one.
    pub fn minimal_left_ideals(&self, within: SubsetMask) -> Result<Vec<SubsetMask>> {
        if !self.is_closed(within) {
            return Err(Error::NotASubsemigroup(within.to_vec()));
        }
        let principal: Vec<SubsetMask> = within
            .iter()
            .map(|x| {
                let mut l = self.right_translate_set(within, x);
                l.insert(x);
                l
            })
            .collect();
        let mut minimal: Vec<SubsetMask> = principal
            .iter()
            .filter(|l| !principal.iter().any(|m| m.is_subset(**l) && m != *l))
            .copied()
            .collect();
        minimal.sort_by_key(|l| l.first());
        minimal.dedup();
        Ok(minimal)
    }

    /// Union of the minimal left ideals of `within`.
    pub fn minimal_ideal_union(&self, within: SubsetMask) -> Result<SubsetMask> {
        Ok(self
            .minimal_left_ideals(within)?
            .into_iter()
            .fold(self.empty(), SubsetMask::union))
    }

    /// Smallest closed subset containing `generators`.
    pub fn closure(&self, generators: SubsetMask) -> SubsetMask {
        let mut cur = generators;
        loop {
            let next = cur.union(self.product_set(cur, cur));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// All subgroups of a group, sorted by (size, bits).
    pub fn subgroups(&self) -> Result<Vec<SubsetMask>> {
        let e = self
            .identity
            .filter(|_| self.is_group())
            .ok_or_else(|| Error::NotAGroup(format!("{} is not a group", self.name)))?;
        let trivial = SubsetMask::singleton(self.order, e);
        let mut found: Vec<SubsetMask> = (0..self.order)
            .map(|g| self.closure(SubsetMask::singleton(self.order, g)).union(trivial))
            .collect();
        found.sort();
        found.dedup();
        // Every subgroup is a join of cyclic ones.
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut fresh = Vec::new();
            for h in &frontier {
                for k in &found {
                    let j = self.closure(h.union(*k));
                    if !found.contains(&j) && !fresh.contains(&j) {
                        fresh.push(j);
                    }
                }
            }
            found.extend(fresh.iter().copied());
            frontier = fresh;
        }
        found.sort_by_key(|h| (h.len(), h.bits()));
        Ok(found)
    }
}

/// First `(a, b, c)` in lexicographic order with `(ab)c != a(bc)`.
pub(crate) fn first_non_associative_triple(
    order: usize,
    table: &[u8],
) -> Option<(usize, usize, usize)> {
    let at = |x: usize, y: usize| table[x * order + y] as usize;
    for a in 0..order {
        for b in 0..order {
            let ab = at(a, b);
            for c in 0..order {
                if at(ab, c) != at(a, at(b, c)) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}
