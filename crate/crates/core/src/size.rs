//! Size predicates relative to a principal filter.
//!
//! With base `U₀`, every quantifier over members `U ∈ τ` is extremal at
//! `U = U₀`, and every quantifier over finite `F ⊆ U` is extremal at `F = U₀`
//! because `F⁻¹A` and `Fx` are monotone in `F`. The predicates therefore
//! reduce to:
//!
//! * large:       `U₀⁻¹A ⊇ U₀`
//! * thick:       `U₀·x ⊆ A` for some `x ∈ U₀`
//! * extrathick:  `U₀·U₀ ⊆ A`
//! * prethick:    `U₀⁻¹A` is thick
//! * small:       `L \ A` is large for every large `L`
//!
//! The filter `{S}` gives back the non-relative notions. [`crate::oracle`]
//! evaluates the unreduced definitions for differential testing.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{Element, FinSemigroup};
use crate::cover::{greedy_cover, min_cover_exact};
use crate::error::{Error, Result};
use crate::filter::PrincipalFilter;
use crate::mask::SubsetMask;

/// Largest `|U₀|` for which witnesses are minimised exactly.
pub const EXACT_WITNESS_LIMIT: usize = 12;
/// Largest order for which smallness (a sweep over all subsets) is decided.
pub const SMALL_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Large,
    Thick,
    Prethick,
    Small,
    Extrathick,
}

impl Predicate {
    pub const ALL: [Predicate; 5] = [
        Predicate::Large,
        Predicate::Thick,
        Predicate::Extrathick,
        Predicate::Prethick,
        Predicate::Small,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Large => "large",
            Predicate::Thick => "thick",
            Predicate::Prethick => "prethick",
            Predicate::Small => "small",
            Predicate::Extrathick => "extrathick",
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predicate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown predicate `{s}`")))
    }
}

/// Outcome of one size predicate, with a replayable witness.
///
/// Witness meaning by predicate:
/// * large (true): a minimum `F ⊆ U₀` with `F⁻¹A ⊇ U₀`
/// * thick (true): `{x}` with `x ∈ U₀`, `U₀·x ⊆ A`
/// * prethick (true): a minimum `F ⊆ U₀` with `F⁻¹A` thick
/// * extrathick (false): `{g}` with `g ∈ U₀` and `A_g ⊉ U₀`
/// * small (false): a large `L` with `L \ A` not large
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeVerdict {
    pub predicate: Predicate,
    pub relative: bool,
    pub value: bool,
    pub witness: Option<SubsetMask>,
}

impl SizeVerdict {
    fn new(predicate: Predicate, tau: &PrincipalFilter, value: bool, witness: Option<SubsetMask>) -> Self {
        SizeVerdict {
            predicate,
            relative: !tau.is_trivial(),
            value,
            witness,
        }
    }

    /// Replays the witness through the defining conditions. A verdict without
    /// a witness verifies trivially.
    pub fn verify_witness(&self, s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> bool {
        let Some(w) = self.witness else { return true };
        let u0 = tau.base();
        match (self.predicate, self.value) {
            (Predicate::Large, true) => w.is_subset(u0) && s.set_quotient(w, a).is_superset(u0),
            (Predicate::Thick, true) => {
                w.len() == 1 && w.is_subset(u0) && s.right_translate_set(u0, w.first().unwrap()).is_subset(a)
            }
            (Predicate::Prethick, true) => w.is_subset(u0) && thick(s, tau, s.set_quotient(w, a)),
            (Predicate::Extrathick, false) => {
                w.len() == 1 && w.is_subset(u0) && !trace_set(s, a, w.first().unwrap()).is_superset(u0)
            }
            (Predicate::Small, false) => large(s, tau, w) && !large(s, tau, w.difference(a)),
            _ => false,
        }
    }
}

/// `A_g = {x : x·g ∈ A}`, the trace of `A` at the principal ultrafilter `g`.
pub fn trace_set(s: &FinSemigroup, a: SubsetMask, g: Element) -> SubsetMask {
    s.right_quotient(a, g)
}

/// `Δ_τ(A) = {x : x⁻¹A ∩ A ∩ U₀ ≠ ∅}`.
pub fn delta_tau(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> SubsetMask {
    let core = a.intersection(tau.base());
    SubsetMask::from_elements(
        s.order(),
        (0..s.order()).filter(|&x| s.left_quotient(x, a).intersects(core)),
    )
}

#[inline]
pub fn large(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> bool {
    let u0 = tau.base();
    s.set_quotient(u0, a).is_superset(u0)
}

/// Smallest `x ∈ U₀` with `U₀·x ⊆ A`.
#[inline]
pub fn thick_point(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> Option<Element> {
    let u0 = tau.base();
    u0.iter().find(|&x| s.right_translate_set(u0, x).is_subset(a))
}

#[inline]
pub fn thick(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> bool {
    thick_point(s, tau, a).is_some()
}

#[inline]
pub fn extrathick(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> bool {
    let u0 = tau.base();
    u0.iter().all(|g| trace_set(s, a, g).is_superset(u0))
}

#[inline]
pub fn prethick(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> bool {
    thick(s, tau, s.set_quotient(tau.base(), a))
}

fn check_small_limit(s: &FinSemigroup) -> Result<()> {
    if s.order() > SMALL_LIMIT {
        return Err(Error::SizeLimitExceeded(format!(
            "smallness needs a sweep over 2^{} subsets (limit order {SMALL_LIMIT})",
            s.order()
        )));
    }
    Ok(())
}

/// First large `L` (in ascending bit order) with `L \ A` not large.
fn small_counterexample(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> Option<SubsetMask> {
    s.full()
        .subsets()
        .find(|&l| large(s, tau, l) && !large(s, tau, l.difference(a)))
}

pub fn small(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> Result<bool> {
    check_small_limit(s)?;
    Ok(small_counterexample(s, tau, a).is_none())
}

fn elements_to_mask(s: &FinSemigroup, pool: &[Element], picks: &[usize]) -> SubsetMask {
    SubsetMask::from_elements(s.order(), picks.iter().map(|&i| pool[i]))
}

/// Minimum `F ⊆ U₀` with `F⁻¹A ⊇ target`, exact up to [`EXACT_WITNESS_LIMIT`].
fn minimal_quotient_cover(
    s: &FinSemigroup,
    tau: &PrincipalFilter,
    a: SubsetMask,
    target: SubsetMask,
) -> Option<SubsetMask> {
    let pool = tau.base().to_vec();
    let cands: Vec<SubsetMask> = pool.iter().map(|&f| s.left_quotient(f, a)).collect();
    let picks = if pool.len() <= EXACT_WITNESS_LIMIT {
        min_cover_exact(&cands, target)
    } else {
        greedy_cover(&cands, target)
    }?;
    Some(elements_to_mask(s, &pool, &picks))
}

fn lex_key(m: SubsetMask) -> (usize, Vec<usize>) {
    (m.len(), m.to_vec())
}

pub fn is_tau_large(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> SizeVerdict {
    let value = large(s, tau, a);
    let witness = value
        .then(|| minimal_quotient_cover(s, tau, a, tau.base()))
        .flatten();
    SizeVerdict::new(Predicate::Large, tau, value, witness)
}

pub fn is_tau_thick(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> SizeVerdict {
    let x = thick_point(s, tau, a);
    SizeVerdict::new(
        Predicate::Thick,
        tau,
        x.is_some(),
        x.map(|x| SubsetMask::singleton(s.order(), x)),
    )
}

pub fn is_tau_extrathick(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> SizeVerdict {
    let u0 = tau.base();
    let failing = u0.iter().find(|&g| !trace_set(s, a, g).is_superset(u0));
    SizeVerdict::new(
        Predicate::Extrathick,
        tau,
        failing.is_none(),
        failing.map(|g| SubsetMask::singleton(s.order(), g)),
    )
}

pub fn is_tau_prethick(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> SizeVerdict {
    let value = prethick(s, tau, a);
    let witness = if value {
        // F⁻¹A is thick iff it contains U₀·x for some x ∈ U₀.
        let u0 = tau.base();
        u0.iter()
            .filter_map(|x| minimal_quotient_cover(s, tau, a, s.right_translate_set(u0, x)))
            .min_by_key(|&f| lex_key(f))
    } else {
        None
    };
    SizeVerdict::new(Predicate::Prethick, tau, value, witness)
}

pub fn is_tau_small(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask) -> Result<SizeVerdict> {
    check_small_limit(s)?;
    let counter = small_counterexample(s, tau, a);
    Ok(SizeVerdict::new(Predicate::Small, tau, counter.is_none(), counter))
}

pub fn classify(
    s: &FinSemigroup,
    tau: &PrincipalFilter,
    predicate: Predicate,
    a: SubsetMask,
) -> Result<SizeVerdict> {
    Ok(match predicate {
        Predicate::Large => is_tau_large(s, tau, a),
        Predicate::Thick => is_tau_thick(s, tau, a),
        Predicate::Prethick => is_tau_prethick(s, tau, a),
        Predicate::Extrathick => is_tau_extrathick(s, tau, a),
        Predicate::Small => is_tau_small(s, tau, a)?,
    })
}

/// Every predicate tabulated over all `2^n` subsets for one `(S, τ)`.
///
/// Built from the right translates `R_g = U₀·g` (`g ∈ U₀`): a set is large iff
/// it meets every `R_g`, and thick iff it contains some `R_g`.
pub struct SizeTables {
    order: usize,
    large: Vec<bool>,
    thick: Vec<bool>,
    prethick: Vec<bool>,
    extrathick: Vec<bool>,
    small: Vec<bool>,
}

impl SizeTables {
    pub fn new(s: &FinSemigroup, tau: &PrincipalFilter) -> Result<Self> {
        check_small_limit(s)?;
        let n = s.order();
        let u0 = tau.base();
        let translates: Vec<u64> = u0.iter().map(|g| s.right_translate_set(u0, g).bits()).collect();
        let square = s.product_set(u0, u0).bits();
        let size = 1usize << n;
        let mut large = vec![false; size];
        let mut thick = vec![false; size];
        let mut extrathick = vec![false; size];
        for m in 0..size {
            let bits = m as u64;
            large[m] = translates.iter().all(|&r| r & bits != 0);
            thick[m] = translates.iter().any(|&r| r & !bits == 0);
            extrathick[m] = square & !bits == 0;
        }
        let quotients: Vec<Vec<u64>> = u0
            .iter()
            .map(|f| (0..n).map(|x| 1u64 << s.mul(f, x)).collect())
            .collect();
        let mut prethick = vec![false; size];
        for (m, slot) in prethick.iter_mut().enumerate() {
            let bits = m as u64;
            let mut q = 0u64;
            for row in &quotients {
                for (x, &img) in row.iter().enumerate() {
                    if img & bits != 0 {
                        q |= 1 << x;
                    }
                }
            }
            *slot = thick[q as usize];
        }
        let large_sets: Vec<usize> = (0..size).filter(|&l| large[l]).collect();
        let small = (0..size)
            .map(|a| large_sets.iter().all(|&l| large[l & !a]))
            .collect();
        Ok(SizeTables {
            order: n,
            large,
            thick,
            prethick,
            extrathick,
            small,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, predicate: Predicate, a: SubsetMask) -> bool {
        let i = a.bits() as usize;
        match predicate {
            Predicate::Large => self.large[i],
            Predicate::Thick => self.thick[i],
            Predicate::Prethick => self.prethick[i],
            Predicate::Extrathick => self.extrathick[i],
            Predicate::Small => self.small[i],
        }
    }

    #[inline]
    pub fn large(&self, a: SubsetMask) -> bool {
        self.large[a.bits() as usize]
    }

    #[inline]
    pub fn thick(&self, a: SubsetMask) -> bool {
        self.thick[a.bits() as usize]
    }

    #[inline]
    pub fn prethick(&self, a: SubsetMask) -> bool {
        self.prethick[a.bits() as usize]
    }

    #[inline]
    pub fn small(&self, a: SubsetMask) -> bool {
        self.small[a.bits() as usize]
    }

    /// All subsets satisfying `predicate`, ascending by bits.
    pub fn sets(&self, predicate: Predicate) -> Vec<SubsetMask> {
        (0..1u64 << self.order)
            .map(|b| SubsetMask::from_bits(self.order, b))
            .filter(|&m| self.get(predicate, m))
            .collect()
    }
}
