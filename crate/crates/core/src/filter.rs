//! Principal filters on a finite semigroup.
//!
//! On a finite set every filter is principal: it is `{U : U ⊇ U₀}` for the
//! intersection `U₀` of its members. Every ultrafilter is principal as well, so
//! the closed set `τ̄ ⊆ βS` of ultrafilters extending `τ` is just `U₀`.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Element, FinSemigroup};
use crate::error::{Error, Result};
use crate::mask::SubsetMask;

/// The filter `{U : U ⊇ base}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrincipalFilter {
    base: SubsetMask,
}

impl PrincipalFilter {
    pub fn new(s: &FinSemigroup, base: SubsetMask) -> Result<Self> {
        if base.width() != s.order() {
            return Err(Error::Dimension(format!(
                "filter base has width {} but the semigroup has order {}",
                base.width(),
                s.order()
            )));
        }
        if base.is_empty() {
            return Err(Error::EmptyBase);
        }
        Ok(PrincipalFilter { base })
    }

    /// The filter `{S}` of the non-relative theory.
    pub fn trivial(s: &FinSemigroup) -> Self {
        PrincipalFilter { base: s.full() }
    }

    #[inline]
    pub fn base(&self) -> SubsetMask {
        self.base
    }

    #[inline]
    pub fn contains(&self, u: SubsetMask) -> bool {
        u.is_superset(self.base)
    }

    pub fn is_trivial(&self) -> bool {
        self.base.is_full()
    }

    /// Every member, smallest (the base) first.
    pub fn members(&self) -> impl Iterator<Item = SubsetMask> {
        self.base.supersets()
    }

    pub fn member_count(&self) -> u128 {
        1u128 << (self.base.width() - self.base.len())
    }
}

/// `make_principal`.
pub fn make_principal(s: &FinSemigroup, base: SubsetMask) -> Result<PrincipalFilter> {
    PrincipalFilter::new(s, base)
}

/// The ultrafilters containing a filter, each named by the point it is principal at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UltraSet {
    pub points: SubsetMask,
}

/// The principal ultrafilter at `g` contains `τ` iff `g` lies in every member,
/// i.e. iff `g ∈ U₀`.
pub fn tau_bar(tau: &PrincipalFilter) -> UltraSet {
    UltraSet { points: tau.base() }
}

/// Whether `A` belongs to the product of the principal ultrafilters at `p` and `q`.
///
/// Evaluated twice: directly as `p·q ∈ A`, and through the trace rule
/// `A ∈ pq ⟺ A_q ∈ p` with `A_q = {x : x⁻¹A ∈ q}` built from left quotients.
pub fn ultrafilter_product(s: &FinSemigroup, p: Element, q: Element, a: SubsetMask) -> Result<bool> {
    let direct = a.contains(s.mul(p, q));
    let trace = (0..s.order())
        .filter(|&x| s.left_quotient(x, a).contains(q))
        .fold(s.empty(), |mut acc, x| {
            acc.insert(x);
            acc
        });
    let via_trace = trace.contains(p);
    if direct != via_trace {
        return Err(Error::ProductLawViolation { p, q, set: a.to_vec() });
    }
    Ok(direct)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisKind {
    /// `τ̄` is a subsemigroup of `βS`.
    SemigroupFilter,
    /// `gU ∈ τ` for all `U ∈ τ`, `g ∈ S`.
    LeftInvariant,
    /// `g⁻¹U ∈ τ` for all `U ∈ τ`, `g ∈ S`.
    LeftInverseInvariant,
    /// Every member of `τ` is `τ`-extrathick.
    ExtrathickMembers,
    /// `g⁻¹U ∈ τ` for all `U ∈ τ`.
    ShiftableAt(Element),
    /// `{g : g⁻¹U ∈ τ} ∈ τ` for all `U ∈ τ`.
    NeighborhoodShift,
    /// `τ` is the neighbourhood filter of the identity for a left invariant
    /// topology on a group.
    LeftTopologicalGroup,
}

impl fmt::Display for HypothesisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisKind::SemigroupFilter => write!(f, "semigroup_filter"),
            HypothesisKind::LeftInvariant => write!(f, "left_invariant"),
            HypothesisKind::LeftInverseInvariant => write!(f, "left_inverse_invariant"),
            HypothesisKind::ExtrathickMembers => write!(f, "extrathick_members"),
            HypothesisKind::ShiftableAt(g) => write!(f, "shiftable_at({g})"),
            HypothesisKind::NeighborhoodShift => write!(f, "neighborhood_shift"),
            HypothesisKind::LeftTopologicalGroup => write!(f, "left_topological_group"),
        }
    }
}

fn check_element(s: &FinSemigroup, g: Element) -> Result<()> {
    if g >= s.order() {
        return Err(Error::InvalidArgument(format!(
            "element {g} outside 0..{}",
            s.order()
        )));
    }
    Ok(())
}

/// Decides a hypothesis from the base alone.
pub fn check_hypothesis(s: &FinSemigroup, tau: &PrincipalFilter, kind: HypothesisKind) -> Result<bool> {
    let u0 = tau.base();
    Ok(match kind {
        HypothesisKind::SemigroupFilter | HypothesisKind::ExtrathickMembers => {
            s.product_set(u0, u0).is_subset(u0)
        }
        HypothesisKind::LeftInvariant => (0..s.order()).all(|g| s.translate_set(g, u0).is_superset(u0)),
        HypothesisKind::LeftInverseInvariant => {
            (0..s.order()).all(|g| s.left_quotient(g, u0).is_superset(u0))
        }
        HypothesisKind::ShiftableAt(g) => {
            check_element(s, g)?;
            s.left_quotient(g, u0).is_superset(u0)
        }
        HypothesisKind::NeighborhoodShift => shift_set(s, u0, u0).is_superset(u0),
        HypothesisKind::LeftTopologicalGroup => {
            if !s.is_group() {
                return Err(Error::NotAGroup(format!(
                    "left topological filters are only decided on groups; {} is not one",
                    s.name()
                )));
            }
            let e = s.identity().expect("groups have an identity");
            u0.contains(e)
                && s.is_closed(u0)
                && u0.iter().all(|x| u0.contains(s.inverse(x).expect("group")))
        }
    })
}

/// `{g : g⁻¹U ∈ τ}` for `τ` with base `u0`.
fn shift_set(s: &FinSemigroup, u: SubsetMask, u0: SubsetMask) -> SubsetMask {
    SubsetMask::from_elements(
        s.order(),
        (0..s.order()).filter(|&g| s.left_quotient(g, u).is_superset(u0)),
    )
}

/// The hypothesis evaluated by quantifying over every member `U ⊇ U₀` and
/// every ultrafilter in `τ̄`, with no reduction to the base. Exponential in
/// `|S \ U₀|`; intended as a differential oracle.
pub fn check_hypothesis_literal(
    s: &FinSemigroup,
    tau: &PrincipalFilter,
    kind: HypothesisKind,
) -> Result<bool> {
    let n = s.order();
    // τ̄ computed as the points lying in every member.
    let points = tau.members().fold(s.full(), SubsetMask::intersection);
    let in_tau = |u: SubsetMask| tau.contains(u);
    Ok(match kind {
        HypothesisKind::SemigroupFilter => points.iter().all(|p| {
            points
                .iter()
                .all(|q| tau.members().all(|u| u.contains(s.mul(p, q))))
        }),
        HypothesisKind::LeftInvariant => tau
            .members()
            .all(|u| (0..n).all(|g| in_tau(s.translate_set(g, u)))),
        HypothesisKind::LeftInverseInvariant => tau
            .members()
            .all(|u| (0..n).all(|g| in_tau(s.left_quotient(g, u)))),
        HypothesisKind::ExtrathickMembers => tau.members().all(|u| {
            points.iter().all(|p| {
                // U_p = {x : x⁻¹U ∈ p} for the principal ultrafilter at p.
                let trace = SubsetMask::from_elements(
                    n,
                    (0..n).filter(|&x| s.left_quotient(x, u).contains(p)),
                );
                in_tau(trace)
            })
        }),
        HypothesisKind::ShiftableAt(g) => {
            check_element(s, g)?;
            tau.members().all(|u| in_tau(s.left_quotient(g, u)))
        }
        HypothesisKind::NeighborhoodShift => tau.members().all(|u| {
            let good = SubsetMask::from_elements(
                n,
                (0..n).filter(|&g| in_tau(s.left_quotient(g, u))),
            );
            in_tau(good)
        }),
        HypothesisKind::LeftTopologicalGroup => {
            if !s.is_group() {
                return Err(Error::NotAGroup(s.name().to_string()));
            }
            // Left cosets of the smallest neighbourhood must form a base:
            // e ∈ U₀ and h ∈ U₀ implies hU₀ ⊆ U₀.
            let e = s.identity().expect("group");
            let u0 = tau.members().fold(s.full(), SubsetMask::intersection);
            u0.contains(e) && u0.iter().all(|h| s.translate_set(h, u0).is_subset(u0))
        }
    })
}

/// Whether the hypothesis holds for the full base only.
///
/// A checker running on such an instance is exercising the non-relative case,
/// and its report counts the instance as degenerate.
pub fn forces_full_base(s: &FinSemigroup, kind: HypothesisKind) -> Result<bool> {
    if s.is_group() && matches!(kind, HypothesisKind::LeftInvariant | HypothesisKind::LeftInverseInvariant) {
        // |gU₀| = |U₀| and U₀ = ⋃_g gU₀ ... = G once U₀ is shift-stable.
        return Ok(true);
    }
    if s.order() > 16 {
        return Err(Error::SizeLimitExceeded(format!(
            "base enumeration on order {} (limit 16)",
            s.order()
        )));
    }
    for base in s.full().subsets() {
        if base.is_empty() || base.is_full() {
            continue;
        }
        let tau = PrincipalFilter { base };
        if check_hypothesis(s, &tau, kind)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_family, enumerate_semigroups};

    fn build(spec: &str) -> FinSemigroup {
        build_family(&spec.parse().unwrap()).unwrap()
    }

    fn filter(s: &FinSemigroup, base: &[usize]) -> PrincipalFilter {
        PrincipalFilter::new(s, s.mask(base).unwrap()).unwrap()
    }

    const ALL_KINDS: [HypothesisKind; 6] = [
        HypothesisKind::SemigroupFilter,
        HypothesisKind::LeftInvariant,
        HypothesisKind::LeftInverseInvariant,
        HypothesisKind::ExtrathickMembers,
        HypothesisKind::NeighborhoodShift,
        HypothesisKind::ShiftableAt(0),
    ];

    #[test]
    fn make_principal_examples() {
        let z6 = build("cyclic:6");
        let t = make_principal(&z6, z6.full()).unwrap();
        assert!(t.is_trivial());
        assert_eq!(t.members().count(), 1);
        let t = filter(&z6, &[0, 2, 4]);
        assert_eq!(t.members().count(), 8);
        assert_eq!(t.member_count(), 8);
        assert!(matches!(make_principal(&z6, z6.empty()), Err(Error::EmptyBase)));
    }

    #[test]
    fn tau_bar_examples() {
        let z6 = build("cyclic:6");
        assert_eq!(tau_bar(&PrincipalFilter::trivial(&z6)).points, z6.full());
        assert_eq!(tau_bar(&filter(&z6, &[0, 2, 4])).points, z6.mask(&[0, 2, 4]).unwrap());
        assert_eq!(tau_bar(&filter(&z6, &[5])).points, z6.mask(&[5]).unwrap());
    }

    #[test]
    fn ultrafilter_product_examples() {
        let z4 = build("cyclic:4");
        assert!(ultrafilter_product(&z4, 1, 2, z4.full()).unwrap());
        assert!(ultrafilter_product(&z4, 1, 2, z4.mask(&[3]).unwrap()).unwrap());
        assert!(!ultrafilter_product(&z4, 1, 2, z4.mask(&[0]).unwrap()).unwrap());
    }

    #[test]
    fn hypothesis_examples() {
        let z6 = build("cyclic:6");
        let t = filter(&z6, &[0, 2, 4]);
        assert!(check_hypothesis(&z6, &t, HypothesisKind::SemigroupFilter).unwrap());
        assert!(!check_hypothesis(&z6, &t, HypothesisKind::LeftInvariant).unwrap());
        assert!(check_hypothesis(&z6, &t, HypothesisKind::LeftTopologicalGroup).unwrap());
        for s in [build("cyclic:6"), build("rightzero:3"), build("null:4"), build("transformation:2")] {
            let t = PrincipalFilter::trivial(&s);
            for kind in ALL_KINDS {
                // gS ⊇ S needs every left translation to be onto.
                let expected = kind != HypothesisKind::LeftInvariant
                    || (0..s.order()).all(|g| s.translate_set(g, s.full()).is_full());
                assert_eq!(check_hypothesis(&s, &t, kind).unwrap(), expected, "{} {kind}", s.name());
            }
        }
        assert!(!check_hypothesis(&build("null:4"), &PrincipalFilter::trivial(&build("null:4")), HypothesisKind::LeftInvariant).unwrap());
        let rz = build("rightzero:3");
        assert!(matches!(
            check_hypothesis(&rz, &PrincipalFilter::trivial(&rz), HypothesisKind::LeftTopologicalGroup),
            Err(Error::NotAGroup(_))
        ));
        assert!(matches!(
            check_hypothesis(&rz, &PrincipalFilter::trivial(&rz), HypothesisKind::ShiftableAt(3)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn reduced_hypotheses_match_literal_forms() {
        let mut instances: Vec<FinSemigroup> = (1..=3).flat_map(|k| enumerate_semigroups(k).unwrap()).collect();
        for spec in ["cyclic:4", "cyclic:5", "rightzero:4", "leftzero:4", "null:5", "transformation:2", "product:cyclic:2,cyclic:2"] {
            instances.push(build(spec));
        }
        for s in &instances {
            for base in s.full().subsets().skip(1) {
                let t = PrincipalFilter::new(s, base).unwrap();
                let mut kinds: Vec<HypothesisKind> = ALL_KINDS[..5].to_vec();
                kinds.extend((0..s.order()).map(HypothesisKind::ShiftableAt));
                if s.is_group() {
                    kinds.push(HypothesisKind::LeftTopologicalGroup);
                }
                for kind in kinds {
                    assert_eq!(
                        check_hypothesis(s, &t, kind).unwrap(),
                        check_hypothesis_literal(s, &t, kind).unwrap(),
                        "{} base {base} {kind}",
                        s.name()
                    );
                }
            }
        }
    }

    #[test]
    fn semigroup_filter_base_is_closed() {
        for s in enumerate_semigroups(3).unwrap() {
            for base in s.full().subsets().skip(1) {
                let t = PrincipalFilter::new(&s, base).unwrap();
                if check_hypothesis(&s, &t, HypothesisKind::SemigroupFilter).unwrap() {
                    assert!(s.is_closed(tau_bar(&t).points));
                }
            }
        }
    }

    #[test]
    fn left_invariance_degenerates_on_groups() {
        for spec in ["cyclic:5", "symmetric:3", "quaternion8"] {
            let g = build(spec);
            assert!(forces_full_base(&g, HypothesisKind::LeftInvariant).unwrap());
            // cross-check the shortcut by enumeration
            let proper = g
                .full()
                .subsets()
                .filter(|b| !b.is_empty() && !b.is_full())
                .any(|b| check_hypothesis(&g, &PrincipalFilter { base: b }, HypothesisKind::LeftInvariant).unwrap());
            assert!(!proper);
        }
        // right-zero semigroups are shift-stable on every base
        assert!(!forces_full_base(&build("rightzero:3"), HypothesisKind::LeftInvariant).unwrap());
        assert!(!forces_full_base(&build("null:3"), HypothesisKind::LeftInverseInvariant).unwrap());
    }
}
