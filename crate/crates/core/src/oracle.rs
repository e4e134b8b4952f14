//! Unreduced size definitions, for differential testing of [`crate::size`].
//!
//! Every quantifier is evaluated as written: over all members `U ⊇ U₀`, all
//! finite `F ⊆ U` (the empty set included), all `V ⊇ U₀`, and all points of
//! `τ̄`. Only the semigroup product is shared with the fast path.

use std::cell::RefCell;

use crate::algebra::FinSemigroup;
use crate::error::{Error, Result};
use crate::filter::PrincipalFilter;
use crate::mask::SubsetMask;
use crate::size::Predicate;

pub const LITERAL_LIMIT: usize = 5;

/// Memoising evaluator for one `(S, τ)`.
pub struct LiteralOracle<'a> {
    s: &'a FinSemigroup,
    tau: PrincipalFilter,
    members: Vec<u64>,
    points: Vec<usize>,
    large: RefCell<Vec<Option<bool>>>,
    thick: RefCell<Vec<Option<bool>>>,
}

impl<'a> LiteralOracle<'a> {
    pub fn new(s: &'a FinSemigroup, tau: &PrincipalFilter) -> Result<Self> {
        Self::with_limit(s, tau, LITERAL_LIMIT)
    }

    /// Runtime grows roughly like `4^|S \ U₀| · 2^|S|`; raise the limit only
    /// for large bases.
    pub fn with_limit(s: &'a FinSemigroup, tau: &PrincipalFilter, limit: usize) -> Result<Self> {
        let n = s.order();
        if n > limit.min(16) {
            return Err(Error::SizeLimitExceeded(format!(
                "literal quantifier sweep on order {n} (limit {limit})"
            )));
        }
        let base = tau.base().bits();
        let members: Vec<u64> = (0..1u64 << n).filter(|u| u & base == base).collect();
        // τ̄: principal ultrafilters at points lying in every member
        let points = (0..n)
            .filter(|&g| members.iter().all(|u| u >> g & 1 == 1))
            .collect();
        Ok(LiteralOracle {
            s,
            tau: *tau,
            members,
            points,
            large: RefCell::new(vec![None; 1 << n]),
            thick: RefCell::new(vec![None; 1 << n]),
        })
    }

    fn in_tau(&self, u: u64) -> bool {
        self.members.contains(&u)
    }

    /// `F⁻¹A = {x : f·x ∈ A for some f ∈ F}`.
    fn quotient(&self, f: u64, a: u64) -> u64 {
        let n = self.s.order();
        let mut out = 0u64;
        for x in 0..n {
            for g in 0..n {
                if f >> g & 1 == 1 && a >> self.s.mul(g, x) & 1 == 1 {
                    out |= 1 << x;
                }
            }
        }
        out
    }

    fn submasks(u: u64) -> impl Iterator<Item = u64> {
        (0..=u).filter(move |f| f & !u == 0)
    }

    /// For every U ∈ τ there is a finite F ⊆ U with F⁻¹A ∈ τ.
    pub fn large(&self, a: u64) -> bool {
        if let Some(v) = self.large.borrow()[a as usize] {
            return v;
        }
        let v = self
            .members
            .iter()
            .all(|&u| Self::submasks(u).any(|f| self.in_tau(self.quotient(f, a))));
        self.large.borrow_mut()[a as usize] = Some(v);
        v
    }

    /// Some U ∈ τ such that for every finite F ⊆ U and every V ∈ τ there is
    /// x ∈ V with Fx ⊆ A.
    pub fn thick(&self, a: u64) -> bool {
        if let Some(v) = self.thick.borrow()[a as usize] {
            return v;
        }
        let n = self.s.order();
        let fits = |f: u64, x: usize| (0..n).all(|g| f >> g & 1 == 0 || a >> self.s.mul(g, x) & 1 == 1);
        let v = self.members.iter().any(|&u| {
            Self::submasks(u).all(|f| {
                self.members
                    .iter()
                    .all(|&v| (0..n).any(|x| v >> x & 1 == 1 && fits(f, x)))
            })
        });
        self.thick.borrow_mut()[a as usize] = Some(v);
        v
    }

    /// For every U ∈ τ there is a finite F ⊆ U with F⁻¹A τ-thick.
    pub fn prethick(&self, a: u64) -> bool {
        self.members
            .iter()
            .all(|&u| Self::submasks(u).any(|f| self.thick(self.quotient(f, a))))
    }

    /// T_p ∈ τ for every p ∈ τ̄, with T_p = {x : x⁻¹T ∈ p}.
    pub fn extrathick(&self, t: u64) -> bool {
        let n = self.s.order();
        self.points.iter().all(|&p| {
            let trace = (0..n)
                .filter(|&x| self.quotient(1 << x, t) >> p & 1 == 1)
                .fold(0u64, |acc, x| acc | 1 << x);
            self.in_tau(trace)
        })
    }

    /// L \ A is τ-large for every τ-large L.
    pub fn small(&self, a: u64) -> bool {
        (0..1u64 << self.s.order()).all(|l| !self.large(l) || self.large(l & !a))
    }

    pub fn eval(&self, predicate: Predicate, a: SubsetMask) -> bool {
        let a = a.bits();
        match predicate {
            Predicate::Large => self.large(a),
            Predicate::Thick => self.thick(a),
            Predicate::Prethick => self.prethick(a),
            Predicate::Extrathick => self.extrathick(a),
            Predicate::Small => self.small(a),
        }
    }

    pub fn filter(&self) -> &PrincipalFilter {
        &self.tau
    }
}

/// One-shot evaluation; build a [`LiteralOracle`] to reuse memoised tables.
pub fn literal_oracle(
    predicate: Predicate,
    s: &FinSemigroup,
    tau: &PrincipalFilter,
    a: SubsetMask,
) -> Result<bool> {
    Ok(LiteralOracle::new(s, tau)?.eval(predicate, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_family;
    use crate::size::{classify, SizeTables};

    fn build(spec: &str) -> FinSemigroup {
        build_family(&spec.parse().unwrap()).unwrap()
    }

    #[test]
    fn agrees_with_reduced_forms_on_order_four_and_five() {
        for spec in ["cyclic:4", "rightzero:4", "null:4", "transformation:2", "leftzero:4", "cyclic:5"] {
            let s = build(spec);
            for base in s.full().subsets().skip(1).step_by(3) {
                let t = PrincipalFilter::new(&s, base).unwrap();
                let o = LiteralOracle::new(&s, &t).unwrap();
                let tables = SizeTables::new(&s, &t).unwrap();
                for a in s.full().subsets() {
                    for p in Predicate::ALL {
                        assert_eq!(o.eval(p, a), tables.get(p, a), "{spec} {base} {a} {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_filter_specialisation() {
        // τ = {S}: large means F⁻¹A = S for some F.
        let s = build("rightzero:3");
        let t = PrincipalFilter::trivial(&s);
        for a in s.full().subsets() {
            let direct = s.full().subsets().any(|f| s.set_quotient(f, a).is_full());
            assert_eq!(literal_oracle(Predicate::Large, &s, &t, a).unwrap(), direct);
            assert_eq!(classify(&s, &t, Predicate::Large, a).unwrap().value, direct);
        }
    }

    #[test]
    fn limit() {
        let s = build("cyclic:6");
        let t = PrincipalFilter::trivial(&s);
        assert!(matches!(
            literal_oracle(Predicate::Large, &s, &t, s.full()),
            Err(Error::SizeLimitExceeded(_))
        ));
    }
}
