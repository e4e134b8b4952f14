use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, FinSemigroup};
use crate::error::{Error, Result};
use crate::filter::{check_hypothesis, forces_full_base, HypothesisKind};
use crate::mask::SubsetMask;
use crate::partition::{run_sweep, BoundRecord, CoverMode, Partition, SweepConfig, SweepProgress};
use crate::size::{delta_tau, trace_set, SizeTables};
use crate::PrincipalFilter;

/// Largest prethick set whose 2- and 3-partitions are all enumerated.
pub const REGULARITY_SET_LIMIT: usize = 8;

/// Largest group for which 3-partitions are swept.
const THREE_CELL_ORDER_LIMIT: usize = 8;

/// Largest group for which partitions of every `U ⊇ U₀` are swept.
const WIDEN_ORDER_LIMIT: usize = 6;

type SetPredicate = fn(&SizeTables, SubsetMask) -> bool;

/// A theorem checker or, for hunts, a variant with a hypothesis dropped or
/// a conclusion strengthened.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Check {
    T2_1,
    T2_2,
    T2_3,
    T2_4,
    C2_5,
    T2_6,
    T3_1,
    C3_1,
    T3_2,
    C3_2,
    T3_5,
    T3_6,
    T3_7,
    /// Thick replaced by large in the shift theorem.
    #[serde(rename = "T2_6_large")]
    T2_6Large,
    /// The thick/large intersection criterion without extrathick members.
    #[serde(rename = "T2_3_no_extrathick")]
    T2_3NoExtrathick,
    /// Prethick versus not small on non-group semigroups.
    #[serde(rename = "T3_6_semigroup")]
    T3_6Semigroup,
    /// Prethick versus not small for subgroup bases of groups.
    #[serde(rename = "T3_6_left_topological")]
    T3_6LeftTopological,
    /// The minimal ideal description of prethick sets for subgroup bases.
    #[serde(rename = "T3_5_left_topological")]
    T3_5LeftTopological,
    /// The minimal ideal description of prethick sets for closed bases that
    /// are not left inverse invariant.
    #[serde(rename = "T3_5_no_hypothesis")]
    T3_5NoHypothesis,
    /// The difference set theorem without left inverse invariance.
    #[serde(rename = "T3_7_no_hypothesis")]
    T3_7NoHypothesis,
}

impl Check {
    pub const THEOREMS: [Check; 13] = [
        Check::T2_1,
        Check::T2_2,
        Check::T2_3,
        Check::T2_4,
        Check::C2_5,
        Check::T2_6,
        Check::T3_1,
        Check::C3_1,
        Check::T3_2,
        Check::C3_2,
        Check::T3_5,
        Check::T3_6,
        Check::T3_7,
    ];

    pub const VARIANTS: [Check; 7] = [
        Check::T2_6Large,
        Check::T2_3NoExtrathick,
        Check::T3_6Semigroup,
        Check::T3_6LeftTopological,
        Check::T3_5LeftTopological,
        Check::T3_5NoHypothesis,
        Check::T3_7NoHypothesis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::T2_1 => "T2_1",
            Check::T2_2 => "T2_2",
            Check::T2_3 => "T2_3",
            Check::T2_4 => "T2_4",
            Check::C2_5 => "C2_5",
            Check::T2_6 => "T2_6",
            Check::T3_1 => "T3_1",
            Check::C3_1 => "C3_1",
            Check::T3_2 => "T3_2",
            Check::C3_2 => "C3_2",
            Check::T3_5 => "T3_5",
            Check::T3_6 => "T3_6",
            Check::T3_7 => "T3_7",
            Check::T2_6Large => "T2_6_large",
            Check::T2_3NoExtrathick => "T2_3_no_extrathick",
            Check::T3_6Semigroup => "T3_6_semigroup",
            Check::T3_6LeftTopological => "T3_6_left_topological",
            Check::T3_5LeftTopological => "T3_5_left_topological",
            Check::T3_5NoHypothesis => "T3_5_no_hypothesis",
            Check::T3_7NoHypothesis => "T3_7_no_hypothesis",
        }
    }

    /// Hunt variants are searches: a counterexample is a finding, not a bug.
    pub fn is_hunt(self) -> bool {
        Check::VARIANTS.contains(&self)
    }

    /// The hypothesis whose forcing of `U₀ = S` makes an instance degenerate.
    fn degeneracy_kind(self) -> Option<HypothesisKind> {
        use HypothesisKind::*;
        match self {
            Check::T2_1 | Check::T2_2 | Check::T2_3NoExtrathick | Check::T3_7NoHypothesis | Check::T3_5NoHypothesis => None,
            Check::T2_3 => Some(ExtrathickMembers),
            Check::T2_4 => None,
            Check::C2_5 | Check::T3_5 | Check::T3_7 => Some(LeftInverseInvariant),
            Check::T2_6 | Check::T2_6Large => Some(NeighborhoodShift),
            Check::T3_1 | Check::C3_1 => Some(SemigroupFilter),
            Check::T3_6 | Check::T3_6Semigroup => Some(LeftInvariant),
            Check::T3_2 | Check::C3_2 | Check::T3_6LeftTopological | Check::T3_5LeftTopological => {
                Some(LeftTopologicalGroup)
            }
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::THEOREMS
            .iter()
            .chain(Check::VARIANTS.iter())
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem or variant `{s}`")))
    }
}

/// What went wrong on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub subsets: Vec<SubsetMask>,
    pub element: Option<Element>,
    pub partition: Option<Partition>,
    pub detail: String,
}

impl Failure {
    fn sets(subsets: Vec<SubsetMask>, detail: impl Into<String>) -> Self {
        Failure {
            subsets,
            element: None,
            partition: None,
            detail: detail.into(),
        }
    }

    fn at(mut self, g: Element) -> Self {
        self.element = Some(g);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The hypothesis fails on this instance.
    Skipped,
    Passed { records: Vec<BoundRecord> },
    Failed { failure: Failure, records: Vec<BoundRecord> },
}

fn passed() -> Result<Outcome> {
    Ok(Outcome::Passed { records: Vec::new() })
}

fn failed(f: Failure) -> Result<Outcome> {
    Ok(Outcome::Failed {
        failure: f,
        records: Vec::new(),
    })
}

fn hyp(s: &FinSemigroup, tau: &PrincipalFilter, kind: HypothesisKind) -> Result<bool> {
    check_hypothesis(s, tau, kind)
}

fn is_subgroup_base(s: &FinSemigroup, tau: &PrincipalFilter) -> Result<bool> {
    Ok(s.is_group() && hyp(s, tau, HypothesisKind::LeftTopologicalGroup)?)
}

/// Whether the check applies to `(s, U₀)`.
pub fn applies(check: Check, s: &FinSemigroup, tau: &PrincipalFilter) -> Result<bool> {
    use HypothesisKind::*;
    Ok(match check {
        Check::T2_1 | Check::T2_2 => true,
        Check::T2_3 => hyp(s, tau, ExtrathickMembers)?,
        Check::T2_3NoExtrathick => !hyp(s, tau, ExtrathickMembers)?,
        Check::T2_4 => (0..s.order()).any(|g| hyp(s, tau, ShiftableAt(g)).unwrap_or(false)),
        Check::C2_5 | Check::T3_5 | Check::T3_7 => hyp(s, tau, LeftInverseInvariant)?,
        Check::T3_7NoHypothesis => !hyp(s, tau, LeftInverseInvariant)?,
        Check::T3_5NoHypothesis => hyp(s, tau, SemigroupFilter)? && !hyp(s, tau, LeftInverseInvariant)?,
        Check::T2_6 | Check::T2_6Large => hyp(s, tau, NeighborhoodShift)?,
        Check::T3_1 | Check::C3_1 => hyp(s, tau, SemigroupFilter)?,
        Check::T3_6 => hyp(s, tau, LeftInvariant)?,
        Check::T3_6Semigroup => !s.is_group() && hyp(s, tau, LeftInvariant)?,
        Check::T3_2 | Check::C3_2 | Check::T3_6LeftTopological | Check::T3_5LeftTopological => {
            is_subgroup_base(s, tau)?
        }
    })
}

/// An instance is degenerate when the check's hypothesis admits no base
/// other than `S` itself, so the relative notions collapse to absolute ones.
pub fn is_degenerate(check: Check, s: &FinSemigroup, base: SubsetMask) -> Result<bool> {
    if !base.is_full() {
        return Ok(false);
    }
    if check == Check::T2_4 {
        for g in 0..s.order() {
            if !forces_full_base(s, HypothesisKind::ShiftableAt(g))? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    match check.degeneracy_kind() {
        None => Ok(false),
        Some(HypothesisKind::LeftTopologicalGroup) if !s.is_group() => Ok(false),
        Some(kind) => forces_full_base(s, kind),
    }
}

fn all_sets(s: &FinSemigroup) -> impl Iterator<Item = SubsetMask> {
    s.full().subsets()
}

fn thick_large_split(t: &SizeTables, s: &FinSemigroup) -> (Vec<SubsetMask>, Vec<SubsetMask>) {
    let mut large = Vec::new();
    let mut thick = Vec::new();
    for a in all_sets(s) {
        if t.large(a) {
            large.push(a);
        }
        if t.thick(a) {
            thick.push(a);
        }
    }
    (large, thick)
}

/// Runs `check` on one instance. Hypotheses are tested first; an instance
/// failing them is skipped.
pub fn run_check(check: Check, s: &FinSemigroup, base: SubsetMask) -> Result<Outcome> {
    let tau = PrincipalFilter::new(s, base)?;
    if !applies(check, s, &tau)? {
        return Ok(Outcome::Skipped);
    }
    if matches!(check, Check::T3_2 | Check::C3_2) {
        return bound_sweep(check, s, &tau);
    }
    let t = SizeTables::new(s, &tau)?;
    let u0 = base;
    match check {
        Check::T2_1 => {
            for l in all_sets(s) {
                let via_traces = u0.iter().all(|g| trace_set(s, l, g).intersects(u0));
                if t.large(l) != via_traces {
                    return failed(Failure::sets(
                        vec![l],
                        format!("large = {}, trace condition = {via_traces}", t.large(l)),
                    ));
                }
            }
            passed()
        }
        Check::T2_2 => {
            for a in all_sets(s) {
                let via_traces = u0.iter().any(|g| trace_set(s, a, g).is_superset(u0));
                if t.thick(a) != via_traces {
                    return failed(Failure::sets(
                        vec![a],
                        format!("thick = {}, trace condition = {via_traces}", t.thick(a)),
                    ));
                }
            }
            passed()
        }
        Check::T2_3 | Check::T2_3NoExtrathick => {
            let (large, _) = thick_large_split(&t, s);
            for a in all_sets(s) {
                let missed = large.iter().find(|&&l| !a.intersection(l).intersects(u0));
                if t.thick(a) != missed.is_none() {
                    let mut sets = vec![a];
                    sets.extend(missed.copied());
                    return failed(Failure::sets(
                        sets,
                        format!("thick = {}, meets every large set inside the base = {}", t.thick(a), missed.is_none()),
                    ));
                }
            }
            passed()
        }
        Check::T2_4 | Check::C2_5 => {
            let (large, thick) = thick_large_split(&t, s);
            for g in 0..s.order() {
                if check == Check::T2_4 && !hyp(s, &tau, HypothesisKind::ShiftableAt(g))? {
                    continue;
                }
                if let Some(&l) = large.iter().find(|&&l| !t.large(s.translate_set(g, l))) {
                    return failed(Failure::sets(vec![l], "gL is not large").at(g));
                }
                if let Some(&a) = thick.iter().find(|&&a| !t.thick(s.left_quotient(g, a))) {
                    return failed(Failure::sets(vec![a], "g⁻¹T is not thick").at(g));
                }
            }
            passed()
        }
        Check::T2_6 | Check::T2_6Large => {
            let (large, thick) = thick_large_split(&t, s);
            let (sets, pred, what): (&[SubsetMask], SetPredicate, &str) =
                if check == Check::T2_6 {
                    (&thick, SizeTables::thick, "thick")
                } else {
                    (&large, SizeTables::large, "large")
                };
            for &a in sets {
                if let Some(g) = u0.iter().find(|&g| !pred(&t, s.left_quotient(g, a))) {
                    return failed(Failure::sets(vec![a], format!("g⁻¹A is not {what} for g in the base")).at(g));
                }
            }
            passed()
        }
        Check::T3_1 => {
            let m = s.minimal_ideal_union(u0)?;
            for g in u0.iter() {
                let bad = all_sets(s)
                    .filter(|a| a.contains(g))
                    .find(|&a| !t.large(trace_set(s, a, g)));
                if m.contains(g) != bad.is_none() {
                    let detail = format!("in a minimal left ideal = {}, every trace large = {}", m.contains(g), bad.is_none());
                    return failed(Failure::sets(bad.into_iter().collect(), detail).at(g));
                }
            }
            passed()
        }
        Check::C3_1 => {
            let m = s.minimal_ideal_union(u0)?;
            if let Some(a) = all_sets(s).find(|&a| a.intersects(m) && !t.prethick(a)) {
                return failed(Failure::sets(vec![a], "meets the minimal ideal but is not prethick"));
            }
            passed()
        }
        Check::T3_5 | Check::T3_5LeftTopological | Check::T3_5NoHypothesis => prethick_structure(check, s, &t, u0),
        Check::T3_6 | Check::T3_6Semigroup | Check::T3_6LeftTopological => {
            if let Some(a) = all_sets(s).find(|&a| t.prethick(a) == t.small(a)) {
                return failed(Failure::sets(
                    vec![a],
                    format!("prethick = {}, small = {}", t.prethick(a), t.small(a)),
                ));
            }
            passed()
        }
        Check::T3_7 | Check::T3_7NoHypothesis => {
            for a in all_sets(s).filter(|&a| t.prethick(a)) {
                let d = delta_tau(s, &tau, a);
                if !t.large(d) {
                    return failed(Failure::sets(vec![a, d], "prethick but its difference set is not large"));
                }
            }
            passed()
        }
        Check::T3_2 | Check::C3_2 => unreachable!("handled above"),
    }
}

/// Parts (i), (ii) and (iii) of the minimal ideal description of prethick sets.
fn prethick_structure(check: Check, s: &FinSemigroup, t: &SizeTables, u0: SubsetMask) -> Result<Outcome> {
    let m = s.minimal_ideal_union(u0)?;
    for a in all_sets(s) {
        if t.prethick(a) != a.intersects(m) {
            return failed(Failure::sets(
                vec![a],
                format!("(i) prethick = {}, meets the minimal ideal = {}", t.prethick(a), a.intersects(m)),
            ));
        }
    }
    if check == Check::T3_5NoHypothesis {
        return passed();
    }
    // (ii): closures of finite sets are the sets themselves
    for g in 0..s.order() {
        let bad = all_sets(s).filter(|a| a.contains(g)).find(|&a| !t.prethick(a));
        if m.contains(g) != bad.is_none() {
            let detail = format!("(ii) in the minimal ideal = {}, every set containing it prethick = {}", m.contains(g), bad.is_none());
            return failed(Failure::sets(bad.into_iter().collect(), detail).at(g));
        }
    }
    // (iii): some cell of every partition into at most three cells
    for a in all_sets(s).filter(|&a| t.prethick(a) && a.len() <= REGULARITY_SET_LIMIT) {
        if let Some(p) = irregular_partition(t, a) {
            return Ok(Outcome::Failed {
                failure: Failure {
                    subsets: vec![a],
                    element: None,
                    partition: Some(p),
                    detail: "(iii) no cell of the partition is prethick".into(),
                },
                records: Vec::new(),
            });
        }
    }
    passed()
}

/// A partition of `a` into at most three cells, none prethick.
fn irregular_partition(t: &SizeTables, a: SubsetMask) -> Option<Partition> {
    let elems = a.to_vec();
    let k = elems.len();
    let width = a.width();
    // labels in base 3; the first element is always in cell 0
    let total = 3usize.pow(k.saturating_sub(1) as u32);
    for code in 0..total {
        let mut cells = [0u64; 3];
        cells[0] |= 1 << elems[0];
        let mut c = code;
        for &x in &elems[1..] {
            cells[c % 3] |= 1 << x;
            c /= 3;
        }
        let any = cells
            .iter()
            .any(|&b| b != 0 && t.prethick(SubsetMask::from_bits(width, b)));
        if !any {
            let masks: Vec<SubsetMask> = cells
                .iter()
                .filter(|&&b| b != 0)
                .map(|&b| SubsetMask::from_bits(width, b))
                .collect();
            return Partition::from_cells(&masks).ok();
        }
    }
    None
}

/// Cell counts swept for a group of this order.
pub fn bound_cells(order: usize) -> Vec<usize> {
    if order <= THREE_CELL_ORDER_LIMIT {
        vec![2, 3]
    } else {
        vec![2]
    }
}

/// Translate-cover sweeps with pool `V = U₀`. The bound version fails on any
/// record over the proven bound; the existence version only on partitions
/// with no coverable cell.
fn bound_sweep(check: Check, s: &FinSemigroup, tau: &PrincipalFilter) -> Result<Outcome> {
    let mut records = Vec::new();
    for n in bound_cells(s.order()) {
        if n > tau.base().len() && s.order() > WIDEN_ORDER_LIMIT {
            continue;
        }
        let mut cfg = SweepConfig::new(s.clone(), *tau, n, CoverMode::Translate, tau.base());
        cfg.widen = s.order() <= WIDEN_ORDER_LIMIT;
        let SweepProgress::Done(rec) = run_sweep(&cfg, None, None)? else {
            unreachable!("no deadline was set");
        };
        let bad = match check {
            Check::T3_2 => rec.proven_bound_violated,
            _ => rec.worst_min_f.is_none() && rec.partitions_checked > 0,
        };
        let failure = bad.then(|| Failure {
            subsets: rec.argmax_certificate.iter().map(|c| c.cell_set).collect(),
            element: None,
            partition: rec.argmax_partition.clone(),
            detail: format!(
                "{n}-partition needs {:?} translates (bound {:?})",
                rec.worst_min_f, rec.proven_bound
            ),
        });
        records.push(*rec);
        if let Some(failure) = failure {
            return Ok(Outcome::Failed { failure, records });
        }
    }
    Ok(Outcome::Passed { records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_family;

    fn build(spec: &str) -> FinSemigroup {
        build_family(&spec.parse().unwrap()).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for c in Check::THEOREMS.iter().chain(Check::VARIANTS.iter()) {
            assert_eq!(c.name().parse::<Check>().unwrap(), *c);
        }
        assert!("T9_9".parse::<Check>().is_err());
    }

    #[test]
    fn subgroup_base_minimal_ideal_is_itself() {
        let z6 = build("cyclic:6");
        let base = z6.mask(&[0, 2, 4]).unwrap();
        assert_eq!(z6.minimal_ideal_union(base).unwrap(), base);
        assert_eq!(run_check(Check::T3_1, &z6, base).unwrap(), Outcome::Passed { records: vec![] });
    }

    #[test]
    fn degeneracy() {
        let z4 = build("cyclic:4");
        assert!(is_degenerate(Check::T3_6, &z4, z4.full()).unwrap());
        assert!(is_degenerate(Check::C2_5, &z4, z4.full()).unwrap());
        assert!(!is_degenerate(Check::T3_1, &z4, z4.full()).unwrap());
        assert!(!is_degenerate(Check::T3_6, &z4, z4.mask(&[0, 2]).unwrap()).unwrap());
        let n3 = build("null:3");
        assert!(!is_degenerate(Check::T3_7, &n3, n3.full()).unwrap());
    }

    #[test]
    fn regularity_witness_is_detected() {
        // a table where only the full set is prethick is not partition regular
        let z4 = build("cyclic:4");
        let t = SizeTables::new(&z4, &PrincipalFilter::trivial(&z4)).unwrap();
        assert!(irregular_partition(&t, z4.full()).is_none());
        let rz = build("rightzero:3");
        let t = SizeTables::new(&rz, &PrincipalFilter::trivial(&rz)).unwrap();
        assert!(irregular_partition(&t, rz.full()).is_none());
    }

    #[test]
    fn bound_sweep_on_z4() {
        let z4 = build("cyclic:4");
        let Outcome::Passed { records } = run_check(Check::T3_2, &z4, z4.full()).unwrap() else {
            panic!("Z4 must pass");
        };
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].worst_min_f, Some(2));
        assert!(records.iter().all(|r| !r.proven_bound_violated));
        assert_eq!(run_check(Check::T3_2, &z4, z4.mask(&[1]).unwrap()).unwrap(), Outcome::Skipped);
    }
}
