use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cover::{min_cover, CoverCertificate, CoverMode};
use super::{enumerate_partitions, Partition};
use crate::algebra::{automorphisms_with_limit, FinSemigroup, Permutation, DEFAULT_AUTOMORPHISM_LIMIT};
use crate::error::{Error, Result};
use crate::filter::PrincipalFilter;
use crate::mask::SubsetMask;

/// Partitions per work chunk; also the checkpoint granularity.
pub const DEFAULT_CHUNK: usize = 256;

/// Largest domain for which every `U ⊇ U₀` is swept.
const WIDEN_LIMIT: usize = 6;

/// `2^(2^(n-1) - 1)`, or `None` once it no longer fits in 64 bits.
pub fn proven_bound(n: usize) -> Option<u64> {
    if n == 0 {
        return None;
    }
    let exp = 1u64.checked_shl(n as u32 - 1)? - 1;
    1u64.checked_shl(u32::try_from(exp).ok()?)
}

fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

fn default_max_order(cells: usize) -> usize {
    match cells {
        0..=2 => 12,
        3 => 8,
        _ => 6,
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub semigroup: FinSemigroup,
    pub filter: PrincipalFilter,
    pub cells: usize,
    pub mode: CoverMode,
    pub pool: SubsetMask,
    /// Sweep every `U ⊇ U₀` rather than `U₀` alone.
    pub widen: bool,
    pub symmetry: bool,
    pub allow_empty: bool,
    /// Overrides the default order limit for `cells`.
    pub max_order: Option<usize>,
    pub chunk: usize,
}

impl SweepConfig {
    /// Defaults: `U = U₀`, symmetry reduction on, no empty cells.
    pub fn new(semigroup: FinSemigroup, filter: PrincipalFilter, cells: usize, mode: CoverMode, pool: SubsetMask) -> Self {
        SweepConfig {
            semigroup,
            filter,
            cells,
            mode,
            pool,
            widen: false,
            symmetry: true,
            allow_empty: false,
            max_order: None,
            chunk: DEFAULT_CHUNK,
        }
    }

    fn validate(&self) -> Result<()> {
        let s = &self.semigroup;
        if self.cells == 0 {
            return Err(Error::InvalidArgument("cell count must be at least 1".into()));
        }
        if self.chunk == 0 {
            return Err(Error::InvalidArgument("chunk size must be positive".into()));
        }
        if self.pool.width() != s.order() || self.filter.base().width() != s.order() {
            return Err(Error::Dimension(format!("masks must have width {}", s.order())));
        }
        if self.pool.is_empty() {
            return Err(Error::InvalidArgument("witness pool must be non-empty".into()));
        }
        if self.mode == CoverMode::Translate && !s.is_group() {
            return Err(Error::NotAGroup(format!("translate covers need inverses in {}", s.name())));
        }
        let limit = self.max_order.unwrap_or_else(|| default_max_order(self.cells));
        if s.order() > limit {
            return Err(Error::SizeLimitExceeded(format!(
                "sweep of {}-partitions on order {} (limit {limit})",
                self.cells,
                s.order()
            )));
        }
        if self.widen && s.order() > WIDEN_LIMIT {
            return Err(Error::SizeLimitExceeded(format!(
                "widened sweep on order {} (limit {WIDEN_LIMIT})",
                s.order()
            )));
        }
        Ok(())
    }

    /// Identifies the sweep so a checkpoint is only resumed by the same run.
    fn fingerprint(&self) -> String {
        format!(
            "{}|{:?}|{}|{}|{}|{}|{}|{}|{}|{}",
            self.semigroup.name(),
            self.semigroup.rows(),
            self.filter.base().bits(),
            self.cells,
            self.mode,
            self.pool.bits(),
            self.widen,
            self.symmetry,
            self.allow_empty,
            self.chunk
        )
    }

    /// Whether the translate-cover bound is a theorem for this configuration:
    /// a group, a subgroup base and a pool containing it.
    pub fn bound_applies(&self) -> bool {
        let s = &self.semigroup;
        let base = self.filter.base();
        self.mode == CoverMode::Translate
            && s.is_group()
            && s.identity().is_some_and(|e| base.contains(e))
            && s.is_closed(base)
            && self.pool.is_superset(base)
    }

    fn domains(&self) -> Vec<SubsetMask> {
        let base = self.filter.base();
        if self.widen {
            base.supersets().collect()
        } else {
            vec![base]
        }
    }

    /// The deterministic work list, most balanced partitions first.
    fn work_items(&self) -> Result<Vec<Partition>> {
        let s = &self.semigroup;
        let auts: Vec<Permutation> = if self.symmetry && s.order() <= DEFAULT_AUTOMORPHISM_LIMIT {
            automorphisms_with_limit(s, DEFAULT_AUTOMORPHISM_LIMIT)?
                .into_iter()
                .filter(|p| p.apply_mask(self.filter.base()) == self.filter.base() && p.apply_mask(self.pool) == self.pool)
                .collect()
        } else {
            Vec::new()
        };
        let mut items = Vec::new();
        for domain in self.domains() {
            let stab: Vec<Permutation> = auts.iter().filter(|p| p.apply_mask(domain) == domain).cloned().collect();
            let sym = if self.symmetry { Some(stab.as_slice()) } else { None };
            items.extend(enumerate_partitions(domain, self.cells, sym, self.allow_empty));
        }
        items.sort_by(|a, b| {
            a.imbalance()
                .cmp(&b.imbalance())
                .then_with(|| partition_key_cmp(a, b))
        });
        Ok(items)
    }
}

fn partition_key_cmp(a: &Partition, b: &Partition) -> Ordering {
    a.domain()
        .bits()
        .cmp(&b.domain().bits())
        .then_with(|| a.labels().cmp(b.labels()))
}

/// Worst partition found so far.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Best {
    /// Best-over-cells minimal `|F|`; `None` when every cell is infeasible.
    pub min_f: Option<usize>,
    pub partition: Partition,
    pub certificate: Option<CoverCertificate>,
}

impl Best {
    fn rank(&self) -> usize {
        self.min_f.unwrap_or(usize::MAX)
    }

    /// Larger value wins, then the lexicographically least partition.
    fn better_than(&self, other: &Best) -> bool {
        match self.rank().cmp(&other.rank()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => partition_key_cmp(&self.partition, &other.partition) == Ordering::Less,
        }
    }
}

fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.better_than(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn evaluate(cfg: &SweepConfig, p: &Partition) -> Result<Best> {
    let mut best: Option<CoverCertificate> = None;
    for (i, cell) in p.cell_masks().into_iter().enumerate() {
        if cell.is_empty() {
            continue;
        }
        if let Some(mut cert) = min_cover(&cfg.semigroup, &cfg.filter, cell, cfg.mode, cfg.pool)?
            .certificate()
            .cloned()
        {
            if best.as_ref().is_none_or(|b| cert.witness.len() < b.witness.len()) {
                cert.cell = i;
                best = Some(cert);
            }
        }
    }
    Ok(Best {
        min_f: best.as_ref().map(|c| c.witness.len()),
        partition: p.clone(),
        certificate: best,
    })
}

/// Resumable progress of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepState {
    pub fingerprint: String,
    pub next_chunk: usize,
    pub total_chunks: usize,
    pub partitions_checked: u64,
    pub best: Option<Best>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub group: String,
    pub order: usize,
    pub base: SubsetMask,
    pub cells: usize,
    pub mode: CoverMode,
    pub pool: SubsetMask,
    pub widened: bool,
    pub symmetry: bool,
    pub partitions_checked: u64,
    /// `None` when some partition has no coverable cell at all.
    pub worst_min_f: Option<usize>,
    pub proven_bound: Option<u64>,
    pub bound_applies: bool,
    pub proven_bound_violated: bool,
    pub conjecture_bound: Option<u64>,
    pub exceeds_conjecture: bool,
    /// `2^(2^n)`, reported for delta covers only.
    pub weak_conjecture_bound: Option<u64>,
    pub exceeds_weak_conjecture: bool,
    pub argmax_partition: Option<Partition>,
    pub argmax_certificate: Option<CoverCertificate>,
}

fn exceeds(worst: Option<usize>, bound: Option<u64>) -> bool {
    match (worst, bound) {
        (None, _) => true,
        (Some(w), Some(b)) => w as u64 > b,
        (Some(_), None) => false,
    }
}

impl BoundRecord {
    /// Restores the universe width of every mask after deserialization.
    pub fn with_width(self, width: usize) -> Result<Self> {
        let fit = |m: SubsetMask| {
            m.with_width(width)
                .ok_or_else(|| Error::Dimension(format!("record mask {m} does not fit in width {width}")))
        };
        Ok(BoundRecord {
            base: fit(self.base)?,
            pool: fit(self.pool)?,
            argmax_partition: self.argmax_partition.map(|p| p.with_width(width)).transpose()?,
            argmax_certificate: self.argmax_certificate.map(|c| c.with_width(width)).transpose()?,
            ..self
        })
    }

    fn from_state(cfg: &SweepConfig, state: SweepState) -> Self {
        let n = cfg.cells;
        let worst = state.best.as_ref().map_or(Some(0), |b| b.min_f);
        let proven = proven_bound(n);
        let conjecture = match cfg.mode {
            CoverMode::Delta => factorial(n),
            _ => Some(n as u64),
        };
        let weak = match cfg.mode {
            CoverMode::Delta => 1u64.checked_shl(1u32.checked_shl(n as u32).unwrap_or(u32::MAX)),
            _ => None,
        };
        let applies = cfg.bound_applies();
        BoundRecord {
            group: cfg.semigroup.name().to_string(),
            order: cfg.semigroup.order(),
            base: cfg.filter.base(),
            cells: n,
            mode: cfg.mode,
            pool: cfg.pool,
            widened: cfg.widen,
            symmetry: cfg.symmetry,
            partitions_checked: state.partitions_checked,
            worst_min_f: worst,
            proven_bound: proven,
            bound_applies: applies,
            proven_bound_violated: applies && exceeds(worst, proven),
            conjecture_bound: conjecture,
            exceeds_conjecture: exceeds(worst, conjecture),
            weak_conjecture_bound: weak,
            exceeds_weak_conjecture: cfg.mode == CoverMode::Delta && exceeds(worst, weak),
            argmax_certificate: state.best.as_ref().and_then(|b| b.certificate.clone()),
            argmax_partition: state.best.map(|b| b.partition),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepProgress {
    Done(Box<BoundRecord>),
    Interrupted(SweepState),
}

/// Runs (or resumes) a sweep. Chunks are handed to the rayon pool in batches;
/// the deadline is checked between batches and at least one batch always
/// runs, so repeated resumption terminates.
pub fn run_sweep(cfg: &SweepConfig, resume: Option<SweepState>, deadline: Option<Instant>) -> Result<SweepProgress> {
    cfg.validate()?;
    let items = cfg.work_items()?;
    let chunks: Vec<&[Partition]> = items.chunks(cfg.chunk).collect();
    let fingerprint = cfg.fingerprint();
    let mut state = match resume {
        Some(st) => {
            if st.fingerprint != fingerprint || st.total_chunks != chunks.len() {
                return Err(Error::InvalidArgument("checkpoint belongs to a different sweep".into()));
            }
            let width = cfg.semigroup.order();
            let best = match st.best {
                Some(b) => Some(Best {
                    min_f: b.min_f,
                    partition: b.partition.with_width(width)?,
                    certificate: b.certificate.map(|c| c.with_width(width)).transpose()?,
                }),
                None => None,
            };
            SweepState { best, ..st }
        }
        None => SweepState {
            fingerprint,
            next_chunk: 0,
            total_chunks: chunks.len(),
            partitions_checked: 0,
            best: None,
        },
    };
    let batch = rayon::current_num_threads().max(1);
    let mut first = true;
    while state.next_chunk < chunks.len() {
        if !first && deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(SweepProgress::Interrupted(state));
        }
        first = false;
        let end = (state.next_chunk + batch).min(chunks.len());
        let results: Vec<Option<Best>> = chunks[state.next_chunk..end]
            .par_iter()
            .map(|chunk| {
                chunk
                    .iter()
                    .try_fold(None, |acc, p| Ok::<_, Error>(merge(acc, Some(evaluate(cfg, p)?))))
            })
            .collect::<Result<_>>()?;
        for r in results {
            state.best = merge(state.best.take(), r);
        }
        state.partitions_checked += chunks[state.next_chunk..end].iter().map(|c| c.len() as u64).sum::<u64>();
        state.next_chunk = end;
    }
    Ok(SweepProgress::Done(Box::new(BoundRecord::from_state(cfg, state))))
}

/// Worst case over all partitions, run to completion.
pub fn worst_case_table(
    s: &FinSemigroup,
    tau: &PrincipalFilter,
    cells: usize,
    mode: CoverMode,
    pool: SubsetMask,
) -> Result<BoundRecord> {
    let cfg = SweepConfig::new(s.clone(), *tau, cells, mode, pool);
    match run_sweep(&cfg, None, None)? {
        SweepProgress::Done(r) => Ok(*r),
        SweepProgress::Interrupted(_) => unreachable!("no deadline was set"),
    }
}

/// [`worst_case_table`] with delta covers.
pub fn delta_worst_case(s: &FinSemigroup, tau: &PrincipalFilter, cells: usize, pool: SubsetMask) -> Result<BoundRecord> {
    worst_case_table(s, tau, cells, CoverMode::Delta, pool)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{automorphisms, build_family};
    use crate::partition::orbit;

    fn build(spec: &str) -> FinSemigroup {
        build_family(&spec.parse().unwrap()).unwrap()
    }

    fn run(cfg: &SweepConfig) -> BoundRecord {
        match run_sweep(cfg, None, None).unwrap() {
            SweepProgress::Done(r) => *r,
            SweepProgress::Interrupted(_) => unreachable!(),
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(proven_bound(1), Some(1));
        assert_eq!(proven_bound(2), Some(2));
        assert_eq!(proven_bound(3), Some(8));
        assert_eq!(proven_bound(4), Some(128));
        assert_eq!(proven_bound(8), None);
        assert_eq!(factorial(3), Some(6));
    }

    #[test]
    fn cyclic_examples() {
        let z4 = build("cyclic:4");
        let t = PrincipalFilter::trivial(&z4);
        let r = worst_case_table(&z4, &t, 2, CoverMode::Translate, z4.full()).unwrap();
        assert_eq!(r.worst_min_f, Some(2));
        assert_eq!(r.proven_bound, Some(2));
        assert_eq!(r.conjecture_bound, Some(2));
        assert!(r.bound_applies && !r.proven_bound_violated && !r.exceeds_conjecture);
        let cert = r.argmax_certificate.as_ref().unwrap();
        assert!(cert.validate(&z4, &t));

        let d = delta_worst_case(&z4, &t, 2, z4.full()).unwrap();
        assert_eq!(d.worst_min_f, Some(2));
        assert_eq!(d.conjecture_bound, Some(2));
        assert_eq!(d.weak_conjecture_bound, Some(16));

        let z3 = build("cyclic:3");
        let t3 = PrincipalFilter::trivial(&z3);
        let r3 = worst_case_table(&z3, &t3, 2, CoverMode::Translate, z3.full()).unwrap();
        assert!(r3.worst_min_f.unwrap() <= 2);

        for spec in ["cyclic:5", "symmetric:3", "quaternion8"] {
            let g = build(spec);
            for base in g.subgroups().unwrap() {
                let t = PrincipalFilter::new(&g, base).unwrap();
                let one = worst_case_table(&g, &t, 1, CoverMode::Translate, g.full()).unwrap();
                assert_eq!(one.worst_min_f, Some(1), "{spec} {base}");
            }
        }
    }

    #[test]
    fn delta_on_subgroup_base() {
        let z6 = build("cyclic:6");
        let t = PrincipalFilter::new(&z6, z6.mask(&[0, 2, 4]).unwrap()).unwrap();
        let r = delta_worst_case(&z6, &t, 2, z6.full()).unwrap();
        // on U = U₀ the delta set of A is A·(A ∩ U₀)⁻¹ = A·A⁻¹
        let tr = worst_case_table(&z6, &t, 2, CoverMode::Translate, z6.full()).unwrap();
        assert_eq!(r.worst_min_f, tr.worst_min_f);
        assert!(r.worst_min_f.is_some());
    }

    #[test]
    fn symmetry_does_not_change_the_answer() {
        for (spec, base) in [("cyclic:6", vec![0, 3]), ("dihedral:4", vec![0, 1, 2, 3]), ("rightzero:4", vec![1, 2])] {
            let g = build(spec);
            let t = PrincipalFilter::new(&g, g.mask(&base).unwrap()).unwrap();
            let mode = if g.is_group() { CoverMode::Translate } else { CoverMode::Quotient };
            let mut cfg = SweepConfig::new(g.clone(), t, 2, mode, g.full());
            cfg.widen = g.order() <= 6;
            let with = run(&cfg);
            cfg.symmetry = false;
            let without = run(&cfg);
            assert_eq!(with.worst_min_f, without.worst_min_f, "{spec}");
            assert!(with.partitions_checked <= without.partitions_checked);
        }
    }

    #[test]
    fn orbit_members_share_their_value() {
        let g = build("dihedral:4");
        let t = PrincipalFilter::trivial(&g);
        let auts = automorphisms(&g).unwrap();
        let cfg = SweepConfig::new(g.clone(), t, 2, CoverMode::Translate, g.full());
        for p in enumerate_partitions(g.full(), 2, Some(&auts), false).step_by(5) {
            let v = evaluate(&cfg, &p).unwrap().min_f;
            for q in orbit(&p, &auts) {
                assert_eq!(evaluate(&cfg, &q).unwrap().min_f, v);
            }
        }
    }

    #[test]
    fn resume_matches_uninterrupted_run() {
        let g = build("cyclic:8");
        let t = PrincipalFilter::trivial(&g);
        let mut cfg = SweepConfig::new(g.clone(), t, 3, CoverMode::Translate, g.full());
        cfg.chunk = 4;
        cfg.symmetry = false;
        let whole = run(&cfg);
        let mut state = None;
        let mut rounds = 0;
        let rec = loop {
            rounds += 1;
            match run_sweep(&cfg, state.take(), Some(Instant::now())).unwrap() {
                SweepProgress::Done(r) => break *r,
                SweepProgress::Interrupted(st) => {
                    let text = serde_json::to_string(&st).unwrap();
                    state = Some(serde_json::from_str(&text).unwrap());
                }
            }
        };
        assert!(rounds > 1);
        assert_eq!(rec, whole);

        let other = SweepConfig::new(g.clone(), t, 2, CoverMode::Translate, g.full());
        let st = match run_sweep(&cfg, None, Some(Instant::now())).unwrap() {
            SweepProgress::Interrupted(st) => st,
            SweepProgress::Done(_) => panic!("expected an interruption"),
        };
        assert!(run_sweep(&other, Some(st), None).is_err());
    }

    #[test]
    fn limits_and_preconditions() {
        let z13 = build("cyclic:13");
        let t = PrincipalFilter::trivial(&z13);
        assert!(matches!(
            worst_case_table(&z13, &t, 2, CoverMode::Translate, z13.full()),
            Err(Error::SizeLimitExceeded(_))
        ));
        let z9 = build("cyclic:9");
        let t9 = PrincipalFilter::trivial(&z9);
        assert!(matches!(
            worst_case_table(&z9, &t9, 3, CoverMode::Translate, z9.full()),
            Err(Error::SizeLimitExceeded(_))
        ));
        let rz = build("rightzero:3");
        let trz = PrincipalFilter::trivial(&rz);
        assert!(matches!(
            worst_case_table(&rz, &trz, 2, CoverMode::Translate, rz.full()),
            Err(Error::NotAGroup(_))
        ));
        // quotient covers of right-zero cells never reach S
        let q = worst_case_table(&rz, &trz, 2, CoverMode::Quotient, rz.full()).unwrap();
        assert_eq!(q.worst_min_f, None);
        assert!(!q.bound_applies && !q.proven_bound_violated);
    }
}
