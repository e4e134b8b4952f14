use crate::algebra::{build_family, enumerate_semigroups, FamilySpec, FinSemigroup, MAX_ENUMERATION_ORDER};
use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::size::SMALL_LIMIT;

/// Orders up to this get every non-empty base.
pub const ALL_BASES_LIMIT: usize = 6;

/// One representative per isomorphism class of groups of order ≤ 12.
pub const SMALL_GROUPS: [&str; 19] = [
    "cyclic:1",
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "product:cyclic:2,cyclic:2",
    "cyclic:5",
    "cyclic:6",
    "symmetric:3",
    "cyclic:7",
    "cyclic:8",
    "product:cyclic:4,cyclic:2",
    "product:cyclic:2,cyclic:2,cyclic:2",
    "dihedral:4",
    "quaternion8",
    "cyclic:9",
    "product:cyclic:3,cyclic:3",
    "cyclic:10",
    "dihedral:5",
    "cyclic:11",
];

const SMALL_GROUPS_12: [&str; 5] = [
    "cyclic:12",
    "product:cyclic:6,cyclic:2",
    "alternating:4",
    "dihedral:6",
    "dicyclic:3",
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub semigroup: FinSemigroup,
    /// Filter bases to check, ascending by bits.
    pub bases: Vec<SubsetMask>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub spec: String,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn instance_count(&self) -> usize {
        self.entries.iter().map(|e| e.bases.len()).sum()
    }

    pub fn from_entries(spec: impl Into<String>, entries: Vec<CatalogEntry>) -> Result<Self> {
        for e in &entries {
            check_order(&e.semigroup)?;
        }
        Ok(Catalog {
            spec: spec.into(),
            entries,
        })
    }
}

fn check_order(s: &FinSemigroup) -> Result<()> {
    if s.order() > SMALL_LIMIT {
        return Err(Error::SizeLimitExceeded(format!(
            "catalog instance {} has order {} (limit {SMALL_LIMIT})",
            s.name(),
            s.order()
        )));
    }
    Ok(())
}

/// Every non-empty base for small orders, the subgroups of larger groups, and
/// the full base otherwise.
pub fn default_bases(s: &FinSemigroup) -> Result<Vec<SubsetMask>> {
    if s.order() <= ALL_BASES_LIMIT {
        return Ok(s.full().subsets().skip(1).collect());
    }
    if s.is_group() {
        let mut subs = s.subgroups()?;
        subs.sort_by_key(|m| m.bits());
        return Ok(subs);
    }
    Ok(vec![s.full()])
}

fn entry(s: FinSemigroup) -> Result<CatalogEntry> {
    check_order(&s)?;
    let bases = default_bases(&s)?;
    Ok(CatalogEntry { semigroup: s, bases })
}

fn family(spec: &str) -> Result<FinSemigroup> {
    build_family(&spec.parse::<FamilySpec>()?)
}

fn parse_bound(term: &str, prefix: &str) -> Result<Option<usize>> {
    let Some(rest) = term.strip_prefix(prefix) else {
        return Ok(None);
    };
    rest.trim()
        .parse()
        .map(Some)
        .map_err(|_| Error::InvalidArgument(format!("bad bound in catalog term `{term}`")))
}

/// All groups of order ≤ `k` up to isomorphism (`k ≤ 12`).
pub fn small_groups(k: usize) -> Result<Vec<FinSemigroup>> {
    if k > 12 {
        return Err(Error::SizeLimitExceeded(format!("groups<={k} (limit 12)")));
    }
    SMALL_GROUPS
        .iter()
        .chain(SMALL_GROUPS_12.iter())
        .map(|spec| family(spec))
        .filter(|g| g.as_ref().map_or(true, |g| g.order() <= k))
        .collect()
}

fn default_catalog() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for order in 1..=MAX_ENUMERATION_ORDER {
        for s in enumerate_semigroups(order)? {
            out.push(entry(s)?);
        }
    }
    for n in 2..=12 {
        out.push(entry(family(&format!("cyclic:{n}"))?)?);
    }
    for spec in ["symmetric:3", "dihedral:4", "quaternion8"] {
        out.push(entry(family(spec)?)?);
    }
    for kind in ["rightzero", "leftzero", "null"] {
        for n in 2..=6 {
            out.push(entry(family(&format!("{kind}:{n}"))?)?);
        }
    }
    Ok(out)
}

/// Parses a catalog description: terms separated by `;`, each one of
///
/// * `default`
/// * `order<=k`, every labeled semigroup of order `1..=k` (`k ≤ 3`)
/// * `groups<=k`, every group of order ≤ `k` up to isomorphism (`k ≤ 12`)
/// * a family spec such as `cyclic:6`, optionally followed by explicit bases
///   `@0,2,4@0,3` in place of the default ones
pub fn parse_catalog(spec: &str) -> Result<Catalog> {
    let mut entries = Vec::new();
    for term in spec.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        if term == "default" {
            entries.extend(default_catalog()?);
        } else if let Some(k) = parse_bound(term, "order<=")? {
            if k > MAX_ENUMERATION_ORDER {
                return Err(Error::SizeLimitExceeded(format!(
                    "order<={k} (enumeration limit {MAX_ENUMERATION_ORDER})"
                )));
            }
            for order in 1..=k {
                for s in enumerate_semigroups(order)? {
                    entries.push(entry(s)?);
                }
            }
        } else if let Some(k) = parse_bound(term, "groups<=")? {
            for g in small_groups(k)? {
                entries.push(entry(g)?);
            }
        } else {
            let mut parts = term.split('@');
            let s = family(parts.next().unwrap_or_default().trim())?;
            check_order(&s)?;
            let explicit: Vec<&str> = parts.collect();
            if explicit.is_empty() {
                entries.push(entry(s)?);
            } else {
                let mut bases = Vec::new();
                for b in explicit {
                    let elems = b
                        .split(',')
                        .map(|x| {
                            x.trim().parse::<usize>().map_err(|_| {
                                Error::InvalidArgument(format!("bad base element `{x}` in `{term}`"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let m = s.mask(&elems)?;
                    if m.is_empty() {
                        return Err(Error::EmptyBase);
                    }
                    bases.push(m);
                }
                bases.sort_by_key(|m| m.bits());
                bases.dedup();
                entries.push(CatalogEntry { semigroup: s, bases });
            }
        }
    }
    if entries.is_empty() {
        return Err(Error::InvalidArgument(format!("catalog `{spec}` is empty")));
    }
    Catalog::from_entries(spec, entries)
}
