use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::FinSemigroup;
use crate::cover::min_cover_exact;
use crate::error::{Error, Result};
use crate::filter::PrincipalFilter;
use crate::mask::SubsetMask;
use crate::size::delta_tau;

/// How a witness set `F` acts on a cell `A` before covering `U₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMode {
    /// `⋃ f⁻¹A`
    Quotient,
    /// `⋃ f·(A·A⁻¹)`, groups only
    Translate,
    /// `⋃ f·Δ_τ(A)`
    Delta,
}

impl CoverMode {
    pub fn name(self) -> &'static str {
        match self {
            CoverMode::Quotient => "quotient",
            CoverMode::Translate => "translate",
            CoverMode::Delta => "delta",
        }
    }

    /// Images `f ↦ transform(f, A)` for every `f ∈ pool`, in ascending `f`.
    fn images(self, s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask, pool: SubsetMask) -> Result<Vec<SubsetMask>> {
        Ok(match self {
            CoverMode::Quotient => pool.iter().map(|f| s.left_quotient(f, a)).collect(),
            CoverMode::Translate => {
                let x = s.quotient_pairs(a)?;
                pool.iter().map(|f| s.translate_set(f, x)).collect()
            }
            CoverMode::Delta => {
                let d = delta_tau(s, tau, a);
                pool.iter().map(|f| s.translate_set(f, d)).collect()
            }
        })
    }

    /// The union of the images of `a` under every element of `witness`.
    pub fn covered(self, s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask, witness: SubsetMask) -> Result<SubsetMask> {
        Ok(self
            .images(s, tau, a, witness)?
            .into_iter()
            .fold(s.empty(), SubsetMask::union))
    }
}

impl fmt::Display for CoverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quotient" | "quotient_cover" => Ok(CoverMode::Quotient),
            "translate" | "translate_cover" => Ok(CoverMode::Translate),
            "delta" | "delta_cover" => Ok(CoverMode::Delta),
            other => Err(Error::InvalidArgument(format!(
                "unknown cover mode `{other}` (expected quotient, translate or delta)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub cell: usize,
    pub cell_set: SubsetMask,
    pub witness: SubsetMask,
    pub mode: CoverMode,
    pub target: SubsetMask,
    pub covered: SubsetMask,
}

impl CoverCertificate {
    /// Restores the universe width of every mask after deserialization.
    pub fn with_width(self, width: usize) -> Result<Self> {
        let fit = |m: SubsetMask| {
            m.with_width(width)
                .ok_or_else(|| Error::Dimension(format!("certificate mask {m} does not fit in width {width}")))
        };
        Ok(CoverCertificate {
            cell_set: fit(self.cell_set)?,
            witness: fit(self.witness)?,
            target: fit(self.target)?,
            covered: fit(self.covered)?,
            ..self
        })
    }

    /// Recomputes `covered` from the cell and witness and checks it still
    /// contains the target.
    pub fn validate(&self, s: &FinSemigroup, tau: &PrincipalFilter) -> bool {
        match self.mode.covered(s, tau, self.cell_set, self.witness) {
            Ok(c) => c == self.covered && c.is_superset(self.target),
            Err(_) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CoverOutcome {
    Covered(CoverCertificate),
    Infeasible,
}

impl CoverOutcome {
    /// `|F|`, or `None` when no subset of the pool works.
    pub fn size(&self) -> Option<usize> {
        match self {
            CoverOutcome::Covered(c) => Some(c.witness.len()),
            CoverOutcome::Infeasible => None,
        }
    }

    pub fn certificate(&self) -> Option<&CoverCertificate> {
        match self {
            CoverOutcome::Covered(c) => Some(c),
            CoverOutcome::Infeasible => None,
        }
    }
}

/// A minimum `F ⊆ pool` whose transform of `a` covers `U₀`. Among minimum
/// witnesses the one with the lexicographically least element list wins.
pub fn min_cover(
    s: &FinSemigroup,
    tau: &PrincipalFilter,
    a: SubsetMask,
    mode: CoverMode,
    pool: SubsetMask,
) -> Result<CoverOutcome> {
    if pool.is_empty() {
        return Err(Error::InvalidArgument("witness pool must be non-empty".into()));
    }
    if pool.width() != s.order() || a.width() != s.order() {
        return Err(Error::Dimension(format!(
            "masks must have width {} to match the semigroup",
            s.order()
        )));
    }
    let images = mode.images(s, tau, a, pool)?;
    let target = tau.base();
    let Some(idx) = min_cover_exact(&images, target) else {
        return Ok(CoverOutcome::Infeasible);
    };
    let elements = pool.to_vec();
    let witness = SubsetMask::from_elements(s.order(), idx.iter().map(|&i| elements[i]));
    let covered = idx.iter().fold(s.empty(), |acc, &i| acc.union(images[i]));
    Ok(CoverOutcome::Covered(CoverCertificate {
        cell: 0,
        cell_set: a,
        witness,
        mode,
        target,
        covered,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_family;
    use proptest::prelude::*;

    fn build(spec: &str) -> FinSemigroup {
        build_family(&spec.parse().unwrap()).unwrap()
    }

    /// Smallest |F| by trying every subset of the pool.
    fn brute(s: &FinSemigroup, tau: &PrincipalFilter, a: SubsetMask, mode: CoverMode, pool: SubsetMask) -> Option<usize> {
        pool.subsets()
            .filter(|f| mode.covered(s, tau, a, *f).unwrap().is_superset(tau.base()))
            .map(|f| f.len())
            .min()
    }

    #[test]
    fn examples() {
        let z3 = build("cyclic:3");
        let t = PrincipalFilter::trivial(&z3);
        let a = z3.mask(&[1, 2]).unwrap();
        assert_eq!(min_cover(&z3, &t, a, CoverMode::Translate, z3.full()).unwrap().size(), Some(1));

        let z4 = build("cyclic:4");
        let t = PrincipalFilter::trivial(&z4);
        let a = z4.mask(&[0, 1]).unwrap();
        assert_eq!(z4.quotient_pairs(a).unwrap(), z4.mask(&[0, 1, 3]).unwrap());
        let out = min_cover(&z4, &t, a, CoverMode::Translate, z4.full()).unwrap();
        assert_eq!(out.size(), Some(2));
        assert!(out.certificate().unwrap().validate(&z4, &t));
        assert_eq!(min_cover(&z4, &t, a, CoverMode::Delta, z4.full()).unwrap().size(), Some(2));

        let whole = min_cover(&z4, &t, z4.full(), CoverMode::Translate, z4.full()).unwrap();
        assert_eq!(whole.certificate().unwrap().witness, z4.mask(&[0]).unwrap());
    }

    #[test]
    fn infeasible_and_errors() {
        let rz = build("rightzero:3");
        let t = PrincipalFilter::trivial(&rz);
        let a = rz.mask(&[0]).unwrap();
        // f⁻¹A = A in a right-zero semigroup, so nothing covers S
        assert_eq!(min_cover(&rz, &t, a, CoverMode::Quotient, rz.full()).unwrap(), CoverOutcome::Infeasible);
        assert!(matches!(
            min_cover(&rz, &t, a, CoverMode::Translate, rz.full()),
            Err(Error::NotAGroup(_))
        ));
        assert!(min_cover(&rz, &t, a, CoverMode::Quotient, rz.empty()).is_err());
    }

    #[test]
    fn quotient_on_difference_set_matches_translate_with_inverted_pool() {
        // f⁻¹X = f⁻¹·X in a group, so covering by quotients with F equals
        // covering by translates with F⁻¹.
        for spec in ["cyclic:6", "symmetric:3", "dihedral:4", "quaternion8"] {
            let g = build(spec);
            let inv = g.inverses().unwrap().to_vec();
            for base in g.subgroups().unwrap() {
                let t = PrincipalFilter::new(&g, base).unwrap();
                for a in g.full().subsets().step_by(7) {
                    let x = g.quotient_pairs(a).unwrap();
                    let q = min_cover(&g, &t, x, CoverMode::Quotient, g.full()).unwrap();
                    let tr = min_cover(&g, &t, a, CoverMode::Translate, g.full()).unwrap();
                    assert_eq!(q.size(), tr.size(), "{spec} {base} {a}");
                    if let Some(c) = q.certificate() {
                        let flipped = SubsetMask::from_elements(g.order(), c.witness.iter().map(|f| inv[f]));
                        let cov = CoverMode::Translate.covered(&g, &t, a, flipped).unwrap();
                        assert!(cov.is_superset(base));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn exact_and_monotone_in_pool(
            spec in prop::sample::select(vec!["cyclic:5", "cyclic:6", "symmetric:3", "product:cyclic:2,cyclic:2"]),
            base_bits in 1u64..64, a_bits in any::<u64>(), pool_bits in 1u64..64, extra in any::<u64>(),
            mode in prop::sample::select(vec![CoverMode::Quotient, CoverMode::Translate, CoverMode::Delta]),
        ) {
            let g = build(spec);
            let n = g.order();
            let base = SubsetMask::from_bits(n, base_bits);
            prop_assume!(!base.is_empty());
            let t = PrincipalFilter::new(&g, base).unwrap();
            let a = SubsetMask::from_bits(n, a_bits);
            let pool = SubsetMask::from_bits(n, pool_bits);
            prop_assume!(!pool.is_empty());
            let out = min_cover(&g, &t, a, mode, pool).unwrap();
            prop_assert_eq!(out.size(), brute(&g, &t, a, mode, pool));
            if let Some(c) = out.certificate() {
                prop_assert!(c.validate(&g, &t));
                prop_assert!(c.witness.is_subset(pool));
            }
            let bigger = pool.union(SubsetMask::from_bits(n, extra));
            let wider = min_cover(&g, &t, a, mode, bigger).unwrap();
            match (out.size(), wider.size()) {
                (Some(x), Some(y)) => prop_assert!(y <= x),
                (Some(_), None) => prop_assert!(false, "widening lost feasibility"),
                _ => {}
            }
        }
    }
}
