//! Named families of small semigroups and their spec-string grammar.
//!
//! Spec strings look like `cyclic:4`, `rightzero:3`, `quaternion8` or
//! `product:cyclic:2,cyclic:3`. Products are flat: factors are separated by
//! commas and may not themselves be products.

use std::fmt;
use std::str::FromStr;

use super::FinSemigroup;
use crate::error::{Error, Result};
use crate::mask::MAX_WIDTH;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// `Z_n` under addition.
    Cyclic(usize),
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral(usize),
    /// `S_n` for `n <= 4`.
    Symmetric(usize),
    /// `A_n` for `n <= 5`.
    Alternating(usize),
    Quaternion8,
    /// Dicyclic group of order `4n`.
    Dicyclic(usize),
    /// `x·y = y`.
    RightZero(usize),
    /// `x·y = x`.
    LeftZero(usize),
    /// `x·y = 0`.
    Null(usize),
    /// All self-maps of an `n`-set, `n <= 3`.
    FullTransformation(usize),
    DirectProduct(Vec<FamilySpec>),
}

impl FamilySpec {
    /// Order of the semigroup this spec names, or `None` on overflow.
    pub fn order(&self) -> Option<usize> {
        use FamilySpec::*;
        match self {
            Cyclic(n) | RightZero(n) | LeftZero(n) | Null(n) => Some(*n),
            Dihedral(n) => n.checked_mul(2),
            Dicyclic(n) => n.checked_mul(4),
            Symmetric(n) => (1..=*n).try_fold(1usize, |a, k| a.checked_mul(k)),
            Alternating(n) => {
                let f = (1..=*n).try_fold(1usize, |a, k| a.checked_mul(k))?;
                Some(if *n < 2 { f } else { f / 2 })
            }
            Quaternion8 => Some(8),
            FullTransformation(n) => n.checked_pow(*n as u32),
            DirectProduct(fs) => fs.iter().try_fold(1usize, |a, f| a.checked_mul(f.order()?)),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            Cyclic(n) => write!(f, "cyclic:{n}"),
            Dihedral(n) => write!(f, "dihedral:{n}"),
            Symmetric(n) => write!(f, "symmetric:{n}"),
            Alternating(n) => write!(f, "alternating:{n}"),
            Quaternion8 => write!(f, "quaternion8"),
            Dicyclic(n) => write!(f, "dicyclic:{n}"),
            RightZero(n) => write!(f, "rightzero:{n}"),
            LeftZero(n) => write!(f, "leftzero:{n}"),
            Null(n) => write!(f, "null:{n}"),
            FullTransformation(n) => write!(f, "transformation:{n}"),
            DirectProduct(fs) => {
                write!(f, "product:")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let name = name.to_ascii_lowercase().replace(['_', '-'], "");
        if name == "product" || name == "directproduct" {
            let arg = arg.ok_or_else(|| Error::UnknownFamily(s.to_string()))?;
            let factors = arg
                .split(',')
                .map(|f| {
                    let spec: FamilySpec = f.parse()?;
                    if matches!(spec, FamilySpec::DirectProduct(_)) {
                        return Err(Error::UnknownFamily(format!("nested product in `{s}`")));
                    }
                    Ok(spec)
                })
                .collect::<Result<Vec<_>>>()?;
            if factors.is_empty() {
                return Err(Error::UnknownFamily(s.to_string()));
            }
            return Ok(FamilySpec::DirectProduct(factors));
        }
        if matches!(name.as_str(), "quaternion8" | "quaternion" | "q8") {
            return match arg {
                None | Some("8") => Ok(FamilySpec::Quaternion8),
                Some(_) => Err(Error::UnknownFamily(s.to_string())),
            };
        }
        let n: usize = arg
            .ok_or_else(|| Error::UnknownFamily(format!("`{s}` needs a size parameter")))?
            .trim()
            .parse()
            .map_err(|_| Error::UnknownFamily(format!("bad size parameter in `{s}`")))?;
        if n == 0 {
            return Err(Error::UnknownFamily(format!("size parameter must be positive in `{s}`")));
        }
        Ok(match name.as_str() {
            "cyclic" | "z" => FamilySpec::Cyclic(n),
            "dihedral" | "d" => FamilySpec::Dihedral(n),
            "symmetric" | "s" => FamilySpec::Symmetric(n),
            "alternating" | "a" => FamilySpec::Alternating(n),
            "dicyclic" | "dic" => FamilySpec::Dicyclic(n),
            "rightzero" => FamilySpec::RightZero(n),
            "leftzero" => FamilySpec::LeftZero(n),
            "null" | "zero" => FamilySpec::Null(n),
            "transformation" | "fulltransformation" | "t" => FamilySpec::FullTransformation(n),
            _ => return Err(Error::UnknownFamily(s.to_string())),
        })
    }
}

fn check_order(spec: &FamilySpec) -> Result<usize> {
    match spec.order() {
        Some(n) if n <= MAX_WIDTH => Ok(n),
        _ => Err(Error::SizeLimitExceeded(format!(
            "{spec} has order above {MAX_WIDTH}"
        ))),
    }
}

/// Permutations of `0..n` in lexicographic order (identity first).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

/// Composition table of a list of permutations: `(σ·τ)(x) = σ(τ(x))`.
fn permutation_group(name: String, perms: &[Vec<usize>]) -> Result<FinSemigroup> {
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed under composition");
    FinSemigroup::from_fn(name, perms.len(), |a, b| {
        let composed: Vec<usize> = perms[b].iter().map(|&x| perms[a][x]).collect();
        index(&composed)
    })
}

// ±1, ±i, ±j, ±k as (sign, unit) with unit 0..4 = 1,i,j,k; index = 2*unit + (sign<0).
fn quaternion_mul(a: usize, b: usize) -> usize {
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let (ua, na) = (a / 2, a % 2 == 1);
    let (ub, nb) = (b / 2, b % 2 == 1);
    let (neg, u) = UNIT[ua][ub];
    2 * u + usize::from(neg ^ na ^ nb)
}

/// Builds the semigroup a family spec names. Its name is the canonical spec string.
pub fn build_family(spec: &FamilySpec) -> Result<FinSemigroup> {
    use FamilySpec::*;
    let order = check_order(spec)?;
    let name = spec.to_string();
    match spec {
        Cyclic(n) => FinSemigroup::from_fn(name, *n, |a, b| (a + b) % n),
        Dihedral(n) => {
            // r^k at index k, s·r^k at index n + k.
            let n = *n;
            FinSemigroup::from_fn(name, 2 * n, |a, b| {
                let (sa, ka) = (a >= n, a % n);
                let (sb, kb) = (b >= n, b % n);
                let k = if sb { (n + kb - ka) % n } else { (ka + kb) % n };
                if sa ^ sb {
                    n + k
                } else {
                    k
                }
            })
        }
        Symmetric(n) => {
            if *n > 4 {
                return Err(Error::SizeLimitExceeded(format!("symmetric:{n} (limit 4)")));
            }
            permutation_group(name, &permutations(*n))
        }
        Alternating(n) => {
            if *n > 5 {
                return Err(Error::SizeLimitExceeded(format!("alternating:{n} (limit 5)")));
            }
            let even: Vec<_> = permutations(*n).into_iter().filter(|p| is_even(p)).collect();
            permutation_group(name, &even)
        }
        Quaternion8 => FinSemigroup::from_fn(name, 8, quaternion_mul),
        Dicyclic(n) => {
            // a^k x^e at index e*2n + k, with a^{2n} = 1, x² = a^n, x a = a⁻¹ x.
            let m = 2 * n;
            FinSemigroup::from_fn(name, order, |p, q| {
                let (ep, kp) = (p / m, p % m);
                let (eq, kq) = (q / m, q % m);
                let k = if ep == 1 { kp + m - kq } else { kp + kq };
                match (ep, eq) {
                    (1, 1) => (k + n) % m,
                    (0, 0) => k % m,
                    _ => m + k % m,
                }
            })
        }
        RightZero(n) => FinSemigroup::from_fn(name, *n, |_, b| b),
        LeftZero(n) => FinSemigroup::from_fn(name, *n, |a, _| a),
        Null(n) => FinSemigroup::from_fn(name, *n, |_, _| 0),
        FullTransformation(n) => {
            if *n > 3 {
                return Err(Error::SizeLimitExceeded(format!("transformation:{n} (limit 3)")));
            }
            // Map f encoded as sum f(i)·n^i; (f·g)(x) = g(f(x)).
            let n = *n;
            let decode = |code: usize| -> Vec<usize> {
                (0..n).map(|i| (code / n.pow(i as u32)) % n).collect()
            };
            let encode = |f: &[usize]| -> usize {
                f.iter().enumerate().map(|(i, &v)| v * n.pow(i as u32)).sum()
            };
            FinSemigroup::from_fn(name, order, |a, b| {
                let (fa, fb) = (decode(a), decode(b));
                let composed: Vec<usize> = fa.iter().map(|&x| fb[x]).collect();
                encode(&composed)
            })
        }
        DirectProduct(factors) => {
            let parts = factors.iter().map(build_family).collect::<Result<Vec<_>>>()?;
            let orders: Vec<usize> = parts.iter().map(|p| p.order()).collect();
            // First factor is the most significant digit.
            let digits = |mut x: usize| -> Vec<usize> {
                let mut d = vec![0; orders.len()];
                for i in (0..orders.len()).rev() {
                    d[i] = x % orders[i];
                    x /= orders[i];
                }
                d
            };
            FinSemigroup::from_fn(name, order, |a, b| {
                let (da, db) = (digits(a), digits(b));
                parts
                    .iter()
                    .zip(da.iter().zip(&db))
                    .zip(&orders)
                    .fold(0, |acc, ((p, (&x, &y)), &o)| acc * o + p.mul(x, y))
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> FinSemigroup {
        build_family(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "cyclic:4",
            "dihedral:5",
            "symmetric:3",
            "alternating:4",
            "quaternion8",
            "dicyclic:3",
            "rightzero:3",
            "leftzero:2",
            "null:3",
            "transformation:3",
            "product:cyclic:2,cyclic:3",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            assert_eq!(build_family(&spec).unwrap().name(), s);
        }
        assert_eq!("right_zero:3".parse::<FamilySpec>().unwrap(), FamilySpec::RightZero(3));
    }

    #[test]
    fn bad_specs() {
        assert!(matches!("klein:4".parse::<FamilySpec>(), Err(Error::UnknownFamily(_))));
        assert!(matches!("cyclic".parse::<FamilySpec>(), Err(Error::UnknownFamily(_))));
        assert!(matches!("cyclic:0".parse::<FamilySpec>(), Err(Error::UnknownFamily(_))));
        assert!(matches!(
            "product:cyclic:2,product:cyclic:2".parse::<FamilySpec>(),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(
            build_family(&FamilySpec::Symmetric(5)),
            Err(Error::SizeLimitExceeded(_))
        ));
        assert!(matches!(
            build_family(&FamilySpec::FullTransformation(4)),
            Err(Error::SizeLimitExceeded(_))
        ));
        assert!(matches!(
            build_family(&FamilySpec::Cyclic(65)),
            Err(Error::SizeLimitExceeded(_))
        ));
    }

    #[test]
    fn orders_and_flags() {
        let cases = [
            ("cyclic:4", 4, true),
            ("dihedral:4", 8, true),
            ("symmetric:4", 24, true),
            ("alternating:4", 12, true),
            ("quaternion8", 8, true),
            ("dicyclic:3", 12, true),
            ("rightzero:3", 3, false),
            ("leftzero:3", 3, false),
            ("null:3", 3, false),
            ("transformation:3", 27, false),
            ("product:cyclic:2,dihedral:3", 12, true),
        ];
        for (s, order, group) in cases {
            let g = build(s);
            assert_eq!(g.order(), order, "{s}");
            assert_eq!(g.is_group(), group, "{s}");
        }
        assert!(build("transformation:3").identity().is_some());
        assert_eq!(build("cyclic:4").identity(), Some(0));
        assert_eq!(build("rightzero:3").rows(), vec![vec![0, 1, 2]; 3]);
    }

    #[test]
    fn product_z2_z3_is_z6_under_crt() {
        let p = build("product:cyclic:2,cyclic:3");
        let z6 = build("cyclic:6");
        // (a, b) at index 3a + b maps to the x with x ≡ a (mod 2), x ≡ b (mod 3).
        let crt = |idx: usize| (0..6).find(|x| x % 2 == idx / 3 && x % 3 == idx % 3).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(crt(p.mul(a, b)), z6.mul(crt(a), crt(b)));
            }
        }
    }

    #[test]
    fn dicyclic_two_is_quaternion() {
        let dic2 = build("dicyclic:2");
        let q8 = build("quaternion8");
        // Both have a unique involution and six elements of order 4.
        let order_of = |g: &FinSemigroup, x: usize| {
            let e = g.identity().unwrap();
            let mut y = x;
            let mut k = 1;
            while y != e {
                y = g.mul(y, x);
                k += 1;
            }
            k
        };
        let mut a: Vec<_> = (0..8).map(|x| order_of(&dic2, x)).collect();
        let mut b: Vec<_> = (0..8).map(|x| order_of(&q8, x)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(a, vec![1, 2, 4, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn dihedral_relations() {
        let n = 5;
        let d = build("dihedral:5");
        let (r, s) = (1, n);
        assert_eq!(d.mul(s, s), 0);
        // s r s = r⁻¹
        assert_eq!(d.mul(d.mul(s, r), s), n - 1);
        assert!(d.mul(r, s) != d.mul(s, r));
    }
}
