//! Representation functions and same-sum decompositions.
//!
//! All counts are exact and come from direct enumeration. In a cyclic
//! context keys are residues in `[0, N)`; in an interval they are plain
//! integers and may be negative (differences, `a - b + c`, ...).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::group::{Element, PointSet};

/// Which representation function a profile holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "j", rename_all = "snake_case")]
pub enum RepKind {
    /// `σ_j(n)`: ordered `j`-tuples from `A` summing to `n`.
    Sigma(usize),
    /// `δ(n)`: ordered pairs `(a, b)` with `a - b = n`.
    Delta,
    /// `r₂(n)`: 2-subsets `{a, b}` with `a + b = n`.
    R2,
    /// `({a, c}, b)` with `n = a - b + c` and `b ∉ {a, c}`.
    F3,
    /// For `c ∈ A`: solutions `c = x - y + z` counted by `F3` with `y ≠ c`.
    G1,
    /// For `c ∈ A`: solutions `c = x - y + z` counted by `F3` with `y = c`.
    G2,
    /// Ordered pairs of disjoint 2-subsets with `a₁ + a₂ - b₁ - b₂ = n`.
    F4,
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepKind::Sigma(j) => write!(f, "sigma_{j}"),
            RepKind::Delta => f.write_str("delta"),
            RepKind::R2 => f.write_str("r2"),
            RepKind::F3 => f.write_str("f3"),
            RepKind::G1 => f.write_str("g1"),
            RepKind::G2 => f.write_str("g2"),
            RepKind::F4 => f.write_str("f4"),
        }
    }
}

impl FromStr for RepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        if let Some(j) = s.strip_prefix("sigma_").or_else(|| s.strip_prefix("sigma")) {
            let j: usize =
                j.parse().map_err(|_| Error::Domain(format!("bad sigma arity in {s:?}")))?;
            return Ok(RepKind::Sigma(j));
        }
        Ok(match s.as_str() {
            "delta" => RepKind::Delta,
            "r2" => RepKind::R2,
            "f3" => RepKind::F3,
            "g1" => RepKind::G1,
            "g2" => RepKind::G2,
            "f4" => RepKind::F4,
            _ => return Err(Error::Domain(format!("unknown representation function {s:?}"))),
        })
    }
}

/// A representation function as a sparse map from key to count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepProfile {
    pub kind: RepKind,
    pub values: BTreeMap<i64, u64>,
}

impl RepProfile {
    fn from_counts(kind: RepKind, mut values: BTreeMap<i64, u64>) -> Self {
        values.retain(|_, c| *c > 0);
        RepProfile { kind, values }
    }

    pub fn get(&self, key: i64) -> u64 {
        self.values.get(&key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.values.values().map(|&c| c as u128).sum()
    }
}

fn bump(map: &mut BTreeMap<i64, u64>, key: i64) {
    *map.entry(key).or_insert(0) += 1;
}

fn two_subsets(vals: &[i64]) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(vals.len() * vals.len().saturating_sub(1) / 2);
    for (i, &a) in vals.iter().enumerate() {
        for &b in &vals[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// Compute a representation function of `a`.
pub fn rep_profile(a: &PointSet, kind: RepKind) -> Result<RepProfile> {
    let ctx = a.ctx();
    if !ctx.is_abelian_kind() {
        return Err(Error::Unsupported("representation functions need an abelian context".into()));
    }
    if a.is_empty() {
        return domain("representation functions need a nonempty set");
    }
    let vals = a.values();
    let red = |v: i64| ctx.reduce(v);
    let mut out = BTreeMap::new();
    match kind {
        RepKind::Sigma(j) => {
            if j == 0 {
                return domain("sigma_j needs j >= 1");
            }
            let mut cur: BTreeMap<i64, u64> = BTreeMap::from([(0, 1)]);
            for _ in 0..j {
                let mut next = BTreeMap::new();
                for (&s, &c) in &cur {
                    for &x in &vals {
                        *next.entry(red(s + x)).or_insert(0) += c;
                    }
                }
                cur = next;
            }
            out = cur;
        }
        RepKind::Delta => {
            for &x in &vals {
                for &y in &vals {
                    bump(&mut out, red(x - y));
                }
            }
        }
        RepKind::R2 => {
            for (x, y) in two_subsets(&vals) {
                bump(&mut out, red(x + y));
            }
        }
        RepKind::F3 | RepKind::G1 | RepKind::G2 => {
            for (x, z) in two_subsets(&vals) {
                for &y in &vals {
                    if y == x || y == z {
                        continue;
                    }
                    let n = red(x - y + z);
                    let keep = match kind {
                        RepKind::F3 => true,
                        RepKind::G1 => n != y && a.contains(Element(n)),
                        _ => n == y,
                    };
                    if keep {
                        bump(&mut out, n);
                    }
                }
            }
        }
        RepKind::F4 => {
            let pairs = two_subsets(&vals);
            for &(a1, a2) in &pairs {
                for &(b1, b2) in &pairs {
                    if a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2 {
                        continue;
                    }
                    bump(&mut out, red(a1 + a2 - b1 - b2));
                }
            }
        }
    }
    Ok(RepProfile::from_counts(kind, out))
}

/// Exact moments of a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Moments {
    pub sum: u128,
    pub sum_of_squares: u128,
    pub sum_f_fminus1: u128,
    pub max: u64,
}

pub fn sum_square_stats(profile: &RepProfile) -> Moments {
    let mut m = Moments { sum: 0, sum_of_squares: 0, sum_f_fminus1: 0, max: 0 };
    for &c in profile.values.values() {
        let c128 = c as u128;
        m.sum += c128;
        m.sum_of_squares += c128 * c128;
        m.sum_f_fminus1 += c128 * c128.saturating_sub(1);
        m.max = m.max.max(c);
    }
    m
}

/// Three-term progressions `p + q = 2r` in `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApCounts {
    /// Solutions with `p = q`: the constant progressions, plus `2a = 2(a + N/2)`
    /// in even cyclic groups.
    pub trivial: u64,
    /// Unordered outer pairs `{p, q}` with `p ≠ q` and a center `r`.
    pub nontrivial: u64,
}

pub fn count_3aps(a: &PointSet) -> Result<ApCounts> {
    let ctx = a.ctx();
    if !ctx.is_abelian_kind() {
        return Err(Error::Unsupported("3-term progressions need an abelian context".into()));
    }
    let vals = a.values();
    let mut counts = ApCounts { trivial: 0, nontrivial: 0 };
    for &p in &vals {
        for &r in &vals {
            if ctx.reduce(2 * p) == ctx.reduce(2 * r) {
                counts.trivial += 1;
            }
        }
    }
    for (p, q) in two_subsets(&vals) {
        let s = ctx.reduce(p + q);
        counts.nontrivial += vals.iter().filter(|&&r| ctx.reduce(2 * r) == s).count() as u64;
    }
    Ok(counts)
}

/// Which same-sum decomposition to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Sums with at least two (necessarily disjoint) 2-subsets.
    S,
    /// Every sum of a 2-subset, singletons included.
    P,
}

/// One sum value `d` and the 2-subsets of `A` adding up to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SameSumEntry {
    pub sum: i64,
    pub pairs: Vec<(Element, Element)>,
    /// Union of the pairs, sorted.
    pub support: Vec<Element>,
}

impl SameSumEntry {
    pub fn multiplicity(&self) -> usize {
        self.pairs.len()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.support.binary_search(&e).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDecomp {
    pub variant: Variant,
    /// Entries ordered by sum value.
    pub entries: Vec<SameSumEntry>,
    /// Number of entries with multiplicity exactly 2.
    pub m: usize,
    /// Total number of entries.
    pub big_m: usize,
    /// Number of entries with multiplicity exactly 1, 2, 3, 4.
    pub exact_counts: [usize; 4],
}

impl StructureDecomp {
    pub fn sum_s_sminus1(&self) -> u128 {
        self.entries
            .iter()
            .map(|e| {
                let s = e.multiplicity() as u128;
                s * (s - 1)
            })
            .sum()
    }
}

pub fn decompose_same_sum(a: &PointSet, variant: Variant) -> Result<StructureDecomp> {
    let ctx = a.ctx();
    if !ctx.is_abelian_kind() {
        return Err(Error::Unsupported("same-sum decomposition needs an abelian context".into()));
    }
    let mut buckets: BTreeMap<i64, Vec<(Element, Element)>> = BTreeMap::new();
    for (x, y) in two_subsets(&a.values()) {
        buckets.entry(ctx.reduce(x + y)).or_default().push((Element(x), Element(y)));
    }
    let min = match variant {
        Variant::S => 2,
        Variant::P => 1,
    };
    let entries: Vec<SameSumEntry> = buckets
        .into_iter()
        .filter(|(_, p)| p.len() >= min)
        .map(|(sum, pairs)| {
            let mut support: Vec<Element> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
            support.sort_unstable();
            SameSumEntry { sum, pairs, support }
        })
        .collect();
    let mut exact_counts = [0usize; 4];
    for e in &entries {
        if (1..=4).contains(&e.multiplicity()) {
            exact_counts[e.multiplicity() - 1] += 1;
        }
    }
    Ok(StructureDecomp {
        variant,
        m: exact_counts[1],
        big_m: entries.len(),
        entries,
        exact_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupCtx;

    fn iv(n: u64, v: &[i64]) -> PointSet {
        PointSet::new(GroupCtx::interval(n).unwrap(), v.iter().copied()).unwrap()
    }

    fn map(v: &[(i64, u64)]) -> BTreeMap<i64, u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn sigma_two_of_a_pair() {
        let p = rep_profile(&iv(2, &[1, 2]), RepKind::Sigma(2)).unwrap();
        assert_eq!(p.values, map(&[(2, 1), (3, 2), (4, 1)]));
    }

    #[test]
    fn f3_of_three_consecutive() {
        let p = rep_profile(&iv(3, &[1, 2, 3]), RepKind::F3).unwrap();
        assert_eq!(p.values, map(&[(0, 1), (2, 1), (4, 1)]));
        assert_eq!(p.total(), 3);
    }

    #[test]
    fn moments() {
        let p = RepProfile::from_counts(RepKind::R2, map(&[(0, 1), (1, 2), (2, 1)]));
        let m = sum_square_stats(&p);
        assert_eq!((m.sum, m.sum_of_squares, m.sum_f_fminus1, m.max), (4, 6, 2, 2));
    }

    #[test]
    fn progressions() {
        assert_eq!(count_3aps(&iv(3, &[1, 2, 3])).unwrap().nontrivial, 1);
        assert_eq!(count_3aps(&iv(8, &[1, 2, 4, 8])).unwrap().nontrivial, 0);
        let z = PointSet::new(GroupCtx::cyclic(14).unwrap(), [0, 1, 7, 8]).unwrap();
        assert_eq!(count_3aps(&z).unwrap().trivial, 8);
    }

    #[test]
    fn s_decomposition() {
        let d = decompose_same_sum(&iv(4, &[1, 2, 3, 4]), Variant::S).unwrap();
        assert_eq!((d.m, d.big_m), (1, 1));
        assert_eq!(d.entries[0].sum, 5);
        assert_eq!(
            d.entries[0].pairs,
            vec![(Element(1), Element(4)), (Element(2), Element(3))]
        );
        let sidon = decompose_same_sum(&iv(8, &[1, 2, 4, 8]), Variant::S).unwrap();
        assert_eq!(sidon.big_m, 0);
        let z = PointSet::new(GroupCtx::cyclic(14).unwrap(), [0, 1, 7, 8]).unwrap();
        let dz = decompose_same_sum(&z, Variant::S).unwrap();
        assert!(dz.entries.iter().any(|e| e.sum == 8 && e.multiplicity() == 2));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("sigma_3".parse::<RepKind>().unwrap(), RepKind::Sigma(3));
        assert_eq!("f4".parse::<RepKind>().unwrap(), RepKind::F4);
        assert!("f5".parse::<RepKind>().is_err());
        assert!(rep_profile(&iv(3, &[1]), RepKind::Sigma(0)).is_err());
    }
}
