//! Decision procedures for the B_k, B_k⁺ and B_k* properties.
//!
//! For abelian contexts a set `A` is tested by bucketing its `k`-multisets by
//! sum:
//!
//! - **B**: every bucket holds exactly one multiset;
//! - **B⁺** (`Plus`): any two multisets in a bucket share an element value;
//! - **B*** (`Star`): no bucket holds two multisets that each consist of `k`
//!   distinct elements and have disjoint supports.
//!
//! The defining equations quantify over ordered tuples but are closed under
//! permuting either side, so the multiset reduction is exact. The functions
//! [`naive_verify`] and [`naive_verify_word`] decide the same properties
//! straight from the ordered-tuple definitions and serve as oracles.
//!
//! For table groups the `k`-letter words are bucketed by product; **B**
//! needs every bucket to be a single word and **B⁺** needs any two words in a
//! bucket to agree in some position.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::group::{
    binomial, enumerate_k_multisets, next_multiset, next_tuple, word_product, Element, GroupCtx,
    KMultiset, PointSet,
};

/// Which Sidon-type property is being tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    B,
    Plus,
    Star,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::B, Flavor::Plus, Flavor::Star];

    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::B => "b",
            Flavor::Plus => "plus",
            Flavor::Star => "star",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b" => Ok(Flavor::B),
            "plus" | "b+" | "bplus" => Ok(Flavor::Plus),
            "star" | "b*" | "bstar" => Ok(Flavor::Star),
            _ => Err(Error::Domain(format!("unknown flavor {s:?}"))),
        }
    }
}

/// Evidence that a property fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    /// Two `k`-multisets with equal sums, in canonical (sorted) order.
    Multisets { left: KMultiset, right: KMultiset },
    /// Two `k`-letter words with equal products.
    Words { left: Vec<Element>, right: Vec<Element> },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[Element]| {
            w.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
        };
        match self {
            Witness::Multisets { left, right } => write!(f, "{left} ~ {right}"),
            Witness::Words { left, right } => write!(f, "({}) ~ ({})", word(left), word(right)),
        }
    }
}

/// Outcome of a verification: `holds == false` always carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { holds: true, witness: None }
    }

    pub fn fail(w: Witness) -> Self {
        Verdict { holds: false, witness: Some(w) }
    }

    /// Re-check the witness independently of how it was found: equal sums
    /// (or products) and the flavor's intersection condition violated.
    pub fn witness_is_valid(&self, ctx: &GroupCtx, flavor: Flavor) -> bool {
        match &self.witness {
            None => self.holds,
            Some(Witness::Multisets { left, right }) => {
                let (Ok(s), Ok(t)) =
                    (crate::group::sum_multiset(ctx, left), crate::group::sum_multiset(ctx, right))
                else {
                    return false;
                };
                !self.holds && s == t && violates(flavor, left, right)
            }
            Some(Witness::Words { left, right }) => {
                let (Ok(s), Ok(t)) = (word_product(ctx, left), word_product(ctx, right)) else {
                    return false;
                };
                let agree = left.iter().zip(right).any(|(a, b)| a == b);
                !self.holds
                    && s == t
                    && match flavor {
                        Flavor::B => left != right,
                        Flavor::Plus => !agree,
                        Flavor::Star => false,
                    }
            }
        }
    }
}

fn violates(flavor: Flavor, a: &KMultiset, b: &KMultiset) -> bool {
    match flavor {
        Flavor::B => a != b,
        Flavor::Plus => !a.meets(b),
        Flavor::Star => a.is_distinct() && b.is_distinct() && !a.meets(b),
    }
}

/// Resource caps on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of `k`-multisets (abelian) to enumerate.
    pub max_multisets: u128,
    /// Maximum number of `k`-letter words (table groups) to enumerate.
    pub max_words: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_multisets: 20_000_000, max_words: 20_000_000 }
    }
}

// ============================================================================
// Bucketed verifier
// ============================================================================

/// The `k`-multisets of a set grouped by sum; buckets ordered by sum value,
/// multisets within a bucket in canonical enumeration order.
#[derive(Clone, Debug)]
pub struct SumBucketTable {
    k: usize,
    buckets: BTreeMap<i64, Vec<KMultiset>>,
}

impl SumBucketTable {
    pub fn build(a: &PointSet, k: usize, caps: &Caps) -> Result<Self> {
        let ctx = a.ctx();
        if !ctx.is_abelian_kind() {
            return Err(Error::Unsupported("sum buckets need an abelian context".into()));
        }
        let count = binomial((a.len() + k).saturating_sub(1) as u64, k as u64);
        if count > caps.max_multisets {
            return Err(Error::Resource(format!("{count} multisets exceed the cap")));
        }
        let mut buckets: BTreeMap<i64, Vec<KMultiset>> = BTreeMap::new();
        for m in enumerate_k_multisets(a, k)? {
            let s = ctx.reduce(m.elements().iter().map(|e| e.0).sum());
            buckets.entry(s).or_default().push(m);
        }
        Ok(SumBucketTable { k, buckets })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn buckets(&self) -> &BTreeMap<i64, Vec<KMultiset>> {
        &self.buckets
    }

    /// First violating pair: lowest violating sum, then first pair in
    /// enumeration order.
    pub fn first_violation(&self, flavor: Flavor) -> Option<Witness> {
        for bucket in self.buckets.values() {
            for (i, x) in bucket.iter().enumerate() {
                if let Some(y) = bucket[i + 1..].iter().find(|y| violates(flavor, x, y)) {
                    return Some(Witness::Multisets { left: x.clone(), right: y.clone() });
                }
            }
        }
        None
    }
}

/// Decide whether `a` is a B_k / B_k⁺ / B_k* set in its (abelian) context.
pub fn verify(a: &PointSet, k: usize, flavor: Flavor) -> Result<Verdict> {
    verify_with_caps(a, k, flavor, &Caps::default())
}

pub fn verify_with_caps(a: &PointSet, k: usize, flavor: Flavor, caps: &Caps) -> Result<Verdict> {
    if k < 2 {
        return domain("k must be at least 2");
    }
    if !a.ctx().is_abelian_kind() {
        return Err(Error::Unsupported("use verify_word for table groups".into()));
    }
    let table = SumBucketTable::build(a, k, caps)?;
    Ok(match table.first_violation(flavor) {
        None => Verdict::pass(),
        Some(w) => Verdict::fail(w),
    })
}

/// Decide the non-abelian B_k / B_k⁺ property of `a` inside a table group.
pub fn verify_word(a: &PointSet, k: usize, flavor: Flavor) -> Result<Verdict> {
    verify_word_with_caps(a, k, flavor, &Caps::default())
}

pub fn verify_word_with_caps(
    a: &PointSet,
    k: usize,
    flavor: Flavor,
    caps: &Caps,
) -> Result<Verdict> {
    let GroupCtx::Table(g) = a.ctx() else {
        return Err(Error::Unsupported("verify_word needs a table group".into()));
    };
    if k < 2 {
        return domain("k must be at least 2");
    }
    if flavor == Flavor::Star {
        return Err(Error::Unsupported("B_k* is not defined for non-abelian groups".into()));
    }
    let n = a.len();
    if n == 0 {
        return Ok(Verdict::pass());
    }
    let count = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > caps.max_words {
        return Err(Error::Resource(format!("{count} words exceed the cap")));
    }
    let el = a.elements();
    let mut buckets: BTreeMap<u32, Vec<Vec<usize>>> = BTreeMap::new();
    let mut idx = vec![0usize; k];
    loop {
        let prod = idx.iter().fold(g.identity(), |acc, &i| g.mul(acc, el[i].0 as u32));
        buckets.entry(prod).or_default().push(idx.clone());
        if !next_tuple(&mut idx, n) {
            break;
        }
    }
    let to_word = |w: &[usize]| w.iter().map(|&i| el[i]).collect::<Vec<_>>();
    for bucket in buckets.values() {
        for (i, x) in bucket.iter().enumerate() {
            let bad = bucket[i + 1..].iter().find(|y| match flavor {
                Flavor::B => true,
                _ => x.iter().zip(y.iter()).all(|(p, q)| p != q),
            });
            if let Some(y) = bad {
                return Ok(Verdict::fail(Witness::Words { left: to_word(x), right: to_word(y) }));
            }
        }
    }
    Ok(Verdict::pass())
}

// ============================================================================
// Ordered-tuple oracles
// ============================================================================

/// Decide the property directly from the ordered-tuple definition: for every
/// pair of ordered `k`-tuples with equal sums, check that the second is a
/// permutation of the first (B), that some `a_i = b_j` (B⁺), or that the
/// `2k` entries are not all distinct (B*).
///
/// Cost is dominated by `|A|^k` tuple generation; meant for small inputs.
pub fn naive_verify(a: &PointSet, k: usize, flavor: Flavor) -> Result<bool> {
    if k < 2 {
        return domain("k must be at least 2");
    }
    let ctx = a.ctx();
    if !ctx.is_abelian_kind() {
        return Err(Error::Unsupported("naive_verify needs an abelian context".into()));
    }
    let vals = a.values();
    Ok(naive_values(ctx, &vals, k, flavor))
}

pub(crate) fn naive_values(ctx: &GroupCtx, vals: &[i64], k: usize, flavor: Flavor) -> bool {
    let n = vals.len();
    if n == 0 {
        return true;
    }
    let mut seen: HashMap<i64, Vec<Vec<i64>>> = HashMap::new();
    let mut idx = vec![0usize; k];
    loop {
        let t: Vec<i64> = idx.iter().map(|&i| vals[i]).collect();
        let s = ctx.reduce(t.iter().sum());
        let prior = seen.entry(s).or_default();
        if prior.iter().any(|u| !tuple_pair_ok(flavor, &t, u)) {
            return false;
        }
        prior.push(t);
        if !next_tuple(&mut idx, n) {
            return true;
        }
    }
}

fn tuple_pair_ok(flavor: Flavor, a: &[i64], b: &[i64]) -> bool {
    match flavor {
        Flavor::B => {
            let (mut x, mut y) = (a.to_vec(), b.to_vec());
            x.sort_unstable();
            y.sort_unstable();
            x == y
        }
        Flavor::Plus => a.iter().any(|x| b.contains(x)),
        Flavor::Star => {
            let mut all: Vec<i64> = a.iter().chain(b).copied().collect();
            all.sort_unstable();
            all.windows(2).any(|w| w[0] == w[1])
        }
    }
}

/// Non-abelian analogue of [`naive_verify`]: equal products must agree in
/// every position (B) or in some position (B⁺).
pub fn naive_verify_word(a: &PointSet, k: usize, flavor: Flavor) -> Result<bool> {
    if flavor == Flavor::Star {
        return Err(Error::Unsupported("B_k* is not defined for non-abelian groups".into()));
    }
    let ctx = a.ctx();
    let n = a.len();
    if n == 0 {
        return Ok(true);
    }
    let mut words: Vec<(Element, Vec<Element>)> = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let w: Vec<Element> = idx.iter().map(|&i| a.elements()[i]).collect();
        words.push((word_product(ctx, &w)?, w));
        if !next_tuple(&mut idx, n) {
            break;
        }
    }
    for (i, (p, x)) in words.iter().enumerate() {
        for (q, y) in &words[i + 1..] {
            if p == q {
                let ok = match flavor {
                    Flavor::B => x == y,
                    _ => x.iter().zip(y).any(|(s, t)| s == t),
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

// ============================================================================
// Incremental verifier
// ============================================================================

/// Largest `k` the incremental verifier supports.
pub const MAX_INCREMENTAL_K: usize = 8;
/// Largest set the incremental verifier supports.
pub const MAX_INCREMENTAL_LEN: usize = 128;

#[derive(Clone, Copy, Debug)]
struct Entry {
    idx: [u8; MAX_INCREMENTAL_K],
    support: u128,
    distinct: bool,
}

/// Verifier state for a set grown one element at a time in increasing
/// order, as in a depth-first search.
///
/// Only the multisets containing the new element are examined on each
/// push; [`pop`](Self::pop) undoes the most recent push.
#[derive(Clone, Debug)]
pub struct IncrementalVerifier {
    ctx: GroupCtx,
    k: usize,
    flavor: Flavor,
    elements: Vec<i64>,
    offset: i64,
    buckets: Vec<Vec<Entry>>,
    levels: Vec<Vec<usize>>,
}

impl IncrementalVerifier {
    pub fn new(ctx: &GroupCtx, k: usize, flavor: Flavor) -> Result<Self> {
        if !(2..=MAX_INCREMENTAL_K).contains(&k) {
            return domain(format!("incremental verification needs 2 <= k <= {MAX_INCREMENTAL_K}"));
        }
        let (offset, width) = match *ctx {
            GroupCtx::Cyclic { n } => (0, n as usize),
            GroupCtx::Interval { n } => (k as i64, k * (n as usize - 1) + 1),
            GroupCtx::Table(_) => {
                return Err(Error::Unsupported("incremental verification is abelian only".into()))
            }
        };
        Ok(IncrementalVerifier {
            ctx: ctx.clone(),
            k,
            flavor,
            elements: Vec::new(),
            offset,
            buckets: vec![Vec::new(); width],
            levels: Vec::new(),
        })
    }

    /// Build the state for an existing set; fails if the set does not have
    /// the property.
    pub fn from_set(a: &PointSet, k: usize, flavor: Flavor) -> Result<Self> {
        let mut v = Self::new(a.ctx(), k, flavor)?;
        for &e in a.elements() {
            let verdict = v.try_push(e)?;
            if !verdict.holds {
                return Err(Error::Precondition(format!(
                    "set fails {flavor} for k={k}: {}",
                    verdict.witness.expect("failing verdict has witness")
                )));
            }
        }
        Ok(v)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    /// The current set; sorted even if elements were inserted out of order.
    pub fn to_point_set(&self) -> PointSet {
        PointSet::new(self.ctx.clone(), self.elements.iter().copied()).expect("valid state")
    }

    fn slot(&self, sum: i64) -> usize {
        (self.ctx.reduce(sum) - self.offset) as usize
    }

    fn conflicts(&self, a: &Entry, b: &Entry) -> bool {
        match self.flavor {
            Flavor::B => true,
            Flavor::Plus => a.support & b.support == 0,
            Flavor::Star => a.distinct && b.distinct && a.support & b.support == 0,
        }
    }

    fn multiset_of(&self, e: &Entry, extra: Option<i64>) -> KMultiset {
        let vals = e.idx[..self.k].iter().map(|&i| {
            let i = i as usize;
            Element(if i < self.elements.len() { self.elements[i] } else { extra.expect("new") })
        });
        KMultiset::new(vals.collect()).expect("k >= 1")
    }

    /// Try to extend the set by `e`, which must exceed every current element.
    ///
    /// On success the element is committed and a passing verdict returned.
    /// On failure the state is left unchanged and the verdict carries a
    /// witness.
    pub fn try_push(&mut self, e: Element) -> Result<Verdict> {
        self.ctx.check(e)?;
        if let Some(&last) = self.elements.last() {
            if e.0 <= last {
                return domain(format!("{e} does not exceed the current maximum {last}"));
            }
        }
        self.extend(e)
    }

    /// Like [`try_push`](Self::try_push) but accepts elements in any order;
    /// the element must not already be present.
    pub fn try_insert(&mut self, e: Element) -> Result<Verdict> {
        self.ctx.check(e)?;
        if self.elements.contains(&e.0) {
            return domain(format!("{e} is already in the set"));
        }
        self.extend(e)
    }

    fn extend(&mut self, e: Element) -> Result<Verdict> {
        let n = self.elements.len();
        if n >= MAX_INCREMENTAL_LEN {
            return Err(Error::Resource(format!("set larger than {MAX_INCREMENTAL_LEN}")));
        }
        let k = self.k;
        let mut pushed: Vec<usize> = Vec::new();
        let mut failure: Option<(Entry, Entry)> = None;
        let new_bit = 1u128 << n;
        'outer: for copies in 1..=k {
            let r = k - copies;
            if r > 0 && n == 0 {
                continue;
            }
            let mut sub = vec![0usize; r];
            loop {
                let mut entry =
                    Entry { idx: [0; MAX_INCREMENTAL_K], support: new_bit, distinct: copies == 1 };
                let mut sum = copies as i64 * e.0;
                for (slot, &i) in sub.iter().enumerate() {
                    entry.idx[slot] = i as u8;
                    entry.support |= 1u128 << i;
                    sum += self.elements[i];
                }
                for slot in r..k {
                    entry.idx[slot] = n as u8;
                }
                if entry.distinct && sub.windows(2).any(|w| w[0] == w[1]) {
                    entry.distinct = false;
                }
                let s = self.slot(sum);
                if let Some(other) = self.buckets[s].iter().find(|o| self.conflicts(o, &entry)) {
                    failure = Some((*other, entry));
                    break 'outer;
                }
                self.buckets[s].push(entry);
                pushed.push(s);
                if r == 0 || !next_multiset(&mut sub, n) {
                    break;
                }
            }
        }
        if let Some((a, b)) = failure {
            for &s in pushed.iter().rev() {
                self.buckets[s].pop();
            }
            let (x, y) = (self.multiset_of(&a, Some(e.0)), self.multiset_of(&b, Some(e.0)));
            let (left, right) = if x <= y { (x, y) } else { (y, x) };
            return Ok(Verdict::fail(Witness::Multisets { left, right }));
        }
        self.elements.push(e.0);
        self.levels.push(pushed);
        Ok(Verdict::pass())
    }

    /// Remove the most recently pushed element.
    pub fn pop(&mut self) -> Option<Element> {
        let pushed = self.levels.pop()?;
        for &s in pushed.iter().rev() {
            self.buckets[s].pop();
        }
        self.elements.pop().map(Element)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::TableGroup;

    fn set(ctx: GroupCtx, v: &[i64]) -> PointSet {
        PointSet::new(ctx, v.iter().copied()).unwrap()
    }

    fn ms(v: &[i64]) -> KMultiset {
        KMultiset::new(v.iter().copied().map(Element).collect()).unwrap()
    }

    #[test]
    fn documented_verdicts() {
        let a = set(GroupCtx::cyclic(7).unwrap(), &[0, 1, 3]);
        assert!(verify(&a, 2, Flavor::B).unwrap().holds);

        let b = set(GroupCtx::interval(3).unwrap(), &[1, 2, 3]);
        let v = verify(&b, 2, Flavor::Plus).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::Multisets { left: ms(&[1, 3]), right: ms(&[2, 2]) })
        );
        assert!(v.witness_is_valid(b.ctx(), Flavor::Plus));
        assert!(verify(&b, 2, Flavor::Star).unwrap().holds);
        assert!(matches!(verify(&b, 1, Flavor::B), Err(Error::Domain(_))));
    }

    #[test]
    fn word_singletons_hold() {
        let g = GroupCtx::table(TableGroup::symmetric(3).unwrap());
        for e in 0..6 {
            let a = set(g.clone(), &[e]);
            for k in 2..5 {
                assert!(verify_word(&a, k, Flavor::B).unwrap().holds);
            }
        }
        assert!(verify_word(&set(g, &[1]), 2, Flavor::Star).is_err());
    }

    #[test]
    fn incremental_matches_documented_case() {
        let ctx = GroupCtx::interval(3).unwrap();
        let mut v = IncrementalVerifier::new(&ctx, 2, Flavor::Plus).unwrap();
        assert!(v.try_push(Element(1)).unwrap().holds);
        assert!(v.try_push(Element(2)).unwrap().holds);
        let verdict = v.try_push(Element(3)).unwrap();
        assert_eq!(
            verdict.witness,
            Some(Witness::Multisets { left: ms(&[1, 3]), right: ms(&[2, 2]) })
        );
        assert_eq!(v.elements(), &[1, 2]);
        assert!(matches!(v.try_push(Element(2)), Err(Error::Domain(_))));
        assert_eq!(v.pop(), Some(Element(2)));
        assert!(v.try_push(Element(3)).unwrap().holds);
    }

    #[test]
    fn incremental_empty_extension_holds() {
        for flavor in Flavor::ALL {
            for ctx in [GroupCtx::cyclic(9).unwrap(), GroupCtx::interval(9).unwrap()] {
                let mut v = IncrementalVerifier::new(&ctx, 3, flavor).unwrap();
                assert!(v.try_push(Element(5)).unwrap().holds);
            }
        }
    }

    #[test]
    fn naive_oracle_agrees_on_small_cases() {
        let ctx = GroupCtx::interval(3).unwrap();
        let b = set(ctx, &[1, 2, 3]);
        assert!(!naive_verify(&b, 2, Flavor::Plus).unwrap());
        assert!(naive_verify(&b, 2, Flavor::Star).unwrap());
        assert!(!naive_verify(&b, 2, Flavor::B).unwrap());
    }

    #[test]
    fn flavor_parsing() {
        assert_eq!("plus".parse::<Flavor>().unwrap(), Flavor::Plus);
        assert_eq!("B".parse::<Flavor>().unwrap(), Flavor::B);
        assert!("nope".parse::<Flavor>().is_err());
    }
}
