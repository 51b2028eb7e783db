//! Ambient groups, elements, multisets and point sets.
//!
//! Three kinds of ambient structure are supported:
//!
//! - `Cyclic { n }`: the residues `0..n` under addition mod `n`;
//! - `Interval { n }`: the integers `1..=n`, with sums and differences taken
//!   in the integers (no wraparound);
//! - `Table(..)`: a finite group given by its full multiplication table.
//!
//! The first two are abelian and use [`sum_multiset`]; table groups are
//! generally non-abelian and use [`word_product`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A group element, interpreted relative to a [`GroupCtx`].
///
/// Residue for cyclic groups, integer for intervals, row index for tables.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Element(pub i64);

impl Element {
    pub fn value(self) -> i64 {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for Element {
    fn from(v: i64) -> Self {
        Element(v)
    }
}

// ============================================================================
// Table groups
// ============================================================================

/// A finite group given by a validated multiplication table.
///
/// Elements are `0..order`. Construction checks that every row and column is
/// a permutation, that `identity` is a two-sided identity, and that the
/// product is associative (full triple loop).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableGroup {
    order: usize,
    identity: u32,
    mult: Vec<u32>,
    inverse: Vec<u32>,
}

impl TableGroup {
    /// Build a group from its rows: `table[a][b] = a * b`.
    pub fn new(table: &[Vec<u32>], identity: u32) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return domain("table group must have at least one element");
        }
        let mut mult = Vec::with_capacity(order * order);
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Domain(format!(
                    "row {a} has {} entries, expected {order}",
                    row.len()
                )));
            }
            mult.extend_from_slice(row);
        }
        Self::from_flat(order, mult, identity)
    }

    /// Build a group from a row-major flattened table.
    pub fn from_flat(order: usize, mult: Vec<u32>, identity: u32) -> Result<Self> {
        if order == 0 || mult.len() != order * order {
            return domain("table size does not match order");
        }
        if identity as usize >= order {
            return domain("identity index out of range");
        }
        if let Some(&bad) = mult.iter().find(|&&x| x as usize >= order) {
            return Err(Error::Domain(format!("table entry {bad} out of range")));
        }
        // Latin square
        let mut seen = vec![false; order];
        for a in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..order {
                let x = mult[a * order + b] as usize;
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Domain(format!("row {a} is not a permutation")));
                }
            }
        }
        for b in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..order {
                let x = mult[a * order + b] as usize;
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Domain(format!("column {b} is not a permutation")));
                }
            }
        }
        let e = identity as usize;
        for a in 0..order {
            if mult[e * order + a] as usize != a || mult[a * order + e] as usize != a {
                return Err(Error::Domain(format!(
                    "element {identity} does not act as identity on {a}"
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = mult[a * order + b] as usize;
                for c in 0..order {
                    let bc = mult[b * order + c] as usize;
                    if mult[ab * order + c] != mult[a * order + bc] {
                        return Err(Error::Domain(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            let row = &mult[a * order..(a + 1) * order];
            inverse[a] = row.iter().position(|&x| x == identity).expect("latin row") as u32;
        }
        Ok(TableGroup { order, identity, mult, inverse })
    }

    /// The cyclic group of order `n` as a table.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("cyclic group order must be positive");
        }
        let mult = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        Self::from_flat(n, mult, 0)
    }

    /// The symmetric group on `n` points; permutations in lexicographic order,
    /// composed as `(a * b)(x) = a(b(x))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 6 {
            return domain("symmetric group supported for 1 <= n <= 6");
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            perms.push(p.clone());
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
            p.swap(i, j);
            p[i + 1..].reverse();
        }
        let index = |q: &[usize]| perms.iter().position(|r| r == q).expect("closed") as u32;
        let order = perms.len();
        let mut mult = Vec::with_capacity(order * order);
        for a in &perms {
            for b in &perms {
                let ab: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
                mult.push(index(&ab));
            }
        }
        Self::from_flat(order, mult, 0)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mult[a as usize * self.order + b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Rows of the multiplication table.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.mult.chunks(self.order).map(<[u32]>::to_vec).collect()
    }

    /// `G × H` with `(g, h)` stored at index `g * |H| + h`.
    pub fn direct_product(&self, other: &TableGroup) -> Result<TableGroup> {
        let (n, m) = (self.order, other.order);
        let order = n * m;
        let mut mult = Vec::with_capacity(order * order);
        for x in 0..order {
            let (g1, h1) = ((x / m) as u32, (x % m) as u32);
            for y in 0..order {
                let (g2, h2) = ((y / m) as u32, (y % m) as u32);
                let g = self.mul(g1, g2) as usize;
                let h = other.mul(h1, h2) as usize;
                mult.push((g * m + h) as u32);
            }
        }
        let identity = self.identity as usize * m + other.identity as usize;
        Self::from_flat(order, mult, identity as u32)
    }

    /// Power `a^e` by repeated multiplication.
    pub fn pow(&self, a: u32, e: usize) -> u32 {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }
}

// ============================================================================
// Group contexts
// ============================================================================

/// The ambient structure a point set lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupCtx {
    Cyclic { n: u64 },
    Interval { n: u64 },
    Table(Arc<TableGroup>),
}

impl GroupCtx {
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return domain("cyclic modulus must be positive");
        }
        Ok(GroupCtx::Cyclic { n })
    }

    pub fn interval(n: u64) -> Result<Self> {
        if n == 0 {
            return domain("interval bound must be positive");
        }
        Ok(GroupCtx::Interval { n })
    }

    pub fn table(group: TableGroup) -> Self {
        GroupCtx::Table(Arc::new(group))
    }

    pub fn is_abelian_kind(&self) -> bool {
        !matches!(self, GroupCtx::Table(_))
    }

    /// `N` for cyclic and interval contexts, the order for tables.
    pub fn size(&self) -> u64 {
        match self {
            GroupCtx::Cyclic { n } | GroupCtx::Interval { n } => *n,
            GroupCtx::Table(g) => g.order() as u64,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GroupCtx::Cyclic { .. } => "cyclic",
            GroupCtx::Interval { .. } => "interval",
            GroupCtx::Table(_) => "table",
        }
    }

    pub fn contains(&self, e: Element) -> bool {
        let v = e.0;
        match self {
            GroupCtx::Cyclic { n } => v >= 0 && (v as u64) < *n,
            GroupCtx::Interval { n } => v >= 1 && (v as u64) <= *n,
            GroupCtx::Table(g) => v >= 0 && (v as usize) < g.order(),
        }
    }

    pub fn check(&self, e: Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::Domain(format!("element {e} is not valid in {self}")))
        }
    }

    /// Every element of the context, ascending.
    pub fn all_elements(&self) -> Vec<Element> {
        match self {
            GroupCtx::Cyclic { n } => (0..*n as i64).map(Element).collect(),
            GroupCtx::Interval { n } => (1..=*n as i64).map(Element).collect(),
            GroupCtx::Table(g) => (0..g.order() as i64).map(Element).collect(),
        }
    }

    /// Reduce an integer combination of elements into the value space of the
    /// context: mod `N` for cyclic groups, unchanged for intervals.
    #[inline]
    pub fn reduce(&self, v: i64) -> i64 {
        match self {
            GroupCtx::Cyclic { n } => v.rem_euclid(*n as i64),
            _ => v,
        }
    }

    pub fn table_group(&self) -> Option<&TableGroup> {
        match self {
            GroupCtx::Table(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for GroupCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupCtx::Cyclic { n } => write!(f, "Z_{n}"),
            GroupCtx::Interval { n } => write!(f, "[1, {n}]"),
            GroupCtx::Table(g) => write!(f, "table group of order {}", g.order()),
        }
    }
}

// ============================================================================
// Multisets and point sets
// ============================================================================

/// A sorted multiset of `k >= 1` elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KMultiset(Vec<Element>);

impl KMultiset {
    pub fn new(mut elements: Vec<Element>) -> Result<Self> {
        if elements.is_empty() {
            return domain("multiset must have at least one element");
        }
        elements.sort_unstable();
        Ok(KMultiset(elements))
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when no element repeats.
    pub fn is_distinct(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// True when the two multisets share at least one element value.
    pub fn meets(&self, other: &KMultiset) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

impl fmt::Display for KMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A finite set of distinct elements in an ambient context, stored ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    ctx: GroupCtx,
    elements: Vec<Element>,
}

impl PointSet {
    /// Build a set; input order is irrelevant but duplicates are rejected.
    pub fn new<I, T>(ctx: GroupCtx, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<Element>,
    {
        let mut elements: Vec<Element> = elements.into_iter().map(Into::into).collect();
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("duplicate element {}", w[0])));
        }
        for &e in &elements {
            ctx.check(e)?;
        }
        Ok(PointSet { ctx, elements })
    }

    pub fn empty(ctx: GroupCtx) -> Self {
        PointSet { ctx, elements: Vec::new() }
    }

    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn values(&self) -> Vec<i64> {
        self.elements.iter().map(|e| e.0).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    /// The set with the given elements removed.
    pub fn without(&self, drop: &[Element]) -> PointSet {
        PointSet {
            ctx: self.ctx.clone(),
            elements: self.elements.iter().copied().filter(|e| !drop.contains(e)).collect(),
        }
    }

    /// The same elements in another context; every element must be valid there.
    pub fn reinterpret(&self, ctx: GroupCtx) -> Result<PointSet> {
        PointSet::new(ctx, self.elements.iter().copied())
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}} in {}", self.ctx)
    }
}

// ============================================================================
// Operations
// ============================================================================

/// Sum of a multiset: reduced mod `N` in a cyclic group, exact on an interval.
pub fn sum_multiset(ctx: &GroupCtx, m: &KMultiset) -> Result<i64> {
    if !ctx.is_abelian_kind() {
        return Err(Error::Unsupported(
            "sum_multiset needs an abelian context; use word_product".into(),
        ));
    }
    for &e in m.elements() {
        ctx.check(e)?;
    }
    Ok(ctx.reduce(m.elements().iter().map(|e| e.0).sum()))
}

/// Left-to-right product of a word in a table group. The empty word is the
/// identity.
pub fn word_product(ctx: &GroupCtx, word: &[Element]) -> Result<Element> {
    let GroupCtx::Table(g) = ctx else {
        return Err(Error::Unsupported("word_product needs a table group".into()));
    };
    let mut acc = g.identity();
    for &e in word {
        ctx.check(e)?;
        acc = g.mul(acc, e.0 as u32);
    }
    Ok(Element(acc as i64))
}

/// Affine image `u·A + t`.
///
/// In `Z_N` the unit `u` must be coprime to `N`. On `[1, N]` only `u = 1`
/// (translation by `t`) and `u = -1` (reflection `a ↦ N + 1 - a`, then
/// translation by `t`) are allowed, and the image must stay inside `[1, N]`.
pub fn transform(a: &PointSet, t: i64, u: i64) -> Result<PointSet> {
    match *a.ctx() {
        GroupCtx::Cyclic { n } => {
            let n = n as i64;
            if gcd(u.rem_euclid(n), n) != 1 {
                return Err(Error::Domain(format!("{u} is not a unit mod {n}")));
            }
            PointSet::new(
                a.ctx().clone(),
                a.elements().iter().map(|e| Element((u * e.0 + t).rem_euclid(n))),
            )
        }
        GroupCtx::Interval { n } => {
            let n = n as i64;
            let image: Vec<i64> = match u {
                1 => a.elements().iter().map(|e| e.0 + t).collect(),
                -1 => a.elements().iter().map(|e| n + 1 - e.0 + t).collect(),
                _ => return Err(Error::Domain(format!("{u} is not ±1"))),
            };
            if let Some(bad) = image.iter().find(|&&v| v < 1 || v > n) {
                return Err(Error::Range(format!("image {bad} leaves [1, {n}]")));
            }
            PointSet::new(a.ctx().clone(), image)
        }
        GroupCtx::Table(_) => Err(Error::Unsupported("transform needs an abelian context".into())),
    }
}

pub(crate) fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Advance a nondecreasing index vector over `0..n` to its lexicographic
/// successor. Returns `false` after the last one.
pub(crate) fn next_multiset(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] + 1 < n) else {
        return false;
    };
    let v = idx[i] + 1;
    idx[i..].iter_mut().for_each(|x| *x = v);
    true
}

/// Advance an index tuple over `0..n` (any order) to its lexicographic
/// successor.
pub(crate) fn next_tuple(idx: &mut [usize], n: usize) -> bool {
    for i in (0..idx.len()).rev() {
        if idx[i] + 1 < n {
            idx[i] += 1;
            idx[i + 1..].iter_mut().for_each(|x| *x = 0);
            return true;
        }
    }
    false
}

/// Iterator over the `k`-multisets of a point set in canonical
/// (lexicographic) order.
#[derive(Clone, Debug)]
pub struct KMultisets<'a> {
    elements: &'a [Element],
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for KMultisets<'_> {
    type Item = KMultiset;

    fn next(&mut self) -> Option<KMultiset> {
        if self.done {
            return None;
        }
        let m = KMultiset(self.idx.iter().map(|&i| self.elements[i]).collect());
        self.done = !next_multiset(&mut self.idx, self.elements.len());
        Some(m)
    }
}

/// All `k`-multisets of `a`, each exactly once: `C(|A| + k - 1, k)` of them.
pub fn enumerate_k_multisets(a: &PointSet, k: usize) -> Result<KMultisets<'_>> {
    if k < 1 {
        return domain("k must be at least 1");
    }
    Ok(KMultisets { elements: a.elements(), idx: vec![0; k], done: a.is_empty() })
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
