//! Explicit constructions: Bose–Chowla B_k-sets, the doubling that turns a
//! B_k-set into a B_k⁺-set for odd `k`, the order-12 matrix group `H` with
//! its B₄⁺ pair, direct products, and the halving step used by the upper
//! bound recursion.

use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::field::{find_primitive, is_prime, DlogTable, FieldCtx, FieldElem};
use crate::group::{Element, GroupCtx, PointSet, TableGroup};
use crate::verify::{verify, verify_word, Flavor, Verdict};

/// Default cap on the modulus `q^k - 1` of a Bose–Chowla construction.
pub const DEFAULT_MODULUS_CAP: u64 = 1_000_000;

/// Bose–Chowla B_k-set of size `q = p^e` in `ℤ_{q^k - 1}`.
///
/// With `θ` the minimal primitive element of `GF(q^k)` (built over the
/// minimal irreducible polynomial of degree `e·k` over `GF(p)`), the set is
/// `{ log_θ(θ + a) : a ∈ GF(q) }`.
pub fn bose_chowla(p: u64, e: u32, k: u32) -> Result<PointSet> {
    bose_chowla_with_cap(p, e, k, DEFAULT_MODULUS_CAP)
}

pub fn bose_chowla_with_cap(p: u64, e: u32, k: u32, cap: u64) -> Result<PointSet> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    if e == 0 {
        return domain("e must be at least 1");
    }
    if k < 2 {
        return domain("k must be at least 2");
    }
    let order = (p as u128).checked_pow(e * k).filter(|&o| o <= u64::MAX as u128);
    let modulus = match order {
        Some(o) if o - 1 <= cap as u128 => (o - 1) as u64,
        _ => return Err(Error::Resource(format!("{p}^{} - 1 exceeds the cap {cap}", e * k))),
    };
    let field = FieldCtx::minimal(p, (e * k) as usize)?;
    let theta = find_primitive(&field)?;
    let logs = DlogTable::build(&field, &theta)?;
    let small = field.subfield(e as usize)?;
    let mut out = Vec::with_capacity(small.len());
    for a in &small {
        let shifted = field.add(&theta, a);
        out.push(logs.log(&field, &shifted)? as i64);
    }
    let set = PointSet::new(GroupCtx::cyclic(modulus)?, out)?;
    if set.len() as u64 != p.pow(e) {
        return Err(Error::Consistency("Bose–Chowla logarithms collided".into()));
    }
    Ok(set)
}

/// The field element `θ` used by [`bose_chowla`] together with its field,
/// for callers that want to inspect the construction.
pub fn bose_chowla_generator(p: u64, e: u32, k: u32) -> Result<(FieldCtx, FieldElem)> {
    let field = FieldCtx::minimal(p, (e * k) as usize)?;
    let theta = find_primitive(&field)?;
    Ok((field, theta))
}

/// `A⁺ = A ∪ (A + N)` inside `ℤ_{2N}`, a B_k⁺-set when `A` is a B_k-set in
/// `ℤ_N` and `k` is odd.
pub fn plus_doubling(a: &PointSet, k: usize) -> Result<PointSet> {
    let GroupCtx::Cyclic { n } = *a.ctx() else {
        return Err(Error::Unsupported("doubling needs a cyclic group".into()));
    };
    if k < 3 || k % 2 == 0 {
        return domain(format!("doubling needs odd k >= 3, got {k}"));
    }
    precondition(verify(a, k, Flavor::B)?, &format!("input is not a B_{k}-set"))?;
    let nn = n as i64;
    let vals = a.values();
    let doubled = vals.iter().copied().chain(vals.iter().map(|v| v + nn));
    PointSet::new(GroupCtx::cyclic(2 * n)?, doubled)
}

fn precondition(v: Verdict, what: &str) -> Result<()> {
    match v.witness {
        None => Ok(()),
        Some(w) => Err(Error::Precondition(format!("{what}: {w}"))),
    }
}

/// The group `H` of upper triangular matrices `[[x, y], [0, x⁻¹]]` over
/// `F₄` with the two distinguished elements `α` and `β`.
#[derive(Clone, Debug)]
pub struct HGroupHandle {
    pub group: Arc<TableGroup>,
    pub alpha: Element,
    pub beta: Element,
}

impl HGroupHandle {
    pub fn ctx(&self) -> GroupCtx {
        GroupCtx::Table(self.group.clone())
    }

    /// `{α, β}` as a point set.
    pub fn pair(&self) -> PointSet {
        PointSet::new(self.ctx(), [self.alpha, self.beta]).expect("distinct elements of H")
    }

    /// The matrix `[[x, y], [0, x⁻¹]]` of an element, entries encoded as in
    /// [`FieldCtx::encode`] for `F₄ = GF(2)[t]/(t² + t + 1)`.
    pub fn matrix(&self, e: Element) -> [[u64; 2]; 2] {
        let f4 = FieldCtx::minimal(2, 2).expect("F4");
        let (x, y) = h_coords(e.0 as usize);
        let xinv = f4.encode(&f4.inv(&f4.decode(x)).expect("x is a unit"));
        [[x, y], [0, xinv]]
    }
}

fn h_coords(i: usize) -> (u64, u64) {
    ((i / 4 + 1) as u64, (i % 4) as u64)
}

/// Build `H` and locate `α = [[a, 1], [0, b]]` and `β = [[a, a], [0, b]]`,
/// where `a = t` and `b = t + 1 = a⁻¹`.
pub fn build_h_group() -> HGroupHandle {
    let f4 = FieldCtx::minimal(2, 2).expect("F4");
    let idx = |x: u64, y: u64| ((x - 1) * 4 + y) as u32;
    let mut mult = vec![0u32; 144];
    for i in 0..12 {
        let (x1, y1) = h_coords(i);
        let (ex1, ey1) = (f4.decode(x1), f4.decode(y1));
        for j in 0..12 {
            let (x2, y2) = h_coords(j);
            let (ex2, ey2) = (f4.decode(x2), f4.decode(y2));
            let x2inv = f4.inv(&ex2).expect("unit");
            let x = f4.mul(&ex1, &ex2);
            let y = f4.add(&f4.mul(&ex1, &ey2), &f4.mul(&ey1, &x2inv));
            mult[i * 12 + j] = idx(f4.encode(&x), f4.encode(&y));
        }
    }
    let group = TableGroup::from_flat(12, mult, idx(1, 0)).expect("H is a group");
    let a = f4.encode(&f4.x());
    HGroupHandle {
        group: Arc::new(group),
        alpha: Element(idx(a, 1) as i64),
        beta: Element(idx(a, a) as i64),
    }
}

/// `A × B` inside `G × H`, a non-abelian B_k⁺-set when `A` is a
/// non-abelian B_k-set in `G` and `B` a non-abelian B_k⁺-set in `H`.
///
/// Elements of the product are indexed `g·|H| + h`.
pub fn product_construction(a: &PointSet, b: &PointSet, k: usize) -> Result<PointSet> {
    let (GroupCtx::Table(g), GroupCtx::Table(h)) = (a.ctx(), b.ctx()) else {
        return Err(Error::Unsupported("product construction needs table groups".into()));
    };
    precondition(verify_word(a, k, Flavor::B)?, &format!("first factor is not B_{k}"))?;
    precondition(verify_word(b, k, Flavor::Plus)?, &format!("second factor is not B_{k}+"))?;
    let prod = Arc::new(g.direct_product(h)?);
    let ho = h.order() as i64;
    let elems: Vec<i64> =
        a.values().iter().flat_map(|&x| b.values().into_iter().map(move |y| x * ho + y)).collect();
    PointSet::new(GroupCtx::Table(prod), elems)
}

/// Result of [`refine_to_half`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refined {
    pub set: PointSet,
    /// The `k'` for which `set` has the requested flavor (`l` or `l + 1`).
    pub k: usize,
    /// Deletion rounds used; never more than one.
    pub rounds: usize,
}

/// From a B_k⁺ (or B_k*) set with `k ≥ 4`, delete the elements of one
/// violating solution to reach a B_l⁺ (B_l*) subset for `k = 2l`, or a
/// B_l / B_{l+1} subset for `k = 2l + 1`.
pub fn refine_to_half(a: &PointSet, k: usize, flavor: Flavor) -> Result<Refined> {
    if k < 4 {
        return domain("refinement needs k >= 4");
    }
    if flavor == Flavor::B {
        return domain("refinement applies to the plus and star flavors");
    }
    precondition(verify(a, k, flavor)?, &format!("input is not B_{k} {flavor}"))?;
    let l = k / 2;
    let first = verify(a, l, flavor)?;
    let Some(crate::verify::Witness::Multisets { left, right }) = first.witness else {
        return Ok(Refined { set: a.clone(), k: l, rounds: 0 });
    };
    let mut drop: Vec<Element> = left.elements().iter().chain(right.elements()).copied().collect();
    drop.sort_unstable();
    drop.dedup();
    let reduced = a.without(&drop);
    let target = if k % 2 == 0 { l } else { l + 1 };
    let again = verify(&reduced, target, flavor)?;
    if let Some(w) = again.witness {
        return Err(Error::Consistency(format!(
            "a second deletion round was needed for B_{target} {flavor}: {w}"
        )));
    }
    Ok(Refined { set: reduced, k: target, rounds: 1 })
}
