//! Exact checks of the structural lemmas behind the B₃⁺, B₄⁺ and B_k*
//! upper bounds, evaluated on concrete sets.
//!
//! Every check carries its two sides and a relation, so the pass flag can
//! be recomputed from the report alone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::counting::{
    count_3aps, decompose_same_sum, rep_profile, sum_square_stats, RepKind, SameSumEntry,
    StructureDecomp, Variant,
};
use crate::error::{domain, Error, Result};
use crate::group::{binomial, Element, GroupCtx, PointSet};
use crate::verify::{verify, Flavor};

/// How the two sides of a check compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Le,
    /// `lhs <= rhs` up to a relative tolerance of `1e-9` (floating point).
    LeApprox,
}

impl Relation {
    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::LeApprox => lhs <= rhs + 1e-9 * rhs.abs().max(1.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    /// Short stable identifier of the statement being checked.
    pub anchor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub group: String,
    pub set: Vec<i64>,
    pub k: usize,
    pub flavor: Flavor,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    fn new(a: &PointSet, k: usize, flavor: Flavor) -> Self {
        AuditReport { group: a.ctx().to_string(), set: a.values(), k, flavor, checks: Vec::new() }
    }

    fn push(&mut self, anchor: &str, name: &str, lhs: impl Into<f64>, rhs: impl Into<f64>, rel: Relation) {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        self.checks.push(AuditCheck {
            name: name.into(),
            anchor: anchor.into(),
            lhs,
            rhs,
            relation: rel,
            pass: rel.holds(lhs, rhs),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Recompute each pass flag from the stored sides.
    pub fn is_consistent(&self) -> bool {
        self.checks.iter().all(|c| c.pass == c.relation.holds(c.lhs, c.rhs))
    }
}

fn require(a: &PointSet, k: usize, flavor: Flavor) -> Result<()> {
    let v = verify(a, k, flavor)?;
    match v.witness {
        None => Ok(()),
        Some(w) => Err(Error::Precondition(format!("set is not B_{k} {flavor}: {w}"))),
    }
}

fn require_interval(a: &PointSet) -> Result<u64> {
    match *a.ctx() {
        GroupCtx::Interval { n } => Ok(n),
        _ => Err(Error::Unsupported("this audit is stated for sets of integers".into())),
    }
}

/// Refined Cauchy–Schwarz lower bound on `Σ x²`:
/// `(Σx)²/n + t n Δ² / (n - t)` with `Δ = mean of the first t - overall mean`.
pub fn cs_bound(xs: &[f64], t: usize) -> Result<f64> {
    let n = xs.len();
    if t == 0 || t >= n {
        return domain(format!("need 1 <= t <= n - 1, got t = {t}, n = {n}"));
    }
    let (nf, tf) = (n as f64, t as f64);
    let total: f64 = xs.iter().sum();
    let delta = xs[..t].iter().sum::<f64>() / tf - total / nf;
    Ok(total * total / nf + tf * nf * delta * delta / (nf - tf))
}

fn pair_meets(e: &SameSumEntry, f: &SameSumEntry) -> usize {
    e.support.iter().filter(|x| f.contains(**x)).count()
}

fn c(v: u128) -> f64 {
    v as f64
}

/// f3 values over the whole key range with the keys in `A` listed first.
fn f3_vector(a: &PointSet, f3: &BTreeMap<i64, u64>) -> Vec<f64> {
    let keys: Vec<i64> = match *a.ctx() {
        GroupCtx::Cyclic { n } => (0..n as i64).collect(),
        GroupCtx::Interval { n } => (1 - n as i64..=2 * n as i64).collect(),
        GroupCtx::Table(_) => unreachable!("abelian only"),
    };
    let get = |k: &i64| f3.get(k).copied().unwrap_or(0) as f64;
    let mut xs: Vec<f64> = a.values().iter().map(get).collect();
    xs.extend(keys.iter().filter(|k| !a.contains(Element(**k))).map(get));
    xs
}

/// Checks for a B₃⁺-set in `ℤ_N` or `[N]`.
pub fn audit_b3plus(a: &PointSet) -> Result<AuditReport> {
    if !a.ctx().is_abelian_kind() {
        return Err(Error::Unsupported("abelian contexts only".into()));
    }
    require(a, 3, Flavor::Plus)?;
    let mut r = AuditReport::new(a, 3, Flavor::Plus);
    let n = a.len() as u64;
    let nf = n as f64;
    let aps = count_3aps(a)?;
    let f3 = rep_profile(a, RepKind::F3)?;
    let g1 = rep_profile(a, RepKind::G1)?;
    let g2 = rep_profile(a, RepKind::G2)?;
    let f4 = rep_profile(a, RepKind::F4)?;
    let s = decompose_same_sum(a, Variant::S)?;
    let f_on_a: u128 = a.values().iter().map(|&x| f3.get(x) as u128).sum();
    let ss1 = s.sum_s_sminus1();
    let m3 = sum_square_stats(&f3);

    r.push("ap-bound", "nontrivial 3-APs <= 3|A|", aps.nontrivial as f64, 3.0 * nf, Relation::Le);
    r.push("g2-is-ap-count", "sum g2 = nontrivial 3-APs", c(g2.total()), aps.nontrivial as f64, Relation::Eq);
    r.push("f-splits", "sum_{c in A} f(c) = sum g1 + sum g2", c(f_on_a), c(g1.total() + g2.total()), Relation::Eq);
    r.push("pair-linkage", "2 sum s_i(s_i - 1) = sum g1", c(2 * ss1), c(g1.total()), Relation::Eq);
    r.push(
        "second-moment-estimate",
        "sum f(f-1) <= |A|(2 sum_{c in A} f(c) + sum s_i(s_i-1)) + 72|A|^2",
        c(m3.sum_f_fminus1),
        nf * (2.0 * c(f_on_a) + c(ss1)) + 72.0 * nf * nf,
        Relation::Le,
    );
    r.push("f3-mass", "sum f3 = C(|A|,2)(|A|-2)", c(m3.sum), c(binomial(n, 2) * n.saturating_sub(2) as u128), Relation::Eq);
    r.push("f4-mass", "sum f4 = C(|A|,2) C(|A|-2,2)", c(f4.total()), c(binomial(n, 2) * binomial(n.saturating_sub(2), 2)), Relation::Eq);
    let xs = f3_vector(a, &f3.values);
    if a.len() < xs.len() && !a.is_empty() {
        let lower = cs_bound(&xs, a.len())?;
        r.push("cauchy-schwarz", "refined Cauchy-Schwarz <= sum f3^2", lower, c(m3.sum_of_squares), Relation::LeApprox);
    }

    match *a.ctx() {
        GroupCtx::Cyclic { n: modulus } => {
            r.push("f-on-a-cyclic", "sum_{c in A} f(c) <= |A|^2 + 7|A|", c(f_on_a), nf * nf + 7.0 * nf, Relation::Le);
            if modulus % 2 == 0 {
                even_structure(&mut r, &s, modulus as i64);
            } else {
                odd_structure(&mut r, &s, n);
                r.push("f-on-a-integers", "2 sum_{c in A} f(c) <= |A|^2 + 6|A|", c(2 * f_on_a), nf * nf + 6.0 * nf, Relation::Le);
            }
        }
        GroupCtx::Interval { .. } => {
            odd_structure(&mut r, &s, n);
            r.push("f-on-a-integers", "2 sum_{c in A} f(c) <= |A|^2 + 6|A|", c(2 * f_on_a), nf * nf + 6.0 * nf, Relation::Le);
        }
        GroupCtx::Table(_) => unreachable!(),
    }
    Ok(r)
}

/// Overlap structure of the same-sum classes in an even cyclic group.
fn even_structure(r: &mut AuditReport, s: &StructureDecomp, modulus: i64) {
    let h = modulus / 2;
    let red = |v: i64| v.rem_euclid(modulus);
    let sorted = |x: i64, y: i64| (Element(red(x).min(red(y))), Element(red(x).max(red(y))));
    let mut size_violations = 0u32;
    let mut shape_violations = 0u32;
    for (i, ei) in s.entries.iter().enumerate() {
        for (j, ej) in s.entries.iter().enumerate() {
            if i == j {
                continue;
            }
            let shared: Vec<Element> = ei.support.iter().copied().filter(|x| ej.contains(*x)).collect();
            let Some(&x) = shared.first() else { continue };
            if ei.multiplicity().max(ej.multiplicity()) > 3 {
                size_violations += 1;
            }
            if ei.multiplicity() != 3 || ej.multiplicity() != 3 {
                continue;
            }
            let ok = red(ej.sum - ei.sum) == h && triple_shape(ei, ej, x, h, &sorted);
            if !ok {
                shape_violations += 1;
            }
        }
    }
    r.push("overlap-size-even", "overlapping classes have s <= 3", size_violations, 0, Relation::Eq);
    r.push("overlap-shape-even", "overlapping 3-classes have the half-shift shape", shape_violations, 0, Relation::Eq);

    let mut big_overlaps = 0u32;
    let mut excess_triples = 0u32;
    let mut triples_per: BTreeMap<Element, u32> = BTreeMap::new();
    for (i, ei) in s.entries.iter().enumerate() {
        if ei.multiplicity() >= 4 {
            big_overlaps += s
                .entries
                .iter()
                .enumerate()
                .filter(|&(j, ej)| j != i && pair_meets(ei, ej) > 0)
                .count() as u32;
        }
        if ei.multiplicity() == 3 {
            for &x in &ei.support {
                *triples_per.entry(x).or_insert(0) += 1;
            }
        }
    }
    for &t in triples_per.values() {
        if t > 2 {
            excess_triples += 1;
        }
    }
    r.push("large-class-isolated", "classes with s >= 4 meet no other class", big_overlaps, 0, Relation::Eq);
    r.push("triple-membership", "elements in more than two 3-classes", excess_triples, 0, Relation::Eq);
}

/// `S_i = {{x,x1},{y,z},{y+h,z+h}}` and `S_j = {{x,x1+h},{y+h,z},{y,z+h}}`.
fn triple_shape(
    ei: &SameSumEntry,
    ej: &SameSumEntry,
    x: Element,
    h: i64,
    sorted: &dyn Fn(i64, i64) -> (Element, Element),
) -> bool {
    let partner = |e: &SameSumEntry| {
        e.pairs.iter().find_map(|&(p, q)| {
            if p == x {
                Some(q)
            } else if q == x {
                Some(p)
            } else {
                None
            }
        })
    };
    let (Some(x1), Some(x1j)) = (partner(ei), partner(ej)) else { return false };
    if sorted(x.0, x1j.0) != sorted(x.0, x1.0 + h) {
        return false;
    }
    let rest = |e: &SameSumEntry| -> Vec<(Element, Element)> {
        e.pairs.iter().copied().filter(|&(p, q)| p != x && q != x).collect()
    };
    let (ri, rj) = (rest(ei), rest(ej));
    if ri.len() != 2 || rj.len() != 2 {
        return false;
    }
    let mut want_j = Vec::new();
    for (p1, p2) in [(ri[0], ri[1]), (ri[1], ri[0])] {
        for (y, z) in [(p1.0, p1.1), (p1.1, p1.0)] {
            if sorted(y.0 + h, z.0 + h) == p2 {
                want_j.push({
                    let mut v = vec![sorted(y.0 + h, z.0), sorted(y.0, z.0 + h)];
                    v.sort();
                    v
                });
            }
        }
    }
    let mut have = rj.clone();
    have.sort();
    want_j.contains(&have)
}

/// Overlap structure of the same-sum classes in `[N]` or odd `ℤ_N`.
fn odd_structure(r: &mut AuditReport, s: &StructureDecomp, n: u64) {
    let mut overlap_violations = 0u32;
    let mut big_overlaps = 0u32;
    for (i, ei) in s.entries.iter().enumerate() {
        for ej in &s.entries[i + 1..] {
            let meet = pair_meets(ei, ej);
            if meet == 0 {
                continue;
            }
            let (lo, hi) = {
                let (a, b) = (ei.multiplicity(), ej.multiplicity());
                (a.min(b), a.max(b))
            };
            let ok = (lo == 2 && hi == 2) || (lo == 2 && hi == 3 && meet >= 3);
            if !ok {
                overlap_violations += 1;
            }
            if lo >= 3 {
                big_overlaps += 1;
            }
        }
    }
    r.push("overlap-odd", "overlapping classes are (2,2) or (2,3) sharing >= 3", overlap_violations, 0, Relation::Eq);
    r.push("large-classes-disjoint", "classes with s >= 3 are pairwise disjoint", big_overlaps, 0, Relation::Eq);

    let mut per: BTreeMap<Element, u64> = BTreeMap::new();
    for e in s.entries.iter().filter(|e| e.multiplicity() == 2) {
        for &x in &e.support {
            *per.entry(x).or_insert(0) += 1;
        }
    }
    let worst = per.values().copied().max().unwrap_or(0);
    r.push("two-class-membership", "2 max_a #{i : s_i = 2, a in T_i} <= |A|", (2 * worst) as f64, n as f64, Relation::Le);
}

/// Checks for a B₄⁺-set of integers.
pub fn audit_b4plus(a: &PointSet) -> Result<AuditReport> {
    require_interval(a)?;
    require(a, 4, Flavor::Plus)?;
    let mut r = AuditReport::new(a, 4, Flavor::Plus);
    let n = a.len() as u64;
    let nf = n as f64;
    let sidon = verify(a, 2, Flavor::B)?.holds;
    r.push("b4plus-is-sidon", "set is a B2-set", if sidon { 1.0 } else { 0.0 }, 1.0, Relation::Eq);
    let f4 = rep_profile(a, RepKind::F4)?;
    let m = sum_square_stats(&f4);
    r.push("f4-max", "max f4 <= 2|A|", m.max as f64, 2.0 * nf, Relation::Le);
    let diffs = rep_profile(a, RepKind::Delta)?;
    let on_diffs: u128 = diffs.values.keys().map(|&d| f4.get(d) as u128).sum();
    r.push(
        "f4-second-moment",
        "sum f4(f4-1) <= 2|A| sum_{n in A-A} f4(n)",
        c(m.sum_f_fminus1),
        2.0 * nf * c(on_diffs),
        Relation::Le,
    );
    r.push("f4-mass", "sum f4 = C(|A|,2) C(|A|-2,2)", c(m.sum), c(binomial(n, 2) * binomial(n.saturating_sub(2), 2)), Relation::Eq);
    Ok(r)
}

/// Checks for a B₂* or B₃* set of integers.
pub fn audit_bstar(a: &PointSet, k: usize) -> Result<AuditReport> {
    require_interval(a)?;
    if k != 2 && k != 3 {
        return domain("star audits cover k = 2 and k = 3");
    }
    require(a, k, Flavor::Star)?;
    let mut r = AuditReport::new(a, k, Flavor::Star);
    let n = a.len() as u64;
    let nf = n as f64;
    let sigma2 = rep_profile(a, RepKind::Sigma(2))?;
    let s2 = sum_square_stats(&sigma2);
    if k == 2 {
        let delta = rep_profile(a, RepKind::Delta)?;
        let d = sum_square_stats(&delta);
        let off_zero = delta.values.iter().filter(|(&key, _)| key != 0);
        let max_off = off_zero.clone().map(|(_, &v)| v).max().unwrap_or(0);
        let twos = off_zero.filter(|(_, &v)| v == 2).count();
        r.push("delta-mass", "sum delta = |A|^2", c(d.sum), nf * nf, Relation::Eq);
        r.push("sigma-delta-energy", "sum sigma2^2 = sum delta^2", c(s2.sum_of_squares), c(d.sum_of_squares), Relation::Eq);
        r.push("delta-max", "delta(n) <= 2 for n != 0", max_off as f64, 2.0, Relation::Le);
        r.push("delta-twos", "#{n != 0 : delta(n) = 2} <= 8|A|", twos as f64, 8.0 * nf, Relation::Le);
        r.push("sigma2-energy", "sum sigma2^2 <= 2|A|^2 + 32|A|", c(s2.sum_of_squares), 2.0 * nf * nf + 32.0 * nf, Relation::Le);
    } else {
        let r2 = rep_profile(a, RepKind::R2)?;
        let m2 = sum_square_stats(&r2);
        let doubles: Vec<i64> = a.values().iter().map(|v| 2 * v).collect();
        let mismatches = sigma2
            .values
            .keys()
            .chain(r2.values.keys())
            .filter(|&&key| sigma2.get(key) != 2 * r2.get(key) + doubles.contains(&key) as u64)
            .count();
        r.push("sigma-r2-link", "sigma2 = 2 r2 + [n in 2.A] everywhere", mismatches as f64, 0.0, Relation::Eq);
        r.push("r2-energy", "2 sum r2^2 <= 3|A|^2 + 4|A|", c(2 * m2.sum_of_squares), 3.0 * nf * nf + 4.0 * nf, Relation::Le);
        let on_doubles: u128 = doubles.iter().map(|&d| r2.get(d) as u128).sum();
        r.push(
            "r2-on-doubles",
            "(sum_{n in 2.A} r2(n))^2 <= 4|A|^3",
            c(on_doubles * on_doubles),
            4.0 * nf * nf * nf,
            Relation::Le,
        );
        let p = decompose_same_sum(a, Variant::P)?;
        let mut sum_violations = 0u32;
        let mut disjoint_violations = 0u32;
        for (i, ei) in p.entries.iter().enumerate() {
            for ej in &p.entries[i + 1..] {
                let (pi, pj) = (ei.multiplicity(), ej.multiplicity());
                if pi < 3 || pj < 3 || pair_meets(ei, ej) == 0 {
                    continue;
                }
                if pi + pj > 7 {
                    sum_violations += 1;
                }
                if pi >= 4 && pj >= 4 {
                    disjoint_violations += 1;
                }
            }
        }
        r.push("p-overlap-sum", "overlapping classes with p >= 3 have p_i + p_j <= 7", sum_violations, 0, Relation::Eq);
        r.push("p-large-disjoint", "classes with p >= 4 are pairwise disjoint", disjoint_violations, 0, Relation::Eq);
    }
    Ok(r)
}

/// Run every audit whose precondition the set satisfies.
pub fn audit_applicable(a: &PointSet) -> Result<Vec<AuditReport>> {
    let mut out = Vec::new();
    if !a.ctx().is_abelian_kind() || a.is_empty() {
        return Ok(out);
    }
    if verify(a, 3, Flavor::Plus)?.holds {
        out.push(audit_b3plus(a)?);
    }
    if let GroupCtx::Interval { .. } = a.ctx() {
        if verify(a, 4, Flavor::Plus)?.holds {
            out.push(audit_b4plus(a)?);
        }
        for k in [2, 3] {
            if verify(a, k, Flavor::Star)?.holds {
                out.push(audit_bstar(a, k)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cs_examples() {
        assert_eq!(cs_bound(&[2.0, 0.0], 1).unwrap(), 4.0);
        assert_eq!(cs_bound(&[1.0, 1.0, 1.0], 1).unwrap(), 3.0);
        assert!(cs_bound(&[1.0], 1).is_err());
        assert!(cs_bound(&[1.0, 2.0], 0).is_err());
    }

    #[test]
    fn doubled_pair_passes() {
        let a = PointSet::new(GroupCtx::cyclic(14).unwrap(), [0, 1, 7, 8]).unwrap();
        let r = audit_b3plus(&a).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.is_consistent());
    }

    #[test]
    fn sidon_set_has_empty_linkage() {
        let a = crate::constructions::bose_chowla(3, 1, 3).unwrap();
        let r = audit_b3plus(&a).unwrap();
        assert!(r.all_pass());
        let link = r.checks.iter().find(|c| c.anchor == "pair-linkage").unwrap();
        assert_eq!((link.lhs, link.rhs), (0.0, 0.0));
    }

    #[test]
    fn preconditions() {
        let a = PointSet::new(GroupCtx::interval(4).unwrap(), [1, 2, 3, 4]).unwrap();
        assert!(matches!(audit_b3plus(&a), Err(Error::Precondition(_))));
        let a = PointSet::new(GroupCtx::interval(3).unwrap(), [1, 2, 3]).unwrap();
        let r = audit_bstar(&a, 2).unwrap();
        assert!(r.all_pass());
        let z = PointSet::new(GroupCtx::cyclic(7).unwrap(), [0]).unwrap();
        assert!(matches!(audit_b4plus(&z), Err(Error::Unsupported(_))));
        let one = PointSet::new(GroupCtx::interval(1).unwrap(), [1]).unwrap();
        assert!(audit_b4plus(&one).unwrap().all_pass());
    }
}
