//! Documented values, each re-derived here by brute force that shares no
//! code with the library.

use std::collections::HashMap;
use std::sync::Arc;

use sidon::constructions::{bose_chowla, build_h_group, plus_doubling, product_construction, refine_to_half};
use sidon::counting::{count_3aps, decompose_same_sum, rep_profile, RepKind, Variant};
use sidon::field::{find_irreducible, find_primitive, DlogTable, FieldCtx};
use sidon::group::{word_product, Element, GroupCtx, PointSet, TableGroup};
use sidon::search::{extremal, extremal_oracle, find_word_set, Family, SearchOptions};
use sidon::verify::{verify, verify_word, Flavor};

/// Independent flavor test over sorted k-multisets of plain integers.
fn brute(vals: &[i64], k: usize, modulus: Option<i64>, flavor: Flavor) -> bool {
    fn rec(vals: &[i64], k: usize, start: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..vals.len() {
            cur.push(vals[i]);
            rec(vals, k, i, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(vals, k, 0, &mut Vec::new(), &mut all);
    let sum = |m: &Vec<i64>| {
        let s: i64 = m.iter().sum();
        modulus.map_or(s, |n| s.rem_euclid(n))
    };
    let mut seen: HashMap<i64, Vec<&Vec<i64>>> = HashMap::new();
    for m in &all {
        seen.entry(sum(m)).or_default().push(m);
    }
    for bucket in seen.values() {
        for (i, x) in bucket.iter().enumerate() {
            for y in &bucket[i + 1..] {
                let share = x.iter().any(|v| y.contains(v));
                let distinct = |m: &Vec<i64>| m.windows(2).all(|w| w[0] != w[1]);
                let bad = match flavor {
                    Flavor::B => true,
                    Flavor::Plus => !share,
                    Flavor::Star => !share && distinct(x) && distinct(y),
                };
                if bad {
                    return false;
                }
            }
        }
    }
    true
}

fn brute_max(n: i64, k: usize, cyclic: bool, flavor: Flavor) -> (usize, Vec<Vec<i64>>) {
    let lo = if cyclic { 0 } else { 1 };
    let modulus = cyclic.then_some(n);
    let mut best = (0, Vec::new());
    for mask in 1u32..(1 << n) {
        let vals: Vec<i64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + lo).collect();
        if vals.len() < best.0 || !brute(&vals, k, modulus, flavor) {
            continue;
        }
        if vals.len() > best.0 {
            best = (vals.len(), Vec::new());
        }
        best.1.push(vals);
    }
    best
}

fn cyc(n: u64, v: &[i64]) -> PointSet {
    PointSet::new(GroupCtx::cyclic(n).unwrap(), v.iter().copied()).unwrap()
}

fn iv(n: u64, v: &[i64]) -> PointSet {
    PointSet::new(GroupCtx::interval(n).unwrap(), v.iter().copied()).unwrap()
}

#[test]
fn bose_chowla_examples() {
    let a = bose_chowla(2, 1, 3).unwrap();
    assert_eq!(a, cyc(7, &[1, 3]));
    assert!(brute(&a.values(), 3, Some(7), Flavor::B));

    let b = bose_chowla(3, 1, 3).unwrap();
    assert_eq!((b.len(), b.ctx().size()), (3, 26));
    assert!(brute(&b.values(), 3, Some(26), Flavor::B));

    let c = bose_chowla(2, 2, 2).unwrap();
    assert_eq!((c.len(), c.ctx().size()), (4, 15));
    assert!(brute(&c.values(), 2, Some(15), Flavor::B));
}

#[test]
fn doubling_examples() {
    let d = plus_doubling(&cyc(7, &[0, 1]), 3).unwrap();
    assert_eq!(d, cyc(14, &[0, 1, 7, 8]));
    assert!(brute(&d.values(), 3, Some(14), Flavor::Plus));

    let d = plus_doubling(&bose_chowla(2, 1, 3).unwrap(), 3).unwrap();
    assert_eq!(d.len(), 4);
    assert!(brute(&d.values(), 3, Some(14), Flavor::Plus));
    assert!(!brute(&d.values(), 3, Some(14), Flavor::B));
    assert!(verify(&d, 3, Flavor::Plus).unwrap().holds);
    assert!(!verify(&d, 3, Flavor::B).unwrap().holds);
}

#[test]
fn extremal_examples_against_brute_force() {
    let opts = SearchOptions::default();
    let r = extremal(Family::Interval, 2, Flavor::B, 7, &opts).unwrap();
    let (v, sets) = brute_max(7, 2, false, Flavor::B);
    assert_eq!((r.value, v), (4, 4));
    assert!(sets.contains(&vec![1, 2, 5, 7]));
    assert!(r.optima.contains(&vec![1, 2, 5, 7]));
    // Every brute-force optimum is a translate of a reported one.
    for s in &sets {
        let shifted: Vec<i64> = s.iter().map(|x| x - s[0] + 1).collect();
        assert!(r.optima.contains(&shifted), "{s:?} missing");
    }

    assert_eq!(extremal(Family::Cyclic, 2, Flavor::B, 7, &opts).unwrap().value, 3);
    assert_eq!(brute_max(7, 2, true, Flavor::B).0, 3);

    let c = extremal(Family::Cyclic, 3, Flavor::Plus, 14, &opts).unwrap().value;
    assert!(c >= 4);
    assert_eq!(c, brute_max(14, 3, true, Flavor::Plus).0);
    assert_eq!(c, extremal_oracle(Family::Cyclic, 3, Flavor::Plus, 14).unwrap());

    for n in 1..=12 {
        for fl in Flavor::ALL {
            assert_eq!(
                extremal(Family::Interval, 3, fl, n, &opts).unwrap().value,
                brute_max(n as i64, 3, false, fl).0,
                "interval k=3 {fl} N={n}"
            );
        }
    }
}

#[test]
fn counting_examples() {
    let f3 = rep_profile(&iv(3, &[1, 2, 3]), RepKind::F3).unwrap();
    assert_eq!(f3.values.into_iter().collect::<Vec<_>>(), vec![(0, 1), (2, 1), (4, 1)]);

    let s2 = rep_profile(&iv(2, &[1, 2]), RepKind::Sigma(2)).unwrap();
    assert_eq!(s2.values.into_iter().collect::<Vec<_>>(), vec![(2, 1), (3, 2), (4, 1)]);

    let a = iv(8, &[1, 2, 4, 8]);
    assert_eq!(count_3aps(&a).unwrap().nontrivial, 0);
    let mut triples = 0;
    for p in a.values() {
        for q in a.values() {
            for r in a.values() {
                if p < q && p + q == 2 * r {
                    triples += 1;
                }
            }
        }
    }
    assert_eq!(triples, 0);

    let d = decompose_same_sum(&iv(4, &[1, 2, 3, 4]), Variant::S).unwrap();
    assert_eq!(d.entries.len(), 1);
    assert_eq!(d.entries[0].sum, 5);
    assert_eq!(d.entries[0].multiplicity(), 2);
    assert_eq!((d.m, d.big_m), (1, 1));

    let z = cyc(14, &[0, 1, 7, 8]);
    let d = decompose_same_sum(&z, Variant::S).unwrap();
    assert!(d.big_m >= 1);
    assert!(d.entries.iter().any(|e| e.sum == 8 && e.contains(Element(0)) && e.contains(Element(1))));
    assert_eq!(count_3aps(&z).unwrap().trivial, 2 * z.len() as u64);
}

#[test]
fn field_examples() {
    // x^3 + x + 1 is the first irreducible cubic over GF(2) by encoding.
    assert_eq!(find_irreducible(2, 3).unwrap(), vec![1, 1, 0, 1]);
    let cubics: Vec<u64> = (8..16)
        .filter(|&c| {
            let f = |x: u64| ((c & 1) ^ (c >> 1 & 1) * x ^ (c >> 2 & 1) * x * x ^ (c >> 3 & 1) * x * x * x) & 1;
            f(0) != 0 && f(1) != 0
        })
        .collect();
    assert_eq!(cubics, vec![11, 13]);

    let quad = find_irreducible(3, 2).unwrap();
    let first = (0..9u64)
        .map(|c| vec![c % 3, c / 3, 1])
        .find(|p| (0..3u64).all(|x| (p[0] + p[1] * x + x * x) % 3 != 0))
        .unwrap();
    assert_eq!(quad, first);

    let f8 = FieldCtx::minimal(2, 3).unwrap();
    let x = f8.x();
    assert_eq!(f8.mul(&f8.mul(&x, &x), &x), f8.add(&x, &f8.one()));
    assert_eq!(find_primitive(&f8).unwrap(), x);
    let t = DlogTable::build(&f8, &x).unwrap();
    assert_eq!(t.log(&f8, &f8.add(&x, &f8.one())).unwrap(), 3);

    let f7 = FieldCtx::minimal(7, 1).unwrap();
    assert_eq!(f7.encode(&find_primitive(&f7).unwrap()), 3);
    let order = |g: u64| (1..=6).find(|&e| (0..e).fold(1, |acc, _| acc * g % 7) == 1).unwrap();
    assert_eq!((order(2), order(3)), (3, 6));

    let f4 = FieldCtx::minimal(2, 2).unwrap();
    let a = f4.x();
    let b = f4.add(&a, &f4.one());
    assert_eq!(f4.mul(&a, &b), f4.one());
    assert_eq!(find_primitive(&f4).unwrap(), a);
}

#[test]
fn h_group_examples() {
    let h = build_h_group();
    let ctx = h.ctx();
    let (a, b) = (h.alpha, h.beta);
    let id = Element(h.group.identity() as i64);
    assert_eq!(word_product(&ctx, &[a, a, a]).unwrap(), id);
    assert_eq!(word_product(&ctx, &[id]).unwrap(), id);
    assert_eq!(word_product(&ctx, &[a, a, b]).unwrap(), word_product(&ctx, &[b, b, a]).unwrap());
    assert_eq!(word_product(&ctx, &[a, a, b, b]).unwrap(), word_product(&ctx, &[b, b, a, b]).unwrap());

    // Matrices multiply as upper triangular matrices over F4.
    let f4 = FieldCtx::minimal(2, 2).unwrap();
    let mm = |p: [[u64; 2]; 2], q: [[u64; 2]; 2]| {
        let e = |v: u64| f4.decode(v);
        let mut r = [[0u64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let s = f4.add(&f4.mul(&e(p[i][0]), &e(q[0][j])), &f4.mul(&e(p[i][1]), &e(q[1][j])));
                r[i][j] = f4.encode(&s);
            }
        }
        r
    };
    for x in 0..12 {
        for y in 0..12 {
            let (ex, ey) = (Element(x), Element(y));
            let z = word_product(&ctx, &[ex, ey]).unwrap();
            assert_eq!(h.matrix(z), mm(h.matrix(ex), h.matrix(ey)));
        }
    }
}

#[test]
fn product_from_searched_seed() {
    let h = build_h_group();
    assert!(find_word_set(&Arc::new(TableGroup::symmetric(4).unwrap()), 2, 4, Flavor::B).unwrap().is_none());
    let g = Arc::new(TableGroup::symmetric(5).unwrap());
    let seed = find_word_set(&g, 2, 4, Flavor::B).unwrap().expect("S5 has a 2-element B4 set");
    assert!(verify_word(&seed, 4, Flavor::B).unwrap().holds);
    let p = product_construction(&seed, &h.pair(), 4).unwrap();
    assert_eq!(p.len(), 4);
    assert!(verify_word(&p, 4, Flavor::Plus).unwrap().holds);
}

#[test]
fn refinement_examples() {
    let opts = SearchOptions::default();
    for n in [8, 12] {
        for a in extremal(Family::Interval, 4, Flavor::Plus, n, &opts).unwrap().optimum_sets().unwrap() {
            let r = refine_to_half(&a, 4, Flavor::Plus).unwrap();
            assert_eq!(r.set, a);
            assert!(brute(&a.values(), 2, None, Flavor::B));
        }
    }
    // A B6* set that is not B3*.
    let mut found = 0;
    for n in 6..=16 {
        for a in extremal(Family::Interval, 6, Flavor::Star, n, &opts).unwrap().optimum_sets().unwrap() {
            if verify(&a, 3, Flavor::Star).unwrap().holds {
                continue;
            }
            let r = refine_to_half(&a, 6, Flavor::Star).unwrap();
            assert!(r.set.len() + 6 >= a.len());
            assert!(brute(&r.set.values(), 3, None, Flavor::Star));
            found += 1;
        }
    }
    assert!(found > 0);
}
