//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Sample sizes for the random audit population can be lowered with
//! `SIDON_AUDIT_SAMPLES` for quick local runs; the default is 1000.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sidon::audit::{audit_applicable, AuditReport};
use sidon::constants::{asymptotic_ratio, constants_table, tenth_boundary_distance};
use sidon::constructions::{bose_chowla, build_h_group, plus_doubling};
use sidon::group::{word_product, Element, GroupCtx, PointSet};
use sidon::search::{
    bound_check, doubling_inequality, extremal, extremal_oracle, random_maximal, ExtremalRecord, Family,
    SearchOptions,
};
use sidon::verify::{naive_verify, verify, verify_word, Flavor, Witness};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn value(family: Family, k: usize, flavor: Flavor, n: u64) -> std::result::Result<ExtremalRecord, String> {
    ok(extremal(family, k, flavor, n, &opts()))
}

// ---------------------------------------------------------------------------

fn table_one() -> Check {
    let t = constants_table();
    let expected: [(Flavor, [f64; 6]); 2] = [
        (Flavor::Plus, [2.7, 4.1, 11.0, 13.1, 18.5, 22.7]),
        (Flavor::Star, [5.5, 6.8, 11.2, 15.8, 21.6, 22.7]),
    ];
    let mut n = 0;
    for (flavor, row) in expected {
        for (i, want) in row.into_iter().enumerate() {
            let k = i + 3;
            let c = t.coefficient(k, flavor).ok_or(format!("missing k={k} {flavor}"))?;
            ensure((c.display - want).abs() < 1e-12, || format!("k={k} {flavor}: {} != {want}", c.display))?;
            ensure(tenth_boundary_distance(c.value) > 1e-6, || {
                format!("k={k} {flavor}: {} is within 1e-6 of a tenth", c.value)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} entries match"))
}

const PRIME_POWERS: [(u64, u32); 9] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1)];

fn construction_outputs() -> std::result::Result<Vec<PointSet>, String> {
    let mut out = Vec::new();
    for (p, e) in PRIME_POWERS {
        let q = p.pow(e);
        for k in 2..=4u32 {
            if q.pow(k) - 1 > 1_000_000 {
                continue;
            }
            let a = ok(bose_chowla(p, e, k))?;
            if k == 4 {
                // Translate into [1, M] so the integer audits apply too.
                let m = q.pow(4) - 1;
                let shifted = ok(PointSet::new(ok(GroupCtx::interval(m))?, a.values().iter().map(|v| v + 1)))?;
                out.push(shifted);
            }
            if k % 2 == 1 && q <= 7 {
                out.push(ok(plus_doubling(&a, k as usize))?);
            }
            out.push(a);
        }
    }
    for q_e in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1)] {
        let a = ok(bose_chowla(q_e.0, q_e.1, 5))?;
        out.push(ok(plus_doubling(&a, 5))?);
    }
    Ok(out)
}

fn constructions() -> Check {
    let mut bc = 0;
    let mut dbl = 0;
    for (p, e) in PRIME_POWERS {
        let q = p.pow(e);
        for k in 2..=4u32 {
            if q.pow(k) - 1 > 1_000_000 {
                continue;
            }
            let a = ok(bose_chowla(p, e, k))?;
            ensure(a.len() as u64 == q, || format!("q={q} k={k}: |A| = {}", a.len()))?;
            ensure(a.ctx().size() == q.pow(k) - 1, || format!("q={q} k={k}: modulus {}", a.ctx().size()))?;
            let v = ok(verify(&a, k as usize, Flavor::B))?;
            ensure(v.holds, || format!("q={q} k={k}: not B_k: {:?}", v.witness))?;
            bc += 1;
        }
        for k in [3u32, 5] {
            if q > 7 {
                continue;
            }
            let a = ok(bose_chowla(p, e, k))?;
            let d = ok(plus_doubling(&a, k as usize))?;
            ensure(d.len() as u64 == 2 * q, || format!("doubling q={q} k={k}: |A+| = {}", d.len()))?;
            let plus = ok(verify(&d, k as usize, Flavor::Plus))?;
            ensure(plus.holds, || format!("doubling q={q} k={k}: not B_k+: {:?}", plus.witness))?;
            let b = ok(verify(&d, k as usize, Flavor::B))?;
            ensure(!b.holds && b.witness_is_valid(d.ctx(), Flavor::B), || {
                format!("doubling q={q} k={k}: B_k unexpectedly holds")
            })?;
            dbl += 1;
        }
    }
    Ok(format!("{bc} Bose-Chowla sets are B_k, {dbl} doubled sets are B_k+ and not B_k"))
}

fn non_abelian() -> Check {
    let h = build_h_group();
    let ctx = h.ctx();
    let (a, b) = (h.alpha, h.beta);
    let id = Element(h.group.identity() as i64);
    let prod = |w: &[Element]| word_product(&ctx, w).map_err(|e| e.to_string());
    ensure(h.group.order() == 12, || format!("order {}", h.group.order()))?;
    ensure(prod(&[a, a, a])? == id && prod(&[b, b, b])? == id, || "alpha^3 or beta^3 is not id".into())?;
    ensure(prod(&[a, a, b])? == prod(&[b, b, a])?, || "alpha^2 beta != beta^2 alpha".into())?;
    ensure(prod(&[a, a, b, b])? == prod(&[b, b, a, b])?, || "(a,a,b,b) != (b,b,a,b)".into())?;
    let pair = h.pair();
    let plus = ok(verify_word(&pair, 4, Flavor::Plus))?;
    ensure(plus.holds, || format!("{{alpha, beta}} not B_4+: {:?}", plus.witness))?;
    let v = ok(verify_word(&pair, 4, Flavor::B))?;
    let Some(Witness::Words { left, right }) = &v.witness else {
        return Err("B_4 holds or no word witness".into());
    };
    ensure(!v.holds && left != right && prod(left)? == prod(right)?, || "witness words differ in product".into())?;
    Ok(format!("|H| = 12, B_4+ holds, B_4 fails with {}", v.witness.as_ref().unwrap()))
}

fn audit_samples() -> usize {
    std::env::var("SIDON_AUDIT_SAMPLES").ok().and_then(|s| s.parse().ok()).unwrap_or(1000)
}

fn lemma_audit() -> Check {
    let mut population: Vec<(String, PointSet)> = Vec::new();
    for a in construction_outputs()? {
        population.push(("construction".into(), a));
    }
    let mut optima = 0;
    for family in [Family::Interval, Family::Cyclic] {
        for n in 1..=24 {
            for s in ok(value(family, 3, Flavor::Plus, n)?.optimum_sets())? {
                population.push((format!("max B3+ {family} {n}"), s));
                optima += 1;
            }
        }
    }
    for n in 1..=20 {
        for (k, flavor) in [(4, Flavor::Plus), (3, Flavor::Star)] {
            for s in ok(value(Family::Interval, k, flavor, n)?.optimum_sets())? {
                population.push((format!("max B{k} {flavor} interval {n}"), s));
                optima += 1;
            }
        }
    }
    let samples = audit_samples();
    let configs: Vec<(Family, usize, Flavor)> = vec![
        (Family::Interval, 3, Flavor::Plus),
        (Family::Cyclic, 3, Flavor::Plus),
        (Family::Interval, 4, Flavor::Plus),
        (Family::Interval, 2, Flavor::Star),
        (Family::Interval, 3, Flavor::Star),
    ];
    let jobs: Vec<(Family, usize, Flavor, u64)> =
        configs.iter().flat_map(|&(f, k, fl)| (2..=40).map(move |n| (f, k, fl, n))).collect();
    let sampled: Vec<std::result::Result<Vec<(String, PointSet)>, String>> = jobs
        .par_iter()
        .map(|&(f, k, fl, n)| {
            let seed = (n << 16) ^ ((k as u64) << 8) ^ (fl as u64) << 4 ^ f as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| ok(random_maximal(f, k, fl, n, &mut rng)).map(|s| (format!("random B{k} {fl} {f} {n}"), s)))
                .collect()
        })
        .collect();
    for batch in sampled {
        population.extend(batch?);
    }
    let results: Vec<std::result::Result<Vec<AuditReport>, String>> =
        population.par_iter().map(|(_, s)| ok(audit_applicable(s))).collect();
    let mut reports = 0;
    let mut checks = 0;
    let mut by_anchor: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    for ((origin, _), r) in population.iter().zip(results) {
        for rep in r? {
            reports += 1;
            checks += rep.checks.len();
            for c in &rep.checks {
                *by_anchor.entry(c.anchor.clone()).or_default() += 1;
            }
            if !rep.is_consistent() {
                failures.push(format!("{origin}: inconsistent report"));
            }
            for c in rep.failures() {
                failures.push(format!("{origin} {:?} {}: {} vs {}", rep.set, c.anchor, c.lhs, c.rhs));
            }
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    Ok(format!(
        "{} sets ({optima} optima, {samples} samples per configuration), {reports} reports, {checks} checks, {} distinct anchors",
        population.len(),
        by_anchor.len()
    ))
}

fn oracle_equivalence() -> Check {
    let mut jobs = Vec::new();
    for k in [2, 3] {
        for flavor in Flavor::ALL {
            jobs.extend((1..=18).map(|n| (Family::Interval, k, flavor, n)));
            jobs.extend((1..=16).map(|n| (Family::Cyclic, k, flavor, n)));
        }
    }
    let mismatches: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(f, k, fl, n)| {
            let fast = extremal(f, k, fl, n, &SearchOptions { all_optima: false, ..opts() }).map(|r| r.value);
            let slow = extremal_oracle(f, k, fl, n);
            match (fast, slow) {
                (Ok(a), Ok(b)) if a == b => None,
                (a, b) => Some(format!("{f} k={k} {fl} N={n}: {a:?} vs {b:?}")),
            }
        })
        .collect();
    ensure(mismatches.is_empty(), || mismatches.join("; "))?;

    let mut subsets = Vec::new();
    for mask in 0u32..(1 << 12) {
        if mask.count_ones() <= 5 && mask != 0 {
            subsets.push((1..=12).filter(|i| mask >> (i - 1) & 1 == 1).collect::<Vec<i64>>());
        }
    }
    let mut compared = 0;
    for ctx in [ok(GroupCtx::interval(12))?, ok(GroupCtx::cyclic(12))?] {
        let shift = if matches!(ctx, GroupCtx::Cyclic { .. }) { 1 } else { 0 };
        let bad: Vec<String> = subsets
            .par_iter()
            .flat_map_iter(|s| {
                let ctx = ctx.clone();
                let set = PointSet::new(ctx.clone(), s.iter().map(|v| v - shift)).unwrap();
                [2usize, 3, 4].into_iter().flat_map(move |k| {
                    let set = set.clone();
                    let ctx = ctx.clone();
                    Flavor::ALL.into_iter().filter_map(move |fl| {
                        let b = verify(&set, k, fl).unwrap();
                        let n = naive_verify(&set, k, fl).unwrap();
                        if b.holds != n || !b.witness_is_valid(&ctx, fl) {
                            Some(format!("{set} k={k} {fl}: bucketed {} naive {n}", b.holds))
                        } else {
                            None
                        }
                    })
                })
            })
            .collect();
        ensure(bad.is_empty(), || bad.join("; "))?;
        compared += subsets.len() * 9;
    }
    Ok(format!("{} extremal values equal the oracle, {compared} verifier comparisons agree", jobs.len()))
}

fn doubling_bound() -> Check {
    let mut line = Vec::new();
    for n in 1..=13 {
        let c = value(Family::Cyclic, 3, Flavor::B, n)?;
        let cp = value(Family::Cyclic, 3, Flavor::Plus, 2 * n)?;
        let check = ok(doubling_inequality(&c, &cp))?;
        ensure(check.pass, || format!("N={n}: 2*{} > {}", c.value, cp.value))?;
        line.push(format!("{}<={}", 2 * c.value, cp.value));
    }
    Ok(format!("2C3(N) <= C3+(2N) for N=1..13: {}", line.join(" ")))
}

fn classical() -> Check {
    let mut points = 0;
    let mut sidon = 0;
    let ranges: [(usize, u64); 3] = [(2, 40), (3, 30), (4, 24)];
    for family in [Family::Interval, Family::Cyclic] {
        for (k, n_max) in ranges {
            for n in 1..=n_max {
                let v: Vec<ExtremalRecord> =
                    Flavor::ALL.iter().map(|&f| value(family, k, f, n)).collect::<std::result::Result<_, _>>()?;
                ensure(v[0].value <= v[1].value && v[1].value <= v[2].value, || {
                    format!("{family} k={k} N={n}: {} {} {}", v[0].value, v[1].value, v[2].value)
                })?;
                for r in &v {
                    let b = ok(bound_check(r))?;
                    ensure(b.all_asserted_pass(), || format!("{family} k={k} N={n}: {:?}", b.checks))?;
                    points += 1;
                }
                if k == 2 {
                    let x = n as f64;
                    let b = v[0].value as f64;
                    let ceiling = match family {
                        Family::Interval => x.sqrt() + x.powf(0.25) + 1.0,
                        Family::Cyclic => x.sqrt() + 1.0,
                    };
                    ensure(b <= ceiling, || format!("{family} N={n}: {b} > {ceiling}"))?;
                    sidon += 1;
                }
            }
        }
    }
    Ok(format!("{points} computed values satisfy their bounds and B <= B+ <= B*; {sidon} Sidon values checked"))
}

fn asymptotic() -> Check {
    let mut notes = Vec::new();
    let mut failed = Vec::new();
    let mut k = 8u64;
    while k <= 4096 {
        let r = ok(asymptotic_ratio(k))?;
        if !r.within_ceiling() {
            failed.push(format!("k={k}: ratio {:.6} > e^(1/k) = {:.6}", r.ratio, r.ceiling));
        }
        if !r.within_term_ceiling() {
            failed.push(format!("k={k}: ratio {:.6} > e^(2 floor(log2 k)/k) = {:.6}", r.ratio, r.term_ceiling));
        }
        k *= 2;
    }
    let r = ok(asymptotic_ratio(1 << 10))?;
    let gap = (r.pure_product - 0.25).abs();
    notes.push(format!("pure product at k=2^10 is {:.6} (gap {gap:.2e})", r.pure_product));
    if gap > 1e-3 {
        failed.push(format!("pure product gap {gap:.2e} > 1e-3"));
    }
    if failed.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; {}", failed.join("; "), notes.join("; ")))
    }
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 8] = [
        ("table-one", Duration::from_secs(1), table_one),
        ("constructions", Duration::from_secs(60), constructions),
        ("non-abelian", Duration::from_secs(1), non_abelian),
        ("lemma-audit", Duration::from_secs(600), lemma_audit),
        ("oracle-equivalence", Duration::from_secs(600), oracle_equivalence),
        ("doubling-inequality", Duration::from_secs(300), doubling_bound),
        ("classical-bounds", Duration::from_secs(600), classical),
        ("asymptotic-ratio", Duration::from_secs(1), asymptotic),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d} (over the {budget:?} budget)")),
            Err(e) => (false, e),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} in {:.2}s: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
