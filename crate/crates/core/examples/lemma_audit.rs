//! Audit the structural statements proved for B_3⁺, B_4⁺ and B_2*/B_3*
//! sets on search optima and on random maximal sets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sidon::audit::{audit_applicable, audit_b3plus};
use sidon::group::{GroupCtx, PointSet};
use sidon::search::{extremal, random_maximal, Family, SearchOptions};
use sidon::verify::Flavor;

fn main() -> sidon::error::Result<()> {
    // One report in full.
    let a = PointSet::new(GroupCtx::cyclic(14)?, [0, 1, 7, 8])?;
    let r = audit_b3plus(&a)?;
    println!("{} {:?}", r.group, r.set);
    for c in &r.checks {
        println!("  {:<5} {:<24} {:>8} {:?} {:<8}  {}", if c.pass { "ok" } else { "FAIL" }, c.anchor, c.lhs, c.relation, c.rhs, c.name);
    }

    // Optima of B_3⁺ in [N].
    let mut reports = 0;
    let mut failures = 0;
    for n in 10..=20 {
        for s in extremal(Family::Interval, 3, Flavor::Plus, n, &SearchOptions::default())?.optimum_sets()? {
            for r in audit_applicable(&s)? {
                reports += 1;
                failures += r.failures().count();
            }
        }
    }
    println!("B3+ optima in [10..20]: {reports} reports, {failures} failed checks");

    // Random maximal sets.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (k, flavor) in [(3, Flavor::Plus), (4, Flavor::Plus), (2, Flavor::Star), (3, Flavor::Star)] {
        let mut checks = 0;
        let mut failed = 0;
        for _ in 0..200 {
            let s = random_maximal(Family::Interval, k, flavor, 40, &mut rng)?;
            for r in audit_applicable(&s)? {
                checks += r.checks.len();
                failed += r.failures().count();
            }
        }
        println!("random maximal B{k} {flavor} in [40]: {checks} checks, {failed} failed");
    }
    Ok(())
}
