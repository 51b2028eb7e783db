//! Representation functions, moments and the same-sum decomposition of a
//! small set.

use sidon::counting::{count_3aps, decompose_same_sum, rep_profile, sum_square_stats, RepKind, Variant};
use sidon::doc::profile_csv;
use sidon::group::{GroupCtx, PointSet};

fn main() -> sidon::error::Result<()> {
    let a = PointSet::new(GroupCtx::interval(20)?, [1, 2, 5, 11, 13, 20])?;
    println!("A = {a}");
    for kind in [RepKind::Sigma(2), RepKind::Delta, RepKind::R2, RepKind::F3, RepKind::G1, RepKind::G2, RepKind::F4] {
        let p = rep_profile(&a, kind)?;
        let m = sum_square_stats(&p);
        println!("{kind:>8}: sum {:>5}  sum of squares {:>6}  max {}", m.sum, m.sum_of_squares, m.max);
    }
    print!("{}", profile_csv(&rep_profile(&a, RepKind::F3)?));

    let ap = count_3aps(&a)?;
    println!("3-APs: {} trivial, {} nontrivial", ap.trivial, ap.nontrivial);

    let d = decompose_same_sum(&a, Variant::S)?;
    println!("same-sum classes: m = {}, M = {}", d.m, d.big_m);
    for e in &d.entries {
        println!("  sum {:>3}: {:?}", e.sum, e.pairs.iter().map(|(x, y)| (x.0, y.0)).collect::<Vec<_>>());
    }
    Ok(())
}
