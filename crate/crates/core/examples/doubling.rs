//! A ∪ (A + N) turns a B_k set in Z_N into a B_k⁺ set of twice the size in
//! Z_2N (odd k). The result is never B_k, since a + a' + (b + N) equals
//! a + (a' + N) + b.

use sidon::constructions::{bose_chowla, plus_doubling};
use sidon::counting::count_3aps;
use sidon::verify::{verify, Flavor};

fn main() -> sidon::error::Result<()> {
    for (p, e, k) in [(2u64, 1u32, 3u32), (3, 1, 3), (2, 2, 3), (5, 1, 3), (2, 1, 5), (3, 1, 5)] {
        let a = bose_chowla(p, e, k)?;
        let d = plus_doubling(&a, k as usize)?;
        let plus = verify(&d, k as usize, Flavor::Plus)?;
        let b = verify(&d, k as usize, Flavor::B)?;
        println!("q={} k={k}: {a} -> {d}", p.pow(e));
        println!("    B_{k}+ {}, B_{k} {}", plus.holds, b.holds);
        if let Some(w) = b.witness {
            println!("    B_{k} witness {w}");
        }
        // The only trivial progressions are 2a = 2a and 2a = 2(a + N).
        println!("    trivial 3-APs {} = 2|A+|", count_3aps(&d)?.trivial);
    }
    Ok(())
}
