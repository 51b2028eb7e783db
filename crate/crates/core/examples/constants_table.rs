//! The coefficient table for k = 3..8 next to the older k^(2 - 1/k), and
//! the large-k ratio with both candidate ceilings.

use sidon::constants::{asymptotic_ratio, constants_table};
use sidon::verify::Flavor;

fn main() -> sidon::error::Result<()> {
    let t = constants_table();
    println!(" k   B_k*        B_k+        k^(2-1/k)");
    for k in 3..=8 {
        let s = t.coefficient(k, Flavor::Star).unwrap();
        let p = t.coefficient(k, Flavor::Plus).unwrap();
        println!("{k:>2}   {:>5.1} N^1/{k}  {:>5.1} N^1/{k}  {:>7.3}", s.display, p.display, s.ruzsa);
    }
    println!("c_k+: {:?}", t.c_plus);
    println!("c_k*: {:?}", t.c_star);

    println!();
    println!("      k     ratio    e^(1/k)  e^(2 log2(k)/k)  pure product");
    let mut k = 8u64;
    while k <= 4096 {
        let r = asymptotic_ratio(k)?;
        println!(
            "{k:>7}  {:.6}  {:.6}  {:.6}         {:.6}",
            r.ratio, r.ceiling, r.term_ceiling, r.pure_product
        );
        k *= 2;
    }
    Ok(())
}
