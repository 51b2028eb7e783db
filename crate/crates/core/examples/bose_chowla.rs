//! Bose–Chowla B_k sets: q elements of Z_{q^k - 1} whose k-fold sums are
//! all distinct.
//!
//!     cargo run --example bose_chowla -- 5 1 3

use sidon::constructions::{bose_chowla, bose_chowla_generator};
use sidon::verify::{verify, Flavor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (p, e, k) = match args[..] {
        [p, e, k] => (p, e as u32, k as u32),
        [] => (2, 1, 3),
        _ => return Err("usage: bose_chowla P E K".into()),
    };

    let (field, theta) = bose_chowla_generator(p, e, k)?;
    println!("GF({}^{}) with modulus coefficients {:?}", p, field.degree(), field.modulus());
    println!("generator of the multiplicative group, as coefficients: {:?}", theta.coeffs());

    let a = bose_chowla(p, e, k)?;
    println!("A = {a}  (|A| = {})", a.len());
    let v = verify(&a, k as usize, Flavor::B)?;
    println!("B_{k}: {}", if v.holds { "holds" } else { "fails" });

    // Sizes for the small prime powers.
    for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let q = u64::pow(p, e);
        let row: Vec<String> = (2..=4)
            .map(|k| match bose_chowla(p, e, k) {
                Ok(a) => format!("k={k}: {} in Z_{}", a.len(), a.ctx().size()),
                Err(err) => format!("k={k}: {err}"),
            })
            .collect();
        println!("q = {q:>2}  {}", row.join("   "));
    }
    Ok(())
}
