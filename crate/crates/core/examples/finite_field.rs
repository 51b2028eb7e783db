//! GF(p^m) arithmetic: minimal irreducible moduli, primitive elements,
//! discrete logarithms and subfields.

use sidon::field::{find_irreducible, find_primitive, DlogTable, FieldCtx};

fn main() -> sidon::error::Result<()> {
    for (p, m) in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (7, 1)] {
        let f = FieldCtx::minimal(p, m)?;
        let g = find_primitive(&f)?;
        println!("GF({p}^{m}): modulus {:?}, primitive {:?}", find_irreducible(p, m)?, g.coeffs());
    }

    let f8 = FieldCtx::minimal(2, 3)?;
    let x = f8.x();
    let x3 = f8.pow(&x, 3);
    println!("in GF(8): x^3 = {:?}", x3.coeffs());
    let logs = DlogTable::build(&f8, &x)?;
    for code in 1..8 {
        let y = f8.decode(code);
        println!("  log_x {:?} = {}", y.coeffs(), logs.log(&f8, &y)?);
    }

    let f16 = FieldCtx::minimal(2, 4)?;
    let sub = f16.subfield(2)?;
    println!("GF(4) inside GF(16): {:?}", sub.iter().map(|e| f16.encode(e)).collect::<Vec<_>>());
    Ok(())
}
