//! The group H of 2x2 upper triangular matrices over F_4 with determinant
//! one, the pair {α, β}, and the product construction A × {α, β}.

use std::sync::Arc;

use sidon::constructions::{build_h_group, product_construction};
use sidon::doc::{to_json, GroupDoc};
use sidon::group::{word_product, TableGroup};
use sidon::search::find_word_set;
use sidon::verify::{verify_word, Flavor};

fn main() -> sidon::error::Result<()> {
    let h = build_h_group();
    let ctx = h.ctx();
    let (a, b) = (h.alpha, h.beta);
    println!("|H| = {}, abelian: {}", h.group.order(), h.group.is_abelian());
    println!("alpha = {:?}, beta = {:?}", h.matrix(a), h.matrix(b));
    println!("alpha^3 = {}, beta^3 = {}", word_product(&ctx, &[a, a, a])?, word_product(&ctx, &[b, b, b])?);
    println!(
        "alpha^2 beta = {}, beta^2 alpha = {}",
        word_product(&ctx, &[a, a, b])?,
        word_product(&ctx, &[b, b, a])?
    );

    let pair = h.pair();
    println!("{{alpha, beta}} B_4+: {}", verify_word(&pair, 4, Flavor::Plus)?.holds);
    let v = verify_word(&pair, 4, Flavor::B)?;
    println!("{{alpha, beta}} B_4:  {} ({})", v.holds, v.witness.map(|w| w.to_string()).unwrap_or_default());

    // A non-abelian B_4 seed. S_4 has none of size two; S_5 does.
    let s5 = Arc::new(TableGroup::symmetric(5)?);
    let seed = find_word_set(&s5, 2, 4, Flavor::B)?.expect("S5 has a two-element B_4 set");
    println!("B_4 seed in S_5: {seed}");
    let prod = product_construction(&seed, &pair, 4)?;
    println!(
        "product in a group of order {}: {prod}, B_4+ {}",
        prod.ctx().size(),
        verify_word(&prod, 4, Flavor::Plus)?.holds
    );

    if std::env::args().any(|a| a == "--json") {
        print!("{}", to_json(&GroupDoc::from_h_group(&h))?);
    }
    Ok(())
}
