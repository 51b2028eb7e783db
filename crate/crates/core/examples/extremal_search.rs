//! Exact maximum sizes by branch and bound, cross-checked against the
//! power-set oracle where that is cheap.
//!
//!     cargo run --release --example extremal_search -- interval 3 plus 24

use sidon::search::{bound_check, extremal, extremal_oracle, Family, SearchOptions, ORACLE_MAX_N};
use sidon::verify::Flavor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (family, k, flavor, n_max): (Family, usize, Flavor, u64) = match &args[..] {
        [f, k, fl, n] => (f.parse()?, k.parse()?, fl.parse()?, n.parse()?),
        [] => (Family::Interval, 2, Flavor::B, 30),
        _ => return Err("usage: extremal_search FAMILY K FLAVOR N_MAX".into()),
    };
    let opts = SearchOptions { record_time: true, ..SearchOptions::default() };

    println!("{family} k={k} {flavor}");
    println!("   N  value  optima      nodes   seconds  oracle");
    for n in 1..=n_max {
        let r = extremal(family, k, flavor, n, &opts)?;
        bound_check(&r)?;
        let oracle = if n <= ORACLE_MAX_N.min(16) {
            extremal_oracle(family, k, flavor, n)?.to_string()
        } else {
            "-".into()
        };
        println!(
            "{:>4} {:>6} {:>7} {:>10} {:>9.4}  {oracle}",
            n,
            r.value,
            r.optima.len(),
            r.nodes_explored,
            r.wall_time.unwrap_or(0.0)
        );
    }
    let last = extremal(family, k, flavor, n_max, &SearchOptions::default())?;
    println!("first optimum at N={n_max}: {:?}", last.optima[0]);
    for c in bound_check(&last)?.checks {
        println!("  {} : {} <= {:.3} ({})", c.name, c.lhs, c.rhs, if c.asserted { "asserted" } else { "reported" });
    }
    Ok(())
}
