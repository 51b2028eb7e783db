//! The upper-bound constants `c_k⁺`, `c_k*` and the coefficients of
//! `N^{1/k}` they yield, plus the large-`k` ratio check.
//!
//! The `c` values are exact integers. Seeds: `c₂⁺ = c₂* = 2`, `c₃⁺ = 18`,
//! `c₃* = 54`. Recursion for even `k`: `c_k = k^k c_{k/2}`; for odd
//! `k = 2l + 1`: `c_k = max(k^{k+1} c_l, k^{k-1} c_{l+1})`.
//!
//! The coefficient of `N^{1/k}` is `(k^{k+1} c_{k/2})^{1/k}` for even `k` and
//! `(k^k max(k² c_l, c_{l+1}))^{1/k}` for odd `k`, except where a sharper
//! constant is proved directly: `18^{1/3}` and `272^{1/4}` for the plus
//! flavor at `k = 3, 4`, and `162^{1/3}` for the star flavor at `k = 3`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::verify::Flavor;

/// Largest `k` tabulated by [`constants_table`].
pub const MAX_K: usize = 8;

/// Where a coefficient comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Recursion,
    Theorem,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub k: usize,
    pub flavor: Flavor,
    /// Radicand `r` with coefficient `r^{1/k}`.
    pub radicand: u128,
    pub value: f64,
    /// `value` rounded up to the nearest tenth.
    pub display: f64,
    pub source: Source,
    /// Ruzsa's earlier coefficient `k^{2 - 1/k}`, for comparison.
    pub ruzsa: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsLedger {
    pub c_plus: BTreeMap<usize, u128>,
    pub c_star: BTreeMap<usize, u128>,
    /// Entries for `k = 3..=8`, star flavor first.
    pub coefficients: Vec<Coefficient>,
}

impl ConstantsLedger {
    pub fn coefficient(&self, k: usize, flavor: Flavor) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.k == k && c.flavor == flavor)
    }
}

/// Round up to the nearest tenth.
pub fn ceil_tenth(v: f64) -> f64 {
    (v * 10.0).ceil() / 10.0
}

/// Distance from `v` to the nearest multiple of `0.1`.
pub fn tenth_boundary_distance(v: f64) -> f64 {
    let t = v * 10.0;
    (t - t.round()).abs() / 10.0
}

fn recurse(seed2: u128, seed3: u128) -> BTreeMap<usize, u128> {
    let mut c = BTreeMap::from([(2usize, seed2), (3usize, seed3)]);
    for k in 4..=MAX_K {
        let kk = k as u128;
        let v = if k % 2 == 0 {
            kk.pow(k as u32) * c[&(k / 2)]
        } else {
            let l = k / 2;
            (kk.pow(k as u32 + 1) * c[&l]).max(kk.pow(k as u32 - 1) * c[&(l + 1)])
        };
        c.insert(k, v);
    }
    c
}

fn radicand(k: usize, c: &BTreeMap<usize, u128>) -> u128 {
    let kk = k as u128;
    if k % 2 == 0 {
        kk.pow(k as u32 + 1) * c[&(k / 2)]
    } else {
        let l = k / 2;
        kk.pow(k as u32) * (kk * kk * c[&l]).max(c[&(l + 1)])
    }
}

/// Build the ledger of constants and coefficients for `k ≤ 8`.
pub fn constants_table() -> ConstantsLedger {
    let c_plus = recurse(2, 18);
    let c_star = recurse(2, 54);
    let mut coefficients = Vec::new();
    for (flavor, c) in [(Flavor::Star, &c_star), (Flavor::Plus, &c_plus)] {
        for k in 3..=MAX_K {
            let direct = match (flavor, k) {
                (Flavor::Plus, 3) => Some(18),
                (Flavor::Plus, 4) => Some(272),
                (Flavor::Star, 3) => Some(162),
                _ => None,
            };
            let (rad, source) = match direct {
                Some(r) => (r, Source::Theorem),
                None => (radicand(k, c), Source::Recursion),
            };
            let value = (rad as f64).powf(1.0 / k as f64);
            coefficients.push(Coefficient {
                k,
                flavor,
                radicand: rad,
                value,
                display: ceil_tenth(value),
                source,
                ruzsa: (k as f64).powf(2.0 - 1.0 / k as f64),
            });
        }
    }
    ConstantsLedger { c_plus, c_star, coefficients }
}

/// The ratio `Π (2^{-i} + 2/k)^{2^{-i}} / Π (2^{-i})^{2^{-i}}` over
/// `i = 1..=⌊log₂ k⌋`, with the ceiling `e^{1/k}` it is compared against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRatio {
    pub k: u64,
    pub ratio: f64,
    /// `e^{1/k}`.
    pub ceiling: f64,
    /// `e^{2⌊log₂ k⌋/k}`, what `1 + x ≤ e^x` gives term by term.
    pub term_ceiling: f64,
    /// `Π (2^{-i})^{2^{-i}}`, tending to `1/4`.
    pub pure_product: f64,
}

impl AsymptoticRatio {
    pub fn within_ceiling(&self) -> bool {
        self.ratio >= 1.0 && self.ratio <= self.ceiling
    }

    pub fn within_term_ceiling(&self) -> bool {
        self.ratio >= 1.0 && self.ratio <= self.term_ceiling
    }
}

pub fn asymptotic_ratio(k: u64) -> Result<AsymptoticRatio> {
    if k < 8 {
        return domain("the ratio is tabulated for k >= 8");
    }
    let top = 63 - k.leading_zeros() as i32;
    let kf = k as f64;
    let mut log_ratio = 0.0;
    let mut log_pure = 0.0;
    for i in 1..=top {
        let w = 2f64.powi(-i);
        log_ratio += w * (1.0 + 2f64.powi(i + 1) / kf).ln();
        log_pure += w * w.ln();
    }
    Ok(AsymptoticRatio {
        k,
        ratio: log_ratio.exp(),
        ceiling: (1.0 / kf).exp(),
        term_ceiling: (2.0 * top as f64 / kf).exp(),
        pure_product: log_pure.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_and_recursion() {
        let t = constants_table();
        assert_eq!(t.c_star[&4], 512);
        assert_eq!(t.c_plus[&4], 512);
        assert_eq!(t.c_plus[&3], 18);
        assert_eq!(t.c_star[&5], 5u128.pow(4) * 54);
    }

    #[test]
    fn documented_coefficients() {
        let t = constants_table();
        let s4 = t.coefficient(4, Flavor::Star).unwrap();
        assert!((s4.value - 6.727).abs() < 1e-3);
        assert_eq!(s4.display, 6.8);
        let s8 = t.coefficient(8, Flavor::Star).unwrap();
        assert!((s8.value - 2f64.powf(4.5)).abs() < 1e-9);
        assert_eq!(s8.display, 22.7);
        assert_eq!(t.coefficient(3, Flavor::Plus).unwrap().display, 2.7);
    }

    #[test]
    fn ratio_is_at_least_one() {
        let r = asymptotic_ratio(8).unwrap();
        assert!(r.ratio >= 1.0);
        assert!(r.within_term_ceiling());
        assert!(asymptotic_ratio(4).is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(ceil_tenth(2.621), 2.7);
        assert_eq!(ceil_tenth(10.93), 11.0);
        assert!(tenth_boundary_distance(2.6) < 1e-12);
    }
}
