//! Independent oracles shared by the integration suites. Everything here
//! deliberately avoids the library's modular fast paths: fractional parts
//! come from full products, survival depths from a plain rational walk.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

/// Numerator of {x(3/2)^n} over 2^n, via the full product x·3^n. No
/// modular exponentiation: the whole integer is materialized and reduced
/// once.
pub fn oracle_frac_numerator(x: &BigUint, n: u32) -> BigUint {
    let full = x * BigUint::from(3u32).pow(n);
    full & ((BigUint::one() << n as usize) - BigUint::one())
}

/// {x(3/2)^n} as a rational in lowest terms, same full-product route.
pub fn oracle_frac_ratio(x: &BigUint, n: u32) -> BigRational {
    BigRational::new(
        BigInt::from(oracle_frac_numerator(x, n)),
        BigInt::one() << n as usize,
    )
}

/// Interval refinement replayed in pure integer arithmetic over the
/// common denominator D = 2·3^N: endpoints are integers, the step-n bands
/// are [j·B, j·B + B/2) with B = 2^{n+1}·3^{N−n}. Same half-open
/// conventions and merge rule as the library, none of its rationals.
pub fn scaled_refine(g0: u64, n_depth: u32) -> Vec<(u128, u128)> {
    let d: u128 = 2 * 3u128.pow(n_depth);
    let g = u128::from(g0) * d;
    let mut intervals = vec![(g, g + d / 2)];
    for n in 1..=n_depth {
        let band = 2u128.pow(n + 1) * 3u128.pow(n_depth - n);
        let half_band = band / 2;
        let mut next: Vec<(u128, u128)> = Vec::new();
        for &(lo, hi) in &intervals {
            let mut j = (lo / band).saturating_sub(1);
            loop {
                let band_lo = j * band;
                if band_lo >= hi {
                    break;
                }
                let plo = band_lo.max(lo);
                let phi = (band_lo + half_band).min(hi);
                if plo < phi {
                    match next.last_mut() {
                        Some(last) if last.1 == plo => last.1 = phi,
                        _ => next.push((plo, phi)),
                    }
                }
                j += 1;
            }
        }
        intervals = next;
        if intervals.is_empty() {
            break;
        }
    }
    intervals
}

/// Slow survival simulator: walks x(3/2)^n as a complete rational and
/// subtracts the floor at every depth. Returns the first depth whose
/// fractional part reaches 1/2 and that exact fractional value.
pub fn slow_survival(x: u64, max_depth: u32) -> Option<(u32, BigRational)> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let x = BigInt::from(x);
    for n in 1..=max_depth {
        let value = BigRational::new(&x * BigInt::from(3).pow(n), BigInt::one() << n as usize);
        let frac = &value - value.floor();
        if frac >= half {
            return Some((n, frac));
        }
    }
    None
}
