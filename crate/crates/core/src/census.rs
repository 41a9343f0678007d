//! Survival depths and range censuses.
//!
//! The survival depth σ(x) is the first n at which x's action turns
//! impermissible. Scanning is incremental — one multiply by 3 per depth,
//! testing bit n-1 of x*3^n — and never assumes the closed form
//! σ(x) = v₂(x) + 1; that identity is what the census verifies. Range
//! censuses run in parallel over contiguous chunks whose partial
//! histograms merge by addition, so results are independent of the
//! partitioning.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::orbit::{self, FracPart, OrbitQuery};

/// Default chunk width for parallel censuses.
const DEFAULT_CHUNK: u64 = 1 << 16;

/// First impermissible depth of one x, with the exact violation value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivalRecord {
    pub x: BigUint,
    pub depth: u32,
    pub violation: FracPart,
}

/// Survival-depth histogram over x = 1..=range_end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub range_end: u64,
    pub max_depth: u32,
    /// depth -> count, nonzero counts only.
    pub histogram: BTreeMap<u32, u64>,
    /// n -> count of x <= range_end still permissible at every depth <= n.
    pub survivors_at: BTreeMap<u32, u64>,
}

/// Census depth that the closed form makes sufficient: 2 + floor(log2 N).
pub fn default_census_depth(range_end: u64) -> u32 {
    assert!(range_end >= 1);
    2 + range_end.ilog2()
}

/// v₂(x) + 1 for x >= 1: the depth the residue structure predicts.
pub fn predicted_depth(x: &BigUint) -> u32 {
    assert!(!x.is_zero(), "x must be at least 1");
    let v2 = x.trailing_zeros().expect("nonzero");
    u32::try_from(v2 + 1).expect("2-adic valuation out of range")
}

/// Scans depths 1, 2, ... and returns the first impermissible one with
/// its exact violation value. Errs with a horizon error if x stays
/// permissible through max_depth.
pub fn survival_depth(x: &BigUint, max_depth: u32) -> Result<SurvivalRecord> {
    if x.is_zero() {
        return Err(Error::BadArgument("x must be at least 1".into()));
    }
    if max_depth == 0 {
        return Err(Error::BadArgument("max_depth must be at least 1".into()));
    }
    let depth = if max_depth <= 64 {
        // x*3^n mod 2^64 only depends on x's low word.
        scan_word(x.iter_u64_digits().next().unwrap_or(0), max_depth)
    } else {
        scan_big(x, max_depth)
    };
    match depth {
        Some(depth) => {
            let violation =
                orbit::frac_part(&OrbitQuery::new(x.clone(), depth)?, max_depth)?;
            debug_assert!(!violation.is_permissible());
            Ok(SurvivalRecord { x: x.clone(), depth, violation })
        }
        None => Err(Error::HorizonExhausted { max_depth }),
    }
}

/// First n <= max_depth with bit n-1 of x*3^n set; wrapping arithmetic is
/// exact mod 2^64, enough for max_depth <= 64.
fn scan_word(x: u64, max_depth: u32) -> Option<u32> {
    let mut t = x;
    for n in 1..=max_depth {
        t = t.wrapping_mul(3);
        if t >> (n - 1) & 1 == 1 {
            return Some(n);
        }
    }
    None
}

fn scan_big(x: &BigUint, max_depth: u32) -> Option<u32> {
    let mask = (BigUint::from(1u32) << max_depth as usize) - BigUint::from(1u32);
    let mut t = x & &mask;
    for n in 1..=max_depth {
        t = (t * 3u32) & &mask;
        if t.bit(u64::from(n) - 1) {
            return Some(n);
        }
    }
    None
}

/// Histogram of survival depths over one contiguous chunk of x values.
fn chunk_histogram(lo: u64, hi: u64, max_depth: u32) -> Result<Vec<u64>> {
    let mut hist = vec![0u64; max_depth as usize];
    if max_depth <= 64 {
        for x in lo..=hi {
            match scan_word(x, max_depth) {
                Some(d) => hist[d as usize - 1] += 1,
                None => return Err(Error::HorizonExhausted { max_depth }),
            }
        }
    } else {
        for x in lo..=hi {
            match scan_big(&BigUint::from(x), max_depth) {
                Some(d) => hist[d as usize - 1] += 1,
                None => return Err(Error::HorizonExhausted { max_depth }),
            }
        }
    }
    Ok(hist)
}

/// Census over x = 1..=range_end with the default chunk width.
pub fn census(range_end: u64, max_depth: u32) -> Result<CensusReport> {
    census_with_chunk_size(range_end, max_depth, DEFAULT_CHUNK)
}

/// Census with an explicit chunk width; the result is identical for every
/// width because partial histograms merge by addition.
pub fn census_with_chunk_size(
    range_end: u64,
    max_depth: u32,
    chunk_size: u64,
) -> Result<CensusReport> {
    if range_end == 0 {
        return Err(Error::BadArgument("range end N must be at least 1".into()));
    }
    if max_depth == 0 {
        return Err(Error::BadArgument("max_depth must be at least 1".into()));
    }
    let chunk = chunk_size.max(1);
    let n_chunks = range_end.div_ceil(chunk);
    let counts = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk + 1;
            let hi = (lo + chunk - 1).min(range_end);
            chunk_histogram(lo, hi, max_depth)
        })
        .try_reduce(
            || vec![0u64; max_depth as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;

    let histogram: BTreeMap<u32, u64> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i as u32 + 1, c))
        .collect();
    let mut survivors_at = BTreeMap::new();
    let mut fallen = 0u64;
    for (i, &c) in counts.iter().enumerate() {
        fallen += c;
        survivors_at.insert(i as u32 + 1, range_end - fallen);
    }
    Ok(CensusReport { range_end, max_depth, histogram, survivors_at })
}

impl CensusReport {
    pub fn to_json(&self) -> String {
        let hist: serde_json::Map<String, serde_json::Value> = self
            .histogram
            .iter()
            .map(|(d, c)| (d.to_string(), (*c).into()))
            .collect();
        let surv: serde_json::Map<String, serde_json::Value> = self
            .survivors_at
            .iter()
            .map(|(n, c)| (n.to_string(), (*c).into()))
            .collect();
        serde_json::json!({
            "N": self.range_end,
            "histogram": hist,
            "survivors_at": surv,
        })
        .to_string()
    }

    /// Histogram rows in depth order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("depth,count\n");
        for (d, c) in &self.histogram {
            out.push_str(&format!("{d},{c}\n"));
        }
        out
    }
}
