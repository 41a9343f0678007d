//! Exact interval refinement for Z-number candidates in a unit interval.
//!
//! A candidate x ∈ [g₀, g₀+1) must keep {x(3/2)^n} below 1/2 for every
//! n ≥ 0. The n = 0 constraint cuts the interval down to [g₀, g₀ + 1/2);
//! each later constraint intersects with the preimage of ⋃_j [j, j+1/2)
//! under multiplication by (3/2)^n, i.e. with the bands
//! [j·(2/3)^n, (j + 1/2)·(2/3)^n). All endpoints are exact rationals with
//! denominators dividing 2·3^n, intervals are half-open (boundary points
//! hitting exactly 1/2 are excluded), and the list is kept canonical —
//! sorted, disjoint, adjacent pieces merged.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio::ratio_to_string;

/// Default limit on the refinement depth N; denominators reach 2·3^N.
pub const DEFAULT_REFINE_CAP: u32 = 24;

/// The surviving subset of [g₀, g₀+1) after depth-N refinement, as a
/// canonical list of half-open intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSet {
    pub g0: u64,
    pub depth: u32,
    /// Sorted, pairwise disjoint, nonempty [lo, hi) pairs.
    pub intervals: Vec<(BigRational, BigRational)>,
}

impl IntervalSet {
    /// Exact total length.
    pub fn measure(&self) -> BigRational {
        self.intervals
            .iter()
            .fold(BigRational::zero(), |acc, (lo, hi)| acc + (hi - lo))
    }

    /// True iff x lies in some [lo, hi).
    pub fn contains_point(&self, x: &BigRational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo <= x && x < hi)
    }

    /// True iff every interval here sits inside an interval of `other`.
    /// Both lists are canonical, so component-wise containment suffices.
    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.intervals.iter().all(|(lo, hi)| {
            other
                .intervals
                .iter()
                .any(|(olo, ohi)| olo <= lo && hi <= ohi)
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "g0": self.g0,
            "depth": self.depth,
            "intervals": self
                .intervals
                .iter()
                .map(|(lo, hi)| vec![ratio_to_string(lo), ratio_to_string(hi)])
                .collect::<Vec<_>>(),
            "measure": ratio_to_string(&self.measure()),
        })
        .to_string()
    }
}

/// Appends [lo, hi), merging with the previous interval when adjacent.
/// Pieces arrive in ascending order, so this keeps the list canonical.
fn push_merged(out: &mut Vec<(BigRational, BigRational)>, lo: BigRational, hi: BigRational) {
    if let Some(last) = out.last_mut() {
        debug_assert!(last.1 <= lo);
        if last.1 == lo {
            last.1 = hi;
            return;
        }
    }
    out.push((lo, hi));
}

/// Refines [g₀, g₀+1) through the constraints n = 0..=N and returns the
/// surviving set. Band enumeration at each step is confined to the j
/// range meeting the current intervals, never the whole line.
pub fn refine(g0: u64, n_depth: u32, refine_cap: u32) -> Result<IntervalSet> {
    if n_depth > refine_cap {
        return Err(Error::CapExceeded {
            what: "refinement depth",
            requested: u64::from(n_depth),
            cap: u64::from(refine_cap),
        });
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let g = BigRational::from(BigInt::from(g0));
    // n = 0: {x} < 1/2 within [g₀, g₀+1).
    let mut intervals = vec![(g.clone(), &g + &half)];

    for n in 1..=n_depth {
        // Bands [j·t, (j + 1/2)·t) with t = (2/3)^n.
        let t = BigRational::new(
            BigInt::from(2u32).pow(n),
            BigInt::from(3u32).pow(n),
        );
        let half_t = &half * &t;
        let mut next = Vec::new();
        for (lo, hi) in &intervals {
            // Smallest j whose band can reach lo: (j + 1/2)·t > lo.
            let mut j = (lo / &t - &half).floor().to_integer();
            if j.is_negative() {
                j = BigInt::zero();
            }
            loop {
                let band_lo = BigRational::from(j.clone()) * &t;
                if &band_lo >= hi {
                    break;
                }
                let band_hi = &band_lo + &half_t;
                let piece_lo = if &band_lo > lo { band_lo } else { lo.clone() };
                let piece_hi = if &band_hi < hi { band_hi } else { hi.clone() };
                if piece_lo < piece_hi {
                    push_merged(&mut next, piece_lo, piece_hi);
                }
                j += 1;
            }
        }
        intervals = next;
        if intervals.is_empty() {
            break;
        }
    }

    Ok(IntervalSet { g0, depth: n_depth, intervals })
}
