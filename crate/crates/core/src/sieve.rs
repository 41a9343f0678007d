//! Residue sieves mod 2^n for the permissible sets X_n and Y_n.
//!
//! Whether x has a permissible action at depth n depends only on
//! x mod 2^n, so X_n is a union of residue classes and materializes as a
//! bit vector of length 2^n. Representatives follow the convention
//! 0 < a <= 2^n: bit r stands for the class of r when r > 0 and for the
//! class of 2^n when r = 0.
//!
//! The sieve walks r = 0, 1, 2, ... keeping t = r * 3^n mod 2^n by a
//! single addition per step; bit r is set iff t < 2^(n-1). Prefix
//! intersections lift each X_i to the target modulus and AND bit vectors
//! in place, so peak memory is two vectors of the target size.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::orbit::{self, ActionKind, OrbitQuery};

/// Default limit on the sieve exponent n. 2^24 bits is 2 MiB per set and
/// keeps exhaustive verification runs under a minute.
pub const DEFAULT_EXPONENT_CAP: u32 = 24;

/// One congruence class of positive integers mod a power of two, with the
/// representative normalized to 0 < a <= 2^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueClass {
    representative: BigUint,
    modulus_exp: u32,
}

impl ResidueClass {
    pub fn new(representative: BigUint, modulus_exp: u32) -> Result<Self> {
        if modulus_exp == 0 {
            return Err(Error::BadArgument("modulus exponent must be at least 1".into()));
        }
        let modulus = BigUint::one() << modulus_exp as usize;
        if representative == BigUint::ZERO || representative > modulus {
            return Err(Error::BadArgument(format!(
                "representative must satisfy 0 < a <= 2^{modulus_exp}"
            )));
        }
        Ok(ResidueClass { representative, modulus_exp })
    }

    pub fn representative(&self) -> &BigUint {
        &self.representative
    }

    pub fn modulus_exp(&self) -> u32 {
        self.modulus_exp
    }

    /// True iff the positive integer x lies in the denoted set
    /// {a, a + 2^n, a + 2*2^n, ...}.
    pub fn contains(&self, x: &BigUint) -> bool {
        let mask = (BigUint::one() << self.modulus_exp as usize) - BigUint::one();
        (x & &mask) == (&self.representative & &mask)
    }
}

/// A subset of the residue classes mod 2^n as a bit vector of length 2^n.
/// Bit r corresponds to the representative r when r > 0 and 2^n when r = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSet {
    exponent: u32,
    bits: Vec<u64>,
}

fn word_count(exponent: u32) -> usize {
    (1u64 << exponent).div_ceil(64) as usize
}

impl ResidueSet {
    pub fn empty(exponent: u32) -> Self {
        assert!((1..64).contains(&exponent), "exponent out of range");
        ResidueSet { exponent, bits: vec![0; word_count(exponent)] }
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Number of residue classes (set bits).
    pub fn card(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn contains_bit(&self, r: u64) -> bool {
        debug_assert!(r < 1u64 << self.exponent);
        self.bits[(r >> 6) as usize] >> (r & 63) & 1 == 1
    }

    pub fn set_bit(&mut self, r: u64) {
        debug_assert!(r < 1u64 << self.exponent);
        self.bits[(r >> 6) as usize] |= 1u64 << (r & 63);
    }

    pub fn clear_bit(&mut self, r: u64) {
        debug_assert!(r < 1u64 << self.exponent);
        self.bits[(r >> 6) as usize] &= !(1u64 << (r & 63));
    }

    /// In-place intersection. Both sets must share an exponent.
    pub fn intersect_with(&mut self, other: &ResidueSet) {
        assert_eq!(self.exponent, other.exponent, "exponent mismatch in intersection");
        for (w, o) in self.bits.iter_mut().zip(&other.bits) {
            *w &= o;
        }
    }

    /// Set bits in ascending bit-index order.
    pub fn iter_bits(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &word)| {
            let base = (i as u64) << 6;
            std::iter::successors(
                if word == 0 { None } else { Some(word) },
                |w| {
                    let w = w & (w - 1);
                    if w == 0 { None } else { Some(w) }
                },
            )
            .map(move |w| base + u64::from(w.trailing_zeros()))
        })
    }

    /// Class representatives in ascending numeric order: bits 1..2^n map to
    /// themselves, bit 0 maps to 2^n and therefore sorts last.
    pub fn representatives(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.iter_bits().filter(|&r| r != 0).collect();
        if self.contains_bit(0) {
            out.push(1u64 << self.exponent);
        }
        out
    }

    /// Bytes in the serialized order: bit r lives at byte r>>3, position
    /// r&7 (LSB-first). Length is ceil(2^n / 8).
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let byte_len = self.byte_len();
        let mut out = Vec::with_capacity(byte_len);
        for w in &self.bits {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.truncate(byte_len);
        out
    }

    pub fn byte_len(&self) -> usize {
        (1u64 << self.exponent).div_ceil(8) as usize
    }

    /// Inverse of `to_le_bytes`. Rejects wrong lengths and nonzero padding
    /// bits beyond 2^n.
    pub fn from_le_bytes(exponent: u32, bytes: &[u8]) -> Result<Self> {
        if exponent == 0 || exponent >= 64 {
            return Err(Error::MalformedCache(format!(
                "exponent {exponent} out of supported range"
            )));
        }
        let mut set = ResidueSet::empty(exponent);
        let expected = set.byte_len();
        if bytes.len() != expected {
            return Err(Error::MalformedCache(format!(
                "payload is {} bytes, expected {expected} for exponent {exponent}",
                bytes.len()
            )));
        }
        for (i, &b) in bytes.iter().enumerate() {
            set.bits[i >> 3] |= u64::from(b) << ((i & 7) << 3);
        }
        let used = 1u64 << exponent;
        if used < 8 && u64::from(bytes[0]) >> used != 0 {
            return Err(Error::MalformedCache(
                "padding bits beyond 2^n must be zero".into(),
            ));
        }
        Ok(set)
    }
}

fn check_exponent(n: u32, exponent_cap: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::BadArgument("exponent n must be at least 1".into()));
    }
    if n > exponent_cap || n >= 64 {
        return Err(Error::CapExceeded {
            what: "sieve exponent (use the streaming survival census for larger n)",
            requested: u64::from(n),
            cap: u64::from(exponent_cap.min(63)),
        });
    }
    Ok(())
}

/// The permissible set X_n as residues mod 2^n.
pub fn compute_xn(n: u32, exponent_cap: u32) -> Result<ResidueSet> {
    check_exponent(n, exponent_cap)?;
    let size = 1u64 << n;
    let mask = size - 1;
    let half = 1u64 << (n - 1);
    let step = {
        let s = orbit::pow3_mod_pow2(u64::from(n), n);
        s.iter_u64_digits().next().unwrap_or(0)
    };
    let mut set = ResidueSet::empty(n);
    let mut t: u64 = 0;
    for r in 0..size {
        if t < half {
            set.set_bit(r);
        }
        t = (t + step) & mask;
    }
    // The class of 2^n is always permissible: its fractional parts vanish.
    assert!(set.contains_bit(0), "class of 2^n missing from X_{n}");
    Ok(set)
}

/// The set Y_n: X_n without the class of 2^n (bit 0 cleared).
pub fn compute_yn(n: u32, exponent_cap: u32) -> Result<ResidueSet> {
    let mut set = compute_xn(n, exponent_cap)?;
    set.clear_bit(0);
    Ok(set)
}

/// Re-expresses a set mod 2^i as the same set of integers mod 2^target:
/// output bit r copies input bit r mod 2^i.
pub fn lift(set: &ResidueSet, target_exponent: u32) -> Result<ResidueSet> {
    let source = set.exponent;
    if target_exponent < source {
        return Err(Error::BadArgument(format!(
            "cannot lift exponent {source} down to {target_exponent}"
        )));
    }
    if target_exponent >= 64 {
        return Err(Error::BadArgument("lift target exponent must be below 64".into()));
    }
    if target_exponent == source {
        return Ok(set.clone());
    }
    let mut out = ResidueSet::empty(target_exponent);
    if source >= 6 {
        // The source occupies whole words; the lifted vector is the source
        // word pattern repeated.
        let src_words = set.bits.len();
        for (i, w) in out.bits.iter_mut().enumerate() {
            *w = set.bits[i % src_words];
        }
    } else {
        // Tile the sub-word pattern across one word, then replicate.
        let period = 1u64 << source;
        let pattern = set.bits[0] & ((1u64 << period) - 1);
        let mut word = 0u64;
        let mut shift = 0;
        while shift < 64 {
            word |= pattern << shift;
            shift += period as u32;
        }
        if target_exponent < 6 {
            word &= (1u64 << (1u64 << target_exponent)) - 1;
        }
        for w in out.bits.iter_mut() {
            *w = word;
        }
    }
    Ok(out)
}

/// The intersection ⋂_{i=1}^n X_i as residues mod 2^n, by iterative
/// lift-and-AND from i = 1 upward.
pub fn intersect_prefix(n: u32, exponent_cap: u32) -> Result<ResidueSet> {
    check_exponent(n, exponent_cap)?;
    let mut acc = lift(&compute_xn(1, exponent_cap)?, n)?;
    for i in 2..=n {
        let xi = lift(&compute_xn(i, exponent_cap)?, n)?;
        acc.intersect_with(&xi);
    }
    Ok(acc)
}

/// True iff the positive integer x lies in one of the set's classes.
pub fn membership(x: &BigUint, set: &ResidueSet) -> bool {
    let mask = (1u64 << set.exponent) - 1;
    let r = x.iter_u64_digits().next().unwrap_or(0) & mask;
    set.contains_bit(r)
}

/// Outcome of a shift-invariance sweep: permissibility at depth n must be
/// constant on each class mod 2^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub exponent: u32,
    pub representatives_checked: u64,
    pub pairs_checked: u64,
    pub counterexample: Option<InvarianceCounterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceCounterexample {
    pub x0: BigUint,
    pub k: u64,
    pub base: ActionKind,
    pub shifted: ActionKind,
}

/// Samples representatives x0 in (0, 2^n] with a deterministic stride and
/// asserts action(x0 + k*2^n, n) == action(x0, n) for every k <= k_max.
/// A counterexample is reported, not raised.
pub fn class_invariance_check(
    n: u32,
    sample_count: u64,
    k_max: u64,
    exponent_cap: u32,
) -> Result<InvarianceReport> {
    check_exponent(n, exponent_cap)?;
    if sample_count == 0 {
        return Err(Error::BadArgument("sample_count must be at least 1".into()));
    }
    let size = 1u64 << n;
    let stride = (size / sample_count).max(1);
    let modulus = BigUint::one() << n as usize;
    let mut representatives_checked = 0;
    let mut pairs_checked = 0;
    let mut counterexample = None;

    'outer: for r in (0..size).step_by(stride as usize) {
        let x0 = if r == 0 { modulus.clone() } else { BigUint::from(r) };
        representatives_checked += 1;
        let base = orbit::action(&OrbitQuery::new(x0.clone(), n)?, orbit::DEFAULT_DEPTH_CAP)?;
        for k in 1..=k_max {
            let x = &x0 + &modulus * k;
            let shifted = orbit::action(&OrbitQuery::new(x, n)?, orbit::DEFAULT_DEPTH_CAP)?;
            pairs_checked += 1;
            if shifted != base {
                counterexample = Some(InvarianceCounterexample { x0, k, base, shifted });
                break 'outer;
            }
        }
    }

    Ok(InvarianceReport {
        exponent: n,
        representatives_checked,
        pairs_checked,
        counterexample,
    })
}

/// |X_n| / 2^n as an exact rational (an exploratory statistic).
pub fn density(n: u32, exponent_cap: u32) -> Result<BigRational> {
    let set = compute_xn(n, exponent_cap)?;
    Ok(BigRational::new(
        BigInt::from(set.card()),
        BigInt::from(1u64 << n),
    ))
}
