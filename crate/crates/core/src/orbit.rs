//! Exact orbits of x*(3/2)^n for positive integers x.
//!
//! For integer x and n >= 1 the fractional part of x*(3/2)^n is the dyadic
//! rational (x*3^n mod 2^n) / 2^n, so every value in the orbit is computed
//! exactly from one modular product. Queries with n <= 62 run on machine
//! words with masking; deeper queries switch to arbitrary precision. The two
//! paths agree bit for bit on overlapping inputs.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default limit on the orbit depth n. Guards runaway big-integer growth;
/// desk-scale experiments sit far below it.
pub const DEFAULT_DEPTH_CAP: u32 = 4096;

/// Largest depth served by the machine-word fast path.
const WORD_DEPTH: u32 = 62;

/// A single orbit query: the integer x and the depth n, both at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitQuery {
    x: BigUint,
    n: u32,
}

impl OrbitQuery {
    pub fn new(x: BigUint, n: u32) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::BadArgument("x must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::BadArgument("depth n must be at least 1".into()));
        }
        Ok(OrbitQuery { x, n })
    }

    pub fn from_u64(x: u64, n: u32) -> Result<Self> {
        Self::new(BigUint::from(x), n)
    }

    pub fn x(&self) -> &BigUint {
        &self.x
    }

    pub fn depth(&self) -> u32 {
        self.n
    }
}

/// Exact value of a fractional part: `numerator / 2^depth` with
/// `0 <= numerator < 2^depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracPart {
    numerator: BigUint,
    depth: u32,
}

impl FracPart {
    fn new(numerator: BigUint, depth: u32) -> Self {
        debug_assert!(depth >= 1);
        debug_assert!(numerator.bits() <= u64::from(depth));
        FracPart { numerator, depth }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// The represented value in lowest terms.
    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator.clone()),
            BigInt::one() << self.depth as usize,
        )
    }

    /// True iff the value is strictly below 1/2, i.e. 2*numerator < 2^depth.
    pub fn is_permissible(&self) -> bool {
        (&self.numerator << 1u32) < (BigUint::one() << self.depth as usize)
    }

    /// True iff the value equals 1/2 exactly.
    pub fn is_half(&self) -> bool {
        self.numerator == BigUint::one() << (self.depth as usize - 1)
    }

    /// The action this value witnesses.
    pub fn action(&self) -> ActionKind {
        if self.is_permissible() {
            ActionKind::Permissible
        } else {
            ActionKind::Impermissible
        }
    }
}

impl PartialOrd for FracPart {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FracPart {
    fn cmp(&self, other: &Self) -> Ordering {
        // num1/2^d1 vs num2/2^d2 == num1*2^(d2-dmin) vs num2*2^(d1-dmin).
        let dmin = self.depth.min(other.depth);
        let lhs = &self.numerator << (other.depth - dmin) as usize;
        let rhs = &other.numerator << (self.depth - dmin) as usize;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for FracPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::ratio::ratio_to_string(&self.to_ratio()))
    }
}

/// Whether the fractional part stays below 1/2 (permissible) or reaches
/// it (impermissible). Exactly 1/2 counts as impermissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    Permissible,
    Impermissible,
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionKind::Permissible => write!(f, "permissible"),
            ActionKind::Impermissible => write!(f, "impermissible"),
        }
    }
}

/// Low-k-bit mask; k <= 64.
fn mask_u64(k: u32) -> u64 {
    debug_assert!(k <= 64);
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn mask_big(k: u32) -> BigUint {
    (BigUint::one() << k as usize) - BigUint::one()
}

/// Low 64 bits of a big integer.
fn low_u64(x: &BigUint) -> u64 {
    x.iter_u64_digits().next().unwrap_or(0)
}

/// 3^n mod 2^k on machine words. Wrapping multiplication is arithmetic
/// mod 2^64, so masking the result down to k bits is exact for k <= 64.
fn pow3_mod_u64(mut n: u64, k: u32) -> u64 {
    let mut acc: u64 = 1;
    let mut base: u64 = 3;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.wrapping_mul(base);
        }
        base = base.wrapping_mul(base);
        n >>= 1;
    }
    acc & mask_u64(k)
}

/// 3^n mod 2^k without materializing 3^n; k >= 1.
pub fn pow3_mod_pow2(n: u64, k: u32) -> BigUint {
    assert!(k >= 1, "modulus exponent k must be at least 1");
    if k <= 64 {
        return BigUint::from(pow3_mod_u64(n, k));
    }
    let mask = mask_big(k);
    let mut acc = BigUint::one();
    let mut base = BigUint::from(3u32);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc * &base) & &mask;
        }
        base = (&base * &base) & &mask;
        e >>= 1;
    }
    acc
}

fn check_depth(n: u32, depth_cap: u32) -> Result<()> {
    if n > depth_cap {
        Err(Error::CapExceeded {
            what: "orbit depth",
            requested: u64::from(n),
            cap: u64::from(depth_cap),
        })
    } else {
        Ok(())
    }
}

/// x*3^n mod 2^n for n on the machine-word path.
fn frac_numer_u64(x: &BigUint, n: u32) -> u64 {
    let m = mask_u64(n);
    let x_low = low_u64(x) & m;
    x_low.wrapping_mul(pow3_mod_u64(u64::from(n), 64)) & m
}

fn frac_numer_big(x: &BigUint, n: u32) -> BigUint {
    let m = mask_big(n);
    ((x & &m) * pow3_mod_pow2(u64::from(n), n)) & &m
}

/// The exact fractional part of x*(3/2)^n.
pub fn frac_part(q: &OrbitQuery, depth_cap: u32) -> Result<FracPart> {
    check_depth(q.n, depth_cap)?;
    let numerator = if q.n <= WORD_DEPTH {
        BigUint::from(frac_numer_u64(&q.x, q.n))
    } else {
        frac_numer_big(&q.x, q.n)
    };
    Ok(FracPart::new(numerator, q.n))
}

/// Classifies the query: permissible iff the fractional part is strictly
/// below 1/2.
pub fn action(q: &OrbitQuery, depth_cap: u32) -> Result<ActionKind> {
    Ok(frac_part(q, depth_cap)?.action())
}

/// Fractional parts for n = 1..=horizon, computed incrementally: one
/// multiply by 3 and one masking reduction per step. Bit-identical to
/// per-query `frac_part`.
pub fn orbit_prefix(x: &BigUint, horizon: u32, depth_cap: u32) -> Result<Vec<FracPart>> {
    if x.is_zero() {
        return Err(Error::BadArgument("x must be at least 1".into()));
    }
    if horizon == 0 {
        return Err(Error::BadArgument("horizon must be at least 1".into()));
    }
    check_depth(horizon, depth_cap)?;
    let mut out = Vec::with_capacity(horizon as usize);
    if horizon <= WORD_DEPTH {
        let m = mask_u64(horizon);
        let mut t = low_u64(x) & m;
        for n in 1..=horizon {
            t = t.wrapping_mul(3) & m;
            out.push(FracPart::new(BigUint::from(t & mask_u64(n)), n));
        }
    } else {
        let m = mask_big(horizon);
        let mut t = x & &m;
        for n in 1..=horizon {
            t = (t * 3u32) & &m;
            out.push(FracPart::new(&t & mask_big(n), n));
        }
    }
    Ok(out)
}

/// Exact range statistics of an orbit prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDiameter {
    pub inf: BigRational,
    pub sup: BigRational,
    pub diameter: BigRational,
    /// Least n at which the running diameter first reaches 1/3, if any.
    pub first_n_reaching_one_third: Option<u32>,
}

/// Infimum, supremum and diameter of { {x*(3/2)^n} : 1 <= n <= horizon },
/// plus the first depth at which the running diameter reaches 1/3.
pub fn orbit_diameter(x: &BigUint, horizon: u32, depth_cap: u32) -> Result<OrbitDiameter> {
    let parts = orbit_prefix(x, horizon, depth_cap)?;
    let one_third = BigRational::new(BigInt::one(), BigInt::from(3));
    let mut min = parts[0].clone();
    let mut max = parts[0].clone();
    let mut first_reach = None;
    for (i, fp) in parts.iter().enumerate() {
        if *fp < min {
            min = fp.clone();
        }
        if *fp > max {
            max = fp.clone();
        }
        if first_reach.is_none() && max.to_ratio() - min.to_ratio() >= one_third {
            first_reach = Some(i as u32 + 1);
        }
    }
    let inf = min.to_ratio();
    let sup = max.to_ratio();
    Ok(OrbitDiameter {
        diameter: &sup - &inf,
        inf,
        sup,
        first_n_reaching_one_third: first_reach,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn fp(x: u64, n: u32) -> FracPart {
        frac_part(&OrbitQuery::from_u64(x, n).unwrap(), DEFAULT_DEPTH_CAP).unwrap()
    }

    /// Independent oracle: build x*3^n / 2^n as a full rational and take
    /// the fractional part by subtracting the floor.
    fn oracle_frac(x: u64, n: u32) -> BigRational {
        let full = BigRational::new(
            BigInt::from(x) * BigInt::from(3u32).pow(n),
            BigInt::one() << n as usize,
        );
        &full - full.floor()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pow3_examples() {
        assert_eq!(pow3_mod_pow2(0, 1), BigUint::from(1u32));
        assert_eq!(pow3_mod_pow2(1, 2), BigUint::from(3u32));
        // oracle: direct big-integer power then reduction
        let direct = BigUint::from(3u32).pow(4) % BigUint::from(32u32);
        assert_eq!(direct, BigUint::from(17u32));
        assert_eq!(pow3_mod_pow2(4, 5), direct);
    }

    #[test]
    fn pow3_paths_agree() {
        for n in [0u64, 1, 2, 7, 63, 64, 100, 555] {
            for k in [1u32, 2, 31, 62, 63, 64, 65, 90, 130] {
                let big = {
                    let modulus = BigUint::one() << k as usize;
                    BigUint::from(3u32).modpow(&BigUint::from(n), &modulus)
                };
                assert_eq!(pow3_mod_pow2(n, k), big, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn frac_part_examples() {
        assert_eq!(fp(1, 1).to_ratio(), rat(1, 2));
        for n in [1u32, 3, 10, 40] {
            let x = 1u64 << n;
            assert!(fp(x, n).to_ratio().is_zero());
        }
        assert_eq!(fp(4, 3).to_ratio(), rat(1, 2));
        assert_eq!(fp(5, 3).to_ratio(), rat(7, 8));
        assert_eq!(oracle_frac(5, 3), rat(7, 8));
    }

    #[test]
    fn frac_part_matches_oracle_spot() {
        for (x, n) in [(1u64, 1u32), (5, 3), (12, 3), (7, 20), (123456789, 40)] {
            assert_eq!(fp(x, n).to_ratio(), oracle_frac(x, n), "x={x} n={n}");
        }
    }

    #[test]
    fn word_and_big_paths_agree() {
        // Force both code paths on the same inputs.
        for x in [1u64, 2, 3, 5, 255, 1 << 20, u64::MAX] {
            let xb = BigUint::from(x);
            for n in 1..=WORD_DEPTH {
                assert_eq!(
                    BigUint::from(frac_numer_u64(&xb, n)),
                    frac_numer_big(&xb, n),
                    "x={x} n={n}"
                );
            }
        }
    }

    #[test]
    fn action_examples() {
        let cap = DEFAULT_DEPTH_CAP;
        for x in [1u64, 3, 5, 99, 1001] {
            let q = OrbitQuery::from_u64(x, 1).unwrap();
            assert_eq!(action(&q, cap).unwrap(), ActionKind::Impermissible);
            assert!(fp(x, 1).is_half());
        }
        let q = OrbitQuery::from_u64(2, 1).unwrap();
        assert_eq!(action(&q, cap).unwrap(), ActionKind::Permissible);
        let q = OrbitQuery::from_u64(5, 3).unwrap();
        assert_eq!(action(&q, cap).unwrap(), ActionKind::Impermissible);
    }

    #[test]
    fn prefix_examples() {
        let one = BigUint::one();
        let parts = orbit_prefix(&one, 2, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(parts[0].to_ratio(), rat(1, 2));
        assert_eq!(parts[1].to_ratio(), rat(1, 4));

        for h in [1u32, 5, 17] {
            let x = BigUint::one() << h as usize;
            let parts = orbit_prefix(&x, h, DEFAULT_DEPTH_CAP).unwrap();
            assert!(parts.iter().all(|p| p.to_ratio().is_zero()));
        }

        let parts = orbit_prefix(&BigUint::from(3u32), 1, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(parts, vec![fp(3, 1)]);
    }

    #[test]
    fn prefix_matches_per_query_across_paths() {
        for x in [1u64, 5, 1 << 13, 987654321] {
            let xb = BigUint::from(x);
            let parts = orbit_prefix(&xb, 80, DEFAULT_DEPTH_CAP).unwrap();
            for (i, p) in parts.iter().enumerate() {
                assert_eq!(*p, fp(x, i as u32 + 1));
            }
        }
    }

    #[test]
    fn diameter_examples() {
        let one = BigUint::one();
        let d = orbit_diameter(&one, 1, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(d.inf, rat(1, 2));
        assert_eq!(d.sup, rat(1, 2));
        assert!(d.diameter.is_zero());
        assert_eq!(d.first_n_reaching_one_third, None);

        let d = orbit_diameter(&one, 2, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(d.diameter, rat(1, 4));

        // frozen from the exact oracle sweep over n = 1..=8 for x = 5:
        // values 1/2, 1/4, 7/8, 5/16, 31/32, 61/64, 55/128, 37/256
        let d = orbit_diameter(&BigUint::from(5u32), 8, DEFAULT_DEPTH_CAP).unwrap();
        let mut values: Vec<BigRational> = (1..=8).map(|n| oracle_frac(5, n)).collect();
        values.sort();
        assert_eq!(d.inf, values[0]);
        assert_eq!(d.sup, values[7]);
        assert_eq!(d.inf, rat(37, 256));
        assert_eq!(d.sup, rat(31, 32));
        assert_eq!(d.diameter, rat(211, 256));
        assert_eq!(d.first_n_reaching_one_third, Some(3));
        assert!(d.diameter >= rat(1, 3));
    }

    #[test]
    fn frac_part_ordering() {
        assert!(fp(5, 3) > fp(1, 1)); // 7/8 > 1/2
        assert!(fp(1, 2) < fp(1, 1)); // 1/4 < 1/2
        assert_eq!(fp(4, 3).cmp(&fp(1, 1)), Ordering::Equal); // 4/8 == 1/2
    }

    #[test]
    fn rejects_bad_queries() {
        assert!(OrbitQuery::from_u64(0, 1).is_err());
        assert!(OrbitQuery::from_u64(1, 0).is_err());
        let q = OrbitQuery::from_u64(1, 100).unwrap();
        assert!(matches!(
            frac_part(&q, 50),
            Err(Error::CapExceeded { .. })
        ));
        assert!(orbit_prefix(&BigUint::one(), 200, 100).is_err());
    }

    #[test]
    fn display_is_reduced() {
        assert_eq!(fp(1, 1).to_string(), "1/2");
        assert_eq!(fp(5, 3).to_string(), "7/8");
        assert_eq!(fp(2, 1).to_string(), "0");
        assert_eq!(fp(4, 3).to_string(), "1/2");
    }

    #[test]
    fn diameter_values_fit_f64_for_reporting() {
        let d = orbit_diameter(&BigUint::from(5u32), 8, DEFAULT_DEPTH_CAP).unwrap();
        assert!((d.diameter.to_f64().unwrap() - 211.0 / 256.0).abs() < 1e-12);
    }
}
