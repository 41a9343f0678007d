//! Acceptance suite: one test and one printed PASS/FAIL line per
//! criterion. Every comparison is exact — integers, bit vectors, or
//! rationals; no tolerances anywhere.

mod common;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mahler_core::census::{self, predicted_depth, survival_depth};
use mahler_core::orbit::{self, OrbitQuery};
use mahler_core::refine;
use mahler_core::sieve;
use mahler_core::tijdeman::{self, BetaParam, TargetMode};

fn report(line: &str, ok: bool) {
    println!("{:64} {}", line, if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{line}");
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn criterion_01_odd_values_fail_at_depth_one_with_exact_half() {
    let mut ok = true;
    let mut x = 1u64;
    while x <= 1_000_000 {
        let r = survival_depth(&BigUint::from(x), 4).unwrap();
        if r.depth != 1 || !r.violation.is_half() {
            ok = false;
            break;
        }
        x += 2;
    }
    report("01 odd x <= 10^6: depth 1, violation exactly 1/2", ok);
}

#[test]
fn criterion_02_power_class_is_always_permissible() {
    let ok = (1..=24).all(|n| sieve::compute_xn(n, 24).unwrap().contains_bit(0));
    report("02 bit 0 set in X_n for all n <= 24", ok);
}

#[test]
fn criterion_03_prefix_intersection_collapses_to_power_class() {
    let ok = (1..=20).all(|n| {
        let p = sieve::intersect_prefix(n, 24).unwrap();
        p.card() == 1 && p.contains_bit(0)
    });
    report("03 intersection of X_1..X_n = class of 2^n for n <= 20", ok);
}

#[test]
fn criterion_04_census_survivors_match_powers_of_two() {
    let n = 1u64 << 20;
    let r = census::census(n, census::default_census_depth(n)).unwrap();
    let sums = r.histogram.values().sum::<u64>() == n;
    let survivors = (1..=20u32).all(|d| r.survivors_at[&d] == n >> d);
    report("04 census at N=2^20: survivors_at(n) = floor(N/2^n)", sums && survivors);
}

#[test]
fn criterion_05_survival_closed_form_against_slow_oracle() {
    let half = rat(1, 2);
    let mut ok = true;
    for x in 1..=100_000u64 {
        let xb = BigUint::from(x);
        let r = survival_depth(&xb, 24).unwrap();
        if r.depth != predicted_depth(&xb) || !r.violation.is_half() {
            ok = false;
            break;
        }
        let (slow_depth, slow_frac) = common::slow_survival(x, 24).unwrap();
        if slow_depth != r.depth || slow_frac != half {
            ok = false;
            break;
        }
    }
    report("05 x <= 10^5: depth = v2(x)+1, oracle replay agrees", ok);
}

#[test]
fn criterion_06_frac_part_agrees_with_full_product_oracle() {
    let mut rng = StdRng::seed_from_u64(0x5eed_cafe);
    let mut ok = true;
    for _ in 0..10_000 {
        let x = BigUint::from(rng.gen::<u64>().max(1));
        let n = rng.gen_range(1..=128u32);
        let fp = orbit::frac_part(&OrbitQuery::new(x.clone(), n).unwrap(), 4096).unwrap();
        if *fp.numerator() != common::oracle_frac_numerator(&x, n) {
            ok = false;
            break;
        }
    }
    report("06 frac_part = full-product oracle on 10^4 random (x, n)", ok);
}

#[test]
fn criterion_07_orbit_diameter_reaches_one_third() {
    let one_third = rat(1, 3);
    let mut max_reach = 0u32;
    let mut ok = true;
    'outer: for x in 1..=10_000u64 {
        let parts = orbit::orbit_prefix(&BigUint::from(x), 256, 4096).unwrap();
        let mut min = parts[0].clone();
        let mut max = parts[0].clone();
        let mut reached = None;
        for (i, fp) in parts.iter().enumerate() {
            if *fp < min {
                min = fp.clone();
            }
            if *fp > max {
                max = fp.clone();
            }
            if max.to_ratio() - min.to_ratio() >= one_third {
                reached = Some(i as u32 + 1);
                break;
            }
        }
        match reached {
            Some(n) => max_reach = max_reach.max(n),
            None => {
                ok = false;
                break 'outer;
            }
        }
    }
    println!("   (max first-reach depth observed over x <= 10^4: {max_reach})");
    report("07 orbit diameter reaches 1/3 by n <= 256 for all x <= 10^4", ok);
}

#[test]
fn criterion_08_half_integer_constructions_certify() {
    let beta = BetaParam::new(5, 2, TargetMode::HalfInteger).unwrap();
    let half = rat(1, 2);
    let mut ok = true;
    for m in 1..=10u64 {
        let run = tijdeman::construct(&beta, m, 200).unwrap();
        // verify_run certifies increments in {0, 1/2}, the enclosure inside
        // [m, m+1), and every backward bound inside [0, c].
        let summary = match tijdeman::verify_run(&run) {
            Ok(s) => s,
            Err(_) => {
                ok = false;
                break;
            }
        };
        ok &= run.c == rat(1, 3)
            && summary.max_increment <= half
            && run.enclosure.0 >= BigRational::from(BigInt::from(m))
            && run.enclosure.1 < BigRational::from(BigInt::from(m + 1));
        if m == 1 {
            ok &= run.s[6] == BigUint::from(313u32);
        }
        if !ok {
            break;
        }
    }
    report("08 beta=5/2, m=1..10, N=200: certified within [0, 1/3]", ok);
}

#[test]
fn criterion_09_general_constructions_certify() {
    let beta = BetaParam::new(3, 1, TargetMode::General).unwrap();
    let one = BigRational::one();
    let mut ok = true;
    for m in 1..=10u64 {
        let run = tijdeman::construct(&beta, m, 100).unwrap();
        if tijdeman::verify_run(&run).is_err() {
            ok = false;
            break;
        }
        // Increments: the seeding step at n = 0 may equal 1 exactly; from
        // n >= 1 the increment lies in [0, 1).
        for n in 0..100usize {
            let e = BigRational::new(
                BigInt::from(run.s[n + 1].clone()) - BigInt::from(3) * BigInt::from(run.s[n].clone()),
                BigInt::one(),
            );
            let fits = if n == 0 {
                e >= BigRational::zero() && e <= one
            } else {
                e >= BigRational::zero() && e < one
            };
            if !fits {
                ok = false;
                break;
            }
        }
        ok &= run.c == rat(1, 2)
            && run.enclosure.0 > BigRational::from(BigInt::from(m))
            && run.enclosure.1 < BigRational::from(BigInt::from(m + 1));
        if !ok {
            break;
        }
    }
    report("09 beta=3, m=1..10, N=100: certified within [0, 1/2]", ok);
}

#[test]
fn criterion_10_interval_refinement_confined_and_bounded() {
    let mut ok = true;
    'outer: for g0 in 0..=4u64 {
        let cutoff = BigRational::from(BigInt::from(g0)) + rat(1, 2);
        let mut prev_measure = BigRational::one();
        for n in 0..=16u32 {
            let s = refine::refine(g0, n, 24).unwrap();
            for (lo, hi) in &s.intervals {
                if lo >= hi
                    || *lo < BigRational::from(BigInt::from(g0))
                    || *hi > cutoff
                {
                    ok = false;
                    break 'outer;
                }
            }
            let measure = s.measure();
            if measure > prev_measure {
                ok = false;
                break 'outer;
            }
            prev_measure = measure;
        }
        if g0 == 0 {
            let floor16 = rat(1, 2)
                * BigRational::new(BigInt::from(2).pow(16), BigInt::from(3).pow(16));
            if prev_measure < floor16 {
                ok = false;
            }
        }
    }
    report("10 refinement g0=0..4, N<=16: confined, monotone, bounded", ok);
}
