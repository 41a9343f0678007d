//! Formatting and parsing of exact rationals as `"numerator/denominator"`
//! strings. Integral values drop the denominator (`"0"`, not `"0/8"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Renders a rational in lowest terms, omitting a denominator of one.
pub fn ratio_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a/b"` or a bare integer `"a"`.
pub fn ratio_from_str(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::BadArgument(format!("invalid rational component {t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.is_positive() {
                Ok(BigRational::new(parse_int(num)?, den))
            } else {
                Err(Error::BadArgument(format!(
                    "denominator must be positive in {s:?}"
                )))
            }
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Lossy decimal approximation for human-readable output.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
