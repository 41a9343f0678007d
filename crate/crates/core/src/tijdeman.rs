//! Greedy construction of Tijdeman numbers for rational β > 2.
//!
//! For β = p/q > 2 the recurrence s_{n+1} = ceil(β·s_n), seeded at s₀ = m,
//! keeps every increment ε_n = s_{n+1} − β·s_n inside [0, 1); when 2β is an
//! odd integer the ceiling lands on halves, so ε_n ∈ {0, 1/2}. The limit
//! η = lim s_n·β^{−n} then satisfies ηβ^n − s_n = Σ_{k≥n} ε_k·β^{n−k−1},
//! which the geometric series bounds by c = 1/(β−1) (general) or
//! c = 1/(2(β−1)) (half-integer), so {ηβ^n} ∈ [0, c] for all n.
//!
//! Every quantity here is exact: the sequence is big-integer, the target
//! bound and η enclosures are big rationals. `verify_run` re-derives all
//! increments and certifies a run after the fact, flagging the first
//! offending index, so serialized runs can be checked independently of
//! their construction.
//!
//! One wrinkle: with integer β and s₀ = m every ceiling is exact and η
//! would collapse to m, outside the open interval (m, m+1) the general
//! statement promises. In general mode the constructor therefore bumps
//! s₁ = β·m + 1 whenever β·m is an integer. That single seeding increment
//! equals 1 and is admitted as the closed-right exception at n = 0; the
//! fractional-part certificate still closes because (1 + c)/β = c exactly
//! when c = 1/(β−1).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio::{ratio_from_str, ratio_to_string};

/// Which target bound a run certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetMode {
    /// β > 2: increments in [0, 1), target c = 1/(β−1), η ∈ (m, m+1).
    General,
    /// 2β an odd integer: increments in {0, 1/2}, target c = 1/(2(β−1)),
    /// η ∈ [m, m+1).
    HalfInteger,
}

impl TargetMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetMode::General => "general",
            TargetMode::HalfInteger => "half-integer",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "general" => Ok(TargetMode::General),
            "half-integer" => Ok(TargetMode::HalfInteger),
            other => Err(Error::BadArgument(format!(
                "unknown mode {other:?}; expected \"general\" or \"half-integer\""
            ))),
        }
    }
}

/// β = p/q in lowest terms with p/q > 2, plus the certification mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaParam {
    p: u64,
    q: u64,
    mode: TargetMode,
}

impl BetaParam {
    pub fn new(p: u64, q: u64, mode: TargetMode) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::BadArgument("p and q must be positive".into()));
        }
        let g = num_integer::gcd(p, q);
        let (p, q) = (p / g, q / g);
        if p <= 2 * q {
            return Err(Error::BadArgument(format!(
                "β = {p}/{q} must exceed 2"
            )));
        }
        if mode == TargetMode::HalfInteger && q != 2 {
            return Err(Error::BadArgument(format!(
                "half-integer mode needs 2β odd, i.e. reduced q = 2; got β = {p}/{q}"
            )));
        }
        Ok(BetaParam { p, q, mode })
    }

    /// Picks half-integer mode exactly when the reduced denominator is 2.
    pub fn auto(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::BadArgument("p and q must be positive".into()));
        }
        let g = num_integer::gcd(p, q);
        let mode = if q / g == 2 {
            TargetMode::HalfInteger
        } else {
            TargetMode::General
        };
        Self::new(p, q, mode)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn mode(&self) -> TargetMode {
        self.mode
    }

    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p), BigInt::from(self.q))
    }

    /// The certified target c: q/(p−q) in general mode, q/(2(p−q)) in
    /// half-integer mode.
    pub fn target_bound(&self) -> BigRational {
        let gap = BigInt::from(self.p - self.q);
        match self.mode {
            TargetMode::General => BigRational::new(BigInt::from(self.q), gap),
            TargetMode::HalfInteger => BigRational::new(BigInt::from(self.q), 2 * gap),
        }
    }
}

/// A finished construction: the sequence s₀..s_N, the target bound c, and
/// the exact enclosure [s_N·β^{−N}, s_N·β^{−N} + c·β^{−N}] pinning η.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TijdemanRun {
    pub beta: BetaParam,
    pub m: u64,
    pub s: Vec<BigUint>,
    pub c: BigRational,
    pub enclosure: (BigRational, BigRational),
}

/// Statistics from a successful certification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    pub increments_checked: usize,
    pub max_increment: BigRational,
    pub seeded: bool,
}

impl TijdemanRun {
    pub fn depth(&self) -> u32 {
        (self.s.len() - 1) as u32
    }

    /// True iff the run began with the integer-β seeding step.
    pub fn seeded(&self) -> bool {
        self.beta.mode == TargetMode::General && self.m.is_multiple_of(self.beta.q)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "p": self.beta.p,
            "q": self.beta.q,
            "m": self.m,
            "mode": self.beta.mode.as_str(),
            "s": self.s.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "c": ratio_to_string(&self.c),
            "enclosure": [
                ratio_to_string(&self.enclosure.0),
                ratio_to_string(&self.enclosure.1),
            ],
        })
        .to_string()
    }

    /// Parses a serialized run verbatim — nothing is recomputed, so a
    /// tampered file survives parsing and fails `verify_run` instead.
    pub fn from_json_str(text: &str) -> Result<TijdemanRun> {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::BadArgument(format!("run file is not valid JSON: {e}")))?;
        let field_u64 = |name: &str| -> Result<u64> {
            v.get(name).and_then(|x| x.as_u64()).ok_or_else(|| {
                Error::BadArgument(format!("run file needs a positive integer {name:?}"))
            })
        };
        let mode = TargetMode::parse(
            v.get("mode")
                .and_then(|x| x.as_str())
                .ok_or_else(|| Error::BadArgument("run file needs a \"mode\" string".into()))?,
        )?;
        let beta = BetaParam::new(field_u64("p")?, field_u64("q")?, mode)?;
        let m = field_u64("m")?;
        let s_values = v
            .get("s")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::BadArgument("run file needs an \"s\" array".into()))?;
        let mut s = Vec::with_capacity(s_values.len());
        for (i, item) in s_values.iter().enumerate() {
            let parsed = match item {
                serde_json::Value::Number(n) => n.as_u64().map(BigUint::from),
                serde_json::Value::String(text) => text.parse::<BigUint>().ok(),
                _ => None,
            };
            s.push(parsed.ok_or_else(|| {
                Error::BadArgument(format!("s[{i}] is not a non-negative integer"))
            })?);
        }
        if s.len() < 2 {
            return Err(Error::BadArgument(
                "run file must contain s_0..s_N with N >= 1".into(),
            ));
        }
        let ratio_field = |val: &serde_json::Value, what: &str| -> Result<BigRational> {
            val.as_str()
                .ok_or_else(|| Error::BadArgument(format!("{what} must be a \"num/den\" string")))
                .and_then(ratio_from_str)
        };
        let c = ratio_field(
            v.get("c")
                .ok_or_else(|| Error::BadArgument("run file needs \"c\"".into()))?,
            "c",
        )?;
        let enclosure = match v.get("enclosure").and_then(|x| x.as_array()) {
            Some(pair) if pair.len() == 2 => (
                ratio_field(&pair[0], "enclosure[0]")?,
                ratio_field(&pair[1], "enclosure[1]")?,
            ),
            _ => {
                return Err(Error::BadArgument(
                    "run file needs a two-element \"enclosure\" array".into(),
                ))
            }
        };
        Ok(TijdemanRun { beta, m, s, c, enclosure })
    }
}

/// β^{−n} as an exact rational.
fn beta_neg_pow(beta: &BetaParam, n: u32) -> BigRational {
    BigRational::new(BigInt::from(beta.q).pow(n), BigInt::from(beta.p).pow(n))
}

fn enclosure_at(beta: &BetaParam, s_last: &BigUint, n: u32, c: &BigRational) -> (BigRational, BigRational) {
    let scale = beta_neg_pow(beta, n);
    let lo = BigRational::from(BigInt::from(s_last.clone())) * &scale;
    let hi = &lo + c * &scale;
    (lo, hi)
}

/// The exact increment s_{n+1} − β·s_n = (q·s_{n+1} − p·s_n)/q.
fn increment(beta: &BetaParam, s_n: &BigUint, s_next: &BigUint) -> BigRational {
    let num = BigInt::from(beta.q) * BigInt::from(s_next.clone())
        - BigInt::from(beta.p) * BigInt::from(s_n.clone());
    BigRational::new(num, BigInt::from(beta.q))
}

/// Runs the ceiling recurrence for N steps and returns the full run with
/// its η enclosure. In general mode, an integer β·m triggers the seeding
/// step s₁ = β·m + 1 so η stays strictly above m.
pub fn construct(beta: &BetaParam, m: u64, n_steps: u32) -> Result<TijdemanRun> {
    if m == 0 {
        return Err(Error::BadArgument("m must be at least 1".into()));
    }
    if n_steps == 0 {
        return Err(Error::BadArgument("N must be at least 1".into()));
    }
    let p = BigUint::from(beta.p);
    let q = BigUint::from(beta.q);
    let mut s: Vec<BigUint> = Vec::with_capacity(n_steps as usize + 1);
    s.push(BigUint::from(m));
    if beta.mode == TargetMode::General && m.is_multiple_of(beta.q) {
        s.push(&p * (m / beta.q) + 1u32);
    }
    while s.len() <= n_steps as usize {
        let next = (s.last().unwrap() * &p).div_ceil(&q);
        s.push(next);
    }
    let c = beta.target_bound();
    let enclosure = enclosure_at(beta, s.last().unwrap(), n_steps, &c);
    Ok(TijdemanRun { beta: *beta, m, s, c, enclosure })
}

/// Certifies a run from scratch. Checks, in order: s₀ = m; the stored c
/// matches the mode's formula; every increment lies in the admissible set
/// ([0, 1) generally, with [0, 1] at n = 0 for the seeding step; {0, 1/2}
/// in half-integer mode); the stored enclosure equals
/// [s_N·β^{−N}, s_N·β^{−N} + c·β^{−N}]; the backward recursion
/// I_n = (ε_n + I_{n+1})/β from I_N = [0, c] stays inside [0, c], which is
/// the fractional-part certificate {ηβ^n} ∈ [0, c] for any admissible
/// continuation beyond N; and the enclosure sits inside [m, m+1) — strictly
/// above m in general mode. The first violated index is reported.
pub fn verify_run(run: &TijdemanRun) -> Result<VerifySummary> {
    let beta = &run.beta;
    if run.s.len() < 2 {
        return Err(Error::BadArgument(
            "run must contain s_0..s_N with N >= 1".into(),
        ));
    }
    if run.m == 0 {
        return Err(Error::BadArgument("m must be at least 1".into()));
    }
    let last_index = run.s.len() - 1;
    if run.s[0] != BigUint::from(run.m) {
        return Err(Error::CertificationFailed {
            index: 0,
            detail: format!("s_0 = {} must equal m = {}", run.s[0], run.m),
        });
    }
    if run.c != beta.target_bound() {
        return Err(Error::CertificationFailed {
            index: 0,
            detail: format!(
                "target bound {} does not match the {} formula {}",
                ratio_to_string(&run.c),
                beta.mode.as_str(),
                ratio_to_string(&beta.target_bound()),
            ),
        });
    }

    let one = BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut increments = Vec::with_capacity(last_index);
    let mut max_increment = BigRational::zero();
    for n in 0..last_index {
        let e = increment(beta, &run.s[n], &run.s[n + 1]);
        let admissible = match beta.mode {
            // The closed right end at n = 0 admits the integer-β seeding
            // step; an integer increment of 1 forces β·s_0 integer anyway.
            TargetMode::General => !e.is_negative() && if n == 0 { e <= one } else { e < one },
            TargetMode::HalfInteger => e.is_zero() || e == half,
        };
        if !admissible {
            return Err(Error::CertificationFailed {
                index: n + 1,
                detail: format!(
                    "increment s_{} − β·s_{} = {} is outside the {} range",
                    n + 1,
                    n,
                    ratio_to_string(&e),
                    beta.mode.as_str(),
                ),
            });
        }
        if e > max_increment {
            max_increment = e.clone();
        }
        increments.push(e);
    }

    let expected = enclosure_at(beta, &run.s[last_index], last_index as u32, &run.c);
    if run.enclosure != expected {
        return Err(Error::CertificationFailed {
            index: last_index,
            detail: format!(
                "η enclosure [{}, {}] does not match s_{} (expected [{}, {}])",
                ratio_to_string(&run.enclosure.0),
                ratio_to_string(&run.enclosure.1),
                last_index,
                ratio_to_string(&expected.0),
                ratio_to_string(&expected.1),
            ),
        });
    }

    // Backward fractional-part certificate.
    let b = beta.ratio();
    let mut lo = BigRational::zero();
    let mut hi = run.c.clone();
    for n in (0..last_index).rev() {
        lo = (&increments[n] + lo) / &b;
        hi = (&increments[n] + hi) / &b;
        if lo.is_negative() || hi > run.c {
            return Err(Error::CertificationFailed {
                index: n,
                detail: format!(
                    "fractional-part certificate for ηβ^{n} leaves [0, {}]",
                    ratio_to_string(&run.c),
                ),
            });
        }
    }

    let m_lo = BigRational::from(BigInt::from(run.m));
    let m_hi = &m_lo + BigRational::one();
    let placed = match beta.mode {
        TargetMode::General => run.enclosure.0 > m_lo,
        TargetMode::HalfInteger => run.enclosure.0 >= m_lo,
    } && run.enclosure.1 < m_hi;
    if !placed {
        return Err(Error::CertificationFailed {
            index: 0,
            detail: format!(
                "η enclosure [{}, {}] is not inside the unit interval at m = {}",
                ratio_to_string(&run.enclosure.0),
                ratio_to_string(&run.enclosure.1),
                run.m,
            ),
        });
    }

    Ok(VerifySummary {
        increments_checked: last_index,
        max_increment,
        seeded: run.seeded(),
    })
}
