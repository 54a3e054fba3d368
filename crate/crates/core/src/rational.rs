//! Exact rational scalars and small number-theory helpers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational number; all value arithmetic in this crate is exact.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses "a/b" or "a" with optional sign, exactly.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational".to_string());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad numerator in {t:?}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator in {t:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {t:?}"));
    }
    Ok(Rat::new(n, d))
}

pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n`, without multiplicity. Empty for n <= 1.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Removes from `n` every factor lying in `primes`; what remains is the
/// part of `n` coprime to the set.
pub fn strip_primes(n: &BigInt, primes: impl Iterator<Item = u64> + Clone) -> BigInt {
    let mut m = n.abs();
    loop {
        let mut progressed = false;
        for p in primes.clone() {
            let bp = BigInt::from(p);
            while (&m % &bp).is_zero() && !m.is_one() {
                m /= &bp;
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    m
}
