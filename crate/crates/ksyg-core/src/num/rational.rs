//! Decimal parsing and "simplest rational in an interval" selection.

use super::Rat;
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use std::str::FromStr;

/// Parses a decimal literal (optional sign, fraction, and exponent) into an
/// exact rational, e.g. `-0.5`, `3`, `1.25e-2`.
pub fn parse_decimal(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().ok()?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{}{}", int_part, frac_part);
    let mut numer = if joined.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from_str(&joined).ok()?
    };
    if sign < 0 {
        numer = -numer;
    }
    let scale = frac_part.len() as i32;
    let net = exp - scale;
    let ten = BigInt::from(10u32);
    Some(if net >= 0 {
        Rat::from_integer(numer * ten.pow(net as u32))
    } else {
        Rat::new(numer, ten.pow((-net) as u32))
    })
}

/// Renders a rational exactly as a decimal when the denominator is 2^a·5^b,
/// otherwise as `numer/denom`. Used for canonical scenario round-trips.
pub fn format_exact(r: &Rat) -> String {
    let mut den = r.denom().clone();
    let mut pow2 = 0u32;
    let mut pow5 = 0u32;
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    while (&den % &two).is_zero() {
        den /= &two;
        pow2 += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        pow5 += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let shift = pow2.max(pow5);
    // numer * 10^shift / denom is integral since denom = 2^pow2 * 5^pow5.
    let scaled = r.numer() * BigInt::from(10u32).pow(shift) / r.denom();
    if shift == 0 {
        return scaled.to_string();
    }
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = if digits.len() <= shift as usize {
        format!("{}{}", "0".repeat(shift as usize + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = digits.len() - shift as usize;
    let mut out = format!("{}.{}", &digits[..split], &digits[split..]);
    while out.ends_with('0') {
        out.pop();
    }
    if out.ends_with('.') {
        out.pop();
    }
    if neg {
        format!("-{}", out)
    } else {
        out
    }
}

/// The rational with smallest denominator (then numerator) strictly inside
/// the open interval `(a, b)`. Keeps probe timestamps small so that exact
/// position arithmetic at probes stays cheap.
pub fn simplest_between(a: &Rat, b: &Rat) -> Rat {
    assert!(a < b, "empty interval");
    if a.is_negative() && b.is_positive() {
        return Rat::zero();
    }
    if b.is_zero() || b.is_negative() {
        return -simplest_nonneg(&-b.clone(), &-a.clone());
    }
    // 0 <= a < b
    simplest_nonneg(a, b)
}

fn simplest_nonneg(a: &Rat, b: &Rat) -> Rat {
    debug_assert!(!a.is_negative() && a < b);
    let fa = a.floor();
    let next = &fa + Rat::one();
    if &next < b {
        return next;
    }
    // Both endpoints within [fa, fa+1].
    let a1 = a - &fa;
    let b1 = b - &fa;
    if a1.is_zero() {
        // (0, b1): pick 1/(floor(1/b1)+1).
        let inv = b1.recip();
        let k = inv.floor() + Rat::one();
        return &fa + k.recip();
    }
    let r = simplest_nonneg(&b1.recip(), &a1.recip());
    &fa + r.recip()
}
