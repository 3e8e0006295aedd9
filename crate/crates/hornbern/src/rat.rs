//! Exact rational arithmetic helpers: parsing, formatting, factorials and
//! binomial coefficients.
//!
//! `BigRational` (re-exported from `num-rational`) already guarantees the two
//! invariants we rely on everywhere: values are kept in lowest terms and the
//! denominator is always positive. This module adds the conversions between
//! rationals and the textual forms used at the boundaries of the crate
//! ("p/q", decimal strings, significant-digit output).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub use num_rational::BigRational;

/// Exact `n!` as a big integer.
pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

/// Exact binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses a rational from `"p/q"`, an integer, or a decimal string
/// (optionally in scientific notation, e.g. `"2.5e-3"`). The result is exact:
/// decimal strings are read as scaled integers, never through floating point.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Invalid("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    // Decimal / scientific form: [sign] digits [. digits] [e[sign]digits]
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let e: i64 = e
                .parse()
                .map_err(|_| Error::Invalid(format!("bad exponent in {s:?}")))?;
            (m, e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let joined: String = [int_part, frac_part].concat();
    if joined.is_empty() || joined == "-" || joined == "+" {
        return Err(Error::Invalid(format!("bad rational literal {s:?}")));
    }
    let digits: BigInt = joined
        .parse()
        .map_err(|_| Error::Invalid(format!("bad rational literal {s:?}")))?;
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(digits * ten.pow(shift as u32))
    } else {
        BigRational::new(digits, ten.pow((-shift) as u32))
    })
}

/// Formats a rational as `"p/q"`, or just `"p"` when the denominator is 1.
pub fn format_ratio(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats a rational in decimal with `digits` significant digits
/// (round half to even), using scientific notation outside `1e-4 ..= 1e15`.
pub fn format_decimal(q: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // Decimal exponent e with 10^e <= a < 10^(e+1).
    let mut e = approx_log10(&a);
    let ten = BigInt::from(10);
    loop {
        let lo = pow10_rat(e);
        if a < lo {
            e -= 1;
            continue;
        }
        if a >= pow10_rat(e + 1) {
            e += 1;
            continue;
        }
        break;
    }
    // Round a / 10^(e - digits + 1) to the nearest integer, half to even.
    let scale = e - digits as i64 + 1;
    let scaled = &a / pow10_rat(scale);
    let mut m = round_half_even(&scaled);
    // Rounding may carry over to the next power of ten (e.g. 9.99 -> 10.0).
    if m == ten.pow(digits as u32) {
        m = ten.pow(digits as u32 - 1);
        e += 1;
    }
    let mantissa = m.to_string();
    debug_assert_eq!(mantissa.len(), digits);
    let body = if e >= -4 && e < 16 {
        place_point(&mantissa, e)
    } else {
        let head = if digits == 1 {
            mantissa.clone()
        } else {
            format!("{}.{}", &mantissa[..1], &mantissa[1..])
        };
        format!("{head}e{e}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// `10^k` as an exact rational for any sign of `k`.
pub fn pow10_rat(k: i64) -> BigRational {
    let ten = BigInt::from(10);
    if k >= 0 {
        BigRational::from_integer(ten.pow(k as u32))
    } else {
        BigRational::new(BigInt::one(), ten.pow((-k) as u32))
    }
}

/// Nearest integer with ties to even; input must be nonnegative.
fn round_half_even(q: &BigRational) -> BigInt {
    let (fl, rem) = q.numer().div_mod_floor(q.denom());
    let twice = &rem * BigInt::from(2);
    match twice.cmp(q.denom()) {
        std::cmp::Ordering::Less => fl,
        std::cmp::Ordering::Greater => fl + 1,
        std::cmp::Ordering::Equal => {
            if fl.is_even() {
                fl
            } else {
                fl + 1
            }
        }
    }
}

/// Fast estimate of floor(log10 |q|); may be off by one (callers correct it).
fn approx_log10(q: &BigRational) -> i64 {
    let nd = q.numer().abs().to_string().len() as i64;
    let dd = q.denom().to_string().len() as i64;
    nd - dd
}

/// Inserts the decimal point into a digit string for exponent `e`
/// (`mantissa` holds the significant digits, value = 0.mantissa * 10^(e+1)).
fn place_point(mantissa: &str, e: i64) -> String {
    let n = mantissa.len() as i64;
    if e >= n - 1 {
        // Pad with trailing zeros up to the decimal point.
        let zeros = (e - n + 1) as usize;
        format!("{}{}", mantissa, "0".repeat(zeros))
    } else if e >= 0 {
        let split = (e + 1) as usize;
        format!("{}.{}", &mantissa[..split], &mantissa[split..])
    } else {
        let zeros = (-e - 1) as usize;
        format!("0.{}{}", "0".repeat(zeros), mantissa)
    }
}

/// Rational absolute value of the difference of two rationals.
pub fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

/// True when the sign of `q` is negative (convenience re-export of the trait
/// method so call sites don't need `num_traits::Signed` in scope).
pub fn is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

/// Converts a big-integer sign to `+1 / 0 / -1`.
pub fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small_values() {
        let expect = [1u64, 1, 2, 6, 24, 120, 720, 5040];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(factorial(n), BigUint::from(e));
        }
    }

    #[test]
    fn binomial_pascal_row() {
        let expect = [1u64, 6, 15, 20, 15, 6, 1];
        for (k, &e) in expect.iter().enumerate() {
            assert_eq!(binomial(6, k), BigUint::from(e));
        }
        assert_eq!(binomial(5, 9), BigUint::zero());
    }

    #[test]
    fn binomial_symmetry_exhaustive() {
        for n in 0..30usize {
            for k in 0..=n {
                assert_eq!(binomial(n, k), binomial(n, n - k));
            }
        }
    }

    #[test]
    fn parse_fraction_forms() {
        assert_eq!(parse_rational("5/9").unwrap(), ratio(5, 9));
        assert_eq!(parse_rational(" -7 / 3 ").unwrap(), ratio(-7, 3));
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
        assert_eq!(parse_rational("42").unwrap(), int(42));
    }

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("2.5e-3").unwrap(), ratio(1, 400));
        assert_eq!(parse_rational("1e3").unwrap(), int(1000));
        assert_eq!(parse_rational("2.188590").unwrap(), ratio(218859, 100000));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/0", "abc", "1.2.3", "e5", "--3"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn format_ratio_forms() {
        assert_eq!(format_ratio(&ratio(5, 9)), "5/9");
        assert_eq!(format_ratio(&ratio(-10, 4)), "-5/2");
        assert_eq!(format_ratio(&int(7)), "7");
    }

    #[test]
    fn format_decimal_basic() {
        assert_eq!(format_decimal(&ratio(2, 3), 10), "0.6666666667");
        assert_eq!(format_decimal(&ratio(5, 9), 6), "0.555556");
        assert_eq!(format_decimal(&int(2), 4), "2.000");
        assert_eq!(format_decimal(&ratio(-1, 8), 3), "-0.125");
        assert_eq!(format_decimal(&int(0), 5), "0");
    }

    #[test]
    fn format_decimal_carries_and_exponents() {
        assert_eq!(format_decimal(&ratio(999, 1000), 2), "1.0");
        assert_eq!(format_decimal(&ratio(1, 100000), 3), "1.00e-5");
        assert_eq!(format_decimal(&parse_rational("12345678901234567").unwrap(), 5), "1.2346e16");
        // Half-to-even at the boundary: 0.125 to 2 digits -> 0.12.
        assert_eq!(format_decimal(&ratio(1, 8), 2), "0.12");
    }

    #[test]
    fn decimal_round_trip_through_parse() {
        // format_decimal output must parse back to within one ulp of the
        // requested precision.
        let q = ratio(1465, 3402);
        let s = format_decimal(&q, 12);
        let back = parse_rational(&s).unwrap();
        assert!(abs_diff(&q, &back) < pow10_rat(-11));
    }
}
