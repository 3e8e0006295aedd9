//! Arbitrary-precision reals with tracked error bounds.
//!
//! A [`PrecisionReal`] is a big-float approximation together with a rigorous
//! bound on its absolute error. Every operation propagates the bound using
//! first-order worst-case estimates plus rounding allowances, with directed
//! (upward) rounding on the error side, so the invariant
//!
//! > the true value lies in `[value - abs_err, value + abs_err]`
//!
//! is preserved through arbitrary expression trees. When a bound cannot be
//! maintained (division by an interval containing zero, logarithm of an
//! interval touching zero), the error is set to an effectively infinite
//! sentinel rather than failing — callers detect the blown bound and retry
//! at higher precision.
//!
//! Exact conversions to and from `BigRational` make the bounds checkable in
//! exact arithmetic, which is what the certification layer builds on.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::cell::RefCell;

use crate::rat::BigRational;
use crate::{Error, Result};

/// Precision (bits) used for error-bound arithmetic; bounds only need a
/// couple of correct leading digits.
const ERR_BITS: usize = 64;

/// Value rounding for ordinary operations.
const RM: RoundingMode = RoundingMode::ToEven;
/// Error bounds are always rounded away from zero (they are nonnegative).
const RM_UP: RoundingMode = RoundingMode::Up;
const RM_DOWN: RoundingMode = RoundingMode::Down;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(
        Consts::new().expect("constants cache allocation failed")
    );
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// `2^k` exactly. `k` must stay well inside the big-float exponent range;
/// callers clamp first.
fn two_pow(k: i64) -> BigFloat {
    debug_assert!(k.unsigned_abs() <= 1 << 30);
    BigFloat::from_words(&[1u64 << 63], Sign::Pos, (k + 1) as i32)
}

/// Effectively infinite error sentinel (2^(2^30)); every realistic tolerance
/// comparison against it fails, which is what forces precision escalation.
fn err_unbounded() -> BigFloat {
    two_pow(1 << 30)
}

fn bf_zero() -> BigFloat {
    BigFloat::from_i8(0, ERR_BITS)
}

/// Upper bound for one ulp of `v` at `bits` precision: `2^(exp(v) - bits + 1)`.
/// Zero results of exact operations carry no rounding error, hence 0.
fn ulp1(v: &BigFloat, bits: usize) -> BigFloat {
    ulp_scaled(v, bits, 1)
}

/// `2 * ulp`, the allowance used after library transcendentals (documented
/// to be correctly rounded; one extra ulp of slack on top).
fn ulp2(v: &BigFloat, bits: usize) -> BigFloat {
    ulp_scaled(v, bits, 2)
}

fn ulp_scaled(v: &BigFloat, bits: usize, extra_log2: i64) -> BigFloat {
    if v.is_zero() {
        return bf_zero();
    }
    let Some((_, _, _, e, _)) = v.as_raw_parts() else {
        return err_unbounded();
    };
    let k = e as i64 - bits as i64 + extra_log2;
    if k > 1 << 30 {
        return err_unbounded();
    }
    two_pow(k.max(-(1 << 30)))
}

fn eadd(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, ERR_BITS, RM_UP)
}

fn emul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, ERR_BITS, RM_UP)
}

/// Exact big-float from a big integer (all words kept).
fn bigint_to_bigfloat(n: &BigInt) -> BigFloat {
    let mag: &BigUint = n.magnitude();
    if mag.is_zero() {
        return bf_zero();
    }
    let words: Vec<Word> = mag.to_u64_digits();
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    let e = (64 * words.len()) as i64;
    assert!(e <= i32::MAX as i64, "integer too large for big-float exponent");
    BigFloat::from_words(&words, sign, e as i32)
}

/// Exact rational value of a finite big-float.
fn bigfloat_to_rational(v: &BigFloat) -> Option<BigRational> {
    if v.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, _mb, sign, e, _inexact) = v.as_raw_parts()?;
    let mut int = BigUint::zero();
    for (i, w) in words.iter().enumerate() {
        int |= BigUint::from(*w) << (64 * i);
    }
    let mut num = BigInt::from(int);
    if sign == Sign::Neg {
        num = -num;
    }
    let shift = e as i64 - 64 * words.len() as i64;
    Some(if shift >= 0 {
        BigRational::from_integer(num << shift as u64)
    } else {
        BigRational::new(num, BigInt::one() << (-shift) as u64)
    })
}

/// A big-float value paired with a rigorous absolute-error bound.
#[derive(Clone, Debug)]
pub struct PrecisionReal {
    value: BigFloat,
    abs_err: BigFloat,
    bits: usize,
}

impl PrecisionReal {
    // ----- constructors -------------------------------------------------

    pub fn from_rational(q: &BigRational, bits: usize) -> Self {
        let num = bigint_to_bigfloat(q.numer());
        let den = bigint_to_bigfloat(q.denom());
        let value = num.div(&den, bits, RM);
        let abs_err = if q.denom().is_one() && value_is_exact_int(&value, q.numer()) {
            bf_zero()
        } else {
            ulp1(&value, bits)
        };
        Self { value, abs_err, bits }
    }

    pub fn from_integer(n: i64, bits: usize) -> Self {
        Self {
            value: BigFloat::from_i64(n, bits.max(64)),
            abs_err: bf_zero(),
            bits,
        }
    }

    /// Exact dyadic rational `k / 2^log2_denom` (used for quadrature grids).
    pub fn from_dyadic(k: i64, log2_denom: u32, bits: usize) -> Self {
        let v = BigFloat::from_i64(k, bits.max(64));
        let value = v.mul(&two_pow(-(log2_denom as i64)), bits.max(64), RM);
        Self { value, abs_err: bf_zero(), bits }
    }

    pub fn zero(bits: usize) -> Self {
        Self { value: bf_zero(), abs_err: bf_zero(), bits }
    }

    pub fn one(bits: usize) -> Self {
        Self::from_integer(1, bits)
    }

    pub fn pi(bits: usize) -> Self {
        let value = with_consts(|cc| cc.pi(bits, RM));
        Self { abs_err: ulp2(&value, bits), value, bits }
    }

    /// Wraps a raw big-float with a caller-supplied error bound.
    pub fn with_error(value: BigFloat, abs_err: BigFloat, bits: usize) -> Self {
        Self { value, abs_err, bits }
    }

    /// A zero midpoint with the tiny error bound `2^-(bits+64)`: stands in
    /// for positive quantities too small to be worth representing (for
    /// example `e^{-w}` once `w` exceeds the useful exponent range).
    pub fn tiny_positive(bits: usize) -> Self {
        Self { value: bf_zero(), abs_err: two_pow(-(bits as i64) - 64), bits }
    }

    // ----- accessors ----------------------------------------------------

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn abs_err(&self) -> &BigFloat {
        &self.abs_err
    }

    /// Exact rational midpoint (None for non-finite values).
    pub fn value_rational(&self) -> Option<BigRational> {
        bigfloat_to_rational(&self.value)
    }

    /// Exact rational error bound; `None` means the bound blew up.
    pub fn err_rational(&self) -> Option<BigRational> {
        if self.err_is_unbounded() {
            None
        } else {
            bigfloat_to_rational(&self.abs_err)
        }
    }

    /// Exact rational upper bound of the enclosure.
    pub fn upper_rational(&self) -> Option<BigRational> {
        Some(self.value_rational()? + self.err_rational()?)
    }

    /// Exact rational lower bound of the enclosure.
    pub fn lower_rational(&self) -> Option<BigRational> {
        Some(self.value_rational()? - self.err_rational()?)
    }

    pub fn err_is_unbounded(&self) -> bool {
        self.abs_err.is_inf() || self.abs_err.is_nan() || {
            // anything at or beyond the sentinel counts as unbounded
            matches!(self.abs_err.cmp(&err_unbounded()), Some(c) if c >= 0)
        }
    }

    /// True when the error bound is at most `tol`.
    pub fn err_within(&self, tol: &BigRational) -> bool {
        match self.err_rational() {
            Some(e) => e <= *tol,
            None => false,
        }
    }

    /// True when the whole enclosure is strictly above zero.
    pub fn definitely_positive(&self) -> bool {
        !self.value.is_negative()
            && matches!(self.value.cmp(&self.abs_err), Some(c) if c > 0)
    }

    /// True when the whole enclosure is strictly below zero.
    pub fn definitely_negative(&self) -> bool {
        self.value.is_negative()
            && matches!(self.value.abs().cmp(&self.abs_err), Some(c) if c > 0)
    }

    /// Decimal rendering: value with `digits` significant digits plus a
    /// two-digit error bound, e.g. `("0.6666666667", "2.1e-25")`.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        let v = self
            .value_rational()
            .map(|q| crate::rat::format_decimal(&q, digits))
            .unwrap_or_else(|| "nan".into());
        let e = match self.err_rational() {
            Some(q) if q.is_zero() => "0".into(),
            Some(q) => crate::rat::format_decimal(&q, 2),
            None => "unbounded".into(),
        };
        (v, e)
    }

    // ----- arithmetic ---------------------------------------------------

    pub fn neg(&self) -> Self {
        Self {
            value: self.value.neg(),
            abs_err: self.abs_err.clone(),
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            value: self.value.abs(),
            abs_err: self.abs_err.clone(),
            bits: self.bits,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let bits = self.bits.max(other.bits);
        let value = self.value.add(&other.value, bits, RM);
        let abs_err = eadd(&eadd(&self.abs_err, &other.abs_err), &ulp1(&value, bits));
        Self { value, abs_err, bits }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let bits = self.bits.max(other.bits);
        let value = self.value.mul(&other.value, bits, RM);
        // |da*b| + |a*db| + da*db + ulp
        let term_a = emul(&self.abs_err, &other.value.abs());
        let term_b = emul(&other.abs_err, &self.value.abs());
        let cross = emul(&self.abs_err, &other.abs_err);
        let abs_err = eadd(&eadd(&eadd(&term_a, &term_b), &cross), &ulp1(&value, bits));
        Self { value, abs_err, bits }
    }

    pub fn div(&self, other: &Self) -> Self {
        let bits = self.bits.max(other.bits);
        let value = self.value.div(&other.value, bits, RM);
        // Denominator enclosure must exclude zero.
        let b_abs = other.value.abs();
        let b_lo = b_abs.sub(&other.abs_err, ERR_BITS, RM_DOWN);
        if !b_lo.is_positive() || b_lo.is_zero() {
            return Self { value, abs_err: err_unbounded(), bits };
        }
        // |d(a/b)| <= (|da| + |a/b|*|db|) / (|b| - |db|)
        let num = eadd(&self.abs_err, &emul(&value.abs(), &other.abs_err));
        let abs_err = eadd(&num.div(&b_lo, ERR_BITS, RM_UP), &ulp2(&value, bits));
        Self { value, abs_err, bits }
    }

    pub fn recip(&self) -> Self {
        Self::one(self.bits).div(self)
    }

    /// Integer power by repeated squaring (exact error propagation through
    /// the underlying multiplications).
    pub fn pow_int(&self, n: u64) -> Self {
        let mut result = Self::one(self.bits);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_2exp(&self, k: i64) -> Self {
        let p = two_pow(k);
        Self {
            value: self.value.mul(&p, self.bits, RM),
            abs_err: emul(&self.abs_err, &p),
            bits: self.bits,
        }
    }

    // ----- elementary functions ----------------------------------------

    pub fn exp(&self) -> Self {
        let bits = self.bits;
        let value = with_consts(|cc| self.value.exp(bits, RM, cc));
        if !err_small(&self.abs_err) {
            return Self { value, abs_err: err_unbounded(), bits };
        }
        // |d exp| <= exp(a) * da * e^da <= |v| * da * 3 for da <= 1.
        let slope = emul(&value.abs(), &self.abs_err);
        let abs_err = eadd(&emul(&slope, &BigFloat::from_i8(3, ERR_BITS)), &ulp2(&value, bits));
        Self { value, abs_err, bits }
    }

    pub fn ln(&self) -> Self {
        let bits = self.bits;
        let a_lo = self.value.sub(&self.abs_err, ERR_BITS, RM_DOWN);
        let value = with_consts(|cc| self.value.ln(bits, RM, cc));
        if !a_lo.is_positive() || a_lo.is_zero() {
            return Self { value, abs_err: err_unbounded(), bits };
        }
        let abs_err = eadd(&self.abs_err.div(&a_lo, ERR_BITS, RM_UP), &ulp2(&value, bits));
        Self { value, abs_err, bits }
    }

    pub fn sin(&self) -> Self {
        let bits = self.bits;
        let value = with_consts(|cc| self.value.sin(bits, RM, cc));
        let abs_err = eadd(&self.abs_err, &ulp2(&value, bits));
        Self { value, abs_err, bits }
    }

    pub fn cos(&self) -> Self {
        let bits = self.bits;
        let value = with_consts(|cc| self.value.cos(bits, RM, cc));
        let abs_err = eadd(&self.abs_err, &ulp2(&value, bits));
        Self { value, abs_err, bits }
    }

    pub fn sinh(&self) -> Self {
        let bits = self.bits;
        let value = with_consts(|cc| self.value.sinh(bits, RM, cc));
        let abs_err = eadd(&emul(&self.abs_err, &cosh_upper(self)), &ulp2(&value, bits));
        Self { value, abs_err, bits }
    }

    pub fn cosh(&self) -> Self {
        let bits = self.bits;
        let value = with_consts(|cc| self.value.cosh(bits, RM, cc));
        // |d cosh| = |sinh| <= cosh
        let abs_err = eadd(&emul(&self.abs_err, &cosh_upper(self)), &ulp2(&value, bits));
        Self { value, abs_err, bits }
    }

    pub fn tanh(&self) -> Self {
        let bits = self.bits;
        let value = with_consts(|cc| self.value.tanh(bits, RM, cc));
        let abs_err = eadd(&self.abs_err, &ulp2(&value, bits));
        Self { value, abs_err, bits }
    }

    /// `e^x - 1`, stable for small `x` (series summation below `|x| < 1/4`,
    /// otherwise through `exp`).
    pub fn expm1(&self) -> Self {
        let bits = self.bits;
        let quarter = two_pow(-2);
        let small = matches!(self.value.abs().cmp(&quarter), Some(c) if c < 0);
        if !small {
            return self.exp().sub(&Self::one(bits));
        }
        if !err_small(&self.abs_err) {
            return Self {
                value: bf_zero(),
                abs_err: err_unbounded(),
                bits,
            };
        }
        // sum x^k / k! for k >= 1 at working precision; geometric tail bound
        // with ratio <= 1/4 gives truncation <= |last term| / 2... the ratio
        // between consecutive terms is |x|/(k+1) <= 1/4, so the tail after
        // the last added term T is <= |T| * (1/4)/(1 - 1/4) = |T|/3.
        let mut term = Self {
            value: self.value.clone(),
            abs_err: self.abs_err.clone(),
            bits,
        };
        let mut sum = term.clone();
        for k in 2..=(2 + bits) {
            term = term.mul(self).div(&Self::from_integer(k as i64, bits));
            sum = sum.add(&term);
            let tiny = ulp_scaled(&sum.value, bits, -8);
            if matches!(term.value.abs().cmp(&tiny), Some(c) if c < 0) {
                break;
            }
        }
        let tail = emul(&term.value.abs(), &two_pow(-1));
        Self {
            value: sum.value,
            abs_err: eadd(&sum.abs_err, &tail),
            bits,
        }
    }

    /// `log(1 + x)`, stable for small `x`.
    pub fn ln1p(&self) -> Self {
        let bits = self.bits;
        let quarter = two_pow(-2);
        let small = matches!(self.value.abs().cmp(&quarter), Some(c) if c < 0);
        if !small {
            return Self::one(bits).add(self).ln();
        }
        if !err_small(&self.abs_err) {
            return Self {
                value: bf_zero(),
                abs_err: err_unbounded(),
                bits,
            };
        }
        // sum (-1)^(k+1) x^k / k; |x| < 1/4 so the tail after the last added
        // term is <= |T| * (1/4)/(1-1/4) = |T|/3 < |T|/2.
        // Input error: |d ln1p| = 1/(1+x) <= 1/(1 - 1/4 - da) <= 2 for small da.
        let mut power = self.clone();
        let mut sum = self.clone();
        for k in 2..=(2 + bits) {
            power = power.mul(self);
            let term = power.div(&Self::from_integer(k as i64, bits));
            if k % 2 == 0 {
                sum = sum.sub(&term);
            } else {
                sum = sum.add(&term);
            }
            let tiny = ulp_scaled(&sum.value, bits, -8);
            if matches!(term.value.abs().cmp(&tiny), Some(c) if c < 0) {
                break;
            }
        }
        let tail = emul(&power.value.abs(), &two_pow(-1));
        Self {
            value: sum.value,
            abs_err: eadd(&sum.abs_err, &tail),
            bits,
        }
    }

    /// Crude `f64` approximation of the value (sign, top mantissa word and
    /// exponent only) — used for adaptive policy decisions, never for math.
    pub fn approx_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, e, _)) = self.value.as_raw_parts() else {
            return if self.value.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        };
        let top = *words.last().unwrap() as f64; // in [2^63, 2^64)
        let mag = top * f64::exp2(e as f64 - 64.0);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Re-rounds to a different working precision (error adjusted upward).
    pub fn with_bits(&self, bits: usize) -> Self {
        if bits >= self.bits {
            return Self { value: self.value.clone(), abs_err: self.abs_err.clone(), bits };
        }
        let mut value = self.value.clone();
        value.set_precision(bits, RM).expect("precision change failed");
        let abs_err = eadd(&self.abs_err, &ulp1(&value, bits));
        Self { value, abs_err, bits }
    }
}

/// Errors above 1 invalidate the first-order propagation constants used for
/// `exp`; treat them as already blown.
fn err_small(e: &BigFloat) -> bool {
    matches!(e.cmp(&BigFloat::from_i8(1, ERR_BITS)), Some(c) if c <= 0)
}

/// Upper bound for `cosh` over the enclosure of `x` (64-bit, rounded up).
fn cosh_upper(x: &PrecisionReal) -> BigFloat {
    let hi = x.value.abs().add(&x.abs_err, ERR_BITS, RM_UP);
    with_consts(|cc| hi.cosh(ERR_BITS, RM_UP, cc))
}

/// Cheap exactness check for integer conversions: `value` round-trips to `n`.
fn value_is_exact_int(value: &BigFloat, n: &BigInt) -> bool {
    match bigfloat_to_rational(value) {
        Some(q) => q.denom().is_one() && q.numer() == n,
        None => false,
    }
}

/// Working precision (bits) for a decimal-digit target, with guard bits.
pub fn bits_for_digits(digits: usize) -> usize {
    // log2(10) ~ 3.322; add a fixed guard band and round up to a word.
    let raw = (digits as f64 * 3.322).ceil() as usize + 32;
    raw.div_ceil(64) * 64
}

/// `10^(-digits)` as an exact rational tolerance.
pub fn digits_tolerance(digits: usize) -> BigRational {
    crate::rat::pow10_rat(-(digits as i64))
}

/// Runs `eval` at increasing precision until the produced error bound fits
/// `tol`, starting from `start_bits` and doubling up to `max_bits`.
pub fn refine_until<T>(
    start_bits: usize,
    max_bits: usize,
    tol: &BigRational,
    mut eval: impl FnMut(usize) -> Result<(PrecisionReal, T)>,
) -> Result<(PrecisionReal, T)> {
    let mut bits = start_bits.max(64);
    loop {
        let (r, aux) = eval(bits)?;
        if r.err_within(tol) {
            return Ok((r, aux));
        }
        if bits >= max_bits {
            return Err(Error::Precision(format!(
                "error bound {} still above tolerance at {} bits",
                r.to_decimal(3).1,
                bits
            )));
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, parse_rational, ratio};

    fn close_to(x: &PrecisionReal, reference: &BigRational) {
        let v = x.value_rational().expect("finite");
        let e = x.err_rational().expect("bounded");
        assert!(
            (v - reference).abs() <= e,
            "reference outside enclosure (err {})",
            x.to_decimal(5).1
        );
    }

    #[test]
    fn integers_are_exact() {
        let x = PrecisionReal::from_rational(&int(42), 128);
        assert_eq!(x.value_rational().unwrap(), int(42));
        assert!(x.err_rational().unwrap().is_zero());
    }

    #[test]
    fn dyadics_are_exact() {
        let x = PrecisionReal::from_dyadic(-5, 7, 128); // -5/128
        assert_eq!(x.value_rational().unwrap(), ratio(-5, 128));
        assert!(x.err_rational().unwrap().is_zero());
    }

    #[test]
    fn one_third_is_tightly_enclosed() {
        let q = ratio(1, 3);
        let x = PrecisionReal::from_rational(&q, 128);
        close_to(&x, &q);
        assert!(x.err_within(&parse_rational("1e-36").unwrap()));
    }

    #[test]
    fn field_ops_enclose_exact_rational_results() {
        let bits = 192;
        let a = PrecisionReal::from_rational(&ratio(1, 3), bits);
        let b = PrecisionReal::from_rational(&ratio(1, 7), bits);
        let c = PrecisionReal::from_rational(&ratio(22, 7), bits);
        let got = a.add(&b).mul(&c).sub(&b).div(&c);
        let exact = ((ratio(1, 3) + ratio(1, 7)) * ratio(22, 7) - ratio(1, 7)) / ratio(22, 7);
        close_to(&got, &exact);
        assert!(got.err_within(&parse_rational("1e-50").unwrap()));
    }

    #[test]
    fn division_by_enclosure_containing_zero_blows_the_bound() {
        let bits = 64;
        let tiny = PrecisionReal::with_error(
            BigFloat::from_f64(1e-30, bits),
            BigFloat::from_f64(1e-20, bits),
            bits,
        );
        let r = PrecisionReal::one(bits).div(&tiny);
        assert!(r.err_is_unbounded());
        assert!(!r.err_within(&parse_rational("1e100").unwrap()));
    }

    #[test]
    fn exp_matches_frozen_digits_of_e() {
        // Reference: e rounded to 50 decimals — carries up to 5e-51 of its
        // own rounding, so allow that on top of the computed bound.
        let e_ref = parse_rational("2.71828182845904523536028747135266249775724709369996").unwrap();
        let x = PrecisionReal::one(256).exp();
        let diff = (x.value_rational().unwrap() - &e_ref).abs();
        let budget = x.err_rational().unwrap() + parse_rational("5e-51").unwrap();
        assert!(diff <= budget, "e mismatch: {diff}");
        assert!(x.err_within(&parse_rational("1e-70").unwrap()));
    }

    #[test]
    fn pi_matches_frozen_digits() {
        let pi_ref = parse_rational("3.14159265358979323846264338327950288419716939937511").unwrap();
        let x = PrecisionReal::pi(256);
        let diff = (x.value_rational().unwrap() - &pi_ref).abs();
        let budget = x.err_rational().unwrap() + parse_rational("5e-51").unwrap();
        assert!(diff <= budget, "pi mismatch: {diff}");
    }

    #[test]
    fn ln_exp_round_trip() {
        for bits in [64, 128, 320] {
            let x = PrecisionReal::from_rational(&ratio(7, 5), bits);
            let y = x.exp().ln();
            close_to(&y, &ratio(7, 5));
        }
    }

    #[test]
    fn sin_of_pi_encloses_zero() {
        let x = PrecisionReal::pi(256).sin();
        let v = x.value_rational().unwrap().abs();
        let e = x.err_rational().unwrap();
        assert!(v <= e, "sin(pi) enclosure misses zero");
    }

    #[test]
    fn expm1_small_argument_agrees_with_exp() {
        let q = parse_rational("1e-12").unwrap();
        let bits = 256;
        let x = PrecisionReal::from_rational(&q, bits);
        let direct = x.expm1();
        // Series reference: x + x^2/2 + x^3/6 encloses to ~1e-51.
        let series = &q + (&q * &q) / int(2) + (&q * &q * &q) / int(6);
        let v = direct.value_rational().unwrap();
        assert!(
            (v - &series).abs() < parse_rational("1e-49").unwrap(),
            "expm1 series mismatch"
        );
        // And the naive exp-then-subtract path must agree within bounds.
        let naive = x.exp().sub(&PrecisionReal::one(bits));
        let d = (direct.value_rational().unwrap() - naive.value_rational().unwrap()).abs();
        let budget = direct.err_rational().unwrap() + naive.err_rational().unwrap();
        assert!(d <= budget);
    }

    #[test]
    fn ln1p_agrees_with_ln() {
        let bits = 192;
        for q in [ratio(1, 3), ratio(-1, 5), ratio(1, 97)] {
            let x = PrecisionReal::from_rational(&q, bits);
            let a = x.ln1p();
            let b = PrecisionReal::one(bits).add(&x).ln();
            let d = (a.value_rational().unwrap() - b.value_rational().unwrap()).abs();
            assert!(d <= a.err_rational().unwrap() + b.err_rational().unwrap());
        }
    }

    #[test]
    fn hyperbolics_satisfy_pythagorean_identity() {
        let bits = 192;
        let x = PrecisionReal::from_rational(&ratio(9, 8), bits);
        let c = x.cosh();
        let s = x.sinh();
        let lhs = c.mul(&c).sub(&s.mul(&s));
        close_to(&lhs, &int(1));
        // tanh = sinh / cosh
        let t1 = x.tanh();
        let t2 = s.div(&c);
        let d = (t1.value_rational().unwrap() - t2.value_rational().unwrap()).abs();
        assert!(d <= t1.err_rational().unwrap() + t2.err_rational().unwrap());
    }

    #[test]
    fn pow_int_matches_exact_rational_power() {
        let x = PrecisionReal::from_rational(&ratio(3, 7), 256);
        let got = x.pow_int(11);
        let mut exact = int(1);
        for _ in 0..11 {
            exact *= ratio(3, 7);
        }
        close_to(&got, &exact);
    }

    #[test]
    fn definite_sign_predicates() {
        let bits = 128;
        let pos = PrecisionReal::from_rational(&ratio(1, 1000), bits);
        assert!(pos.definitely_positive());
        assert!(!pos.definitely_negative());
        let neg = pos.neg();
        assert!(neg.definitely_negative());
        // An enclosure straddling zero is neither.
        let straddle = PrecisionReal::with_error(
            BigFloat::from_f64(1e-10, bits),
            BigFloat::from_f64(1.0, bits),
            bits,
        );
        assert!(!straddle.definitely_positive());
        assert!(!straddle.definitely_negative());
    }

    #[test]
    fn to_decimal_formats_value_and_error() {
        let x = PrecisionReal::from_rational(&ratio(2, 3), 128);
        let (v, e) = x.to_decimal(10);
        assert_eq!(v, "0.6666666667");
        assert!(e.contains("e-"), "error rendering looks wrong: {e}");
    }

    #[test]
    fn refine_until_escalates_precision() {
        let tol = parse_rational("1e-40").unwrap();
        let (r, _) = refine_until(64, 1024, &tol, |bits| {
            Ok((PrecisionReal::from_rational(&ratio(1, 3), bits).exp(), ()))
        })
        .unwrap();
        assert!(r.err_within(&tol));
        assert!(r.bits() > 64, "should have needed more than 64 bits");
    }

    #[test]
    fn random_expression_self_consistency() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xC0FFEE);
        // (a + b) - b must enclose a; (a*b)/b must enclose a.
        for _ in 0..100 {
            let a = ratio(rng.gen_range(-999i64..=999), rng.gen_range(1i64..=999));
            let b = ratio(rng.gen_range(1i64..=999), rng.gen_range(1i64..=999));
            let bits = [64usize, 128, 192][rng.gen_range(0..3)];
            let pa = PrecisionReal::from_rational(&a, bits);
            let pb = PrecisionReal::from_rational(&b, bits);
            close_to(&pa.add(&pb).sub(&pb), &a);
            close_to(&pa.mul(&pb).div(&pb), &a);
        }
    }
}
