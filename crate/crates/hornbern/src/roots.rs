//! Real-root isolation for rational polynomials via Sturm chains.
//!
//! The chain is built over primitive integer polynomials (every element is
//! divided by its positive content after each pseudo-remainder step), which
//! keeps coefficient growth polynomial instead of exponential while
//! preserving signs exactly. All sign decisions are exact integer/rational
//! arithmetic; nothing here trusts floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::RationalPolynomial;
use crate::rat::BigRational;
use crate::{Error, Result};

/// Dense integer polynomial, low-to-high, no trailing zeros.
type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn deg(p: &IntPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

/// Positive gcd of all coefficients (0 for the zero polynomial).
fn content(p: &IntPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides out the content; keeps signs (the divisor is positive).
fn primitive(p: IntPoly) -> IntPoly {
    let p = trim(p);
    let g = content(&p);
    if g.is_zero() || g.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / &g).collect()
}

/// Clears denominators and content: returns an integer polynomial that is a
/// positive rational multiple of `p` (so all sign information is preserved).
fn to_primitive_int(p: &RationalPolynomial) -> IntPoly {
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: IntPoly = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    primitive(ints)
}

fn eval_int(p: &IntPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

fn derivative_int(p: &IntPoly) -> IntPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect(),
    )
}

/// Pseudo-remainder of `a` by `b`, corrected so the result is a *positive*
/// rational multiple of the true polynomial remainder. The standard
/// pseudo-division multiplies `a` by `lc(b)^k`, which flips the sign when
/// `lc(b) < 0` and `k` is odd; we undo that flip before returning.
fn signed_prem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = deg(b).expect("division by zero polynomial");
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    let mut steps = 0usize;
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let lr = r.last().unwrap().clone();
        // r := lb*r - lr * x^(dr-db) * b
        let mut next: IntPoly = r.iter().map(|c| c * &lb).collect();
        for (i, c) in b.iter().enumerate() {
            next[dr - db + i] -= &lr * c;
        }
        r = trim(next);
        steps += 1;
    }
    if lb.is_negative() && steps % 2 == 1 {
        r = r.into_iter().map(|c| -c).collect();
    }
    r
}

/// Polynomial gcd (primitive PRS); result is primitive with unspecified sign.
fn int_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut f = primitive(a.clone());
    let mut g = primitive(b.clone());
    if deg(&f) < deg(&g) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        let r = primitive(signed_prem(&f, &g));
        f = g;
        g = r;
    }
    f
}

/// Exact division `a / b` assuming `b` divides `a` over the rationals;
/// returns the primitive quotient.
fn exact_div(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let da = match deg(a) {
        Some(d) => d,
        None => return Vec::new(),
    };
    let db = deg(b).expect("division by zero polynomial");
    assert!(da >= db, "quotient degree underflow");
    let lb = BigRational::from_integer(b.last().unwrap().clone());
    let mut rem: Vec<BigRational> = a
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut quot = vec![BigRational::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = rem[k + db].clone() / &lb;
        quot[k] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let delta = &c * BigRational::from_integer(bc.clone());
            rem[k + i] -= delta;
        }
    }
    // Scale the rational quotient back to a primitive integer polynomial.
    let rp = RationalPolynomial::new(quot, "x");
    to_primitive_int(&rp)
}

fn sign_int(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

fn sign_rat(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0i32;
    let mut v = 0usize;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Sturm chain of the square-free part of a polynomial.
///
/// `f0` is the primitive square-free part, so root *sets* (not
/// multiplicities) agree with the input polynomial, which is exactly what
/// isolation needs.
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &RationalPolynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::Invalid(
                "cannot build a Sturm chain for the zero polynomial".into(),
            ));
        }
        let ip = to_primitive_int(p);
        let d = derivative_int(&ip);
        let f0 = if d.is_empty() {
            ip // nonzero constant: chain of length 1, no roots
        } else {
            let g = int_gcd(&ip, &d);
            if deg(&g) == Some(0) {
                ip
            } else {
                exact_div(&ip, &g)
            }
        };
        let mut chain = vec![f0.clone()];
        let f1 = derivative_int(&f0);
        if !f1.is_empty() {
            chain.push(f1);
            loop {
                let k = chain.len();
                let r = primitive(signed_prem(&chain[k - 2], &chain[k - 1]));
                if r.is_empty() {
                    break;
                }
                chain.push(r.into_iter().map(|c| -c).collect());
            }
        }
        Ok(Self { chain })
    }

    /// The square-free polynomial whose roots the chain describes.
    pub fn squarefree_part(&self) -> RationalPolynomial {
        RationalPolynomial::new(
            self.chain[0]
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
            "x",
        )
    }

    pub fn is_root(&self, x: &BigRational) -> bool {
        eval_int(&self.chain[0], x).is_zero()
    }

    /// Sign-variation count of the chain at `x` (zeros skipped).
    pub fn variations_at(&self, x: &BigRational) -> usize {
        count_variations(self.chain.iter().map(|f| sign_rat(&eval_int(f, x))))
    }

    /// Sign-variation count in the limit `x -> +infinity` (leading signs).
    pub fn variations_at_pos_infinity(&self) -> usize {
        count_variations(self.chain.iter().map(|f| sign_int(f.last().unwrap())))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    /// `a` must not be a root (callers arrange this; a root at `b` counts).
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        debug_assert!(a <= b);
        self.variations_at(a) - self.variations_at(b)
    }

    /// Number of distinct roots in `(a, +infinity)`.
    pub fn count_roots_above(&self, a: &BigRational) -> usize {
        self.variations_at(a) - self.variations_at_pos_infinity()
    }
}

/// Upper bound `B` such that every real root of `p` satisfies `|x| < B`
/// (Cauchy bound: `1 + max |c_i| / |lc|`).
pub fn cauchy_root_bound(p: &RationalPolynomial) -> Result<BigRational> {
    let d = p
        .degree()
        .ok_or_else(|| Error::Invalid("root bound of the zero polynomial".into()))?;
    let lc = p.coeff(d);
    let mut m = BigRational::zero();
    for k in 0..d {
        let r = (p.coeff(k) / &lc).abs();
        if r > m {
            m = r;
        }
    }
    Ok(m + BigRational::one())
}

/// Isolating intervals for all distinct roots of `p` in `(0, +infinity)`.
///
/// Each returned closed interval `[lo, hi]` has rational endpoints, contains
/// exactly one root in its interior, endpoints are never roots, and the
/// intervals are pairwise disjoint.
pub fn isolate_positive_roots(
    p: &RationalPolynomial,
) -> Result<Vec<(BigRational, BigRational)>> {
    if p.is_zero() {
        return Err(Error::Invalid(
            "cannot isolate roots of the zero polynomial".into(),
        ));
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(p)?;
    isolate_positive_roots_with(&chain, p)
}

/// [`isolate_positive_roots`] against an already-built chain for the same
/// polynomial, so callers that also refine can pay for the chain once.
pub fn isolate_positive_roots_with(
    chain: &SturmChain,
    p: &RationalPolynomial,
) -> Result<Vec<(BigRational, BigRational)>> {
    let zero = BigRational::zero();
    // x = 0 may be a root of p; the Sturm variation count at 0 then still
    // yields V(0) - V(inf) = #roots in (0, inf) because variations_at skips
    // the vanishing chain head consistently only if f0(0) != 0. Nudge the
    // left end instead: roots below `lo_start` don't exist in (0, B) unless
    // 0 itself is a root, so shrink away from 0 until it is root-free.
    let mut lo_start = zero.clone();
    while chain.is_root(&lo_start) {
        // Only x = 0 can trip this (lo_start starts at 0); move just above 0
        // but below the smallest positive root via 1/(1 + inv bound) of the
        // reciprocal polynomial would be overkill — halve a small step until
        // no root is skipped: count must match on (step, B].
        lo_start = if lo_start.is_zero() {
            // smallest positive root is > 1/(Cauchy bound of reversed poly);
            // use that as a safe left edge.
            positive_root_lower_edge(p)?
        } else {
            lo_start / BigRational::from_integer(2.into())
        };
    }
    let total = chain.count_roots_above(&lo_start);
    if total == 0 {
        return Ok(Vec::new());
    }
    // Practical right edge: grow a power-of-two cap until the count below it
    // matches the count to +infinity. The Cauchy bound stays the rigorous
    // fallback, but a tiny leading coefficient can inflate it far beyond the
    // actual root range, and bisecting down from there would dominate the
    // whole isolation.
    let bound = cauchy_root_bound(p)?;
    let two = BigRational::from_integer(2.into());
    let mut hi_edge = std::cmp::min(BigRational::one(), bound.clone());
    while chain.count_roots(&lo_start, &hi_edge) < total {
        hi_edge = &hi_edge * &two;
        if hi_edge >= bound {
            hi_edge = bound.clone();
            break;
        }
    }
    // Keep the edge root-free (a power-of-two cap can land on a root; the
    // Cauchy bound itself is strict and cannot).
    while chain.is_root(&hi_edge) {
        hi_edge = &hi_edge * BigRational::new(65.into(), 64.into());
    }
    let mut out = Vec::new();
    let mut stack = vec![(lo_start, hi_edge)];
    while let Some((lo, hi)) = stack.pop() {
        let n = chain.count_roots(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            // Shrink until the root is interior and the piece is clearly
            // separated from its siblings, then record it.
            out.push(tighten_single(&chain, lo, hi));
            continue;
        }
        let mut mid = (&lo + &hi) / BigRational::from_integer(2.into());
        // Never split exactly at a root: slide the split point a little.
        let mut shrink = BigRational::new(1.into(), 64.into());
        while chain.is_root(&mid) {
            mid = &lo + (&hi - &lo) * (BigRational::new(1.into(), 2.into()) + &shrink);
            shrink = shrink / BigRational::from_integer(2.into());
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    // Sibling pieces from the bisection can still share a (root-free)
    // endpoint; refine until all intervals are strictly separated.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 1..out.len() {
            if out[i - 1].1 >= out[i].0 {
                changed = true;
                let (lo, hi) = out[i - 1].clone();
                let halved = refine_once(&chain, lo, hi);
                out[i - 1] = halved;
                let (lo, hi) = out[i].clone();
                out[i] = refine_once(&chain, lo, hi);
            }
        }
    }
    Ok(out)
}

/// One bisection step of an isolating interval (root counted on `(lo, hi]`).
fn refine_once(
    chain: &SturmChain,
    lo: BigRational,
    hi: BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    let mid = (&lo + &hi) / &two;
    if chain.is_root(&mid) {
        let w = (&hi - &lo) / BigRational::from_integer(1024.into());
        return (&mid - &w, mid + w);
    }
    if chain.count_roots(&lo, &mid) == 1 {
        (lo, mid)
    } else {
        (mid, hi)
    }
}

/// A positive rational strictly below every positive root of `p`:
/// 1 / (Cauchy bound of the coefficient-reversed polynomial).
fn positive_root_lower_edge(p: &RationalPolynomial) -> Result<BigRational> {
    // Strip x^k factors (roots at 0 are not positive roots).
    let coeffs = p.coeffs();
    let first_nonzero = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial");
    let reversed: Vec<BigRational> = coeffs[first_nonzero..].iter().rev().cloned().collect();
    let rp = RationalPolynomial::new(reversed, "x");
    Ok(cauchy_root_bound(&rp)?.recip())
}

/// Bisects `(lo, hi]` (known to hold exactly one root) until the remaining
/// closed interval has root-free endpoints and width at most the original
/// quarter-width, making sibling intervals disjoint.
fn tighten_single(
    chain: &SturmChain,
    mut lo: BigRational,
    mut hi: BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    for _ in 0..4 {
        let mid = (&lo + &hi) / &two;
        if chain.is_root(&mid) {
            // The root is exactly at mid; return a tiny interval around it.
            let w = (&hi - &lo) / BigRational::from_integer(1024.into());
            return (&mid - &w, mid + w);
        }
        if chain.count_roots(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Shrinks an isolating interval for a single root below `target_width` by
/// bisection. The interval must contain exactly one root of the chain's
/// polynomial, counted on `(lo, hi]` with `lo` not a root.
///
/// The square-free chain head changes sign exactly once across such an
/// interval, so each step needs one sign of `f0` rather than two full-chain
/// variation counts — the difference between evaluating one moderate
/// polynomial and forty swollen ones per step.
pub fn refine_root(
    chain: &SturmChain,
    mut lo: BigRational,
    mut hi: BigRational,
    target_width: &BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    let f0 = &chain.chain[0];
    let s_lo = sign_rat(&eval_int(f0, &lo));
    debug_assert_ne!(s_lo, 0, "left endpoint of an isolating interval is never a root");
    while &hi - &lo > *target_width {
        let mid = (&lo + &hi) / &two;
        let s_mid = sign_rat(&eval_int(f0, &mid));
        if s_mid == 0 {
            let w: BigRational = target_width / BigRational::from_integer(4.into());
            return (&mid - &w, mid + w);
        }
        if s_mid == s_lo {
            // No sign change yet: the root (possibly sitting exactly at the
            // original `hi`) is in the right half.
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Number of distinct roots of `p` in `(0, +infinity)` (Sturm count).
pub fn count_positive_roots(p: &RationalPolynomial) -> Result<usize> {
    Ok(isolate_positive_roots(p)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    fn rp(coeffs: &[(i64, i64)]) -> RationalPolynomial {
        RationalPolynomial::new(coeffs.iter().map(|&(n, d)| ratio(n, d)).collect(), "x")
    }

    #[test]
    fn no_positive_root_for_one_plus_x() {
        let p = rp(&[(1, 1), (1, 1)]);
        assert!(isolate_positive_roots(&p).unwrap().is_empty());
    }

    #[test]
    fn isolates_the_root_of_x_squared_minus_one() {
        let p = rp(&[(-1, 1), (0, 1), (1, 1)]);
        let roots = isolate_positive_roots(&p).unwrap();
        assert_eq!(roots.len(), 1);
        let (lo, hi) = &roots[0];
        assert!(*lo < int(1) && int(1) < *hi, "interval {lo}..{hi} misses 1");
    }

    #[test]
    fn three_known_roots_separated() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let p = rp(&[(-6, 1), (11, 1), (-6, 1), (1, 1)]);
        let roots = isolate_positive_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        for (k, (lo, hi)) in roots.iter().enumerate() {
            let r = int(k as i64 + 1);
            assert!(*lo < r && r < *hi, "root {r} not inside {lo}..{hi}");
        }
        // Disjoint and ordered.
        for w in roots.windows(2) {
            assert!(w[0].1 < w[1].0);
        }
    }

    #[test]
    fn repeated_roots_counted_once() {
        // (x-2)^2 (x+1)
        let p = rp(&[(4, 1), (0, 1), (-3, 1), (1, 1)]);
        let roots = isolate_positive_roots(&p).unwrap();
        assert_eq!(roots.len(), 1);
        let (lo, hi) = &roots[0];
        assert!(*lo < int(2) && int(2) < *hi);
    }

    #[test]
    fn root_at_zero_is_not_positive() {
        // x^2 (x - 1/2)
        let p = rp(&[(0, 1), (0, 1), (-1, 2), (1, 1)]);
        let roots = isolate_positive_roots(&p).unwrap();
        assert_eq!(roots.len(), 1);
        let (lo, hi) = &roots[0];
        assert!(*lo < ratio(1, 2) && ratio(1, 2) < *hi);
    }

    #[test]
    fn endpoints_have_opposite_signs() {
        // Mixed rational coefficients with three positive irrational roots:
        // (x^2-2)(x^2-3)(x+5)/7 has sqrt(2), sqrt(3) positive.
        let a = rp(&[(-2, 1), (0, 1), (1, 1)]);
        let b = rp(&[(-3, 1), (0, 1), (1, 1)]);
        let c = rp(&[(5, 1), (1, 1)]);
        let p = a.mul(&b).mul(&c).scale(&ratio(1, 7));
        let roots = isolate_positive_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        for (lo, hi) in &roots {
            let sl = p.eval(lo);
            let sh = p.eval(hi);
            assert!(
                sl.is_negative() != sh.is_negative() && !sl.is_zero() && !sh.is_zero(),
                "no sign change across {lo}..{hi}"
            );
        }
    }

    #[test]
    fn refine_narrows_to_target() {
        let p = rp(&[(-2, 1), (0, 1), (1, 1)]); // sqrt(2)
        let chain = SturmChain::new(&p).unwrap();
        let roots = isolate_positive_roots(&p).unwrap();
        let (lo, hi) = roots[0].clone();
        let target = ratio(1, 1_000_000);
        let (lo, hi) = refine_root(&chain, lo, hi, &target);
        assert!(&hi - &lo <= target);
        // sqrt(2) = 1.41421356... must be inside.
        let s2_lo = ratio(141421356, 100000000);
        let s2_hi = ratio(141421357, 100000000);
        assert!(lo < s2_hi && s2_lo < hi);
    }

    #[test]
    fn sturm_count_matches_fine_grid_scan_on_random_polys() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..40 {
            let degree = rng.gen_range(1..=10);
            let coeffs: Vec<BigRational> = (0..=degree)
                .map(|_| ratio(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9)))
                .collect();
            let p = RationalPolynomial::new(coeffs, "x");
            if p.is_zero() || p.degree() == Some(0) {
                continue;
            }
            let isolated = isolate_positive_roots(&p).unwrap();
            // Brute force: count sign changes of the square-free part on a
            // fine grid over (0, bound). A fine enough grid catches every
            // root of these small random polynomials except tangential
            // (even-multiplicity) ones — which the square-free part turns
            // into ordinary crossings.
            let chain = SturmChain::new(&p).unwrap();
            let sf = chain.squarefree_part();
            let bound = cauchy_root_bound(&p).unwrap();
            let steps = 20_000i64;
            let mut crossings = 0usize;
            let mut last_sign = 0i32;
            for k in 0..=steps {
                let x = &bound * ratio(k, steps) + ratio(1, 1_000_000_000);
                let v = sf.eval(&x);
                let s = if v.is_zero() {
                    0
                } else if v.is_negative() {
                    -1
                } else {
                    1
                };
                if s != 0 {
                    if last_sign != 0 && s != last_sign {
                        crossings += 1;
                    }
                    last_sign = s;
                }
            }
            assert_eq!(
                isolated.len(),
                crossings,
                "mismatch for p = {p} (grid {crossings}, sturm {})",
                isolated.len()
            );
        }
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert!(isolate_positive_roots(&RationalPolynomial::zero("x")).is_err());
        assert!(SturmChain::new(&RationalPolynomial::zero("x")).is_err());
    }
}
