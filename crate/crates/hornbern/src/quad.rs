//! Double-exponential (tanh-sinh and exp-sinh) quadrature over
//! [`PrecisionReal`] integrands.
//!
//! The substitution `x = mid + half * tanh((pi/2) sinh u)` turns endpoint
//! singularities of integrable type into doubly-exponentially decaying
//! integrands on the whole real line, where the trapezoid rule converges
//! extremely fast. Levels halve the step size and reuse all previous nodes.
//!
//! Error accounting has three parts, all folded into the returned
//! [`PrecisionReal`]'s bound:
//!
//! * accumulated integrand and rounding errors — propagated exactly by the
//!   `PrecisionReal` arithmetic of the weighted sum;
//! * a discretization estimate — ten times the difference between the last
//!   two refinement levels (a standard, deliberately pessimistic heuristic
//!   for doubly-exponentially converging sequences);
//! * a truncation allowance for the discarded tails of the node sum.
//!
//! Integrands receive the node position together with *stably computed*
//! distances to each endpoint (`x - a` and `b - x`), so that functions with
//! endpoint structure (like `log(1-t)` near `t = 1`) can be evaluated
//! without catastrophic cancellation.

use astro_float::BigFloat;
use std::cell::RefCell;
use std::collections::HashMap;

use crate::rat::BigRational;
use crate::real::PrecisionReal;
use crate::{Error, Result};

/// Accuracy request for one integration.
#[derive(Clone, Debug)]
pub struct QuadTarget {
    /// Working precision for node/weight/integrand arithmetic.
    pub bits: usize,
    /// Absolute tolerance the final error bound should meet.
    pub abs_tol: BigRational,
    /// Maximum refinement level (step `2^-level`); 12 is far beyond anything
    /// the integrands in this crate need.
    pub max_level: u32,
}

impl QuadTarget {
    pub fn for_digits(digits: usize) -> Self {
        Self {
            bits: crate::real::bits_for_digits(digits) + 64,
            abs_tol: crate::real::digits_tolerance(digits),
            max_level: 12,
        }
    }

    pub fn with_bits(mut self, bits: usize) -> Self {
        self.bits = bits;
        self
    }
}

/// A tanh-sinh node handed to the integrand.
pub struct TsPoint {
    pub x: PrecisionReal,
    /// `x - a`, computed without cancellation.
    pub from_a: PrecisionReal,
    /// `b - x`, computed without cancellation.
    pub from_b: PrecisionReal,
}

/// An exp-sinh node handed to the integrand (integration over `(a, inf)`).
pub struct EsPoint {
    pub x: PrecisionReal,
    /// `x - a = e^v`, available exactly even when it underflows `x` itself.
    pub from_a: PrecisionReal,
}

/// Cached per-(bits, level, k) tanh-sinh node factors:
/// `frac_a = 1 + tanh v`, `frac_b = 1 - tanh v`,
/// `wcore = (pi/2) cosh u * sech^2 v`.
struct TsNodeCore {
    frac_a: PrecisionReal,
    frac_b: PrecisionReal,
    wcore: PrecisionReal,
}

/// Cached exp-sinh node factors: `ev = e^v`, `wcore = (pi/2) cosh u * e^v`.
struct EsNodeCore {
    ev: PrecisionReal,
    wcore: PrecisionReal,
}

thread_local! {
    static TS_CACHE: RefCell<HashMap<(usize, u32, i64), TsNodeCore>> =
        RefCell::new(HashMap::new());
    static ES_CACHE: RefCell<HashMap<(usize, u32, i64), EsNodeCore>> =
        RefCell::new(HashMap::new());
}

/// `u = k * 2^-level` and `v = (pi/2) sinh u` with derived factors.
fn ts_node(bits: usize, level: u32, k: i64) -> TsNodeCore {
    let key = (bits, level, k);
    if let Some(hit) = TS_CACHE.with(|c| {
        c.borrow().get(&key).map(|n| TsNodeCore {
            frac_a: n.frac_a.clone(),
            frac_b: n.frac_b.clone(),
            wcore: n.wcore.clone(),
        })
    }) {
        return hit;
    }
    let u = PrecisionReal::from_dyadic(k, level, bits);
    let half_pi = PrecisionReal::pi(bits).mul_2exp(-1);
    let v = half_pi.mul(&u.sinh());
    let ev = v.exp();
    let emv = ev.recip();
    let denom = ev.add(&emv);
    let two = PrecisionReal::from_integer(2, bits);
    let frac_a = two.mul(&ev).div(&denom);
    let frac_b = two.mul(&emv).div(&denom);
    let sech2 = two.mul(&two).div(&denom.mul(&denom));
    let wcore = half_pi.mul(&u.cosh()).mul(&sech2);
    let out = TsNodeCore {
        frac_a: frac_a.clone(),
        frac_b: frac_b.clone(),
        wcore: wcore.clone(),
    };
    TS_CACHE.with(|c| {
        c.borrow_mut().insert(key, TsNodeCore { frac_a, frac_b, wcore });
    });
    out
}

fn es_node(bits: usize, level: u32, k: i64) -> EsNodeCore {
    let key = (bits, level, k);
    if let Some(hit) = ES_CACHE.with(|c| {
        c.borrow().get(&key).map(|n| EsNodeCore {
            ev: n.ev.clone(),
            wcore: n.wcore.clone(),
        })
    }) {
        return hit;
    }
    let u = PrecisionReal::from_dyadic(k, level, bits);
    let half_pi = PrecisionReal::pi(bits).mul_2exp(-1);
    let v = half_pi.mul(&u.sinh());
    let ev = v.exp();
    let wcore = half_pi.mul(&u.cosh()).mul(&ev);
    let out = EsNodeCore { ev: ev.clone(), wcore: wcore.clone() };
    ES_CACHE.with(|c| {
        c.borrow_mut().insert(key, EsNodeCore { ev, wcore });
    });
    out
}

/// Shared level-driving logic. `eval_node(level, k)` returns the weighted
/// integrand value `w(u) * f(x(u))` (without the step factor `h`), or `None`
/// when the node is beyond the representable transform range and provably
/// negligible.
fn drive_levels(
    spec: &QuadTarget,
    u_cap: f64,
    mut eval_node: impl FnMut(u32, i64) -> Result<Option<PrecisionReal>>,
) -> Result<PrecisionReal> {
    let bits = spec.bits;
    let target_bf = PrecisionReal::from_rational(&spec.abs_tol, 64);
    if !target_bf.value().is_positive() {
        return Err(Error::Invalid("quadrature tolerance must be positive".into()));
    }
    let half_target = target_bf.mul_2exp(-1);
    let mut sum = PrecisionReal::zero(bits);
    let mut tail_allowance = PrecisionReal::zero(64);
    let mut prev_integral: Option<PrecisionReal> = None;
    let mut disc_est: Option<BigFloat> = None;
    let mut converged = false;

    for level in 0..=spec.max_level {
        // Strike threshold: nodes whose final contribution h*|w f| falls
        // below tol/64 twice in a row end the sweep on that side.
        // h = 2^-level, so compare |w f| against tol * 2^level / 64.
        let thresh = target_bf.mul_2exp(level as i64 - 6);
        let k_cap = (u_cap * f64::exp2(level as f64)).ceil() as i64 + 1;
        for side in [1i64, -1] {
            let mut strikes = 0;
            // Level 0 sweeps every integer (k = 0 belongs to the positive
            // sweep); higher levels add the odd multiples only.
            let mut k = if side > 0 {
                if level == 0 {
                    0
                } else {
                    1
                }
            } else {
                -1
            };
            loop {
                if side * k > k_cap {
                    break;
                }
                match eval_node(level, k)? {
                    Some(term) => {
                        sum = sum.add(&term);
                        let small = matches!(
                            term.value().abs().cmp(target_bf.value()),
                            Some(c) if c < 0
                        ) && matches!(
                            term.value().abs().cmp(thresh.value()),
                            Some(c) if c < 0
                        );
                        if small {
                            strikes += 1;
                            if strikes >= 2 {
                                // Geometric-decay allowance for the dropped
                                // tail: 2 * h * |last term|.
                                let last = PrecisionReal::with_error(
                                    term.value().abs(),
                                    astro_float::BigFloat::from_i8(0, 64),
                                    64,
                                );
                                tail_allowance = tail_allowance
                                    .add(&last.mul_2exp(1 - level as i64));
                                break;
                            }
                        } else {
                            strikes = 0;
                        }
                    }
                    None => break, // beyond representable range: negligible
                }
                k += side * if level == 0 { 1 } else { 2 };
            }
        }
        let integral = sum.mul_2exp(-(level as i64));
        if let Some(prev) = &prev_integral {
            let delta = integral.value().sub(prev.value(), 64, astro_float::RoundingMode::Up);
            let est = delta.abs().mul(
                &BigFloat::from_i8(10, 64),
                64,
                astro_float::RoundingMode::Up,
            );
            let small_enough = matches!(est.cmp(half_target.value()), Some(c) if c <= 0);
            disc_est = Some(est);
            if level >= 3 && small_enough {
                converged = true;
            }
        }
        prev_integral = Some(integral);
        if converged {
            break;
        }
    }

    let integral = prev_integral.expect("at least one level ran");
    let mut err = integral.abs_err().clone();
    if let Some(est) = disc_est {
        err = err.add(&est, 64, astro_float::RoundingMode::Up);
    }
    err = err.add(tail_allowance.value(), 64, astro_float::RoundingMode::Up);
    Ok(PrecisionReal::with_error(integral.value().clone(), err, bits))
}

/// Integrates `f` over the finite interval `(a, b)` by tanh-sinh quadrature.
///
/// `f` never sees the endpoints themselves; integrable endpoint
/// singularities are fine. The result's error bound covers integrand errors,
/// rounding, discretization and tail truncation (the discretization part is
/// a safety-factored heuristic, not a theorem).
pub fn tanh_sinh(
    spec: &QuadTarget,
    a: &PrecisionReal,
    b: &PrecisionReal,
    mut f: impl FnMut(&TsPoint) -> Result<PrecisionReal>,
) -> Result<PrecisionReal> {
    let bits = spec.bits;
    let half = b.sub(a).mul_2exp(-1);
    if !half.value().is_positive() {
        return Err(Error::Invalid("tanh_sinh needs a < b".into()));
    }
    // Beyond v = (pi/2) sinh(u_cap) the endpoint distance underflows the
    // working precision's useful range; integrable singularities contribute
    // nothing detectable there.
    let v_budget = ((bits + 128) as f64) * std::f64::consts::LN_2 * 2.0;
    let u_cap = f64::asinh(v_budget * std::f64::consts::FRAC_2_PI) + 0.5;

    drive_levels(spec, u_cap, |level, k| {
        let core = ts_node(bits, level, k);
        let from_a = half.mul(&core.frac_a);
        let from_b = half.mul(&core.frac_b);
        let x = a.add(&from_a);
        let point = TsPoint { x, from_a, from_b };
        let fv = f(&point)?;
        Ok(Some(fv.mul(&half.mul(&core.wcore))))
    })
}

/// Integrates `f` over `(a, infinity)` by exp-sinh quadrature.
///
/// The integrand must decay at infinity at least like `x^(-1-eps)`; slow
/// algebraic decay is fine (the transform reaches astronomically large `x`
/// with few nodes), but the far tail must actually converge.
pub fn exp_sinh(
    spec: &QuadTarget,
    a: &PrecisionReal,
    mut f: impl FnMut(&EsPoint) -> Result<PrecisionReal>,
) -> Result<PrecisionReal> {
    let bits = spec.bits;
    // Positive side: x - a = e^v must stay well inside the binary exponent
    // range (|exponent| < 2^31); budget v <= 4e8. Negative side: e^v
    // underflows usefulness below 2^-(bits+128).
    let v_pos = 4.0e8f64;
    let v_neg = ((bits + 128) as f64) * std::f64::consts::LN_2 * 2.0;
    let u_cap = f64::asinh(v_pos.max(v_neg) * std::f64::consts::FRAC_2_PI) + 0.5;
    let v_pos_cap = v_pos;
    let v_neg_cap = v_neg;

    drive_levels(spec, u_cap, |level, k| {
        // Per-side caps differ; check the actual v for this node in f64.
        let u = k as f64 / f64::exp2(level as f64);
        let v = std::f64::consts::FRAC_PI_2 * f64::sinh(u);
        if v > v_pos_cap || v < -v_neg_cap {
            return Ok(None);
        }
        let core = es_node(bits, level, k);
        let x = a.add(&core.ev);
        let point = EsPoint { x, from_a: core.ev.clone() };
        let fv = f(&point)?;
        Ok(Some(fv.mul(&core.wcore)))
    })
}

/// Clears the node caches (exposed for tests and memory-sensitive callers).
pub fn clear_node_caches() {
    TS_CACHE.with(|c| c.borrow_mut().clear());
    ES_CACHE.with(|c| c.borrow_mut().clear());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, parse_rational, ratio};
    use num_traits::Signed;

    fn pr(q: &BigRational, bits: usize) -> PrecisionReal {
        PrecisionReal::from_rational(q, bits)
    }

    fn check(result: &PrecisionReal, exact: &BigRational, tol: &BigRational) {
        let v = result.value_rational().expect("finite");
        let e = result.err_rational().expect("bounded");
        let diff = (v - exact).abs();
        assert!(diff <= e, "true error {diff} exceeds reported bound {e}");
        assert!(&e <= tol, "bound {e} above tolerance {tol}");
    }

    #[test]
    fn integrates_a_polynomial_exactly_enough() {
        let spec = QuadTarget::for_digits(25);
        let a = pr(&int(0), spec.bits);
        let b = pr(&int(1), spec.bits);
        let r = tanh_sinh(&spec, &a, &b, |p| Ok(p.x.mul(&p.x))).unwrap();
        check(&r, &ratio(1, 3), &spec.abs_tol);
    }

    #[test]
    fn handles_log_singularity_at_left_endpoint() {
        // integral of ln(x) over (0,1) = -1; ln evaluated via the stable
        // endpoint distance.
        let spec = QuadTarget::for_digits(20);
        let a = pr(&int(0), spec.bits);
        let b = pr(&int(1), spec.bits);
        let r = tanh_sinh(&spec, &a, &b, |p| Ok(p.from_a.ln())).unwrap();
        check(&r, &int(-1), &spec.abs_tol);
    }

    #[test]
    fn arctangent_integral_matches_pi() {
        // integral of 1/(1+x^2) over (0,1) = pi/4.
        let spec = QuadTarget::for_digits(30);
        let a = pr(&int(0), spec.bits);
        let b = pr(&int(1), spec.bits);
        let one = PrecisionReal::one(spec.bits);
        let r = tanh_sinh(&spec, &a, &b, |p| Ok(one.add(&p.x.mul(&p.x)).recip())).unwrap();
        let pi_quarter = PrecisionReal::pi(spec.bits + 64).mul_2exp(-2);
        let diff = (r.value_rational().unwrap() - pi_quarter.value_rational().unwrap()).abs();
        let budget = r.err_rational().unwrap() + pi_quarter.err_rational().unwrap();
        assert!(diff <= budget);
        assert!(r.err_within(&spec.abs_tol));
    }

    #[test]
    fn exp_decay_on_half_line() {
        let spec = QuadTarget::for_digits(25);
        let a = pr(&int(0), spec.bits);
        let r = exp_sinh(&spec, &a, |p| Ok(p.x.neg().exp())).unwrap();
        check(&r, &int(1), &spec.abs_tol);
    }

    #[test]
    fn gaussian_on_half_line() {
        // integral of e^(-x^2) over (0, inf) = sqrt(pi)/2; frozen reference.
        let spec = QuadTarget::for_digits(25);
        let a = pr(&int(0), spec.bits);
        let r = exp_sinh(&spec, &a, |p| Ok(p.x.mul(&p.x).neg().exp())).unwrap();
        let reference =
            parse_rational("0.88622692545275801364908374167057259139877472806119").unwrap();
        let v = r.value_rational().unwrap();
        assert!((v - &reference).abs() <= r.err_rational().unwrap() + parse_rational("1e-45").unwrap());
        assert!(r.err_within(&spec.abs_tol));
    }

    #[test]
    fn slow_algebraic_tail_converges() {
        // integral of 1/(1+x)^2 over (0, inf) = 1.
        let spec = QuadTarget::for_digits(20);
        let a = pr(&int(0), spec.bits);
        let one = PrecisionReal::one(spec.bits);
        let r = exp_sinh(&spec, &a, |p| {
            let d = one.add(&p.x);
            Ok(d.mul(&d).recip())
        })
        .unwrap();
        check(&r, &int(1), &spec.abs_tol);
    }

    #[test]
    fn shifted_interval_and_negative_values() {
        // integral of (x - 2) over (1, 3) = 0.
        let spec = QuadTarget::for_digits(20);
        let a = pr(&int(1), spec.bits);
        let b = pr(&int(3), spec.bits);
        let two = PrecisionReal::from_integer(2, spec.bits);
        let r = tanh_sinh(&spec, &a, &b, |p| Ok(p.x.sub(&two))).unwrap();
        let v = r.value_rational().unwrap().abs();
        assert!(v <= r.err_rational().unwrap());
    }

    #[test]
    fn tighter_tolerance_means_tighter_bound() {
        let loose = QuadTarget::for_digits(10);
        let tight = QuadTarget::for_digits(40);
        let f = |p: &TsPoint| Ok(p.x.exp());
        let a10 = pr(&int(0), loose.bits);
        let b10 = pr(&int(1), loose.bits);
        let r10 = tanh_sinh(&loose, &a10, &b10, f).unwrap();
        let a40 = pr(&int(0), tight.bits);
        let b40 = pr(&int(1), tight.bits);
        let r40 = tanh_sinh(&tight, &a40, &b40, f).unwrap();
        let e10 = r10.err_rational().unwrap();
        let e40 = r40.err_rational().unwrap();
        assert!(e40 < e10);
        assert!(e40 <= crate::real::digits_tolerance(40));
        // Both enclose e - 1.
        let exact_lo = parse_rational("1.71828182845904523536028747135266249775").unwrap();
        for r in [&r10, &r40] {
            let v = r.value_rational().unwrap();
            assert!((v - &exact_lo).abs() <= r.err_rational().unwrap() + parse_rational("1e-38").unwrap());
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let spec = QuadTarget::for_digits(10);
        let a = pr(&int(1), spec.bits);
        let b = pr(&int(0), spec.bits);
        assert!(tanh_sinh(&spec, &a, &b, |p| Ok(p.x.clone())).is_err());
    }
}
