//! Certified interval arithmetic on arbitrary-precision floats.
//!
//! Intervals are pairs of `astro_float::BigFloat` endpoints. astro-float
//! rounds to nearest, so after every operation both endpoints are widened
//! by two units in the last place; the result is then guaranteed to
//! contain the exact value. Precision is a parameter everywhere and the
//! callers double it when a predicate fails to resolve.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cell::RefCell;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

fn bigfloat_from_bigint(n: &BigInt, p: usize) -> BigFloat {
    // build from the decimal string; exact parse then round to p bits
    let s = n.to_string();
    with_consts(|cc| BigFloat::parse(&s, astro_float::Radix::Dec, p.max(s.len() * 4 + 32), RM, cc))
}

/// One certified real interval [lo, hi].
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: BigFloat,
    pub hi: BigFloat,
    p: usize,
}

fn nudge(x: &BigFloat, up: bool, p: usize) -> BigFloat {
    if x.is_zero() {
        let mut tiny = BigFloat::from_f64(1.0, p);
        // 2^(-4p): far below any ulp at working precision
        tiny.set_exponent(-(4 * p as i64).min(i32::MAX as i64) as astro_float::Exponent);
        return if up { tiny } else { tiny.neg() };
    }
    let e = x.exponent().unwrap_or(0);
    let mut ulp = BigFloat::from_f64(1.0, p);
    let ulp_exp = e as i64 - p as i64 + 2; // two ulps of slack
    ulp.set_exponent(ulp_exp.clamp(astro_float::EXPONENT_MIN as i64, astro_float::EXPONENT_MAX as i64)
        as astro_float::Exponent);
    if up {
        x.add(&ulp, p, RoundingMode::FromZero)
    } else {
        x.sub(&ulp, p, RoundingMode::FromZero)
    }
}

impl Interval {
    pub fn precision(&self) -> usize {
        self.p
    }

    fn widened(lo: BigFloat, hi: BigFloat, p: usize) -> Interval {
        let lo = nudge(&lo, false, p);
        let hi = nudge(&hi, true, p);
        debug_assert!(lo.cmp(&hi).map_or(true, |c| c <= 0));
        Interval { lo, hi, p }
    }

    /// Exact endpoints, no widening.
    pub fn exact(v: BigFloat, p: usize) -> Interval {
        Interval { lo: v.clone(), hi: v, p }
    }

    pub fn from_f64(v: f64, p: usize) -> Interval {
        Interval::exact(BigFloat::from_f64(v, p), p)
    }

    pub fn from_i64(v: i64, p: usize) -> Interval {
        Interval::exact(BigFloat::from_i64(v, p), p)
    }

    /// Contains the exact value of the rational.
    pub fn from_rational(q: &BigRational, p: usize) -> Interval {
        if q.is_zero() {
            return Interval::exact(BigFloat::from_i8(0, p), p);
        }
        let n = bigfloat_from_bigint(q.numer(), p + 8);
        let d = bigfloat_from_bigint(q.denom(), p + 8);
        Interval::widened(n.div(&d, p, RM), n.div(&d, p, RM), p)
    }

    /// Contains the exact value bracketed by two rationals.
    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, p: usize) -> Interval {
        let a = Interval::from_rational(lo, p);
        let b = Interval::from_rational(hi, p);
        Interval { lo: a.lo, hi: b.hi, p }
    }

    pub fn pi(p: usize) -> Interval {
        let v = with_consts(|cc| cc.pi(p, RM));
        Interval::widened(v.clone(), v, p)
    }

    pub fn two_pi(p: usize) -> Interval {
        let pi = Interval::pi(p);
        pi.add(&pi)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.p.max(o.p);
        Interval::widened(self.lo.add(&o.lo, p, RM), self.hi.add(&o.hi, p, RM), p)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.p.max(o.p);
        Interval::widened(self.lo.sub(&o.hi, p, RM), self.hi.sub(&o.lo, p, RM), p)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            p: self.p,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.p.max(o.p);
        let cands = [
            self.lo.mul(&o.lo, p, RM),
            self.lo.mul(&o.hi, p, RM),
            self.hi.mul(&o.lo, p, RM),
            self.hi.mul(&o.hi, p, RM),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp(&lo).map_or(false, |s| s < 0) {
                lo = c.clone();
            }
            if c.cmp(&hi).map_or(false, |s| s > 0) {
                hi = c.clone();
            }
        }
        Interval::widened(lo, hi, p)
    }

    /// Division; the divisor interval must exclude zero.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let p = self.p.max(o.p);
        let cands = [
            self.lo.div(&o.lo, p, RM),
            self.lo.div(&o.hi, p, RM),
            self.hi.div(&o.lo, p, RM),
            self.hi.div(&o.hi, p, RM),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp(&lo).map_or(false, |s| s < 0) {
                lo = c.clone();
            }
            if c.cmp(&hi).map_or(false, |s| s > 0) {
                hi = c.clone();
            }
        }
        Some(Interval::widened(lo, hi, p))
    }

    pub fn square(&self) -> Interval {
        let sq = self.mul(self);
        if self.contains_zero() {
            Interval {
                lo: BigFloat::from_i8(0, self.p),
                hi: sq.hi,
                p: sq.p,
            }
        } else {
            sq
        }
    }

    /// Square root; requires a nonnegative lower bound after clamping tiny
    /// negative noise (returns None when the interval is substantially negative).
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi.is_negative() {
            return None;
        }
        let lo_in = if self.lo.is_negative() {
            BigFloat::from_i8(0, self.p)
        } else {
            self.lo.clone()
        };
        let lo = lo_in.sqrt(self.p, RM);
        let hi = self.hi.sqrt(self.p, RM);
        let mut out = Interval::widened(lo, hi, self.p);
        if out.lo.is_negative() {
            out.lo = BigFloat::from_i8(0, self.p);
        }
        Some(out)
    }

    pub fn ln(&self) -> Option<Interval> {
        if !self.lo.is_positive() {
            return None;
        }
        let (lo, hi) = with_consts(|cc| {
            (self.lo.ln(self.p, RM, cc), self.hi.ln(self.p, RM, cc))
        });
        Some(Interval::widened(lo, hi, self.p))
    }

    pub fn exp(&self) -> Interval {
        let (lo, hi) = with_consts(|cc| {
            (self.lo.exp(self.p, RM, cc), self.hi.exp(self.p, RM, cc))
        });
        Interval::widened(lo, hi, self.p)
    }

    pub fn cosh(&self) -> Interval {
        // cosh is decreasing on negatives, increasing on positives
        let (clo, chi) = with_consts(|cc| {
            (self.lo.cosh(self.p, RM, cc), self.hi.cosh(self.p, RM, cc))
        });
        if !self.lo.is_negative() {
            Interval::widened(clo, chi, self.p)
        } else if !self.hi.is_positive() {
            Interval::widened(chi, clo, self.p)
        } else {
            let hi = if clo.cmp(&chi).map_or(true, |s| s >= 0) { clo } else { chi };
            Interval::widened(BigFloat::from_i8(1, self.p), hi, self.p)
        }
    }

    /// arccos, clamping endpoint noise just outside [-1, 1].
    pub fn acos(&self) -> Option<Interval> {
        let one = BigFloat::from_i8(1, self.p);
        let neg_one = BigFloat::from_i8(-1, self.p);
        if self.lo.cmp(&one).map_or(true, |s| s > 0) || self.hi.cmp(&neg_one).map_or(true, |s| s < 0)
        {
            return None;
        }
        let lo_arg = if self.lo.cmp(&neg_one).map_or(false, |s| s < 0) { neg_one.clone() } else { self.lo.clone() };
        let hi_arg = if self.hi.cmp(&one).map_or(false, |s| s > 0) { one } else { self.hi.clone() };
        // acos is decreasing
        let (a_lo, a_hi) = with_consts(|cc| {
            (hi_arg.acos(self.p, RM, cc), lo_arg.acos(self.p, RM, cc))
        });
        let mut out = Interval::widened(a_lo, a_hi, self.p);
        if out.lo.is_negative() {
            out.lo = BigFloat::from_i8(0, self.p);
        }
        Some(out)
    }

    pub fn atan(&self) -> Interval {
        let (lo, hi) = with_consts(|cc| {
            (self.lo.atan(self.p, RM, cc), self.hi.atan(self.p, RM, cc))
        });
        Interval::widened(lo, hi, self.p)
    }

    /// Angle of the point (x, y) in [0, 2*pi), as an interval. Fails (None)
    /// when the point interval straddles the origin or the positive x-axis
    /// branch cut ambiguously.
    pub fn atan2(y: &Interval, x: &Interval) -> Option<Interval> {
        let p = x.p.max(y.p);
        let pi = Interval::pi(p);
        if x.is_strictly_positive() && y.is_strictly_positive() {
            return y.div(x).map(|r| r.atan());
        }
        if x.is_strictly_negative() {
            // angle = pi + atan(y/x) in (pi/2, 3pi/2)
            return y.div(x).map(|r| pi.add(&r.atan()));
        }
        if x.is_strictly_positive() && y.is_strictly_negative() {
            let two_pi = pi.add(&pi);
            return y.div(x).map(|r| two_pi.add(&r.atan()));
        }
        if y.is_strictly_positive() {
            // x straddles zero, upper half plane: angle = pi/2 - atan(x/y)
            let half_pi = pi.mul(&Interval::from_f64(0.5, p));
            return x.div(y).map(|r| half_pi.sub(&r.atan()));
        }
        if y.is_strictly_negative() {
            let three_half_pi = pi.mul(&Interval::from_f64(1.5, p));
            return x.div(y).map(|r| three_half_pi.sub(&r.atan()));
        }
        None
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified strict comparison: Some(true) if self < o everywhere.
    pub fn lt(&self, o: &Interval) -> Option<bool> {
        if self.hi.cmp(&o.lo).map_or(false, |s| s < 0) {
            return Some(true);
        }
        if self.lo.cmp(&o.hi).map_or(false, |s| s >= 0) {
            return Some(false);
        }
        None
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval {
            lo: if self.lo.cmp(&o.lo).map_or(false, |s| s <= 0) { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi.cmp(&o.hi).map_or(false, |s| s <= 0) { self.hi.clone() } else { o.hi.clone() },
            p: self.p.max(o.p),
        }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval {
            lo: if self.lo.cmp(&o.lo).map_or(false, |s| s >= 0) { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi.cmp(&o.hi).map_or(false, |s| s >= 0) { self.hi.clone() } else { o.hi.clone() },
            p: self.p.max(o.p),
        }
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: if self.lo.cmp(&o.lo).map_or(false, |s| s <= 0) { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi.cmp(&o.hi).map_or(false, |s| s >= 0) { self.hi.clone() } else { o.hi.clone() },
            p: self.p.max(o.p),
        }
    }

    pub fn mid_f64(&self) -> f64 {
        let two = BigFloat::from_i8(2, self.p);
        let mid = self.lo.add(&self.hi, self.p, RM).div(&two, self.p, RM);
        bigfloat_to_f64(&mid)
    }

    pub fn lo_f64(&self) -> f64 {
        bigfloat_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        bigfloat_to_f64(&self.hi)
    }

    pub fn width_f64(&self) -> f64 {
        bigfloat_to_f64(&self.hi.sub(&self.lo, self.p, RM))
    }

    /// Upper endpoint as an exact rational (useful for enumeration radii).
    pub fn hi_rational(&self) -> BigRational {
        bigfloat_to_rational(&self.hi)
    }

    pub fn lo_rational(&self) -> BigRational {
        bigfloat_to_rational(&self.lo)
    }
}

pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (m, n, s, e, _) = match x.as_raw_parts() {
        Some(parts) => parts,
        None => return f64::NAN,
    };
    // take the top 64 bits of mantissa
    let words = m;
    let top = *words.last().unwrap_or(&0) as u64;
    let mut frac = top as f64;
    if words.len() > 1 {
        frac += words[words.len() - 2] as f64 / 1.8446744073709552e19;
    }
    let _ = n;
    // mantissa is interpreted as a fraction in [0.5, 1): top word carries
    // the leading bit at position 63
    let val = frac / 1.8446744073709552e19 * 2f64.powi(e);
    if s == Sign::Neg {
        -val
    } else {
        val
    }
}

fn bigfloat_to_rational(x: &BigFloat) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let (m, n, s, e, _) = x.as_raw_parts().expect("finite float");
    let mut mant = BigInt::zero();
    for w in m.iter().rev() {
        mant = (mant << 64) + BigInt::from(*w);
    }
    let _ = n;
    let bits = m.len() * 64;
    // value = mant * 2^(e - bits)
    let shift = e as i64 - bits as i64;
    let mut out = if shift >= 0 {
        BigRational::from_integer(mant << (shift as usize))
    } else {
        BigRational::new(mant, BigInt::from(1) << ((-shift) as usize))
    };
    if s == Sign::Neg {
        out = -out;
    }
    out
}

/// A rational upper bound strictly dominating the interval's upper endpoint.
pub fn rational_upper_bound(iv: &Interval) -> BigRational {
    let q = iv.hi_rational();
    // pad by 2^-16 relative so downstream closures stay strict
    let pad = q.abs() / BigRational::from_integer(BigInt::from(65536)) + BigRational::new(BigInt::from(1), BigInt::from(65536));
    q + pad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn interval_contains_truth() {
        let p = 128;
        let two = Interval::from_i64(2, p);
        let r = two.sqrt().unwrap();
        let lo = r.lo_f64();
        let hi = r.hi_f64();
        assert!(lo <= 1.4142135623730951 && 1.4142135623730951 <= hi);
        assert!(hi - lo < 1e-30);
    }

    #[test]
    fn pi_matches_f64() {
        let pi = Interval::pi(96);
        assert!(pi.lo_f64() <= std::f64::consts::PI && std::f64::consts::PI <= pi.hi_f64());
    }

    #[test]
    fn rational_roundtrip() {
        let p = 96;
        let q = rat(355, 113);
        let iv = Interval::from_rational(&q, p);
        let back = iv.hi_rational();
        let err = (back - q.clone()).abs();
        assert!(err < rat(1, 1_000_000_000));
        assert!(iv.lo_rational() <= q);
    }

    #[test]
    fn acos_and_atan2_quadrants() {
        let p = 96;
        let half = Interval::from_f64(0.5, p);
        let a = half.acos().unwrap();
        let expect = 1.0471975511965979; // pi/3
        assert!(a.lo_f64() <= expect && expect <= a.hi_f64());

        let one = Interval::from_i64(1, p);
        let neg = Interval::from_i64(-1, p);
        let ang = Interval::atan2(&one, &neg).unwrap(); // (x,y) = (-1, 1): 3pi/4
        let expect = 3.0 * std::f64::consts::FRAC_PI_4;
        assert!(ang.lo_f64() <= expect && expect <= ang.hi_f64());

        let ang2 = Interval::atan2(&neg, &one).unwrap(); // (1, -1): 7pi/4
        let expect2 = 7.0 * std::f64::consts::FRAC_PI_4;
        assert!(ang2.lo_f64() <= expect2 && expect2 <= ang2.hi_f64());
    }

    #[test]
    fn widening_is_monotone_under_precision() {
        let q = rat(1, 3);
        let coarse = Interval::from_rational(&q, 64);
        let fine = Interval::from_rational(&q, 256);
        assert!(fine.width_f64() < coarse.width_f64());
    }

    #[test]
    fn cosh_on_mixed_interval() {
        let p = 96;
        let iv = Interval { lo: BigFloat::from_f64(-0.5, p), hi: BigFloat::from_f64(1.0, p), p };
        let c = iv.cosh();
        assert!(c.lo_f64() <= 1.0);
        let e = 1f64.cosh();
        assert!(c.hi_f64() >= e);
    }
}
