//! Exact arithmetic on quadratic surds a + b*sqrt(r) over the base field.
//!
//! Ideal endpoints of geodesics are numbers of this shape (feet of
//! semicircles centered on the real axis). Signs and comparisons reduce
//! to field sign tests by isolating one radical at a time and squaring.

use crate::exactnum::FieldElement;
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone)]
pub struct Surd {
    /// rational part
    pub a: FieldElement,
    /// radical coefficient
    pub b: FieldElement,
    /// radicand, nonnegative
    pub r: FieldElement,
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} sqrt({})", self.a, self.b, self.r)
    }
}

impl Surd {
    pub fn rational(a: FieldElement) -> Surd {
        let zero = FieldElement::zero(a.spec());
        Surd {
            b: zero.clone(),
            r: zero,
            a,
        }
    }

    pub fn new(a: FieldElement, b: FieldElement, r: FieldElement) -> Surd {
        debug_assert!(r.sign() >= 0, "radicand must be nonnegative");
        if r.is_zero() || b.is_zero() {
            Surd::rational(a)
        } else {
            Surd { a, b, r }
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign of a + b sqrt(r).
    pub fn sign(&self) -> i32 {
        sign_a_plus_b_sqrt(&self.a, &self.b, &self.r)
    }

    pub fn neg(&self) -> Surd {
        Surd {
            a: self.a.neg(),
            b: self.b.neg(),
            r: self.r.clone(),
        }
    }

    pub fn add_field(&self, x: &FieldElement) -> Surd {
        Surd {
            a: self.a.add(x),
            b: self.b.clone(),
            r: self.r.clone(),
        }
    }

    /// Compare two surds exactly. The radicands may differ.
    pub fn cmp_surd(&self, other: &Surd) -> Ordering {
        // sign of (a1 - a2) + b1 sqrt(r1) - b2 sqrt(r2)
        let d = self.a.sub(&other.a);
        let s = sign_two_radicals(&d, &self.b, &self.r, &other.b.neg(), &other.r);
        match s {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn cmp_field(&self, x: &FieldElement) -> Ordering {
        match sign_a_plus_b_sqrt(&self.a.sub(x), &self.b, &self.r) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// Evaluate sign of the quadratic q2 x^2 + q1 x + q0 at this surd.
    pub fn quadratic_sign(&self, q2: &FieldElement, q1: &FieldElement, q0: &FieldElement) -> i32 {
        // x = a + b sqrt r: x^2 = a^2 + b^2 r + 2ab sqrt r
        let a2 = self.a.square().add(&self.b.square().mul(&self.r));
        let rat = q2.mul(&a2).add(&q1.mul(&self.a)).add(q0);
        let rad = q2
            .mul(&self.a.mul(&self.b).mul_rat(&crate::exactnum::rat_int(2)))
            .add(&q1.mul(&self.b));
        sign_a_plus_b_sqrt(&rat, &rad, &self.r)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * self.r.to_f64().max(0.0).sqrt()
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_surd(other) == Ordering::Equal
    }
}

impl Eq for Surd {}

/// sign(a + b sqrt(r)) with r >= 0.
pub fn sign_a_plus_b_sqrt(a: &FieldElement, b: &FieldElement, r: &FieldElement) -> i32 {
    let sb = if r.is_zero() { 0 } else { b.sign() };
    let sa = a.sign();
    if sb == 0 {
        return sa;
    }
    if sa == 0 {
        return sb;
    }
    if sa == sb {
        return sa;
    }
    // opposite signs: compare a^2 with b^2 r
    let cmp = a.square().compare(&b.square().mul(r));
    match cmp {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// sign(a + b sqrt(r) + c sqrt(s)) with r, s >= 0.
fn sign_two_radicals(
    a: &FieldElement,
    b: &FieldElement,
    r: &FieldElement,
    c: &FieldElement,
    s: &FieldElement,
) -> i32 {
    let sc = if s.is_zero() { 0 } else { c.sign() };
    if sc == 0 {
        return sign_a_plus_b_sqrt(a, b, r);
    }
    let s1 = sign_a_plus_b_sqrt(a, b, r);
    if s1 == 0 {
        return sc;
    }
    if s1 == sc {
        return s1;
    }
    // compare (a + b sqrt r)^2 with c^2 s: the former expands to
    // (a^2 + b^2 r) + 2ab sqrt r
    let lhs_rat = a.square().add(&b.square().mul(r)).sub(&c.square().mul(s));
    let lhs_rad = a.mul(b).mul_rat(&crate::exactnum::rat_int(2));
    let cmp = sign_a_plus_b_sqrt(&lhs_rat, &lhs_rad, r);
    match cmp {
        1 => s1,
        -1 => sc,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int, FieldSpec};

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(&FieldSpec::rationals(), n)
    }

    fn feq(n: i64, d: i64) -> FieldElement {
        FieldElement::from_rat(&FieldSpec::rationals(), rat(n, d))
    }

    #[test]
    fn single_radical_signs() {
        // 2 - sqrt(3) > 0, 1 - sqrt(2) < 0, 2 - sqrt(4) == 0
        assert_eq!(sign_a_plus_b_sqrt(&fe(2), &fe(-1), &fe(3)), 1);
        assert_eq!(sign_a_plus_b_sqrt(&fe(1), &fe(-1), &fe(2)), -1);
        assert_eq!(sign_a_plus_b_sqrt(&fe(2), &fe(-1), &fe(4)), 0);
        assert_eq!(sign_a_plus_b_sqrt(&fe(0), &fe(3), &fe(2)), 1);
        assert_eq!(sign_a_plus_b_sqrt(&fe(-5), &fe(2), &fe(6)), -1);
    }

    #[test]
    fn surd_comparisons() {
        // sqrt(2) + sqrt(3) vs sqrt(10): 5 + 2 sqrt 6 vs 10 -> less
        let lhs = Surd::new(fe(0), fe(1), fe(2));
        let rhs = Surd::new(fe(0), fe(1), fe(3));
        assert_eq!(lhs.cmp_surd(&rhs), Ordering::Less);
        let s10 = Surd::new(fe(0), fe(1), fe(10));
        // sqrt 3 < sqrt 10
        assert_eq!(rhs.cmp_surd(&s10), Ordering::Less);
        // 1 + sqrt 2 vs sqrt 6: (1+sqrt2)^2 = 3 + 2 sqrt 2 ~ 5.83 < 6
        let a = Surd::new(fe(1), fe(1), fe(2));
        let b = Surd::new(fe(0), fe(1), fe(6));
        assert_eq!(a.cmp_surd(&b), Ordering::Less);
        // equality with different presentations: 2 + 0 sqrt 7 == 2
        let two = Surd::new(fe(2), fe(0), fe(7));
        assert_eq!(two.cmp_field(&fe(2)), Ordering::Equal);
        // 1/2 + (1/2) sqrt 5 (golden ratio) > 8/5
        let phi = Surd::new(feq(1, 2), feq(1, 2), fe(5));
        assert_eq!(phi.cmp_field(&feq(8, 5)), Ordering::Greater);
        assert_eq!(phi.cmp_field(&feq(13, 8)), Ordering::Less);
    }

    #[test]
    fn quadratic_sign_at_surd() {
        // x = 1 + sqrt 2 is a root of x^2 - 2x - 1
        let x = Surd::new(fe(1), fe(1), fe(2));
        assert_eq!(x.quadratic_sign(&fe(1), &fe(-2), &fe(-1)), 0);
        assert_eq!(x.quadratic_sign(&fe(1), &fe(0), &fe(-4)), 1); // x^2 > 4
        assert_eq!(x.quadratic_sign(&fe(1), &fe(0), &fe(-6)), -1); // x^2 < 6
    }
}
