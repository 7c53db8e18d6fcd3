//! Exact arithmetic over a real-embedded algebraic number field.
//!
//! A field is described by a monic squarefree integer polynomial together
//! with a rational interval isolating one of its real roots. Elements are
//! rational vectors in the power basis of that root. All arithmetic is
//! exact; zero tests are symbolic (a reduced coefficient vector is zero if
//! and only if the element is zero) and order comparisons are decided by
//! refining the isolating interval until the sign of an exact rational
//! interval evaluation resolves.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, RwLock};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotMonic,
    DegreeZero,
    NotSquarefree,
    EndpointIsRoot,
    RootCountInInterval(usize),
    ReducibleQuadratic,
    MismatchedFields,
    DivisionByZero,
    BadElementLength { expected: usize, got: usize },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotMonic => write!(f, "minimal polynomial must be monic"),
            FieldError::DegreeZero => write!(f, "minimal polynomial must have degree >= 1"),
            FieldError::NotSquarefree => write!(f, "minimal polynomial must be squarefree"),
            FieldError::EndpointIsRoot => {
                write!(f, "embedding interval endpoint is a root of the minimal polynomial")
            }
            FieldError::RootCountInInterval(n) => {
                write!(f, "embedding interval isolates {n} real roots, expected exactly 1")
            }
            FieldError::ReducibleQuadratic => {
                write!(f, "quadratic minimal polynomial is reducible over the rationals")
            }
            FieldError::MismatchedFields => write!(f, "elements belong to different fields"),
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::BadElementLength { expected, got } => {
                write!(f, "element has {got} coefficients, field has degree {expected}")
            }
        }
    }
}

impl std::error::Error for FieldError {}

/// Evaluate an integer polynomial (little-endian coefficients) at a rational point.
fn eval_int_poly(coeffs: &[BigInt], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + Rat::from_integer(c.clone());
    }
    acc
}

/// Polynomial division over Q[x]: returns (quotient, remainder).
fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let dd = poly_degree(den).expect("division by zero polynomial");
    let mut rem: Vec<Rat> = num.to_vec();
    let mut quot = vec![Rat::zero(); num.len().saturating_sub(dd)];
    loop {
        let rd = match poly_degree(&rem) {
            Some(d) if d >= dd => d,
            _ => break,
        };
        let factor = &rem[rd] / &den[dd];
        quot[rd - dd] = factor.clone();
        for i in 0..=dd {
            let t = &den[i] * &factor;
            rem[rd - dd + i] = &rem[rd - dd + i] - t;
        }
        rem[rd] = Rat::zero();
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn poly_degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn trim(p: &mut Vec<Rat>) {
    while let Some(last) = p.last() {
        if last.is_zero() && p.len() > 0 {
            p.pop();
        } else {
            break;
        }
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + ai * bj;
        }
    }
    out
}

/// Number of sign variations in a sequence, ignoring zeros.
fn sign_variations(vals: &[Rat]) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for v in vals {
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if let Some(p) = last {
            if p != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// Sturm sequence of a rational polynomial.
fn sturm_sequence(p: &[Rat]) -> Vec<Vec<Rat>> {
    let mut seq = Vec::new();
    let mut s0 = p.to_vec();
    trim(&mut s0);
    if s0.is_empty() {
        return seq;
    }
    let mut s1: Vec<Rat> = s0
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut s1);
    seq.push(s0);
    if s1.is_empty() {
        return seq;
    }
    seq.push(s1);
    loop {
        let n = seq.len();
        let (_, mut r) = poly_divmod(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        for c in r.iter_mut() {
            *c = -c.clone();
        }
        seq.push(r);
    }
    seq
}

fn eval_rat_poly(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Count real roots of `p` in the half-open interval (a, b] via Sturm's theorem.
fn sturm_count(seq: &[Vec<Rat>], a: &Rat, b: &Rat) -> usize {
    let va: Vec<Rat> = seq.iter().map(|s| eval_rat_poly(s, a)).collect();
    let vb: Vec<Rat> = seq.iter().map(|s| eval_rat_poly(s, b)).collect();
    sign_variations(&va) - sign_variations(&vb)
}

/// A real-embedded algebraic number field Q(alpha).
///
/// `min_poly` is monic with integer coefficients (little-endian) and
/// squarefree; `alpha` is the unique root in the embedding interval. The
/// isolating interval shrinks monotonically as comparisons demand more
/// precision; refinement is cached behind a lock so shared specs stay
/// cheap to read.
pub struct FieldSpec {
    min_poly: Vec<BigInt>,
    degree: usize,
    initial_embedding: (Rat, Rat),
    refined: RwLock<(Rat, Rat)>,
    // sign of min_poly at the left endpoint; constant under refinement
    sign_lo: i32,
    // degree-1 fields carry the exact rational root
    rational_root: Option<Rat>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("min_poly", &self.min_poly)
            .field("embedding", &self.initial_embedding)
            .finish()
    }
}

impl FieldSpec {
    /// The rationals, presented with minimal polynomial x.
    pub fn rationals() -> Arc<FieldSpec> {
        FieldSpec::new(vec![BigInt::zero(), BigInt::one()], (rat_int(-1), rat_int(1)))
            .expect("rational field spec is valid")
    }

    /// Q(sqrt(n)) for a positive non-square integer, embedded at the positive root.
    pub fn quadratic_sqrt(n: i64) -> Arc<FieldSpec> {
        let hi = (0..).map(|k| rat_int(k)).find(|k| k * k > rat_int(n)).unwrap();
        FieldSpec::new(
            vec![BigInt::from(-n), BigInt::zero(), BigInt::one()],
            (Rat::zero(), hi),
        )
        .expect("sqrt field spec is valid")
    }

    pub fn new(min_poly: Vec<BigInt>, embedding: (Rat, Rat)) -> Result<Arc<FieldSpec>, FieldError> {
        let mut p = min_poly;
        while p.last().map_or(false, |c| c.is_zero()) {
            p.pop();
        }
        let degree = match p.len() {
            0 | 1 => return Err(FieldError::DegreeZero),
            n => n - 1,
        };
        if !p[degree].is_one() {
            return Err(FieldError::NotMonic);
        }
        let (lo, hi) = embedding;
        if lo >= hi {
            return Err(FieldError::RootCountInInterval(0));
        }

        if degree == 1 {
            // x + c0 with root -c0
            let root = -Rat::from_integer(p[0].clone());
            if root <= lo || root >= hi {
                return Err(FieldError::RootCountInInterval(0));
            }
            return Ok(Arc::new(FieldSpec {
                min_poly: p,
                degree,
                initial_embedding: (lo.clone(), hi.clone()),
                refined: RwLock::new((root.clone(), root.clone())),
                sign_lo: -1,
                rational_root: Some(root),
            }));
        }

        let prat: Vec<Rat> = p.iter().map(|c| Rat::from_integer(c.clone())).collect();
        // squarefree <=> gcd(p, p') constant <=> Sturm sequence ends at a constant
        let seq = sturm_sequence(&prat);
        match seq.last().and_then(|s| poly_degree(s)) {
            Some(0) => {}
            _ => return Err(FieldError::NotSquarefree),
        }
        let flo = eval_int_poly(&p, &lo);
        let fhi = eval_int_poly(&p, &hi);
        if flo.is_zero() || fhi.is_zero() {
            return Err(FieldError::EndpointIsRoot);
        }
        let count = sturm_count(&seq, &lo, &hi);
        if count != 1 {
            return Err(FieldError::RootCountInInterval(count));
        }
        if flo.is_positive() == fhi.is_positive() {
            // single root without a sign change would be a multiple root
            return Err(FieldError::NotSquarefree);
        }
        if degree == 2 {
            // monic integer quadratic is reducible iff the discriminant is a perfect square
            let b = &p[1];
            let c = &p[0];
            let disc = b * b - BigInt::from(4) * c;
            if !disc.is_negative() {
                let s = disc.sqrt();
                if &s * &s == disc {
                    return Err(FieldError::ReducibleQuadratic);
                }
            }
        }
        let sign_lo = if flo.is_positive() { 1 } else { -1 };
        Ok(Arc::new(FieldSpec {
            min_poly: p,
            degree,
            initial_embedding: (lo.clone(), hi.clone()),
            refined: RwLock::new((lo, hi)),
            sign_lo,
            rational_root: None,
        }))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn embedding(&self) -> (Rat, Rat) {
        self.initial_embedding.clone()
    }

    /// Structural compatibility: same minimal polynomial and overlapping
    /// isolating intervals select the same root of a squarefree polynomial.
    pub fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
        if Arc::ptr_eq(a, b) {
            return true;
        }
        if a.min_poly != b.min_poly {
            return false;
        }
        let ia = a.refined.read().unwrap().clone();
        let ib = b.refined.read().unwrap().clone();
        ia.0 < ib.1 && ib.0 < ia.1 || ia.0 == ib.0
    }

    /// Current isolating interval, refined to width at most the target.
    fn interval_refined_to(&self, target_width: &Rat) -> (Rat, Rat) {
        if let Some(r) = &self.rational_root {
            return (r.clone(), r.clone());
        }
        {
            let read = self.refined.read().unwrap();
            if &(&read.1 - &read.0) <= target_width {
                return read.clone();
            }
        }
        let mut guard = self.refined.write().unwrap();
        let (mut lo, mut hi) = guard.clone();
        let two = rat_int(2);
        while &(&hi - &lo) > target_width {
            let mid = (&lo + &hi) / &two;
            let fmid = eval_int_poly(&self.min_poly, &mid);
            if fmid.is_zero() {
                // the interval isolates exactly one root, so alpha == mid
                lo = mid.clone();
                hi = mid;
                break;
            }
            let pos = fmid.is_positive();
            if (self.sign_lo > 0) == pos {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        *guard = (lo.clone(), hi.clone());
        (lo, hi)
    }

    fn current_interval(&self) -> (Rat, Rat) {
        self.refined.read().unwrap().clone()
    }
}

/// An element of a real-embedded algebraic number field, as power-basis
/// coordinates over the rationals. Immutable once built.
#[derive(Clone)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    coeffs: Vec<Rat>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub fn new(spec: Arc<FieldSpec>, mut coeffs: Vec<Rat>) -> Result<FieldElement, FieldError> {
        if coeffs.len() > spec.degree {
            return Err(FieldError::BadElementLength {
                expected: spec.degree,
                got: coeffs.len(),
            });
        }
        coeffs.resize(spec.degree, Rat::zero());
        Ok(FieldElement { spec, coeffs })
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> FieldElement {
        FieldElement {
            spec: spec.clone(),
            coeffs: vec![Rat::zero(); spec.degree],
        }
    }

    pub fn one(spec: &Arc<FieldSpec>) -> FieldElement {
        FieldElement::from_rat(spec, Rat::one())
    }

    pub fn from_rat(spec: &Arc<FieldSpec>, q: Rat) -> FieldElement {
        let mut coeffs = vec![Rat::zero(); spec.degree];
        coeffs[0] = q;
        FieldElement {
            spec: spec.clone(),
            coeffs,
        }
    }

    pub fn from_int(spec: &Arc<FieldSpec>, n: i64) -> FieldElement {
        FieldElement::from_rat(spec, rat_int(n))
    }

    /// The generator alpha itself (zero for degree-1 fields, where alpha is rational).
    pub fn generator(spec: &Arc<FieldSpec>) -> FieldElement {
        if spec.degree == 1 {
            FieldElement::from_rat(spec, spec.rational_root.clone().unwrap())
        } else {
            let mut coeffs = vec![Rat::zero(); spec.degree];
            coeffs[1] = Rat::one();
            FieldElement {
                spec: spec.clone(),
                coeffs,
            }
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        if self.is_rational() {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_same(&self, other: &FieldElement) -> Result<(), FieldError> {
        if FieldSpec::same_field(&self.spec, &other.spec) {
            Ok(())
        } else {
            Err(FieldError::MismatchedFields)
        }
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.check_same(other).expect("field mismatch in add");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        FieldElement {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.check_same(other).expect("field mismatch in sub");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        FieldElement {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.check_same(other).expect("field mismatch in mul");
        let d = self.spec.degree;
        if d == 1 {
            return FieldElement {
                spec: self.spec.clone(),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let prod = poly_mul(&self.coeffs, &other.coeffs);
        FieldElement {
            spec: self.spec.clone(),
            coeffs: self.reduce(prod),
        }
    }

    pub fn mul_rat(&self, q: &Rat) -> FieldElement {
        FieldElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Reduce a rational polynomial modulo the minimal polynomial to length `degree`.
    fn reduce(&self, mut poly: Vec<Rat>) -> Vec<Rat> {
        let d = self.spec.degree;
        let p = &self.spec.min_poly;
        while poly.len() > d {
            let k = poly.len() - 1;
            let lead = poly.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            // x^k = x^(k-d) * (x^d - p(x) + p(x)) == -x^(k-d) * (p - x^d) mod p
            for i in 0..d {
                let t = Rat::from_integer(p[i].clone()) * &lead;
                poly[k - d + i] = &poly[k - d + i] - t;
            }
        }
        poly.resize(d, Rat::zero());
        poly
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.spec.degree == 1 {
            return Ok(FieldElement {
                spec: self.spec.clone(),
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        if let Some(q) = self.as_rational() {
            return Ok(FieldElement::from_rat(&self.spec, q.recip()));
        }
        // extended Euclid in Q[x]: u*g + v*p = gcd = const (p irreducible)
        let p: Vec<Rat> = self
            .spec
            .min_poly
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let mut g = self.coeffs.clone();
        trim(&mut g);
        // invariant: r_i == u_i * g (mod min_poly)
        let (mut r0, mut r1) = (p, g);
        let (mut u0, mut u1): (Vec<Rat>, Vec<Rat>) = (Vec::new(), vec![Rat::one()]);
        while poly_degree(&r1).map_or(false, |d| d >= 1) {
            let (q, r2) = poly_divmod(&r0, &r1);
            let qu1 = poly_mul(&q, &u1);
            let mut u2: Vec<Rat> = Vec::with_capacity(u0.len().max(qu1.len()));
            for i in 0..u0.len().max(qu1.len()) {
                let a = u0.get(i).cloned().unwrap_or_else(Rat::zero);
                let b = qu1.get(i).cloned().unwrap_or_else(Rat::zero);
                u2.push(a - b);
            }
            trim(&mut u2);
            r0 = r1;
            r1 = r2;
            u0 = u1;
            u1 = u2;
        }
        // here r1 is a nonzero constant c with u1 * g == c (mod p)
        let c = match r1.first() {
            Some(c) if !c.is_zero() => c.clone(),
            _ => {
                // g shares a factor with p: only possible if p was reducible
                return Err(FieldError::NotSquarefree);
            }
        };
        let inv_c = c.recip();
        let coeffs: Vec<Rat> = u1.into_iter().map(|x| x * &inv_c).collect();
        let mut out = FieldElement {
            spec: self.spec.clone(),
            coeffs: Vec::new(),
        };
        out.coeffs = out.reduce(coeffs);
        debug_assert!(out.mul(self).is_one());
        Ok(out)
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn square(&self) -> FieldElement {
        self.mul(self)
    }

    /// Exact sign of the element under the chosen real embedding.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return if q.is_positive() { 1 } else { -1 };
        }
        if let Some(root) = &self.spec.rational_root {
            let v = eval_rat_poly(&self.coeffs, root);
            return match v.cmp(&Rat::zero()) {
                Ordering::Greater => 1,
                Ordering::Less => -1,
                Ordering::Equal => 0,
            };
        }
        let (mut lo, mut hi) = self.spec.current_interval();
        loop {
            let (vlo, vhi) = interval_eval(&self.coeffs, &lo, &hi);
            if vlo.is_positive() {
                return 1;
            }
            if vhi.is_negative() {
                return -1;
            }
            let width = &hi - &lo;
            let target = width / rat_int(4);
            let refined = self.spec.interval_refined_to(&target);
            lo = refined.0;
            hi = refined.1;
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn compare(&self, other: &FieldElement) -> Ordering {
        match self.sub(other).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn abs(&self) -> FieldElement {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// A rational interval containing the element, of width at most
    /// `2^(1-precision_bits) * max(1, |x|)`.
    pub fn to_interval(&self, precision_bits: u32) -> (Rat, Rat) {
        assert!(precision_bits >= 16, "precision_bits must be at least 16");
        if let Some(q) = self.as_rational() {
            return (q.clone(), q.clone());
        }
        if let Some(root) = &self.spec.rational_root {
            let v = eval_rat_poly(&self.coeffs, root);
            return (v.clone(), v);
        }
        let eps = Rat::new(BigInt::one(), BigInt::from(2).pow(precision_bits - 1));
        let (mut lo, mut hi) = self.spec.current_interval();
        loop {
            let (vlo, vhi) = interval_eval(&self.coeffs, &lo, &hi);
            let mag = if vlo.abs() > vhi.abs() { vlo.abs() } else { vhi.abs() };
            let budget = if mag > Rat::one() { &eps * mag } else { eps.clone() };
            if &vhi - &vlo <= budget {
                return (vlo, vhi);
            }
            let target = (&hi - &lo) / rat_int(4);
            let refined = self.spec.interval_refined_to(&target);
            lo = refined.0;
            hi = refined.1;
        }
    }

    /// Nearest-ish f64 approximation, for rendering and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.to_interval(64);
        let mid = (lo + hi) / rat_int(2);
        rat_to_f64(&mid)
    }

    /// Exact truth of `self <= q` for a rational bound.
    pub fn le_rat(&self, q: &Rat) -> bool {
        self.compare(&FieldElement::from_rat(&self.spec, q.clone())) != Ordering::Greater
    }
}

pub fn rat_to_f64(q: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // fall back through a scaled integer division when numer/denom overflow f64
        let n = q.numer();
        let d = q.denom();
        let scale = BigInt::from(2).pow(64);
        let scaled = (n * &scale) / d;
        scaled.to_f64().unwrap_or(f64::NAN) / 1.8446744073709552e19
    })
}

/// Exact interval evaluation of a rational polynomial over [lo, hi] by Horner
/// with interval arithmetic.
fn interval_eval(coeffs: &[Rat], lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut alo = Rat::zero();
    let mut ahi = Rat::zero();
    for c in coeffs.iter().rev() {
        // multiply [alo, ahi] by [lo, hi]
        let candidates = [&alo * lo, &alo * hi, &ahi * lo, &ahi * hi];
        let mut mlo = candidates[0].clone();
        let mut mhi = candidates[0].clone();
        for c2 in &candidates[1..] {
            if c2 < &mlo {
                mlo = c2.clone();
            }
            if c2 > &mhi {
                mhi = c2.clone();
            }
        }
        alo = mlo + c;
        ahi = mhi + c;
    }
    (alo, ahi)
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        FieldSpec::same_field(&self.spec, &other.spec) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

/// Deterministic structural ordering on coefficient vectors (not the field order).
pub fn lex_cmp(a: &FieldElement, b: &FieldElement) -> Ordering {
    a.coeffs().cmp(b.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elements_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<FieldElement>();
        assert_send_sync::<FieldSpec>();
        // comparisons from many threads refine one shared spec safely
        let f = q_sqrt3();
        let x = FieldElement::generator(&f);
        std::thread::scope(|scope| {
            for k in 0..8 {
                let x = x.clone();
                scope.spawn(move || {
                    let bound = FieldElement::from_rat(x.spec(), rat(17320 + k, 10000));
                    let _ = x.compare(&bound);
                    let _ = x.to_interval(128);
                });
            }
        });
    }

    fn q_sqrt3() -> Arc<FieldSpec> {
        FieldSpec::new(
            vec![BigInt::from(-3), BigInt::zero(), BigInt::one()],
            (rat(17, 10), rat(9, 5)),
        )
        .unwrap()
    }

    fn el(spec: &Arc<FieldSpec>, a: i64, b: i64) -> FieldElement {
        FieldElement::new(spec.clone(), vec![rat_int(a), rat_int(b)]).unwrap()
    }

    #[test]
    fn defining_relation() {
        let f = q_sqrt3();
        let s = el(&f, 0, 1);
        assert_eq!(s.mul(&s), el(&f, 3, 0));
    }

    #[test]
    fn conjugate_sum() {
        let f = q_sqrt3();
        let a = el(&f, 1, 1);
        let b = el(&f, 1, -1);
        assert_eq!(a.add(&b), el(&f, 2, 0));
    }

    #[test]
    fn conjugate_product_reduces() {
        // (2+sqrt3)(2-sqrt3) = 4 - 3 = 1, expanded by hand
        let f = q_sqrt3();
        let a = el(&f, 2, 1);
        let b = el(&f, 2, -1);
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn compare_against_rational_bounds() {
        let f = q_sqrt3();
        // 1 + sqrt3 > 27/10 since sqrt3 = 1.7320508...
        let x = el(&f, 1, 1);
        let bound = FieldElement::from_rat(&f, rat(27, 10));
        assert_eq!(x.compare(&bound), Ordering::Greater);
        assert_eq!(x.compare(&x), Ordering::Equal);
        // sqrt3 < 7/4 since 3 < 49/16
        let s = el(&f, 0, 1);
        assert_eq!(s.compare(&FieldElement::from_rat(&f, rat(7, 4))), Ordering::Less);
    }

    #[test]
    fn interval_contains_value_and_shrinks() {
        let f = q_sqrt3();
        let three = el(&f, 3, 0);
        assert_eq!(three.to_interval(53), (rat_int(3), rat_int(3)));

        let s = el(&f, 0, 1);
        let (lo, hi) = s.to_interval(53);
        let approx = Rat::new(BigInt::from(17320508075688772i64), BigInt::from(10i64).pow(16));
        assert!(lo <= approx && approx <= hi);
        let (lo2, hi2) = s.to_interval(120);
        assert!(hi2.clone() - lo2.clone() <= hi.clone() - lo.clone());
        // higher-precision interval nests inside the lower-precision one
        assert!(lo <= lo2 && hi2 <= hi);
    }

    #[test]
    fn division_and_inverse() {
        let f = q_sqrt3();
        let a = el(&f, 5, 2); // 5 + 2 sqrt3
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
        assert!(FieldElement::zero(&f).inv().is_err());
    }

    #[test]
    fn rational_field_arithmetic() {
        let q = FieldSpec::rationals();
        let a = FieldElement::from_rat(&q, rat(3, 4));
        let b = FieldElement::from_rat(&q, rat(1, 4));
        assert_eq!(a.add(&b), FieldElement::one(&q));
        assert_eq!(a.div(&b).unwrap(), FieldElement::from_rat(&q, rat_int(3)));
        assert_eq!(a.sign(), 1);
        assert_eq!(b.sub(&a).sign(), -1);
    }

    #[test]
    fn spec_validation_rejects_bad_input() {
        // not squarefree: (x-1)^2
        assert!(matches!(
            FieldSpec::new(
                vec![BigInt::one(), BigInt::from(-2), BigInt::one()],
                (rat_int(0), rat_int(2))
            ),
            Err(FieldError::NotSquarefree) | Err(FieldError::ReducibleQuadratic)
        ));
        // reducible quadratic: x^2 - 4
        assert!(matches!(
            FieldSpec::new(
                vec![BigInt::from(-4), BigInt::zero(), BigInt::one()],
                (rat_int(1), rat_int(3))
            ),
            Err(FieldError::ReducibleQuadratic)
        ));
        // interval with no root
        assert!(FieldSpec::new(
            vec![BigInt::from(-3), BigInt::zero(), BigInt::one()],
            (rat_int(2), rat_int(3))
        )
        .is_err());
        // interval with two roots
        assert!(FieldSpec::new(
            vec![BigInt::from(-3), BigInt::zero(), BigInt::one()],
            (rat_int(-2), rat_int(2))
        )
        .is_err());
    }

    #[test]
    fn golden_ratio_field() {
        // x^2 - x - 1, positive root (1+sqrt5)/2
        let f = FieldSpec::new(
            vec![BigInt::from(-1), BigInt::from(-1), BigInt::one()],
            (rat_int(1), rat_int(2)),
        )
        .unwrap();
        let phi = FieldElement::generator(&f);
        // phi^2 = phi + 1
        assert_eq!(phi.square(), phi.add(&FieldElement::one(&f)));
        assert!(phi.compare(&FieldElement::from_rat(&f, rat(161, 100))) == Ordering::Greater);
        assert!(phi.compare(&FieldElement::from_rat(&f, rat(162, 100))) == Ordering::Less);
    }

    #[test]
    fn cubic_field_stretch() {
        // x^3 - 2, real root 2^(1/3)
        let f = FieldSpec::new(
            vec![BigInt::from(-2), BigInt::zero(), BigInt::zero(), BigInt::one()],
            (rat_int(1), rat_int(2)),
        )
        .unwrap();
        let c = FieldElement::generator(&f);
        assert_eq!(c.mul(&c).mul(&c), FieldElement::from_int(&f, 2));
        let inv = c.inv().unwrap();
        assert!(c.mul(&inv).is_one());
        // 2^(1/3) ~ 1.2599
        assert!(c.compare(&FieldElement::from_rat(&f, rat(126, 100))) == Ordering::Less);
        assert!(c.compare(&FieldElement::from_rat(&f, rat(125, 100))) == Ordering::Greater);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_element() -> impl Strategy<Value = FieldElement> {
        (arb_rat(), arb_rat()).prop_map(|(a, b)| {
            let f = FieldSpec::quadratic_sqrt(3);
            FieldElement::new(f, vec![a, b]).unwrap()
        })
    }

    proptest! {
        #[test]
        fn field_axioms_hold_exactly(x in arb_element(), y in arb_element(), z in arb_element()) {
            prop_assert_eq!(x.add(&y), y.add(&x));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            if !y.is_zero() {
                prop_assert_eq!(x.div(&y).unwrap().mul(&y), x.clone());
            }
        }

        #[test]
        fn compare_agrees_with_disjoint_intervals(x in arb_element(), y in arb_element()) {
            if x != y {
                // refine until the enclosing intervals separate
                let mut bits = 32u32;
                loop {
                    let (xlo, xhi) = x.to_interval(bits);
                    let (ylo, yhi) = y.to_interval(bits);
                    if xhi < ylo {
                        prop_assert_eq!(x.compare(&y), Ordering::Less);
                        break;
                    }
                    if yhi < xlo {
                        prop_assert_eq!(x.compare(&y), Ordering::Greater);
                        break;
                    }
                    bits *= 2;
                    prop_assert!(bits <= 4096, "intervals failed to separate");
                }
            } else {
                prop_assert_eq!(x.compare(&y), Ordering::Equal);
            }
        }

        #[test]
        fn interval_contains_finer_interval(x in arb_element()) {
            let (lo, hi) = x.to_interval(24);
            let (flo, fhi) = x.to_interval(96);
            prop_assert!(lo <= flo && fhi <= hi);
        }
    }
}
