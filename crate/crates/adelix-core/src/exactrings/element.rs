use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{AdelixError, Result};

use super::descriptor::Ring;
use super::num::{inv_mod, p_val};

/// The three primitive operations of `arith`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
}

/// A truncated local element u·p^val with the unit known mod p^prec, as a
/// polynomial in the residue generator (length 1 over Q_p itself).
/// Zero-at-precision is encoded by an empty unit with `val` the absolute
/// p-power below which the element is indistinguishable from zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalElt {
    pub val: i64,
    pub unit: Vec<BigInt>,
    pub prec: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesElt {
    /// Nonzero coefficients by exponent.
    pub coeffs: BTreeMap<i64, Element>,
    /// Exponents >= trunc are unknown (`None` means the element is exact).
    pub trunc: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Rat(BigRational),
    Int(BigInt),
    /// PrimeField / GaloisField residue, reduced coefficient vector.
    Mod(Vec<BigInt>),
    Local(LocalElt),
    Series(SeriesElt),
    Poly(Vec<Element>),
}

/// One exact value of the ring tower. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub ring: Ring,
    pub payload: Payload,
}

// --- reduced polynomial arithmetic mod (p^k, modulus), modulus monic ---

pub(crate) fn modpoly_trim(v: &mut Vec<BigInt>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn modpoly_reduce(v: &[BigInt], pk: &BigInt, modulus: &[BigInt]) -> Vec<BigInt> {
    let deg_m = modulus.len() - 1;
    let mut r: Vec<BigInt> = v.iter().map(|c| c.mod_floor(pk)).collect();
    while r.len() > deg_m {
        modpoly_trim(&mut r);
        if r.len() <= deg_m {
            break;
        }
        let lead = r.pop().unwrap();
        let shift = r.len() - deg_m;
        for i in 0..deg_m {
            let t = (&r[shift + i] - &lead * &modulus[i]).mod_floor(pk);
            r[shift + i] = t;
        }
    }
    modpoly_trim(&mut r);
    r
}

pub(crate) fn modpoly_add(a: &[BigInt], b: &[BigInt], pk: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = BigInt::zero();
        if i < a.len() {
            s += &a[i];
        }
        if i < b.len() {
            s += &b[i];
        }
        *o = s.mod_floor(pk);
    }
    modpoly_trim(&mut out);
    out
}

pub(crate) fn modpoly_mul(a: &[BigInt], b: &[BigInt], pk: &BigInt, modulus: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    modpoly_reduce(&out, pk, modulus)
}

pub(crate) fn modpoly_scalar_mul(a: &[BigInt], c: &BigInt, pk: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = a.iter().map(|x| (x * c).mod_floor(pk)).collect();
    modpoly_trim(&mut out);
    out
}

/// Inverse in F_p[x]/(modulus) by extended Euclid, then Newton lift mod p^k.
pub(crate) fn modpoly_inv(
    a: &[BigInt],
    p: &BigInt,
    k: u32,
    modulus: &[BigInt],
) -> Result<Vec<BigInt>> {
    let a_p = modpoly_reduce(a, p, modulus);
    if a_p.is_empty() {
        return Err(AdelixError::NotAUnit("residue is zero mod p".into()));
    }
    // extended Euclid over F_p[x]
    let inv_fp = fp_poly_inv(&a_p, p, modulus)?;
    let mut inv = inv_fp;
    let mut cur: u32 = 1;
    while cur < k {
        cur = (cur * 2).min(k);
        let pk = p.pow(cur);
        // inv <- inv * (2 - a*inv)
        let ai = modpoly_mul(a, &inv, &pk, modulus);
        let mut two_minus = vec![BigInt::from(2)];
        for (i, c) in ai.iter().enumerate() {
            if i == 0 {
                two_minus[0] = (&two_minus[0] - c).mod_floor(&pk);
            } else {
                two_minus.push((-c).mod_floor(&pk));
            }
        }
        modpoly_trim(&mut two_minus);
        inv = modpoly_mul(&inv, &two_minus, &pk, modulus);
    }
    Ok(modpoly_reduce(&inv, &p.pow(k), modulus))
}

fn fp_poly_divmod(a: &[BigInt], b: &[BigInt], p: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut r: Vec<BigInt> = a.iter().map(|c| c.mod_floor(p)).collect();
    modpoly_trim(&mut r);
    let mut b = b.to_vec();
    modpoly_trim(&mut b);
    assert!(!b.is_empty());
    let bl_inv = inv_mod(b.last().unwrap(), p).expect("leading coeff invertible");
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len().saturating_sub(db)];
    while r.len() > db || (r.len() == b.len() && db == 0 && !r.is_empty()) {
        if r.len() < b.len() {
            break;
        }
        let shift = r.len() - b.len();
        let c = (r.last().unwrap() * &bl_inv).mod_floor(p);
        if q.len() <= shift {
            q.resize(shift + 1, BigInt::zero());
        }
        q[shift] = (&q[shift] + &c).mod_floor(p);
        for i in 0..b.len() {
            let t = (&r[shift + i] - &c * &b[i]).mod_floor(p);
            r[shift + i] = t;
        }
        modpoly_trim(&mut r);
        if db == 0 {
            break;
        }
    }
    modpoly_trim(&mut q);
    (q, r)
}

pub(crate) fn fp_poly_gcd(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let mut a: Vec<BigInt> = a.iter().map(|c| c.mod_floor(p)).collect();
    let mut b: Vec<BigInt> = b.iter().map(|c| c.mod_floor(p)).collect();
    modpoly_trim(&mut a);
    modpoly_trim(&mut b);
    while !b.is_empty() {
        let (_, r) = fp_poly_divmod(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        let li = inv_mod(&l, p).unwrap();
        for c in a.iter_mut() {
            *c = (&*c * &li).mod_floor(p);
        }
    }
    a
}

fn fp_poly_inv(a: &[BigInt], p: &BigInt, modulus: &[BigInt]) -> Result<Vec<BigInt>> {
    // extended Euclid: find s with s*a = 1 mod (modulus, p)
    let mut r0: Vec<BigInt> = modulus.to_vec();
    let mut r1: Vec<BigInt> = a.to_vec();
    modpoly_trim(&mut r0);
    modpoly_trim(&mut r1);
    let mut s0: Vec<BigInt> = vec![];
    let mut s1: Vec<BigInt> = vec![BigInt::one()];
    while !r1.is_empty() {
        let (q, r) = fp_poly_divmod(&r0, &r1, p);
        // s2 = s0 - q*s1 (mod p)
        let mut qs1 = vec![BigInt::zero(); q.len() + s1.len()];
        for (i, qi) in q.iter().enumerate() {
            for (j, sj) in s1.iter().enumerate() {
                qs1[i + j] += qi * sj;
            }
        }
        let n = s0.len().max(qs1.len());
        let mut s2 = vec![BigInt::zero(); n];
        for (i, e) in s2.iter_mut().enumerate() {
            let mut v = BigInt::zero();
            if i < s0.len() {
                v += &s0[i];
            }
            if i < qs1.len() {
                v -= &qs1[i];
            }
            *e = v.mod_floor(p);
        }
        modpoly_trim(&mut s2);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if r0.len() != 1 {
        return Err(AdelixError::NotAUnit(
            "element shares a factor with the modulus".into(),
        ));
    }
    let c = inv_mod(&r0[0], p).ok_or_else(|| AdelixError::NotAUnit("gcd not invertible".into()))?;
    let mut out: Vec<BigInt> = s0.iter().map(|x| (x * &c).mod_floor(p)).collect();
    modpoly_trim(&mut out);
    Ok(out)
}

/// p-adic valuation of a reduced coefficient vector: min over coefficients.
fn vec_p_val(v: &[BigInt], p: &BigInt) -> Option<(i64, Vec<BigInt>)> {
    let mut best: Option<i64> = None;
    for c in v {
        if !c.is_zero() {
            let (w, _) = p_val(c, p);
            best = Some(best.map_or(w, |b: i64| b.min(w)));
        }
    }
    let w = best?;
    let pw = p.pow(w as u32);
    let out: Vec<BigInt> = v.iter().map(|c| c / &pw).collect();
    Some((w, out))
}

impl Element {
    pub fn new(ring: Ring, payload: Payload) -> Element {
        Element { ring, payload }
    }

    // ---- constructors ----

    pub fn zero(ring: &Ring) -> Element {
        let payload = match ring {
            Ring::Rationals => Payload::Rat(BigRational::zero()),
            Ring::Integers => Payload::Int(BigInt::zero()),
            Ring::PrimeField { .. } | Ring::GaloisField { .. } => Payload::Mod(vec![]),
            Ring::PAdic { prec, .. } | Ring::PAdicExt { prec, .. } => Payload::Local(LocalElt {
                val: *prec as i64,
                unit: vec![],
                prec: *prec,
            }),
            Ring::Poly { .. } => Payload::Poly(vec![]),
            Ring::Laurent { .. } | Ring::TwoDimLocal { .. } => Payload::Series(SeriesElt {
                coeffs: BTreeMap::new(),
                trunc: None,
            }),
        };
        Element::new(ring.clone(), payload)
    }

    pub fn one(ring: &Ring) -> Element {
        Element::from_int(ring, 1)
    }

    pub fn from_int(ring: &Ring, n: i64) -> Element {
        Element::from_bigint(ring, &BigInt::from(n))
    }

    pub fn from_bigint(ring: &Ring, n: &BigInt) -> Element {
        if n.is_zero() {
            return Element::zero(ring);
        }
        let payload = match ring {
            Ring::Rationals => Payload::Rat(BigRational::from(n.clone())),
            Ring::Integers => Payload::Int(n.clone()),
            Ring::PrimeField { p } => {
                let r = n.mod_floor(p);
                if r.is_zero() {
                    Payload::Mod(vec![])
                } else {
                    Payload::Mod(vec![r])
                }
            }
            Ring::GaloisField { p, .. } => {
                let r = n.mod_floor(p);
                if r.is_zero() {
                    Payload::Mod(vec![])
                } else {
                    Payload::Mod(vec![r])
                }
            }
            Ring::PAdic { p, prec } | Ring::PAdicExt { p, prec, .. } => {
                let (v, u) = p_val(n, p);
                let pk = p.pow(*prec);
                Payload::Local(LocalElt {
                    val: v,
                    unit: vec![u.mod_floor(&pk)],
                    prec: *prec,
                })
            }
            Ring::Poly { base, .. } => {
                let c = Element::from_bigint(base, n);
                if c.is_zero() {
                    Payload::Poly(vec![])
                } else {
                    Payload::Poly(vec![c])
                }
            }
            Ring::Laurent { base, .. } => {
                let c = Element::from_bigint(base, n);
                let mut m = BTreeMap::new();
                if !c.is_zero() {
                    m.insert(0, c);
                }
                Payload::Series(SeriesElt {
                    coeffs: m,
                    trunc: None,
                })
            }
            Ring::TwoDimLocal { coeff, .. } => {
                let c = Element::from_bigint(coeff, n);
                let mut m = BTreeMap::new();
                if !c.is_zero() {
                    m.insert(0, c);
                }
                Payload::Series(SeriesElt {
                    coeffs: m,
                    trunc: None,
                })
            }
        };
        Element::new(ring.clone(), payload)
    }

    pub fn from_rational(ring: &Ring, num: &BigInt, den: &BigInt) -> Result<Element> {
        let a = Element::from_bigint(ring, num);
        let b = Element::from_bigint(ring, den);
        a.div(&b)
    }

    /// The variable t as an element of a Poly/Laurent/TwoDimLocal ring.
    pub fn variable(ring: &Ring) -> Result<Element> {
        Element::monomial(ring, 1)
    }

    /// c·t^e for composite kinds, with c = 1.
    pub fn monomial(ring: &Ring, e: i64) -> Result<Element> {
        match ring {
            Ring::Poly { base, .. } => {
                if e < 0 {
                    return Err(AdelixError::Unsupported(
                        "negative exponent in a polynomial ring".into(),
                    ));
                }
                let mut v = vec![Element::zero(base); e as usize + 1];
                v[e as usize] = Element::one(base);
                Ok(Element::new(ring.clone(), Payload::Poly(v)))
            }
            Ring::Laurent { base, .. } => {
                let mut m = BTreeMap::new();
                m.insert(e, Element::one(base));
                Ok(Element::new(
                    ring.clone(),
                    Payload::Series(SeriesElt {
                        coeffs: m,
                        trunc: None,
                    }),
                ))
            }
            Ring::TwoDimLocal { coeff, .. } => {
                let mut m = BTreeMap::new();
                m.insert(e, Element::one(coeff));
                Ok(Element::new(
                    ring.clone(),
                    Payload::Series(SeriesElt {
                        coeffs: m,
                        trunc: None,
                    }),
                ))
            }
            other => Err(AdelixError::Unsupported(format!(
                "monomial in non-series ring {other}"
            ))),
        }
    }

    /// Sparse series from (exponent, coefficient) pairs over the base ring.
    pub fn series(ring: &Ring, terms: Vec<(i64, Element)>, trunc: Option<i64>) -> Result<Element> {
        match ring {
            Ring::Laurent { base, .. } => {
                let mut m = BTreeMap::new();
                for (e, c) in terms {
                    if c.ring != **base {
                        return Err(AdelixError::DescriptorMismatch(format!(
                            "coefficient ring {} does not match base {}",
                            c.ring, base
                        )));
                    }
                    if !c.is_zero() {
                        m.insert(e, c);
                    }
                }
                if let Some(t) = trunc {
                    m.retain(|e, _| *e < t);
                }
                Ok(Element::new(
                    ring.clone(),
                    Payload::Series(SeriesElt { coeffs: m, trunc }),
                ))
            }
            Ring::TwoDimLocal { coeff, .. } => {
                let mut m = BTreeMap::new();
                for (e, c) in terms {
                    if c.ring != **coeff {
                        return Err(AdelixError::DescriptorMismatch(format!(
                            "coefficient ring {} does not match base {}",
                            c.ring, coeff
                        )));
                    }
                    if !c.is_zero() {
                        m.insert(e, c);
                    }
                }
                if let Some(t) = trunc {
                    m.retain(|e, _| *e < t);
                }
                Ok(Element::new(
                    ring.clone(),
                    Payload::Series(SeriesElt { coeffs: m, trunc }),
                ))
            }
            other => Err(AdelixError::Unsupported(format!(
                "series constructor on {other}"
            ))),
        }
    }

    /// Dense polynomial from coefficients c0 + c1 x + ...
    pub fn poly_from(ring: &Ring, coeffs: Vec<Element>) -> Result<Element> {
        match ring {
            Ring::Poly { base, .. } => {
                for c in &coeffs {
                    if c.ring != **base {
                        return Err(AdelixError::DescriptorMismatch(format!(
                            "coefficient ring {} does not match base {}",
                            c.ring, base
                        )));
                    }
                }
                let mut v = coeffs;
                while v.last().map_or(false, |c| c.is_zero()) {
                    v.pop();
                }
                Ok(Element::new(ring.clone(), Payload::Poly(v)))
            }
            other => Err(AdelixError::Unsupported(format!(
                "poly constructor on {other}"
            ))),
        }
    }

    // ---- inspectors ----

    /// Declared zero at working precision.
    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Rat(r) => r.is_zero(),
            Payload::Int(n) => n.is_zero(),
            Payload::Mod(v) => v.is_empty(),
            Payload::Local(l) => l.unit.is_empty(),
            Payload::Series(s) => s.coeffs.is_empty(),
            Payload::Poly(v) => v.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.payload {
            Payload::Rat(r) => r.is_one(),
            Payload::Int(n) => n.is_one(),
            Payload::Mod(v) => v.len() == 1 && v[0].is_one(),
            Payload::Local(l) => l.val == 0 && l.unit.len() == 1 && l.unit[0].is_one(),
            Payload::Series(s) => {
                s.coeffs.len() == 1 && s.coeffs.get(&0).map_or(false, |c| c.is_one())
            }
            Payload::Poly(v) => v.len() == 1 && v[0].is_one(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.payload {
            Payload::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_bigint(&self) -> Option<&BigInt> {
        match &self.payload {
            Payload::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_series(&self) -> Option<&SeriesElt> {
        match &self.payload {
            Payload::Series(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&[Element]> {
        match &self.payload {
            Payload::Poly(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_local(&self) -> Option<&LocalElt> {
        match &self.payload {
            Payload::Local(l) => Some(l),
            _ => None,
        }
    }

    pub fn as_mod(&self) -> Option<&[BigInt]> {
        match &self.payload {
            Payload::Mod(v) => Some(v),
            _ => None,
        }
    }

    fn check_same_ring(&self, other: &Element) -> Result<()> {
        if self.ring != other.ring {
            return Err(AdelixError::DescriptorMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    // ---- arithmetic dispatch ----

    pub fn arith(&self, other: &Element, op: ArithOp) -> Result<Element> {
        match op {
            ArithOp::Add => self.add(other),
            ArithOp::Mul => self.mul(other),
            ArithOp::Inv => self.inv(),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same_ring(other)?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Rat(a), Payload::Rat(b)) => Payload::Rat(a + b),
            (Payload::Int(a), Payload::Int(b)) => Payload::Int(a + b),
            (Payload::Mod(a), Payload::Mod(b)) => {
                let (p, modulus) = self.mod_params();
                let mut s = modpoly_add(a, b, &p);
                s = modpoly_reduce(&s, &p, &modulus);
                Payload::Mod(s)
            }
            (Payload::Local(a), Payload::Local(b)) => Payload::Local(self.local_add(a, b)),
            (Payload::Series(a), Payload::Series(b)) => Payload::Series(self.series_add(a, b)?),
            (Payload::Poly(a), Payload::Poly(b)) => {
                let n = a.len().max(b.len());
                let base = self.ring.base_ring().unwrap();
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let mut c = Element::zero(base);
                    if i < a.len() {
                        c = c.add(&a[i])?;
                    }
                    if i < b.len() {
                        c = c.add(&b[i])?;
                    }
                    out.push(c);
                }
                while out.last().map_or(false, |c| c.is_zero()) {
                    out.pop();
                }
                Payload::Poly(out)
            }
            _ => unreachable!("payload/ring invariant"),
        };
        Ok(Element::new(self.ring.clone(), payload))
    }

    pub fn neg(&self) -> Element {
        let payload = match &self.payload {
            Payload::Rat(a) => Payload::Rat(-a),
            Payload::Int(a) => Payload::Int(-a),
            Payload::Mod(a) => {
                let (p, _) = self.mod_params();
                let mut out: Vec<BigInt> = a.iter().map(|c| (-c).mod_floor(&p)).collect();
                modpoly_trim(&mut out);
                Payload::Mod(out)
            }
            Payload::Local(a) => {
                if a.unit.is_empty() {
                    Payload::Local(a.clone())
                } else {
                    let (p, _) = self.local_params();
                    let pk = p.pow(a.prec);
                    Payload::Local(LocalElt {
                        val: a.val,
                        unit: a.unit.iter().map(|c| (-c).mod_floor(&pk)).collect(),
                        prec: a.prec,
                    })
                }
            }
            Payload::Series(s) => Payload::Series(SeriesElt {
                coeffs: s.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect(),
                trunc: s.trunc,
            }),
            Payload::Poly(v) => Payload::Poly(v.iter().map(|c| c.neg()).collect()),
        };
        Element::new(self.ring.clone(), payload)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_same_ring(other)?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Rat(a), Payload::Rat(b)) => Payload::Rat(a * b),
            (Payload::Int(a), Payload::Int(b)) => Payload::Int(a * b),
            (Payload::Mod(a), Payload::Mod(b)) => {
                let (p, modulus) = self.mod_params();
                Payload::Mod(modpoly_mul(a, b, &p, &modulus))
            }
            (Payload::Local(a), Payload::Local(b)) => Payload::Local(self.local_mul(a, b)),
            (Payload::Series(a), Payload::Series(b)) => Payload::Series(self.series_mul(a, b)?),
            (Payload::Poly(a), Payload::Poly(b)) => {
                let base = self.ring.base_ring().unwrap().clone();
                if a.is_empty() || b.is_empty() {
                    Payload::Poly(vec![])
                } else {
                    let mut out = vec![Element::zero(&base); a.len() + b.len() - 1];
                    for (i, ai) in a.iter().enumerate() {
                        if ai.is_zero() {
                            continue;
                        }
                        for (j, bj) in b.iter().enumerate() {
                            let t = ai.mul(bj)?;
                            out[i + j] = out[i + j].add(&t)?;
                        }
                    }
                    while out.last().map_or(false, |c| c.is_zero()) {
                        out.pop();
                    }
                    Payload::Poly(out)
                }
            }
            _ => unreachable!("payload/ring invariant"),
        };
        Ok(Element::new(self.ring.clone(), payload))
    }

    pub fn div(&self, other: &Element) -> Result<Element> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Element> {
        if e == 0 {
            return Ok(Element::one(&self.ring));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Element::one(&self.ring);
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    pub fn inv(&self) -> Result<Element> {
        let payload = match &self.payload {
            Payload::Rat(a) => {
                if a.is_zero() {
                    return Err(AdelixError::NotAUnit("0 in Q".into()));
                }
                Payload::Rat(a.recip())
            }
            Payload::Int(a) => {
                if a.is_one() || *a == BigInt::from(-1) {
                    Payload::Int(a.clone())
                } else {
                    return Err(AdelixError::NotAUnit(format!("{a} in Z")));
                }
            }
            Payload::Mod(a) => {
                if a.is_empty() {
                    return Err(AdelixError::NotAUnit("0 in finite field".into()));
                }
                let (p, modulus) = self.mod_params();
                Payload::Mod(modpoly_inv(a, &p, 1, &modulus)?)
            }
            Payload::Local(a) => {
                if a.unit.is_empty() {
                    return Err(AdelixError::PrecisionExhausted(format!(
                        "inverting a p-adic zero known only mod p^{}",
                        a.val
                    )));
                }
                let (p, modulus) = self.local_params();
                let inv_unit = modpoly_inv(&a.unit, &p, a.prec, &modulus)?;
                Payload::Local(LocalElt {
                    val: -a.val,
                    unit: inv_unit,
                    prec: a.prec,
                })
            }
            Payload::Series(_) => return self.series_inv(),
            Payload::Poly(v) => {
                if v.len() == 1 {
                    return Ok(Element::new(
                        self.ring.clone(),
                        Payload::Poly(vec![v[0].inv()?]),
                    ));
                }
                return Err(AdelixError::NotAUnit(
                    "non-constant polynomial has no inverse in the polynomial ring".into(),
                ));
            }
        };
        Ok(Element::new(self.ring.clone(), payload))
    }

    // ---- local (p-adic) internals ----

    fn local_params(&self) -> (BigInt, Vec<BigInt>) {
        match &self.ring {
            Ring::PAdic { p, .. } => (p.clone(), vec![BigInt::zero(), BigInt::one()]),
            Ring::PAdicExt { p, modulus, .. } => (p.clone(), modulus.as_ref().clone()),
            _ => unreachable!(),
        }
    }

    fn mod_params(&self) -> (BigInt, Vec<BigInt>) {
        match &self.ring {
            Ring::PrimeField { p } => (p.clone(), vec![BigInt::zero(), BigInt::one()]),
            Ring::GaloisField { p, modulus } => (p.clone(), modulus.as_ref().clone()),
            _ => unreachable!(),
        }
    }

    fn local_normalize(&self, val: i64, raw: Vec<BigInt>, prec: u32) -> LocalElt {
        let (p, modulus) = self.local_params();
        let pk = p.pow(prec);
        let reduced = modpoly_reduce(&raw, &pk, &modulus);
        match vec_p_val(&reduced, &p) {
            None => LocalElt {
                val: val + prec as i64,
                unit: vec![],
                prec,
            },
            Some((w, unit)) => {
                let new_prec = prec - w as u32;
                let pk2 = p.pow(new_prec);
                let unit = modpoly_reduce(&unit, &pk2, &modulus);
                LocalElt {
                    val: val + w,
                    unit,
                    prec: new_prec,
                }
            }
        }
    }

    fn local_add(&self, a: &LocalElt, b: &LocalElt) -> LocalElt {
        let (p, modulus) = self.local_params();
        match (a.unit.is_empty(), b.unit.is_empty()) {
            (true, true) => LocalElt {
                val: a.val.min(b.val),
                unit: vec![],
                prec: a.prec.min(b.prec),
            },
            (true, false) => self.local_add_zero(a.val, b, &p, &modulus),
            (false, true) => self.local_add_zero(b.val, a, &p, &modulus),
            (false, false) => {
                let v = a.val.min(b.val);
                let abs = (a.val + a.prec as i64).min(b.val + b.prec as i64);
                if abs <= v {
                    return LocalElt {
                        val: abs,
                        unit: vec![],
                        prec: 0,
                    };
                }
                let k = (abs - v) as u32;
                let pk = p.pow(k);
                let sa = modpoly_scalar_mul(&a.unit, &p.pow((a.val - v) as u32), &pk);
                let sb = modpoly_scalar_mul(&b.unit, &p.pow((b.val - v) as u32), &pk);
                let s = modpoly_add(&sa, &sb, &pk);
                self.local_normalize(v, s, k)
            }
        }
    }

    /// zero known mod p^zabs plus a nonzero element.
    fn local_add_zero(&self, zabs: i64, b: &LocalElt, _p: &BigInt, _modulus: &[BigInt]) -> LocalElt {
        if b.val >= zabs {
            LocalElt {
                val: zabs,
                unit: vec![],
                prec: 0,
            }
        } else {
            let keep = ((zabs - b.val) as u32).min(b.prec);
            let (p, modulus) = self.local_params();
            let pk = p.pow(keep);
            LocalElt {
                val: b.val,
                unit: modpoly_reduce(&b.unit, &pk, &modulus),
                prec: keep,
            }
        }
    }

    fn local_mul(&self, a: &LocalElt, b: &LocalElt) -> LocalElt {
        if a.unit.is_empty() || b.unit.is_empty() {
            // p^abs1 * (u p^v) is zero mod p^(abs1+v); zero*zero mod p^(v1+v2)
            let abs = if a.unit.is_empty() && b.unit.is_empty() {
                a.val + b.val
            } else if a.unit.is_empty() {
                a.val + b.val
            } else {
                b.val + a.val
            };
            return LocalElt {
                val: abs,
                unit: vec![],
                prec: 0,
            };
        }
        let (p, modulus) = self.local_params();
        let prec = a.prec.min(b.prec);
        let pk = p.pow(prec);
        let u = modpoly_mul(&a.unit, &b.unit, &pk, &modulus);
        // product of units stays a unit, but reduce defensively
        self.local_normalize(a.val + b.val, u, prec)
    }

    // ---- series internals (shared by Laurent and TwoDimLocal) ----

    fn series_width_cap(&self) -> i64 {
        self.ring.window().map(|w| w.width()).unwrap_or(i64::MAX)
    }

    fn clip_series(&self, mut s: SeriesElt) -> SeriesElt {
        if let Some(t) = s.trunc {
            s.coeffs.retain(|e, _| *e < t);
        }
        // two-dimensional truncation: coefficients are only meaningful to
        // absolute p-precision (element valuation + working precision); the
        // bounded-below condition of F{{t}} truncates to "p-divisible tails
        // below the window are zero".
        if let Ring::TwoDimLocal { coeff, .. } = &self.ring {
            let m = coeff.local_prec().unwrap() as i64;
            let vmin = s
                .coeffs
                .values()
                .filter_map(|c| c.as_local().and_then(|l| {
                    if l.unit.is_empty() {
                        None
                    } else {
                        Some(l.val)
                    }
                }))
                .min();
            if let Some(v) = vmin {
                let abs = v + m;
                let cut = Element::new(
                    (**coeff).clone(),
                    Payload::Local(LocalElt {
                        val: abs,
                        unit: vec![],
                        prec: 0,
                    }),
                );
                let mut next = BTreeMap::new();
                for (e, c) in s.coeffs {
                    if let Ok(nc) = c.add(&cut) {
                        if !nc.is_zero() {
                            next.insert(e, nc);
                        }
                    }
                }
                s.coeffs = next;
            }
        }
        // cap the representable width from the leading exponent
        let cap = self.series_width_cap();
        if cap != i64::MAX {
            if let Some((&lead, _)) = s.coeffs.iter().next() {
                let max_t = lead.saturating_add(cap);
                let t = s.trunc.map_or(max_t, |t| t.min(max_t));
                if s.trunc.is_none() && t != i64::MAX {
                    // exact data stays exact unless it overflows the window
                    if s.coeffs.keys().next_back().map_or(false, |&hi| hi >= t) {
                        s.trunc = Some(t);
                        s.coeffs.retain(|e, _| *e < t);
                    }
                } else {
                    s.trunc = Some(t);
                    s.coeffs.retain(|e, _| *e < t);
                }
            }
        }
        s
    }

    fn series_add(&self, a: &SeriesElt, b: &SeriesElt) -> Result<SeriesElt> {
        let trunc = match (a.trunc, b.trunc) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(y)) => Some(x.min(y)),
        };
        let mut coeffs = a.coeffs.clone();
        for (e, c) in &b.coeffs {
            let cur = coeffs.remove(e);
            let s = match cur {
                Some(x) => x.add(c)?,
                None => c.clone(),
            };
            if !s.is_zero() {
                coeffs.insert(*e, s);
            }
        }
        Ok(self.clip_series(SeriesElt { coeffs, trunc }))
    }

    fn series_mul(&self, a: &SeriesElt, b: &SeriesElt) -> Result<SeriesElt> {
        let va = a.coeffs.keys().next().copied();
        let vb = b.coeffs.keys().next().copied();
        let trunc = match (a.trunc, b.trunc, va, vb) {
            (None, None, _, _) => None,
            // zero times truncated data: truncation level of the product is the
            // other side's truncation raised by this side's valuation; with no
            // terms at all we only know the product vanishes to every stored order.
            (Some(ta), None, _, Some(w)) => Some(ta + w),
            (None, Some(tb), Some(v), _) => Some(tb + v),
            (Some(ta), Some(tb), Some(v), Some(w)) => Some((ta + w).min(tb + v)),
            (Some(ta), _, _, None) => Some(ta),
            (_, Some(tb), None, _) => Some(tb),
        };
        let mut coeffs: BTreeMap<i64, Element> = BTreeMap::new();
        for (ea, ca) in &a.coeffs {
            for (eb, cb) in &b.coeffs {
                let e = ea + eb;
                if let Some(t) = trunc {
                    if e >= t {
                        continue;
                    }
                }
                let prod = ca.mul(cb)?;
                match coeffs.remove(&e) {
                    Some(cur) => {
                        let s = cur.add(&prod)?;
                        if !s.is_zero() {
                            coeffs.insert(e, s);
                        }
                    }
                    None => {
                        if !prod.is_zero() {
                            coeffs.insert(e, prod);
                        }
                    }
                }
            }
        }
        Ok(self.clip_series(SeriesElt { coeffs, trunc }))
    }

    fn series_inv(&self) -> Result<Element> {
        let s = self.as_series().unwrap();
        let Some((&v, _)) = s.coeffs.iter().next() else {
            return match s.trunc {
                Some(t) => Err(AdelixError::PrecisionExhausted(format!(
                    "inverting a series indistinguishable from zero below {} {t}",
                    self.ring.var().unwrap_or("t")
                ))),
                None => Err(AdelixError::NotAUnit("inverting the zero series".into())),
            };
        };
        match &self.ring {
            Ring::Laurent { base, .. } => {
                let lead = s.coeffs.get(&v).unwrap();
                if !base.is_field_like() {
                    // exact Laurent "polynomials" over Z: only unit monomials invert
                    if s.coeffs.len() == 1 && s.trunc.is_none() {
                        let ci = lead.inv()?;
                        let mut m = BTreeMap::new();
                        m.insert(-v, ci);
                        return Ok(Element::new(
                            self.ring.clone(),
                            Payload::Series(SeriesElt {
                                coeffs: m,
                                trunc: None,
                            }),
                        ));
                    }
                    return Err(AdelixError::NotAUnit(
                        "non-monomial Laurent polynomial over a non-field base".into(),
                    ));
                }
                // geometric expansion to the working width
                let cap = self.series_width_cap();
                let out_trunc = match s.trunc {
                    Some(t) => {
                        // x = t^v(l + h), 1/x known mod t^(t - 2v) shifted; the safe
                        // bound: inverse truncation -v + (t - v)
                        Some((-v) + (t - v).min(cap))
                    }
                    None => {
                        if s.coeffs.len() == 1 {
                            let ci = lead.inv()?;
                            let mut m = BTreeMap::new();
                            m.insert(-v, ci);
                            return Ok(Element::new(
                                self.ring.clone(),
                                Payload::Series(SeriesElt {
                                    coeffs: m,
                                    trunc: None,
                                }),
                            ));
                        }
                        Some(-v + cap)
                    }
                };
                let li = lead.inv()?;
                // n = x * t^-v * li - 1 has positive valuation
                let mut n = SeriesElt {
                    coeffs: BTreeMap::new(),
                    trunc: s.trunc.map(|t| t - v),
                };
                for (e, c) in &s.coeffs {
                    if *e == v {
                        continue;
                    }
                    n.coeffs.insert(e - v, c.mul(&li)?);
                }
                // (1+n)^-1 = sum (-n)^k until the truncation kills it
                let limit = out_trunc.unwrap() + v; // relative truncation for the unit part
                let mut acc = SeriesElt {
                    coeffs: BTreeMap::from([(0, Element::one(self.ring.base_ring().unwrap()))]),
                    trunc: Some(limit),
                };
                let minn = n.coeffs.keys().next().copied();
                if let Some(step) = minn {
                    let mut pw = SeriesElt {
                        coeffs: BTreeMap::from([(0, Element::one(self.ring.base_ring().unwrap()))]),
                        trunc: Some(limit),
                    };
                    let mut k: i64 = 0;
                    loop {
                        k += 1;
                        if step.saturating_mul(k) >= limit {
                            break;
                        }
                        pw = self.series_mul(&pw, &n)?;
                        if pw.coeffs.is_empty() {
                            break;
                        }
                        let signed = if k % 2 == 1 {
                            SeriesElt {
                                coeffs: pw.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect(),
                                trunc: pw.trunc,
                            }
                        } else {
                            pw.clone()
                        };
                        acc = self.series_add(&acc, &signed)?;
                    }
                }
                // result = acc * li * t^-v
                let mut out = BTreeMap::new();
                for (e, c) in &acc.coeffs {
                    out.insert(e - v, c.mul(&li)?);
                }
                Ok(Element::new(
                    self.ring.clone(),
                    Payload::Series(self.clip_series(SeriesElt {
                        coeffs: out,
                        trunc: out_trunc,
                    })),
                ))
            }
            Ring::TwoDimLocal { coeff, .. } => {
                // x = p^a * y with y a unit of R{{t}}-trunc; invert y mod p by
                // residue series inversion, then Newton-lift in p.
                let prec = coeff.local_prec().unwrap();
                let a = self.two_dim_valuation()?;
                let p_elt = Element::from_bigint(coeff, coeff.local_prime().unwrap());
                let y = self.mul_coeff(&p_elt.pow(-a)?)?;
                let yinv = y.two_dim_unit_inv(prec)?;
                let shift = p_elt.pow(-a)?;
                yinv.mul_coeff(&shift)
            }
            _ => unreachable!(),
        }
    }

    /// Multiply a series elementwise by a coefficient-ring scalar.
    pub fn mul_coeff(&self, c: &Element) -> Result<Element> {
        let s = self.as_series().ok_or_else(|| {
            AdelixError::Unsupported("mul_coeff on a non-series element".into())
        })?;
        let mut out = BTreeMap::new();
        for (e, x) in &s.coeffs {
            let y = x.mul(c)?;
            if !y.is_zero() {
                out.insert(*e, y);
            }
        }
        Ok(Element::new(
            self.ring.clone(),
            Payload::Series(self.clip_series(SeriesElt {
                coeffs: out,
                trunc: s.trunc,
            })),
        ))
    }

    /// Newton inversion of a p-adically-unit series (two-dimensional kind).
    fn two_dim_unit_inv(&self, prec: u32) -> Result<Element> {
        let coeff = self.ring.base_ring().unwrap().clone();
        let _p = coeff.local_prime().unwrap().clone();
        let s = self.as_series().unwrap();
        // residue in k((t)): invert the leading term and run the geometric series
        // at the residue level, i.e. mod p, entirely within p-adic arithmetic by
        // Newton iteration: b <- b(2 - x b), starting from a mod-p inverse.
        // Starting value: t^-w * u0^-1 where w = residue t-valuation.
        let mut w = None;
        for (e, c) in &s.coeffs {
            let l = c.as_local().unwrap();
            if l.val == 0 {
                w = Some(*e);
                break;
            }
        }
        let Some(w) = w else {
            return Err(AdelixError::NotAUnit(
                "series has p-divisible residue; not a unit of R{{t}}".into(),
            ));
        };
        let lead = s.coeffs.get(&w).unwrap().clone();
        let mut b_terms = BTreeMap::new();
        b_terms.insert(-w, lead.inv()?);
        let cap = self.series_width_cap();
        let tr = s.trunc.map(|t| t - 2 * w).unwrap_or(-w + cap).min(-w + cap);
        let mut b = Element::new(
            self.ring.clone(),
            Payload::Series(SeriesElt {
                coeffs: b_terms,
                trunc: Some(tr),
            }),
        );
        // Newton: each pass at least doubles the p-adic accuracy; the t-window
        // is refreshed by the residue geometric correction folded into the same
        // iteration (the iteration also fixes t-tail errors of the seed).
        let two = Element::from_int(&self.ring, 2);
        let iterations = (32 - prec.leading_zeros()) + (cap.max(2) as u32).ilog2() + 3;
        for _ in 0..iterations {
            let xb = self.mul(&b)?;
            let corr = two.sub(&xb)?;
            let nb = b.mul(&corr)?;
            if nb == b {
                break;
            }
            b = nb;
        }
        // verify
        let check = self.mul(&b)?;
        if !check.is_one_to_precision() {
            return Err(AdelixError::PrecisionExhausted(
                "series inversion did not converge in the stored window".into(),
            ));
        }
        Ok(b)
    }

    /// 1 up to the stored truncation / precision.
    pub fn is_one_to_precision(&self) -> bool {
        match &self.payload {
            Payload::Series(s) => {
                for (e, c) in &s.coeffs {
                    if *e == 0 {
                        match &c.payload {
                            Payload::Local(l) => {
                                if !(l.val == 0 && l.unit.len() == 1 && l.unit[0].is_one()) {
                                    return false;
                                }
                            }
                            _ => {
                                if !c.is_one() {
                                    return false;
                                }
                            }
                        }
                    } else if !c.is_zero() {
                        return false;
                    }
                }
                s.coeffs.contains_key(&0)
            }
            _ => self.is_one(),
        }
    }

    // ---- valuations ----

    /// The normalized discrete valuation: t-adic for Laurent kinds, p-adic for
    /// PAdic/PAdicExt and TwoDimLocal kinds.
    pub fn valuation(&self) -> Result<i64> {
        match &self.ring {
            Ring::PAdic { .. } | Ring::PAdicExt { .. } => {
                let l = self.as_local().unwrap();
                if l.unit.is_empty() {
                    Err(AdelixError::PrecisionExhausted(format!(
                        "valuation of a p-adic zero known only mod p^{}",
                        l.val
                    )))
                } else {
                    Ok(l.val)
                }
            }
            Ring::Laurent { .. } => {
                let s = self.as_series().unwrap();
                match s.coeffs.keys().next() {
                    Some(&v) => Ok(v),
                    None => match s.trunc {
                        None => Err(AdelixError::NotAUnit("valuation of exact zero".into())),
                        Some(t) => Err(AdelixError::PrecisionExhausted(format!(
                            "series vanishes below stored order {t}"
                        ))),
                    },
                }
            }
            Ring::TwoDimLocal { .. } => self.two_dim_valuation(),
            Ring::PrimeField { .. } | Ring::GaloisField { .. } => {
                if self.is_zero() {
                    Err(AdelixError::NotAUnit("valuation of zero".into()))
                } else {
                    Ok(0)
                }
            }
            other => Err(AdelixError::Unsupported(format!(
                "valuation on ring {other}"
            ))),
        }
    }

    /// p-adic valuation of a TwoDimLocal element: min over stored coefficients.
    fn two_dim_valuation(&self) -> Result<i64> {
        let s = self.as_series().unwrap();
        let mut best: Option<i64> = None;
        for c in s.coeffs.values() {
            let l = c.as_local().unwrap();
            if !l.unit.is_empty() {
                best = Some(best.map_or(l.val, |b: i64| b.min(l.val)));
            }
        }
        best.ok_or_else(|| {
            AdelixError::PrecisionExhausted("two-dimensional element is zero to precision".into())
        })
    }

    // ---- conversions ----

    /// Embed into a compatible larger/truncated ring (Z -> Q, Q -> Qp, base ->
    /// series constant, Fp -> Fq, Qp -> Qq, Laurent window change, etc.).
    pub fn embed(&self, target: &Ring) -> Result<Element> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        match (&self.ring, target) {
            (Ring::Integers, Ring::Rationals) => Ok(Element::new(
                target.clone(),
                Payload::Rat(BigRational::from(self.as_bigint().unwrap().clone())),
            )),
            (Ring::Integers, _) => {
                let n = self.as_bigint().unwrap();
                Ok(Element::from_bigint(target, n))
            }
            (Ring::Rationals, _) => {
                let r = self.as_rational().unwrap();
                Element::from_rational(target, r.numer(), r.denom())
            }
            (Ring::PrimeField { p }, Ring::GaloisField { p: q, .. }) if p == q => Ok(
                Element::new(target.clone(), Payload::Mod(self.as_mod().unwrap().to_vec())),
            ),
            (Ring::PAdic { p, .. }, Ring::PAdic { p: q, prec }) if p == q => {
                let l = self.as_local().unwrap();
                if l.unit.is_empty() {
                    return Ok(Element::new(
                        target.clone(),
                        Payload::Local(LocalElt {
                            val: l.val.min(*prec as i64),
                            unit: vec![],
                            prec: *prec,
                        }),
                    ));
                }
                let keep = l.prec.min(*prec);
                let pk = p.pow(keep);
                Ok(Element::new(
                    target.clone(),
                    Payload::Local(LocalElt {
                        val: l.val,
                        unit: l.unit.iter().map(|c| c.mod_floor(&pk)).collect(),
                        prec: keep,
                    }),
                ))
            }
            (Ring::PAdic { p, .. }, Ring::PAdicExt { p: q, prec, .. }) if p == q => {
                let l = self.as_local().unwrap();
                let keep = l.prec.min(*prec);
                let pk = p.pow(keep.max(1));
                Ok(Element::new(
                    target.clone(),
                    Payload::Local(LocalElt {
                        val: l.val,
                        unit: l.unit.iter().map(|c| c.mod_floor(&pk)).collect(),
                        prec: keep,
                    }),
                ))
            }
            (Ring::PAdicExt { p, .. }, Ring::PAdicExt { p: q, prec, modulus }) if p == q => {
                let l = self.as_local().unwrap();
                let keep = l.prec.min(*prec);
                let pk = p.pow(keep.max(1));
                Ok(Element::new(
                    target.clone(),
                    Payload::Local(LocalElt {
                        val: l.val,
                        unit: modpoly_reduce(&l.unit, &pk, modulus),
                        prec: keep,
                    }),
                ))
            }
            // base element as constant series
            (_, Ring::Laurent { base, .. }) if self.ring == **base => {
                Element::series(target, vec![(0, self.clone())], None)
            }
            (_, Ring::TwoDimLocal { coeff, .. }) if self.ring == **coeff => {
                Element::series(target, vec![(0, self.clone())], None)
            }
            // series over embeddable coefficients / window change
            (Ring::Laurent { .. }, Ring::Laurent { base: tb, .. }) => {
                let s = self.as_series().unwrap();
                let mut terms = Vec::new();
                for (e, c) in &s.coeffs {
                    terms.push((*e, c.embed(tb)?));
                }
                Element::series(target, terms, s.trunc)
            }
            (Ring::Laurent { .. }, Ring::TwoDimLocal { coeff, .. }) => {
                let s = self.as_series().unwrap();
                let mut terms = Vec::new();
                for (e, c) in &s.coeffs {
                    terms.push((*e, c.embed(coeff)?));
                }
                Element::series(target, terms, s.trunc)
            }
            (Ring::TwoDimLocal { .. }, Ring::TwoDimLocal { coeff, .. }) => {
                let s = self.as_series().unwrap();
                let mut terms = Vec::new();
                for (e, c) in &s.coeffs {
                    terms.push((*e, c.embed(coeff)?));
                }
                Element::series(target, terms, s.trunc)
            }
            (Ring::Poly { .. }, Ring::Poly { base: tb, .. }) => {
                let v = self.as_poly().unwrap();
                let mut out = Vec::new();
                for c in v {
                    out.push(c.embed(tb)?);
                }
                Element::poly_from(target, out)
            }
            (Ring::Poly { .. }, Ring::Laurent { base: tb, .. }) => {
                let v = self.as_poly().unwrap();
                let mut terms = Vec::new();
                for (i, c) in v.iter().enumerate() {
                    terms.push((i as i64, c.embed(tb)?));
                }
                Element::series(target, terms, None)
            }
            (Ring::Poly { .. }, Ring::TwoDimLocal { coeff, .. }) => {
                let v = self.as_poly().unwrap();
                let mut terms = Vec::new();
                for (i, c) in v.iter().enumerate() {
                    terms.push((i as i64, c.embed(coeff)?));
                }
                Element::series(target, terms, None)
            }
            (a, b) => Err(AdelixError::Unsupported(format!(
                "no embedding {a} -> {b}"
            ))),
        }
    }

    /// Residue map of a local element (valuation must be >= 0; positive
    /// valuation reduces to zero).
    pub fn residue(&self, target: &Ring) -> Result<Element> {
        match (&self.ring, target) {
            (Ring::PAdic { p, .. }, Ring::PrimeField { p: q }) if p == q => {
                let l = self.as_local().unwrap();
                if l.unit.is_empty() {
                    if l.val <= 0 {
                        return Err(AdelixError::PrecisionExhausted(
                            "residue of a zero with no certified digits".into(),
                        ));
                    }
                    return Ok(Element::zero(target));
                }
                if l.val < 0 {
                    return Err(AdelixError::NotAUnit("negative valuation residue".into()));
                }
                if l.val > 0 {
                    return Ok(Element::zero(target));
                }
                Ok(Element::from_bigint(target, &l.unit[0]))
            }
            (Ring::PAdicExt { p, .. }, Ring::GaloisField { p: q, modulus }) if p == q => {
                let l = self.as_local().unwrap();
                if l.unit.is_empty() {
                    if l.val <= 0 {
                        return Err(AdelixError::PrecisionExhausted(
                            "residue of a zero with no certified digits".into(),
                        ));
                    }
                    return Ok(Element::zero(target));
                }
                if l.val < 0 {
                    return Err(AdelixError::NotAUnit("negative valuation residue".into()));
                }
                if l.val > 0 {
                    return Ok(Element::zero(target));
                }
                Ok(Element::new(
                    target.clone(),
                    Payload::Mod(modpoly_reduce(&l.unit, p, modulus)),
                ))
            }
            // Laurent residue: constant term of a valuation->=0 series
            (Ring::Laurent { base, .. }, t) if **base == *t => {
                let s = self.as_series().unwrap();
                if let Some((&v, _)) = s.coeffs.iter().next() {
                    if v < 0 {
                        return Err(AdelixError::NotAUnit(
                            "negative t-valuation has no residue".into(),
                        ));
                    }
                }
                Ok(s.coeffs.get(&0).cloned().unwrap_or_else(|| Element::zero(t)))
            }
            (a, b) => Err(AdelixError::Unsupported(format!("no residue {a} -> {b}"))),
        }
    }

    /// Agreement after truncating both to the coarser precision (p-adic kinds
    /// and series kinds); exact kinds compare exactly.
    pub fn agrees_with(&self, other: &Element) -> bool {
        if self.ring == other.ring {
            if self == other {
                return true;
            }
        }
        match (&self.payload, &other.payload) {
            (Payload::Local(a), Payload::Local(b)) => {
                let p = self.ring.local_prime().unwrap();
                if a.unit.is_empty() || b.unit.is_empty() {
                    // both must be zero to the coarser absolute precision
                    let abs_a = if a.unit.is_empty() { a.val } else { a.val + a.prec as i64 };
                    let abs_b = if b.unit.is_empty() { b.val } else { b.val + b.prec as i64 };
                    let abs = abs_a.min(abs_b);
                    let za = a.unit.is_empty() || a.val >= abs;
                    let zb = b.unit.is_empty() || b.val >= abs;
                    return za && zb;
                }
                if a.val != b.val {
                    return false;
                }
                let keep = a.prec.min(b.prec);
                if keep == 0 {
                    return true;
                }
                let pk = p.pow(keep);
                let ra: Vec<BigInt> = a.unit.iter().map(|c| c.mod_floor(&pk)).collect();
                let rb: Vec<BigInt> = b.unit.iter().map(|c| c.mod_floor(&pk)).collect();
                let mut ra = ra;
                let mut rb = rb;
                modpoly_trim(&mut ra);
                modpoly_trim(&mut rb);
                ra == rb
            }
            (Payload::Series(a), Payload::Series(b)) => {
                let t = match (a.trunc, b.trunc) {
                    (None, None) => None,
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (Some(x), Some(y)) => Some(x.min(y)),
                };
                let keys: std::collections::BTreeSet<i64> = a
                    .coeffs
                    .keys()
                    .chain(b.coeffs.keys())
                    .copied()
                    .filter(|e| t.map_or(true, |t| *e < t))
                    .collect();
                for e in keys {
                    match (a.coeffs.get(&e), b.coeffs.get(&e)) {
                        (Some(x), Some(y)) => {
                            if !x.agrees_with(y) {
                                return false;
                            }
                        }
                        (Some(x), None) | (None, Some(x)) => {
                            if !x.is_zero() {
                                return false;
                            }
                        }
                        (None, None) => {}
                    }
                }
                true
            }
            _ => self == other,
        }
    }
}
