//! Dense polynomial helpers over field-like `Element` coefficients.

use crate::error::{AdelixError, Result};

use super::descriptor::Ring;
use super::element::Element;

pub fn trim(v: &mut Vec<Element>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

pub fn deg(v: &[Element]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub fn add(a: &[Element], b: &[Element], ring: &Ring) -> Result<Vec<Element>> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = Element::zero(ring);
        if i < a.len() {
            c = c.add(&a[i])?;
        }
        if i < b.len() {
            c = c.add(&b[i])?;
        }
        out.push(c);
    }
    trim(&mut out);
    Ok(out)
}

pub fn sub(a: &[Element], b: &[Element], ring: &Ring) -> Result<Vec<Element>> {
    let nb: Vec<Element> = b.iter().map(|c| c.neg()).collect();
    add(a, &nb, ring)
}

pub fn mul(a: &[Element], b: &[Element], ring: &Ring) -> Result<Vec<Element>> {
    if a.is_empty() || b.is_empty() {
        return Ok(vec![]);
    }
    let mut out = vec![Element::zero(ring); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = ai.mul(bj)?;
            out[i + j] = out[i + j].add(&t)?;
        }
    }
    trim(&mut out);
    Ok(out)
}

pub fn scalar_mul(a: &[Element], c: &Element) -> Result<Vec<Element>> {
    let mut out = Vec::with_capacity(a.len());
    for x in a {
        out.push(x.mul(c)?);
    }
    trim(&mut out);
    Ok(out)
}

/// Division with remainder; the divisor's leading coefficient must be a unit.
pub fn divmod(a: &[Element], b: &[Element], ring: &Ring) -> Result<(Vec<Element>, Vec<Element>)> {
    let mut b = b.to_vec();
    trim(&mut b);
    if b.is_empty() {
        return Err(AdelixError::NotAUnit("division by zero polynomial".into()));
    }
    let bl = b.last().unwrap().inv()?;
    let db = b.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    let mut q: Vec<Element> = vec![];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().mul(&bl)?;
        if q.len() <= shift {
            q.resize(shift + 1, Element::zero(ring));
        }
        q[shift] = q[shift].add(&c)?;
        for i in 0..b.len() {
            let t = c.mul(&b[i])?;
            r[shift + i] = r[shift + i].sub(&t)?;
        }
        trim(&mut r);
        if db == 0 && r.len() >= b.len() {
            continue;
        }
    }
    trim(&mut q);
    Ok((q, r))
}

/// Monic gcd over a field.
pub fn gcd(a: &[Element], b: &[Element], ring: &Ring) -> Result<Vec<Element>> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b, ring)?;
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        let li = l.inv()?;
        a = scalar_mul(&a, &li)?;
    }
    Ok(a)
}

pub fn derivative(a: &[Element], ring: &Ring) -> Result<Vec<Element>> {
    if a.len() <= 1 {
        return Ok(vec![]);
    }
    let mut out = Vec::with_capacity(a.len() - 1);
    for (i, c) in a.iter().enumerate().skip(1) {
        let k = Element::from_int(ring, i as i64);
        out.push(c.mul(&k)?);
    }
    trim(&mut out);
    Ok(out)
}

pub fn eval(a: &[Element], x: &Element, ring: &Ring) -> Result<Element> {
    let mut acc = Element::zero(ring);
    for c in a.iter().rev() {
        acc = acc.mul(x)?.add(c)?;
    }
    Ok(acc)
}

/// x^e mod m over the coefficient field; e >= 0 given in binary.
pub fn pow_mod(base: &[Element], e: &num_bigint::BigInt, m: &[Element], ring: &Ring) -> Result<Vec<Element>> {
    use num_traits::Zero;
    let mut result = vec![Element::one(ring)];
    let mut b = divmod(base, m, ring)?.1;
    let mut e = e.clone();
    let two = num_bigint::BigInt::from(2);
    while !e.is_zero() {
        if (&e % &two) == num_bigint::BigInt::from(1) {
            result = divmod(&mul(&result, &b, ring)?, m, ring)?.1;
        }
        e /= &two;
        if !e.is_zero() {
            b = divmod(&mul(&b, &b, ring)?, m, ring)?.1;
        }
    }
    Ok(result)
}

pub fn is_monic(a: &[Element]) -> bool {
    a.last().map_or(false, |c| c.is_one())
}

pub fn make_monic(a: &[Element]) -> Result<Vec<Element>> {
    match a.last() {
        None => Ok(vec![]),
        Some(l) => scalar_mul(a, &l.inv()?),
    }
}

/// Resultant of two polynomials over a field-like ring, by the subresultant-free
/// Euclidean recursion Res(a,b) = lc(b)^(da-dr) (-1)^(da db) Res(b, r).
pub fn resultant(a: &[Element], b: &[Element], ring: &Ring) -> Result<Element> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return Ok(Element::zero(ring));
    }
    let mut acc = Element::one(ring);
    loop {
        if b.len() == 1 {
            // Res(a, const c) = c^deg(a)
            let c = b[0].pow(deg(&a).unwrap() as i64)?;
            return acc.mul(&c);
        }
        let (_, r) = divmod(&a, &b, ring)?;
        let da = deg(&a).unwrap() as i64;
        let db = deg(&b).unwrap() as i64;
        if r.is_empty() {
            return Ok(Element::zero(ring));
        }
        let dr = deg(&r).unwrap() as i64;
        let lb = b.last().unwrap().pow(da - dr)?;
        let sign = if (da * db) % 2 == 1 {
            Element::from_int(ring, -1)
        } else {
            Element::one(ring)
        };
        acc = acc.mul(&lb)?.mul(&sign)?;
        a = b;
        b = r;
    }
}
