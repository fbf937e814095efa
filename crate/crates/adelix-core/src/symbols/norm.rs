//! Norms down finite unramified extensions: the determinant of the
//! multiplication-by-a matrix in the power basis of the extension.

use crate::error::{AdelixError, Result};
use crate::exactrings::{det_field, Element, Payload, Ring};

/// Norm of `a` down to `target`. Supported shapes: PAdicExt -> PAdic over the
/// same prime, GaloisField -> PrimeField over the same prime, and the trivial
/// cases target == source.
pub fn norm_k1(a: &Element, target: &Ring) -> Result<Element> {
    if a.ring == *target {
        return Ok(a.clone());
    }
    match (&a.ring, target) {
        (Ring::PAdicExt { p, modulus, prec }, Ring::PAdic { p: q, prec: tp }) if p == q => {
            let k = modulus.len() - 1;
            let l = a.as_local().unwrap();
            if l.unit.is_empty() {
                // norm of a zero known mod p^v is zero known mod p^(k v)
                return Ok(Element::new(
                    target.clone(),
                    Payload::Local(crate::exactrings::LocalElt {
                        val: (l.val * k as i64).min(*tp as i64),
                        unit: vec![],
                        prec: *tp,
                    }),
                ));
            }
            // norm(u p^v) = p^{k v} * norm(u)
            let unit = Element::new(
                a.ring.clone(),
                Payload::Local(crate::exactrings::LocalElt {
                    val: 0,
                    unit: l.unit.clone(),
                    prec: l.prec,
                }),
            );
            let n = mult_matrix_det(&unit, &a.ring, k, *prec)?;
            let nl = n.as_local().unwrap();
            Ok(Element::new(
                target.clone(),
                Payload::Local(crate::exactrings::LocalElt {
                    val: nl.val + l.val * k as i64,
                    unit: nl.unit.clone(),
                    prec: nl.prec.min(*tp),
                }),
            ))
        }
        (Ring::GaloisField { p, modulus }, Ring::PrimeField { p: q }) if p == q => {
            let k = modulus.len() - 1;
            if a.is_zero() {
                return Ok(Element::zero(target));
            }
            mult_matrix_det(a, &a.ring, k, 1)
        }
        (from, to) => Err(AdelixError::Unsupported(format!(
            "norm from {from} to {to}"
        ))),
    }
}

/// Determinant of multiplication by `a` in the basis 1, x, ..., x^(k-1),
/// computed over the base (PAdic or PrimeField) ring.
fn mult_matrix_det(a: &Element, ext: &Ring, k: usize, prec: u32) -> Result<Element> {
    let base = match ext {
        Ring::PAdicExt { p, .. } => Ring::PAdic {
            p: p.clone(),
            prec,
        },
        Ring::GaloisField { p, .. } => Ring::PrimeField { p: p.clone() },
        other => {
            return Err(AdelixError::Unsupported(format!(
                "multiplication matrix over {other}"
            )))
        }
    };
    // x generator
    let x = match ext {
        Ring::PAdicExt { prec, .. } => Element::new(
            ext.clone(),
            Payload::Local(crate::exactrings::LocalElt {
                val: 0,
                unit: vec![num_bigint::BigInt::from(0), num_bigint::BigInt::from(1)],
                prec: *prec,
            }),
        ),
        Ring::GaloisField { .. } => Element::new(
            ext.clone(),
            Payload::Mod(vec![num_bigint::BigInt::from(0), num_bigint::BigInt::from(1)]),
        ),
        _ => unreachable!(),
    };
    let mut rows: Vec<Vec<Element>> = Vec::with_capacity(k);
    let mut pow = Element::one(ext);
    for _ in 0..k {
        let prod = a.mul(&pow)?;
        rows.push(coeff_vector(&prod, &base, k)?);
        pow = pow.mul(&x)?;
    }
    det_field(&rows, &base)
}

/// Coefficient vector of an extension element in the power basis, over the base.
fn coeff_vector(e: &Element, base: &Ring, k: usize) -> Result<Vec<Element>> {
    match &e.payload {
        Payload::Mod(v) => {
            let mut out = Vec::with_capacity(k);
            for i in 0..k {
                let c = v.get(i).cloned().unwrap_or_else(num_bigint::BigInt::zero);
                out.push(Element::from_bigint(base, &c));
            }
            Ok(out)
        }
        Payload::Local(l) => {
            let mut out = Vec::with_capacity(k);
            for i in 0..k {
                if l.unit.is_empty() {
                    out.push(Element::zero(base));
                    continue;
                }
                let c = l.unit.get(i).cloned().unwrap_or_else(num_bigint::BigInt::zero);
                if c == num_bigint::BigInt::from(0) {
                    out.push(Element::zero(base));
                } else {
                    let digit = Element::from_bigint(base, &c);
                    let scale = Element::from_bigint(base, base.local_prime().unwrap())
                        .pow(l.val)?;
                    out.push(digit.mul(&scale)?);
                }
            }
            Ok(out)
        }
        _ => Err(AdelixError::Unsupported(
            "coefficient vector of a non-extension element".into(),
        )),
    }
}

use num_traits::Zero;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactrings::{parse_element, parse_ring};

    #[test]
    fn norm_of_base_scalar() {
        // Norm from the unramified quadratic over Q7 of 7 is 49
        let ext = parse_ring("Q7^2(4)").unwrap();
        let base = parse_ring("Q7(4)").unwrap();
        let seven = parse_element(&ext, "7").unwrap();
        let n = norm_k1(&seven, &base).unwrap();
        assert!(n.agrees_with(&parse_element(&base, "49").unwrap()));
    }

    #[test]
    fn norm_f9_generator() {
        // F9 = F3[x]/(x^2+1) (the default irreducible of degree 2 over F3):
        // norm of x is x * x^3 = x^4 = (x^2)^2 = (-1)^2 = 1
        let ext = parse_ring("F9").unwrap();
        if let Ring::GaloisField { modulus, .. } = &ext {
            assert_eq!(
                modulus.as_ref(),
                &vec![
                    num_bigint::BigInt::from(1),
                    num_bigint::BigInt::from(0),
                    num_bigint::BigInt::from(1)
                ]
            );
        }
        let base = parse_ring("F3").unwrap();
        let x = parse_element(&ext, "x").unwrap();
        let n = norm_k1(&x, &base).unwrap();
        assert!(n.is_one());
    }

    #[test]
    fn norm_multiplicative() {
        let ext = parse_ring("Q5^2(5)").unwrap();
        let base = parse_ring("Q5(5)").unwrap();
        let a = parse_element(&ext, "2 + 3*x").unwrap();
        let b = parse_element(&ext, "1 + 5*x + x").unwrap();
        let nab = norm_k1(&a.mul(&b).unwrap(), &base).unwrap();
        let na = norm_k1(&a, &base).unwrap();
        let nb = norm_k1(&b, &base).unwrap();
        assert!(nab.agrees_with(&na.mul(&nb).unwrap()));
    }
}
