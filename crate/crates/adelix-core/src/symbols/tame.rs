//! The tame symbol of a discretely valued field, evaluated on formal words:
//! (-1)^{v(a)v(b)} a^{v(b)} / b^{v(a)} mod the maximal ideal. Only valuations
//! and leading units enter, which is why window truncation is safe here.

use crate::error::{AdelixError, Result};
use crate::exactrings::{Element, Ring};

use super::word::SymbolWord;

/// The residue field of the valuation carried by a discretely valued kind.
pub fn residue_ring_of(ring: &Ring) -> Result<Ring> {
    match ring {
        Ring::Laurent { base, .. } => {
            if base.is_field_like() {
                Ok((**base).clone())
            } else {
                Err(AdelixError::Unsupported(format!(
                    "Laurent base {base} is not a field"
                )))
            }
        }
        Ring::PAdic { p, .. } => Ok(Ring::PrimeField { p: p.clone() }),
        Ring::PAdicExt { p, modulus, .. } => Ok(Ring::GaloisField {
            p: p.clone(),
            modulus: modulus.clone(),
        }),
        other => Err(AdelixError::Unsupported(format!(
            "no discrete valuation residue field for {other}"
        ))),
    }
}

/// Leading unit of an element w.r.t. the kind's valuation, as a residue-field
/// element: the coefficient at t^v for Laurent kinds, the unit digit mod p for
/// p-adic kinds.
fn leading_residue(e: &Element, res: &Ring) -> Result<Element> {
    match &e.ring {
        Ring::Laurent { .. } => {
            let s = e.as_series().unwrap();
            let (_, lead) = s
                .coeffs
                .iter()
                .next()
                .ok_or_else(|| AdelixError::PrecisionExhausted("no leading term".into()))?;
            if lead.ring == *res {
                Ok(lead.clone())
            } else {
                lead.embed(res)
            }
        }
        Ring::PAdic { .. } | Ring::PAdicExt { .. } => {
            let l = e.as_local().unwrap();
            if l.unit.is_empty() {
                return Err(AdelixError::PrecisionExhausted(
                    "p-adic zero has no leading unit".into(),
                ));
            }
            // shift to valuation 0 and take the residue
            let unitized = Element::new(
                e.ring.clone(),
                crate::exactrings::Payload::Local(crate::exactrings::LocalElt {
                    val: 0,
                    unit: l.unit.clone(),
                    prec: l.prec,
                }),
            );
            unitized.residue(res)
        }
        other => Err(AdelixError::Unsupported(format!(
            "leading residue on {other}"
        ))),
    }
}

/// Tame symbol of one pair, in the residue field of the word's descriptor.
pub fn tame_pair(a: &Element, b: &Element, res: &Ring) -> Result<Element> {
    let va = a.valuation()?;
    let vb = b.valuation()?;
    let la = leading_residue(a, res)?;
    let lb = leading_residue(b, res)?;
    // (-1)^{va vb} * lead(a)^{vb} / lead(b)^{va}
    let mut out = la.pow(vb)?.mul(&lb.pow(va)?.inv()?)?;
    if (va * vb) % 2 != 0 {
        out = out.neg();
    }
    Ok(out)
}

/// Tame symbol of a word: the product over pairs of tame values raised to the
/// pair exponents. Exact in the residue field.
pub fn tame_symbol(word: &SymbolWord) -> Result<Element> {
    let res = residue_ring_of(&word.ring)?;
    let mut acc = Element::one(&res);
    for (a, b, e) in &word.pairs {
        let t = tame_pair(a, b, &res)?;
        acc = acc.mul(&t.pow(*e)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactrings::{parse_element, parse_ring};

    fn word1(ring: &Ring, a: &str, b: &str) -> SymbolWord {
        SymbolWord::single(
            parse_element(ring, a).unwrap(),
            parse_element(ring, b).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn tame_t_t_is_minus_one() {
        let ring = parse_ring("F5((t))[-8..8]").unwrap();
        let w = word1(&ring, "t", "t");
        let v = tame_symbol(&w).unwrap();
        let four = parse_element(&Ring::prime_field(5).unwrap(), "4").unwrap();
        assert_eq!(v, four);
    }

    #[test]
    fn tame_steinberg_instance() {
        let ring = parse_ring("Q((t))[-8..8]").unwrap();
        let w = word1(&ring, "t", "1-t");
        let v = tame_symbol(&w).unwrap();
        assert!(v.is_one());
    }

    #[test]
    fn tame_unit_numerator() {
        let ring = parse_ring("Q((t))[-8..8]").unwrap();
        let w = word1(&ring, "3+t", "t");
        let v = tame_symbol(&w).unwrap();
        assert_eq!(v, parse_element(&Ring::Rationals, "3").unwrap());
    }

    #[test]
    fn tame_monomial_identity() {
        // mul(t^-1, t) = 1 and {t^-1 * t, b} contributes trivially
        let ring = parse_ring("F5((t))[-8..8]").unwrap();
        let tinv = parse_element(&ring, "t^-1").unwrap();
        let t = parse_element(&ring, "t").unwrap();
        assert!(tinv.mul(&t).unwrap().is_one());
    }
}
