//! Kato's residue on the truncated two-dimensional local field F{{t}}:
//! units are put in the multiplicative normal form p^a · t^w · U · W with U a
//! unit power series and W a monic distinguished polynomial, and the residue
//! is evaluated bimultiplicatively from a small table of basis values
//! (resultants replace any mention of ramified root fields).

use crate::error::{AdelixError, Result};
use crate::exactrings::{epoly, weierstrass_prepare, Element, Ring};

use super::word::SymbolWord;

/// Multiplicative normal form of a unit of the two-dimensional local field:
/// x = p^p_pow · t^t_pow · unit · W(t), with `unit` a power series whose
/// constant term is a p-adic unit and W monic distinguished of degree
/// `distinguished.len() - 1` (the vector [1] when no tail part is present).
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub p_pow: i64,
    pub t_pow: i64,
    pub unit: Element,
    pub distinguished: Vec<Element>,
}

impl NormalForm {
    pub fn w_degree(&self) -> i64 {
        (self.distinguished.len() as i64 - 1).max(0)
    }
}

/// Compute the normal form of a declared unit of a TwoDimLocal ring.
pub fn two_dim_normal_form(x: &Element) -> Result<NormalForm> {
    let (coeff, _var) = match &x.ring {
        Ring::TwoDimLocal { coeff, var, .. } => ((**coeff).clone(), var.clone()),
        other => {
            return Err(AdelixError::Unsupported(format!(
                "normal form on {other}"
            )))
        }
    };
    let p = coeff.local_prime().unwrap().clone();
    let a = x.valuation()?; // p-adic valuation
    let p_elt = Element::from_bigint(&coeff, &p);
    let x1 = x.mul_coeff(&p_elt.pow(-a)?)?;
    // residue t-valuation: smallest exponent carrying a p-adic unit
    let s = x1.as_series().unwrap();
    let mut w: Option<i64> = None;
    for (e, c) in &s.coeffs {
        if c.as_local().map_or(false, |l| l.val == 0 && !l.unit.is_empty()) {
            w = Some(*e);
            break;
        }
    }
    let Some(w) = w else {
        return Err(AdelixError::PrecisionExhausted(
            "no unit coefficient visible in the stored window".into(),
        ));
    };
    let minsupp = *s.coeffs.keys().next().unwrap();
    let k = (w - minsupp).max(0);
    // z = x1 * t^(k - w) has plus support with residue t-valuation k
    let shift = Element::monomial(&x.ring, k - w)?;
    let z = x1.mul(&shift)?;
    if k == 0 {
        return Ok(NormalForm {
            p_pow: a,
            t_pow: w,
            unit: z,
            distinguished: vec![Element::one(&coeff)],
        });
    }
    let (w_poly, u) = weierstrass_prepare(&z)?;
    Ok(NormalForm {
        p_pow: a,
        t_pow: w - k,
        unit: u,
        distinguished: w_poly,
    })
}

/// Reduce the unit power series mod the monic distinguished W, tracking the
/// precision lost to the stored truncation (the unknown tail reduces with
/// p-valuation >= the gain of one W-division per degree-K step).
fn reduce_series_mod_w(u: &Element, w: &[Element], coeff: &Ring) -> Result<Vec<Element>> {
    let s = u.as_series().unwrap();
    let k = w.len() - 1;
    let hi = s.coeffs.keys().next_back().copied().unwrap_or(0);
    let deg = match s.trunc {
        Some(t) => (t - 1).max(hi),
        None => hi,
    };
    let mut dense: Vec<Element> = (0..=deg)
        .map(|e| {
            s.coeffs
                .get(&e)
                .cloned()
                .unwrap_or_else(|| Element::zero(coeff))
        })
        .collect();
    epoly::trim(&mut dense);
    let (_, mut rem) = epoly::divmod(&dense, w, coeff)?;
    // truncation tail: cut the certified precision by the valuation of t^T mod W
    if let Some(t) = s.trunc {
        let mut tt = vec![Element::zero(coeff); t.max(k as i64) as usize + 1];
        let n = tt.len();
        tt[n - 1] = Element::one(coeff);
        let (_, tail) = epoly::divmod(&tt, w, coeff)?;
        let mut vmin: Option<i64> = None;
        for c in &tail {
            if let Ok(v) = c.valuation() {
                vmin = Some(vmin.map_or(v, |b: i64| b.min(v)));
            }
        }
        if let Some(v) = vmin {
            // add a zero known only mod p^v to every remainder coefficient
            let cut = Element::new(
                coeff.clone(),
                crate::exactrings::Payload::Local(crate::exactrings::LocalElt {
                    val: v,
                    unit: vec![],
                    prec: 0,
                }),
            );
            for c in rem.iter_mut() {
                *c = c.add(&cut)?;
            }
        }
    }
    rem.resize(k, Element::zero(coeff));
    Ok(rem)
}

fn constant_term(u: &Element, coeff: &Ring) -> Element {
    u.as_series()
        .and_then(|s| s.coeffs.get(&0).cloned())
        .unwrap_or_else(|| Element::zero(coeff))
}

/// Residue of a single pair from the normal forms, in the coefficient field.
fn res_pair(a: &NormalForm, b: &NormalForm, coeff: &Ring) -> Result<Element> {
    let p = coeff.local_prime().unwrap().clone();
    let p_elt = Element::from_bigint(coeff, &p);
    let ka = a.w_degree();
    let kb = b.w_degree();
    // p-power contribution: p^{ap*wb - wa*bp + ap*Kb - Ka*bp}
    let p_exp = a.p_pow * b.t_pow - a.t_pow * b.p_pow + a.p_pow * kb - ka * b.p_pow;
    let mut acc = p_elt.pow(p_exp)?;
    // sign contribution: (-1)^{wa*wb + Ka*wb + wa*Kb + Ka*Kb}
    let sign_exp = a.t_pow * b.t_pow + ka * b.t_pow + a.t_pow * kb + ka * kb;
    if sign_exp % 2 != 0 {
        acc = acc.neg();
    }
    // unit-vs-t contributions: Ua(0)^{wb} * Ub(0)^{-wa}
    let ua0 = constant_term(&a.unit, coeff);
    let ub0 = constant_term(&b.unit, coeff);
    acc = acc.mul(&ua0.pow(b.t_pow)?)?;
    acc = acc.mul(&ub0.pow(-a.t_pow)?)?;
    // unit-vs-W contributions: Res(Wb, Ua) * Res(Wa, Ub)^{-1}
    if kb > 0 {
        let ra = reduce_series_mod_w(&a.unit, &b.distinguished, coeff)?;
        let r = epoly::resultant(&b.distinguished, &ra, coeff)?;
        acc = acc.mul(&r)?;
    }
    if ka > 0 {
        let rb = reduce_series_mod_w(&b.unit, &a.distinguished, coeff)?;
        let r = epoly::resultant(&a.distinguished, &rb, coeff)?;
        acc = acc.mul(&r.inv()?)?;
    }
    // W-vs-W: (-1)^{Ka*Kb} for equal or coprime distinguished parts
    if ka > 0 && kb > 0 && a.distinguished != b.distinguished {
        let r = epoly::resultant(&a.distinguished, &b.distinguished, coeff)?;
        if r.is_zero() {
            return Err(AdelixError::PrecisionExhausted(
                "distinguished parts share a factor at working precision".into(),
            ));
        }
    }
    Ok(acc)
}

/// Kato residue of a word over a TwoDimLocal descriptor, certified mod p^n.
pub fn kato_res(word: &SymbolWord, n: u32) -> Result<Element> {
    let coeff = match &word.ring {
        Ring::TwoDimLocal { coeff, .. } => (**coeff).clone(),
        other => {
            return Err(AdelixError::Unsupported(format!(
                "kato_res over {other}"
            )))
        }
    };
    let stored = coeff.local_prec().unwrap();
    if n > stored {
        return Err(AdelixError::PrecisionExhausted(format!(
            "requested precision {n} exceeds stored precision {stored}"
        )));
    }
    let mut acc = Element::one(&coeff);
    for (a, b, e) in &word.pairs {
        let nfa = two_dim_normal_form(a)?;
        let nfb = two_dim_normal_form(b)?;
        let v = res_pair(&nfa, &nfb, &coeff)?;
        acc = acc.mul(&v.pow(*e)?)?;
    }
    // certify the requested absolute precision
    let l = acc
        .as_local()
        .ok_or_else(|| AdelixError::Unsupported("kato value not local".into()))?;
    if l.unit.is_empty() {
        if l.val < n as i64 {
            return Err(AdelixError::PrecisionExhausted(format!(
                "value is zero mod p^{} only",
                l.val
            )));
        }
    } else if l.val + (l.prec as i64) < n as i64 {
        return Err(AdelixError::PrecisionExhausted(format!(
            "value certified mod p^{} < requested p^{n}",
            l.val + l.prec as i64
        )));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactrings::{parse_element, parse_ring};

    fn tdl(p: i64, m: u32) -> Ring {
        parse_ring(&format!("Q{p}({m}){{{{t}}}}[-10..14]")).unwrap()
    }

    #[test]
    fn res_a_t_is_a() {
        // Res({5, t}) = 5 over Q5{{t}}
        let ring = tdl(5, 6);
        let a = parse_element(&ring, "5").unwrap();
        let t = parse_element(&ring, "t").unwrap();
        let w = SymbolWord::single(a, t).unwrap();
        let v = kato_res(&w, 5).unwrap();
        let coeff = parse_ring("Q5(6)").unwrap();
        assert!(v.agrees_with(&parse_element(&coeff, "5").unwrap()));
    }

    #[test]
    fn res_one_unit_t() {
        // Res({1 + p t, t}) = 1
        let ring = tdl(5, 6);
        let a = parse_element(&ring, "1 + 5*t").unwrap();
        let t = parse_element(&ring, "t").unwrap();
        let w = SymbolWord::single(a, t).unwrap();
        let v = kato_res(&w, 5).unwrap();
        assert!(v.is_one());
    }

    #[test]
    fn res_kills_plus_units() {
        // f, g in (Qp ⊗ Zp[[t]])^x
        let ring = tdl(5, 6);
        let f = parse_element(&ring, "2 + 5*t + t^2").unwrap();
        let g = parse_element(&ring, "1 + t + 25*t^3").unwrap();
        let w = SymbolWord::single(f, g).unwrap();
        let v = kato_res(&w, 5).unwrap();
        assert!(v.is_one());
    }

    #[test]
    fn res_lemma14_shape() {
        // Res({p, 1 + p r}) = 1 with a mixed-tail r
        let ring = tdl(5, 6);
        let p = parse_element(&ring, "5").unwrap();
        let r = parse_element(&ring, "1 + 5*(t^-2) + 2*t + 3*t^-1").unwrap();
        let one = parse_element(&ring, "1").unwrap();
        let arg = one.add(&p.mul(&r).unwrap()).unwrap();
        let w = SymbolWord::single(p, arg).unwrap();
        let v = kato_res(&w, 4).unwrap();
        assert!(v.is_one_to_precision() || v.is_one());
    }

    #[test]
    fn res_w_class() {
        // {t - p, t}: W = t - p, K = 1, value (-1)^1 = -1
        let ring = tdl(5, 6);
        let a = parse_element(&ring, "t - 5").unwrap();
        let t = parse_element(&ring, "t").unwrap();
        let w = SymbolWord::single(a, t).unwrap();
        let v = kato_res(&w, 4).unwrap();
        let coeff = parse_ring("Q5(6)").unwrap();
        assert!(v.agrees_with(&parse_element(&coeff, "-1").unwrap()));
    }

    #[test]
    fn res_mixed_unit_vs_plus_unit() {
        // {1 + p/t, 1 + t} = {(t+p)/t, 1+t}: resultant route gives (1 - p)^ε
        let ring = tdl(5, 6);
        let a = parse_element(&ring, "1 + 5*t^-1").unwrap();
        let b = parse_element(&ring, "1 + t").unwrap();
        let w = SymbolWord::single(a, b).unwrap();
        let v = kato_res(&w, 4).unwrap();
        let coeff = parse_ring("Q5(6)").unwrap();
        // {W, U}^{+1} with W = t+5, U = 1+t: Res(W,U)^{-1} = U(-5)^{-1} = (1-5)^{-1} = (-4)^{-1}
        let expect = parse_element(&coeff, "1/(-4)").unwrap();
        assert!(v.agrees_with(&expect), "got {:?}", v);
    }

    #[test]
    fn stability_at_higher_precision() {
        let r4 = tdl(5, 4);
        let r6 = tdl(5, 6);
        let mk = |ring: &Ring| {
            let a = parse_element(ring, "5 + (2+5)*t + t^3 + 5*t^-1").unwrap();
            let b = parse_element(ring, "t - 5 + 5*5*t^2").unwrap();
            SymbolWord::single(a, b).unwrap()
        };
        let v4 = kato_res(&mk(&r4), 3).unwrap();
        let v6 = kato_res(&mk(&r6), 3).unwrap();
        assert!(v4.agrees_with(&v6), "v4={v4:?} v6={v6:?}");
    }
}
