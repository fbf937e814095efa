//! Hensel lifting of coprime polynomial factorizations from the residue field
//! to truncated p-adic coefficients, and Newton lifting of simple roots. Used
//! for branch decompositions of horizontal curves and for Z[t] factorization.

use crate::error::{AdelixError, Result};

use super::descriptor::Ring;
use super::element::Element;
use super::epoly;

fn residue_ring(local: &Ring) -> Result<Ring> {
    match local {
        Ring::PAdic { p, .. } => Ok(Ring::PrimeField { p: p.clone() }),
        Ring::PAdicExt { p, modulus, .. } => Ok(Ring::GaloisField {
            p: p.clone(),
            modulus: modulus.clone(),
        }),
        other => Err(AdelixError::Unsupported(format!(
            "hensel lifting over {other}"
        ))),
    }
}

fn lift_poly(fbar: &[Element], local: &Ring) -> Result<Vec<Element>> {
    let mut out = Vec::with_capacity(fbar.len());
    for c in fbar {
        let rep = match &c.payload {
            super::element::Payload::Mod(v) => v.clone(),
            _ => {
                return Err(AdelixError::DescriptorMismatch(
                    "residue factor coefficients must live in the residue field".into(),
                ))
            }
        };
        if rep.is_empty() {
            out.push(Element::zero(local));
        } else {
            out.push(Element::new(
                local.clone(),
                super::element::Payload::Local(super::element::LocalElt {
                    val: 0,
                    unit: rep,
                    prec: local.local_prec().unwrap(),
                }),
            ));
        }
    }
    // re-normalize: a residue rep divisible by p cannot occur (it would be zero)
    Ok(out)
}

fn reduce_poly(f: &[Element], res: &Ring) -> Result<Vec<Element>> {
    let mut out = Vec::with_capacity(f.len());
    for c in f {
        out.push(c.residue(res)?);
    }
    epoly::trim(&mut out);
    Ok(out)
}

/// Extended gcd over a residue field: returns (g, s, t) with s·a + t·b = g monic.
fn ext_gcd(
    a: &[Element],
    b: &[Element],
    ring: &Ring,
) -> Result<(Vec<Element>, Vec<Element>, Vec<Element>)> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    epoly::trim(&mut r0);
    epoly::trim(&mut r1);
    let mut s0: Vec<Element> = vec![Element::one(ring)];
    let mut s1: Vec<Element> = vec![];
    let mut t0: Vec<Element> = vec![];
    let mut t1: Vec<Element> = vec![Element::one(ring)];
    while !r1.is_empty() {
        let (q, r) = epoly::divmod(&r0, &r1, ring)?;
        let qs = epoly::mul(&q, &s1, ring)?;
        let qt = epoly::mul(&q, &t1, ring)?;
        let s2 = epoly::sub(&s0, &qs, ring)?;
        let t2 = epoly::sub(&t0, &qt, ring)?;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if r0.is_empty() {
        return Err(AdelixError::NotCoprime);
    }
    let lead_inv = r0.last().unwrap().inv()?;
    let g = epoly::scalar_mul(&r0, &lead_inv)?;
    let s = epoly::scalar_mul(&s0, &lead_inv)?;
    let t = epoly::scalar_mul(&t0, &lead_inv)?;
    Ok((g, s, t))
}

fn poly_is_zero_at_precision(f: &[Element]) -> bool {
    f.iter().all(|c| c.is_zero())
}

/// Lift the coprime factorization f ≡ g·h mod p to the working precision,
/// with ḡ monic. Returns (g, h) with f = g·h at precision, g monic.
fn lift_pair(
    f: &[Element],
    gbar: &[Element],
    hbar: &[Element],
    local: &Ring,
    res: &Ring,
) -> Result<(Vec<Element>, Vec<Element>)> {
    let (d, _s, tt) = ext_gcd(gbar, hbar, res)?;
    if epoly::deg(&d) != Some(0) {
        return Err(AdelixError::NotCoprime);
    }
    let t_lift = lift_poly(&tt, local)?;
    let mut g = lift_poly(gbar, local)?;
    let mut h = epoly::divmod(f, &g, local)?.0;
    let prec = local.local_prec().unwrap();
    let max_rounds = 2 * prec + 4;
    for _ in 0..max_rounds {
        let gh = epoly::mul(&g, &h, local)?;
        let e = epoly::sub(f, &gh, local)?;
        if poly_is_zero_at_precision(&e) {
            return Ok((g, h));
        }
        let te = epoly::mul(&t_lift, &e, local)?;
        let (_, r) = epoly::divmod(&te, &g, local)?;
        g = epoly::add(&g, &r, local)?;
        h = epoly::divmod(f, &g, local)?.0;
    }
    let gh = epoly::mul(&g, &h, local)?;
    let e = epoly::sub(f, &gh, local)?;
    if poly_is_zero_at_precision(&e) {
        Ok((g, h))
    } else {
        Err(AdelixError::PrecisionExhausted(
            "hensel iteration did not converge at working precision".into(),
        ))
    }
}

/// Hensel-lift a pairwise-coprime monic factorization of f mod p to the
/// working p-adic precision. `f` must be monic over a PAdic/PAdicExt ring;
/// each residue factor must be monic and squarefree (ramified shapes are
/// rejected with `NotSquarefreeModP`), pairwise coprime, with product f mod p.
pub fn hensel_factor(
    f: &[Element],
    fbar_factors: &[Vec<Element>],
    local: &Ring,
) -> Result<Vec<Vec<Element>>> {
    let res = residue_ring(local)?;
    let mut f = f.to_vec();
    epoly::trim(&mut f);
    if !epoly::is_monic(&f) {
        return Err(AdelixError::Unsupported("hensel_factor needs monic f".into()));
    }
    // contract checks at the residue level
    let fres = reduce_poly(&f, &res)?;
    let mut prod: Vec<Element> = vec![Element::one(&res)];
    for g in fbar_factors {
        let mut g = g.to_vec();
        epoly::trim(&mut g);
        if !epoly::is_monic(&g) {
            return Err(AdelixError::Unsupported(
                "residue factors must be monic".into(),
            ));
        }
        let dg = epoly::derivative(&g, &res)?;
        let gc = epoly::gcd(&g, &dg, &res)?;
        if epoly::deg(&gc).unwrap_or(0) != 0 {
            return Err(AdelixError::NotSquarefreeModP(format!(
                "factor of degree {} shares a root with its derivative",
                epoly::deg(&g).unwrap_or(0)
            )));
        }
        prod = epoly::mul(&prod, &g, &res)?;
    }
    for i in 0..fbar_factors.len() {
        for j in (i + 1)..fbar_factors.len() {
            let g = epoly::gcd(&fbar_factors[i], &fbar_factors[j], &res)?;
            if epoly::deg(&g).unwrap_or(0) != 0 {
                return Err(AdelixError::NotCoprime);
            }
        }
    }
    if prod != fres {
        return Err(AdelixError::NotCoprime);
    }

    // peel factors off one at a time
    let mut out = Vec::with_capacity(fbar_factors.len());
    let mut rest = f;
    for (k, gbar) in fbar_factors.iter().enumerate() {
        if k + 1 == fbar_factors.len() {
            out.push(rest.clone());
            break;
        }
        // hbar = product of the remaining residue factors
        let mut hbar: Vec<Element> = vec![Element::one(&res)];
        for gb in &fbar_factors[k + 1..] {
            hbar = epoly::mul(&hbar, gb, &res)?;
        }
        let (g, h) = lift_pair(&rest, gbar, &hbar, local, &res)?;
        out.push(g);
        rest = h;
    }
    Ok(out)
}

/// Newton-lift a simple residue root of f to the working precision of a
/// PAdic/PAdicExt ring. `res_root` lives in the residue field and must satisfy
/// f(res_root) = 0, f'(res_root) != 0 there.
pub fn newton_root(f: &[Element], res_root: &Element, local: &Ring) -> Result<Element> {
    let res = residue_ring(local)?;
    if res_root.ring != res {
        return Err(AdelixError::DescriptorMismatch(format!(
            "root lives in {}, residue field is {}",
            res_root.ring, res
        )));
    }
    // sanity at the residue level
    let fres = reduce_poly(f, &res)?;
    let v0 = epoly::eval(&fres, res_root, &res)?;
    if !v0.is_zero() {
        return Err(AdelixError::Unsupported(
            "claimed residue root does not vanish".into(),
        ));
    }
    let dres = epoly::derivative(&fres, &res)?;
    let d0 = epoly::eval(&dres, res_root, &res)?;
    if d0.is_zero() {
        return Err(AdelixError::NotSquarefreeModP(
            "root is not simple mod p".into(),
        ));
    }
    let mut x = lift_poly(std::slice::from_ref(res_root), local)?
        .pop()
        .unwrap();
    let df = epoly::derivative(f, local)?;
    let prec = local.local_prec().unwrap();
    for _ in 0..(prec + 2) {
        let fx = epoly::eval(f, &x, local)?;
        if fx.is_zero() {
            break;
        }
        let dfx = epoly::eval(&df, &x, local)?;
        let step = fx.div(&dfx)?;
        x = x.sub(&step)?;
    }
    let fx = epoly::eval(f, &x, local)?;
    if !fx.is_zero() {
        return Err(AdelixError::PrecisionExhausted(
            "newton iteration did not reach working precision".into(),
        ));
    }
    Ok(x)
}

/// Weierstrass preparation of a two-dimensional local element with plus-side
/// support: y = W·U with W a monic distinguished polynomial (degree = residue
/// t-valuation, lower coefficients p-divisible) and U a unit power series.
/// The element must have p-valuation 0 and support bounded below by 0.
pub fn weierstrass_prepare(y: &Element) -> Result<(Vec<Element>, Element)> {
    let (coeff_ring, _window) = match &y.ring {
        Ring::TwoDimLocal { coeff, window, .. } => ((**coeff).clone(), *window),
        other => {
            return Err(AdelixError::Unsupported(format!(
                "weierstrass preparation on {other}"
            )))
        }
    };
    let s = y.as_series().unwrap();
    if s.coeffs.keys().next().map_or(true, |&e| e < 0) {
        return Err(AdelixError::Unsupported(
            "weierstrass preparation needs plus-side support".into(),
        ));
    }
    // residue t-valuation: smallest exponent whose coefficient is a p-adic unit
    let mut k: Option<i64> = None;
    for (e, c) in &s.coeffs {
        let l = c.as_local().unwrap();
        if !l.unit.is_empty() && l.val == 0 {
            k = Some(*e);
            break;
        }
    }
    let Some(k) = k else {
        return Err(AdelixError::NotAUnit(
            "element is p-divisible; not a unit of R{{t}}".into(),
        ));
    };
    if k == 0 {
        // already a unit series
        return Ok((vec![Element::one(&coeff_ring)], y.clone()));
    }
    // truncate to a polynomial Y of degree T and hensel-split Y = W * (unit part)
    let trunc_to = s
        .trunc
        .unwrap_or_else(|| s.coeffs.keys().next_back().map_or(k + 1, |&h| h + 1));
    let mut ycoeffs: Vec<Element> = Vec::new();
    for e in 0..trunc_to.max(k + 1) {
        ycoeffs.push(
            s.coeffs
                .get(&e)
                .cloned()
                .unwrap_or_else(|| Element::zero(&coeff_ring)),
        );
    }
    epoly::trim(&mut ycoeffs);
    // residue factorization: t^k * (cofactor with nonzero constant term)
    let res = residue_ring(&coeff_ring)?;
    let yres = reduce_poly(&ycoeffs, &res)?;
    let mut tk = vec![Element::zero(&res); k as usize + 1];
    tk[k as usize] = Element::one(&res);
    let (q, r) = epoly::divmod(&yres, &tk, &res)?;
    if !r.is_empty() {
        return Err(AdelixError::Unsupported(
            "residue series does not start with t^k as expected".into(),
        ));
    }
    // monicize the truncated polynomial is not possible in general (p-divisible
    // head); lift the pair (t^k, cofactor) with the monic factor first.
    let gbar = tk;
    let hbar = q;
    let dg = epoly::gcd(&gbar, &hbar, &res)?;
    if epoly::deg(&dg).unwrap_or(0) != 0 {
        return Err(AdelixError::NotSquarefreeModP(
            "residue unit part vanishes at t = 0".into(),
        ));
    }
    let (w, _u_poly) = lift_pair_nonmonic(&ycoeffs, &gbar, &hbar, &coeff_ring, &res)?;
    // U = y / W computed in the series ring (valid beyond the truncation degree)
    let w_series = Element::series(
        &y.ring,
        w.iter()
            .enumerate()
            .map(|(i, c)| (i as i64, c.clone()))
            .collect(),
        None,
    )?;
    let u = y.mul(&w_series.inv()?)?;
    Ok((w, u))
}

/// Two-factor lift where f need not be monic, but the first residue factor is
/// monic; f's leading coefficient may be p-divisible (series truncation head).
fn lift_pair_nonmonic(
    f: &[Element],
    gbar: &[Element],
    hbar: &[Element],
    local: &Ring,
    res: &Ring,
) -> Result<(Vec<Element>, Vec<Element>)> {
    let (d, _s, tt) = ext_gcd(gbar, hbar, res)?;
    if epoly::deg(&d) != Some(0) {
        return Err(AdelixError::NotCoprime);
    }
    let t_lift = lift_poly(&tt, local)?;
    let mut g = lift_poly(gbar, local)?;
    let mut h = lift_poly(hbar, local)?;
    let prec = local.local_prec().unwrap();
    let max_rounds = 2 * prec + 4;
    for _ in 0..max_rounds {
        let gh = epoly::mul(&g, &h, local)?;
        let e = epoly::sub(f, &gh, local)?;
        if poly_is_zero_at_precision(&e) {
            return Ok((g, h));
        }
        let te = epoly::mul(&t_lift, &e, local)?;
        let (_, r) = epoly::divmod(&te, &g, local)?;
        g = epoly::add(&g, &r, local)?;
        // g stays monic (the correction has lower degree); refresh h by division
        let (hq, _) = epoly::divmod(f, &g, local)?;
        h = hq;
    }
    let gh = epoly::mul(&g, &h, local)?;
    let e = epoly::sub(f, &gh, local)?;
    if poly_is_zero_at_precision(&e) {
        Ok((g, h))
    } else {
        Err(AdelixError::PrecisionExhausted(
            "weierstrass hensel iteration did not converge".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn padic_poly(ring: &Ring, coeffs: &[i64]) -> Vec<Element> {
        coeffs
            .iter()
            .map(|&c| Element::from_int(ring, c))
            .collect()
    }

    #[test]
    fn lift_t2_minus_2_mod_343() {
        // oracle: 108^2 = 11664 = 34*343 + 2, so 108 is the lift of 3
        let local = Ring::padic(7, 3).unwrap();
        let res = Ring::prime_field(7).unwrap();
        let f = padic_poly(&local, &[-2, 0, 1]);
        let fb1 = vec![Element::from_int(&res, -3), Element::one(&res)];
        let fb2 = vec![Element::from_int(&res, -4), Element::one(&res)];
        let lifted = hensel_factor(&f, &[fb1, fb2], &local).unwrap();
        assert_eq!(lifted.len(), 2);
        let roots: Vec<BigInt> = lifted
            .iter()
            .map(|g| {
                // root = -constant term
                let c = g[0].neg();
                let l = c.as_local().unwrap();
                l.unit[0].clone() * BigInt::from(7).pow(l.val as u32)
            })
            .collect();
        assert!(roots.contains(&BigInt::from(108)));
        assert!(roots.contains(&BigInt::from(235)));
        // product reproduces f at precision
        let prod = epoly::mul(&lifted[0], &lifted[1], &local).unwrap();
        let diff = epoly::sub(&f, &prod, &local).unwrap();
        assert!(diff.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn already_split_is_fixed() {
        let local = Ring::padic(5, 4).unwrap();
        let res = Ring::prime_field(5).unwrap();
        // f = t(t-1)
        let f = padic_poly(&local, &[0, -1, 1]);
        let fb1 = vec![Element::zero(&res), Element::one(&res)];
        let fb2 = vec![Element::from_int(&res, -1), Element::one(&res)];
        let lifted = hensel_factor(&f, &[fb1, fb2], &local).unwrap();
        assert_eq!(lifted[0], padic_poly(&local, &[0, 1]));
        assert_eq!(lifted[1], padic_poly(&local, &[-1, 1]));
    }

    #[test]
    fn ramified_rejected() {
        let local = Ring::padic(5, 4).unwrap();
        let res = Ring::prime_field(5).unwrap();
        // f = t^2 - 5, fbar = t^2
        let f = padic_poly(&local, &[-5, 0, 1]);
        let fb = vec![Element::zero(&res), Element::zero(&res), Element::one(&res)];
        let err = hensel_factor(&f, &[fb], &local).unwrap_err();
        assert!(matches!(err, AdelixError::NotSquarefreeModP(_)));
    }

    #[test]
    fn newton_sqrt2_in_z7() {
        let local = Ring::padic(7, 4).unwrap();
        let res = Ring::prime_field(7).unwrap();
        let f = padic_poly(&local, &[-2, 0, 1]);
        let r = newton_root(&f, &Element::from_int(&res, 3), &local).unwrap();
        let sq = r.mul(&r).unwrap();
        assert!(sq.agrees_with(&Element::from_int(&local, 2)));
    }
}
