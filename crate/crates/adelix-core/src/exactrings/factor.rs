//! Polynomial factorization: Berlekamp over finite fields, and Zassenhaus-style
//! factorization of primitive integer polynomials (mod-p factor, Hensel lift,
//! subset recombination). Degrees here are small, so the simple variants win.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{AdelixError, Result};

use super::descriptor::Ring;
use super::element::Element;
use super::epoly;
use super::hensel::hensel_factor;
use super::num::is_prime;
use super::poly::Polynomial;

/// Enumerate all elements of a finite field descriptor.
fn field_elements(ring: &Ring) -> Result<Vec<Element>> {
    match ring {
        Ring::PrimeField { p } => {
            let mut out = Vec::new();
            let mut i = BigInt::zero();
            while &i < p {
                out.push(Element::from_bigint(ring, &i));
                i += 1;
            }
            Ok(out)
        }
        Ring::GaloisField { p, modulus } => {
            let k = modulus.len() - 1;
            let mut out = vec![Element::zero(ring)];
            // counter in base p over k digits
            let mut digits = vec![BigInt::zero(); k];
            loop {
                // increment
                let mut pos = 0;
                loop {
                    digits[pos] += 1;
                    if digits[pos] < *p {
                        break;
                    }
                    digits[pos] = BigInt::zero();
                    pos += 1;
                    if pos == k {
                        return Ok(out);
                    }
                }
                let mut v = digits.clone();
                super::element::modpoly_trim(&mut v);
                out.push(Element::new(ring.clone(), super::element::Payload::Mod(v)));
            }
        }
        other => Err(AdelixError::Unsupported(format!(
            "cannot enumerate {other}"
        ))),
    }
}

fn field_order(ring: &Ring) -> BigInt {
    match ring {
        Ring::PrimeField { p } => p.clone(),
        Ring::GaloisField { p, modulus } => p.pow((modulus.len() - 1) as u32),
        _ => unreachable!(),
    }
}

/// Berlekamp factorization of a squarefree monic polynomial over a finite field.
fn berlekamp_squarefree(f: &[Element], ring: &Ring) -> Result<Vec<Vec<Element>>> {
    let n = epoly::deg(f).unwrap();
    if n <= 1 {
        return Ok(vec![f.to_vec()]);
    }
    let q = field_order(ring);
    // matrix of Frobenius - id on basis 1, t, ..., t^(n-1)
    let t = vec![Element::zero(ring), Element::one(ring)];
    let tq = epoly::pow_mod(&t, &q, f, ring)?;
    // powers of t^q mod f
    let mut rows: Vec<Vec<Element>> = Vec::with_capacity(n);
    let mut cur = vec![Element::one(ring)];
    for i in 0..n {
        let mut row: Vec<Element> = (0..n)
            .map(|j| cur.get(j).cloned().unwrap_or_else(|| Element::zero(ring)))
            .collect();
        // subtract identity
        row[i] = row[i].sub(&Element::one(ring))?;
        rows.push(row);
        if i + 1 < n {
            cur = epoly::divmod(&epoly::mul(&cur, &tq, ring)?, f, ring)?.1;
        }
    }
    // kernel vectors h with h^q = h mod f: solve v * M = 0 i.e. M^T v = 0
    let mt: Vec<Vec<Element>> = (0..n)
        .map(|j| (0..n).map(|i| rows[i][j].clone()).collect())
        .collect();
    let kernel = super::linalg::kernel_basis(&mt, n, ring)?;
    if kernel.len() <= 1 {
        return Ok(vec![f.to_vec()]);
    }
    // pick a non-constant kernel polynomial and split by gcd(f, h - c)
    let h = kernel
        .iter()
        .map(|v| {
            let mut p = v.clone();
            epoly::trim(&mut p);
            p
        })
        .find(|p| p.len() > 1)
        .expect("kernel of dim > 1 contains a non-constant element");
    let mut pieces: Vec<Vec<Element>> = vec![f.to_vec()];
    for c in field_elements(ring)? {
        let mut hc = h.clone();
        if hc.is_empty() {
            hc.push(c.neg());
        } else {
            hc[0] = hc[0].sub(&c)?;
        }
        let mut next: Vec<Vec<Element>> = Vec::new();
        for piece in pieces {
            if epoly::deg(&piece).unwrap_or(0) <= 1 {
                next.push(piece);
                continue;
            }
            let g = epoly::gcd(&piece, &hc, ring)?;
            let dg = epoly::deg(&g).unwrap_or(0);
            if dg == 0 || dg == epoly::deg(&piece).unwrap() {
                next.push(piece);
            } else {
                let (qt, _) = epoly::divmod(&piece, &g, ring)?;
                next.push(g);
                next.push(epoly::make_monic(&qt)?);
            }
        }
        pieces = next;
        if pieces.len() == kernel.len() {
            break;
        }
    }
    // recurse on pieces that may still be composite
    if pieces.len() == 1 {
        return Ok(pieces);
    }
    let mut out = Vec::new();
    for p in pieces {
        out.extend(berlekamp_squarefree(&p, ring)?);
    }
    Ok(out)
}

/// Full factorization of a nonzero polynomial over a finite field; returns
/// monic irreducible factors with multiplicities (leading unit dropped).
pub fn factor_gf_poly(f: &[Element], ring: &Ring) -> Result<Vec<(Vec<Element>, u32)>> {
    let mut f = f.to_vec();
    epoly::trim(&mut f);
    if f.is_empty() {
        return Err(AdelixError::NotAUnit("factoring zero".into()));
    }
    let f = epoly::make_monic(&f)?;
    if epoly::deg(&f).unwrap() == 0 {
        return Ok(vec![]);
    }
    let p: BigInt = ring.local_prime().unwrap().clone();
    let fp = epoly::derivative(&f, ring)?;
    if fp.is_empty() {
        // f = h(t^p); extract the p-th root via the inverse Frobenius on coefficients
        let q = field_order(ring);
        let step = p.to_u64_digits().1.first().copied().unwrap_or(0) as usize;
        let mut h: Vec<Element> = Vec::new();
        for (i, c) in f.iter().enumerate() {
            if i % step == 0 {
                // c^(q/p) is the p-th root in F_q
                let e = &q / &p;
                h.push(pow_elt(c, &e)?);
            } else if !c.is_zero() {
                return Err(AdelixError::Unsupported(
                    "inseparable polynomial with mixed support".into(),
                ));
            }
        }
        let sub = factor_gf_poly(&h, ring)?;
        let pm = step as u32;
        return Ok(sub.into_iter().map(|(g, m)| (g, m * pm)).collect());
    }
    let g = epoly::gcd(&f, &fp, ring)?;
    let squarefree = if epoly::deg(&g).unwrap_or(0) == 0 {
        f.clone()
    } else {
        epoly::make_monic(&epoly::divmod(&f, &g, ring)?.0)?
    };
    let irreducibles = berlekamp_squarefree(&squarefree, ring)?;
    let mut out = Vec::new();
    for irr in irreducibles {
        // multiplicity in f
        let mut m = 0u32;
        let mut cur = f.clone();
        loop {
            let (qt, rem) = epoly::divmod(&cur, &irr, ring)?;
            if !rem.is_empty() {
                break;
            }
            m += 1;
            cur = qt;
        }
        out.push((irr, m));
    }
    out.sort_by_key(|(g, _)| {
        (
            g.len(),
            g.iter()
                .map(|c| format!("{:?}", c.payload))
                .collect::<Vec<_>>(),
        )
    });
    Ok(out)
}

fn pow_elt(c: &Element, e: &BigInt) -> Result<Element> {
    let mut acc = Element::one(&c.ring);
    let mut b = c.clone();
    let mut e = e.clone();
    let two = BigInt::from(2);
    while !e.is_zero() {
        if (&e % &two).is_one() {
            acc = acc.mul(&b)?;
        }
        e /= &two;
        if !e.is_zero() {
            b = b.mul(&b)?;
        }
    }
    Ok(acc)
}

/// Factor an integer polynomial mod p into monic irreducibles over F_p,
/// returned with integer representative coefficients in [0, p).
pub fn factor_fp_poly(f: &Polynomial, p: &BigInt) -> Result<Vec<(Polynomial, u32)>> {
    let ring = Ring::PrimeField { p: p.clone() };
    let fe: Vec<Element> = f
        .coeffs
        .iter()
        .map(|c| Element::from_bigint(&ring, c))
        .collect();
    let mut fe = fe;
    epoly::trim(&mut fe);
    if fe.is_empty() {
        return Err(AdelixError::NotAUnit("polynomial vanishes mod p".into()));
    }
    let factors = factor_gf_poly(&fe, &ring)?;
    Ok(factors
        .into_iter()
        .map(|(g, m)| {
            let coeffs: Vec<BigInt> = g
                .iter()
                .map(|c| {
                    c.as_mod()
                        .map(|v| v.first().cloned().unwrap_or_else(BigInt::zero))
                        .unwrap_or_else(BigInt::zero)
                })
                .collect();
            (Polynomial::new(coeffs), m)
        })
        .collect())
}

/// Trial-division factorization of a nonzero integer.
pub fn trial_factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(AdelixError::NotAUnit("factoring zero".into()));
    }
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let bound = BigInt::from(1_000_000u64);
    while &d * &d <= n && d <= bound {
        if (&n % &d).is_zero() {
            let mut m = 0u32;
            while (&n % &d).is_zero() {
                n /= &d;
                m += 1;
            }
            out.push((d.clone(), m));
        }
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        if is_prime(&n) {
            out.push((n, 1));
        } else {
            return Err(AdelixError::Unsupported(format!(
                "composite cofactor {n} beyond the trial-division bound"
            )));
        }
    }
    Ok(out)
}

/// Factor a primitive integer polynomial into primitive irreducible factors
/// with positive leading coefficients, with multiplicities.
pub fn factor_primitive_zpoly(f: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    let (_, f) = f.primitive();
    let n = match f.degree() {
        None => return Err(AdelixError::NotAUnit("factoring zero".into())),
        Some(0) => return Ok(vec![]),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(vec![(f, 1)]);
    }
    // squarefree part over Q
    let qring = Ring::Rationals;
    let fq: Vec<Element> = f
        .coeffs
        .iter()
        .map(|c| Element::from_bigint(&qring, c))
        .collect();
    let fpq = epoly::derivative(&fq, &qring)?;
    let g = epoly::gcd(&fq, &fpq, &qring)?;
    if epoly::deg(&g).unwrap_or(0) > 0 {
        let (sq, _) = epoly::divmod(&fq, &g, &qring)?;
        let sq_poly = rat_poly_to_primitive(&sq);
        let factors = factor_primitive_zpoly(&sq_poly)?;
        let mut out = Vec::new();
        for (irr, _) in factors {
            let m = f.multiplicity_of(&irr);
            out.push((irr, m));
        }
        return Ok(out);
    }
    // squarefree: pick a good prime
    let lead = f.leading().unwrap().clone();
    let mut p = BigInt::from(3);
    let pring;
    loop {
        while !is_prime(&p) {
            p += 2;
        }
        if !(&lead % &p).is_zero() {
            let r = Ring::PrimeField { p: p.clone() };
            let fe: Vec<Element> = f
                .coeffs
                .iter()
                .map(|c| Element::from_bigint(&r, c))
                .collect();
            let d = epoly::derivative(&fe, &r)?;
            let gc = epoly::gcd(&fe, &d, &r)?;
            if epoly::deg(&gc).unwrap_or(0) == 0 && !d.is_empty() {
                pring = r;
                break;
            }
        }
        p += 2;
    }
    // factor mod p
    let mod_factors = factor_fp_poly(&f, &p)?;
    if mod_factors.len() == 1 {
        return Ok(vec![(f, 1)]);
    }
    // Hensel precision: p^B > 2 * candidate coefficient bound
    let height = f.height();
    let bound: BigInt = (BigInt::one() << (n + 2)) * &height * lead.abs() * BigInt::from(n as i64 + 1);
    let mut b: u32 = 1;
    let mut pb = p.clone();
    let two_bound = BigInt::from(2) * &bound;
    while pb <= two_bound {
        pb *= &p;
        b += 1;
    }
    let padic = Ring::padic(
        p.to_string().parse::<i64>().map_err(|_| {
            AdelixError::Unsupported("factorization prime exceeds i64".into())
        })?,
        b,
    )?;
    // monicize mod p^B
    let lead_inv = Element::from_bigint(&padic, &lead).inv()?;
    let f_monic: Vec<Element> = f
        .coeffs
        .iter()
        .map(|c| Element::from_bigint(&padic, c).mul(&lead_inv))
        .collect::<Result<Vec<_>>>()?;
    let fbar: Vec<Vec<Element>> = mod_factors
        .iter()
        .map(|(g, _)| {
            g.coeffs
                .iter()
                .map(|c| Element::from_bigint(&pring, c))
                .collect()
        })
        .collect();
    let lifted = hensel_factor(&f_monic, &fbar, &padic)?;
    // subset recombination
    let k = lifted.len();
    let mut used = vec![false; k];
    let mut remaining = f.clone();
    let mut out: Vec<(Polynomial, u32)> = Vec::new();
    let pb_big = p.pow(b);
    for size in 1..=k {
        if used.iter().all(|&u| u) {
            break;
        }
        let idxs: Vec<usize> = (0..k).collect();
        for subset in subsets_of_size(&idxs, size) {
            if subset.iter().any(|&i| used[i]) {
                continue;
            }
            // candidate = lead * prod of lifted factors, coefficients in symmetric range
            let mut prod: Vec<Element> = vec![Element::one(&padic)];
            for &i in &subset {
                prod = epoly::mul(&prod, &lifted[i], &padic)?;
            }
            let lead_now = remaining.leading().unwrap().clone();
            let cand_coeffs: Vec<BigInt> = prod
                .iter()
                .map(|c| {
                    plain_rep(c, &p, b).map(|x| {
                        let mut y = (x * &lead_now).mod_floor(&pb_big);
                        if &y * BigInt::from(2) > pb_big {
                            y -= &pb_big;
                        }
                        y
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut cand = Polynomial::new(cand_coeffs);
            let (_, cprim) = cand.primitive();
            cand = cprim;
            if cand.degree().unwrap_or(0) == 0 {
                continue;
            }
            if remaining.divides(&cand) {
                for &i in &subset {
                    used[i] = true;
                }
                let (q, _) = remaining.divmod_rat(&cand);
                let mut den = BigInt::one();
                for c in &q {
                    den = den.lcm(c.denom());
                }
                let qi: Vec<BigInt> = q
                    .iter()
                    .map(|c| (c * num_rational::BigRational::from(den.clone())).to_integer())
                    .collect();
                remaining = Polynomial::new(qi).primitive().1;
                out.push((cand, 1));
            }
        }
    }
    if remaining.degree().unwrap_or(0) > 0 {
        out.push((remaining, 1));
    }
    out.sort();
    Ok(out)
}

fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    if size > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // next combination
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn plain_rep(c: &Element, p: &BigInt, b: u32) -> Result<BigInt> {
    let l = c.as_local().unwrap();
    if l.unit.is_empty() {
        return Ok(BigInt::zero());
    }
    if l.val < 0 {
        return Err(AdelixError::Unsupported(
            "negative valuation in recombination candidate".into(),
        ));
    }
    let keep = (b as i64 - l.val).max(0) as u32;
    let pk = p.pow(keep);
    let u = l.unit[0].mod_floor(&pk);
    Ok(u * p.pow(l.val as u32))
}

fn rat_poly_to_primitive(q: &[Element]) -> Polynomial {
    let mut den = BigInt::one();
    for c in q {
        den = den.lcm(c.as_rational().unwrap().denom());
    }
    let coeffs: Vec<BigInt> = q
        .iter()
        .map(|c| (c.as_rational().unwrap() * num_rational::BigRational::from(den.clone())).to_integer())
        .collect();
    Polynomial::new(coeffs).primitive().1
}

/// Is a primitive integer polynomial irreducible over Q?
pub fn is_irreducible_z(f: &Polynomial) -> Result<bool> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let fs = factor_primitive_zpoly(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_factor_quadratic() {
        // t^2 - 2 = (t-3)(t-4) mod 7
        let f = Polynomial::from_i64(&[-2, 0, 1]);
        let fs = factor_fp_poly(&f, &BigInt::from(7)).unwrap();
        assert_eq!(fs.len(), 2);
        let roots: Vec<i64> = fs
            .iter()
            .map(|(g, _)| {
                use num_traits::ToPrimitive;
                (-g.coeffs[0].clone()).mod_floor(&BigInt::from(7)).to_i64().unwrap()
            })
            .collect();
        let mut roots = roots;
        roots.sort();
        assert_eq!(roots, vec![3, 4]);
    }

    #[test]
    fn fp_factor_irreducible() {
        // t^2 - 2 is irreducible mod 5
        let f = Polynomial::from_i64(&[-2, 0, 1]);
        let fs = factor_fp_poly(&f, &BigInt::from(5)).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0.degree(), Some(2));
    }

    #[test]
    fn z_factor_product() {
        // (t^2+1)(t-2)^2
        let f = Polynomial::from_i64(&[1, 0, 1]).mul(&Polynomial::from_i64(&[-2, 1]).pow(2));
        let fs = factor_primitive_zpoly(&f).unwrap();
        assert_eq!(fs.len(), 2);
        let mut found_quad = false;
        let mut found_lin = false;
        for (g, m) in fs {
            if g.degree() == Some(2) {
                assert_eq!(m, 1);
                found_quad = true;
            }
            if g.degree() == Some(1) {
                assert_eq!(m, 2);
                found_lin = true;
            }
        }
        assert!(found_quad && found_lin);
    }

    #[test]
    fn z_irreducible() {
        assert!(is_irreducible_z(&Polynomial::from_i64(&[-2, 0, 1])).unwrap());
        assert!(!is_irreducible_z(&Polynomial::from_i64(&[-1, 0, 1])).unwrap());
    }
}
