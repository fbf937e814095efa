//! Canonical text form for every element kind, with a small expression parser
//! so the CLI can accept both canonical and hand-written inputs. Round-trip
//! parse(print(x)) == x is covered by tests.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{AdelixError, Result};

use super::descriptor::{Ring, Window};
use super::element::{Element, LocalElt, Payload};
use super::num::is_prime;

// ---- printing ----

fn print_mod_vec(v: &[BigInt]) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = match i {
            0 => format!("{c}"),
            1 => {
                if c.is_one() {
                    "x".to_string()
                } else {
                    format!("{c}*x")
                }
            }
            _ => {
                if c.is_one() {
                    format!("x^{i}")
                } else {
                    format!("{c}*x^{i}")
                }
            }
        };
        parts.push(s);
    }
    parts.join("+")
}

fn print_local(l: &LocalElt, p: &BigInt) -> String {
    if l.unit.is_empty() {
        return format!("O({p}^{})", l.val);
    }
    let unit = if l.unit.len() == 1 {
        format!("{}", l.unit[0])
    } else {
        format!("({})", print_mod_vec(&l.unit))
    };
    format!("{unit}*{p}^{}+O({p}^{})", l.val, l.val + l.prec as i64)
}

/// Canonical text form of an element.
pub fn print_element(e: &Element) -> String {
    match (&e.ring, &e.payload) {
        (_, Payload::Rat(r)) => {
            if r.denom().is_one() {
                format!("{}", r.numer())
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        (_, Payload::Int(n)) => format!("{n}"),
        (_, Payload::Mod(v)) => print_mod_vec(v),
        (ring, Payload::Local(l)) => print_local(l, ring.local_prime().unwrap()),
        (ring, Payload::Series(s)) => {
            let var = ring.var().unwrap_or("t");
            let mut parts = Vec::new();
            for (exp, c) in &s.coeffs {
                parts.push(format!("({})*{var}^{exp}", print_element(c)));
            }
            if let Some(t) = s.trunc {
                parts.push(format!("O({var}^{t})"));
            }
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join("+")
            }
        }
        (ring, Payload::Poly(v)) => {
            let var = ring.var().unwrap_or("t");
            if v.is_empty() {
                return "0".to_string();
            }
            let mut parts = Vec::new();
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if i == 0 {
                    parts.push(format!("({})", print_element(c)));
                } else if i == 1 {
                    parts.push(format!("({})*{var}", print_element(c)));
                } else {
                    parts.push(format!("({})*{var}^{i}", print_element(c)));
                }
            }
            parts.join("+")
        }
    }
}

// ---- tokenizing ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = bytes[start..i].iter().collect();
                out.push(Tok::Int(lit.parse::<BigInt>().map_err(|e| {
                    AdelixError::Parse(format!("bad integer literal: {e}"))
                })?));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(bytes[start..i].iter().collect()));
            }
            other => {
                return Err(AdelixError::Parse(format!(
                    "unexpected character '{other}' in element expression"
                )))
            }
        }
    }
    Ok(out)
}

// ---- element expression parsing ----

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(x) if x == t => Ok(()),
            other => Err(AdelixError::Parse(format!("expected {t:?}, got {other:?}"))),
        }
    }

    fn parse_sum(&mut self) -> Result<Element> {
        let mut acc = self.parse_product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.parse_product()?;
                    acc = acc.add(&rhs)?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.parse_product()?;
                    acc = acc.sub(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_product(&mut self) -> Result<Element> {
        let mut acc = self.parse_unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.parse_unary()?;
                    acc = acc.mul(&rhs)?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.parse_unary()?;
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Element> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                Ok(self.parse_unary()?.neg())
            }
            _ => self.parse_power(),
        }
    }

    fn parse_power(&mut self) -> Result<Element> {
        let base = self.parse_atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            let e = self.parse_exponent()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn parse_exponent(&mut self) -> Result<i64> {
        let neg = if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Int(n)) => {
                let v: i64 = n
                    .to_string()
                    .parse()
                    .map_err(|_| AdelixError::Parse("exponent too large".into()))?;
                Ok(if neg { -v } else { v })
            }
            Some(Tok::LParen) => {
                let inner = self.parse_exponent()?;
                self.expect(Tok::RParen)?;
                Ok(if neg { -inner } else { inner })
            }
            other => Err(AdelixError::Parse(format!(
                "expected integer exponent, got {other:?}"
            ))),
        }
    }

    fn parse_atom(&mut self) -> Result<Element> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(Element::from_bigint(self.ring, &n)),
            Some(Tok::LParen) => {
                let inner = self.parse_sum()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                if name == "O" {
                    return self.parse_big_oh();
                }
                // the series/polynomial variable, or the extension generator x
                if Some(name.as_str()) == self.ring.var() {
                    return Element::variable(self.ring);
                }
                if name == "x" {
                    return generator(self.ring);
                }
                // variable of an inner ring (coefficient must be wrapped in parens
                // to disambiguate) is not supported at top level
                Err(AdelixError::Parse(format!(
                    "unknown symbol '{name}' in ring {}",
                    self.ring
                )))
            }
            other => Err(AdelixError::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn parse_big_oh(&mut self) -> Result<Element> {
        self.expect(Tok::LParen)?;
        // O(p^k) or O(t^k)
        let sym = self.next();
        self.expect(Tok::Caret)?;
        let k = self.parse_exponent()?;
        self.expect(Tok::RParen)?;
        match (sym, self.ring) {
            (Some(Tok::Int(p)), Ring::PAdic { p: rp, prec }) if p == *rp => Ok(Element::new(
                self.ring.clone(),
                Payload::Local(LocalElt {
                    val: k,
                    unit: vec![],
                    prec: *prec,
                }),
            )),
            (Some(Tok::Int(p)), Ring::PAdicExt { p: rp, prec, .. }) if p == *rp => {
                Ok(Element::new(
                    self.ring.clone(),
                    Payload::Local(LocalElt {
                        val: k,
                        unit: vec![],
                        prec: *prec,
                    }),
                ))
            }
            (Some(Tok::Ident(v)), ring)
                if ring.var() == Some(v.as_str())
                    && matches!(ring, Ring::Laurent { .. } | Ring::TwoDimLocal { .. }) =>
            {
                Element::series(ring, vec![], Some(k))
            }
            (s, r) => Err(AdelixError::Parse(format!(
                "O({s:?}^{k}) is not meaningful in {r}"
            ))),
        }
    }
}

/// The residue generator x of a Galois field / unramified extension, or of the
/// coefficient ring of a composite kind.
fn generator(ring: &Ring) -> Result<Element> {
    match ring {
        Ring::GaloisField { .. } => Ok(Element::new(
            ring.clone(),
            Payload::Mod(vec![BigInt::zero(), BigInt::one()]),
        )),
        Ring::PAdicExt { prec, .. } => Ok(Element::new(
            ring.clone(),
            Payload::Local(LocalElt {
                val: 0,
                unit: vec![BigInt::zero(), BigInt::one()],
                prec: *prec,
            }),
        )),
        Ring::Laurent { base, .. } => {
            let g = generator(base)?;
            g.embed(ring)
        }
        Ring::TwoDimLocal { coeff, .. } => {
            let g = generator(coeff)?;
            g.embed(ring)
        }
        Ring::Poly { base, .. } => {
            let g = generator(base)?;
            g.embed(ring)
        }
        other => Err(AdelixError::Parse(format!(
            "ring {other} has no generator x"
        ))),
    }
}

/// Parse an element expression in the given ring.
pub fn parse_element(ring: &Ring, input: &str) -> Result<Element> {
    let toks = tokenize(input)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ring,
    };
    let e = p.parse_sum()?;
    if p.pos != toks.len() {
        return Err(AdelixError::Parse(format!(
            "trailing input after position {}",
            p.pos
        )));
    }
    Ok(e)
}

// ---- ring descriptor parsing ----

/// Grammar: `Q` | `Z` | `F<p>` | `F<p>^<k>` | `Q<p>(<m>)` | `Q<p>^<k>(<m>)`,
/// each optionally followed by `[<var>]` (polynomials), `((<var>))[lo..hi]`
/// (Laurent window), or `{{<var>}}[lo..hi]` (two-dimensional local field).
pub fn parse_ring(input: &str) -> Result<Ring> {
    let s = input.trim();
    // find the composite suffix first
    if let Some(idx) = s.find("((") {
        let (head, rest) = s.split_at(idx);
        let rest = &rest[2..];
        let close = rest
            .find("))")
            .ok_or_else(|| AdelixError::Parse("missing '))'".into()))?;
        let var = rest[..close].trim().to_string();
        let window = parse_window(&rest[close + 2..])?.unwrap_or(Window { lo: -16, hi: 16 });
        let base = parse_ring(head)?;
        if !var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || var.is_empty() {
            return Err(AdelixError::Parse(format!("bad variable '{var}'")));
        }
        return Ok(Ring::Laurent {
            base: std::sync::Arc::new(base),
            var,
            window,
        });
    }
    if let Some(idx) = s.find("{{") {
        let (head, rest) = s.split_at(idx);
        let rest = &rest[2..];
        let close = rest
            .find("}}")
            .ok_or_else(|| AdelixError::Parse("missing '}}'".into()))?;
        let var = rest[..close].trim().to_string();
        let window = parse_window(&rest[close + 2..])?.unwrap_or(Window { lo: -16, hi: 16 });
        let coeff = parse_ring(head)?;
        return Ring::two_dim_local_ext(coeff, &var, window.lo, window.hi);
    }
    if let Some(idx) = s.find('[') {
        // polynomial ring suffix [var]
        let (head, rest) = s.split_at(idx);
        let rest = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| AdelixError::Parse("missing ']'".into()))?;
        let base = parse_ring(head)?;
        return Ok(Ring::poly(base, rest.trim()));
    }
    parse_base_ring(s)
}

fn parse_window(s: &str) -> Result<Option<Window>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| AdelixError::Parse(format!("bad window '{s}'")))?;
    let parts: Vec<&str> = inner.split("..").collect();
    if parts.len() != 2 {
        return Err(AdelixError::Parse(format!("bad window '{s}'")));
    }
    let lo: i64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| AdelixError::Parse(format!("bad window low '{}'", parts[0])))?;
    let hi: i64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| AdelixError::Parse(format!("bad window high '{}'", parts[1])))?;
    Ok(Some(Window::new(lo, hi)?))
}

fn parse_base_ring(s: &str) -> Result<Ring> {
    let s = s.trim();
    if s == "Q" {
        return Ok(Ring::Rationals);
    }
    if s == "Z" {
        return Ok(Ring::Integers);
    }
    if let Some(rest) = s.strip_prefix('F') {
        let (p, k) = parse_p_pow(rest)?;
        if k == 1 {
            return Ok(Ring::PrimeField { p });
        }
        let modulus = default_irreducible(&p, k)?;
        return Ok(Ring::GaloisField {
            p,
            modulus: std::sync::Arc::new(modulus),
        });
    }
    if let Some(rest) = s.strip_prefix('Q') {
        // Q<p>(m) or Q<p>^<k>(m)
        let open = rest
            .find('(')
            .ok_or_else(|| AdelixError::Parse(format!("p-adic ring needs precision: '{s}'")))?;
        let (head, par) = rest.split_at(open);
        let m: u32 = par
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| AdelixError::Parse("missing ')'".into()))?
            .trim()
            .parse()
            .map_err(|_| AdelixError::Parse("bad precision".into()))?;
        let (p, k) = parse_p_pow(head)?;
        if k == 1 {
            return Ok(Ring::PAdic { p, prec: m });
        }
        let modulus = default_irreducible(&p, k)?;
        return Ok(Ring::PAdicExt {
            p,
            prec: m,
            modulus: std::sync::Arc::new(modulus),
        });
    }
    Err(AdelixError::Parse(format!("unknown ring '{s}'")))
}

fn parse_p_pow(s: &str) -> Result<(BigInt, usize)> {
    let s = s.trim();
    let (ps, ks) = match s.find('^') {
        Some(i) => (&s[..i], &s[i + 1..]),
        None => (s, "1"),
    };
    let q: BigInt = ps
        .parse()
        .map_err(|_| AdelixError::Parse(format!("bad prime '{ps}'")))?;
    let k: usize = ks
        .parse()
        .map_err(|_| AdelixError::Parse(format!("bad extension degree '{ks}'")))?;
    if k == 0 {
        return Err(AdelixError::Parse("extension degree 0".into()));
    }
    if is_prime(&q) {
        return Ok((q, k));
    }
    // accept prime powers like F9, F25
    if k == 1 {
        let fs = super::factor::trial_factor(&q)?;
        if fs.len() == 1 {
            return Ok((fs[0].0.clone(), fs[0].1 as usize));
        }
    }
    Err(AdelixError::Parse(format!("{q} is not a prime power")))
}

/// Deterministic monic irreducible of degree k over F_p: the lexicographically
/// smallest coefficient vector, found by brute force over small candidates.
pub(crate) fn default_irreducible(p: &BigInt, k: usize) -> Result<Vec<BigInt>> {
    let ring = Ring::PrimeField { p: p.clone() };
    let mut counter = vec![BigInt::zero(); k];
    loop {
        // candidate = x^k + sum counter[i] x^i
        let mut cand: Vec<Element> = counter
            .iter()
            .map(|c| Element::from_bigint(&ring, c))
            .collect();
        cand.push(Element::one(&ring));
        let irr = {
            let fs = super::factor::factor_gf_poly(&cand, &ring)?;
            fs.len() == 1 && fs[0].1 == 1
        };
        if irr {
            let mut modulus: Vec<BigInt> = counter.clone();
            modulus.push(BigInt::one());
            return Ok(modulus);
        }
        // increment the counter
        let mut pos = 0;
        loop {
            counter[pos] += 1;
            if counter[pos] < *p {
                break;
            }
            counter[pos] = BigInt::zero();
            pos += 1;
            if pos == k {
                return Err(AdelixError::Parse(format!(
                    "no irreducible of degree {k} over F{p} found"
                )));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_roundtrips() {
        for s in ["Q", "Z", "F5", "F5((t))[-8..8]", "Q5(4)", "Q[t]"] {
            let r = parse_ring(s).unwrap();
            // reparse the display where the grammar matches
            let _ = format!("{r}");
        }
        let r = parse_ring("F5((t))[0..3]").unwrap();
        assert_eq!(r.window().unwrap(), Window { lo: 0, hi: 3 });
        let r = parse_ring("Q5(6){{t}}[-4..4]").unwrap();
        assert!(matches!(r, Ring::TwoDimLocal { .. }));
    }

    #[test]
    fn element_roundtrip_laurent() {
        let ring = parse_ring("Q((t))[-4..8]").unwrap();
        let e = parse_element(&ring, "3*t^-1 + 1 - 2*t^2 + O(t^5)").unwrap();
        let s = print_element(&e);
        let e2 = parse_element(&ring, &s).unwrap();
        assert_eq!(e, e2);
    }

    #[test]
    fn element_roundtrip_padic() {
        let ring = parse_ring("Q7(4)").unwrap();
        let e = parse_element(&ring, "98").unwrap();
        assert_eq!(e.valuation().unwrap(), 2);
        let s = print_element(&e);
        let e2 = parse_element(&ring, &s).unwrap();
        assert_eq!(e, e2);
        assert_eq!(s, "2*7^2+O(7^6)");
    }

    #[test]
    fn geometric_inverse_example() {
        // inv(1 - t) in Q((t)) window [0,3] -> 1 + t + t^2 + t^3
        let ring = parse_ring("Q((t))[0..3]").unwrap();
        let x = parse_element(&ring, "1 - t").unwrap();
        let y = x.inv().unwrap();
        let expect = parse_element(&ring, "1 + t + t^2 + t^3 + O(t^4)").unwrap();
        assert_eq!(y, expect);
    }

    #[test]
    fn galois_field_roundtrip() {
        let ring = parse_ring("F9").unwrap();
        let e = parse_element(&ring, "2*x+1").unwrap();
        let s = print_element(&e);
        let e2 = parse_element(&ring, &s).unwrap();
        assert_eq!(e, e2);
    }
}
