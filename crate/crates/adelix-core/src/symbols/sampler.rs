//! Deterministic sample streams for property checks. A tiny splitmix64 keeps
//! the library free of RNG dependencies while giving byte-stable runs per seed.

use num_bigint::BigInt;

use crate::error::Result;
use crate::exactrings::{Element, Ring};

#[derive(Debug, Clone)]
pub struct Sampler {
    state: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            state: seed ^ 0x9e3779b97f4a7c15,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, n).
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    /// Uniform in [lo, hi] inclusive.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// Small signed integer of |value| <= height, nonzero when `nonzero`.
    pub fn small_int(&mut self, height: i64, nonzero: bool) -> BigInt {
        loop {
            let v = self.range_i64(-height, height);
            if !nonzero || v != 0 {
                return BigInt::from(v);
            }
        }
    }
}

/// A declared unit of the given ring, built from bounded random data. Units of
/// series rings get a random valuation, a unit leading coefficient, and a few
/// higher terms; two-dimensional units also get a p-divisible mixed tail.
pub fn sample_unit(ring: &Ring, rng: &mut Sampler) -> Result<Element> {
    match ring {
        Ring::Rationals => {
            let num = rng.small_int(8, true);
            let den = rng.small_int(8, true);
            Element::from_rational(ring, &num, &den)
        }
        Ring::PrimeField { p } => {
            let mut e;
            loop {
                e = Element::from_bigint(ring, &rng.small_int(19, true));
                if !e.is_zero() {
                    break;
                }
            }
            let _ = p;
            Ok(e)
        }
        Ring::GaloisField { .. } => {
            loop {
                let c0 = rng.small_int(10, false);
                let c1 = rng.small_int(10, false);
                let x = crate::exactrings::parse_element(ring, "x")?;
                let e = Element::from_bigint(ring, &c0)
                    .add(&x.mul(&Element::from_bigint(ring, &c1))?)?;
                if !e.is_zero() {
                    return Ok(e);
                }
            }
        }
        Ring::PAdic { p, .. } | Ring::PAdicExt { p, .. } => {
            let v = rng.range_i64(-2, 2);
            loop {
                let u = rng.small_int(40, true);
                if (&u % p) != BigInt::from(0) {
                    let e = Element::from_bigint(ring, &u);
                    let pe = Element::from_bigint(ring, p).pow(v)?;
                    return e.mul(&pe);
                }
            }
        }
        Ring::Laurent { base, .. } => {
            let v = rng.range_i64(-3, 3);
            let mut terms = vec![(v, sample_unit(base, rng)?)];
            let extra = rng.below(4);
            for _ in 0..extra {
                let e = v + 1 + rng.range_i64(0, 4);
                let c = sample_unit(base, rng)?;
                terms.push((e, c));
            }
            // later duplicate exponents overwrite earlier ones; harmless here
            Element::series(ring, terms, None)
        }
        Ring::TwoDimLocal { coeff, .. } => {
            let p = coeff.local_prime().unwrap().clone();
            let a = rng.range_i64(-1, 2); // overall p power
            let w = rng.range_i64(-2, 2); // residue t valuation
            let mut terms: Vec<(i64, Element)> = Vec::new();
            // unit leading coefficient at exponent w
            loop {
                let u = rng.small_int(20, true);
                if (&u % &p) != BigInt::from(0) {
                    terms.push((w, Element::from_bigint(coeff, &u)));
                    break;
                }
            }
            // plus terms
            for _ in 0..rng.below(3) {
                let e = w + 1 + rng.range_i64(0, 3);
                terms.push((e, Element::from_bigint(coeff, &rng.small_int(9, true))));
            }
            // p-divisible mixed tail below w
            for _ in 0..rng.below(3) {
                let e = w - 1 - rng.range_i64(0, 2);
                let depth = 1 + rng.below(2) as u32;
                let c = Element::from_bigint(coeff, &rng.small_int(6, true))
                    .mul(&Element::from_bigint(coeff, &p).pow(depth as i64)?)?;
                terms.push((e, c));
            }
            let mut dedup: std::collections::BTreeMap<i64, Element> = Default::default();
            for (e, c) in terms {
                dedup.insert(e, c);
            }
            let x = Element::series(ring, dedup.into_iter().collect(), None)?;
            let pe = Element::from_bigint(coeff, &p).pow(a)?;
            x.mul_coeff(&pe)
        }
        other => Err(crate::error::AdelixError::Unsupported(format!(
            "sampling units of {other}"
        ))),
    }
}

/// A batch of sample units.
pub fn sample_units(ring: &Ring, seed: u64, count: usize) -> Result<Vec<Element>> {
    let mut rng = Sampler::new(seed);
    (0..count).map(|_| sample_unit(ring, &mut rng)).collect()
}
