//! Integer polynomials in one variable, the workhorse representation for
//! function-field data on the arithmetic surface (curve equations, rational
//! sections) and for Horrocks transition entries before localization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};



use super::num::content;

/// Dense Z[t] polynomial; coefficients low-to-high with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    pub coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Polynomial {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Polynomial {
        Polynomial { coeffs: vec![] }
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Polynomial {
        Polynomial::new(vec![c])
    }

    pub fn variable() -> Polynomial {
        Polynomial::new(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Polynomial {
        Polynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, |c| c.is_one())
    }

    pub fn content(&self) -> BigInt {
        content(&self.coeffs)
    }

    /// Primitive part with positive leading coefficient, and the removed factor.
    pub fn primitive(&self) -> (BigRational, Polynomial) {
        if self.is_zero() {
            return (BigRational::zero(), Polynomial::zero());
        }
        let c = self.content();
        let sign = if self.leading().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let f = &c * &sign;
        let prim = Polynomial::new(self.coeffs.iter().map(|x| x / &f).collect());
        (BigRational::from(f), prim)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, o) in out.iter_mut().enumerate() {
            if i < self.coeffs.len() {
                *o += &self.coeffs[i];
            }
            if i < other.coeffs.len() {
                *o += &other.coeffs[i];
            }
        }
        Polynomial::new(out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Exact division over Q, pseudo-free: returns quotient and remainder
    /// with rational coefficients cleared only when the division is exact.
    pub fn divmod_rat(&self, other: &Polynomial) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
        let b: Vec<BigRational> = other
            .coeffs
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        assert!(!b.is_empty());
        let bl = b.last().unwrap().clone();
        let mut q: Vec<BigRational> = vec![];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() / &bl;
            if q.len() <= shift {
                q.resize(shift + 1, BigRational::zero());
            }
            q[shift] = &q[shift] + &c;
            for i in 0..b.len() {
                let t = &c * &b[i];
                r[shift + i] = &r[shift + i] - &t;
            }
            while r.last().map_or(false, |x| x.is_zero()) {
                r.pop();
            }
        }
        (q, r)
    }

    /// Does `other` divide `self` exactly over Q?
    pub fn divides(&self, other: &Polynomial) -> bool {
        if other.is_zero() {
            return self.is_zero();
        }
        let (_, r) = self.divmod_rat(other);
        r.is_empty()
    }

    /// Multiplicity of the irreducible primitive factor `f` in `self`.
    pub fn multiplicity_of(&self, f: &Polynomial) -> u32 {
        assert!(!self.is_zero() && !f.is_zero());
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divmod_rat(f);
            if !r.is_empty() {
                return k;
            }
            // q has rational coefficients; clear to a polynomial (exact since f primitive)
            let mut den = BigInt::one();
            for c in &q {
                den = den.lcm(c.denom());
            }
            if !den.is_one() {
                // not an exact integral factor; still an exact Q-factor, keep going rationally
                let coeffs: Vec<BigInt> = q
                    .iter()
                    .map(|c| (c * BigRational::from(den.clone())).to_integer())
                    .collect();
                cur = Polynomial::new(coeffs);
            } else {
                cur = Polynomial::new(q.iter().map(|c| c.to_integer()).collect());
            }
            k += 1;
        }
    }

    pub fn reduce_mod(&self, p: &BigInt) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c.mod_floor(p)).collect())
    }

    /// Reverse coefficients: t^deg * f(1/t), used at the infinity chart.
    pub fn reversed(&self) -> Polynomial {
        let mut c = self.coeffs.clone();
        c.reverse();
        Polynomial::new(c)
    }

    /// Max |coefficient| (height).
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                if i == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{i}")?;
                }
            } else if i == 1 {
                write!(f, "{a}*t")?;
            } else {
                write!(f, "{a}*t^{i}")?;
            }
        }
        Ok(())
    }
}
