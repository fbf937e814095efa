use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{AdelixError, Result};

use super::num::is_prime;

/// Exponent window for truncated Laurent data. `lo <= hi`; coefficients with
/// exponent below `lo` are exactly zero (for field coefficients) or carry
/// p-valuation >= the working precision (two-dimensional case), coefficients
/// above `hi` are unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(AdelixError::Parse(format!("window [{lo},{hi}] has lo > hi")));
        }
        Ok(Window { lo, hi })
    }

    pub fn width(&self) -> i64 {
        self.hi - self.lo + 1
    }
}

/// Descriptor of one ring in the tower. Cheap to clone; compared structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ring {
    /// Q, reduced fractions.
    Rationals,
    /// Z (coefficient base for bundles over Spec Z).
    Integers,
    /// F_p, p prime.
    PrimeField { p: BigInt },
    /// F_{p^k} = F_p[x]/(modulus), modulus monic irreducible of degree k >= 1.
    GaloisField { p: BigInt, modulus: Arc<Vec<BigInt>> },
    /// Q_p elements u·p^v with the unit known mod p^prec.
    PAdic { p: BigInt, prec: u32 },
    /// Unramified extension W(F_{p^k})[1/p], truncated; modulus as in GaloisField.
    PAdicExt {
        p: BigInt,
        prec: u32,
        modulus: Arc<Vec<BigInt>>,
    },
    /// Dense polynomials over a base ring.
    Poly { base: Arc<Ring>, var: String },
    /// Windowed sparse Laurent data over a base ring; with `base` a field this
    /// models F((t)) truncations, with `base` Integers it holds Z[t,1/t].
    Laurent {
        base: Arc<Ring>,
        var: String,
        window: Window,
    },
    /// Truncation of F{{t}} for F = Q_p or its unramified extension:
    /// Laurent-in-t with PAdic coefficients, valued by the p-adic valuation.
    TwoDimLocal {
        coeff: Arc<Ring>,
        var: String,
        window: Window,
    },
}

impl Ring {
    pub fn rationals() -> Ring {
        Ring::Rationals
    }

    pub fn integers() -> Ring {
        Ring::Integers
    }

    pub fn prime_field(p: i64) -> Result<Ring> {
        let p = BigInt::from(p);
        if !is_prime(&p) {
            return Err(AdelixError::Parse(format!("{p} is not prime")));
        }
        Ok(Ring::PrimeField { p })
    }

    pub fn galois_field(p: i64, modulus: Vec<BigInt>) -> Result<Ring> {
        let pb = BigInt::from(p);
        if !is_prime(&pb) {
            return Err(AdelixError::Parse(format!("{p} is not prime")));
        }
        if modulus.len() < 2 {
            return Err(AdelixError::Parse("modulus must have degree >= 1".into()));
        }
        Ok(Ring::GaloisField {
            p: pb,
            modulus: Arc::new(modulus),
        })
    }

    pub fn padic(p: i64, prec: u32) -> Result<Ring> {
        let p = BigInt::from(p);
        if !is_prime(&p) {
            return Err(AdelixError::Parse(format!("{p} is not prime")));
        }
        if prec == 0 {
            return Err(AdelixError::Parse("p-adic precision must be >= 1".into()));
        }
        Ok(Ring::PAdic { p, prec })
    }

    pub fn padic_ext(p: i64, prec: u32, modulus: Vec<BigInt>) -> Result<Ring> {
        let pb = BigInt::from(p);
        if !is_prime(&pb) {
            return Err(AdelixError::Parse(format!("{p} is not prime")));
        }
        Ok(Ring::PAdicExt {
            p: pb,
            prec,
            modulus: Arc::new(modulus),
        })
    }

    pub fn poly(base: Ring, var: &str) -> Ring {
        Ring::Poly {
            base: Arc::new(base),
            var: var.to_string(),
        }
    }

    pub fn laurent(base: Ring, var: &str, lo: i64, hi: i64) -> Result<Ring> {
        Ok(Ring::Laurent {
            base: Arc::new(base),
            var: var.to_string(),
            window: Window::new(lo, hi)?,
        })
    }

    pub fn two_dim_local(p: i64, prec: u32, var: &str, lo: i64, hi: i64) -> Result<Ring> {
        Ok(Ring::TwoDimLocal {
            coeff: Arc::new(Ring::padic(p, prec)?),
            var: var.to_string(),
            window: Window::new(lo, hi)?,
        })
    }

    pub fn two_dim_local_ext(coeff: Ring, var: &str, lo: i64, hi: i64) -> Result<Ring> {
        match coeff {
            Ring::PAdic { .. } | Ring::PAdicExt { .. } => Ok(Ring::TwoDimLocal {
                coeff: Arc::new(coeff),
                var: var.to_string(),
                window: Window::new(lo, hi)?,
            }),
            other => Err(AdelixError::Unsupported(format!(
                "two-dimensional local coefficients must be p-adic, got {other}"
            ))),
        }
    }

    /// Is this a field at working precision (every declared-nonzero element a unit)?
    pub fn is_field_like(&self) -> bool {
        match self {
            Ring::Rationals
            | Ring::PrimeField { .. }
            | Ring::GaloisField { .. }
            | Ring::PAdic { .. }
            | Ring::PAdicExt { .. } => true,
            Ring::Laurent { base, .. } => base.is_field_like(),
            Ring::TwoDimLocal { .. } => true,
            Ring::Integers | Ring::Poly { .. } => false,
        }
    }

    /// The base/coefficient ring of a composite kind.
    pub fn base_ring(&self) -> Option<&Ring> {
        match self {
            Ring::Poly { base, .. } | Ring::Laurent { base, .. } => Some(base),
            Ring::TwoDimLocal { coeff, .. } => Some(coeff),
            _ => None,
        }
    }

    pub fn var(&self) -> Option<&str> {
        match self {
            Ring::Poly { var, .. } | Ring::Laurent { var, .. } | Ring::TwoDimLocal { var, .. } => {
                Some(var)
            }
            _ => None,
        }
    }

    pub fn window(&self) -> Option<Window> {
        match self {
            Ring::Laurent { window, .. } | Ring::TwoDimLocal { window, .. } => Some(*window),
            _ => None,
        }
    }

    /// Characteristic-p residue prime for local kinds.
    pub fn local_prime(&self) -> Option<&BigInt> {
        match self {
            Ring::PrimeField { p } | Ring::GaloisField { p, .. } => Some(p),
            Ring::PAdic { p, .. } | Ring::PAdicExt { p, .. } => Some(p),
            Ring::TwoDimLocal { coeff, .. } => coeff.local_prime(),
            _ => None,
        }
    }

    /// Working p-adic precision for local kinds.
    pub fn local_prec(&self) -> Option<u32> {
        match self {
            Ring::PAdic { prec, .. } | Ring::PAdicExt { prec, .. } => Some(*prec),
            Ring::TwoDimLocal { coeff, .. } => coeff.local_prec(),
            _ => None,
        }
    }

    /// Residue extension degree over F_p for Galois/PAdicExt kinds, else 1.
    pub fn residue_degree(&self) -> usize {
        match self {
            Ring::GaloisField { modulus, .. } | Ring::PAdicExt { modulus, .. } => {
                modulus.len() - 1
            }
            Ring::TwoDimLocal { coeff, .. } => coeff.residue_degree(),
            _ => 1,
        }
    }

    /// Same ring with the Laurent/TwoDimLocal window replaced.
    pub fn with_window(&self, window: Window) -> Ring {
        match self {
            Ring::Laurent { base, var, .. } => Ring::Laurent {
                base: base.clone(),
                var: var.clone(),
                window,
            },
            Ring::TwoDimLocal { coeff, var, .. } => Ring::TwoDimLocal {
                coeff: coeff.clone(),
                var: var.clone(),
                window,
            },
            other => other.clone(),
        }
    }

    /// Same ring with p-adic precision replaced (recursing through composites).
    pub fn with_prec(&self, new_prec: u32) -> Ring {
        match self {
            Ring::PAdic { p, .. } => Ring::PAdic {
                p: p.clone(),
                prec: new_prec,
            },
            Ring::PAdicExt { p, modulus, .. } => Ring::PAdicExt {
                p: p.clone(),
                prec: new_prec,
                modulus: modulus.clone(),
            },
            Ring::TwoDimLocal { coeff, var, window } => Ring::TwoDimLocal {
                coeff: Arc::new(coeff.with_prec(new_prec)),
                var: var.clone(),
                window: *window,
            },
            Ring::Laurent { base, var, window } => Ring::Laurent {
                base: Arc::new(base.with_prec(new_prec)),
                var: var.clone(),
                window: *window,
            },
            Ring::Poly { base, var } => Ring::Poly {
                base: Arc::new(base.with_prec(new_prec)),
                var: var.clone(),
            },
            other => other.clone(),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => write!(f, "Q"),
            Ring::Integers => write!(f, "Z"),
            Ring::PrimeField { p } => write!(f, "F{p}"),
            Ring::GaloisField { p, modulus } => {
                write!(f, "F{p}^{}", modulus.len() - 1)
            }
            Ring::PAdic { p, prec } => write!(f, "Q{p}(m={prec})"),
            Ring::PAdicExt { p, prec, modulus } => {
                write!(f, "Q{p}^{}(m={prec})", modulus.len() - 1)
            }
            Ring::Poly { base, var } => write!(f, "{base}[{var}]"),
            Ring::Laurent { base, var, window } => {
                write!(f, "{base}(({var}))[{}..{}]", window.lo, window.hi)
            }
            Ring::TwoDimLocal { coeff, var, window } => {
                write!(f, "{coeff}{{{{{var}}}}}[{}..{}]", window.lo, window.hi)
            }
        }
    }
}
