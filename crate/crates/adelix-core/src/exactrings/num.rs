//! Small number-theoretic helpers over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// x^e mod m with e >= 0 and m > 1.
pub fn pow_mod(x: &BigInt, e: &BigInt, m: &BigInt) -> BigInt {
    x.modpow(e, m)
}

/// Multiplicative inverse of a mod m, when gcd(a, m) = 1.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(m);
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Deterministic Miller-Rabin, valid far beyond the inputs used here.
pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    let small = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &small {
        let q = BigInt::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &small {
        let a = BigInt::from(a);
        let mut x = pow_mod(&a, &d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// p-adic valuation of a nonzero integer: largest k with p^k | n, and the cofactor.
pub fn p_val(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    assert!(!n.is_zero());
    let mut v = 0i64;
    let mut u = n.clone();
    loop {
        let (q, r) = u.div_rem(p);
        if r.is_zero() {
            v += 1;
            u = q;
        } else {
            return (v, u);
        }
    }
}

/// p-adic valuation of a nonzero rational.
pub fn p_val_rat(num: &BigInt, den: &BigInt, p: &BigInt) -> i64 {
    let (vn, _) = p_val(num, p);
    let (vd, _) = p_val(den, p);
    vn - vd
}

/// Content (gcd of coefficients) of an integer vector, nonnegative; 0 for all-zero.
pub fn content(coeffs: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in coeffs {
        g = g.gcd(c);
    }
    g.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        for p in [2u32, 3, 5, 7, 11, 101, 7919] {
            assert!(is_prime(&BigInt::from(p)), "{p}");
        }
        for n in [1u32, 4, 9, 561, 7917] {
            assert!(!is_prime(&BigInt::from(n)), "{n}");
        }
    }

    #[test]
    fn inverse_mod_prime_power() {
        // 3 * 1601 = 4803 = 2*2401 + 1
        let m = BigInt::from(2401); // 7^4
        let i = inv_mod(&BigInt::from(3), &m).unwrap();
        assert_eq!(i, BigInt::from(1601));
    }

    #[test]
    fn valuations() {
        let (v, u) = p_val(&BigInt::from(98), &BigInt::from(7));
        assert_eq!((v, u), (2, BigInt::from(2)));
    }
}
