//! Fixed-precision p-adic integers: Hensel lifting of simple roots and the
//! truncated logarithm on principal units.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::ring::IntPoly;

/// An element of `Z_p` known modulo `p^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicApprox {
    value: BigInt,
    precision: u32,
    prime: u64,
}

impl PadicApprox {
    pub fn new(value: &BigInt, prime: u64, precision: u32) -> Self {
        let m = arith::pow_u64(prime, precision);
        PadicApprox {
            value: value.mod_floor(&m),
            precision,
            prime,
        }
    }

    pub fn from_i64(value: i64, prime: u64, precision: u32) -> Self {
        Self::new(&BigInt::from(value), prime, precision)
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn modulus(&self) -> BigInt {
        arith::pow_u64(self.prime, self.precision)
    }

    /// Valuation of the represented class, `None` when it is zero to the
    /// available precision (valuation at least `precision`).
    pub fn valuation(&self) -> Option<u32> {
        arith::valuation(&self.value, self.prime)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check_same_prime(&self, other: &PadicApprox) {
        assert_eq!(
            self.prime, other.prime,
            "mixing p-adic numbers of different primes"
        );
    }

    pub fn add(&self, other: &PadicApprox) -> PadicApprox {
        self.check_same_prime(other);
        let k = self.precision.min(other.precision);
        PadicApprox::new(&(&self.value + &other.value), self.prime, k)
    }

    pub fn sub(&self, other: &PadicApprox) -> PadicApprox {
        self.check_same_prime(other);
        let k = self.precision.min(other.precision);
        PadicApprox::new(&(&self.value - &other.value), self.prime, k)
    }

    pub fn mul(&self, other: &PadicApprox) -> PadicApprox {
        self.check_same_prime(other);
        let k = self.precision.min(other.precision);
        PadicApprox::new(&(&self.value * &other.value), self.prime, k)
    }

    pub fn pow(&self, e: &BigInt) -> PadicApprox {
        let m = self.modulus();
        PadicApprox {
            value: self.value.modpow(e, &m),
            precision: self.precision,
            prime: self.prime,
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<PadicApprox> {
        let m = self.modulus();
        let inv = arith::mod_inverse(&self.value, &m)
            .ok_or_else(|| Error::domain(format!("{self} is not a p-adic unit")))?;
        Ok(PadicApprox::new(&inv, self.prime, self.precision))
    }

    /// Divide by `p^t` exactly, losing `t` digits of precision.
    pub fn shift_down(&self, t: u32) -> Result<PadicApprox> {
        if t > self.precision {
            return Err(Error::PrecisionTooLow {
                precision: self.precision,
            });
        }
        let pt = arith::pow_u64(self.prime, t);
        let (q, r) = self.value.div_rem(&pt);
        if !r.is_zero() {
            return Err(Error::domain(format!("{self} is not divisible by p^{t}")));
        }
        Ok(PadicApprox::new(&q, self.prime, self.precision - t))
    }

    /// Reduce to a lower precision.
    pub fn truncate(&self, k: u32) -> PadicApprox {
        PadicApprox::new(&self.value, self.prime, k.min(self.precision))
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.value, self.prime, self.precision)
    }
}

/// Lift a simple root `r0` of `f` modulo `p` to a root modulo `p^k` by Newton
/// iteration with doubling precision.
pub fn hensel_lift_root(f: &IntPoly, p: u64, r0: &BigInt, k: u32) -> Result<PadicApprox> {
    if k == 0 {
        return Err(Error::domain("precision must be positive"));
    }
    let pb = BigInt::from(p);
    if !f.eval_mod(r0, &pb).is_zero() {
        return Err(Error::domain(format!(
            "{r0} is not a root of {f} modulo {p}"
        )));
    }
    let df = f.derivative();
    if df.eval_mod(r0, &pb).is_zero() {
        return Err(Error::NotSimpleRoot {
            root: r0.to_string(),
            p,
        });
    }
    let mut r = r0.mod_floor(&pb);
    let mut cur = 1u32;
    while cur < k {
        cur = (2 * cur).min(k);
        let m = arith::pow_u64(p, cur);
        let inv = arith::mod_inverse(&df.eval_mod(&r, &m), &m)
            .ok_or_else(|| Error::invariant("derivative lost invertibility while lifting"))?;
        r = (&r - f.eval_mod(&r, &m) * inv).mod_floor(&m);
    }
    Ok(PadicApprox::new(&r, p, k))
}

/// Number of series terms retained for `log(1 + x)` at precision `k`.
pub fn log_series_terms(p: u64, k: u32) -> u64 {
    (k as u64 * p) / (p - 1) + p
}

/// Truncated p-adic logarithm of a principal unit, `sum (-1)^(m+1) x^m / m`
/// with `x = u - 1`.
///
/// Terms are accumulated modulo `p^(k + e)` where `p^e` is the largest power
/// of `p` among the retained indices, so the division by `m` is exact and the
/// result is correct modulo `p^k`.
pub fn padic_log(u: &PadicApprox) -> Result<PadicApprox> {
    let p = u.prime;
    if p == 2 {
        return Err(Error::Unsupported("2-adic logarithm".into()));
    }
    let k = u.precision;
    if k == 0 {
        return Err(Error::domain("precision must be positive"));
    }
    let pb = BigInt::from(p);
    let x = &u.value - BigInt::one();
    if !x.mod_floor(&pb).is_zero() {
        return Err(Error::domain(format!("{u} is not a principal unit")));
    }
    let terms = log_series_terms(p, k);
    let mut extra = 0u32;
    while p.pow(extra + 1) <= terms {
        extra += 1;
    }
    let work = arith::pow_u64(p, k + extra);
    let target = u.modulus();
    let mut power = BigInt::one();
    let mut sum = BigInt::zero();
    for m in 1..=terms {
        power = (power * &x).mod_floor(&work);
        let vm = arith::valuation(&BigInt::from(m), p).unwrap();
        let unit_part = BigInt::from(m / p.pow(vm));
        let shifted = &power / arith::pow_u64(p, vm);
        let inv = arith::mod_inverse(&unit_part, &target).unwrap();
        let term = shifted * inv;
        if m % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(PadicApprox::new(&sum, p, k))
}
