//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg;

/// Integer polynomial, coefficients stored low degree first.
///
/// Trailing zeros are trimmed on construction, so the zero polynomial has an
/// empty coefficient vector and degree -1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    /// `x - r`.
    pub fn linear(r: &BigInt) -> Self {
        IntPoly::new(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_mod(&self, x: &BigInt, m: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, m: &IntPoly) -> IntPoly {
        assert!(m.is_monic(), "rem_monic needs a monic divisor");
        let d = m.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let lead = r.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = r.len() - d;
            for (i, c) in m.coeffs[..d].iter().enumerate() {
                r[shift + i] -= &lead * c;
            }
        }
        IntPoly::new(r)
    }

    /// Exact division of every coefficient by `k`; `None` if some coefficient
    /// is not divisible.
    pub fn div_exact_scalar(&self, k: &BigInt) -> Option<IntPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(IntPoly::new(out))
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        let (m, n) = (self.degree(), other.degree());
        if m < 0 || n < 0 {
            return BigInt::zero();
        }
        let (m, n) = (m as usize, n as usize);
        if m + n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut syl = vec![vec![BigInt::zero(); size]; size];
        // rows 0..n hold shifted copies of self, rows n..n+m of other,
        // highest degree coefficient in the leftmost column
        for r in 0..n {
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                syl[r][r + i] = c.clone();
            }
        }
        for r in 0..m {
            for (i, c) in other.coeffs.iter().rev().enumerate() {
                syl[n + r][r + i] = c.clone();
            }
        }
        linalg::det_int(&syl)
    }

    /// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigInt> {
        let n = self.degree();
        if n < 2 {
            return Err(Error::domain(format!(
                "discriminant needs degree >= 2, got {}",
                n
            )));
        }
        let res = self.resultant(&self.derivative());
        let lc = self.leading().unwrap();
        let d = res / lc;
        let n = n as i64;
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
    }

    fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        if self.degree() < 1 {
            return !self.is_zero();
        }
        let g = self.to_rat().gcd(&self.derivative().to_rat());
        g.degree() == 0
    }

    /// Number of distinct real roots, counted with a Sturm sequence.
    pub fn count_real_roots(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::domain("zero polynomial has no root count"));
        }
        if !self.is_squarefree() {
            return Err(Error::domain(format!("{self} is not squarefree")));
        }
        if self.degree() == 0 {
            return Ok(0);
        }
        let seq = self.to_rat().sturm_sequence();
        let at_neg = sign_changes(seq.iter().map(|s| s.sign_at_neg_infinity()));
        let at_pos = sign_changes(seq.iter().map(|s| s.sign_at_pos_infinity()));
        Ok(at_neg - at_pos)
    }

    /// Integer roots of a monic polynomial, ascending.
    ///
    /// Roots are isolated by Sturm counts on half-integer endpoints, which can
    /// never be roots of a monic integer polynomial, so no enumeration of
    /// divisors of the constant term is needed.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        assert!(self.is_monic(), "integer_roots needs a monic polynomial");
        if self.degree() < 1 {
            return Vec::new();
        }
        let rat = self.to_rat();
        let sqf = rat.div_exact(&rat.gcd(&rat.derivative()));
        let seq = sqf.sturm_sequence();
        // Cauchy bound on |root|
        let bound = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
            + BigInt::one();
        let half =
            |k: &BigInt| BigRational::new(BigInt::from(2) * k + BigInt::one(), BigInt::from(2));
        let changes_at = |k: &BigInt| {
            let x = half(k);
            sign_changes(seq.iter().map(|s| s.eval(&x).signum_i()))
        };
        let mut out = Vec::new();
        // interval (lo + 1/2, hi + 1/2]
        let mut stack = vec![(-&bound - BigInt::one(), bound.clone())];
        while let Some((lo, hi)) = stack.pop() {
            let count = changes_at(&lo) - changes_at(&hi);
            if count == 0 {
                continue;
            }
            if &hi - &lo == BigInt::one() {
                if self.eval(&hi).is_zero() {
                    out.push(hi);
                }
                continue;
            }
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out.sort();
        out
    }

    /// Irreducibility over the rationals for monic polynomials of degree <= 4.
    pub fn is_irreducible_small(&self) -> Result<bool> {
        let n = self.degree();
        if !self.is_monic() {
            return Err(Error::domain(
                "irreducibility test needs a monic polynomial",
            ));
        }
        match n {
            1 => Ok(true),
            2 | 3 => Ok(self.integer_roots().is_empty()),
            4 => Ok(self.integer_roots().is_empty() && self.quadratic_factor().is_none()),
            _ => Err(Error::Unsupported(format!(
                "irreducibility test for degree {n}"
            ))),
        }
    }

    /// A monic quadratic factor `x^2 + a x + b` of a monic quartic, if any.
    fn quadratic_factor(&self) -> Option<(BigInt, BigInt)> {
        let (a0, a1, a2, a3) = (self.coeff(0), self.coeff(1), self.coeff(2), self.coeff(3));
        if a0.is_zero() {
            return None; // x divides; caught by the root test
        }
        // (x^2 + a x + b)(x^2 + c x + d): bd = a0, a + c = a3,
        // ac + b + d = a2, ad + bc = a1
        for pos in arith::divisors(&a0) {
            for b in [pos.clone(), -pos] {
                let d = &a0 / &b;
                let disc = &a3 * &a3 - BigInt::from(4) * (&a2 - &b - &d);
                let Some(s) = arith::exact_sqrt(&disc) else {
                    continue;
                };
                for num in [&a3 + &s, &a3 - &s] {
                    if num.is_odd() {
                        continue;
                    }
                    let a = num / 2;
                    let c = &a3 - &a;
                    if &a * &d + &b * &c == a1 {
                        return Some((a, b));
                    }
                }
            }
        }
        None
    }

    /// Render with a chosen variable name, e.g. `x^3 - 4*x + 27`.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

trait SignumI {
    fn signum_i(&self) -> i32;
}

impl SignumI for BigRational {
    fn signum_i(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        }
    }
}

/// Rational polynomial used for gcds and Sturm sequences.
#[derive(Clone, Debug, PartialEq)]
struct RatPoly {
    c: Vec<BigRational>,
}

impl RatPoly {
    fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        RatPoly { c }
    }

    fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.c
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.c.len() - 1;
        let lead = d.c.last().unwrap().clone();
        let mut r = self.c.clone();
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let top = r.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let f = &top / &lead;
            let shift = r.len() - dd;
            q[shift] = f.clone();
            for (i, c) in d.c[..dd].iter().enumerate() {
                r[shift + i] -= &f * c;
            }
        }
        (RatPoly::new(q), RatPoly::new(r))
    }

    fn div_exact(&self, d: &RatPoly) -> RatPoly {
        self.div_rem(d).0
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while b.degree() >= 0 {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    fn sturm_sequence(&self) -> Vec<RatPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].degree() <= 0 {
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.degree() < 0 {
                break;
            }
            seq.push(RatPoly::new(r.c.into_iter().map(|c| -c).collect()));
        }
        seq
    }

    fn sign_at_pos_infinity(&self) -> i32 {
        self.c.last().map_or(0, |c| c.signum_i())
    }

    fn sign_at_neg_infinity(&self) -> i32 {
        let s = self.sign_at_pos_infinity();
        if self.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }
}
