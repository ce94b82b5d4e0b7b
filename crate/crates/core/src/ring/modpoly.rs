//! Polynomials with coefficients in `Z/mZ`, and factorization over prime
//! fields (squarefree, distinct-degree, then deterministic equal-degree
//! splitting).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::ring::IntPoly;

/// Polynomial over `Z/mZ`, coefficients in `[0, m)`, low degree first,
/// trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModPoly {
    coeffs: Vec<BigInt>,
    modulus: BigInt,
}

impl ModPoly {
    pub fn new(coeffs: Vec<BigInt>, modulus: &BigInt) -> Self {
        assert!(modulus > &BigInt::zero(), "modulus must be positive");
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(|c| c.mod_floor(modulus)).collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ModPoly {
            coeffs,
            modulus: modulus.clone(),
        }
    }

    pub fn from_i64(coeffs: &[i64], modulus: u64) -> Self {
        Self::new(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            &BigInt::from(modulus),
        )
    }

    pub fn from_int_poly(f: &IntPoly, modulus: &BigInt) -> Self {
        Self::new(f.coeffs().to_vec(), modulus)
    }

    /// Lift to an integer polynomial with coefficients in `[0, m)`.
    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    fn zero_like(&self) -> Self {
        ModPoly {
            coeffs: Vec::new(),
            modulus: self.modulus.clone(),
        }
    }

    fn one_like(&self) -> Self {
        ModPoly::new(vec![BigInt::one()], &self.modulus)
    }

    /// The polynomial `x` over the same modulus.
    fn x_like(&self) -> Self {
        ModPoly::new(vec![BigInt::zero(), BigInt::one()], &self.modulus)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn add(&self, o: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        ModPoly::new(
            (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect(),
            &self.modulus,
        )
    }

    pub fn sub(&self, o: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        ModPoly::new(
            (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect(),
            &self.modulus,
        )
    }

    pub fn mul(&self, o: &ModPoly) -> ModPoly {
        if self.is_zero() || o.is_zero() {
            return self.zero_like();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ModPoly::new(out, &self.modulus)
    }

    pub fn pow(&self, mut e: u32) -> ModPoly {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> ModPoly {
        ModPoly::new(self.coeffs.iter().map(|c| c * k).collect(), &self.modulus)
    }

    pub fn derivative(&self) -> ModPoly {
        ModPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
            &self.modulus,
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| {
            (acc * x + c).mod_floor(&self.modulus)
        })
    }

    /// Divide by the leading coefficient; needs it to be invertible.
    pub fn make_monic(&self) -> Result<ModPoly> {
        let Some(lc) = self.coeffs.last() else {
            return Err(Error::domain("zero polynomial cannot be made monic"));
        };
        let inv = arith::mod_inverse(lc, &self.modulus)
            .ok_or_else(|| Error::domain("leading coefficient not invertible"))?;
        Ok(self.scale(&inv))
    }

    /// Euclidean division; the divisor's leading coefficient must be a unit.
    pub fn div_rem(&self, d: &ModPoly) -> Result<(ModPoly, ModPoly)> {
        let Some(lc) = d.coeffs.last() else {
            return Err(Error::domain("division by the zero polynomial"));
        };
        let inv = arith::mod_inverse(lc, &self.modulus)
            .ok_or_else(|| Error::domain("leading coefficient not invertible"))?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let f = (&top * &inv).mod_floor(&self.modulus);
            let shift = r.len() - dd;
            for (i, c) in d.coeffs[..dd].iter().enumerate() {
                r[shift + i] = (&r[shift + i] - &f * c).mod_floor(&self.modulus);
            }
            q[shift] = f;
        }
        Ok((
            ModPoly::new(q, &self.modulus),
            ModPoly::new(r, &self.modulus),
        ))
    }

    pub fn rem(&self, d: &ModPoly) -> Result<ModPoly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic gcd; meaningful for prime moduli.
    pub fn gcd(&self, o: &ModPoly) -> Result<ModPoly> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.make_monic()
        }
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigInt, m: &ModPoly) -> Result<ModPoly> {
        let base = self.rem(m)?;
        let mut acc = self.one_like().rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m)?;
            if e.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Ordering key that makes prime labels stable: degree first, then the
    /// coefficients below the leading one read from the top, each mapped to
    /// `(m - c) mod m`. For linear factors `x - r` this orders by the root `r`.
    fn order_key(&self) -> (isize, Vec<BigInt>) {
        let d = self.degree();
        let body = if d <= 0 {
            Vec::new()
        } else {
            self.coeffs[..d as usize]
                .iter()
                .rev()
                .map(|c| (&self.modulus - c).mod_floor(&self.modulus))
                .collect()
        };
        (d, body)
    }

    /// Render with a chosen variable name, coefficients in `[0, m)`.
    pub fn display_with(&self, var: &str) -> String {
        self.to_int_poly().display_with(var)
    }

    /// Render with balanced coefficients in `(-m/2, m/2]`, e.g. `x - 1` for
    /// `x + 2` modulo 3.
    pub fn display_balanced(&self, var: &str) -> String {
        let half = &self.modulus / 2;
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    if c > &half {
                        c - &self.modulus
                    } else {
                        c.clone()
                    }
                })
                .collect(),
        )
        .display_with(var)
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.display_with("x"), self.modulus)
    }
}

impl PartialOrd for ModPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ModPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key()
            .cmp(&other.order_key())
            .then_with(|| self.modulus.cmp(&other.modulus))
    }
}

/// Factor `f` over the field with `p` elements.
///
/// Returns monic irreducible factors with multiplicities, sorted by degree
/// and then by [`ModPoly`]'s ordering (linear factors by root).
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<Vec<(ModPoly, u32)>> {
    if !arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let pb = BigInt::from(p);
    let fp = ModPoly::from_int_poly(f, &pb);
    if fp.is_zero() {
        return Err(Error::domain(format!("{f} vanishes modulo {p}")));
    }
    if fp.degree() == 0 {
        return Ok(Vec::new());
    }
    let fp = fp.make_monic()?;
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(&fp, p)? {
        for (block, d) in distinct_degree(&part, p)? {
            for g in equal_degree(&block, d, p)? {
                out.push((g, mult));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn squarefree_decomposition(f: &ModPoly, p: u64) -> Result<Vec<(ModPoly, u32)>> {
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.div_rem(&c)?.0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.div_rem(&y)?.0;
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_rem(&w)?.0;
        i += 1;
    }
    if !c.is_one() && !c.is_zero() {
        // c is a p-th power: c(x) = g(x^p) and the coefficients are fixed by
        // Frobenius in the prime field
        let step = p as usize;
        let root = ModPoly::new(
            c.coeffs().iter().step_by(step).cloned().collect(),
            c.modulus(),
        );
        for (g, m) in squarefree_decomposition(&root, p)? {
            out.push((g, m * p as u32));
        }
    }
    Ok(out)
}

fn distinct_degree(f: &ModPoly, p: u64) -> Result<Vec<(ModPoly, usize)>> {
    let pb = BigInt::from(p);
    let x = f.x_like();
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut out = Vec::new();
    let mut i = 1usize;
    while rest.degree() >= 2 * i as isize {
        h = h.pow_mod(&pb, &rest)?;
        let g = rest.gcd(&h.sub(&x))?;
        if !g.is_one() {
            rest = rest.div_rem(&g)?.0;
            h = h.rem(&rest)?;
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree() > 0 {
        let d = rest.degree() as usize;
        out.push((rest, d));
    }
    Ok(out)
}

/// Split a product of distinct irreducibles of common degree `d`.
///
/// Candidates are tried in a fixed order: `x`, `x + 1`, ..., `x + p - 1`,
/// then higher-degree polynomials enumerated in base `p`. For odd `p` the
/// splitting polynomial is `a^((p^d - 1)/2) - 1`, for `p = 2` the trace
/// `a + a^2 + ... + a^(2^(d-1))`.
fn equal_degree(g: &ModPoly, d: usize, p: u64) -> Result<Vec<ModPoly>> {
    let n = g.degree() as usize;
    if n == d {
        return Ok(vec![g.clone()]);
    }
    let pb = BigInt::from(p);
    let half_exp = (num_traits::pow(pb.clone(), d) - BigInt::one()) / 2;
    let limit = num_traits::pow(pb.clone(), n);
    let mut t = pb.clone();
    while t < limit {
        let mut digits = Vec::new();
        let mut rest = t.clone();
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&pb);
            digits.push(r);
            rest = q;
        }
        let a = ModPoly::new(digits, &pb);
        let b = if p == 2 {
            let mut acc = a.rem(g)?;
            let mut term = acc.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(g)?;
                acc = acc.add(&term);
            }
            acc
        } else {
            a.pow_mod(&half_exp, g)?.sub(&g.one_like())
        };
        let h = g.gcd(&b)?;
        if h.degree() > 0 && h.degree() < g.degree() {
            let other = g.div_rem(&h)?.0;
            let mut parts = equal_degree(&h, d, p)?;
            parts.extend(equal_degree(&other, d, p)?);
            return Ok(parts);
        }
        t += 1;
    }
    Err(Error::invariant(format!(
        "equal-degree splitting of {g} found no separating candidate"
    )))
}

/// True if the polynomial has no factor of degree <= deg/2 over F_p.
pub fn is_irreducible_mod_p(f: &ModPoly, p: u64) -> Result<bool> {
    let n = f.degree();
    if n <= 0 {
        return Ok(false);
    }
    let f = f.make_monic()?;
    let pb = BigInt::from(p);
    let x = f.x_like();
    let mut h = x.clone();
    for _ in 1..=(n / 2) {
        h = h.pow_mod(&pb, &f)?;
        if !f.gcd(&h.sub(&x))?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}
