use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{FieldElement, IdealHNF, NumberField};
use crate::arith;
use crate::error::{Error, Result};
use crate::ring::{factor_mod_p, IntPoly, ModPoly};

/// A prime ideal `(p, g(θ))` above `p`, where `θ` generates an order that is
/// maximal at `p` (usually `θ = α`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactor {
    pub p: u64,
    pub gen_poly: ModPoly,
    pub theta: FieldElement,
    pub theta_is_alpha: bool,
    pub e: u32,
    pub f: u32,
    /// 1-based position in the sorted factorization.
    pub label: usize,
}

impl PrimeFactor {
    /// The second generator `g(θ)`.
    pub fn generator(&self, k: &NumberField) -> Result<FieldElement> {
        k.eval_at(&self.gen_poly.to_int_poly(), &self.theta)
    }

    pub fn ideal(&self, k: &NumberField) -> Result<IdealHNF> {
        IdealHNF::from_two_elements(k, &BigInt::from(self.p), &self.generator(k)?)
    }

    /// Size `p^f` of the residue field.
    pub fn residue_order(&self) -> BigInt {
        arith::pow_u64(self.p, self.f)
    }

    /// `(p, g)` with the generator written in `x` (or `θ` when `θ ≠ α`).
    pub fn describe(&self) -> String {
        let var = if self.theta_is_alpha { "x" } else { "t" };
        format!("({}, {})", self.p, self.gen_poly.display_balanced(var))
    }
}

impl fmt::Display for PrimeFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P{} = {} e={} f={}",
            self.label,
            self.describe(),
            self.e,
            self.f
        )
    }
}

/// Dedekind's criterion: is `Z[x]/(f)` maximal at `p`?
pub fn dedekind_criterion(f: &IntPoly, p: u64) -> Result<bool> {
    let pb = BigInt::from(p);
    let factors = factor_mod_p(f, p)?;
    let mut g = IntPoly::one();
    let mut h = IntPoly::one();
    let mut repeated = ModPoly::from_i64(&[1], p);
    for (gi, ei) in &factors {
        let gi_int = gi.to_int_poly();
        g = g.mul(&gi_int);
        for _ in 1..*ei {
            h = h.mul(&gi_int);
        }
        if *ei > 1 {
            repeated = repeated.mul(gi);
        }
    }
    if repeated.is_one() {
        return Ok(true);
    }
    // f is monic so lc(f) = 1 and g h agrees with f modulo p
    let diff = f.sub(&g.mul(&h));
    let quotient = diff
        .div_exact_scalar(&pb)
        .ok_or_else(|| Error::invariant("f - g h is not divisible by p"))?;
    let fq = ModPoly::from_int_poly(&quotient, &pb);
    // gcd(F, g, h) = gcd(F, product of the repeated factors)
    Ok(fq.gcd(&repeated)?.is_one())
}

/// Dedekind's test for the power basis of `k` at `p`.
pub fn dedekind_p_maximal(k: &NumberField, p: u64) -> Result<bool> {
    if !k.has_power_basis() {
        return Err(Error::Unsupported(
            "Dedekind's test applies to the power basis only".into(),
        ));
    }
    if !arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    dedekind_criterion(k.poly(), p)
}

fn valuation_or_max(x: &BigInt, p: u64) -> u32 {
    arith::valuation(x, p).unwrap_or(u32::MAX)
}

fn integer_charpoly(k: &NumberField, theta: &FieldElement) -> Result<Option<IntPoly>> {
    let cp = k.charpoly(theta)?;
    if cp.iter().any(|c| !c.is_integer()) {
        return Ok(None);
    }
    Ok(Some(IntPoly::new(
        cp.iter().map(|c| c.to_integer()).collect(),
    )))
}

/// Small elements `Σ c_i b_i` (i ≥ 1) ordered by max-norm, then
/// lexicographically.
fn small_elements(n: usize, radius: i64) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for r in 1..=radius {
        let width = (2 * r + 1) as usize;
        let total = width.pow((n - 1) as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut coords = vec![BigInt::zero(); n];
            let mut maxabs = 0;
            for c in coords.iter_mut().skip(1) {
                let v = (rest % width) as i64 - r;
                rest /= width;
                maxabs = maxabs.max(v.abs());
                *c = BigInt::from(v);
            }
            if maxabs == r {
                out.push(FieldElement::integral(coords));
            }
        }
    }
    out
}

/// An element whose characteristic polynomial generates an order that is
/// maximal at `p`, with that polynomial.
fn p_maximal_generator(k: &NumberField, p: u64) -> Result<(FieldElement, IntPoly, bool)> {
    let alpha = k.alpha();
    let pb = BigInt::from(p);
    if (k.poly_disc() % &pb) != BigInt::zero() {
        return Ok((alpha, k.poly().clone(), true));
    }
    if k.has_power_basis() {
        if dedekind_criterion(k.poly(), p)? {
            return Ok((alpha, k.poly().clone(), true));
        }
        return Err(Error::SplittingUndetermined {
            p,
            reason: "p divides the index of Z[α] and no integral basis was supplied".into(),
        });
    }
    let target = valuation_or_max(k.disc(), p);
    if valuation_or_max(k.poly_disc(), p) == target {
        return Ok((alpha, k.poly().clone(), true));
    }
    for theta in small_elements(k.degree(), 3) {
        let Some(cp) = integer_charpoly(k, &theta)? else {
            continue;
        };
        let Ok(d) = cp.discriminant() else { continue };
        if !d.is_zero() && valuation_or_max(&d, p) == target {
            return Ok((theta, cp, false));
        }
    }
    Err(Error::SplittingUndetermined {
        p,
        reason: "no small element generates an order maximal at p".into(),
    })
}

/// Factor `p O_K` into prime ideals.
pub fn split_prime(k: &NumberField, p: u64) -> Result<Vec<PrimeFactor>> {
    if !arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let (theta, cp, is_alpha) = p_maximal_generator(k, p)?;
    let factors = factor_mod_p(&cp, p)?;
    let out: Vec<PrimeFactor> = factors
        .into_iter()
        .enumerate()
        .map(|(i, (g, e))| PrimeFactor {
            p,
            f: g.degree() as u32,
            gen_poly: g,
            theta: theta.clone(),
            theta_is_alpha: is_alpha,
            e,
            label: i + 1,
        })
        .collect();
    let total: u32 = out.iter().map(|pf| pf.e * pf.f).sum();
    if total as usize != k.degree() {
        return Err(Error::invariant(format!(
            "splitting of {p} has Σ e f = {total}, expected {}",
            k.degree()
        )));
    }
    Ok(out)
}

/// `Π 𝔭_i^{e_i}` as an HNF; equals `p O_K` for a correct factorization.
pub fn product_of_factors(k: &NumberField, factors: &[PrimeFactor]) -> Result<IdealHNF> {
    let mut acc = IdealHNF::unit(k);
    for pf in factors {
        acc = acc.multiply(k, &pf.ideal(k)?.pow(k, pf.e)?)?;
    }
    Ok(acc)
}

/// Splitting shape as a sorted list of `(e, f)`.
pub fn splitting_type(factors: &[PrimeFactor]) -> Vec<(u32, u32)> {
    let mut t: Vec<(u32, u32)> = factors.iter().map(|pf| (pf.e, pf.f)).collect();
    t.sort();
    t
}

/// Short human description of a splitting shape.
pub fn describe_splitting(factors: &[PrimeFactor], n: usize) -> String {
    let t = splitting_type(factors);
    if t.iter().all(|&(e, f)| e == 1 && f == 1) && t.len() == n {
        return "split completely".into();
    }
    if t == [(1, n as u32)] {
        return format!("inert f = {n}");
    }
    if t == [(n as u32, 1)] {
        return "totally ramified".into();
    }
    let parts: Vec<String> = t
        .iter()
        .map(|&(e, f)| {
            if e == 1 {
                format!("f={f}")
            } else {
                format!("e={e},f={f}")
            }
        })
        .collect();
    parts.join(" + ")
}

impl NumberField {
    /// `p O_K` as an HNF.
    pub fn p_ideal(&self, p: u64) -> IdealHNF {
        IdealHNF::scalar(self, &BigInt::from(p))
    }

    pub fn is_unit(&self, x: &FieldElement) -> Result<bool> {
        Ok(x.is_integral() && self.norm(x)?.abs().is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ex62() -> NumberField {
        NumberField::new(&IntPoly::from_i64(&[27, -4, 0, 1]), None).unwrap()
    }

    #[test]
    fn dedekind_examples() {
        assert!(dedekind_p_maximal(&ex62(), 3).unwrap());
        let q = NumberField::new(&IntPoly::from_i64(&[3, 0, -2, 0, 1]), None).unwrap();
        assert!(dedekind_p_maximal(&q, 5).unwrap());
        for p in [3i64, 5, 7, 11] {
            assert!(!dedekind_criterion(&IntPoly::from_i64(&[-p * p, 0, 1]), p as u64).unwrap());
        }
        // x^3 - 26 at 3: index 3
        assert!(!dedekind_criterion(&IntPoly::from_i64(&[-26, 0, 0, 1]), 3).unwrap());
    }

    #[test]
    fn example_62_splitting() {
        let k = ex62();
        let s = split_prime(&k, 3).unwrap();
        let gens: Vec<String> = s
            .iter()
            .map(|pf| pf.gen_poly.display_balanced("x"))
            .collect();
        assert_eq!(gens, vec!["x", "x - 1", "x + 1"]);
        assert!(s.iter().all(|pf| pf.e == 1 && pf.f == 1));
        assert_eq!(product_of_factors(&k, &s).unwrap(), k.p_ideal(3));
        let s2 = split_prime(&k, 2).unwrap();
        assert_eq!(splitting_type(&s2), vec![(1, 1), (1, 2)]);
        for pf in &s2 {
            assert_eq!(pf.ideal(&k).unwrap().norm(), pf.residue_order());
        }
    }

    #[test]
    fn example_63_inert() {
        let q = NumberField::new(&IntPoly::from_i64(&[3, 0, -2, 0, 1]), None).unwrap();
        let s = split_prime(&q, 5).unwrap();
        assert_eq!(splitting_type(&s), vec![(1, 4)]);
        assert_eq!(describe_splitting(&s, 4), "inert f = 4");
    }

    #[test]
    fn index_primes() {
        // x^3 - 26 has index 3; the power basis cannot decide at 3
        let f = IntPoly::from_i64(&[-26, 0, 0, 1]);
        let k = NumberField::new(&f, None).unwrap();
        assert!(matches!(
            split_prime(&k, 3),
            Err(Error::SplittingUndetermined { .. })
        ));
        // with the basis 1, x, (x^2 - x + 1)/3 the search finds a generator
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let basis = vec![
            vec![r(1, 1), r(0, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1), r(0, 1)],
            vec![r(1, 3), r(-1, 3), r(1, 3)],
        ];
        let k = NumberField::new(&f, Some(&basis)).unwrap();
        assert_eq!(k.disc(), &BigInt::from(-2028));
        let s = split_prime(&k, 3).unwrap();
        let total: u32 = s.iter().map(|pf| pf.e * pf.f).sum();
        assert_eq!(total, 3);
        assert_eq!(product_of_factors(&k, &s).unwrap(), k.p_ideal(3));
        // 13 is totally ramified
        let s = split_prime(&k, 13).unwrap();
        assert_eq!(splitting_type(&s), vec![(3, 1)]);
        assert_eq!(product_of_factors(&k, &s).unwrap(), k.p_ideal(13));
    }
}
