use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::ring::IntPoly;

/// A number field `Q(α)` with `α` a root of a monic irreducible integer
/// polynomial, together with a Z-basis of an order containing `Z[α]`.
///
/// Basis element `b_i` is `(row i of numerators) / basis_den` in powers of
/// `α`. All element coordinates are taken over this basis.
#[derive(Clone, Debug)]
pub struct NumberField {
    poly: IntPoly,
    n: usize,
    basis_num: Vec<Vec<BigInt>>,
    basis_den: BigInt,
    basis_inv: RatMatrix,
    power_basis: bool,
    poly_disc: BigInt,
    disc: BigInt,
    signature: (usize, usize),
    // table[i][j] = coordinates of b_i * b_j
    table: Vec<Vec<Vec<BigInt>>>,
}

/// An element `coords / den` over the field's basis, normalized so that
/// `den > 0` and `gcd(den, content) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<BigInt>,
    den: BigInt,
}

impl FieldElement {
    pub fn new(coords: Vec<BigInt>, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        let mut e = FieldElement { coords, den };
        e.normalize();
        Ok(e)
    }

    pub fn integral(coords: Vec<BigInt>) -> Self {
        FieldElement {
            coords,
            den: BigInt::one(),
        }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self::integral(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.coords.iter_mut() {
                *c = -&*c;
            }
        }
        let g = self.coords.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            self.den = &self.den / &g;
            for c in self.coords.iter_mut() {
                *c = &*c / &g;
            }
        }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one()
            && self.coords.first().is_some_and(One::is_one)
            && self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates reduced into `[0, m)`; requires an integral element.
    pub fn reduce_mod(&self, m: &BigInt) -> Result<FieldElement> {
        if !self.is_integral() {
            return Err(Error::domain("cannot reduce a non-integral element"));
        }
        Ok(FieldElement::integral(
            self.coords.iter().map(|c| c.mod_floor(m)).collect(),
        ))
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            coords: self.coords.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        let d = &self.den * &o.den;
        let coords = self
            .coords
            .iter()
            .zip(&o.coords)
            .map(|(a, b)| a * &o.den + b * &self.den)
            .collect();
        FieldElement::new(coords, d).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> FieldElement {
        FieldElement::new(
            self.coords.iter().map(|c| c * k).collect(),
            self.den.clone(),
        )
        .expect("nonzero denominator")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))?;
        if !self.den.is_one() {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Turn a rational vector into integer numerators over a common positive
/// denominator.
fn common_denominator(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let nums = v.iter().map(|q| (q * rat(&den)).to_integer()).collect();
    (nums, den)
}

impl NumberField {
    /// Build a field from a monic irreducible polynomial of degree 2 to 4 and
    /// an optional basis (rows expressing basis elements in powers of `α`).
    pub fn new(poly: &IntPoly, basis: Option<&RatMatrix>) -> Result<Self> {
        let deg = poly.degree();
        if !(2..=4).contains(&deg) {
            return Err(Error::Unsupported(format!(
                "defining polynomial of degree {deg}"
            )));
        }
        if !poly.is_monic() {
            return Err(Error::domain(format!("{poly} is not monic")));
        }
        if !poly.is_irreducible_small()? {
            return Err(Error::Reducible(poly.to_string()));
        }
        let n = deg as usize;
        let poly_disc = poly.discriminant()?;
        let r1 = poly.count_real_roots()?;
        let signature = (r1, (n - r1) / 2);

        let identity: RatMatrix = linalg::identity_int(n)
            .iter()
            .map(|row| row.iter().map(rat).collect())
            .collect();
        let b = match basis {
            None => identity.clone(),
            Some(m) => {
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return Err(Error::input(format!("basis must be {n} x {n}")));
                }
                m.clone()
            }
        };
        if b[0] != identity[0] {
            return Err(Error::input("first basis element must be 1"));
        }
        let basis_inv =
            linalg::inverse_rat(&b).ok_or_else(|| Error::input("basis matrix is singular"))?;
        if basis_inv.iter().flatten().any(|q| !q.is_integer()) {
            return Err(Error::input("basis does not span an order containing Z[α]"));
        }
        let det_b = linalg::det_rat(&b);
        let disc_q = rat(&poly_disc) * &det_b * &det_b;
        if !disc_q.is_integer() {
            return Err(Error::input(
                "squared index of the basis does not divide the polynomial discriminant",
            ));
        }
        let flat: Vec<BigRational> = b.iter().flatten().cloned().collect();
        let (nums, basis_den) = common_denominator(&flat);
        let basis_num: Vec<Vec<BigInt>> = nums.chunks(n).map(<[BigInt]>::to_vec).collect();

        let mut field = NumberField {
            poly: poly.clone(),
            n,
            basis_num,
            basis_den,
            basis_inv,
            power_basis: basis.is_none() || b == identity,
            poly_disc,
            disc: disc_q.to_integer(),
            signature,
            table: Vec::new(),
        };
        field.table = field.build_table()?;
        Ok(field)
    }

    fn build_table(&self) -> Result<Vec<Vec<Vec<BigInt>>>> {
        let n = self.n;
        let polys: Vec<IntPoly> = self
            .basis_num
            .iter()
            .map(|r| IntPoly::new(r.clone()))
            .collect();
        let d2 = &self.basis_den * &self.basis_den;
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = polys[i].mul(&polys[j]).rem_monic(&self.poly);
                let e = self.from_power_coeffs(prod.coeffs(), &d2)?;
                if !e.is_integral() {
                    return Err(Error::input(format!(
                        "basis is not closed under multiplication (b{i} * b{j})"
                    )));
                }
                table[i][j] = e.coords.clone();
                table[j][i] = e.coords;
            }
        }
        Ok(table)
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn poly_disc(&self) -> &BigInt {
        &self.poly_disc
    }

    /// Discriminant of the order spanned by the basis (the field
    /// discriminant when the basis is integral).
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn has_power_basis(&self) -> bool {
        self.power_basis
    }

    /// Numerators and common denominator of the basis in powers of `α`.
    pub fn basis(&self) -> (&[Vec<BigInt>], &BigInt) {
        (&self.basis_num, &self.basis_den)
    }

    /// True for complex cubic and pure imaginary quartic fields, the shapes
    /// the unit-congruence criterion covers.
    pub fn is_criterion_eligible(&self) -> bool {
        matches!((self.n, self.signature), (3, (1, 1)) | (4, (0, 2)))
    }

    pub fn is_cubic(&self) -> bool {
        self.n == 3
    }

    pub fn is_quartic(&self) -> bool {
        self.n == 4
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![BigInt::zero(); self.n];
        c[0] = BigInt::one();
        FieldElement::integral(c)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::integral(vec![BigInt::zero(); self.n])
    }

    pub fn scalar(&self, k: &BigInt) -> FieldElement {
        self.one().scale(k)
    }

    /// The generator `α`.
    pub fn alpha(&self) -> FieldElement {
        let mut c = vec![BigInt::zero(); self.n];
        c[1] = BigInt::one();
        self.from_power_coeffs(&c, &BigInt::one())
            .expect("alpha lies in the order")
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.coords.len() != self.n {
            return Err(Error::input(format!(
                "element has {} coordinates, field degree is {}",
                a.coords.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// Element given by `(Σ nums[j] α^j) / den`.
    pub fn from_power_coeffs(&self, nums: &[BigInt], den: &BigInt) -> Result<FieldElement> {
        if nums.len() > self.n {
            let reduced = IntPoly::new(nums.to_vec()).rem_monic(&self.poly);
            return self.from_power_coeffs(reduced.coeffs(), den);
        }
        let q: Vec<BigRational> = (0..self.n)
            .map(|j| BigRational::new(nums.get(j).cloned().unwrap_or_default(), den.clone()))
            .collect();
        let coords: Vec<BigRational> = (0..self.n)
            .map(|k| (0..self.n).map(|j| &q[j] * &self.basis_inv[j][k]).sum())
            .collect();
        let (c, d) = common_denominator(&coords);
        FieldElement::new(c, d)
    }

    pub fn from_power_i64(&self, nums: &[i64], den: i64) -> Result<FieldElement> {
        let v: Vec<BigInt> = nums.iter().map(|&x| BigInt::from(x)).collect();
        self.from_power_coeffs(&v, &BigInt::from(den))
    }

    /// `g(α)` for an integer polynomial `g`.
    pub fn eval_int_poly(&self, g: &IntPoly) -> Result<FieldElement> {
        self.from_power_coeffs(g.coeffs(), &BigInt::one())
    }

    /// Evaluate an integer polynomial at an arbitrary element.
    pub fn eval_at(&self, g: &IntPoly, x: &FieldElement) -> Result<FieldElement> {
        let mut acc = self.zero();
        for c in g.coeffs().iter().rev() {
            acc = self.mul(&acc, x)?.add(&self.scalar(c));
        }
        Ok(acc)
    }

    /// Numerators and denominator of an element in powers of `α`.
    pub fn to_power_coeffs(&self, a: &FieldElement) -> (Vec<BigInt>, BigInt) {
        let nums: Vec<BigInt> = (0..self.n)
            .map(|j| {
                (0..self.n)
                    .map(|i| &a.coords[i] * &self.basis_num[i][j])
                    .sum()
            })
            .collect();
        let den = &a.den * &self.basis_den;
        let g = nums.iter().fold(den.clone(), |g, c| g.gcd(c));
        if g.is_one() || g.is_zero() {
            (nums, den)
        } else {
            (nums.iter().map(|c| c / &g).collect(), den / g)
        }
    }

    fn mul_integral(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &ab * t;
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        FieldElement::new(self.mul_integral(&a.coords, &b.coords), &a.den * &b.den)
    }

    /// Matrix `M` with `b_i * a = Σ_j M[i][j] b_j`.
    pub fn mul_matrix(&self, a: &FieldElement) -> Result<RatMatrix> {
        self.check(a)?;
        let den = rat(&a.den);
        Ok((0..self.n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); self.n];
                e[i] = BigInt::one();
                self.mul_integral(&e, &a.coords)
                    .iter()
                    .map(|c| rat(c) / &den)
                    .collect()
            })
            .collect())
    }

    pub fn norm(&self, a: &FieldElement) -> Result<BigRational> {
        Ok(linalg::det_rat(&self.mul_matrix(a)?))
    }

    /// Characteristic polynomial of multiplication by `a`, monic, low degree
    /// first.
    pub fn charpoly(&self, a: &FieldElement) -> Result<Vec<BigRational>> {
        Ok(linalg::charpoly_rat(&self.mul_matrix(a)?))
    }

    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement> {
        let m = self.mul_matrix(a)?;
        let inv = linalg::inverse_rat(&m).ok_or_else(|| Error::domain("zero has no inverse"))?;
        let (c, d) = common_denominator(&inv[0]);
        FieldElement::new(c, d)
    }

    /// `a^e` with coordinates reduced into `[0, m)` after every
    /// multiplication.
    pub fn pow_mod(&self, a: &FieldElement, e: &BigInt, m: &BigInt) -> Result<FieldElement> {
        self.check(a)?;
        if e.is_negative() {
            return Err(Error::domain("negative exponent"));
        }
        if e.is_zero() && a.is_zero() {
            return Err(Error::domain("zero to the power zero"));
        }
        let base = a.reduce_mod(m)?;
        let mut acc = self.one().reduce_mod(m)?;
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc)?.reduce_mod(m)?;
            if e.bit(i) {
                acc = self.mul(&acc, &base)?.reduce_mod(m)?;
            }
        }
        Ok(acc)
    }

    /// Exact power, negative exponents allowed for nonzero `a`.
    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inverse(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    /// Render an element in powers of `var`, e.g. `1 + 5α + 15α³` with
    /// `unicode` or `1 + 5*a + 15*a^3` without.
    pub fn render(&self, a: &FieldElement, var: &str, unicode: bool) -> String {
        let (nums, den) = self.to_power_coeffs(a);
        let body = render_poly(&nums, var, unicode);
        if den.is_one() {
            body
        } else {
            format!("({body})/{den}")
        }
    }
}

fn superscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// Render `Σ c_j var^j` from the constant term upwards.
pub fn render_poly(coeffs: &[BigInt], var: &str, unicode: bool) -> String {
    let mut out = String::new();
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let monomial = match (j, unicode) {
            (0, _) => String::new(),
            (1, _) => var.to_string(),
            (_, true) => format!("{var}{}", superscript(j)),
            (_, false) => format!("{var}^{j}"),
        };
        if j == 0 {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&monomial);
        } else if unicode {
            out.push_str(&format!("{mag}{monomial}"));
        } else {
            out.push_str(&format!("{mag}*{monomial}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex62() -> NumberField {
        NumberField::new(&IntPoly::from_i64(&[27, -4, 0, 1]), None).unwrap()
    }

    fn ex63() -> NumberField {
        NumberField::new(&IntPoly::from_i64(&[3, 0, -2, 0, 1]), None).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn construction() {
        let k = ex62();
        assert_eq!(k.signature(), (1, 1));
        assert!(k.has_power_basis() && k.is_criterion_eligible());
        assert_eq!(k.disc(), &BigInt::from(-19427));
        let q = ex63();
        assert_eq!(q.signature(), (0, 2));
        assert!(q.is_criterion_eligible());
        let quad = NumberField::new(&IntPoly::from_i64(&[-2, 0, 1]), None).unwrap();
        assert!(!quad.is_criterion_eligible());
        assert!(matches!(
            NumberField::new(&IntPoly::from_i64(&[4, 0, 0, 0, 1]), None),
            Err(Error::Reducible(_))
        ));
    }

    #[test]
    fn products() {
        let k = ex62();
        let a = k.alpha();
        let a2 = k.from_power_i64(&[0, 0, 1], 1).unwrap();
        assert_eq!(
            k.mul(&a, &a2).unwrap(),
            FieldElement::from_i64(&[-27, 4, 0])
        );
        assert_eq!(k.mul(&k.one(), &a).unwrap(), a);
        // g = -835 + 265a - 77(a^2 - 3)
        let g = k.from_power_i64(&[-604, 265, -77], 1).unwrap();
        let g2 = k.mul(&g, &g).unwrap();
        let expect = k
            .from_power_i64(&[2027557 - 3 * 186957, -643443, 186957], 1)
            .unwrap();
        assert_eq!(g2, expect);
    }

    #[test]
    fn norms() {
        let p = 5i64;
        let k = NumberField::new(&IntPoly::from_i64(&[1 - p * p * p, 0, 0, 1]), None).unwrap();
        assert_eq!(
            k.norm(&k.alpha()).unwrap(),
            rat(&BigInt::from(p * p * p - 1))
        );
        assert_eq!(
            k.norm(&k.scalar(&BigInt::from(p))).unwrap(),
            rat(&BigInt::from(p * p * p))
        );
        // p - a is a unit
        let u = k.from_power_i64(&[p, -1, 0], 1).unwrap();
        assert!(k.norm(&u).unwrap().abs().is_one());
    }

    #[test]
    fn example_63_power() {
        let k = ex63();
        let eps = k.from_power_i64(&[-2, -1, 1, 1], 1).unwrap();
        let r = k
            .pow_mod(&eps, &BigInt::from(624), &BigInt::from(25))
            .unwrap();
        assert_eq!(r.coords(), big(&[1, 5, 0, 15]).as_slice());
        assert_eq!(k.render(&r, "α", true), "1 + 5α + 15α³");
        assert_eq!(k.render(&r, "a", false), "1 + 5*a + 15*a^3");
    }

    #[test]
    fn example_62_power() {
        let k = ex62();
        let eps = k.from_power_i64(&[-3280, -3462, -729], 1).unwrap();
        assert!(k.norm(&eps).unwrap().abs().is_one());
        let r = k.pow_mod(&eps, &BigInt::from(2), &BigInt::from(9)).unwrap();
        // 1 + 3(a + 2) = 7 + 3a
        assert_eq!(r.coords(), big(&[7, 3, 0]).as_slice());
    }

    #[test]
    fn ingested_basis() {
        // x^3 - x^2 + x - 9 with basis 1, x, (x^2 + 1)/2
        let f = IntPoly::from_i64(&[-9, 1, -1, 1]);
        let h = BigRational::new(BigInt::one(), BigInt::from(2));
        let z = BigRational::zero();
        let o = BigRational::one();
        let b = vec![
            vec![o.clone(), z.clone(), z.clone()],
            vec![z.clone(), o.clone(), z.clone()],
            vec![h.clone(), z.clone(), h.clone()],
        ];
        let k = NumberField::new(&f, Some(&b)).unwrap();
        assert_eq!(k.disc(), &BigInt::from(-516));
        assert!(!k.has_power_basis());
        let fu = k.from_power_i64(&[16, -7, 0], 1).unwrap();
        assert!(k.norm(&fu).unwrap().abs().is_one());
        let a2 = k.from_power_i64(&[0, 0, 1], 1).unwrap();
        assert_eq!(a2.coords(), big(&[-1, 0, 2]).as_slice());
        let inv = k.inverse(&fu).unwrap();
        assert!(inv.is_integral());
        assert!(k.mul(&inv, &fu).unwrap().is_one());
        // a non-order basis is rejected
        let bad = vec![
            vec![o.clone(), z.clone(), z.clone()],
            vec![z.clone(), h.clone(), z.clone()],
            vec![z.clone(), z.clone(), o.clone()],
        ];
        assert!(NumberField::new(&f, Some(&bad)).is_err());
    }
}
