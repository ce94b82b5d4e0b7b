use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::ring::ModPoly;

/// A full-rank sublattice of the order, stored as an upper-triangular Hermite
/// normal form whose columns are a Z-basis in field-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealHNF {
    matrix: IntMatrix,
}

/// Column-style HNF of the lattice spanned by `cols` (each of length `n`).
///
/// Rows are processed from the bottom up; Euclidean column operations leave
/// one pivot column per row, then entries above each diagonal are reduced
/// modulo that row's diagonal entry.
pub fn hnf_columns(n: usize, cols: &[Vec<BigInt>]) -> Result<IntMatrix> {
    let mut active: Vec<Vec<BigInt>> = cols
        .iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut pivots: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    for row in (0..n).rev() {
        loop {
            let mut nz: Vec<usize> = (0..active.len())
                .filter(|&j| !active[j][row].is_zero())
                .collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| active[a][row].abs().cmp(&active[b][row].abs()));
            let piv = nz[0];
            let pv = active[piv][row].clone();
            for &j in &nz[1..] {
                let q = active[j][row].div_floor(&pv);
                let pcol = active[piv].clone();
                for (x, y) in active[j].iter_mut().zip(&pcol) {
                    *x -= &q * y;
                }
            }
            active.retain(|c| c.iter().any(|x| !x.is_zero()));
        }
        let Some(j) = (0..active.len()).find(|&j| !active[j][row].is_zero()) else {
            return Err(Error::domain("lattice is not of full rank"));
        };
        let mut col = active.swap_remove(j);
        if col[row].is_negative() {
            for x in col.iter_mut() {
                *x = -&*x;
            }
        }
        pivots[row] = col;
    }
    // reduce above the diagonal
    for j in 0..n {
        for i in (0..j).rev() {
            let d = pivots[i][i].clone();
            let q = pivots[j][i].div_floor(&d);
            if !q.is_zero() {
                let pcol = pivots[i].clone();
                for (x, y) in pivots[j].iter_mut().zip(&pcol) {
                    *x -= &q * y;
                }
            }
        }
    }
    Ok((0..n)
        .map(|i| (0..n).map(|j| pivots[j][i].clone()).collect())
        .collect())
}

impl IdealHNF {
    /// The lattice spanned by the given columns.
    pub fn from_columns(n: usize, cols: &[Vec<BigInt>]) -> Result<Self> {
        Ok(IdealHNF {
            matrix: hnf_columns(n, cols)?,
        })
    }

    /// The ideal `(x)` as the lattice `{x b_i}`.
    pub fn principal(k: &NumberField, x: &FieldElement) -> Result<Self> {
        if !x.is_integral() {
            return Err(Error::domain("principal ideal of a non-integral element"));
        }
        let cols: Vec<Vec<BigInt>> = (0..k.degree())
            .map(|i| {
                let mut e = vec![BigInt::zero(); k.degree()];
                e[i] = BigInt::one();
                k.mul(&FieldElement::integral(e), x)
                    .map(|y| y.coords().to_vec())
            })
            .collect::<Result<_>>()?;
        Self::from_columns(k.degree(), &cols)
    }

    /// The whole order.
    pub fn unit(k: &NumberField) -> Self {
        Self::scalar(k, &BigInt::one())
    }

    /// `m` times the order.
    pub fn scalar(k: &NumberField, m: &BigInt) -> Self {
        let n = k.degree();
        IdealHNF {
            matrix: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { m.abs() } else { BigInt::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    /// The ideal `(p, x)`.
    pub fn from_two_elements(k: &NumberField, p: &BigInt, x: &FieldElement) -> Result<Self> {
        // x may be zero (an inert generator equal to the defining polynomial)
        if x.is_zero() {
            return Ok(Self::scalar(k, p));
        }
        let a = Self::principal(k, x)?;
        let b = Self::scalar(k, p);
        a.add(&b)
    }

    /// The ideal `(p, g(α))` for a polynomial residue `g` over `F_p`.
    pub fn from_two_generators(k: &NumberField, p: u64, g: &ModPoly) -> Result<Self> {
        let deg = g.degree();
        if deg < 1 || deg > k.degree() as isize {
            return Err(Error::domain(format!(
                "generator of degree {deg} for a field of degree {}",
                k.degree()
            )));
        }
        let x = k.eval_int_poly(&g.to_int_poly())?;
        Self::from_two_elements(k, &BigInt::from(p), &x)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn degree(&self) -> usize {
        self.matrix.len()
    }

    pub fn norm(&self) -> BigInt {
        (0..self.degree())
            .map(|i| self.matrix[i][i].clone())
            .product()
    }

    fn columns(&self) -> Vec<Vec<BigInt>> {
        let n = self.degree();
        (0..n)
            .map(|j| (0..n).map(|i| self.matrix[i][j].clone()).collect())
            .collect()
    }

    /// Sum of ideals (the lattice spanned by both bases).
    pub fn add(&self, other: &IdealHNF) -> Result<Self> {
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_columns(self.degree(), &cols)
    }

    pub fn multiply(&self, k: &NumberField, other: &IdealHNF) -> Result<Self> {
        let mut cols = Vec::new();
        for a in self.columns() {
            for b in other.columns() {
                let prod = k.mul(
                    &FieldElement::integral(a.clone()),
                    &FieldElement::integral(b),
                )?;
                cols.push(prod.coords().to_vec());
            }
        }
        Self::from_columns(self.degree(), &cols)
    }

    pub fn pow(&self, k: &NumberField, e: u32) -> Result<Self> {
        let mut acc = Self::unit(k);
        for _ in 0..e {
            acc = acc.multiply(k, self)?;
        }
        Ok(acc)
    }

    /// Membership by back-substitution against the triangular basis.
    pub fn contains(&self, x: &FieldElement) -> Result<bool> {
        if !x.is_integral() {
            return Err(Error::domain("membership test for a non-integral element"));
        }
        let n = self.degree();
        if x.degree() != n {
            return Err(Error::input("element and ideal have different degrees"));
        }
        let mut v = x.coords().to_vec();
        for i in (0..n).rev() {
            let (q, r) = v[i].div_rem(&self.matrix[i][i]);
            if !r.is_zero() {
                return Ok(false);
            }
            if !q.is_zero() {
                for (row, vr) in v.iter_mut().enumerate().take(i + 1) {
                    *vr -= &q * &self.matrix[row][i];
                }
            }
        }
        Ok(true)
    }

    /// Inclusion of lattices: every basis column of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &IdealHNF) -> Result<bool> {
        for c in other.columns() {
            if !self.contains(&FieldElement::integral(c))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::IntPoly;

    fn ex62() -> NumberField {
        NumberField::new(&IntPoly::from_i64(&[27, -4, 0, 1]), None).unwrap()
    }

    fn mp(c: &[i64], p: u64) -> ModPoly {
        ModPoly::from_i64(c, p)
    }

    #[test]
    fn zero_second_generator() {
        let k = NumberField::new(&IntPoly::from_i64(&[2, 0, 4, 0, 1]), None).unwrap();
        let g = ModPoly::from_i64(&[2, 0, 4, 0, 1], 13);
        let i = IdealHNF::from_two_generators(&k, 13, &g).unwrap();
        assert_eq!(i, IdealHNF::scalar(&k, &BigInt::from(13)));
    }

    #[test]
    fn hnf_shape() {
        let k = ex62();
        let p1 = IdealHNF::from_two_generators(&k, 3, &mp(&[0, 1], 3)).unwrap();
        assert_eq!(p1.norm(), BigInt::from(3));
        let m = p1.matrix();
        for i in 0..3 {
            assert!(m[i][i].is_positive());
            for j in 0..i {
                assert!(m[i][j].is_zero());
            }
            for j in i + 1..3 {
                assert!(m[i][j] >= BigInt::zero() && m[i][j] < m[i][i]);
            }
        }
        let q = IdealHNF::from_two_generators(&k, 2, &mp(&[1, 1, 1], 2)).unwrap();
        assert_eq!(q.norm(), BigInt::from(4));
        // (5, f(α)) = (5) because f(α) = 0
        let f5 = ModPoly::from_int_poly(k.poly(), &BigInt::from(5));
        let whole = IdealHNF::from_two_generators(&k, 5, &f5).unwrap();
        assert_eq!(whole, IdealHNF::scalar(&k, &BigInt::from(5)));
    }

    #[test]
    fn products_and_membership() {
        let k = ex62();
        let ps: Vec<IdealHNF> = [[0i64, 1], [-1, 1], [1, 1]]
            .iter()
            .map(|g| IdealHNF::from_two_generators(&k, 3, &mp(g, 3)).unwrap())
            .collect();
        let prod = ps[0]
            .multiply(&k, &ps[1])
            .unwrap()
            .multiply(&k, &ps[2])
            .unwrap();
        let three = IdealHNF::scalar(&k, &BigInt::from(3));
        assert_eq!(prod, three);
        assert_eq!(ps[0].pow(&k, 2).unwrap().norm(), BigInt::from(9));
        assert_eq!(ps[0].multiply(&k, &IdealHNF::unit(&k)).unwrap(), ps[0]);
        assert!(ps[0].contains(&k.scalar(&BigInt::from(3))).unwrap());
        assert!(!ps[0].contains(&k.one()).unwrap());
        let a_plus_2 = k.from_power_i64(&[2, 1, 0], 1).unwrap();
        assert!(!three.contains(&a_plus_2).unwrap());
        assert!(ps[2]
            .contains(&k.from_power_i64(&[1, 1, 0], 1).unwrap())
            .unwrap());
    }
}
