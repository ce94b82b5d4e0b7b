//! Exact dense linear algebra over the integers and rationals.
//! Matrices here are at most 8 x 8, so nothing clever.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_int(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn det_rat(m: &RatMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= a[k][k].clone();
        for i in k + 1..n {
            let factor = &a[i][k] / &a[k][k];
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &a[k][j] * &factor;
                a[i][j] -= v;
            }
        }
    }
    det
}

/// Inverse of a rational matrix, `None` when singular.
pub fn inverse_rat(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(piv, k);
        let inv = a[k][k].recip();
        for x in a[k].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let factor = a[i][k].clone();
                for j in 0..2 * n {
                    let v = &a[k][j] * &factor;
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn identity_int(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier,
/// coefficients low degree first, monic.
pub fn charpoly_rat(m: &RatMatrix) -> Vec<BigRational> {
    let n = m.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk: RatMatrix = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = M * (M_{k-1} + c_{n-k+1} I)
        let mut prev = mk.clone();
        for (i, row) in prev.iter_mut().enumerate() {
            row[i] += coeffs[n - k + 1].clone();
        }
        mk = mat_mul_rat(m, &prev);
        let trace: BigRational = (0..n).map(|i| mk[i][i].clone()).sum();
        coeffs[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

pub fn mat_mul_rat(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..inner).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn rat(rows: &[&[i64]]) -> RatMatrix {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = int(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2(-6-20) + 1(-2-0) = -54
        assert_eq!(det_int(&m), BigInt::from(-54));
        let m = int(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_int(&m), BigInt::from(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = rat(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 2]]);
        let inv = inverse_rat(&m).unwrap();
        let prod = mat_mul_rat(&m, &inv);
        assert_eq!(prod, rat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert!(inverse_rat(&rat(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn charpoly_of_companion() {
        // companion of x^3 - 4x + 27 acting on (1, a, a^2)
        let m = rat(&[&[0, 0, -27], &[1, 0, 4], &[0, 1, 0]]);
        let c = charpoly_rat(&m);
        let expect: Vec<BigRational> = [27, -4, 0, 1]
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        assert_eq!(c, expect);
    }
}
