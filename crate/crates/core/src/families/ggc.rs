use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

/// Euler's constant at double precision.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Largest `xmax` accepted by the trial-division scans.
pub const MAX_SCAN: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GgcVerdict {
    GgcHolds,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaAPrime {
    pub p: u64,
    pub n: u64,
    pub m: u64,
    pub threshold: f64,
}

/// `n, m > (log p)^T` with `n² | p - 1` and `m² | p + 1`.
pub fn lemma_a_predicate(p: u64, n: u64, m: u64, t: f64) -> bool {
    let threshold = (p as f64).ln().powf(t);
    (p - 1) % (n * n) == 0 && (p + 1) % (m * m) == 0 && n as f64 > threshold && m as f64 > threshold
}

/// Primes `p ≡ 1 (mod 4)` up to `xmax` whose largest square divisors of
/// `p ∓ 1` both exceed `(log p)^T`.
pub fn lemma_a_scan(xmax: u64, t: f64) -> Result<Vec<LemmaAPrime>> {
    if xmax < 13 {
        return Err(Error::domain("xmax must be at least 13"));
    }
    if xmax > MAX_SCAN {
        return Err(Error::domain(format!(
            "xmax above {MAX_SCAN} is not supported"
        )));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain("T must be a nonnegative real"));
    }
    Ok(arith::primes_in(5, xmax)
        .into_iter()
        .filter(|p| p % 4 == 1)
        .filter_map(|p| {
            let threshold = (p as f64).ln().powf(t);
            let n = arith::largest_square_divisor_root(p - 1);
            let m = arith::largest_square_divisor_root(p + 1);
            (n as f64 > threshold && m as f64 > threshold).then_some(LemmaAPrime {
                p,
                n,
                m,
                threshold,
            })
        })
        .collect())
}

/// Discriminant of `Q(√r)` for a squarefree `r`.
pub fn field_discriminant(radicand: i64) -> i64 {
    if radicand.rem_euclid(4) == 1 {
        radicand
    } else {
        4 * radicand
    }
}

/// Number of reduced primitive forms `(a, b, c)` of discriminant `d < 0`.
pub fn class_number_from_discriminant(d: i64) -> Result<u64> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(Error::domain(format!("{d} is not a negative discriminant")));
    }
    let dd = d as i128;
    let mut h = 0u64;
    let mut a: i128 = 1;
    while 3 * a * a <= -dd {
        for b in -a + 1..=a {
            if (b - dd).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - dd;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    Ok(h)
}

/// Class number of `Q(√r)` for a negative squarefree radicand.
pub fn imag_quadratic_class_number(radicand: i64) -> Result<u64> {
    if radicand >= 0 {
        return Err(Error::domain("radicand must be negative"));
    }
    if arith::squarefree_part(radicand) != radicand {
        return Err(Error::invariant(format!("{radicand} is not squarefree")));
    }
    class_number_from_discriminant(field_discriminant(radicand))
}

/// Number of roots of unity in the imaginary quadratic field of discriminant `-dk`.
pub fn roots_of_unity(dk: u64) -> u32 {
    match dk {
        3 => 6,
        4 => 4,
        _ => 2,
    }
}

/// `(ω √d / 4π) (log d + 2 + γ - log π)`.
pub fn lemma_b_bound(dk: u64, omega: u32) -> Result<f64> {
    if dk < 3 {
        return Err(Error::domain("dK must be at least 3"));
    }
    let d = dk as f64;
    let pi = std::f64::consts::PI;
    Ok(omega as f64 * d.sqrt() / (4.0 * pi) * (d.ln() + 2.0 + EULER_GAMMA - pi.ln()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KurodaResult {
    pub q: BigRational,
    pub valid: bool,
}

/// `q = 2 hL / (h1 h2 h3)`, valid when `q ∈ {1, 2}`.
pub fn kuroda_check(h1: u64, h2: u64, h3: u64, hl: u64) -> Result<KurodaResult> {
    if [h1, h2, h3, hl].contains(&0) {
        return Err(Error::domain("class numbers must be positive"));
    }
    let q = BigRational::new(
        BigInt::from(2) * BigInt::from(hl),
        BigInt::from(h1) * BigInt::from(h2) * BigInt::from(h3),
    );
    let valid =
        q == BigRational::from_integer(1.into()) || q == BigRational::from_integer(2.into());
    Ok(KurodaResult { q, valid })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GgcCandidate {
    pub p: u64,
    pub n: u64,
    pub m: u64,
    pub threshold: f64,
    pub radicand: i64,
    pub disc: i64,
    pub h_k2: u64,
    pub lemma_b_bound: f64,
    pub bound_ok: bool,
    pub verdict: GgcVerdict,
}

/// Class number of `Q(√(1 - p²))`, its analytic upper bound and the verdict for one
/// prime (the square-divisor predicate is not required).
pub fn evaluate_ggc_candidate(p: u64, n: u64, m: u64, threshold: f64) -> Result<GgcCandidate> {
    let one_minus = 1i64 - (p as i64) * (p as i64);
    let radicand = arith::squarefree_part(one_minus);
    let disc = field_discriminant(radicand);
    let h_k2 = imag_quadratic_class_number(radicand)?;
    let dk = disc.unsigned_abs();
    let bound = lemma_b_bound(dk, roots_of_unity(dk))?;
    Ok(GgcCandidate {
        p,
        n,
        m,
        threshold,
        radicand,
        disc,
        h_k2,
        lemma_b_bound: bound,
        bound_ok: h_k2 as f64 <= bound,
        verdict: if h_k2 % p != 0 {
            GgcVerdict::GgcHolds
        } else {
            GgcVerdict::Unknown
        },
    })
}

pub fn ggc_scan(xmax: u64, t: f64) -> Result<Vec<GgcCandidate>> {
    lemma_a_scan(xmax, t)?
        .into_par_iter()
        .map(|c| evaluate_ggc_candidate(c.p, c.n, c.m, c.threshold))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_a_examples() {
        let l = lemma_a_scan(100, 1.0).unwrap();
        let c17 = l.iter().find(|c| c.p == 17).unwrap();
        assert_eq!((c17.n, c17.m), (4, 3));
        assert!(l.iter().all(|c| c.p != 13));
        assert!(l.iter().all(|c| c.n % 2 == 0));
        let l0 = lemma_a_scan(100, 0.0).unwrap();
        assert!(l0.iter().all(|c| c.n >= 2 && c.m >= 2));
        assert!(lemma_a_scan(12, 1.0).is_err());
    }

    #[test]
    fn class_numbers() {
        assert_eq!(imag_quadratic_class_number(-1).unwrap(), 1);
        assert_eq!(imag_quadratic_class_number(-6).unwrap(), 2);
        assert_eq!(imag_quadratic_class_number(-163).unwrap(), 1);
        assert_eq!(imag_quadratic_class_number(-5).unwrap(), 2);
        assert_eq!(imag_quadratic_class_number(-23).unwrap(), 3);
        assert!(imag_quadratic_class_number(-12).is_err());
    }

    #[test]
    fn bound_examples() {
        let b = lemma_b_bound(24, 2).unwrap();
        assert!((b - 3.59).abs() < 0.01, "{b}");
        assert!(lemma_b_bound(3, 6).unwrap() >= 1.0);
        assert!(lemma_b_bound(4, 4).unwrap() >= 1.0);
    }

    #[test]
    fn kuroda_examples() {
        assert!(kuroda_check(1, 2, 1, 1).unwrap().valid);
        let r = kuroda_check(1, 1, 1, 1).unwrap();
        assert!(r.valid && r.q == BigRational::from_integer(2.into()));
        let r = kuroda_check(1, 3, 1, 1).unwrap();
        assert!(!r.valid);
        assert_eq!(r.q, BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn ggc_examples() {
        let c = evaluate_ggc_candidate(17, 4, 3, 17f64.ln()).unwrap();
        assert_eq!(c.radicand, -2);
        assert_eq!(c.h_k2, 1);
        assert_eq!(c.verdict, GgcVerdict::GgcHolds);
        let c5 = evaluate_ggc_candidate(5, 2, 1, 0.0).unwrap();
        assert_eq!((c5.radicand, c5.h_k2), (-6, 2));
        assert_eq!(c5.verdict, GgcVerdict::GgcHolds);
        let scan = ggc_scan(1000, 1.0).unwrap();
        assert!(scan.iter().any(|c| c.p == 17));
        assert!(scan.iter().all(|c| c.bound_ok));
    }
}
