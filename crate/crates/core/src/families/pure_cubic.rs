use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::numberfield::{split_prime, splitting_type, FieldElement, NumberField, PrimeFactor};
use crate::recurrence::CubicSplitting;
use crate::ring::IntPoly;
use crate::torsion::{condition2_with_factors, Condition2Report, UnitData};

/// `Q(∛(p³ - 1))` with `α³ = p³ - 1` and the unit `ε = p² + pα + α² = 1/(p - α)`.
#[derive(Clone, Debug)]
pub struct PureCubicInstance {
    pub p: u64,
    pub field: NumberField,
    pub unit: FieldElement,
}

impl PureCubicInstance {
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || !arith::is_prime(p) {
            return Err(Error::domain(format!("{p} is not a prime >= 5")));
        }
        let pi = BigInt::from(p);
        let c = BigInt::from(1) - &pi * &pi * &pi;
        let f = IntPoly::new(vec![c, 0.into(), 0.into(), 1.into()]);
        let field = NumberField::new(&f, None)?;
        let unit = field.from_power_coeffs(&[&pi * &pi, pi.clone(), 1.into()], &1.into())?;
        let p_minus_alpha = field.from_power_coeffs(&[pi, (-1).into()], &1.into())?;
        if !field.mul(&unit, &p_minus_alpha)?.is_one() {
            return Err(Error::invariant("ε (p - α) != 1"));
        }
        Ok(PureCubicInstance { p, field, unit })
    }

    pub fn factors(&self) -> Result<Vec<PrimeFactor>> {
        split_prime(&self.field, self.p)
    }

    /// Splitting of `p` read from the factorization, checked against the
    /// residue of `p` modulo 3.
    pub fn splitting(&self, factors: &[PrimeFactor]) -> Result<CubicSplitting> {
        let shape = splitting_type(factors);
        let s = match shape.as_slice() {
            [(1, 1), (1, 1), (1, 1)] => CubicSplitting::SplitCompletely,
            [(1, 1), (1, 2)] => CubicSplitting::OnePlusTwo,
            _ => return Err(Error::invariant(format!("unexpected splitting {shape:?}"))),
        };
        let expected = if self.p % 3 == 1 {
            CubicSplitting::SplitCompletely
        } else {
            CubicSplitting::OnePlusTwo
        };
        if s != expected {
            return Err(Error::invariant(format!(
                "splitting of {} is {s}, expected {expected}",
                self.p
            )));
        }
        Ok(s)
    }

    pub fn condition2(&self, factors: &[PrimeFactor]) -> Result<Condition2Report> {
        condition2_with_factors(
            &self.field,
            self.p,
            &UnitData::new(self.unit.clone()),
            factors,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PureCubicRow {
    pub p: u64,
    pub splitting: CubicSplitting,
    pub condition2_holds: bool,
    pub class_number: Option<u64>,
    pub p_divides_h: Option<bool>,
}

pub fn evaluate_pure_cubic(p: u64, h_data: &BTreeMap<u64, u64>) -> Result<PureCubicRow> {
    let inst = PureCubicInstance::new(p)?;
    let factors = inst.factors()?;
    let splitting = inst.splitting(&factors)?;
    let c2 = inst.condition2(&factors)?;
    let h = h_data.get(&p).copied();
    Ok(PureCubicRow {
        p,
        splitting,
        condition2_holds: c2.holds,
        class_number: h,
        p_divides_h: h.map(|h| h % p == 0),
    })
}

/// Evaluate every prime in `[pmin, pmax]`, in parallel, ordered by `p`.
pub fn pure_cubic_scan(
    pmin: u64,
    pmax: u64,
    h_data: &BTreeMap<u64, u64>,
) -> Result<Vec<PureCubicRow>> {
    if pmin < 5 || pmin > pmax {
        return Err(Error::domain("need 5 <= pmin <= pmax"));
    }
    arith::primes_in(pmin, pmax)
        .into_par_iter()
        .map(|p| evaluate_pure_cubic(p, h_data))
        .collect()
}

/// Read `p,h` rows; lines starting with `#` are comments.
pub fn load_h_data(path: &Path) -> Result<BTreeMap<u64, u64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    parse_h_data(&text)
}

pub fn parse_h_data(text: &str) -> Result<BTreeMap<u64, u64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(i + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        if rec.get(0) == Some("p") {
            continue;
        }
        let parse = |j: usize| -> Result<u64> {
            rec.get(j)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("column {} is not a positive integer", j + 1),
                })
        };
        out.insert(parse(0)?, parse(1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let none = BTreeMap::new();
        let r7 = evaluate_pure_cubic(7, &none).unwrap();
        assert_eq!(r7.splitting, CubicSplitting::SplitCompletely);
        assert!(r7.condition2_holds);
        assert_eq!(r7.p_divides_h, None);
        let r5 = evaluate_pure_cubic(5, &none).unwrap();
        assert_eq!(r5.splitting, CubicSplitting::OnePlusTwo);
        assert!(r5.condition2_holds);
    }

    #[test]
    fn residue_formula_for_split_primes() {
        // ε^(p-1) ≡ 1 - p α^(2p-3) mod p²
        for p in [7u64, 13, 19, 31] {
            let inst = PureCubicInstance::new(p).unwrap();
            let m = BigInt::from(p * p);
            let lhs = inst
                .field
                .pow_mod(&inst.unit, &BigInt::from(p - 1), &m)
                .unwrap();
            let a = inst.field.alpha();
            let apow = inst
                .field
                .pow_mod(&a, &BigInt::from(2 * p - 3), &m)
                .unwrap();
            let rhs = inst
                .field
                .one()
                .sub(&apow.scale(&BigInt::from(p)))
                .reduce_mod(&m)
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn h_data_parsing() {
        let h = parse_h_data("# comment\np,h\n2791, 31876011\n").unwrap();
        assert_eq!(h.get(&2791), Some(&31876011));
        assert!(parse_h_data("5,x\n").is_err());
    }
}
