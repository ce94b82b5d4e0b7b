//! The unit-congruence test: look for a prime `𝔭 | p` with
//! `ε^(p^f - 1) ≢ 1 (mod 𝔭^(e+1))`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::numberfield::{split_prime, splitting_type, FieldElement, NumberField, PrimeFactor};

/// A fundamental unit with the order of the torsion subgroup and, when that
/// order exceeds 2, a generator of the roots of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitData {
    pub unit: FieldElement,
    pub torsion_order: u32,
    pub torsion_gen: Option<FieldElement>,
}

impl UnitData {
    pub fn new(unit: FieldElement) -> Self {
        UnitData {
            unit,
            torsion_order: 2,
            torsion_gen: None,
        }
    }

    pub fn with_torsion(unit: FieldElement, order: u32, generator: Option<FieldElement>) -> Self {
        UnitData {
            unit,
            torsion_order: order,
            torsion_gen: generator,
        }
    }

    /// Check integrality, norm `±1`, and that the torsion generator really
    /// has the stated order.
    pub fn validate(&self, k: &NumberField) -> Result<()> {
        if !self.unit.is_integral() {
            return Err(Error::domain("unit is not integral over the basis"));
        }
        if !k.norm(&self.unit)?.abs().is_one() {
            return Err(Error::domain("unit does not have norm ±1"));
        }
        if self.torsion_order == 0 || self.torsion_order % 2 == 1 {
            return Err(Error::domain(format!(
                "torsion order {} is not a positive even number",
                self.torsion_order
            )));
        }
        if self.unit_power_is_torsion(k)? {
            return Err(Error::domain("unit is a root of unity"));
        }
        if self.torsion_order > 2 {
            let z = self.torsion_gen.as_ref().ok_or_else(|| {
                Error::input(format!(
                    "torsion order {} needs a torsion generator",
                    self.torsion_order
                ))
            })?;
            if !z.is_integral() {
                return Err(Error::domain("torsion generator is not integral"));
            }
            let w = self.torsion_order as i64;
            if !k.pow(z, w)?.is_one() {
                return Err(Error::domain("torsion generator has the wrong order"));
            }
            for q in arith::factor_u64(w as u64) {
                if k.pow(z, w / q.0 as i64)?.is_one() {
                    return Err(Error::domain("torsion generator is not primitive"));
                }
            }
        }
        Ok(())
    }

    fn unit_power_is_torsion(&self, k: &NumberField) -> Result<bool> {
        let w = self.torsion_order.max(2) as i64;
        Ok(k.pow(&self.unit, w)?.is_one())
    }

    /// `ε ζ^j` for `j = 0..w` (only `j = 0` when `w ≤ 2`).
    pub fn twists(&self, k: &NumberField) -> Result<Vec<FieldElement>> {
        let mut out = vec![self.unit.clone()];
        if self.torsion_order > 2 {
            let z = self
                .torsion_gen
                .as_ref()
                .ok_or_else(|| Error::input("missing torsion generator"))?;
            let mut cur = self.unit.clone();
            for _ in 1..self.torsion_order {
                cur = k.mul(&cur, z)?;
                out.push(cur.clone());
            }
        }
        Ok(out)
    }
}

/// Why the criterion does not apply at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GuardReason {
    PrimeTwo,
    NotEligibleField,
    RamifiedAtThree,
    TotallyRamifiedAtFive,
    SquareSplitSmallPrime,
}

impl fmt::Display for GuardReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GuardReason::PrimeTwo => "p = 2 is not covered",
            GuardReason::NotEligibleField => {
                "field is neither a complex cubic nor a pure imaginary quartic"
            }
            GuardReason::RamifiedAtThree => "3 ramifies",
            GuardReason::TotallyRamifiedAtFive => "5 is totally ramified in a quartic field",
            GuardReason::SquareSplitSmallPrime => "shape P1^2 P2 needs p >= 5",
        };
        f.write_str(s)
    }
}

pub fn applicability_guard(
    k: &NumberField,
    p: u64,
    factors: &[PrimeFactor],
) -> std::result::Result<(), GuardReason> {
    if p == 2 {
        return Err(GuardReason::PrimeTwo);
    }
    if !k.is_criterion_eligible() {
        return Err(GuardReason::NotEligibleField);
    }
    if p == 3 && factors.iter().any(|pf| pf.e > 1) {
        return Err(GuardReason::RamifiedAtThree);
    }
    if k.is_quartic() && p == 5 && factors.len() == 1 && factors[0].e == 4 {
        return Err(GuardReason::TotallyRamifiedAtFive);
    }
    if k.is_cubic() && p < 5 && splitting_type(factors) == [(1, 1), (2, 1)] {
        return Err(GuardReason::SquareSplitSmallPrime);
    }
    Ok(())
}

/// Outcome at one prime above `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeEntry {
    pub factor: PrimeFactor,
    pub exponent: BigInt,
    pub modulus: BigInt,
    /// `ε^(p^f - 1)` with coordinates in `[0, p^(e+1))`.
    pub residue: FieldElement,
    pub congruent: bool,
    /// `ε^(p^f - 1) - 1 ∈ 𝔭` (always expected).
    pub first_power_member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition2Report {
    pub p: u64,
    pub entries: Vec<PrimeEntry>,
    pub witness: Option<usize>,
    pub holds: bool,
}

impl Condition2Report {
    pub fn witness_factor(&self) -> Option<&PrimeFactor> {
        self.witness
            .and_then(|l| self.entries.iter().find(|e| e.factor.label == l))
            .map(|e| &e.factor)
    }
}

/// Evaluate the congruence at one prime for every twist of the unit.
fn evaluate_prime(
    k: &NumberField,
    pf: &PrimeFactor,
    twists: &[FieldElement],
) -> Result<PrimeEntry> {
    let p = pf.p;
    let exponent = pf.residue_order() - 1;
    let modulus = arith::pow_u64(p, pf.e + 1);
    let pid = pf.ideal(k)?;
    let target = pid.pow(k, pf.e + 1)?;
    let one = k.one();
    let mut congruent = true;
    let mut first_power_member = true;
    let mut residue = None;
    for u in twists {
        let r = k.pow_mod(u, &exponent, &modulus)?;
        let diff = r.sub(&one);
        first_power_member &= pid.contains(&diff)?;
        congruent &= target.contains(&diff)?;
        residue.get_or_insert(r);
    }
    if !first_power_member {
        return Err(Error::invariant(format!(
            "ε^(p^f - 1) - 1 is not in {} (residue field order check)",
            pf.describe()
        )));
    }
    Ok(PrimeEntry {
        factor: pf.clone(),
        exponent,
        modulus,
        residue: residue.expect("at least one twist"),
        congruent,
        first_power_member,
    })
}

/// Condition (2) over precomputed prime factors.
pub fn condition2_with_factors(
    k: &NumberField,
    p: u64,
    unit: &UnitData,
    factors: &[PrimeFactor],
) -> Result<Condition2Report> {
    if !unit.unit.is_integral() {
        return Err(Error::domain("unit is not integral over the basis"));
    }
    let twists = unit.twists(k)?;
    let entries: Vec<PrimeEntry> = factors
        .iter()
        .map(|pf| evaluate_prime(k, pf, &twists))
        .collect::<Result<_>>()?;
    let witness = entries
        .iter()
        .find(|e| !e.congruent)
        .map(|e| e.factor.label);
    Ok(Condition2Report {
        p,
        holds: witness.is_some(),
        witness,
        entries,
    })
}

pub fn condition2(k: &NumberField, p: u64, unit: &UnitData) -> Result<Condition2Report> {
    let factors = split_prime(k, p)?;
    condition2_with_factors(k, p, unit, &factors)
}

fn is_one_mod(k: &NumberField, x: &FieldElement, m: &BigInt) -> Result<bool> {
    Ok(x.sub(&k.one()).reduce_mod(m)?.is_zero())
}

/// Single global congruence `ε^(p-1) ≢ 1 (mod p^2 O_K)` for a cubic field in
/// which `p` splits completely.
pub fn condition2_split_crt_check(k: &NumberField, p: u64, unit: &UnitData) -> Result<bool> {
    if !k.is_cubic() {
        return Err(Error::domain("global congruence check needs a cubic field"));
    }
    let factors = split_prime(k, p)?;
    if splitting_type(&factors) != [(1, 1), (1, 1), (1, 1)] {
        return Err(Error::domain(format!("{p} does not split completely")));
    }
    let m = arith::pow_u64(p, 2);
    let r = k.pow_mod(&unit.unit, &BigInt::from(p - 1), &m)?;
    Ok(!is_one_mod(k, &r, &m)?)
}

/// For a degree-one unramified prime, `ε^(p-1) ≡ 1 (mod 𝔭²)` and
/// `ε^(p²-1) ≡ 1 (mod 𝔭²)` agree.
pub fn prop24_equivalence_check(
    k: &NumberField,
    p: u64,
    unit: &UnitData,
    pf: &PrimeFactor,
) -> Result<bool> {
    if pf.e != 1 || pf.f != 1 || pf.p != p {
        return Err(Error::domain("needs a degree-one unramified prime above p"));
    }
    let m = arith::pow_u64(p, 2);
    let sq = pf.ideal(k)?.pow(k, 2)?;
    let test = |e: u64| -> Result<bool> {
        let r = k.pow_mod(&unit.unit, &BigInt::from(e), &m)?;
        sq.contains(&r.sub(&k.one()))
    };
    Ok(test(p - 1)? == test(p * p - 1)?)
}
