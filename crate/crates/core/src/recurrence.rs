//! Third-order recurrences `F_{n+3} = a2 F_{n+2} + a1 F_{n+1} + a0 F_n` with
//! `F_0 = F_1 = 0`, `F_2 = 1`, read modulo `p^2` as a screen for the unit
//! congruence.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, NumberField};
use crate::ring::{factor_mod_p, IntPoly};
use crate::torsion::{condition2, UnitData};

/// Coefficients of `x^3 - a2 x^2 - a1 x - a0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecurrenceSpec {
    pub a2: BigInt,
    pub a1: BigInt,
    pub a0: BigInt,
}

impl RecurrenceSpec {
    pub fn new(a2: i64, a1: i64, a0: i64) -> Self {
        RecurrenceSpec {
            a2: a2.into(),
            a1: a1.into(),
            a0: a0.into(),
        }
    }

    /// Read the recurrence off a monic cubic `x^3 + c2 x^2 + c1 x + c0`.
    pub fn from_poly(f: &IntPoly) -> Result<Self> {
        if f.degree() != 3 || !f.is_monic() {
            return Err(Error::domain(format!("{f} is not a monic cubic")));
        }
        Ok(RecurrenceSpec {
            a2: -f.coeff(2),
            a1: -f.coeff(1),
            a0: -f.coeff(0),
        })
    }

    pub fn poly(&self) -> IntPoly {
        IntPoly::new(vec![
            -self.a0.clone(),
            -self.a1.clone(),
            -self.a2.clone(),
            BigInt::one(),
        ])
    }

    /// Minimal polynomial of a unit of a cubic field, or `None` when the unit
    /// lies in a proper subfield (characteristic polynomial not squarefree).
    pub fn from_unit(k: &NumberField, unit: &FieldElement) -> Result<Option<Self>> {
        if !k.is_cubic() {
            return Err(Error::domain("recurrence screen needs a cubic field"));
        }
        let cp = k.charpoly(unit)?;
        if cp.iter().any(|c| !c.is_integer()) {
            return Err(Error::domain("unit is not integral"));
        }
        let f = IntPoly::new(cp.iter().map(|c| c.to_integer()).collect());
        if f.discriminant()?.is_zero() {
            return Ok(None);
        }
        Self::from_poly(&f).map(Some)
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a2, a1, a0) = ({}, {}, {})", self.a2, self.a1, self.a0)
    }
}

type Mat3 = [[BigInt; 3]; 3];

fn mat_mul(a: &Mat3, b: &Mat3, m: &BigInt) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..3)
                .map(|k| &a[i][k] * &b[k][j])
                .sum::<BigInt>()
                .mod_floor(m)
        })
    })
}

/// `F_n mod m` by square-and-multiply on the companion matrix.
pub fn f_index_mod(spec: &RecurrenceSpec, n: u64, m: &BigInt) -> BigInt {
    let z = BigInt::zero;
    let o = BigInt::one;
    let comp: Mat3 = [
        [
            spec.a2.mod_floor(m),
            spec.a1.mod_floor(m),
            spec.a0.mod_floor(m),
        ],
        [o(), z(), z()],
        [z(), o(), z()],
    ];
    let mut acc: Mat3 = [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]];
    for bit in (0..64 - n.leading_zeros()).rev() {
        acc = mat_mul(&acc, &acc, m);
        if (n >> bit) & 1 == 1 {
            acc = mat_mul(&acc, &comp, m);
        }
    }
    // (F_{n+2}, F_{n+1}, F_n) = M^n (F_2, F_1, F_0) with F_2 = 1
    acc[2][0].mod_floor(m)
}

/// `F_0 .. F_{n}` mod `m` by direct iteration.
pub fn iterate_mod(spec: &RecurrenceSpec, n: usize, m: &BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(), BigInt::zero(), BigInt::one().mod_floor(m)];
    while v.len() <= n {
        let l = v.len();
        let next =
            (&spec.a2 * &v[l - 1] + &spec.a1 * &v[l - 2] + &spec.a0 * &v[l - 3]).mod_floor(m);
        v.push(next);
    }
    v.truncate(n + 1);
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CubicSplitting {
    SplitCompletely,
    OnePlusTwo,
    Inert,
}

impl CubicSplitting {
    /// The index `p^k - 1` evaluated by the screen.
    pub fn index(self, p: u64) -> u64 {
        match self {
            CubicSplitting::SplitCompletely => p - 1,
            CubicSplitting::OnePlusTwo => p * p - 1,
            CubicSplitting::Inert => p * p * p - 1,
        }
    }
}

impl fmt::Display for CubicSplitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CubicSplitting::SplitCompletely => "split completely",
            CubicSplitting::OnePlusTwo => "1+2",
            CubicSplitting::Inert => "inert",
        })
    }
}

/// Splitting shape of the companion polynomial at an unramified prime.
pub fn splitting_of(spec: &RecurrenceSpec, p: u64) -> Result<Option<CubicSplitting>> {
    let degs: Vec<isize> = factor_mod_p(&spec.poly(), p)?
        .iter()
        .map(|(g, e)| if *e > 1 { -1 } else { g.degree() })
        .collect();
    Ok(match degs.as_slice() {
        [1, 1, 1] => Some(CubicSplitting::SplitCompletely),
        [1, 2] => Some(CubicSplitting::OnePlusTwo),
        [3] => Some(CubicSplitting::Inert),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScreenResult {
    pub p: u64,
    pub splitting: CubicSplitting,
    pub index: u64,
    #[serde(serialize_with = "ser_bigint")]
    pub value: BigInt,
    pub nonzero: bool,
    pub implied_witness: bool,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ScreenOutcome {
    Evaluated(ScreenResult),
    NotApplicable(String),
}

impl ScreenOutcome {
    pub fn result(&self) -> Option<&ScreenResult> {
        match self {
            ScreenOutcome::Evaluated(r) => Some(r),
            ScreenOutcome::NotApplicable(_) => None,
        }
    }
}

pub fn screen(spec: &RecurrenceSpec, p: u64, splitting: CubicSplitting) -> Result<ScreenOutcome> {
    if p == 2 || !arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    let d = spec.poly().discriminant()?;
    if (&d % BigInt::from(p)).is_zero() {
        return Ok(ScreenOutcome::NotApplicable(format!(
            "{p} divides d(f) = {d}"
        )));
    }
    let index = splitting.index(p);
    let m = arith::pow_u64(p, 2);
    let value = f_index_mod(spec, index, &m);
    let nonzero = !value.is_zero();
    Ok(ScreenOutcome::Evaluated(ScreenResult {
        p,
        splitting,
        index,
        value,
        nonzero,
        implied_witness: nonzero,
    }))
}

/// Screen with the splitting read off the companion polynomial.
pub fn screen_auto(spec: &RecurrenceSpec, p: u64) -> Result<ScreenOutcome> {
    if p == 2 || !arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    let d = spec.poly().discriminant()?;
    if (&d % BigInt::from(p)).is_zero() {
        return Ok(ScreenOutcome::NotApplicable(format!(
            "{p} divides d(f) = {d}"
        )));
    }
    match splitting_of(spec, p)? {
        Some(s) => screen(spec, p, s),
        None => Err(Error::invariant("unramified prime with a repeated factor")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub screen: ScreenOutcome,
    pub witness: Option<bool>,
    pub violation: bool,
}

/// Compare the screen with the unit-congruence test for the unit whose
/// minimal polynomial defines the recurrence.
pub fn cross_check(
    k: &NumberField,
    unit: &UnitData,
    spec: &RecurrenceSpec,
    p: u64,
) -> Result<ConsistencyReport> {
    if !k.eval_at(&spec.poly(), &unit.unit)?.is_zero() {
        return Err(Error::domain(
            "recurrence polynomial does not vanish at the unit",
        ));
    }
    let outcome = screen_auto(spec, p)?;
    let witness = condition2(k, p, unit).map(|r| r.holds);
    let Some(res) = outcome.result() else {
        return Ok(ConsistencyReport {
            screen: outcome,
            witness: witness.ok(),
            violation: false,
        });
    };
    let witness = witness?;
    let violation = res.nonzero && !witness;
    Ok(ConsistencyReport {
        screen: outcome,
        witness: Some(witness),
        violation,
    })
}
