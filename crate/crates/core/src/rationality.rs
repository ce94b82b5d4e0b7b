//! Class-field condition and final verdicts.
//!
//! When `p ∤ h` the Hilbert p-class field is trivial and only the unit
//! congruence matters. When `h = p` and `p` splits completely, the index of
//! `Log(P_p)` in `Log(I_p)` is computed from p-adic logarithms of a generator
//! of `Q^p` for a non-principal prime `Q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::numberfield::{split_prime, FieldElement, IdealHNF, NumberField, PrimeFactor};
use crate::ring::{hensel_lift_root, padic_log, IntPoly, PadicApprox};
use crate::torsion::{
    applicability_guard, condition2_with_factors, Condition2Report, GuardReason, UnitData,
};

/// Largest working precision tried before giving up.
pub const MAX_LOG_PRECISION: u32 = 16;

/// A non-principal prime `Q = (q, g_Q(α))` with a generator of `Q^p`.
#[derive(Clone, Debug)]
pub struct AuxIdeal {
    pub q: u64,
    pub gen_poly: IntPoly,
    pub ideal: IdealHNF,
    pub power_gen: FieldElement,
}

impl AuxIdeal {
    pub fn new(
        k: &NumberField,
        q: u64,
        gen_poly: &IntPoly,
        power_gen: FieldElement,
    ) -> Result<Self> {
        let x = k.eval_int_poly(gen_poly)?;
        let ideal = IdealHNF::from_two_elements(k, &BigInt::from(q), &x)?;
        Ok(AuxIdeal {
            q,
            gen_poly: gen_poly.clone(),
            ideal,
            power_gen,
        })
    }
}

/// Everything the verdict needs about one field.
#[derive(Clone, Debug)]
pub struct FieldContext {
    pub label: String,
    pub field: NumberField,
    pub unit: UnitData,
    pub class_number: Option<u64>,
    pub aux: Option<AuxIdeal>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition1Branch {
    TrivialClassNumber,
    SplitCyclicIndex,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition1Report {
    pub branch: Condition1Branch,
    pub index: Option<u64>,
    pub holds: Option<bool>,
}

impl Condition1Report {
    fn undetermined() -> Self {
        Condition1Report {
            branch: Condition1Branch::Undetermined,
            index: None,
            holds: None,
        }
    }
}

/// Split a p-adic vector into the p-adic valuation of its smallest entry
/// and the vector divided by that power.
fn primitive_part(v: &[PadicApprox]) -> Option<(u32, Vec<PadicApprox>)> {
    let t = v.iter().filter_map(PadicApprox::valuation).min()?;
    let scaled = v
        .iter()
        .map(|x| x.shift_down(t))
        .collect::<Result<Vec<_>>>()
        .ok()?;
    Some((t, scaled))
}

/// Index `(Z_p u + p Z_p^n + Q_p L : p Z_p^n + Q_p L)` from the embedded
/// generator `g_i` of `Q^p` and unit `ε_i`, all known to the same precision.
///
/// Returns `Ok(None)` when the precision is too low to decide.
pub fn log_index_from_embeddings(
    p: u64,
    g: &[PadicApprox],
    eps: &[PadicApprox],
) -> Result<Option<u64>> {
    if g.len() != eps.len() || g.is_empty() {
        return Err(Error::input("embedding vectors differ in length"));
    }
    let k = g[0].precision();
    let pm1 = BigInt::from(p - 1);
    let mut u = Vec::with_capacity(g.len());
    for gi in g {
        if gi.valuation() != Some(0) {
            return Err(Error::domain("generator is not prime to p"));
        }
        // log(g^(p-1)) / ((p-1) p); the log has positive valuation
        let l = padic_log(&gi.pow(&pm1))?;
        let inv = PadicApprox::new(&pm1, p, k).inverse()?;
        u.push(l.mul(&inv).shift_down(1)?);
    }
    let mut ell = Vec::with_capacity(eps.len());
    for ei in eps {
        if ei.valuation() != Some(0) {
            return Err(Error::domain("unit embedding is not a p-adic unit"));
        }
        ell.push(padic_log(&ei.pow(&pm1))?);
    }
    let Some((t, lprime)) = primitive_part(&ell) else {
        return Ok(None);
    };
    if t + 1 >= k {
        return Ok(None);
    }
    let j = lprime
        .iter()
        .position(|x| x.valuation() == Some(0))
        .expect("primitive vector has a unit entry");
    let c = u[j].mul(&lprime[j].inverse()?);
    let all_zero = u
        .iter()
        .zip(&lprime)
        .all(|(ui, li)| ui.sub(&c.mul(li)).truncate(1).is_zero());
    Ok(Some(if all_zero { 1 } else { p }))
}

fn embed(k: &NumberField, x: &FieldElement, root: &PadicApprox) -> Result<PadicApprox> {
    let (nums, den) = k.to_power_coeffs(x);
    let m = root.modulus();
    let val = IntPoly::new(nums).eval_mod(root.value(), &m);
    let inv =
        arith::mod_inverse(&den, &m).ok_or_else(|| Error::domain("denominator divisible by p"))?;
    Ok(PadicApprox::new(
        &(val * inv),
        root.prime(),
        root.precision(),
    ))
}

/// Validate that `g` generates `Q^p` and `p ∤ N(Q)`.
pub fn validate_power_generator(
    k: &NumberField,
    p: u64,
    q_ideal: &IdealHNF,
    g: &FieldElement,
) -> Result<()> {
    let nq = q_ideal.norm();
    if (&nq % BigInt::from(p)).is_zero() {
        return Err(Error::domain("auxiliary ideal lies above p"));
    }
    if !g.is_integral() {
        return Err(Error::domain("power generator is not integral"));
    }
    let ng = k.norm(g)?;
    if ng.abs() != BigRational::from_integer(num_traits::pow(nq, p as usize)) {
        return Err(Error::domain("norm of the generator is not N(Q)^p"));
    }
    let qp = q_ideal.pow(k, p as u32)?;
    if !qp.contains(g)? {
        return Err(Error::domain("generator does not lie in Q^p"));
    }
    Ok(())
}

/// Log index for a completely split `p`, doubling the working precision from
/// `precision` up to the cap. `Ok(None)` means undecided at the cap.
pub fn log_index_split_cyclic(
    k: &NumberField,
    p: u64,
    q_ideal: &IdealHNF,
    g: &FieldElement,
    unit: &FieldElement,
    precision: u32,
) -> Result<Option<u64>> {
    if p == 2 {
        return Err(Error::Unsupported("log index at p = 2".into()));
    }
    validate_power_generator(k, p, q_ideal, g)?;
    let factors = split_prime(k, p)?;
    if factors.len() != k.degree() || factors.iter().any(|pf| pf.e != 1 || pf.f != 1) {
        return Err(Error::domain(format!("{p} does not split completely")));
    }
    if !factors[0].theta_is_alpha {
        return Err(Error::Unsupported("Z[α] is not maximal at p".into()));
    }
    let roots: Vec<BigInt> = factors
        .iter()
        .map(|pf| (-pf.gen_poly.coeff(0)).mod_floor(&BigInt::from(p)))
        .collect();
    let mut prec = precision.max(2);
    loop {
        let lifted: Vec<PadicApprox> = roots
            .iter()
            .map(|r| hensel_lift_root(k.poly(), p, r, prec))
            .collect::<Result<_>>()?;
        let ge: Vec<PadicApprox> = lifted
            .iter()
            .map(|r| embed(k, g, r))
            .collect::<Result<_>>()?;
        let ee: Vec<PadicApprox> = lifted
            .iter()
            .map(|r| embed(k, unit, r))
            .collect::<Result<_>>()?;
        if let Some(index) = log_index_from_embeddings(p, &ge, &ee)? {
            return Ok(Some(index));
        }
        if prec >= MAX_LOG_PRECISION {
            return Ok(None);
        }
        prec = (2 * prec).min(MAX_LOG_PRECISION);
    }
}

pub fn condition1(ctx: &FieldContext, p: u64, factors: &[PrimeFactor]) -> Result<Condition1Report> {
    let h = ctx
        .class_number
        .ok_or_else(|| Error::input(format!("{}: class number missing", ctx.label)))?;
    if h % p != 0 {
        return Ok(Condition1Report {
            branch: Condition1Branch::TrivialClassNumber,
            index: None,
            holds: Some(true),
        });
    }
    let split =
        factors.len() == ctx.field.degree() && factors.iter().all(|pf| pf.e == 1 && pf.f == 1);
    let p_part_is_p = (h / p) % p != 0;
    let Some(aux) = ctx.aux.as_ref().filter(|_| split && p_part_is_p) else {
        return Ok(Condition1Report::undetermined());
    };
    match log_index_split_cyclic(&ctx.field, p, &aux.ideal, &aux.power_gen, &ctx.unit.unit, 2)? {
        Some(index) => Ok(Condition1Report {
            branch: Condition1Branch::SplitCyclicIndex,
            index: Some(index),
            holds: Some(index == p),
        }),
        None => Ok(Condition1Report::undetermined()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    PRational,
    NotPRational,
    Undetermined,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Finding {
    ClassNumberDivisible,
    TorsionNontrivial,
    Guard(GuardReason),
    Condition1Undetermined,
    Condition1Fails,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::ClassNumberDivisible => f.write_str("p divides the class number"),
            Finding::TorsionNontrivial => f.write_str("unit congruence has no witness"),
            Finding::Guard(g) => write!(f, "not applicable: {g}"),
            Finding::Condition1Undetermined => f.write_str("class field condition undetermined"),
            Finding::Condition1Fails => f.write_str("class field condition fails"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub p: u64,
    pub status: VerdictStatus,
    pub reasons: Vec<Finding>,
    pub factors: Vec<PrimeFactor>,
    pub condition1: Option<Condition1Report>,
    pub condition2: Option<Condition2Report>,
}

impl Verdict {
    pub fn has(&self, f: Finding) -> bool {
        self.reasons.contains(&f)
    }
}

pub fn verdict(ctx: &FieldContext, p: u64) -> Result<Verdict> {
    if !arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let k = &ctx.field;
    let not_applicable = |factors: Vec<PrimeFactor>, g: GuardReason| Verdict {
        p,
        status: VerdictStatus::NotApplicable,
        reasons: vec![Finding::Guard(g)],
        factors,
        condition1: None,
        condition2: None,
    };
    if p == 2 {
        return Ok(not_applicable(Vec::new(), GuardReason::PrimeTwo));
    }
    if !k.is_criterion_eligible() {
        return Ok(not_applicable(Vec::new(), GuardReason::NotEligibleField));
    }
    let factors = split_prime(k, p)?;
    if let Err(g) = applicability_guard(k, p, &factors) {
        return Ok(not_applicable(factors, g));
    }
    let c2 = condition2_with_factors(k, p, &ctx.unit, &factors)?;
    let c1 = condition1(ctx, p, &factors)?;
    let mut reasons = Vec::new();
    if ctx.class_number.is_some_and(|h| h % p == 0) {
        reasons.push(Finding::ClassNumberDivisible);
    }
    if !c2.holds {
        reasons.push(Finding::TorsionNontrivial);
    }
    match c1.holds {
        None => reasons.push(Finding::Condition1Undetermined),
        Some(false) => reasons.push(Finding::Condition1Fails),
        Some(true) => {}
    }
    let status = match (c2.holds, c1.holds) {
        (false, _) | (_, Some(false)) => VerdictStatus::NotPRational,
        (true, Some(true)) => VerdictStatus::PRational,
        (true, None) => VerdictStatus::Undetermined,
    };
    Ok(Verdict {
        p,
        status,
        reasons,
        factors,
        condition1: Some(c1),
        condition2: Some(c2),
    })
}
