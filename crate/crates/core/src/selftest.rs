//! Randomized invariant suites run by `prat selftest`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::families::PureCubicInstance;
use crate::numberfield::{split_prime, FieldElement, NumberField};
use crate::recurrence::{f_index_mod, iterate_mod, RecurrenceSpec};
use crate::ring::{factor_mod_p, hensel_lift_root, padic_log, IntPoly, ModPoly, PadicApprox};
use crate::torsion::{condition2_split_crt_check, condition2_with_factors, UnitData};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Suite {
    name: &'static str,
    cases: usize,
    skipped: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            skipped: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn outcome<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(Error::Invariant(m)) => {
                self.cases += 1;
                self.failures.push(format!("{}: {m}", what()));
                None
            }
            Err(_) => {
                self.skipped += 1;
                None
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            skipped: self.skipped,
            failures: self.failures,
        }
    }
}

const SMALL_PRIMES: [u64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn random_prime(rng: &mut StdRng) -> u64 {
    SMALL_PRIMES[rng.gen_range(0..SMALL_PRIMES.len())]
}

/// A random monic irreducible polynomial of degree 3 or 4 with small coefficients.
pub fn random_field(rng: &mut StdRng) -> NumberField {
    loop {
        let n = rng.gen_range(3..=4);
        let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..=9)).collect();
        c.push(1);
        if c[0] == 0 {
            continue;
        }
        if let Ok(k) = NumberField::new(&IntPoly::from_i64(&c), None) {
            return k;
        }
    }
}

fn random_element(rng: &mut StdRng, n: usize) -> FieldElement {
    FieldElement::integral(
        (0..n)
            .map(|_| BigInt::from(rng.gen_range(-20..=20)))
            .collect(),
    )
}

fn discriminants(rng: &mut StdRng, cases: usize) -> SuiteResult {
    let mut s = Suite::new("cubic discriminant");
    for _ in 0..cases {
        let a: i64 = rng.gen_range(-50..=50);
        let b: i64 = rng.gen_range(-50..=50);
        let f = IntPoly::from_i64(&[b, a, 0, 1]);
        if let Some(d) = s.outcome(f.discriminant(), || format!("x^3 + {a}x + {b}")) {
            let expect = BigInt::from(-4 * a * a * a - 27 * b * b);
            s.check(d == expect, || format!("disc(x^3 + {a}x + {b}) = {d}"));
        }
    }
    s.finish()
}

fn factorization(rng: &mut StdRng, cases: usize) -> SuiteResult {
    let mut s = Suite::new("factorization mod p");
    for _ in 0..cases {
        let n = rng.gen_range(2..=6);
        let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(-30..=30)).collect();
        c.push(1);
        let f = IntPoly::from_i64(&c);
        let p = random_prime(rng);
        let Some(fs) = s.outcome(factor_mod_p(&f, p), || format!("{f} mod {p}")) else {
            continue;
        };
        let pb = BigInt::from(p);
        let prod = fs
            .iter()
            .fold(ModPoly::new(vec![BigInt::one()], &pb), |acc, (g, e)| {
                acc.mul(&g.pow(*e))
            });
        s.check(prod == ModPoly::from_int_poly(&f, &pb), || {
            format!("{f} mod {p}")
        });
    }
    s.finish()
}

fn hensel(rng: &mut StdRng, cases: usize) -> SuiteResult {
    let mut s = Suite::new("Hensel lifting");
    for _ in 0..cases {
        let c: Vec<i64> = vec![
            rng.gen_range(-30..=30),
            rng.gen_range(-30..=30),
            rng.gen_range(-5..=5),
            1,
        ];
        let f = IntPoly::from_i64(&c);
        let p = random_prime(rng);
        let k = rng.gen_range(1..=12);
        for r0 in 0..p {
            let r0 = BigInt::from(r0);
            match hensel_lift_root(&f, p, &r0, k) {
                Ok(r) => {
                    let m = arith::pow_u64(p, k);
                    s.check(f.eval_mod(r.value(), &m).is_zero(), || {
                        format!("{f} at {r}")
                    });
                }
                Err(_) => s.skipped += 1,
            }
        }
    }
    s.finish()
}

fn logarithm(rng: &mut StdRng, cases: usize) -> SuiteResult {
    let mut s = Suite::new("p-adic logarithm");
    for _ in 0..cases {
        let p = SMALL_PRIMES[rng.gen_range(1..SMALL_PRIMES.len())];
        let k = rng.gen_range(2..=10);
        let m = arith::pow_u64(p, k);
        let pb = BigInt::from(p);
        let mut unit = || BigInt::one() + &pb * BigInt::from(rng.gen_range(0..10_000u64));
        let x = PadicApprox::new(&unit(), p, k);
        let y = PadicApprox::new(&unit(), p, k);
        let (Some(lx), Some(ly), Some(lxy)) = (
            s.outcome(padic_log(&x), || format!("log {x}")),
            s.outcome(padic_log(&y), || format!("log {y}")),
            s.outcome(padic_log(&x.mul(&y)), || format!("log {x}*{y}")),
        ) else {
            continue;
        };
        s.check(lxy == lx.add(&ly), || {
            format!("log({x} {y}) != log x + log y mod {m}")
        });
        let v = x.sub(&PadicApprox::from_i64(1, p, k)).valuation();
        s.check(v == lx.valuation(), || format!("v(log {x}) != v({x} - 1)"));
    }
    s.finish()
}

fn ramification(rng: &mut StdRng, cases: usize) -> SuiteResult {
    let mut s = Suite::new("sum of e f equals degree");
    for _ in 0..cases {
        let k = random_field(rng);
        let p = random_prime(rng);
        if let Some(fs) = s.outcome(split_prime(&k, p), || format!("{} at {p}", k.poly())) {
            let total: u32 = fs.iter().map(|f| f.e * f.f).sum();
            s.check(total as usize == k.degree(), || {
                format!("{} at {p}", k.poly())
            });
        }
    }
    s.finish()
}

fn norms_and_powers(rng: &mut StdRng, cases: usize) -> SuiteResult {
    let mut s = Suite::new("norm and power arithmetic");
    for _ in 0..cases {
        let k = random_field(rng);
        let a = random_element(rng, k.degree());
        let b = random_element(rng, k.degree());
        let label = || format!("{} with {a}, {b}", k.poly());
        let (Some(na), Some(nb), Some(ab)) = (
            s.outcome(k.norm(&a), label),
            s.outcome(k.norm(&b), label),
            s.outcome(k.mul(&a, &b), label),
        ) else {
            continue;
        };
        if let Some(nab) = s.outcome(k.norm(&ab), label) {
            s.check(nab == na * nb, label);
        }
        let e = rng.gen_range(0..40u32);
        let m = BigInt::from(rng.gen_range(2..500u32));
        let mut direct = k.one();
        for _ in 0..e {
            direct = match k.mul(&direct, &a).and_then(|x| x.reduce_mod(&m)) {
                Ok(x) => x,
                Err(_) => break,
            };
        }
        if let Some(fast) = s.outcome(k.pow_mod(&a, &BigInt::from(e), &m), label) {
            s.check(fast == direct, || {
                format!("{a}^{e} mod {m} in {}", k.poly())
            });
        }
    }
    s.finish()
}

fn recurrences(rng: &mut StdRng, cases: usize) -> SuiteResult {
    let mut s = Suite::new("recurrence matrix power");
    for _ in 0..cases {
        let spec = RecurrenceSpec::new(
            rng.gen_range(-9..=9),
            rng.gen_range(-9..=9),
            rng.gen_range(-9..=9),
        );
        let m = BigInt::from(rng.gen_range(2..100_000u64));
        let seq = iterate_mod(&spec, 300, &m);
        for _ in 0..5 {
            let n = rng.gen_range(0..300usize);
            s.check(f_index_mod(&spec, n as u64, &m) == seq[n], || {
                format!("{spec:?} n = {n}")
            });
        }
    }
    s.finish()
}

fn unit_congruence(rng: &mut StdRng, cases: usize) -> SuiteResult {
    let mut s = Suite::new("unit congruence consistency");
    let primes = arith::primes_in(5, 400);
    for _ in 0..cases {
        let p = primes[rng.gen_range(0..primes.len())];
        let Some(inst) = s.outcome(PureCubicInstance::new(p), || format!("family at {p}")) else {
            continue;
        };
        let unit = UnitData::new(inst.unit.clone());
        let Some(fs) = s.outcome(inst.factors(), || format!("splitting at {p}")) else {
            continue;
        };
        // membership in the first power is checked inside; failures are Invariant errors
        let Some(rep) = s.outcome(condition2_with_factors(&inst.field, p, &unit, &fs), || {
            format!("unit congruence at {p}")
        }) else {
            continue;
        };
        s.check(rep.entries.iter().all(|e| e.first_power_member), || {
            format!("Fermat at {p}")
        });
        if p % 3 == 1 {
            if let Some(crt) = s.outcome(condition2_split_crt_check(&inst.field, p, &unit), || {
                format!("CRT form at {p}")
            }) {
                s.check(crt == rep.holds, || format!("CRT form disagrees at {p}"));
            }
        }
    }
    s.finish()
}

/// Run every suite with a fixed seed; `scale` multiplies the case counts.
pub fn run_selftest(seed: u64, scale: usize) -> Vec<SuiteResult> {
    let mut rng = StdRng::seed_from_u64(seed);
    let scale = scale.max(1);
    vec![
        discriminants(&mut rng, 200 * scale),
        factorization(&mut rng, 200 * scale),
        hensel(&mut rng, 50 * scale),
        logarithm(&mut rng, 100 * scale),
        ramification(&mut rng, 100 * scale),
        norms_and_powers(&mut rng, 50 * scale),
        recurrences(&mut rng, 50 * scale),
        unit_congruence(&mut rng, 20 * scale),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for r in run_selftest(7, 1) {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
            assert!(r.cases > 0, "{}", r.name);
        }
    }
}
