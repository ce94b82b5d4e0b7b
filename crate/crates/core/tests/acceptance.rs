//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use prat_core::arith;
use prat_core::cli::{render_verdict, run};
use prat_core::families::{
    class_number_from_discriminant, evaluate_pure_cubic, ggc_scan, lemma_a_predicate, parse_h_data,
    pure_cubic_scan, GgcVerdict, PureCubicInstance,
};
use prat_core::harness::{reproduce_table, Bundled, FieldRecord, TableRow, PURE_CUBIC_H_CSV};
use prat_core::numberfield::split_prime;
use prat_core::rationality::{verdict, Condition1Branch, FieldContext, VerdictStatus};
use prat_core::recurrence::{
    cross_check, f_index_mod, iterate_mod, CubicSplitting, RecurrenceSpec,
};
use prat_core::selftest::random_field;
use prat_core::torsion::{condition2_split_crt_check, prop24_equivalence_check};

type Failures = Vec<String>;

macro_rules! expect {
    ($f:expr, $cond:expr, $($msg:tt)+) => {
        if !$cond {
            $f.push(format!($($msg)+));
        }
    };
}

fn examples() -> Vec<FieldContext> {
    Bundled::Examples
        .load()
        .unwrap()
        .records
        .iter()
        .map(|r| r.build().unwrap())
        .collect()
}

fn inert_quartic_example() -> Failures {
    let mut f = Failures::new();
    let ctx = examples().remove(1);
    let k = &ctx.field;
    let v = verdict(&ctx, 5).unwrap();
    let shape: Vec<(u32, u32)> = v.factors.iter().map(|pf| (pf.e, pf.f)).collect();
    expect!(f, shape == [(1, 4)], "splitting {shape:?}");
    let c2 = v.condition2.as_ref().unwrap();
    let entry = &c2.entries[0];
    expect!(
        f,
        entry.exponent == BigInt::from(624),
        "exponent {}",
        entry.exponent
    );
    expect!(
        f,
        entry.modulus == BigInt::from(25),
        "modulus {}",
        entry.modulus
    );
    let want = k.from_power_i64(&[1, 5, 0, 15], 1).unwrap();
    expect!(
        f,
        entry.residue == want,
        "residue {}",
        k.render(&entry.residue, "α", true)
    );
    expect!(f, !entry.congruent && c2.holds, "no witness");
    expect!(
        f,
        v.status == VerdictStatus::PRational,
        "status {:?}",
        v.status
    );
    let report = render_verdict(&ctx, &v);
    for line in [
        "ε^624 ≡ 1 + 5α + 15α³ (mod 25)",
        "inert",
        "verdict: 5-rational",
    ] {
        expect!(f, report.contains(line), "report lacks {line:?}");
    }
    f
}

fn split_cyclic_example() -> Failures {
    let mut f = Failures::new();
    let ctx = examples().remove(0);
    let k = &ctx.field;
    let nine = BigInt::from(9);
    let v = verdict(&ctx, 3).unwrap();
    let gens: BTreeSet<Vec<BigInt>> = v
        .factors
        .iter()
        .map(|pf| pf.gen_poly.coeffs().to_vec())
        .collect();
    let want: BTreeSet<Vec<BigInt>> = [[0, 1], [2, 1], [1, 1]]
        .iter()
        .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    expect!(f, gens == want, "generators {gens:?}");
    expect!(
        f,
        v.factors.iter().all(|pf| pf.e == 1 && pf.f == 1),
        "not split completely"
    );

    let g = k.from_power_i64(&[-604, 265, -77], 1).unwrap();
    let g2 = k.pow_mod(&g, &BigInt::from(2), &nine).unwrap();
    let want_g2 = k
        .from_power_i64(&[1, 3, 0], 1)
        .unwrap()
        .reduce_mod(&nine)
        .unwrap();
    expect!(f, g2 == want_g2, "g^2 = {}", k.render(&g2, "α", true));
    let e2 = k.pow_mod(&ctx.unit.unit, &BigInt::from(2), &nine).unwrap();
    let want_e2 = k.from_power_i64(&[7, 3, 0], 1).unwrap();
    expect!(f, e2 == want_e2, "ε^2 = {}", k.render(&e2, "α", true));

    let c1 = v.condition1.as_ref().unwrap();
    expect!(
        f,
        c1.branch == Condition1Branch::SplitCyclicIndex,
        "branch {:?}",
        c1.branch
    );
    expect!(f, c1.index == Some(3), "index {:?}", c1.index);
    expect!(
        f,
        v.status == VerdictStatus::PRational,
        "status {:?}",
        v.status
    );
    f
}

/// (label, p | h, tor, not p-rational)
const COMPLEX_CUBICS: [(&str, &[u64], &[u64], &str); 35] = [
    ("x^3-x^2+x-9", &[], &[13], "13"),
    ("x^3-x^2+5*x+1", &[], &[17], "17"),
    ("x^3-x^2-2*x+6", &[], &[5], "5"),
    ("x^3-x^2+x+5", &[], &[5], "5"),
    ("x^3-x^2+5*x+2", &[], &[11], "11"),
    ("x^3-6*x-12", &[], &[5], "5"),
    ("x^3-x^2-x+13", &[], &[5], "5"),
    ("x^3-x^2-x-6", &[], &[11], "11"),
    ("x^3-x^2+5*x+11", &[], &[11], "11"),
    ("x^3-x^2+7*x-2", &[], &[5], "5"),
    ("x^3-8*x-11", &[], &[5], "5"),
    ("x^3-x^2-4*x+9", &[], &[19], "19"),
    ("x^3-x^2+7*x-6", &[5], &[], "5?"),
    ("x^3-x^2+x+15", &[5], &[], "5?"),
    ("x^3-x^2+x-24", &[], &[5], "5"),
    ("x^3-x^2+4*x-9", &[], &[13], "13"),
    ("x^3-x^2-6*x-16", &[], &[5], "5"),
    ("x^3+10*x-12", &[5], &[], "5?"),
    ("x^3-x^2+10*x-16", &[5], &[], "5?"),
    ("x^3-26", &[], &[11], "11"),
    ("x^3-x^2-8*x-10", &[], &[5], "5"),
    ("x^3-x^2-x-26", &[], &[61], "61"),
    ("x^3-x^2+13*x-1", &[5], &[], "5?"),
    ("x^3-x^2-3*x-17", &[], &[5], "5"),
    ("x^3-x^2+7*x-19", &[], &[31], "31"),
    ("x^3-x^2-11*x+21", &[], &[11], "11"),
    ("x^3-11*x-17", &[], &[5], "5"),
    ("x^3-x^2+6*x-10", &[], &[23], "23"),
    ("x^3-x^2-10*x-20", &[5], &[], "5?"),
    ("x^3-x^2-11*x-21", &[], &[7], "7"),
    ("x^3-2*x-20", &[5], &[], "5?"),
    ("x^3+2*x-10", &[], &[7], "7"),
    ("x^3+4*x-20", &[], &[13], "13"),
    ("x^3-x^2+5*x-32", &[5], &[], "5?"),
    ("x^3-x^2+9*x-21", &[7], &[], "7?"),
];

/// (label, tor, not p-rational); none has p | h.
const PURE_QUARTICS: [(&str, &[u64], &str); 12] = [
    ("x^4-x^3+x^2-x+1", &[], ""),
    ("x^4+1", &[13, 31], "13,31"),
    ("x^4-2*x^2+4", &[7], "7"),
    ("x^4+2*x^2+4", &[13, 31], "13,31"),
    ("x^4-2*x^3-2*x+5", &[11], "11"),
    ("x^4-x^3-4*x^2+4*x+7", &[23], "23"),
    ("x^4-2*x^3+5*x^2-4*x+2", &[13, 31], "13,31"),
    ("x^4-x^3-2*x^2-3*x+9", &[29, 37], "29,37"),
    ("x^4-2*x^3-4*x^2+5*x+7", &[5], "5"),
    ("x^4-2*x^3-3*x^2+4*x+5", &[11], "11"),
    ("x^4+4*x^2+2", &[13, 31], "13,31"),
    ("x^4+9", &[7], "7"),
];

fn normalize(label: &str) -> String {
    label.replace('*', "").replace(' ', "")
}

fn table_rows(b: Bundled) -> Vec<TableRow> {
    let recs = b.load().unwrap();
    assert!(recs.rejected.is_empty(), "{:?}", recs.rejected);
    reproduce_table(&recs.records, 5, 100).unwrap()
}

fn find<'a>(rows: &'a [TableRow], label: &str) -> Option<&'a TableRow> {
    rows.iter()
        .find(|r| normalize(&r.label) == normalize(label))
}

fn complex_cubic_table() -> Failures {
    let mut f = Failures::new();
    let rows = table_rows(Bundled::Table1);
    expect!(f, rows.len() == 35, "{} rows", rows.len());
    for (label, pdh, tor, npr) in COMPLEX_CUBICS {
        let Some(row) = find(&rows, label) else {
            f.push(format!("{label} missing"));
            continue;
        };
        expect!(
            f,
            row.cells.len() == 23,
            "{label}: {} cells",
            row.cells.len()
        );
        expect!(
            f,
            row.p_divides_h() == pdh,
            "{label}: p|h {:?}",
            row.p_divides_h()
        );
        expect!(
            f,
            row.torsion_nontrivial() == tor,
            "{label}: tor {:?}",
            row.torsion_nontrivial()
        );
        let undet: Vec<u64> = if npr.ends_with('?') {
            pdh.to_vec()
        } else {
            vec![]
        };
        expect!(
            f,
            row.undetermined() == undet,
            "{label}: undetermined {:?}",
            row.undetermined()
        );
        expect!(
            f,
            row.not_p_rational().join(",") == npr,
            "{label}: {:?}",
            row.not_p_rational()
        );
        expect!(
            f,
            row.not_applicable().is_empty() && row.errors().is_empty(),
            "{label}: gaps"
        );
    }
    f
}

fn pure_quartic_table() -> Failures {
    let mut f = Failures::new();
    let rows = table_rows(Bundled::Table2);
    expect!(f, rows.len() == 12, "{} rows", rows.len());
    for (label, tor, npr) in PURE_QUARTICS {
        let Some(row) = find(&rows, label) else {
            f.push(format!("{label} missing"));
            continue;
        };
        expect!(
            f,
            row.p_divides_h().is_empty(),
            "{label}: p|h {:?}",
            row.p_divides_h()
        );
        expect!(
            f,
            row.torsion_nontrivial() == tor,
            "{label}: tor {:?}",
            row.torsion_nontrivial()
        );
        expect!(f, row.undetermined().is_empty(), "{label}: undetermined");
        expect!(
            f,
            row.not_p_rational().join(",") == npr,
            "{label}: {:?}",
            row.not_p_rational()
        );
        expect!(
            f,
            row.errors().is_empty(),
            "{label}: errors {:?}",
            row.errors()
        );
        let na: &[u64] = if label == "x^4-x^3+x^2-x+1" {
            &[5]
        } else {
            &[]
        };
        expect!(
            f,
            row.not_applicable() == na,
            "{label}: not applicable {:?}",
            row.not_applicable()
        );
    }
    f
}

fn pure_cubic_family() -> Failures {
    let mut f = Failures::new();
    let h = parse_h_data(PURE_CUBIC_H_CSV).unwrap();
    let rows = pure_cubic_scan(5, 499, &h).unwrap();
    expect!(
        f,
        rows.len() == arith::primes_in(5, 499).len(),
        "{} rows",
        rows.len()
    );
    for r in &rows {
        expect!(f, r.condition2_holds, "unit congruence fails at {}", r.p);
        let law = if r.p % 3 == 1 {
            CubicSplitting::SplitCompletely
        } else {
            CubicSplitting::OnePlusTwo
        };
        expect!(
            f,
            r.splitting == law,
            "splitting at {}: {:?}",
            r.p,
            r.splitting
        );
    }
    let r = evaluate_pure_cubic(2791, &h).unwrap();
    expect!(
        f,
        r.p_divides_h == Some(true) && r.class_number == Some(31876011),
        "2791: {r:?}"
    );
    expect!(f, r.condition2_holds, "2791 unit congruence");
    f
}

fn cubic_contexts() -> Vec<FieldContext> {
    let mut out = Vec::new();
    for b in [Bundled::Table1, Bundled::Examples] {
        for r in b.load().unwrap().records.iter().filter(|r| r.degree() == 3) {
            out.push(r.build().unwrap());
        }
    }
    out
}

fn recurrence_consistency() -> Failures {
    let mut f = Failures::new();
    let mut evaluated = 0;
    for ctx in cubic_contexts() {
        let k = &ctx.field;
        let spec = match RecurrenceSpec::from_unit(k, &ctx.unit.unit) {
            Ok(Some(s)) => s,
            other => {
                f.push(format!("{}: no recurrence ({other:?})", ctx.label));
                continue;
            }
        };
        let d = spec.poly().discriminant().unwrap();
        for p in arith::primes_in(3, 300) {
            if (&d % BigInt::from(p)) == BigInt::from(0) {
                continue;
            }
            match cross_check(k, &ctx.unit, &spec, p) {
                Ok(r) => {
                    evaluated += 1;
                    expect!(f, !r.violation, "{} at {p}: violation", ctx.label);
                    expect!(
                        f,
                        r.screen.result().is_some(),
                        "{} at {p}: screen skipped",
                        ctx.label
                    );
                }
                Err(e) => f.push(format!("{} at {p}: {e}", ctx.label)),
            }
        }
    }
    expect!(f, evaluated > 1000, "only {evaluated} pairs evaluated");
    f
}

fn ggc() -> Failures {
    let mut f = Failures::new();
    let list = ggc_scan(1000, 1.0).unwrap();
    expect!(f, !list.is_empty(), "empty list");
    expect!(f, list.iter().any(|c| c.p == 17), "17 missing");
    for c in &list {
        expect!(
            f,
            lemma_a_predicate(c.p, c.n, c.m, 1.0),
            "{} fails recheck",
            c.p
        );
        let holds = c.h_k2 % c.p != 0;
        expect!(
            f,
            (c.verdict == GgcVerdict::GgcHolds) == holds,
            "{} verdict",
            c.p
        );
        expect!(
            f,
            c.h_k2 as f64 <= c.lemma_b_bound && c.bound_ok,
            "{} bound",
            c.p
        );
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        ["prat", "ggc", "--xmax", "1000", "--T", "1"],
        &mut out,
        &mut err,
    );
    let text = String::from_utf8(out).unwrap();
    expect!(f, code == 0, "ggc exit {code}");
    expect!(
        f,
        text.lines()
            .any(|l| l.split_whitespace().next() == Some("17")),
        "CLI output lacks 17"
    );
    f
}

fn kronecker(d: i64, n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    while n % 2 == 0 {
        n /= 2;
        sign *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    // Jacobi symbol (d / n) for odd n
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut j = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                j = -j;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            j = -j;
        }
        a %= n;
    }
    if n == 1 {
        sign * j
    } else {
        0
    }
}

fn is_fundamental(d: i64) -> bool {
    let sqf = |m: i64| arith::squarefree_part(m) == m;
    match d.rem_euclid(4) {
        1 => sqf(d),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && sqf(d / 4),
        _ => false,
    }
}

fn dirichlet_class_number(d: i64) -> i64 {
    let n = d.unsigned_abs();
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let s: i64 = (1..n).map(|k| kronecker(d, k) * k as i64).sum();
    -w * s / (2 * n as i64)
}

fn oracle_suites() -> Failures {
    let mut f = Failures::new();
    let mut rng = StdRng::seed_from_u64(20240611);

    let mut fundamentals = 0;
    for d in (-200..=-3).filter(|&d| is_fundamental(d)) {
        fundamentals += 1;
        let h = class_number_from_discriminant(d).unwrap() as i64;
        expect!(f, h == dirichlet_class_number(d), "(a) h({d}) = {h}");
    }
    expect!(
        f,
        fundamentals > 50,
        "(a) only {fundamentals} discriminants"
    );

    for _ in 0..100 {
        let spec = RecurrenceSpec::new(
            rng.gen_range(-50..=50),
            rng.gen_range(-50..=50),
            rng.gen_range(-50..=50),
        );
        let m = BigInt::from(rng.gen_range(2..10_000_000u64));
        let seq = iterate_mod(&spec, 2000, &m);
        let bad = (0..=2000).find(|&n| f_index_mod(&spec, n as u64, &m) != seq[n]);
        expect!(f, bad.is_none(), "(b) {spec:?} mod {m} at {bad:?}");
    }

    let primes = arith::primes_in(2, 499);
    let mut pairs = 0;
    while pairs < 1000 {
        let k = random_field(&mut rng);
        let p = primes[rng.gen_range(0..primes.len())];
        match split_prime(&k, p) {
            Ok(fs) => {
                pairs += 1;
                let total: u32 = fs.iter().map(|x| x.e * x.f).sum();
                expect!(f, total as usize == k.degree(), "(c) {} at {p}", k.poly());
            }
            Err(prat_core::Error::Invariant(m)) => f.push(format!("(c) {} at {p}: {m}", k.poly())),
            Err(_) => {}
        }
    }

    let mut contexts: Vec<FieldContext> = Vec::new();
    for b in [Bundled::Table1, Bundled::Table2, Bundled::Examples] {
        contexts.extend(
            b.load()
                .unwrap()
                .records
                .iter()
                .map(|r: &FieldRecord| r.build().unwrap()),
        );
    }
    let mut evaluations = 0;
    for ctx in &contexts {
        for p in arith::primes_in(5, 100) {
            let v = verdict(ctx, p).unwrap();
            if let Some(c2) = &v.condition2 {
                evaluations += 1;
                for e in &c2.entries {
                    expect!(f, e.first_power_member, "(d) {} at {p}", ctx.label);
                }
            }
        }
    }
    for p in arith::primes_in(5, 499) {
        let inst = PureCubicInstance::new(p).unwrap();
        let rep = inst.condition2(&inst.factors().unwrap()).unwrap();
        evaluations += 1;
        expect!(
            f,
            rep.entries.iter().all(|e| e.first_power_member),
            "(d) family at {p}"
        );
    }
    expect!(f, evaluations > 1000, "(d) only {evaluations} evaluations");

    let mut crt = 0;
    let mut prop24 = 0;
    let family = arith::primes_in(5, 499).into_iter().filter_map(|p| {
        let inst = PureCubicInstance::new(p).ok()?;
        let unit = prat_core::torsion::UnitData::new(inst.unit.clone());
        Some((format!("family {p}"), inst.field, unit, vec![p]))
    });
    let table = cubic_contexts()
        .into_iter()
        .map(|c| (c.label.clone(), c.field, c.unit, arith::primes_in(5, 100)));
    for (label, k, unit, ps) in family.chain(table) {
        for p in ps {
            let Ok(fs) = split_prime(&k, p) else { continue };
            if fs.len() == 3 && fs.iter().all(|x| x.e == 1) {
                crt += 1;
                let holds = prat_core::torsion::condition2_with_factors(&k, p, &unit, &fs)
                    .unwrap()
                    .holds;
                let global = condition2_split_crt_check(&k, p, &unit).unwrap();
                expect!(f, global == holds, "(e) CRT form at {p} for {label}");
            }
            for pf in fs.iter().filter(|x| x.e == 1 && x.f == 1) {
                prop24 += 1;
                let ok = prop24_equivalence_check(&k, p, &unit, pf).unwrap();
                expect!(f, ok, "(e) exponent equivalence at {p} for {label}");
            }
        }
    }
    expect!(
        f,
        crt > 50 && prop24 > 100,
        "(e) only {crt} / {prop24} instances"
    );
    f
}

fn main() {
    let criteria: [(&str, fn() -> Failures, Duration); 8] = [
        (
            "inert quartic example at 5",
            inert_quartic_example,
            Duration::from_secs(1),
        ),
        (
            "split cyclic cubic example at 3",
            split_cyclic_example,
            Duration::from_secs(1),
        ),
        (
            "complex cubic table",
            complex_cubic_table,
            Duration::from_secs(60),
        ),
        (
            "pure quartic table",
            pure_quartic_table,
            Duration::from_secs(60),
        ),
        (
            "pure cubic family",
            pure_cubic_family,
            Duration::from_secs(300),
        ),
        (
            "recurrence screen consistency",
            recurrence_consistency,
            Duration::from_secs(300),
        ),
        ("generalized Greenberg scan", ggc, Duration::from_secs(30)),
        ("oracle suites", oracle_suites, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut failures = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| vec![format!("panic: {}", panic_message(&e))]);
        let elapsed = start.elapsed();
        if elapsed > *limit {
            failures.push(format!("took {elapsed:.1?}, limit {limit:?}"));
        }
        if failures.is_empty() {
            println!("criterion {} {name}: PASS ({elapsed:.2?})", i + 1);
        } else {
            failed += 1;
            println!("criterion {} {name}: FAIL ({elapsed:.2?})", i + 1);
            for m in failures.iter().take(20) {
                println!("    {m}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}
