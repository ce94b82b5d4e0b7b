//! Command-line front end for the `prat` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::families::{self, GgcVerdict};
use crate::harness::{
    self, density_scan, load_records, render_table_csv, render_table_text, reproduce_table,
    Bundled, FieldRecord, LoadedRecords, RawRecord, RecordFormat,
};
use crate::numberfield::{describe_splitting, FieldElement, NumberField};
use crate::rationality::{verdict, Condition1Branch, FieldContext, Verdict, VerdictStatus};
use crate::recurrence::{cross_check, RecurrenceSpec, ScreenOutcome};
use crate::ring::IntPoly;
use crate::selftest::run_selftest;
use crate::torsion::UnitData;

#[derive(Parser, Debug)]
#[command(
    name = "prat",
    version,
    about = "p-rationality of complex cubic and pure imaginary quartic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BundledSet {
    Table1,
    Table2,
    Examples,
}

impl From<BundledSet> for Bundled {
    fn from(b: BundledSet) -> Self {
        match b {
            BundledSet::Table1 => Bundled::Table1,
            BundledSet::Table2 => Bundled::Table2,
            BundledSet::Examples => Bundled::Examples,
        }
    }
}

#[derive(clap::Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// CSV or JSON record file (format from the extension).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Use a record set shipped with the program.
    #[arg(long, value_enum)]
    bundled: Option<BundledSet>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide p-rationality of one field at one prime.
    Check {
        /// Defining polynomial, coefficients low to high separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Fundamental unit in the power basis, ';'-separated.
        #[arg(long, allow_hyphen_values = true)]
        unit: String,
        #[arg(long, default_value = "1")]
        unit_den: String,
        /// Class number (omit when unknown).
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        prime: u64,
        /// Integral basis rows separated by ';', entries by ','.
        #[arg(long, allow_hyphen_values = true)]
        basis: Option<String>,
        #[arg(long, default_value_t = 2)]
        torsion_order: u32,
        #[arg(long, allow_hyphen_values = true)]
        torsion_gen: Option<String>,
        #[arg(long, default_value = "1")]
        torsion_gen_den: String,
        #[arg(long, requires_all = ["aux_gen_poly", "aux_power_gen"])]
        aux_q: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        aux_gen_poly: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        aux_power_gen: Option<String>,
    },
    /// Reproduce the exceptional-prime table for a record set.
    Table {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = 100)]
        pmax: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
    },
    /// Count primes up to xmax at which each field is p-rational.
    Scan {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        xmax: u64,
    },
    /// Recurrence screen for the unit with the given minimal polynomial.
    Recurrence {
        /// Monic cubic, coefficients low to high separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        prime: u64,
    },
    /// Unit congruence for the pure cubic fields Q((p^3 - 1)^(1/3)).
    PureCubic {
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        /// File of `p,h` rows; the bundled class numbers are used otherwise.
        #[arg(long)]
        h_data: Option<PathBuf>,
    },
    /// Sufficient condition for the generalized Greenberg conjecture.
    Ggc {
        #[arg(long)]
        xmax: u64,
        #[arg(long = "T", default_value_t = 1.0)]
        t: f64,
    },
    /// Run the randomized invariant suites.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        scale: usize,
    },
}

/// Exit code for an error: 2 for internal invariant failures, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, err) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn record_from_flags(
    poly: &str,
    unit: &str,
    unit_den: &str,
    h: Option<u64>,
    basis: Option<&str>,
    torsion_order: u32,
    torsion_gen: Option<&str>,
    torsion_gen_den: &str,
    aux: Option<(u64, &str, &str)>,
) -> Result<FieldRecord> {
    let raw = RawRecord {
        label: "K".into(),
        poly: poly.into(),
        h: h.map(|h| h.to_string()).unwrap_or_default(),
        unit: unit.into(),
        unit_den: unit_den.into(),
        torsion_order: torsion_order.to_string(),
        basis: basis.unwrap_or_default().into(),
        torsion_gen: torsion_gen.unwrap_or_default().into(),
        torsion_gen_den: torsion_gen_den.into(),
        aux_q: aux.map(|a| a.0.to_string()).unwrap_or_default(),
        aux_gen_poly: aux.map_or("", |a| a.1).into(),
        aux_power_gen: aux.map_or("", |a| a.2).into(),
        ..RawRecord::default()
    };
    FieldRecord::from_raw(&raw).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Input(message),
        other => other,
    })
}

/// Residue in `[0, m)` coordinates of the power basis when the denominator
/// is prime to `m`, otherwise over the integral basis.
fn render_residue(k: &NumberField, x: &FieldElement, m: &BigInt) -> String {
    let (nums, den) = k.to_power_coeffs(x);
    match arith::mod_inverse(&den, m) {
        Some(inv) => {
            let reduced: Vec<BigInt> = nums.iter().map(|c| (c * &inv).mod_floor(m)).collect();
            crate::numberfield::render_poly(&reduced, "α", true)
        }
        None => {
            let coords: Vec<String> = x
                .coords()
                .iter()
                .map(|c| c.mod_floor(m).to_string())
                .collect();
            format!("({}) over the integral basis", coords.join(", "))
        }
    }
}

fn status_line(v: &Verdict) -> String {
    let p = v.p;
    match v.status {
        VerdictStatus::PRational => format!("{p}-rational"),
        VerdictStatus::NotPRational => format!("not {p}-rational"),
        VerdictStatus::Undetermined => format!("{p}-rationality undetermined ({p}?)"),
        VerdictStatus::NotApplicable => format!("criterion not applicable at {p}"),
    }
}

/// Human-readable report for one verdict.
fn render_recurrence(spec: &RecurrenceSpec) -> String {
    let mut s = String::new();
    for (c, term) in [
        (&spec.a2, "F(n+2)"),
        (&spec.a1, "F(n+1)"),
        (&spec.a0, "F(n)"),
    ] {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if s.is_empty() {
            s.push_str(if c.is_negative() { "-" } else { "" });
        } else {
            let _ = write!(s, " {sign} ");
        }
        let a = c.abs();
        if !a.is_one() {
            let _ = write!(s, "{a}");
        }
        s.push_str(term);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn render_verdict(ctx: &FieldContext, v: &Verdict) -> String {
    let k = &ctx.field;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "field: {}  signature {:?}  discriminant {}",
        k.poly(),
        k.signature(),
        k.disc()
    );
    let _ = writeln!(s, "unit: ε = {}", k.render(&ctx.unit.unit, "α", true));
    if let Some(h) = ctx.class_number {
        let _ = writeln!(s, "class number: {h}");
    }
    let _ = writeln!(s, "prime: {}", v.p);
    if !v.factors.is_empty() {
        let _ = writeln!(
            s,
            "splitting: {}",
            describe_splitting(&v.factors, k.degree())
        );
        for f in &v.factors {
            let _ = writeln!(s, "  {f}");
        }
    }
    if let Some(c2) = &v.condition2 {
        let _ = writeln!(s, "unit congruence:");
        for e in &c2.entries {
            let l = e.factor.label;
            let power = e.factor.e + 1;
            let _ = writeln!(
                s,
                "  P{l}: ε^{} ≡ {} (mod {})  {}",
                e.exponent,
                render_residue(k, &e.residue, &e.modulus),
                e.modulus,
                if e.congruent {
                    format!("≡ 1 mod P{l}^{power}")
                } else {
                    format!("≢ 1 mod P{l}^{power} (witness)")
                }
            );
        }
        let _ = writeln!(
            s,
            "  torsion {}",
            if c2.holds { "trivial" } else { "nontrivial" }
        );
    }
    if let Some(c1) = &v.condition1 {
        let text = match (c1.branch, c1.index) {
            (Condition1Branch::TrivialClassNumber, _) => "p does not divide h".to_string(),
            (Condition1Branch::SplitCyclicIndex, Some(i)) => format!("logarithm index {i}"),
            (Condition1Branch::SplitCyclicIndex, None) => "logarithm index undecided".to_string(),
            (Condition1Branch::Undetermined, _) => "undetermined".to_string(),
        };
        let _ = writeln!(s, "class field condition: {text}");
    }
    for r in &v.reasons {
        let _ = writeln!(s, "finding: {r}");
    }
    let _ = writeln!(s, "verdict: {}", status_line(v));
    s
}

fn load_source(source: &Source, err: &mut dyn std::io::Write) -> Result<LoadedRecords> {
    let loaded = match (&source.input, source.bundled) {
        (Some(path), _) => load_records(path, RecordFormat::from_path(path))?,
        (None, Some(b)) => Bundled::from(b).load()?,
        (None, None) => return Err(Error::input("give --input or --bundled")),
    };
    for e in &loaded.rejected {
        let _ = writeln!(err, "skipped: {e}");
    }
    Ok(loaded)
}

fn execute(cmd: Command, err: &mut dyn std::io::Write) -> Result<(String, i32)> {
    let mut out = String::new();
    match cmd {
        Command::Check {
            poly,
            unit,
            unit_den,
            h,
            prime,
            basis,
            torsion_order,
            torsion_gen,
            torsion_gen_den,
            aux_q,
            aux_gen_poly,
            aux_power_gen,
        } => {
            let aux = match (aux_q, aux_gen_poly.as_deref(), aux_power_gen.as_deref()) {
                (Some(q), Some(g), Some(pg)) => Some((q, g, pg)),
                _ => None,
            };
            let record = record_from_flags(
                &poly,
                &unit,
                &unit_den,
                h,
                basis.as_deref(),
                torsion_order,
                torsion_gen.as_deref(),
                &torsion_gen_den,
                aux,
            )?;
            let ctx = record.build()?;
            let v = verdict(&ctx, prime)?;
            out.push_str(&render_verdict(&ctx, &v));
        }
        Command::Table {
            source,
            pmin,
            pmax,
            format,
        } => {
            let loaded = load_source(&source, err)?;
            let rows = reproduce_table(&loaded.records, pmin, pmax)?;
            out = match format {
                TableFormat::Text => render_table_text(&rows),
                TableFormat::Csv => render_table_csv(&rows)?,
            };
        }
        Command::Scan { source, xmax } => {
            let loaded = load_source(&source, err)?;
            let _ = writeln!(
                out,
                "field\tp-rational\tundetermined\tnot applicable\tcount/log x"
            );
            for r in &loaded.records {
                let rep = density_scan(&r.build()?, xmax)?;
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{:.4}",
                    r.label, rep.count, rep.undetermined, rep.not_applicable, rep.ratio_to_log_x
                );
            }
        }
        Command::Recurrence { poly, prime } => {
            let coeffs = harness::parse_coefficients(&poly)?;
            let f = IntPoly::new(coeffs);
            if f.degree() != 3 || !f.is_monic() {
                return Err(Error::input("recurrence needs a monic cubic"));
            }
            let spec = RecurrenceSpec::from_poly(&f)?;
            let k = NumberField::new(&f, None)?;
            let unit = UnitData::new(k.alpha());
            unit.validate(&k)?;
            let rep = cross_check(&k, &unit, &spec, prime)?;
            let _ = writeln!(out, "recurrence: F(n+3) = {}", render_recurrence(&spec));
            match &rep.screen {
                ScreenOutcome::Evaluated(r) => {
                    let _ = writeln!(out, "splitting: {}", r.splitting);
                    let _ = writeln!(out, "F({}) mod {}^2 = {}", r.index, prime, r.value);
                    let _ = writeln!(
                        out,
                        "screen: {}",
                        if r.nonzero {
                            "nonzero (unit congruence holds)"
                        } else {
                            "zero (inconclusive)"
                        }
                    );
                }
                ScreenOutcome::NotApplicable(why) => {
                    let _ = writeln!(out, "screen: not applicable ({why})");
                }
            }
            if let Some(w) = rep.witness {
                let _ = writeln!(
                    out,
                    "unit congruence witness: {}",
                    if w { "yes" } else { "no" }
                );
            }
            let _ = writeln!(
                out,
                "consistency: {}",
                if rep.violation { "VIOLATED" } else { "ok" }
            );
            if rep.violation {
                return Ok((out, 2));
            }
        }
        Command::PureCubic { pmin, pmax, h_data } => {
            let h = match h_data {
                Some(path) => families::load_h_data(&path)?,
                None => families::parse_h_data(harness::PURE_CUBIC_H_CSV)?,
            };
            let rows = harness::with_thread_pool(|| families::pure_cubic_scan(pmin, pmax, &h))?;
            let _ = writeln!(out, "p\tsplitting\tunit congruence\th\tp | h");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    r.p,
                    r.splitting,
                    if r.condition2_holds { "holds" } else { "fails" },
                    r.class_number.map_or("-".into(), |h| h.to_string()),
                    match r.p_divides_h {
                        None => "-",
                        Some(true) => "yes",
                        Some(false) => "no",
                    }
                );
            }
            let fails = rows.iter().filter(|r| !r.condition2_holds).count();
            let _ = writeln!(
                out,
                "{} primes, {} with the unit congruence failing",
                rows.len(),
                fails
            );
        }
        Command::Ggc { xmax, t } => {
            let rows = harness::with_thread_pool(|| families::ggc_scan(xmax, t))?;
            let _ = writeln!(out, "p\tn\tm\tradicand\th(K2)\tbound\tverdict");
            for c in &rows {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{:.2}{}\t{}",
                    c.p,
                    c.n,
                    c.m,
                    c.radicand,
                    c.h_k2,
                    c.lemma_b_bound,
                    if c.bound_ok { "" } else { " (exceeded)" },
                    match c.verdict {
                        GgcVerdict::GgcHolds => "GgcHolds",
                        GgcVerdict::Unknown => "Unknown",
                    }
                );
            }
            if rows.iter().any(|c| !c.bound_ok) {
                return Ok((out, 2));
            }
        }
        Command::Selftest { seed, scale } => {
            let results = run_selftest(seed, scale);
            let mut ok = true;
            for r in &results {
                ok &= r.passed();
                let _ = writeln!(
                    out,
                    "{:<32} {:>6} cases {:>5} skipped  {}",
                    r.name,
                    r.cases,
                    r.skipped,
                    if r.passed() { "pass" } else { "FAIL" }
                );
                for f in r.failures.iter().take(5) {
                    let _ = writeln!(out, "    {f}");
                }
            }
            if !ok {
                return Ok((out, 2));
            }
        }
    }
    Ok((out, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("prat").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn check_inert_quartic() {
        let (code, out, _) = run_str(&[
            "check",
            "--poly",
            "3;0;-2;0;1",
            "--unit",
            "-2;-1;1;1",
            "--h",
            "1",
            "--prime",
            "5",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("verdict: 5-rational"), "{out}");
        assert!(out.contains("ε^624 ≡ 1 + 5α + 15α³ (mod 25)"), "{out}");
        assert!(out.contains("inert f = 4"), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["check", "--bogus"]).0, 1);
        assert_eq!(run_str(&[]).0, 1);
        assert_eq!(run_str(&["--help"]).0, 0);
        assert_eq!(
            run_str(&["check", "--poly", "1;0;1", "--unit", "1", "--prime", "5"]).0,
            1
        );
    }

    #[test]
    fn ggc_lists_seventeen() {
        let (code, out, _) = run_str(&["ggc", "--xmax", "100", "--T", "1"]);
        assert_eq!(code, 0);
        assert!(
            out.lines()
                .any(|l| l.starts_with("17\t") && l.ends_with("GgcHolds")),
            "{out}"
        );
    }
}
