use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::rationality::{verdict, FieldContext, Finding, Verdict, VerdictStatus};

use super::records::FieldRecord;
use super::with_thread_pool;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CellKind {
    PRational,
    PDividesH,
    TorsionNontrivial,
    Undetermined,
    NotApplicable,
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub p: u64,
    pub kind: CellKind,
    pub p_divides_h: bool,
}

impl TableCell {
    pub fn from_verdict(v: &Verdict) -> Self {
        let kind = if v.status == VerdictStatus::NotApplicable {
            CellKind::NotApplicable
        } else if v.has(Finding::TorsionNontrivial) {
            CellKind::TorsionNontrivial
        } else if v.has(Finding::Condition1Fails) {
            CellKind::PDividesH
        } else if v.status == VerdictStatus::Undetermined {
            CellKind::Undetermined
        } else {
            CellKind::PRational
        };
        TableCell {
            p: v.p,
            kind,
            p_divides_h: v.has(Finding::ClassNumberDivisible),
        }
    }

    fn error(p: u64, e: &Error) -> Self {
        TableCell {
            p,
            kind: CellKind::Error(e.to_string()),
            p_divides_h: false,
        }
    }

    pub fn is_exceptional(&self) -> bool {
        self.kind != CellKind::PRational || self.p_divides_h
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub label: String,
    pub cells: Vec<TableCell>,
}

impl TableRow {
    fn primes_where(&self, pred: impl Fn(&TableCell) -> bool) -> Vec<u64> {
        self.cells.iter().filter(|c| pred(c)).map(|c| c.p).collect()
    }

    pub fn p_divides_h(&self) -> Vec<u64> {
        self.primes_where(|c| c.p_divides_h)
    }

    pub fn torsion_nontrivial(&self) -> Vec<u64> {
        self.primes_where(|c| c.kind == CellKind::TorsionNontrivial)
    }

    pub fn undetermined(&self) -> Vec<u64> {
        self.primes_where(|c| c.kind == CellKind::Undetermined)
    }

    pub fn not_applicable(&self) -> Vec<u64> {
        self.primes_where(|c| c.kind == CellKind::NotApplicable)
    }

    pub fn errors(&self) -> Vec<u64> {
        self.primes_where(|c| matches!(c.kind, CellKind::Error(_)))
    }

    pub fn is_exceptional(&self) -> bool {
        self.cells.iter().any(TableCell::is_exceptional)
    }

    /// Entries of the "not p-rational" column: decided failures as `p`,
    /// undetermined cells as `p?`.
    pub fn not_p_rational(&self) -> Vec<String> {
        self.cells
            .iter()
            .filter_map(|c| match c.kind {
                CellKind::TorsionNontrivial | CellKind::PDividesH => Some(c.p.to_string()),
                CellKind::Undetermined => Some(format!("{}?", c.p)),
                _ => None,
            })
            .collect()
    }
}

/// Cells for `pmin <= p <= pmax`. Records that fail to build yield a row of
/// error cells.
pub fn reproduce_table(records: &[FieldRecord], pmin: u64, pmax: u64) -> Result<Vec<TableRow>> {
    if pmin < 5 || pmin > pmax {
        return Err(Error::domain("need 5 <= pmin <= pmax"));
    }
    let primes = arith::primes_in(pmin, pmax);
    let contexts: Vec<std::result::Result<FieldContext, Error>> =
        with_thread_pool(|| records.par_iter().map(FieldRecord::build).collect());
    let jobs: Vec<(usize, u64)> = (0..records.len())
        .flat_map(|i| primes.iter().map(move |&p| (i, p)))
        .collect();
    let cells: Vec<TableCell> = with_thread_pool(|| {
        jobs.par_iter()
            .map(|&(i, p)| match &contexts[i] {
                Err(e) => TableCell::error(p, e),
                Ok(ctx) => match verdict(ctx, p) {
                    Ok(v) => TableCell::from_verdict(&v),
                    Err(e) => TableCell::error(p, &e),
                },
            })
            .collect()
    });
    let mut cells = cells.into_iter();
    Ok(records
        .iter()
        .map(|r| TableRow {
            label: r.label.clone(),
            cells: cells.by_ref().take(primes.len()).collect(),
        })
        .collect())
}

fn list(v: &[u64]) -> String {
    if v.is_empty() {
        "-".to_string()
    } else {
        v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

fn list_str(v: &[String]) -> String {
    if v.is_empty() {
        "-".to_string()
    } else {
        v.join(",")
    }
}

const HEADERS: [&str; 6] = [
    "field",
    "p|h",
    "tor",
    "not p-rational",
    "not applicable",
    "error",
];

fn columns(r: &TableRow) -> [String; 6] {
    [
        r.label.clone(),
        list(&r.p_divides_h()),
        list(&r.torsion_nontrivial()),
        list_str(&r.not_p_rational()),
        list(&r.not_applicable()),
        list(&r.errors()),
    ]
}

/// Aligned text: one line per exceptional row, then a count of the rest.
pub fn render_table_text(rows: &[TableRow]) -> String {
    let shown: Vec<[String; 6]> = rows
        .iter()
        .filter(|r| r.is_exceptional())
        .map(columns)
        .collect();
    let mut width = HEADERS.map(str::len);
    for r in &shown {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cols: [&str; 6], out: &mut String| {
        let parts: Vec<String> = cols
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(HEADERS, &mut out);
    for r in &shown {
        line(r.each_ref().map(String::as_str), &mut out);
    }
    let rest = rows.len() - shown.len();
    if rest > 0 {
        let _ = writeln!(
            out,
            "{rest} further field(s): p-rational at every prime in range"
        );
    }
    out
}

/// CSV with one line per row (exceptional or not); lists are `;`-separated.
pub fn render_table_csv(rows: &[TableRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::input(e.to_string());
    w.write_record([
        "field",
        "p_divides_h",
        "torsion_nontrivial",
        "not_p_rational",
        "not_applicable",
        "error",
    ])
    .map_err(io)?;
    for r in rows {
        let cols = columns(r).map(|c| {
            if c == "-" {
                String::new()
            } else {
                c.replace(',', ";")
            }
        });
        w.write_record(&cols).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::input(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::records::parse_records_csv;

    #[test]
    fn empty_table() {
        assert!(reproduce_table(&[], 5, 100).unwrap().is_empty());
        assert!(reproduce_table(&[], 3, 100).is_err());
    }

    #[test]
    fn example_rows() {
        let recs = parse_records_csv(include_str!("../../data/examples.csv"))
            .unwrap()
            .records;
        let rows = reproduce_table(&recs, 5, 30).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert_eq!(r.cells.len(), 8);
            assert!(r.errors().is_empty(), "{r:?}");
        }
        let text = render_table_text(&rows);
        assert!(text.starts_with("field"));
        let csv = render_table_csv(&rows).unwrap();
        assert!(csv.is_ascii());
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn broken_record_renders_errors() {
        let mut recs = parse_records_csv(include_str!("../../data/examples.csv"))
            .unwrap()
            .records;
        recs[1].unit = vec![2.into(), 1.into(), 0.into(), 0.into()];
        let rows = reproduce_table(&recs[1..], 5, 11).unwrap();
        assert_eq!(rows[0].errors(), vec![5, 7, 11]);
    }
}
