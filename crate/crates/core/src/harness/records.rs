use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numberfield::NumberField;
use crate::rationality::{AuxIdeal, FieldContext};
use crate::ring::IntPoly;
use crate::torsion::UnitData;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordFormat {
    Csv,
    Json,
}

impl RecordFormat {
    /// Guess the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => RecordFormat::Json,
            _ => RecordFormat::Csv,
        }
    }
}

/// Auxiliary non-principal prime `Q = (q, g_Q(α))` and a generator of `Q^p`
/// in the power basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxRecord {
    pub q: u64,
    pub gen_poly: Vec<BigInt>,
    pub power_gen: Vec<BigInt>,
}

/// One ingested field. Element coefficients are in the power basis of `poly`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldRecord {
    pub label: String,
    pub poly: Vec<BigInt>,
    pub class_number: Option<u64>,
    pub unit: Vec<BigInt>,
    pub unit_den: BigInt,
    pub torsion_order: u32,
    pub torsion_gen: Option<Vec<BigInt>>,
    pub torsion_gen_den: BigInt,
    pub basis: Option<Vec<Vec<BigRational>>>,
    pub aux: Option<AuxRecord>,
}

/// Column layout shared by CSV and JSON.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub(crate) struct RawRecord {
    pub(crate) label: String,
    pub(crate) degree: String,
    pub(crate) poly: String,
    pub(crate) h: String,
    pub(crate) unit: String,
    pub(crate) unit_den: String,
    pub(crate) torsion_order: String,
    pub(crate) basis: String,
    pub(crate) aux_q: String,
    pub(crate) aux_gen_poly: String,
    pub(crate) aux_power_gen: String,
    pub(crate) torsion_gen: String,
    pub(crate) torsion_gen_den: String,
}

/// Records that loaded, plus per-record validation failures.
#[derive(Clone, Debug, Default)]
pub struct LoadedRecords {
    pub records: Vec<FieldRecord>,
    pub rejected: Vec<Error>,
}

fn normalize(s: &str) -> String {
    s.trim().replace('\u{2212}', "-")
}

fn parse_int(s: &str, what: &str, line: usize) -> Result<BigInt> {
    normalize(s).parse().map_err(|_| Error::Parse {
        line,
        message: format!("{what}: '{s}' is not an integer"),
    })
}

fn parse_int_list(s: &str, what: &str, line: usize) -> Result<Vec<BigInt>> {
    let s = normalize(s);
    if s.is_empty() {
        return Err(Error::Parse {
            line,
            message: format!("{what} is empty"),
        });
    }
    s.split(';').map(|t| parse_int(t, what, line)).collect()
}

fn parse_rational(s: &str, line: usize) -> Result<BigRational> {
    let s = normalize(s);
    let bad = || Error::Parse {
        line,
        message: format!("basis entry '{s}' is not a rational number"),
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
    }
}

fn parse_basis(s: &str, line: usize) -> Result<Vec<Vec<BigRational>>> {
    normalize(s)
        .split(';')
        .map(|row| row.split(',').map(|e| parse_rational(e, line)).collect())
        .collect()
}

fn parse_opt_u64(s: &str, what: &str, line: usize) -> Result<Option<u64>> {
    let s = normalize(s);
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| Error::Parse {
        line,
        message: format!("{what}: '{s}' is not a nonnegative integer"),
    })
}

fn parse_den(s: &str, what: &str, line: usize) -> Result<BigInt> {
    let s = normalize(s);
    if s.is_empty() {
        return Ok(BigInt::one());
    }
    let d = parse_int(&s, what, line)?;
    if !d.is_positive() {
        return Err(Error::Parse {
            line,
            message: format!("{what} must be positive"),
        });
    }
    Ok(d)
}

/// Parse `;`-separated integers, accepting U+2212 as a minus sign.
pub fn parse_coefficients(s: &str) -> Result<Vec<BigInt>> {
    parse_int_list(s, "coefficients", 1).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Input(message),
        other => other,
    })
}

fn join(v: &[BigInt]) -> String {
    v.iter()
        .map(BigInt::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl RawRecord {
    pub(crate) fn parse(&self, line: usize) -> Result<FieldRecord> {
        let label = self.label.trim().to_string();
        if label.is_empty() {
            return Err(Error::Parse {
                line,
                message: "label is empty".into(),
            });
        }
        let poly = parse_int_list(&self.poly, "poly", line)?;
        if let Some(d) = parse_opt_u64(&self.degree, "degree", line)? {
            if d as usize + 1 != poly.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("degree {d} does not match {} coefficients", poly.len()),
                });
            }
        }
        let class_number = parse_opt_u64(&self.h, "h", line)?;
        if class_number == Some(0) {
            return Err(Error::Parse {
                line,
                message: "h must be positive".into(),
            });
        }
        let torsion_order = match parse_opt_u64(&self.torsion_order, "torsion_order", line)? {
            None => 2,
            Some(w) => u32::try_from(w).map_err(|_| Error::Parse {
                line,
                message: "torsion_order too large".into(),
            })?,
        };
        let torsion_gen = if normalize(&self.torsion_gen).is_empty() {
            None
        } else {
            Some(parse_int_list(&self.torsion_gen, "torsion_gen", line)?)
        };
        let basis = if normalize(&self.basis).is_empty() {
            None
        } else {
            Some(parse_basis(&self.basis, line)?)
        };
        let aux = match parse_opt_u64(&self.aux_q, "aux_q", line)? {
            None => None,
            Some(q) => Some(AuxRecord {
                q,
                gen_poly: parse_int_list(&self.aux_gen_poly, "aux_gen_poly", line)?,
                power_gen: parse_int_list(&self.aux_power_gen, "aux_power_gen", line)?,
            }),
        };
        Ok(FieldRecord {
            label,
            poly,
            class_number,
            unit: parse_int_list(&self.unit, "unit", line)?,
            unit_den: parse_den(&self.unit_den, "unit_den", line)?,
            torsion_order,
            torsion_gen,
            torsion_gen_den: parse_den(&self.torsion_gen_den, "torsion_gen_den", line)?,
            basis,
            aux,
        })
    }
}

impl FieldRecord {
    /// A record with the power basis, `w = 2` and no auxiliary ideal.
    pub fn simple(
        label: &str,
        poly: Vec<BigInt>,
        unit: Vec<BigInt>,
        class_number: Option<u64>,
    ) -> Self {
        FieldRecord {
            label: label.to_string(),
            poly,
            class_number,
            unit,
            unit_den: BigInt::one(),
            torsion_order: 2,
            torsion_gen: None,
            torsion_gen_den: BigInt::one(),
            basis: None,
            aux: None,
        }
    }

    /// Parse and validate a record given as raw column strings.
    pub(crate) fn from_raw(raw: &RawRecord) -> Result<FieldRecord> {
        let r = raw.parse(1)?;
        r.build()?;
        Ok(r)
    }

    fn to_raw(&self) -> RawRecord {
        RawRecord {
            label: self.label.clone(),
            degree: (self.poly.len() - 1).to_string(),
            poly: join(&self.poly),
            h: self.class_number.map(|h| h.to_string()).unwrap_or_default(),
            unit: join(&self.unit),
            unit_den: self.unit_den.to_string(),
            torsion_order: self.torsion_order.to_string(),
            basis: self
                .basis
                .as_ref()
                .map(|b| {
                    b.iter()
                        .map(|r| r.iter().map(render_rational).collect::<Vec<_>>().join(","))
                        .collect::<Vec<_>>()
                        .join(";")
                })
                .unwrap_or_default(),
            aux_q: self
                .aux
                .as_ref()
                .map(|a| a.q.to_string())
                .unwrap_or_default(),
            aux_gen_poly: self
                .aux
                .as_ref()
                .map(|a| join(&a.gen_poly))
                .unwrap_or_default(),
            aux_power_gen: self
                .aux
                .as_ref()
                .map(|a| join(&a.power_gen))
                .unwrap_or_default(),
            torsion_gen: self.torsion_gen.as_deref().map(join).unwrap_or_default(),
            torsion_gen_den: if self.torsion_gen.is_some() {
                self.torsion_gen_den.to_string()
            } else {
                String::new()
            },
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.len().saturating_sub(1)
    }

    /// Build the field, unit data and auxiliary ideal, checking every
    /// invariant the verdict relies on.
    pub fn build(&self) -> Result<FieldContext> {
        let fail = |e: Error| Error::Validation {
            label: self.label.clone(),
            message: e.to_string(),
        };
        let poly = IntPoly::new(self.poly.clone());
        if !matches!(poly.degree(), 3 | 4) {
            return Err(fail(Error::input("polynomial must have degree 3 or 4")));
        }
        let field = NumberField::new(&poly, self.basis.as_ref()).map_err(fail)?;
        let unit = field
            .from_power_coeffs(&self.unit, &self.unit_den)
            .map_err(fail)?;
        let gen = self
            .torsion_gen
            .as_ref()
            .map(|g| field.from_power_coeffs(g, &self.torsion_gen_den))
            .transpose()
            .map_err(fail)?;
        let unit = UnitData::with_torsion(unit, self.torsion_order, gen);
        unit.validate(&field).map_err(fail)?;
        let aux = match &self.aux {
            None => None,
            Some(a) => {
                let g = field
                    .from_power_coeffs(&a.power_gen, &BigInt::one())
                    .map_err(fail)?;
                Some(
                    AuxIdeal::new(&field, a.q, &IntPoly::new(a.gen_poly.clone()), g)
                        .map_err(fail)?,
                )
            }
        };
        Ok(FieldContext {
            label: self.label.clone(),
            field,
            unit,
            class_number: self.class_number,
            aux,
        })
    }
}

fn finish(parsed: Vec<FieldRecord>) -> LoadedRecords {
    let mut out = LoadedRecords::default();
    for r in parsed {
        match r.build() {
            Ok(_) => out.records.push(r),
            Err(e) => out.rejected.push(e),
        }
    }
    out
}

/// Parse CSV text. Lines starting with `#` are comments.
pub fn parse_records_csv(text: &str) -> Result<LoadedRecords> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let mut parsed = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let raw: RawRecord = rec.deserialize(Some(&headers)).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        parsed.push(raw.parse(line)?);
    }
    Ok(finish(parsed))
}

fn json_to_string(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Null => String::new(),
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(a) => a.iter().map(json_to_string).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

/// Parse a JSON array of objects keyed by the CSV column names. Numbers and
/// arrays of numbers are accepted in place of strings.
pub fn parse_records_json(text: &str) -> Result<LoadedRecords> {
    if text.trim().is_empty() {
        return Ok(LoadedRecords::default());
    }
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let items = value.as_array().ok_or_else(|| Error::Parse {
        line: 1,
        message: "expected a JSON array of records".into(),
    })?;
    let mut parsed = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let obj = item.as_object().ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("record {} is not an object", i + 1),
        })?;
        let flat: serde_json::Map<String, serde_json::Value> = obj
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(json_to_string(v))))
            .collect();
        let raw: RawRecord =
            serde_json::from_value(serde_json::Value::Object(flat)).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
        parsed.push(raw.parse(i + 1)?);
    }
    Ok(finish(parsed))
}

pub fn load_records(path: &Path, format: RecordFormat) -> Result<LoadedRecords> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    match format {
        RecordFormat::Csv => parse_records_csv(&text),
        RecordFormat::Json => parse_records_json(&text),
    }
}

pub fn records_to_csv(records: &[FieldRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r.to_raw())
            .map_err(|e| Error::input(e.to_string()))?;
    }
    if records.is_empty() {
        w.serialize(RawRecord::default()).ok();
        let bytes = w.into_inner().map_err(|e| Error::input(e.to_string()))?;
        let text = String::from_utf8(bytes).map_err(|e| Error::input(e.to_string()))?;
        return Ok(text
            .lines()
            .next()
            .map(|h| format!("{h}\n"))
            .unwrap_or_default());
    }
    let bytes = w.into_inner().map_err(|e| Error::input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::input(e.to_string()))
}

pub fn records_to_json(records: &[FieldRecord]) -> Result<String> {
    let raws: Vec<RawRecord> = records.iter().map(FieldRecord::to_raw).collect();
    serde_json::to_string_pretty(&raws).map_err(|e| Error::input(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLES: &str = include_str!("../../data/examples.csv");

    #[test]
    fn examples_load() {
        let loaded = parse_records_csv(EXAMPLES).unwrap();
        assert!(loaded.rejected.is_empty(), "{:?}", loaded.rejected);
        assert_eq!(loaded.records.len(), 2);
        let r = &loaded.records[0];
        assert_eq!(r.class_number, Some(3));
        assert_eq!(
            r.aux.as_ref().unwrap().power_gen,
            vec![(-604).into(), 265.into(), (-77).into()]
        );
    }

    #[test]
    fn empty_input() {
        assert!(parse_records_csv("").unwrap().records.is_empty());
        assert!(parse_records_json("").unwrap().records.is_empty());
        assert!(parse_records_json("[]").unwrap().records.is_empty());
    }

    #[test]
    fn unicode_minus_and_json_numbers() {
        let text = "label,poly,h,unit\nK,3;0;\u{2212}2;0;1,1,\u{2212}2;\u{2212}1;1;1\n";
        let a = parse_records_csv(text).unwrap();
        assert_eq!(a.records.len(), 1);
        let json = r#"[{"label":"K","poly":[3,0,-2,0,1],"h":1,"unit":"-2;-1;1;1"}]"#;
        let b = parse_records_json(json).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "# c\nlabel,poly,h,unit\nK,1;0;x;1,1,1\n";
        match parse_records_csv(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_unit_is_skipped() {
        let text = "label,poly,h,unit\nbad,27;-4;0;1,3,2;1;0\nok,3;0;-2;0;1,1,-2;-1;1;1\n";
        let l = parse_records_csv(text).unwrap();
        assert_eq!(l.records.len(), 1);
        assert_eq!(l.rejected.len(), 1);
        assert!(matches!(&l.rejected[0], Error::Validation { label, .. } if label == "bad"));
    }

    #[test]
    fn round_trip() {
        let a = parse_records_csv(EXAMPLES).unwrap().records;
        let b = parse_records_csv(&records_to_csv(&a).unwrap())
            .unwrap()
            .records;
        assert_eq!(a, b);
        let c = parse_records_json(&records_to_json(&a).unwrap())
            .unwrap()
            .records;
        assert_eq!(a, c);
    }
}
