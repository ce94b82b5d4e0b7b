//! Record ingestion, table reproduction and density scans.

mod density;
mod records;
mod table;

pub use density::{density_scan, DensityReport};
pub(crate) use records::RawRecord;
pub use records::{
    load_records, parse_coefficients, parse_records_csv, parse_records_json, records_to_csv,
    records_to_json, AuxRecord, FieldRecord, LoadedRecords, RecordFormat,
};
pub use table::{
    render_table_csv, render_table_text, reproduce_table, CellKind, TableCell, TableRow,
};

/// Complex cubic fields with exceptional primes in `5 <= p <= 100`.
pub const TABLE1_CSV: &str = include_str!("../../data/table1.csv");
/// Pure imaginary quartic fields with exceptional primes in `5 <= p <= 100`.
pub const TABLE2_CSV: &str = include_str!("../../data/table2.csv");
/// The two worked examples, including the auxiliary ideal data.
pub const EXAMPLES_CSV: &str = include_str!("../../data/examples.csv");
/// Class numbers for the pure cubic family.
pub const PURE_CUBIC_H_CSV: &str = include_str!("../../data/pure_cubic_h.csv");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bundled {
    Table1,
    Table2,
    Examples,
}

impl Bundled {
    pub fn csv(self) -> &'static str {
        match self {
            Bundled::Table1 => TABLE1_CSV,
            Bundled::Table2 => TABLE2_CSV,
            Bundled::Examples => EXAMPLES_CSV,
        }
    }

    pub fn load(self) -> crate::Result<LoadedRecords> {
        parse_records_csv(self.csv())
    }
}

/// Run `f` on a pool capped by `PRAT_THREADS` when set, otherwise on the
/// global pool.
pub fn with_thread_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let n = std::env::var("PRAT_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match n.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}
