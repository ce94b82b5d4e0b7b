use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::rationality::{verdict, FieldContext, VerdictStatus};

use super::with_thread_pool;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub xmax: u64,
    pub count: usize,
    pub undetermined: usize,
    pub not_applicable: usize,
    pub ratio_to_log_x: f64,
    pub per_prime: Vec<(u64, VerdictStatus)>,
}

/// Count primes `5 <= p <= xmax` at which the field is p-rational.
pub fn density_scan(ctx: &FieldContext, xmax: u64) -> Result<DensityReport> {
    if xmax < 5 {
        return Err(Error::domain("xmax must be at least 5"));
    }
    let primes = arith::primes_in(5, xmax);
    let per_prime = with_thread_pool(|| {
        primes
            .par_iter()
            .map(|&p| verdict(ctx, p).map(|v| (p, v.status)))
            .collect::<Result<Vec<_>>>()
    })?;
    let count_of = |s: VerdictStatus| per_prime.iter().filter(|(_, v)| *v == s).count();
    let count = count_of(VerdictStatus::PRational);
    Ok(DensityReport {
        xmax,
        count,
        undetermined: count_of(VerdictStatus::Undetermined),
        not_applicable: count_of(VerdictStatus::NotApplicable),
        ratio_to_log_x: count as f64 / (xmax as f64).ln(),
        per_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::records::parse_records_csv;

    fn ex63() -> FieldContext {
        let recs = parse_records_csv(include_str!("../../data/examples.csv"))
            .unwrap()
            .records;
        recs[1].build().unwrap()
    }

    #[test]
    fn single_prime() {
        let r = density_scan(&ex63(), 5).unwrap();
        assert!(r.count <= 1);
        assert_eq!(r.per_prime.len(), 1);
        assert!(density_scan(&ex63(), 4).is_err());
    }

    #[test]
    fn up_to_hundred() {
        let r = density_scan(&ex63(), 100).unwrap();
        assert!(r.count >= 21, "{r:?}");
        assert_eq!(r.per_prime.len(), 23);
    }
}
