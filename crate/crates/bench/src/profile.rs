use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::record::{BenchRecord, RecordError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Metric {
    Time,
    Iterations,
}

impl Metric {
    /// The metric of `r`, raised to the resolution of the measurement
    /// (one iteration, one microsecond) so zero values give finite ratios.
    fn of(self, r: &BenchRecord) -> f64 {
        match self {
            Metric::Time => r.time.max(1e-6),
            Metric::Iterations => (r.iterations as f64).max(1.0),
        }
    }
}

/// Step curve of one configuration: `(tau, fraction of problems within
/// tau of the best)`, with tau increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfProfile {
    pub config: String,
    pub points: Vec<(f64, f64)>,
}

/// Performance profiles over the problems appearing in `records`. A
/// problem counts as solved by a configuration only with status Optimal;
/// unsolved problems have ratio infinity. Returns an empty set (and logs a
/// warning) when no configuration solved anything.
pub fn perf_profile(records: &[BenchRecord], metric: Metric) -> Vec<PerfProfile> {
    let configs: BTreeSet<&str> = records.iter().map(|r| r.config.as_str()).collect();
    let problems: BTreeSet<&str> = records.iter().map(|r| r.problem.as_str()).collect();
    let mut best: BTreeMap<&str, f64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.solved()) {
        let v = metric.of(r);
        best.entry(&r.problem).and_modify(|b| *b = b.min(v)).or_insert(v);
    }
    if best.is_empty() {
        log::warn!("no problem was solved by any configuration; profile is empty");
        return Vec::new();
    }

    let mut ratios: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for c in &configs {
        let rs = problems
            .iter()
            .map(|p| {
                records
                    .iter()
                    .filter(|r| r.config == *c && r.problem == *p && r.solved())
                    .map(|r| metric.of(r) / best[p])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        ratios.insert(c, rs);
    }

    let mut taus: Vec<f64> = ratios.values().flatten().copied().filter(|r| r.is_finite()).collect();
    taus.push(1.0);
    taus.sort_by(f64::total_cmp);
    taus.dedup();

    let total = problems.len() as f64;
    ratios
        .into_iter()
        .map(|(c, rs)| {
            let points = taus.iter().map(|&t| (t, rs.iter().filter(|&&r| r <= t).count() as f64 / total)).collect();
            PerfProfile { config: c.to_string(), points }
        })
        .collect()
}

pub fn write_profile_csv<W: Write>(w: W, profiles: &[PerfProfile]) -> Result<(), RecordError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["config", "tau", "fraction"])?;
    for p in profiles {
        for (t, f) in &p.points {
            out.write_record([p.config.clone(), t.to_string(), f.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}
