use std::io::{Read, Write};

use ippmm::Status;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One solve of one problem under one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub problem: String,
    pub config: String,
    /// `None` when the run failed before producing a status.
    #[serde(with = "status_field")]
    pub status: Option<Status>,
    /// Error text of a failed run; empty otherwise.
    pub error: String,
    pub iterations: usize,
    /// Wall time of the solve call, in seconds.
    pub time: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub mu: f64,
    pub objective: f64,
}

impl BenchRecord {
    pub fn failed(problem: &str, config: &str, error: String) -> Self {
        BenchRecord {
            problem: problem.to_string(),
            config: config.to_string(),
            status: None,
            error,
            iterations: 0,
            time: 0.0,
            primal_residual: f64::NAN,
            dual_residual: f64::NAN,
            mu: f64::NAN,
            objective: f64::NAN,
        }
    }

    pub fn solved(&self) -> bool {
        self.status == Some(Status::Optimal)
    }
}

mod status_field {
    use ippmm::Status;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &Option<Status>, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(s.map_or("", |s| s.as_str()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Status>, D::Error> {
        let text = String::deserialize(de)?;
        if text.is_empty() {
            Ok(None)
        } else {
            text.parse().map(Some).map_err(D::Error::custom)
        }
    }
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn write_records<W: Write>(w: W, records: &[BenchRecord]) -> Result<(), RecordError> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(r: R) -> Result<Vec<BenchRecord>, RecordError> {
    let mut input = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in input.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<BenchRecord> {
        vec![
            BenchRecord {
                problem: "lp_a".into(),
                config: "ippmm".into(),
                status: Some(Status::Optimal),
                error: String::new(),
                iterations: 7,
                time: 0.0125,
                primal_residual: 1.5e-9,
                dual_residual: 3.25e-8,
                mu: 4e-7,
                objective: -12.5,
            },
            BenchRecord::failed("lp_b", "noreg", "line 3: unknown section `FOO`, with comma".into()),
        ]
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        write_records(&mut buf, &sample()).unwrap();
        let back = read_records(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0], sample()[0]);
        // NaN never compares equal, so check the failed record field by field.
        assert_eq!(back[1].status, None);
        assert_eq!(back[1].error, sample()[1].error);
        assert!(back[1].objective.is_nan());
    }

    #[test]
    fn unknown_status_is_rejected() {
        let text = "problem,config,status,error,iterations,time,primal_residual,dual_residual,mu,objective\n\
                    p,c,Solved,,1,0.1,0,0,0,0\n";
        assert!(read_records(text.as_bytes()).is_err());
    }
}
