//! Readers for point clouds (CSV) and adjacency matrices (coordinate triplets).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use snmf_core::{DataSet, DenseMatrix, SparseSymMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRows { line: u64, expected: usize, found: usize },
    #[error("input contains no data rows")]
    Empty,
    #[error("line {line}: entry ({i}, {j}) = {second} conflicts with earlier value {first}")]
    AsymmetricConflict {
        line: u64,
        i: usize,
        j: usize,
        first: f64,
        second: f64,
    },
    #[error("line {line}: negative weight {value}")]
    NegativeWeight { line: u64, value: f64 },
    #[error("line {line}: index {index} out of range for order {n}")]
    IndexOutOfRange { line: u64, index: usize, n: usize },
    #[error("header declares {declared} entries, found {found}")]
    EntryCount { declared: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] snmf_core::Error),
}

pub type Result<T> = std::result::Result<T, IngestError>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PointsFormat {
    /// Last column holds an integer gold label.
    pub labeled: bool,
    /// First line is a header and is skipped.
    pub header: bool,
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Rows `f1,...,fm[,label]`, one point per row.
pub fn ingest_points(path: &Path, format: PointsFormat) -> Result<DataSet> {
    read_points(open(path)?, format)
}

pub fn read_points(reader: impl Read, format: PointsFormat) -> Result<DataSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(format.header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut width = None;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| IngestError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(IngestError::RaggedRows {
                line,
                expected,
                found: record.len(),
            });
        }
        let features = if format.labeled { expected - 1 } else { expected };
        if features == 0 {
            return Err(IngestError::Parse {
                line,
                message: "row has no feature columns".into(),
            });
        }
        for field in record.iter().take(features) {
            let v: f64 = field.parse().map_err(|_| IngestError::Parse {
                line,
                message: format!("'{field}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(IngestError::Parse {
                    line,
                    message: format!("'{field}' is not finite"),
                });
            }
            values.push(v);
        }
        if format.labeled {
            let field = &record[features];
            labels.push(field.parse::<usize>().map_err(|_| IngestError::Parse {
                line,
                message: format!("label '{field}' is not a nonnegative integer"),
            })?);
        }
    }
    let Some(width) = width else {
        return Err(IngestError::Empty);
    };
    let dim = if format.labeled { width - 1 } else { width };
    let n = values.len() / dim;
    let points = DenseMatrix::new(n, dim, values)?;
    Ok(DataSet::new(points, format.labeled.then_some(labels))?)
}

/// Header `n nnz`, then `nnz` lines `i j value` with 0-based indices.
/// Each entry is mirrored; repeating a pair with a different value is an error.
pub fn ingest_adjacency(path: &Path) -> Result<SparseSymMatrix> {
    read_adjacency(open(path)?)
}

pub fn read_adjacency(reader: impl Read) -> Result<SparseSymMatrix> {
    let mut header: Option<(usize, usize)> = None;
    let mut entries: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut found = 0usize;
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx as u64 + 1;
        let text = line.map_err(|e| IngestError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.is_empty() || fields[0].starts_with('#') {
            continue;
        }
        let bad = |message: String| IngestError::Parse {
            line: line_no,
            message,
        };
        let index = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("'{s}' is not an index")));
        let Some((n, _)) = header else {
            if fields.len() != 2 {
                return Err(bad("header must be 'n nnz'".into()));
            }
            header = Some((index(fields[0])?, index(fields[1])?));
            continue;
        };
        if fields.len() != 3 {
            return Err(IngestError::RaggedRows {
                line: line_no,
                expected: 3,
                found: fields.len(),
            });
        }
        let (i, j) = (index(fields[0])?, index(fields[1])?);
        let value: f64 = fields[2]
            .parse()
            .map_err(|_| bad(format!("'{}' is not a number", fields[2])))?;
        if !value.is_finite() {
            return Err(bad(format!("'{}' is not finite", fields[2])));
        }
        for index in [i, j] {
            if index >= n {
                return Err(IngestError::IndexOutOfRange {
                    line: line_no,
                    index,
                    n,
                });
            }
        }
        if value < 0.0 {
            return Err(IngestError::NegativeWeight {
                line: line_no,
                value,
            });
        }
        let key = (i.min(j), i.max(j));
        match entries.get(&key) {
            Some(&first) if first != value => {
                return Err(IngestError::AsymmetricConflict {
                    line: line_no,
                    i,
                    j,
                    first,
                    second: value,
                })
            }
            _ => {
                entries.insert(key, value);
            }
        }
        found += 1;
    }
    let Some((n, declared)) = header else {
        return Err(IngestError::Empty);
    };
    if declared != found {
        return Err(IngestError::EntryCount { declared, found });
    }
    let pairs = entries.into_iter().filter(|&(_, v)| v != 0.0).map(|((i, j), v)| (i, j, v));
    Ok(SparseSymMatrix::from_pairs(n, pairs)?)
}
