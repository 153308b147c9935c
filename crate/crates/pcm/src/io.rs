//! Matrix files.
//!
//! JSON: `{"n": 3, "rows": [[1, "1/3", 5], ...]}` where each entry is a
//! number or an exact fraction string `"p/q"`. CSV: `n` rows of `n`
//! comma-separated entries in the same notation. Fractions read from a file
//! are written back as fractions.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use pcm_core::rational::{parse_rational, rational_to_f64, Rational};
use pcm_core::{Pcm, RationalPcm};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: invalid JSON: {source}", .path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{}: invalid CSV: {source}", .path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: entry ({row}, {col}) `{text}` is not a number or fraction", .path.display())]
    Entry {
        path: PathBuf,
        row: usize,
        col: usize,
        text: String,
    },
    #[error("{}: declared n = {declared} but found {found} rows", .path.display())]
    RowCount {
        path: PathBuf,
        declared: usize,
        found: usize,
    },
    #[error("{}: {source}", .path.display())]
    Matrix {
        path: PathBuf,
        source: pcm_core::Error,
    },
}

/// A matrix entry as written in a file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Entry {
    Number(f64),
    Fraction(Rational),
}

impl Entry {
    pub fn value(self) -> f64 {
        match self {
            Entry::Number(v) => v,
            Entry::Fraction(r) => rational_to_f64(r),
        }
    }

    /// Parses `"p/q"`, `"p"` or a decimal literal.
    pub fn parse(text: &str) -> Option<Entry> {
        let text = text.trim();
        if let Some(r) = parse_rational(text) {
            return Some(Entry::Fraction(r));
        }
        text.parse::<f64>().ok().map(Entry::Number)
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Entry::Number(v) => serializer.serialize_f64(*v),
            Entry::Fraction(r) => serializer.collect_str(r),
        }
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntryVisitor;

        impl Visitor<'_> for EntryVisitor {
            type Value = Entry;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a fraction string such as \"1/9\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Entry, E> {
                Ok(Entry::Number(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
                Ok(Entry::Number(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
                Ok(Entry::Number(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Entry, E> {
                parse_rational(v)
                    .map(Entry::Fraction)
                    .ok_or_else(|| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }

        deserializer.deserialize_any(EntryVisitor)
    }
}

/// The on-disk form of a matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub rows: Vec<Vec<Entry>>,
}

impl MatrixFile {
    pub fn from_pcm(a: &Pcm) -> Self {
        MatrixFile {
            n: a.n(),
            rows: a
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(Entry::Number).collect())
                .collect(),
        }
    }

    pub fn from_rational(a: &RationalPcm) -> Self {
        MatrixFile {
            n: a.n(),
            rows: a
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(Entry::Fraction).collect())
                .collect(),
        }
    }

    pub fn values(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.value()).collect())
            .collect()
    }

    pub fn to_pcm(&self) -> Result<Pcm, pcm_core::Error> {
        if self.rows.len() != self.n {
            return Err(pcm_core::Error::DimensionMismatch {
                expected: self.n,
                found: self.rows.len(),
            });
        }
        Pcm::new(&self.values())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix files serialize")
    }

    /// Parses JSON (if the text starts with `{`) or CSV.
    pub fn parse(text: &str, path: &Path) -> Result<Self, FileError> {
        if text.trim_start().starts_with('{') {
            let file: MatrixFile =
                serde_json::from_str(text).map_err(|source| FileError::Json {
                    path: path.to_owned(),
                    source,
                })?;
            if file.rows.len() != file.n {
                return Err(FileError::RowCount {
                    path: path.to_owned(),
                    declared: file.n,
                    found: file.rows.len(),
                });
            }
            Ok(file)
        } else {
            parse_csv(text, path)
        }
    }
}

fn parse_csv(text: &str, path: &Path) -> Result<MatrixFile, FileError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|source| FileError::Csv {
            path: path.to_owned(),
            source,
        })?;
        let entries = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                Entry::parse(field).ok_or_else(|| FileError::Entry {
                    path: path.to_owned(),
                    row: row + 1,
                    col: col + 1,
                    text: field.to_owned(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(entries);
    }
    Ok(MatrixFile {
        n: rows.len(),
        rows,
    })
}

pub fn read_matrix_file(path: &Path) -> Result<MatrixFile, FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_owned(),
        source,
    })?;
    MatrixFile::parse(&text, path)
}

/// Reads and validates a matrix.
pub fn read_pcm(path: &Path) -> Result<Pcm, FileError> {
    read_matrix_file(path)?
        .to_pcm()
        .map_err(|source| FileError::Matrix {
            path: path.to_owned(),
            source,
        })
}

pub fn write_matrix_file(path: &Path, file: &MatrixFile) -> Result<(), FileError> {
    let mut text = file.to_json();
    text.push('\n');
    fs::write(path, text).map_err(|source| FileError::Io {
        path: path.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_json_with_fractions() {
        let text = r#"{"n": 2, "rows": [[1, "9/5"], ["5/9", 1.0]]}"#;
        let file = MatrixFile::parse(text, Path::new("m.json")).unwrap();
        assert_eq!(file.rows[0][1], Entry::Fraction(Rational::new(9, 5)));
        assert_eq!(file.rows[0][0], Entry::Number(1.0));
        let a = file.to_pcm().unwrap();
        assert_eq!(a.get(0, 1), 1.8);
    }

    #[test]
    fn parses_csv() {
        let text = "1, 3, 1/5\n1/3, 1, 2\n5, 0.5, 1\n";
        let file = MatrixFile::parse(text, Path::new("m.csv")).unwrap();
        assert_eq!(file.n, 3);
        let a = file.to_pcm().unwrap();
        assert_eq!(a.get(2, 1), 0.5);
    }

    #[test]
    fn names_bad_entries() {
        let err = MatrixFile::parse("1, x\n1, 1\n", Path::new("m.csv")).unwrap_err();
        assert!(err.to_string().contains("entry (1, 2) `x`"), "{err}");
        let err = MatrixFile::parse(r#"{"n": 3, "rows": [[1]]}"#, Path::new("m.json")).unwrap_err();
        assert!(matches!(
            err,
            FileError::RowCount {
                declared: 3,
                found: 1,
                ..
            }
        ));
        let err = MatrixFile::parse(
            r#"{"n": 2, "rows": [[1, "a/b"], [1, 1]]}"#,
            Path::new("m.json"),
        )
        .unwrap_err();
        assert!(matches!(err, FileError::Json { .. }));
    }

    #[test]
    fn writes_fractions_back() {
        let file = MatrixFile::from_rational(&pcm_core::cases::matrix_b_hat_opposite());
        let json = file.to_json();
        assert!(json.contains("\"9/5\""));
        assert!(json.contains("\"5/9\""));
        let back = MatrixFile::parse(&json, Path::new("x")).unwrap();
        assert_eq!(back, file);
    }
}
