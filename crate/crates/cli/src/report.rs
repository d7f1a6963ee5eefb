//! Deterministic table output.

use std::fmt::Display;

use clap::ValueEnum;
use num_bigint::{BigInt, BigUint};
use serde::{Serialize, Serializer};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// A flat record with a fixed column order.
pub trait Record: Serialize {
    const COLUMNS: &'static [&'static str];
}

fn decimal<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthRecord {
    pub n: u32,
    pub length: usize,
    #[serde(serialize_with = "decimal")]
    pub lower: BigUint,
    #[serde(serialize_with = "decimal")]
    pub cost: BigUint,
    #[serde(serialize_with = "decimal")]
    pub budget: BigUint,
}

impl Record for GrowthRecord {
    const COLUMNS: &'static [&'static str] = &["n", "length", "lower", "cost", "budget"];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistortionRecord {
    pub n: u32,
    #[serde(serialize_with = "decimal")]
    pub fibonacci: BigUint,
    #[serde(serialize_with = "decimal")]
    pub lambda: BigInt,
    #[serde(serialize_with = "decimal")]
    pub mu: BigInt,
}

impl Record for DistortionRecord {
    const COLUMNS: &'static [&'static str] = &["n", "fibonacci", "lambda", "mu"];
}

fn cells<R: Record>(row: &R) -> Vec<String> {
    let value = serde_json::to_value(row).expect("records serialize");
    R::COLUMNS
        .iter()
        .map(|c| match &value[*c] {
            Value::String(s) => s.clone(),
            v => v.to_string(),
        })
        .collect()
}

/// Renders `rows` as CSV, JSON (an array of objects with sorted keys) or
/// aligned text. Large integers are written in decimal; in JSON they are
/// strings.
pub fn emit_report<R: Record>(rows: &[R], format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(R::COLUMNS).expect("in-memory write");
            for row in rows {
                w.serialize(row).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
        Format::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(|r| serde_json::to_value(r).expect("records serialize"))
                .collect();
            let mut out = serde_json::to_vec_pretty(&values).expect("values serialize");
            out.push(b'\n');
            out
        }
        Format::Text => {
            let table: Vec<Vec<String>> =
                std::iter::once(R::COLUMNS.iter().map(|c| c.to_string()).collect())
                    .chain(rows.iter().map(cells))
                    .collect();
            let widths: Vec<usize> = (0..R::COLUMNS.len())
                .map(|i| table.iter().map(|r| r[i].len()).max().unwrap_or(0))
                .collect();
            let mut out = String::new();
            for row in &table {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: u32) -> GrowthRecord {
        GrowthRecord {
            n,
            length: 4 * n as usize + 4,
            lower: BigUint::from(1u32),
            cost: BigUint::from(u64::MAX) * 10u32,
            budget: BigUint::from(4u32).pow(n),
        }
    }

    #[test]
    fn csv_header_only_when_empty() {
        let out = emit_report::<GrowthRecord>(&[], Format::Csv);
        assert_eq!(out, b"n,length,lower,cost,budget\n");
    }

    #[test]
    fn csv_rows() {
        let out = String::from_utf8(emit_report(&[row(1)], Format::Csv)).unwrap();
        assert_eq!(
            out,
            "n,length,lower,cost,budget\n1,8,1,184467440737095516150,4\n"
        );
    }

    #[test]
    fn json_keys_sorted() {
        let out = String::from_utf8(emit_report(&[row(2)], Format::Json)).unwrap();
        let keys: Vec<usize> = ["budget", "cost", "length", "lower", "\"n\""]
            .iter()
            .map(|k| out.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "{out}");
        assert!(out.contains("\"cost\": \"184467440737095516150\""));
        assert_eq!(emit_report::<GrowthRecord>(&[], Format::Json), b"[]\n");
    }

    #[test]
    fn text_aligned() {
        let out = String::from_utf8(emit_report(&[row(1), row(12)], Format::Text)).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("12"));
        assert!(lines[1].starts_with(" 1"));
    }
}
