//! CSV and JSON output with a metadata preamble.
//!
//! CSV files start with `# key=value` comment lines, then the header row and
//! one record per row. JSON files hold an array whose first element is
//! `{"metadata": {...}}`, followed by one object per row.

use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::config::{ExperimentConfig, OutputFormat};
use super::ExpError;
use crate::walker::RNG_ALGORITHM;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A row type with a fixed column order; `HEADER` must list the serialized
/// field names in declaration order.
pub trait Row: Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];
}

/// Ordered key/value pairs describing a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata(pub Vec<(String, String)>);

impl Metadata {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn for_config(cfg: &ExperimentConfig, command: &str) -> Metadata {
        let mut m = Metadata::default();
        let join = |v: &[u64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        m.push("command", command);
        m.push("scenario", &cfg.scenario);
        m.push("seed", cfg.seed);
        m.push("rng", RNG_ALGORITHM);
        m.push(
            "k",
            join(&cfg.ks.iter().map(|&k| k as u64).collect::<Vec<_>>()),
        );
        m.push("samples", cfg.samples);
        m.push("primes_min", cfg.primes_min);
        m.push("primes_max", cfg.primes_max);
        m.push("budget", cfg.budget);
        m.push("tv_max", cfg.thresholds.tv_max);
        m.push("coverage_min", cfg.thresholds.coverage_min);
        m.push("tv_reject", cfg.thresholds.tv_reject);
        m.push("field_primes", join(&cfg.field_primes));
        m.push("bound", cfg.bound);
        m.push("version", ARTIFACT_VERSION);
        m
    }
}

pub fn write_csv<T: Row, W: Write>(
    rows: &[T],
    meta: &Metadata,
    mut out: W,
) -> Result<(), ExpError> {
    for (k, v) in &meta.0 {
        writeln!(out, "# {k}={v}")?;
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(T::HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Row, W: Write>(
    rows: &[T],
    meta: &Metadata,
    mut out: W,
) -> Result<(), ExpError> {
    let meta_obj: serde_json::Map<String, serde_json::Value> = meta
        .0
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    let mut items = vec![serde_json::json!({ "metadata": meta_obj })];
    for r in rows {
        items.push(serde_json::to_value(r)?);
    }
    serde_json::to_writer_pretty(&mut out, &items)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_rows<T: Row, W: Write>(
    rows: &[T],
    meta: &Metadata,
    format: OutputFormat,
    out: W,
) -> Result<(), ExpError> {
    match format {
        OutputFormat::Csv => write_csv(rows, meta, out),
        OutputFormat::Json => write_json(rows, meta, out),
    }
}

/// Writes `rows` to `path`, or to standard output when no path is given.
pub fn emit<T: Row>(
    rows: &[T],
    meta: &Metadata,
    path: Option<&Path>,
    format: OutputFormat,
) -> Result<(), ExpError> {
    match path {
        Some(p) => {
            let f = std::io::BufWriter::new(std::fs::File::create(p)?);
            write_rows(rows, meta, format, f)
        }
        None => write_rows(rows, meta, format, std::io::stdout().lock()),
    }
}

pub fn read_csv<T: Row>(text: &str) -> Result<(Metadata, Vec<T>), ExpError> {
    let mut meta = Metadata::default();
    for line in text.lines() {
        let Some(rest) = line.strip_prefix("# ") else {
            break;
        };
        if let Some((k, v)) = rest.split_once('=') {
            meta.push(k, v);
        }
    }
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rows = r.deserialize().collect::<Result<Vec<T>, _>>()?;
    Ok((meta, rows))
}

pub fn read_json<T: Row>(text: &str) -> Result<(Metadata, Vec<T>), ExpError> {
    let items: Vec<serde_json::Value> = serde_json::from_str(text)?;
    let mut it = items.into_iter();
    let mut meta = Metadata::default();
    if let Some(serde_json::Value::Object(first)) = it.next() {
        if let Some(serde_json::Value::Object(m)) = first.get("metadata") {
            for (k, v) in m {
                meta.push(k, v.as_str().unwrap_or_default());
            }
        }
    }
    let rows = it
        .map(serde_json::from_value)
        .collect::<Result<Vec<T>, _>>()?;
    Ok((meta, rows))
}
