//! Class tables in, results table out.
//!
//! Input is a CSV with header `co0_class,co1_class,frame_shape`; an optional
//! second CSV `co1_class,anomalous` feeds the anomaly cross-check.  The
//! bundled table covers all 167 classes of Co₀ (see `data/README.md`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{
    classify, counts_from_constants, select_with, Classification, ClassifyError, CrossCheckRow,
    GroundStateCount,
};
use crate::frame::{FrameError, FrameShape, LiftTag};
use crate::partition::LiftEvaluator;
use crate::qseries::{fmt_rational64, parse_rational64, Exp};

/// The bundled Co₀ class table.
pub const BUNDLED_FRAMES: &str = include_str!("../data/co0_frames.csv");

/// Number of conjugacy classes of Co₁.
pub const CO1_CLASS_COUNT: usize = 101;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("row {row}: invalid Frame shape {shape:?}: {source}")]
    Frame {
        row: usize,
        shape: String,
        #[source]
        source: FrameError,
    },
    #[error("row {row}: duplicate Co0 class {name}")]
    DuplicateClass { row: usize, name: String },
    #[error("row {row} ({co0}): {source}")]
    Pipeline {
        row: usize,
        co0: String,
        #[source]
        source: ClassifyError,
    },
    #[error("Co1 class {co1} gets different results from its Co0 lifts: {detail}")]
    Inconsistent { co1: String, detail: String },
}

/// One input row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameRow {
    pub co0_name: String,
    pub co1_name: String,
    pub shape: FrameShape,
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub co0_name: String,
    pub co1_name: String,
    pub frame_shape: FrameShape,
    pub trace: i64,
    pub lift_tag: LiftTag,
    /// Other candidates whose Z^R coincided with the chosen one.
    pub tied_with: Vec<LiftTag>,
    pub z_r_const: i64,
    /// Z^NS below the truncation bound, as `(exponent, coefficient)` pairs.
    pub z_ns_prefix: Vec<(Exp, BigInt)>,
    pub truncation: Exp,
    pub counts: GroundStateCount,
    pub classification: Classification,
    pub balanced: bool,
    pub anomalous: Option<bool>,
}

impl ClassRecord {
    pub fn z_ns_constant(&self) -> BigInt {
        self.z_ns_prefix
            .iter()
            .find(|(e, _)| *e == Exp::from_integer(0))
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }
}

impl CrossCheckRow for ClassRecord {
    fn co1_name(&self) -> &str {
        &self.co1_name
    }
    fn trace(&self) -> i64 {
        self.trace
    }
    fn classification(&self) -> Classification {
        self.classification
    }
    fn balanced(&self) -> bool {
        self.balanced
    }
}

/// Parse a frames CSV from any reader.
pub fn read_frames<R: Read>(reader: R) -> Result<Vec<FrameRow>, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| DatasetError::Parse {
            row: 1,
            message: e.to_string(),
        })?
        .clone();
    let expected = ["co0_class", "co1_class", "frame_shape"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(DatasetError::Parse {
            row: 1,
            message: format!("expected header {}", expected.join(",")),
        });
    }
    let mut rows = Vec::new();
    let mut names = BTreeSet::new();
    for (i, rec) in rdr.records().enumerate() {
        // Header is row 1; comments are skipped by the reader, so fall back on
        // the reader's own position when it has one.
        let row = i + 2;
        let rec = rec.map_err(|e| DatasetError::Parse {
            row: e.position().map_or(row, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let row = rec.position().map_or(row, |p| p.line() as usize);
        if rec.len() != 3 {
            return Err(DatasetError::Parse {
                row,
                message: format!("expected 3 fields, found {}", rec.len()),
            });
        }
        let (co0, co1, text) = (&rec[0], &rec[1], &rec[2]);
        if co0.is_empty() || co1.is_empty() {
            return Err(DatasetError::Parse {
                row,
                message: "empty class name".into(),
            });
        }
        let shape = FrameShape::parse(text).map_err(|source| DatasetError::Frame {
            row,
            shape: text.to_string(),
            source,
        })?;
        if !names.insert(co0.to_string()) {
            return Err(DatasetError::DuplicateClass {
                row,
                name: co0.to_string(),
            });
        }
        rows.push(FrameRow {
            co0_name: co0.to_string(),
            co1_name: co1.to_string(),
            shape,
        });
    }
    Ok(rows)
}

/// Load a frames CSV from disk.
pub fn load_frames(path: impl AsRef<Path>) -> Result<Vec<FrameRow>, DatasetError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_frames(file)
}

/// The bundled 167-row table.
pub fn bundled_frames() -> Vec<FrameRow> {
    read_frames(BUNDLED_FRAMES.as_bytes()).expect("bundled table is valid")
}

/// Distinct Co₁ names, in first-appearance order.
pub fn co1_names(rows: &[FrameRow]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    rows.iter()
        .filter(|r| seen.insert(r.co1_name.clone()))
        .map(|r| r.co1_name.clone())
        .collect()
}

/// Parse `co1_class,anomalous` (values `true/false`, `yes/no`, `1/0`).
pub fn read_anomalies<R: Read>(reader: R) -> Result<BTreeMap<String, bool>, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| DatasetError::Parse {
            row,
            message: e.to_string(),
        })?;
        if rec.len() != 2 {
            return Err(DatasetError::Parse {
                row,
                message: format!("expected 2 fields, found {}", rec.len()),
            });
        }
        let flag = match rec[1].to_ascii_lowercase().as_str() {
            "true" | "yes" | "1" | "✓" => true,
            "false" | "no" | "0" | "" => false,
            other => {
                return Err(DatasetError::Parse {
                    row,
                    message: format!("bad anomaly flag {other:?}"),
                })
            }
        };
        out.insert(rec[0].to_string(), flag);
    }
    Ok(out)
}

pub fn load_anomalies(path: impl AsRef<Path>) -> Result<BTreeMap<String, bool>, DatasetError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_anomalies(file)
}

/// Run the full pipeline on one row.
pub fn run_row(row: &FrameRow, t: Exp) -> Result<ClassRecord, ClassifyError> {
    let f = &row.shape;
    let base = f.log_eigenvalues()?;
    let ev = LiftEvaluator::new(&base, t);
    let sel = select_with(f, &base, &ev)?;
    let (z_ns, _) = ev.evaluate_last(sel.lift.last());
    let mut prefix = Vec::with_capacity(z_ns.len());
    for (e, c) in z_ns.terms() {
        if !c.is_integer() || c < &num_rational::BigRational::from_integer(0.into()) {
            return Err(ClassifyError::NotCounting {
                sector: "NS",
                exponent: e,
            });
        }
        prefix.push((e, c.to_integer()));
    }
    if let Some((e, _)) = prefix.first() {
        if *e < Exp::from_integer(0) {
            return Err(ClassifyError::NotCounting {
                sector: "NS",
                exponent: *e,
            });
        }
    }
    let trace = f.trace_k1();
    let ns0 = z_ns.coefficient(Exp::from_integer(0))?.to_integer();
    let counts = counts_from_constants(&ns0, &BigInt::from(trace))?;
    Ok(ClassRecord {
        co0_name: row.co0_name.clone(),
        co1_name: row.co1_name.clone(),
        frame_shape: f.clone(),
        trace,
        lift_tag: sel.lift.tag(),
        tied_with: sel
            .matching
            .iter()
            .copied()
            .filter(|t| *t != sel.lift.tag())
            .collect(),
        z_r_const: trace,
        z_ns_prefix: prefix,
        truncation: t,
        counts,
        classification: classify(&counts),
        balanced: f.is_balanced(),
        anomalous: None,
    })
}

/// Run every row (in parallel); output order is input order.
pub fn run_all(rows: &[FrameRow], t: Exp) -> Result<Vec<ClassRecord>, DatasetError> {
    rows.par_iter()
        .enumerate()
        .map(|(i, row)| {
            run_row(row, t).map_err(|source| DatasetError::Pipeline {
                row: i + 2,
                co0: row.co0_name.clone(),
                source,
            })
        })
        .collect()
}

/// Fill in `anomalous` from a table keyed by Co₁ name.
pub fn attach_anomalies(records: &mut [ClassRecord], table: &BTreeMap<String, bool>) {
    for r in records {
        r.anomalous = table.get(&r.co1_name).copied();
    }
}

/// Aggregate per Co₁ class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub conspiratorial: usize,
    pub susy_breaking: usize,
    pub nonconspiratorial: usize,
    /// Co₁ names per classification, in first-appearance order.
    pub by_class: BTreeMap<Classification, Vec<String>>,
}

impl Summary {
    pub fn co1_classes(&self) -> usize {
        self.conspiratorial + self.susy_breaking + self.nonconspiratorial
    }

    pub fn line(&self) -> String {
        format!(
            "{} conspiratorial, {} susy-breaking, {} nonconspiratorial ({} Co1 classes)",
            self.conspiratorial,
            self.susy_breaking,
            self.nonconspiratorial,
            self.co1_classes()
        )
    }
}

/// Summarize by Co₁ class, checking that all Co₀ rows over one Co₁ class
/// agree on `|Z^R|`, the Z^NS prefix and the classification.
pub fn summarize(records: &[ClassRecord]) -> Result<Summary, DatasetError> {
    let mut first: BTreeMap<&str, &ClassRecord> = BTreeMap::new();
    let mut order: Vec<&str> = Vec::new();
    for r in records {
        match first.get(r.co1_name.as_str()) {
            None => {
                first.insert(&r.co1_name, r);
                order.push(&r.co1_name);
            }
            Some(prev) => {
                let mut diffs = Vec::new();
                if prev.z_r_const.abs() != r.z_r_const.abs() {
                    diffs.push(format!(
                        "|Z^R| {} vs {}",
                        prev.z_r_const.abs(),
                        r.z_r_const.abs()
                    ));
                }
                if prev.z_ns_prefix != r.z_ns_prefix {
                    diffs.push("Z^NS prefix".to_string());
                }
                if prev.classification != r.classification {
                    diffs.push(format!("{} vs {}", prev.classification, r.classification));
                }
                if !diffs.is_empty() {
                    return Err(DatasetError::Inconsistent {
                        co1: r.co1_name.clone(),
                        detail: format!(
                            "{} and {}: {}",
                            prev.co0_name,
                            r.co0_name,
                            diffs.join(", ")
                        ),
                    });
                }
            }
        }
    }
    let mut s = Summary::default();
    for name in order {
        let c = first[name].classification;
        match c {
            Classification::Conspiratorial => s.conspiratorial += 1,
            Classification::SusyBreaking => s.susy_breaking += 1,
            Classification::Nonconspiratorial => s.nonconspiratorial += 1,
        }
        s.by_class.entry(c).or_default().push(name.to_string());
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportStyle {
    /// Wrap classification marks in ANSI colour codes (markdown only).
    pub color: bool,
    /// Number of Z^NS terms shown in markdown; CSV always carries the full prefix.
    pub ns_terms: usize,
}

impl Default for ReportStyle {
    fn default() -> Self {
        ReportStyle {
            color: false,
            ns_terms: 4,
        }
    }
}

const CSV_HEADER: [&str; 14] = [
    "co0_class",
    "co1_class",
    "frame_shape",
    "trace",
    "lift",
    "tied_with",
    "z_r",
    "z_ns",
    "truncation",
    "bosons",
    "fermions",
    "swapped",
    "classification",
    "balanced",
];

fn fmt_prefix(prefix: &[(Exp, BigInt)], limit: Option<usize>) -> String {
    let shown = limit.unwrap_or(prefix.len()).min(prefix.len());
    let mut parts: Vec<String> = prefix[..shown]
        .iter()
        .map(|(e, c)| format!("{}:{}", fmt_rational64(*e), c))
        .collect();
    if shown < prefix.len() {
        parts.push("…".into());
    }
    parts.join(" ")
}

fn parse_prefix(s: &str) -> Option<Vec<(Exp, BigInt)>> {
    s.split_whitespace()
        .map(|tok| {
            let (e, c) = tok.split_once(':')?;
            Some((parse_rational64(e)?, c.parse::<BigInt>().ok()?))
        })
        .collect()
}

fn fmt_tags(tags: &[LiftTag]) -> String {
    tags.iter()
        .map(|t| t.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn fmt_flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn colored_mark(c: Classification, color: bool) -> String {
    if !color {
        return c.mark().to_string();
    }
    let code = match c {
        Classification::Conspiratorial => "32",
        Classification::Nonconspiratorial => "31",
        Classification::SusyBreaking => "33",
    };
    format!("\x1b[{code}m{}\x1b[0m", c.mark())
}

/// Render the results table.  The summary footer is a `#` comment in CSV so
/// the body stays machine-readable.
pub fn emit_report(records: &[ClassRecord], format: ReportFormat, style: ReportStyle) -> String {
    let summary = summarize(records).unwrap_or_else(|_| summarize_lenient(records));
    let with_anomaly = records.iter().any(|r| r.anomalous.is_some());
    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            let mut header: Vec<&str> = CSV_HEADER.to_vec();
            if with_anomaly {
                header.push("anomalous");
            }
            w.write_record(&header).expect("in-memory write");
            for r in records {
                let mut row = vec![
                    r.co0_name.clone(),
                    r.co1_name.clone(),
                    r.frame_shape.to_string(),
                    r.trace.to_string(),
                    r.lift_tag.to_string(),
                    fmt_tags(&r.tied_with),
                    r.z_r_const.to_string(),
                    fmt_prefix(&r.z_ns_prefix, None),
                    fmt_rational64(r.truncation),
                    r.counts.bosons.to_string(),
                    r.counts.fermions.to_string(),
                    fmt_flag(r.counts.swapped).to_string(),
                    r.classification.mark().to_string(),
                    fmt_flag(r.balanced).to_string(),
                ];
                if with_anomaly {
                    row.push(r.anomalous.map(fmt_flag).unwrap_or("").to_string());
                }
                w.write_record(&row).expect("in-memory write");
            }
            let mut out = String::from_utf8(w.into_inner().expect("in-memory flush"))
                .expect("csv output is UTF-8");
            let _ = writeln!(out, "# {}", summary.line());
            out
        }
        ReportFormat::Markdown => {
            let mut out = String::new();
            let mut header = vec![
                "Co₀",
                "Co₁",
                "Frame shape",
                "Z^R",
                "Z^NS",
                "b",
                "f",
                "class",
                "balanced",
            ];
            if with_anomaly {
                header.push("anomalous");
            }
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let _ = writeln!(
                out,
                "|{}|",
                header.iter().map(|_| "---").collect::<Vec<_>>().join("|")
            );
            for r in records {
                let _ = writeln!(out, "{}", markdown_row(r, with_anomaly, style));
            }
            let _ = writeln!(out);
            let _ = writeln!(out, "{}", summary.line());
            out
        }
    }
}

/// One markdown table line for `r`.
pub fn markdown_row(r: &ClassRecord, with_anomaly: bool, style: ReportStyle) -> String {
    let mut cells = vec![
        r.co0_name.clone(),
        r.co1_name.clone(),
        r.frame_shape.to_string(),
        r.z_r_const.to_string(),
        fmt_prefix(&r.z_ns_prefix, Some(style.ns_terms)),
        r.counts.bosons.to_string(),
        r.counts.fermions.to_string(),
        colored_mark(r.classification, style.color),
        fmt_flag(r.balanced).to_string(),
    ];
    if with_anomaly {
        cells.push(r.anomalous.map(fmt_flag).unwrap_or("").to_string());
    }
    format!("| {} |", cells.join(" | "))
}

/// Counts without the cross-row consistency check (for rendering partial
/// or inconsistent tables).
fn summarize_lenient(records: &[ClassRecord]) -> Summary {
    let mut s = Summary::default();
    let mut seen = BTreeSet::new();
    for r in records {
        if !seen.insert(r.co1_name.clone()) {
            continue;
        }
        match r.classification {
            Classification::Conspiratorial => s.conspiratorial += 1,
            Classification::SusyBreaking => s.susy_breaking += 1,
            Classification::Nonconspiratorial => s.nonconspiratorial += 1,
        }
        s.by_class
            .entry(r.classification)
            .or_default()
            .push(r.co1_name.clone());
    }
    s
}

/// Inverse of the CSV branch of [`emit_report`].
pub fn parse_report_csv(text: &str) -> Result<Vec<ClassRecord>, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| DatasetError::Parse {
            row: 1,
            message: e.to_string(),
        })?
        .clone();
    let with_anomaly = headers.len() == CSV_HEADER.len() + 1;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let err = |message: String| DatasetError::Parse { row, message };
        let rec = rec.map_err(|e| err(e.to_string()))?;
        let field = |k: usize| rec.get(k).ok_or_else(|| err(format!("missing field {k}")));
        let int = |k: usize| -> Result<i64, DatasetError> {
            field(k)?
                .parse()
                .map_err(|_| err(format!("field {k} not an integer")))
        };
        let flag = |s: &str| -> Result<bool, DatasetError> {
            match s {
                "yes" => Ok(true),
                "no" => Ok(false),
                _ => Err(err(format!("bad flag {s:?}"))),
            }
        };
        let shape_text = field(2)?;
        let frame_shape = FrameShape::parse(shape_text).map_err(|source| DatasetError::Frame {
            row,
            shape: shape_text.to_string(),
            source,
        })?;
        let tied_with = field(5)?
            .split_whitespace()
            .map(|s| s.parse::<LiftTag>().map_err(&err))
            .collect::<Result<Vec<_>, _>>()?;
        let anomalous = if with_anomaly {
            match field(14)? {
                "" => None,
                s => Some(flag(s)?),
            }
        } else {
            None
        };
        out.push(ClassRecord {
            co0_name: field(0)?.to_string(),
            co1_name: field(1)?.to_string(),
            frame_shape,
            trace: int(3)?,
            lift_tag: field(4)?.parse().map_err(&err)?,
            tied_with,
            z_r_const: int(6)?,
            z_ns_prefix: parse_prefix(field(7)?).ok_or_else(|| err("bad z_ns prefix".into()))?,
            truncation: parse_rational64(field(8)?).ok_or_else(|| err("bad truncation".into()))?,
            counts: GroundStateCount {
                bosons: int(9)? as u64,
                fermions: int(10)? as u64,
                swapped: flag(field(11)?)?,
            },
            classification: Classification::from_mark(field(12)?)
                .ok_or_else(|| err("bad classification mark".into()))?,
            balanced: flag(field(13)?)?,
            anomalous,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rows_with_row_numbers() {
        let text = "co0_class,co1_class,frame_shape\n1A,1A,1^24\n2B,2A,1^7 2^x\n";
        match read_frames(text.as_bytes()) {
            Err(DatasetError::Frame { row, .. }) => assert_eq!(row, 3),
            other => panic!("unexpected {other:?}"),
        }
        let dup = "co0_class,co1_class,frame_shape\n1A,1A,1^24\n1A,1A,1^24\n";
        assert!(matches!(
            read_frames(dup.as_bytes()),
            Err(DatasetError::DuplicateClass { row: 3, .. })
        ));
        let header = "a,b,c\n1A,1A,1^24\n";
        assert!(matches!(
            read_frames(header.as_bytes()),
            Err(DatasetError::Parse { row: 1, .. })
        ));
    }

    #[test]
    fn empty_report_has_header_and_zero_summary() {
        let md = emit_report(&[], ReportFormat::Markdown, ReportStyle::default());
        assert!(md.starts_with("| Co₀ |"));
        assert!(md.contains("0 conspiratorial, 0 susy-breaking, 0 nonconspiratorial"));
        let csv = emit_report(&[], ReportFormat::Csv, ReportStyle::default());
        assert!(parse_report_csv(&csv).unwrap().is_empty());
    }

    #[test]
    fn identity_and_minus_identity() {
        let text = "co0_class,co1_class,frame_shape\n1A,1A,1^24\n2A,1A,1^-24 2^24\n";
        let rows = read_frames(text.as_bytes()).unwrap();
        let recs = run_all(&rows, Exp::from_integer(2)).unwrap();
        assert_eq!(recs[0].classification, Classification::Conspiratorial);
        assert_eq!((recs[0].counts.bosons, recs[0].counts.fermions), (24, 0));
        assert_eq!(recs[1].z_r_const, -24);
        assert_eq!(recs[0].z_ns_prefix, recs[1].z_ns_prefix);
        let s = summarize(&recs).unwrap();
        assert_eq!(s.co1_classes(), 1);
    }

    #[test]
    fn anomaly_table_parsing() {
        let t = read_anomalies("co1_class,anomalous\n1A,no\n2C,yes\n".as_bytes()).unwrap();
        assert_eq!(t.get("2C"), Some(&true));
        assert!(read_anomalies("co1_class,anomalous\n1A,maybe\n".as_bytes()).is_err());
    }
}
