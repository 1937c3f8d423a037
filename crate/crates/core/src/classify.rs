//! Lift selection, ground-state counting and the three-way classification.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::frame::{FrameError, FrameShape, LiftTag, LogEigenvalues};
use crate::partition::LiftEvaluator;
use crate::qseries::{Exp, PuiseuxSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("no lift of {shape} has Z^R equal to the constant {trace}")]
    NoMatch { shape: String, trace: i64 },
    #[error("lifts {tags:?} of {shape} give different Z^R series that all equal {trace} at q^0")]
    AmbiguousMatch {
        shape: String,
        trace: i64,
        tags: Vec<LiftTag>,
    },
    #[error("Z^NS(0) = {z_ns} and Z^R(0) = {z_r} have different parity")]
    Parity { z_ns: BigInt, z_r: BigInt },
    #[error("coefficient of Z^{sector} at q^{exponent} is not a nonnegative integer")]
    NotCounting { sector: &'static str, exponent: Exp },
}

/// The outcome of trying the four lift candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftSelection {
    pub lift: LogEigenvalues,
    pub z_r: PuiseuxSeries,
    /// Every candidate whose `Z^R` was the constant `k₁` (identical series).
    pub matching: Vec<LiftTag>,
}

impl LiftSelection {
    pub fn is_tie(&self) -> bool {
        self.matching.len() > 1
    }
}

/// Try the four candidates; keep the one whose `Z^R` is the constant `k₁`.
///
/// Candidates whose series coincide termwise are one match (the first in tag
/// order wins); two termwise-different matching series is an error.
pub fn select_lift(f: &FrameShape, t: Exp) -> Result<LiftSelection, ClassifyError> {
    let base = f.log_eigenvalues()?;
    let ev = LiftEvaluator::new(&base, t);
    select_with(f, &base, &ev)
}

pub(crate) fn select_with(
    f: &FrameShape,
    base: &LogEigenvalues,
    ev: &LiftEvaluator,
) -> Result<LiftSelection, ClassifyError> {
    let trace = BigInt::from(f.trace_k1());
    let mut found: Vec<(LogEigenvalues, PuiseuxSeries)> = Vec::new();
    for lift in base.spin_lifts() {
        let z_r = ev.z_r_last(lift.last());
        if z_r.is_constant(&trace) {
            found.push((lift, z_r));
        }
    }
    let Some((lift, z_r)) = found.first().cloned() else {
        return Err(ClassifyError::NoMatch {
            shape: f.to_string(),
            trace: f.trace_k1(),
        });
    };
    if found.iter().any(|(_, z)| *z != z_r) {
        return Err(ClassifyError::AmbiguousMatch {
            shape: f.to_string(),
            trace: f.trace_k1(),
            tags: found.iter().map(|(l, _)| l.tag()).collect(),
        });
    }
    Ok(LiftSelection {
        lift,
        z_r,
        matching: found.into_iter().map(|(l, _)| l.tag()).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundStateCount {
    pub bosons: u64,
    pub fermions: u64,
    /// True when the raw formula gave more fermions than bosons and the two
    /// were exchanged; the overall parity of the twisted sector is not
    /// well-defined, so counts are reported with `bosons >= fermions`.
    pub swapped: bool,
}

/// `bosons = (Z^NS(0) + Z^R)/2`, `fermions = (Z^NS(0) − Z^R)/2`.
pub fn ground_states(
    z_ns: &PuiseuxSeries,
    z_r: &PuiseuxSeries,
) -> Result<GroundStateCount, ClassifyError> {
    let zero = Exp::zero();
    let ns = integer_coefficient(z_ns, zero, "NS")?;
    let r = integer_coefficient(z_r, zero, "R")?;
    counts_from_constants(&ns, &r)
}

/// Same as [`ground_states`] but from the two constant terms.
pub fn counts_from_constants(ns: &BigInt, r: &BigInt) -> Result<GroundStateCount, ClassifyError> {
    let parity_err = || ClassifyError::Parity {
        z_ns: ns.clone(),
        z_r: r.clone(),
    };
    let sum = ns + r;
    let diff = ns - r;
    if !(&sum % 2u32).is_zero() {
        return Err(parity_err());
    }
    let mut b: BigInt = sum / 2;
    let mut f: BigInt = diff / 2;
    if b.is_negative() || f.is_negative() {
        return Err(ClassifyError::NotCounting {
            sector: "NS",
            exponent: Exp::zero(),
        });
    }
    // Report with bosons >= fermions; the flag records the exchange.
    let swapped = b < f;
    if swapped {
        std::mem::swap(&mut b, &mut f);
    }
    let not_counting = || ClassifyError::NotCounting {
        sector: "NS",
        exponent: Exp::zero(),
    };
    Ok(GroundStateCount {
        bosons: b.to_u64().ok_or_else(not_counting)?,
        fermions: f.to_u64().ok_or_else(not_counting)?,
        swapped,
    })
}

fn integer_coefficient(
    z: &PuiseuxSeries,
    e: Exp,
    sector: &'static str,
) -> Result<BigInt, ClassifyError> {
    let c = z.coefficient(e)?;
    if !c.is_integer() {
        return Err(ClassifyError::NotCounting {
            sector,
            exponent: e,
        });
    }
    Ok(c.to_integer())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Conspiratorial,
    Nonconspiratorial,
    SusyBreaking,
}

impl Classification {
    pub const ALL: [Classification; 3] = [
        Classification::Conspiratorial,
        Classification::Nonconspiratorial,
        Classification::SusyBreaking,
    ];

    /// Table mark: ✓, X or 0.
    pub fn mark(self) -> &'static str {
        match self {
            Classification::Conspiratorial => "✓",
            Classification::Nonconspiratorial => "X",
            Classification::SusyBreaking => "0",
        }
    }

    pub fn from_mark(s: &str) -> Option<Self> {
        match s {
            "✓" | "V" | "v" => Some(Classification::Conspiratorial),
            "X" | "x" => Some(Classification::Nonconspiratorial),
            "0" => Some(Classification::SusyBreaking),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Conspiratorial => "conspiratorial",
            Classification::Nonconspiratorial => "nonconspiratorial",
            Classification::SusyBreaking => "susy-breaking",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Classification {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Classification::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .or_else(|| Classification::from_mark(s))
            .ok_or_else(|| format!("unknown classification {s:?}"))
    }
}

pub fn classify(count: &GroundStateCount) -> Classification {
    match (count.bosons, count.fermions) {
        (0, 0) => Classification::SusyBreaking,
        (b, f) if b > 0 && f > 0 => Classification::Nonconspiratorial,
        _ => Classification::Conspiratorial,
    }
}

/// Per-class facts needed by [`anomaly_cross_check`].
pub trait CrossCheckRow {
    fn co1_name(&self) -> &str;
    fn trace(&self) -> i64;
    fn classification(&self) -> Classification;
    fn balanced(&self) -> bool;
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnomalyReport {
    /// SusyBreaking classes with nonzero trace.
    pub susy_breaking_with_trace: Vec<String>,
    /// Nonconspiratorial classes with a balanced Frame shape.
    pub nonconspiratorial_balanced: Vec<String>,
    /// Present only when an anomaly table was supplied: classes where
    /// `SusyBreaking ⇔ anomalous` fails.
    pub biconditional_failures: Option<Vec<String>>,
    /// Co₁ classes absent from the supplied anomaly table.
    pub missing_from_table: Vec<String>,
    /// Table entries naming no class in the records.
    pub unknown_in_table: Vec<String>,
}

impl AnomalyReport {
    pub fn structural_ok(&self) -> bool {
        self.susy_breaking_with_trace.is_empty() && self.nonconspiratorial_balanced.is_empty()
    }

    /// True only when a table was supplied, covered every class and agreed everywhere.
    pub fn biconditional_holds(&self) -> bool {
        matches!(&self.biconditional_failures, Some(v) if v.is_empty())
            && self.missing_from_table.is_empty()
            && self.unknown_in_table.is_empty()
    }
}

/// Traceless SUSY breaking, unbalanced nonconspiratorial classes, and (given
/// a table) `SusyBreaking ⇔ anomalous`, all per Co₁ class.
pub fn anomaly_cross_check<R: CrossCheckRow>(
    records: &[R],
    anomalies: Option<&BTreeMap<String, bool>>,
) -> AnomalyReport {
    let mut report = AnomalyReport::default();
    let mut seen: BTreeMap<&str, &R> = BTreeMap::new();
    for r in records {
        seen.entry(r.co1_name()).or_insert(r);
        let name = r.co1_name().to_string();
        if r.classification() == Classification::SusyBreaking
            && r.trace() != 0
            && !report.susy_breaking_with_trace.contains(&name)
        {
            report.susy_breaking_with_trace.push(name.clone());
        }
        if r.classification() == Classification::Nonconspiratorial
            && r.balanced()
            && !report.nonconspiratorial_balanced.contains(&name)
        {
            report.nonconspiratorial_balanced.push(name);
        }
    }
    if let Some(table) = anomalies {
        let mut failures = Vec::new();
        for (name, r) in &seen {
            match table.get(*name) {
                Some(&anomalous) => {
                    if anomalous != (r.classification() == Classification::SusyBreaking) {
                        failures.push(name.to_string());
                    }
                }
                None => report.missing_from_table.push(name.to_string()),
            }
        }
        report.unknown_in_table = table
            .keys()
            .filter(|k| !seen.contains_key(k.as_str()))
            .cloned()
            .collect();
        report.biconditional_failures = Some(failures);
    }
    report
}
