use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use conway_ramond::dataset::{
    self, DatasetError, ReportFormat, ReportStyle, BUNDLED_FRAMES, CO1_CLASS_COUNT,
};
use conway_ramond::qseries::Exp;

const TABLE_SHA256: &str = "cc202dbb6c56ec594483674f1a80c5dd4219d4c575a0d5f6f3413c1e807d9be9";
const GOLDEN_T5: &str = include_str!("golden/report_T5.csv");

fn t5() -> Exp {
    Exp::from_integer(5)
}

#[test]
fn bundled_table_checksum() {
    let digest = Sha256::digest(BUNDLED_FRAMES.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(
        hex, TABLE_SHA256,
        "data/co0_frames.csv changed; update data/README.md too"
    );
}

#[test]
fn bundled_table_shape() {
    let rows = dataset::bundled_frames();
    assert_eq!(rows.len(), 167);
    assert_eq!(dataset::co1_names(&rows).len(), CO1_CLASS_COUNT);
    let shapes: BTreeSet<String> = rows.iter().map(|r| r.shape.to_string()).collect();
    assert_eq!(shapes.len(), 160);
}

#[test]
fn co0_names_start_with_element_order() {
    for r in dataset::bundled_frames() {
        let digits: String = r
            .co0_name
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .collect();
        assert_eq!(
            digits.parse::<u64>().unwrap(),
            r.shape.order(),
            "{}",
            r.co0_name
        );
    }
}

/// Every Co₁ class is `{g, -g}`: its Co₀ rows use one shape and its negation.
#[test]
fn co1_classes_are_closed_under_negation() {
    let mut by_co1: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for r in dataset::bundled_frames() {
        by_co1
            .entry(r.co1_name.clone())
            .or_default()
            .insert(r.shape.to_string());
    }
    for (name, shapes) in by_co1 {
        let first = conway_ramond::FrameShape::parse(shapes.iter().next().unwrap()).unwrap();
        let expect: BTreeSet<String> = [first.to_string(), first.negated().to_string()].into();
        assert_eq!(shapes, expect, "{name}");
    }
}

#[test]
fn full_run_matches_golden_report() {
    let recs = dataset::run_all(&dataset::bundled_frames(), t5()).unwrap();
    let text = dataset::emit_report(&recs, ReportFormat::Csv, ReportStyle::default());
    assert_eq!(text, GOLDEN_T5);
}

#[test]
fn golden_report_round_trips() {
    let parsed = dataset::parse_report_csv(GOLDEN_T5).unwrap();
    assert_eq!(parsed.len(), 167);
    let again = dataset::emit_report(&parsed, ReportFormat::Csv, ReportStyle::default());
    assert_eq!(again, GOLDEN_T5);
}

#[test]
fn runs_are_deterministic() {
    let rows = dataset::bundled_frames();
    let a = dataset::run_all(&rows, t5()).unwrap();
    let b = dataset::run_all(&rows, t5()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn lower_truncation_is_a_prefix() {
    let rows = dataset::bundled_frames();
    let lo = dataset::run_all(&rows, Exp::from_integer(2)).unwrap();
    let hi = dataset::run_all(&rows, t5()).unwrap();
    for (a, b) in lo.iter().zip(&hi) {
        let cut: Vec<_> = b
            .z_ns_prefix
            .iter()
            .filter(|(e, _)| *e < Exp::from_integer(2))
            .cloned()
            .collect();
        assert_eq!(a.z_ns_prefix, cut, "{}", a.co0_name);
        assert_eq!(a.classification, b.classification, "{}", a.co0_name);
    }
}

#[test]
fn errors_name_the_row() {
    let text = "co0_class,co1_class,frame_shape\n1A,1A,1^24\n2A,1A,1^-24 2^23\n";
    match dataset::read_frames(text.as_bytes()) {
        Err(DatasetError::Frame { row, .. }) => assert_eq!(row, 3),
        other => panic!("{other:?}"),
    }
    let dup = "co0_class,co1_class,frame_shape\n1A,1A,1^24\n1A,1A,1^24\n";
    assert!(matches!(
        dataset::read_frames(dup.as_bytes()),
        Err(DatasetError::DuplicateClass { row: 3, .. })
    ));
    let header = "class,shape\n1A,1^24\n";
    assert!(matches!(
        dataset::read_frames(header.as_bytes()),
        Err(DatasetError::Parse { row: 1, .. })
    ));
}

#[test]
fn inconsistent_lifts_are_reported() {
    // Two unrelated shapes claiming one Co1 class.
    let text = "co0_class,co1_class,frame_shape\n1A,1A,1^24\n2C,1A,1^8 2^8\n";
    let rows = dataset::read_frames(text.as_bytes()).unwrap();
    let recs = dataset::run_all(&rows, Exp::from_integer(2)).unwrap();
    assert!(matches!(
        dataset::summarize(&recs),
        Err(DatasetError::Inconsistent { .. })
    ));
}

#[test]
fn anomaly_table_attaches_and_renders() {
    let rows = dataset::read_frames(
        "co0_class,co1_class,frame_shape\n1A,1A,1^24\n2D,2C,2^12\n".as_bytes(),
    )
    .unwrap();
    let mut recs = dataset::run_all(&rows, Exp::from_integer(2)).unwrap();
    let table = dataset::read_anomalies("co1_class,anomalous\n1A,no\n2C,yes\n".as_bytes()).unwrap();
    dataset::attach_anomalies(&mut recs, &table);
    let csv = dataset::emit_report(&recs, ReportFormat::Csv, ReportStyle::default());
    assert!(csv.lines().next().unwrap().ends_with(",anomalous"));
    assert_eq!(dataset::parse_report_csv(&csv).unwrap(), recs);
    let report = conway_ramond::classify::anomaly_cross_check(&recs, Some(&table));
    assert!(report.biconditional_holds(), "{report:?}");
}
