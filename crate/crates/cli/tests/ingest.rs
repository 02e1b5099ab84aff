use std::fs;

use benford_cli::ingest::{ingest, ingest_reader, InputFormat, ValueKind};
use benford_core::{gen_product_samples, LogValue, ProductSpec, SourceDistribution};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Cell {
    Positive(f64),
    Negative(f64),
    Zero,
    Garbage,
    Overflow,
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Positive(x) => format!("{x}"),
            Cell::Negative(x) => format!("-{x}"),
            Cell::Zero => "0".into(),
            Cell::Garbage => "n/a".into(),
            Cell::Overflow => "1e309".into(),
            Cell::Empty => String::new(),
        }
    }
}

fn cell() -> impl Strategy<Value = Cell> {
    prop_oneof![
        4 => (1e-300f64..1e300).prop_map(Cell::Positive),
        2 => (1e-300f64..1e300).prop_map(Cell::Negative),
        1 => Just(Cell::Zero),
        1 => Just(Cell::Garbage),
        1 => Just(Cell::Overflow),
        1 => Just(Cell::Empty),
    ]
}

proptest! {
    #[test]
    fn every_row_is_accounted_for(cells in prop::collection::vec(cell(), 1..300)) {
        let mut csv = String::from("id,value\n");
        for (i, c) in cells.iter().enumerate() {
            csv.push_str(&format!("{i},{}\n", c.text()));
        }
        let usable = cells.iter().filter(|c| matches!(c, Cell::Positive(_) | Cell::Negative(_))).count();
        prop_assume!(usable > 0);
        let data = ingest_reader(csv.as_bytes(), "mem".into(), Some("value"), InputFormat::Csv, ValueKind::Raw).unwrap();
        prop_assert_eq!(data.row_count, cells.len() as u64);
        prop_assert_eq!(
            data.row_count,
            data.values.len() as u64 + data.dropped_zero_count + data.dropped_nonfinite_count
        );
        prop_assert_eq!(data.values.len(), usable);
        let negatives = cells.iter().filter(|c| matches!(c, Cell::Negative(_))).count() as u64;
        prop_assert_eq!(data.negatives_folded_count, negatives);
        let zeros = cells.iter().filter(|c| matches!(c, Cell::Zero)).count() as u64;
        prop_assert_eq!(data.dropped_zero_count, zeros);

        let expected: Vec<f64> = cells
            .iter()
            .filter_map(|c| match c {
                Cell::Positive(x) | Cell::Negative(x) => Some(x.log10()),
                _ => None,
            })
            .collect();
        let got: Vec<f64> = data.values.iter().map(|v| v.log10()).collect();
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn census_like_fixture_round_trips_through_csv() {
    let spec = ProductSpec::new(
        SourceDistribution::uniform_interval(1.0, 10.0).unwrap(),
        6,
        10_000,
        1990,
    )
    .unwrap();
    let populations: Vec<u64> = gen_product_samples(&spec)
        .iter()
        .map(|v| v.to_f64().unwrap().round().max(1.0) as u64)
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.csv");
    let mut body = String::from("region,population\n");
    for (i, p) in populations.iter().enumerate() {
        body.push_str(&format!("r{i},{p}\n"));
    }
    fs::write(&path, body).unwrap();

    let data = ingest(&path, Some("population"), InputFormat::Csv, ValueKind::Auto).unwrap();
    assert_eq!(data.values.len(), 10_000);
    assert_eq!(data.row_count, 10_000);
    assert_eq!(
        data.dropped_zero_count + data.dropped_nonfinite_count + data.negatives_folded_count,
        0
    );
    for (v, &p) in data.values.iter().zip(&populations) {
        assert_eq!(*v, LogValue::from_positive(p as f64).unwrap());
    }
}

#[test]
fn sample_files_are_read_as_logs() {
    let csv = "log10_value\n-2000.5\n0\n3.25\n";
    let data = ingest_reader(
        csv.as_bytes(),
        "s".into(),
        None,
        InputFormat::Csv,
        ValueKind::Auto,
    )
    .unwrap();
    let logs: Vec<f64> = data.values.iter().map(|v| v.log10()).collect();
    assert_eq!(logs, [-2000.5, 0.0, 3.25]);
    assert_eq!(data.dropped_zero_count, 0);

    let raw = ingest_reader(
        csv.as_bytes(),
        "s".into(),
        None,
        InputFormat::Csv,
        ValueKind::Raw,
    )
    .unwrap();
    assert_eq!(raw.values.len(), 2);
    assert_eq!(raw.negatives_folded_count, 1);
}
