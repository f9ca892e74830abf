//! Fixture table of weighted monotonicity and synchronicity classifications
//! for catalog functions with power weights `t^r`.
//!
//! Each row states one claim over a parameter range and carries three
//! representative parameter samples from that range. [`check_row`] replays a
//! row against the grid oracles and reports every contradiction as a
//! [`Discrepancy`]; contradictions are surfaced, never silently adjusted.
//! The two `pow-log` rows keep their recorded claim even though the grid
//! oracle disagrees with both (the defect factorizes as a product of one
//! non-negative and one non-positive factor on `s > 1`, so the recorded
//! signs come out reversed), and [`check_table`] reports exactly that.

use super::{h_monotonicity, h_synchronicity, HMonotonicity, Interval, ScalarFunction, SyncKind};
use crate::Result;
use std::fmt;

/// Expected classification of one fixture case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Monotonicity(HMonotonicity),
    Synchronicity(SyncKind),
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Monotonicity(m) => write!(f, "{m}"),
            Expected::Synchronicity(s) => write!(f, "{s}"),
        }
    }
}

/// One concrete parameter sample of a row's claim.
#[derive(Debug, Clone)]
pub struct Case {
    pub label: String,
    pub f: ScalarFunction,
    /// Absent for monotonicity claims, which involve a single function.
    pub g: Option<ScalarFunction>,
    pub h: ScalarFunction,
}

/// One claim row: a parameter range sampled at three representative values.
#[derive(Debug, Clone)]
pub struct Row {
    pub id: &'static str,
    pub claim: &'static str,
    pub interval: Interval,
    pub expected: Expected,
    pub cases: Vec<Case>,
}

/// A fixture case whose oracle verdict contradicts the recorded claim.
#[derive(Debug, Clone)]
pub struct Discrepancy {
    pub row_id: &'static str,
    pub case_label: String,
    pub expected: Expected,
    pub observed: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {} case {}: expected {}, oracle says {}",
            self.row_id, self.case_label, self.expected, self.observed
        )
    }
}

fn pw(r: f64) -> ScalarFunction {
    ScalarFunction::power(r)
}

fn mono_row(
    id: &'static str,
    claim: &'static str,
    f: ScalarFunction,
    rs: [f64; 3],
    interval: Interval,
    expected: HMonotonicity,
) -> Row {
    Row {
        id,
        claim,
        interval,
        expected: Expected::Monotonicity(expected),
        cases: rs
            .iter()
            .map(|&r| Case {
                label: format!("r={r}"),
                f: f.clone(),
                g: None,
                h: pw(r),
            })
            .collect(),
    }
}

fn sync_row(
    id: &'static str,
    claim: &'static str,
    f: ScalarFunction,
    g: ScalarFunction,
    rs: [f64; 3],
    interval: Interval,
    expected: SyncKind,
) -> Row {
    Row {
        id,
        claim,
        interval,
        expected: Expected::Synchronicity(expected),
        cases: rs
            .iter()
            .map(|&r| Case {
                label: format!("r={r}"),
                f: f.clone(),
                g: Some(g.clone()),
                h: pw(r),
            })
            .collect(),
    }
}

/// The full classification fixture table.
pub fn classification_table() -> Vec<Row> {
    let one = ScalarFunction::constant(1.0);
    let id = ScalarFunction::Identity;
    let recip = ScalarFunction::Reciprocal;
    let exp = ScalarFunction::Exp;
    let log = ScalarFunction::Log;
    let i12 = Interval::new(1.0, 2.0).unwrap();
    // stays strictly inside s > 1 so log(1) = 0 does not interact with
    // reciprocal weights
    let i153 = Interval::new(1.5, 3.0).unwrap();

    let mut rows = vec![
        // -- single-function monotonicity against power weights --
        mono_row(
            "mono-const-dec",
            "constants fall against t^r weights with r > 0",
            one.clone(),
            [0.5, 1.0, 3.0],
            i12,
            HMonotonicity::HDecreasing,
        ),
        mono_row(
            "mono-const-inc",
            "constants rise against t^r weights with r < 0",
            one.clone(),
            [-0.5, -1.0, -2.0],
            i12,
            HMonotonicity::HIncreasing,
        ),
        mono_row(
            "mono-id-dec",
            "the identity falls against t^r weights with r > 1",
            id.clone(),
            [1.5, 2.0, 3.0],
            i12,
            HMonotonicity::HDecreasing,
        ),
        mono_row(
            "mono-id-inc",
            "the identity rises against t^r weights with r < 1",
            id.clone(),
            [-1.0, 0.5, 0.9],
            i12,
            HMonotonicity::HIncreasing,
        ),
        mono_row(
            "mono-recip-dec",
            "the reciprocal falls against t^r weights with r > -1",
            recip.clone(),
            [-0.5, 0.5, 2.0],
            i12,
            HMonotonicity::HDecreasing,
        ),
        mono_row(
            "mono-recip-inc",
            "the reciprocal rises against t^r weights with r < -1",
            recip.clone(),
            [-1.5, -2.0, -4.0],
            i12,
            HMonotonicity::HIncreasing,
        ),
        // -- pair synchronicity against power weights --
        sync_row(
            "sync-const-const",
            "a constant pair is synchronous for every r",
            one.clone(),
            one.clone(),
            [-1.0, 0.5, 3.0],
            i12,
            SyncKind::Synchronous,
        ),
        sync_row(
            "sync-const-id-neg",
            "(1, t) is synchronous for r < 0",
            one.clone(),
            id.clone(),
            [-2.0, -0.7, -0.1],
            i12,
            SyncKind::Synchronous,
        ),
        sync_row(
            "sync-const-id-super",
            "(1, t) is synchronous for r > 1",
            one.clone(),
            id.clone(),
            [1.25, 2.0, 4.0],
            i12,
            SyncKind::Synchronous,
        ),
        sync_row(
            "async-const-id",
            "(1, t) is asynchronous for 0 < r < 1",
            one.clone(),
            id.clone(),
            [0.25, 0.5, 0.75],
            i12,
            SyncKind::Asynchronous,
        ),
        sync_row(
            "sync-const-recip-neg",
            "(1, 1/t) is synchronous for r < -1",
            one.clone(),
            recip.clone(),
            [-1.5, -2.0, -3.0],
            i12,
            SyncKind::Synchronous,
        ),
        sync_row(
            "sync-const-recip-pos",
            "(1, 1/t) is synchronous for r > 0",
            one.clone(),
            recip.clone(),
            [0.5, 1.0, 2.0],
            i12,
            SyncKind::Synchronous,
        ),
        sync_row(
            "async-const-recip",
            "(1, 1/t) is asynchronous for -1 < r < 0",
            one.clone(),
            recip.clone(),
            [-0.75, -0.5, -0.25],
            i12,
            SyncKind::Asynchronous,
        ),
        sync_row(
            "sync-id-recip-neg",
            "(t, 1/t) is synchronous for r < -1",
            id.clone(),
            recip.clone(),
            [-1.5, -2.0, -4.0],
            i12,
            SyncKind::Synchronous,
        ),
        sync_row(
            "sync-id-recip-pos",
            "(t, 1/t) is synchronous for r > 1",
            id.clone(),
            recip.clone(),
            [1.5, 2.0, 3.0],
            i12,
            SyncKind::Synchronous,
        ),
        sync_row(
            "async-id-recip",
            "(t, 1/t) is asynchronous for -1 < r < 1",
            id.clone(),
            recip.clone(),
            [-0.5, 0.0, 0.5],
            i12,
            SyncKind::Asynchronous,
        ),
        sync_row(
            "sync-exp-exp",
            "(exp, exp) is synchronous for every r",
            exp.clone(),
            exp.clone(),
            [-1.0, 0.5, 3.0],
            i12,
            SyncKind::Synchronous,
        ),
    ];

    // power pairs: three (p, q, r) samples per range
    let pp = |id, claim, triples: [(f64, f64, f64); 3], expected| Row {
        id,
        claim,
        interval: i12,
        expected: Expected::Synchronicity(expected),
        cases: triples
            .iter()
            .map(|&(p, q, r)| Case {
                label: format!("p={p} q={q} r={r}"),
                f: pw(p),
                g: Some(pw(q)),
                h: pw(r),
            })
            .collect(),
    };
    rows.push(pp(
        "sync-pow-pow",
        "(t^p, t^q) is synchronous for p, q > r > 0",
        [(2.0, 1.5, 1.0), (3.0, 2.0, 0.5), (1.2, 5.0, 1.1)],
        SyncKind::Synchronous,
    ));
    rows.push(pp(
        "async-pow-pow",
        "(t^p, t^q) is asynchronous for p > r > q > 0",
        [(3.0, 1.0, 2.0), (2.0, 0.5, 1.0), (5.0, 1.5, 3.0)],
        SyncKind::Asynchronous,
    ));

    // power against log on s > 1: the recorded ranges are kept verbatim;
    // the grid oracle contradicts both rows (signs reversed)
    let plog = |id, claim, pairs: [(f64, f64); 3], expected| Row {
        id,
        claim,
        interval: i153,
        expected: Expected::Synchronicity(expected),
        cases: pairs
            .iter()
            .map(|&(p, r)| Case {
                label: format!("p={p} r={r}"),
                f: pw(p),
                g: Some(log.clone()),
                h: pw(r),
            })
            .collect(),
    };
    rows.push(plog(
        "sync-pow-log",
        "(t^p, log) claimed synchronous for p < r < 0",
        [(-2.0, -1.0), (-1.0, -0.5), (-3.0, -0.2)],
        SyncKind::Synchronous,
    ));
    rows.push(plog(
        "async-pow-log",
        "(t^p, log) claimed asynchronous for r < p < 0",
        [(-1.0, -2.0), (-0.5, -1.0), (-0.2, -3.0)],
        SyncKind::Asynchronous,
    ));

    rows
}

/// Replay one row against the grid oracles, returning a discrepancy per
/// contradicted case.
pub fn check_row(row: &Row, grid_n: usize) -> Result<Vec<Discrepancy>> {
    let mut out = Vec::new();
    for case in &row.cases {
        let observed: String = match (&row.expected, &case.g) {
            (Expected::Monotonicity(_), _) => {
                h_monotonicity(&case.f, &case.h, row.interval, grid_n)?.to_string()
            }
            (Expected::Synchronicity(_), Some(g)) => {
                h_synchronicity(&case.f, g, &case.h, row.interval, grid_n)?
                    .verdict
                    .to_string()
            }
            (Expected::Synchronicity(_), None) => {
                unreachable!("synchronicity rows carry a second function")
            }
        };
        if observed != row.expected.to_string() {
            out.push(Discrepancy {
                row_id: row.id,
                case_label: case.label.clone(),
                expected: row.expected,
                observed,
            });
        }
    }
    Ok(out)
}

/// Replay the whole table; returns every discrepancy found.
pub fn check_table(grid_n: usize) -> Result<Vec<Discrepancy>> {
    let mut out = Vec::new();
    for row in classification_table() {
        out.extend(check_row(&row, grid_n)?);
    }
    Ok(out)
}
