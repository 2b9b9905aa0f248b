//! Closed-form function-call accounting for both decoders.
//!
//! Both algorithms decompose into function levels whose calls are mutually
//! independent; the closed forms below give the number of calls and the
//! input arity per level. The per-call semantics match the instrumented
//! counters of the decoders (repeated flats in Chen's plan are counted
//! once per call site, no deduplication).

use crate::code::CodeParams;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    CheckSum,
    MajorityVote,
    Xor,
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FunctionKind::CheckSum => "check-sum",
            FunctionKind::MajorityVote => "majority-vote",
            FunctionKind::Xor => "xor",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CallRow {
    pub function: FunctionKind,
    pub inputs: usize,
    pub calls: usize,
}

/// Per-algorithm call table, one row per function level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallTable {
    pub rows: Vec<CallRow>,
}

impl CallTable {
    pub fn total_calls(&self) -> usize {
        self.rows.iter().map(|r| r.calls).sum()
    }

    pub fn calls_of(&self, function: FunctionKind) -> usize {
        self.rows
            .iter()
            .filter(|r| r.function == function)
            .map(|r| r.calls)
            .sum()
    }

    /// CSV rendering with a `function,inputs,calls` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("function,inputs,calls\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{}\n", row.function, row.inputs, row.calls));
        }
        out
    }
}

/// Function levels of the improved decoder.
pub fn new_counts(params: &CodeParams) -> CallTable {
    let n = params.n;
    let d = params.delta as usize;
    CallTable {
        rows: vec![
            CallRow {
                function: FunctionKind::CheckSum,
                inputs: n / d,
                calls: d * (d - 2),
            },
            CallRow {
                function: FunctionKind::MajorityVote,
                inputs: d,
                calls: d - 2,
            },
            CallRow {
                function: FunctionKind::Xor,
                inputs: 2,
                calls: d * (d - 2),
            },
            CallRow {
                function: FunctionKind::MajorityVote,
                inputs: d - 2,
                calls: n,
            },
            CallRow {
                function: FunctionKind::Xor,
                inputs: 2,
                calls: n,
            },
        ],
    }
}

/// Function levels of Chen's decoder.
pub fn chen_counts(params: &CodeParams) -> CallTable {
    let n = params.n;
    let d = params.delta as usize;
    CallTable {
        rows: vec![
            CallRow {
                function: FunctionKind::CheckSum,
                inputs: 2 * n / d,
                calls: n * (d - 2) * (d - 2),
            },
            CallRow {
                function: FunctionKind::MajorityVote,
                inputs: d - 2,
                calls: n * (d - 2),
            },
            CallRow {
                function: FunctionKind::MajorityVote,
                inputs: d - 2,
                calls: n,
            },
            CallRow {
                function: FunctionKind::Xor,
                inputs: 2,
                calls: n,
            },
        ],
    }
}

/// Chen-versus-new ratios per function class.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub params: CodeParams,
    pub chen: CallTable,
    pub new: CallTable,
    /// n(delta-2)/delta
    pub checksum_ratio: f64,
    /// n(delta-1)/(n + delta - 2)
    pub majority_ratio: f64,
}

pub fn compare(params: &CodeParams) -> CompareReport {
    let chen = chen_counts(params);
    let new = new_counts(params);
    let checksum_ratio = chen.calls_of(FunctionKind::CheckSum) as f64
        / new.calls_of(FunctionKind::CheckSum) as f64;
    let majority_ratio = chen.calls_of(FunctionKind::MajorityVote) as f64
        / new.calls_of(FunctionKind::MajorityVote) as f64;
    CompareReport {
        params: *params,
        chen,
        new,
        checksum_ratio,
        majority_ratio,
    }
}

/// Aligned-text rendering of the side-by-side call-count grid for one code.
pub fn render_text(params: &CodeParams) -> String {
    let report = compare(params);
    let mut out = format!(
        "RM({},{})  [n={}, k={}, delta={}]\n",
        params.r, params.m, params.n, params.k, params.delta
    );
    out.push_str(&format!(
        "{:<14} {:>7} {:>12} {:>12}\n",
        "function", "inputs", "chen", "new"
    ));
    // merge rows by (function, inputs)
    let mut keys: Vec<(FunctionKind, usize)> = Vec::new();
    for row in report.chen.rows.iter().chain(report.new.rows.iter()) {
        if !keys.contains(&(row.function, row.inputs)) {
            keys.push((row.function, row.inputs));
        }
    }
    for (function, inputs) in keys {
        let count = |table: &CallTable| -> usize {
            table
                .rows
                .iter()
                .filter(|r| r.function == function && r.inputs == inputs)
                .map(|r| r.calls)
                .sum()
        };
        out.push_str(&format!(
            "{:<14} {:>7} {:>12} {:>12}\n",
            function.to_string(),
            inputs,
            count(&report.chen),
            count(&report.new)
        ));
    }
    out.push_str(&format!(
        "check-sum ratio chen/new: {:.2}\nmajority ratio chen/new: {:.2}\n",
        report.checksum_ratio, report.majority_ratio
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::params;

    fn calls(table: &CallTable, function: FunctionKind, inputs: usize) -> usize {
        table
            .rows
            .iter()
            .filter(|r| r.function == function && r.inputs == inputs)
            .map(|r| r.calls)
            .sum()
    }

    #[test]
    fn new_counts_rm25() {
        let t = new_counts(&params(2, 5).unwrap());
        assert_eq!(calls(&t, FunctionKind::CheckSum, 4), 48);
        assert_eq!(calls(&t, FunctionKind::MajorityVote, 8), 6);
        assert_eq!(calls(&t, FunctionKind::MajorityVote, 6), 32);
        assert_eq!(t.calls_of(FunctionKind::Xor), 80);
    }

    #[test]
    fn new_counts_rm36() {
        let t = new_counts(&params(3, 6).unwrap());
        assert_eq!(t.calls_of(FunctionKind::CheckSum), 48);
        assert_eq!(t.calls_of(FunctionKind::Xor), 112);
    }

    #[test]
    fn chen_counts_rm24() {
        let t = chen_counts(&params(2, 4).unwrap());
        assert_eq!(calls(&t, FunctionKind::CheckSum, 8), 64);
        assert_eq!(t.calls_of(FunctionKind::MajorityVote), 48);
        assert_eq!(t.calls_of(FunctionKind::Xor), 16);
    }

    #[test]
    fn chen_counts_rm25_and_rm37() {
        let t = chen_counts(&params(2, 5).unwrap());
        assert_eq!(t.calls_of(FunctionKind::CheckSum), 1_152);
        assert_eq!(t.calls_of(FunctionKind::MajorityVote), 224);
        let t = chen_counts(&params(3, 7).unwrap());
        assert_eq!(t.calls_of(FunctionKind::CheckSum), 25_088);
        assert_eq!(t.calls_of(FunctionKind::MajorityVote), 1_920);
    }

    #[test]
    fn chen_majority_total_is_n_delta_minus_one() {
        for (r, m) in [(1, 3), (2, 4), (2, 5), (3, 6), (3, 7), (2, 6)] {
            let p = params(r, m).unwrap();
            let t = chen_counts(&p);
            assert_eq!(
                t.calls_of(FunctionKind::MajorityVote),
                p.n * (p.delta as usize - 1)
            );
        }
    }

    #[test]
    fn compare_ratios() {
        let rep = compare(&params(2, 5).unwrap());
        assert_eq!(rep.checksum_ratio, 24.0);
        let rep = compare(&params(2, 4).unwrap());
        assert_eq!(rep.checksum_ratio, 8.0);
    }

    #[test]
    fn checksum_ratio_closed_form() {
        for (r, m) in [(1, 3), (2, 4), (2, 5), (3, 6), (3, 7)] {
            let p = params(r, m).unwrap();
            let rep = compare(&p);
            let expected = p.n as f64 * (p.delta as f64 - 2.0) / p.delta as f64;
            assert_eq!(rep.checksum_ratio, expected);
        }
    }

    #[test]
    fn new_total_bounded_by_delta_squared() {
        for m in 3..=10u32 {
            for r in 1..=m / 2 {
                let p = params(r, m).unwrap();
                let total = new_counts(&p).total_calls();
                // per-level coefficients sum below 5 delta^2
                assert!(total <= 5 * (p.delta as usize) * (p.delta as usize));
            }
        }
    }

    #[test]
    fn csv_header() {
        let csv = new_counts(&params(2, 4).unwrap()).to_csv();
        assert!(csv.starts_with("function,inputs,calls\n"));
        assert_eq!(csv.lines().count(), 6);
    }
}
