//! Deterministic artifact writing: CSV and report files with a fixed column
//! order, Unix line endings, and 17-significant-digit numbers, so identical
//! scenarios produce byte-identical output.  Also a small indexed
//! parallel-map used by `--jobs`: work items are distributed by stride and
//! reassembled by index, which keeps the output independent of scheduling.

use std::fs;
use std::path::Path;

use crate::config::CliError;

/// Render with 17 significant digits (1 leading + 16 fractional), enough to
/// round-trip any f64 exactly.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Short form for report prose, where round-tripping does not matter.
pub fn short(x: f64) -> String {
    format!("{x:.2e}")
}

pub fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Write a CSV file: a header line plus one line per row, fields joined
/// with commas, rows terminated with `\n`.
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut text = String::with_capacity(rows.len() * 64 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write_text(path, &text)
}

/// One line of a certification report: a named measured value, its
/// tolerance, and the verdict.
pub struct CheckLine {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

impl CheckLine {
    /// A bounded check: `value ≤ tol`.
    pub fn upper(name: &str, value: f64, tol: f64) -> CheckLine {
        CheckLine {
            name: name.into(),
            detail: format!("{} (tolerance {})", short(value), short(tol)),
            pass: value <= tol,
        }
    }

    /// A lower-bounded check: `value ≥ floor` (used for fidelities).
    pub fn lower(name: &str, value: f64, floor: f64) -> CheckLine {
        CheckLine {
            name: name.into(),
            detail: format!("{value:.12} (floor {floor:.12})"),
            pass: value >= floor,
        }
    }

    /// An interval check: `lo ≤ value ≤ hi`.
    pub fn interval(name: &str, value: f64, lo: f64, hi: f64) -> CheckLine {
        CheckLine {
            name: name.into(),
            detail: format!("{value:.3} (expected in [{lo}, {hi}])"),
            pass: (lo..=hi).contains(&value),
        }
    }

    /// An unconditional pass with a note (used where a stronger check is
    /// structurally unavailable, e.g. a difference already at roundoff).
    pub fn noted_pass(name: &str, note: &str) -> CheckLine {
        CheckLine {
            name: name.into(),
            detail: note.into(),
            pass: true,
        }
    }

    pub fn render(&self) -> String {
        let state = if self.pass { "PASS" } else { "FAIL" };
        format!("  {}: {}: {state}", self.name, self.detail)
    }
}

/// Assemble a report: a preamble, the check lines, and a final verdict.
/// Returns (text, all_pass).
pub fn render_report(preamble: &[String], checks: &[CheckLine]) -> (String, bool) {
    let mut text = String::new();
    for line in preamble {
        text.push_str(line);
        text.push('\n');
    }
    text.push_str("checks:\n");
    let mut pass = true;
    for check in checks {
        pass &= check.pass;
        text.push_str(&check.render());
        text.push('\n');
    }
    text.push_str(&format!(
        "verdict: {}\n",
        if pass { "PASS" } else { "FAIL" }
    ));
    (text, pass)
}

/// Apply `f` to every index in `0..n` and collect the results in index
/// order, using up to `jobs` worker threads.  Each worker takes the indices
/// congruent to its id modulo the worker count, so there is no shared
/// mutable state and the reassembled output is identical for any `jobs`.
pub fn parallel_indexed<R, F>(jobs: usize, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync,
{
    let workers = jobs.max(1).min(n.max(1));
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let mut slots: Vec<Option<R>> = (0..n).map(|_| None).collect();
    let parts: Vec<Vec<(usize, R)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    (w..n)
                        .step_by(workers)
                        .map(|i| (i, f(i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for part in parts {
        for (i, r) in part {
            slots[i] = Some(r);
        }
    }
    slots.into_iter().map(|s| s.unwrap()).collect()
}

/// First error in index order, or all values in index order.
pub fn collect_indexed<T>(results: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r?);
    }
    Ok(out)
}
