//! Plain-text instance and solution files.
//!
//! ```text
//! dbp 1          dbp-sol 1
//! T C            bin task start
//! id w h         ...
//! ```
//!
//! `#` starts a comment; blank lines are ignored.

use dbp_core::{Bin, Instance, Solution, Task, TaskId};
use std::collections::HashMap;
use std::fmt::Write;

pub const INSTANCE_HEADER: &str = "dbp 1";
pub const SOLUTION_HEADER: &str = "dbp-sol 1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; 0 when the file ends early.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments removed, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn numbers<const N: usize>(line_no: usize, line: &str, what: &str) -> Result<[u64; N], ParseError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != N {
        return Err(err(line_no, format!("expected {what}, found {} fields", fields.len())));
    }
    let mut out = [0u64; N];
    for (slot, field) in out.iter_mut().zip(fields) {
        *slot = field
            .parse()
            .map_err(|_| err(line_no, format!("{field:?} is not a non-negative integer")))?;
    }
    Ok(out)
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    header: &str,
) -> Result<(), ParseError> {
    match lines.next() {
        Some((_, line)) if line.split_whitespace().eq(header.split_whitespace()) => Ok(()),
        Some((n, line)) => Err(err(n, format!("expected header {header:?}, found {line:?}"))),
        None => Err(err(0, format!("empty file, expected header {header:?}"))),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, INSTANCE_HEADER)?;
    let (dims_line, dims) = lines.next().ok_or_else(|| err(0, "missing \"T C\" line"))?;
    let [horizon, capacity] = numbers::<2>(dims_line, dims, "\"T C\"")?;
    if horizon == 0 || capacity == 0 {
        return Err(err(dims_line, "horizon and capacity must be positive"));
    }
    let mut tasks = Vec::new();
    let mut seen = HashMap::new();
    for (n, line) in lines {
        let [id, width, height] = numbers::<3>(n, line, "\"id w h\"")?;
        if id == 0 || width == 0 || height == 0 {
            return Err(err(n, "id, width and height must be positive"));
        }
        if width > horizon || height > capacity {
            return Err(err(n, format!("task {id} ({width}x{height}) exceeds the {horizon}x{capacity} bin")));
        }
        if let Some(first) = seen.insert(id, n) {
            return Err(err(n, format!("task id {id} already used on line {first}")));
        }
        tasks.push(Task::new(id, width, height));
    }
    Instance::new(horizon, capacity, tasks).map_err(|e| err(dims_line, e.to_string()))
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = format!("{INSTANCE_HEADER}\n{} {}\n", instance.horizon(), instance.capacity());
    for t in instance.tasks() {
        writeln!(out, "{} {} {}", t.id, t.width, t.height).expect("writing to a String");
    }
    out
}

/// Reads placements against `instance`. Task ids must exist in the instance
/// and bin indices must be contiguous from 0; everything else (duplicates,
/// missing tasks, overloads) is left to verification.
pub fn parse_solution(text: &str, instance: &Instance) -> Result<Solution, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, SOLUTION_HEADER)?;
    let mut bins: Vec<Bin> = Vec::new();
    let mut first_line: Vec<usize> = Vec::new();
    for (n, line) in lines {
        let [bin, id, start] = numbers::<3>(n, line, "\"bin task start\"")?;
        let task = *instance
            .task(TaskId(id))
            .ok_or_else(|| err(n, format!("task {id} is not in the instance")))?;
        if start == 0 {
            return Err(err(n, "start slots are 1-based"));
        }
        let bin = usize::try_from(bin).map_err(|_| err(n, "bin index too large"))?;
        if bin > instance.len() {
            return Err(err(n, format!("bin index {bin} exceeds the task count")));
        }
        if bin >= bins.len() {
            bins.resize_with(bin + 1, Bin::new);
            first_line.resize(bin + 1, 0);
        }
        if first_line[bin] == 0 {
            first_line[bin] = n;
        }
        bins[bin].push(task, start);
    }
    if let Some(gap) = bins.iter().position(Bin::is_empty) {
        let later = first_line.iter().skip(gap).find(|&&l| l > 0).copied().unwrap_or(0);
        return Err(err(later, format!("bin indices must be contiguous; bin {gap} is missing")));
    }
    Ok(Solution::new(bins))
}

pub fn write_solution(solution: &Solution) -> String {
    let mut out = format!("{SOLUTION_HEADER}\n");
    for (index, bin) in solution.bins.iter().enumerate() {
        for p in &bin.placements {
            writeln!(out, "{index} {} {}", p.task.id, p.start).expect("writing to a String");
        }
    }
    out
}
