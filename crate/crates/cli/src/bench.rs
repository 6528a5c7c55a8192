//! Benchmark harness: every (instance, algorithm) cell, one CSV row each.

use crate::format::parse_instance;
use crate::CliError;
use dbp_core::generators::{gen_random, Family};
use dbp_core::oracle::{exact_demand_bp, SearchBudget};
use dbp_core::solve::{solve, Algorithm};
use dbp_core::{area_lower_bound, verify_solution, Instance};
use rayon::prelude::*;
use std::ops::RangeInclusive;
use std::path::Path;
use std::time::Instant;

pub const CSV_HEADER: [&str; 7] = ["instance", "algo", "bins", "area_lb", "oracle_opt", "ratio", "wall_ms"];

#[derive(Debug, Clone)]
pub struct RandomCorpus {
    pub seeds: RangeInclusive<u64>,
    pub families: Vec<Family>,
    pub n: usize,
    pub horizon: u64,
    pub capacity: u64,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algos: Vec<Algorithm>,
    pub oracle_budget: SearchBudget,
    pub omit_timing: bool,
}

/// One CSV row. Empty optional fields mean the solver rejected the instance
/// or the oracle gave up.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub instance: String,
    pub algo: Algorithm,
    pub bins: Option<usize>,
    pub area_lb: u64,
    pub oracle_opt: Option<usize>,
    pub wall_ms: Option<f64>,
}

impl Row {
    /// `bins / oracle_opt`, when both are known.
    pub fn ratio(&self) -> Option<f64> {
        match (self.bins, self.oracle_opt) {
            (Some(b), Some(o)) if o > 0 => Some(b as f64 / o as f64),
            (Some(0), Some(0)) => Some(1.0),
            _ => None,
        }
    }

    fn record(&self) -> [String; 7] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            self.instance.clone(),
            self.algo.to_string(),
            opt(self.bins.map(|b| b.to_string())),
            self.area_lb.to_string(),
            opt(self.oracle_opt.map(|b| b.to_string())),
            opt(self.ratio().map(|r| format!("{r:.3}"))),
            opt(self.wall_ms.map(|ms| format!("{ms:.3}"))),
        ]
    }
}

/// Parses `A`, `A..B` (exclusive) or `A..=B`.
pub fn parse_seed_range(text: &str) -> Result<RangeInclusive<u64>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| format!("{s:?} is not a seed"))
    };
    let range = if let Some((a, b)) = text.split_once("..=") {
        num(a)?..=num(b)?
    } else if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if b == 0 || b <= a {
            return Err(format!("seed range {text:?} is empty"));
        }
        a..=b - 1
    } else {
        let a = num(text)?;
        a..=a
    };
    if range.is_empty() {
        return Err(format!("seed range {text:?} is empty"));
    }
    Ok(range)
}

/// `*.dbp` files of `dir` in name order, named by file stem.
pub fn load_dir(dir: &Path) -> Result<Vec<(String, Instance)>, CliError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "dbp"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let inst = parse_instance(&text).map_err(|e| CliError::parse(&path, e))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, inst))
        })
        .collect()
}

pub fn random_corpus(corpus: &RandomCorpus) -> Result<Vec<(String, Instance)>, CliError> {
    let mut out = Vec::new();
    for &family in &corpus.families {
        for seed in corpus.seeds.clone() {
            let inst = gen_random(family, corpus.n, corpus.horizon, corpus.capacity, seed)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            out.push((format!("random-{family}-s{seed}"), inst));
        }
    }
    Ok(out)
}

/// Runs the oracle once per instance and every algorithm on it, in
/// parallel. Rows come back sorted by instance name, then algorithm.
pub fn run(corpus: &[(String, Instance)], config: &BenchConfig) -> Vec<Row> {
    let optima: Vec<Option<usize>> = corpus
        .par_iter()
        .map(|(_, inst)| {
            exact_demand_bp(inst, config.oracle_budget)
                .into_proven()
                .map(|o| o.bins)
        })
        .collect();
    let cells: Vec<(usize, Algorithm)> = (0..corpus.len())
        .flat_map(|i| config.algos.iter().map(move |&a| (i, a)))
        .collect();
    let mut rows: Vec<Row> = cells
        .par_iter()
        .map(|&(i, algo)| {
            let (name, inst) = &corpus[i];
            let started = Instant::now();
            let bins = solve(inst, algo)
                .ok()
                .filter(|s| verify_solution(inst, &s.solution).is_valid())
                .map(|s| s.solution.num_bins());
            let elapsed = started.elapsed().as_secs_f64() * 1000.0;
            Row {
                instance: name.clone(),
                algo,
                bins,
                area_lb: area_lower_bound(inst),
                oracle_opt: optima[i],
                wall_ms: (!config.omit_timing && bins.is_some()).then_some(elapsed),
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        (a.instance.as_str(), a.algo.to_string()).cmp(&(b.instance.as_str(), b.algo.to_string()))
    });
    rows
}

pub fn write_csv(rows: &[Row], sink: impl std::io::Write) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush()?;
    Ok(())
}
