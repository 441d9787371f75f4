//! Batch verification: enumerate or sample tournaments, compute the path number with the
//! exact solver and/or the pipeline, compare against `texc`, and persist one JSON line per
//! instance plus a summary sidecar.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digraph::{
    decode_tournament, encode_tournament, enumerate_tournaments, pair_count, random_tournament, validate_decomposition, Digraph,
};
use crate::error::{Error, Result};
use crate::exceptional::classify;
use crate::excess::excess_profile;
use crate::pipeline::{decompose, AttemptTrace, Method, PipelineConfig};
use crate::solver::{pn_exact_with_budget, pn_oracle, DEFAULT_SOLVER_BUDGET};

/// Instances whose edge count is at most this are also checked against the oracle.
pub const DEFAULT_ORACLE_EDGES: usize = 15;
/// Records are flushed to disk after every chunk so an interrupted run can resume.
const CHUNK: usize = 512;
/// Draw limit when sampling distinct tournaments.
const SAMPLE_DRAW_FACTOR: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exact,
    Pipeline,
    Both,
}

impl Strategy {
    fn exact(self) -> bool {
        self != Strategy::Pipeline
    }

    fn pipeline(self) -> bool {
        self != Strategy::Exact
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Selection {
    All,
    Sample { k: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: usize,
    pub selection: Selection,
    pub strategy: Strategy,
    pub out: PathBuf,
    pub resume: bool,
    pub budget: u64,
    pub trace: bool,
    pub oracle_edges: usize,
    pub pipeline: PipelineConfig,
}

impl VerifyConfig {
    pub fn new(n: usize, selection: Selection, strategy: Strategy, out: impl Into<PathBuf>) -> Self {
        VerifyConfig {
            n,
            selection,
            strategy,
            out: out.into(),
            resume: false,
            budget: DEFAULT_SOLVER_BUDGET,
            trace: false,
            oracle_edges: DEFAULT_ORACLE_EDGES,
            pipeline: PipelineConfig::default(),
        }
    }

    /// Path of the summary sidecar next to the JSONL report.
    pub fn summary_path(&self) -> PathBuf {
        let mut s = self.out.clone().into_os_string();
        s.push(".summary.json");
        PathBuf::from(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub exact_us: Option<u64>,
    pub pipeline_us: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub encoding: String,
    pub n: usize,
    pub class: String,
    pub exc: usize,
    pub delta0: usize,
    pub texc: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub pn_exact: Option<usize>,
    /// `false` when the solver budget ran out and `pn_exact` is only an upper bound.
    pub exact_optimal: Option<bool>,
    pub pn_oracle: Option<usize>,
    pub pn_pipeline: Option<usize>,
    /// `pn - texc`, from the exact value when it is proven, else absent.
    pub gap: Option<i64>,
    pub timings: Timings,
    pub fallback_stage: Option<String>,
    pub violations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<AttemptTrace>>,
}

impl VerifyRecord {
    /// The record with timings cleared, for comparing runs.
    pub fn without_timings(&self) -> VerifyRecord {
        VerifyRecord { timings: Timings::default(), ..self.clone() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub n: usize,
    pub strategy: String,
    pub records: usize,
    pub violations: usize,
    /// Gap histograms keyed by class name, then by parity of `n`.
    pub gap_by_class: BTreeMap<String, BTreeMap<i64, usize>>,
    pub gap_by_parity: BTreeMap<String, BTreeMap<i64, usize>>,
    pub unproven: usize,
    pub pipeline_runs: usize,
    pub pipeline_without_fallback: usize,
    /// Pipeline runs (solver proven) whose size equals `pn_exact`.
    pub pipeline_equal_exact: usize,
    pub pipeline_compared: usize,
}

impl VerifySummary {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }

    pub fn from_records(n: usize, strategy: Strategy, records: &[VerifyRecord]) -> Self {
        let mut s = VerifySummary { n, strategy: format!("{strategy:?}").to_lowercase(), records: records.len(), ..Default::default() };
        let parity = if n.is_multiple_of(2) { "even" } else { "odd" };
        for r in records {
            s.violations += !r.violations.is_empty() as usize;
            match r.gap {
                Some(g) => {
                    *s.gap_by_class.entry(class_name(&r.class).into()).or_default().entry(g).or_default() += 1;
                    *s.gap_by_parity.entry(parity.into()).or_default().entry(g).or_default() += 1;
                }
                None => s.unproven += 1,
            }
            if let Some(p) = r.pn_pipeline {
                s.pipeline_runs += 1;
                s.pipeline_without_fallback += r.fallback_stage.is_none() as usize;
                if let (Some(e), Some(true)) = (r.pn_exact, r.exact_optimal) {
                    s.pipeline_compared += 1;
                    s.pipeline_equal_exact += (p == e) as usize;
                }
            }
        }
        s
    }
}

fn class_name(c: &str) -> &str {
    c.split('(').next().unwrap_or(c)
}

/// Computes one record. Budget exhaustion is recorded, never an error.
pub fn verify_instance(t: &Digraph, config: &VerifyConfig) -> Result<VerifyRecord> {
    let encoding = encode_tournament(t)?;
    let class = classify(t)?;
    let p = excess_profile(t);
    let mut rec = VerifyRecord {
        encoding,
        n: t.n(),
        class: class.to_string(),
        exc: p.exc_total,
        delta0: p.delta0,
        texc: p.texc,
        n_plus: p.n_plus,
        n_minus: p.n_minus,
        pn_exact: None,
        exact_optimal: None,
        pn_oracle: None,
        pn_pipeline: None,
        gap: None,
        timings: Timings::default(),
        fallback_stage: None,
        violations: Vec::new(),
        trace: None,
    };
    if config.strategy.exact() {
        let start = Instant::now();
        let res = pn_exact_with_budget(t, config.budget)?;
        rec.timings.exact_us = Some(start.elapsed().as_micros() as u64);
        if let Err(v) = validate_decomposition(t, &res.certificate) {
            rec.violations.push(format!("solver certificate is invalid: {v}"));
        }
        if res.certificate.len() != res.pn {
            rec.violations.push("solver certificate size differs from pn".into());
        }
        rec.pn_exact = Some(res.pn);
        rec.exact_optimal = Some(res.optimal);
        if res.optimal {
            rec.gap = Some(res.pn as i64 - p.texc as i64);
        }
        if t.edge_count() <= config.oracle_edges {
            let o = pn_oracle(t)?;
            rec.pn_oracle = Some(o);
            if res.optimal && o != res.pn {
                rec.violations.push(format!("solver says {} but the oracle says {o}", res.pn));
            }
        }
    }
    if config.strategy.pipeline() {
        let mut pc = config.pipeline.clone();
        pc.solver_budget = config.budget;
        let start = Instant::now();
        let rep = decompose(t, &pc)?;
        rec.timings.pipeline_us = Some(start.elapsed().as_micros() as u64);
        if let Err(v) = validate_decomposition(t, &rep.decomposition) {
            rec.violations.push(format!("pipeline output is invalid: {v}"));
        }
        if rep.identity_violations > 0 {
            rec.violations.push(format!("{} bookkeeping identities failed", rep.identity_violations));
        }
        let size = rep.decomposition.len();
        rec.pn_pipeline = Some(size);
        rec.fallback_stage = rep.fallback.as_ref().map(|f| f.stage.clone());
        if config.trace {
            rec.trace = Some(rep.attempts.clone());
        }
        if let (Some(e), Some(true)) = (rec.pn_exact, rec.exact_optimal) {
            if size < e {
                rec.violations.push(format!("pipeline size {size} is below pn = {e}"));
            }
            if rep.method == Method::Solver && rep.optimal == Some(true) && size != e {
                rec.violations.push(format!("fallback size {size} differs from pn = {e}"));
            }
        }
        if rec.gap.is_none() && (rep.method == Method::Pipeline || rep.optimal == Some(true)) {
            rec.gap = Some(size as i64 - p.texc as i64);
        }
    }
    if let Some(g) = rec.gap {
        if g < 0 {
            rec.violations.push(format!("gap {g} is negative"));
        }
        if class.is_exceptional() && g < 1 {
            rec.violations.push(format!("gap {g} for a {} tournament", class.name()));
        }
    }
    Ok(rec)
}

/// Encodings of the selected instances, sorted.
pub fn select_instances(n: usize, selection: &Selection) -> Result<Vec<String>> {
    match *selection {
        Selection::All => {
            let mut v = enumerate_tournaments(n)?.map(|t| encode_tournament(&t)).collect::<Result<Vec<_>>>()?;
            v.sort();
            Ok(v)
        }
        Selection::Sample { k, seed } => {
            let total = if pair_count(n) >= 63 { u64::MAX } else { 1u64 << pair_count(n) };
            let k = (k as u64).min(total) as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = BTreeSet::new();
            let mut draws = 0;
            while seen.len() < k && draws < k.max(1) * SAMPLE_DRAW_FACTOR {
                seen.insert(encode_tournament(&random_tournament(n, &mut rng))?);
                draws += 1;
            }
            Ok(seen.into_iter().collect())
        }
    }
}

/// Reads the records already present in `path`; a truncated last line is dropped.
pub fn read_records(path: &FsPath) -> Result<Vec<VerifyRecord>> {
    let f = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        if let Ok(r) = serde_json::from_str::<VerifyRecord>(&line) {
            out.push(r);
        }
    }
    Ok(out)
}

fn write_records(path: &FsPath, records: &[VerifyRecord]) -> Result<()> {
    let tmp = path.with_extension("jsonl.tmp");
    {
        let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
        for r in records {
            writeln!(f, "{}", serde_json::to_string(r).expect("serializable"))?;
        }
        f.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs the verification, writing the sorted JSONL report and the summary sidecar.
/// `--resume` keeps matching records already on disk and computes only the rest.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifySummary> {
    run_verify_limited(config, usize::MAX)
}

/// Like [`run_verify`] but stops after computing `limit` new records, leaving a partial
/// report behind. Used to exercise resumption.
pub fn run_verify_limited(config: &VerifyConfig, limit: usize) -> Result<VerifySummary> {
    let wanted = select_instances(config.n, &config.selection)?;
    let wanted_set: BTreeSet<&str> = wanted.iter().map(String::as_str).collect();
    let mut done: BTreeMap<String, VerifyRecord> = BTreeMap::new();
    if config.resume {
        for r in read_records(&config.out)? {
            if r.n == config.n && wanted_set.contains(r.encoding.as_str()) {
                done.insert(r.encoding.clone(), r);
            }
        }
    }
    let todo: Vec<&String> = wanted.iter().filter(|e| !done.contains_key(*e)).take(limit).collect();
    for chunk in todo.chunks(CHUNK) {
        let recs = chunk
            .par_iter()
            .map(|e| decode_tournament(config.n, e).and_then(|t| verify_instance(&t, config)))
            .collect::<Result<Vec<_>>>()?;
        for r in recs {
            done.insert(r.encoding.clone(), r);
        }
        let all: Vec<VerifyRecord> = done.values().cloned().collect();
        write_records(&config.out, &all)?;
    }
    let all: Vec<VerifyRecord> = done.into_values().collect();
    write_records(&config.out, &all)?;
    let summary = VerifySummary::from_records(config.n, config.strategy, &all);
    fs::write(config.summary_path(), serde_json::to_string_pretty(&summary).expect("serializable") + "\n")?;
    if all.len() < wanted.len() && limit == usize::MAX {
        return Err(Error::Precondition(format!("only {} of {} records were produced", all.len(), wanted.len())));
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n4_all_has_zero_gap() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = VerifyConfig::new(4, Selection::All, Strategy::Exact, dir.path().join("r.jsonl"));
        let s = run_verify(&cfg).unwrap();
        assert_eq!(s.records, 64);
        assert!(s.ok());
        assert_eq!(s.gap_by_class.values().flat_map(|h| h.keys()).copied().collect::<BTreeSet<_>>(), BTreeSet::from([0]));
        let recs = read_records(&cfg.out).unwrap();
        assert!(recs.windows(2).all(|w| w[0].encoding < w[1].encoding));
    }

    #[test]
    fn sample_is_deterministic() {
        assert_eq!(
            select_instances(9, &Selection::Sample { k: 5, seed: 3 }).unwrap(),
            select_instances(9, &Selection::Sample { k: 5, seed: 3 }).unwrap()
        );
        assert_eq!(select_instances(3, &Selection::Sample { k: 100, seed: 1 }).unwrap().len(), 8);
    }
}
