//! Batch runs over a corpus directory with cross-checking of answers and certificates.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use lcp_core::{check_witness, Answer, InstancePair, Label, LabeledGraph, Limits, SolveError, SolverRegistry};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::BenchArgs;
use crate::commands::load_instance;
use crate::formats::InstanceFile;
use crate::{CliError, EXIT_FAILURE, EXIT_YES};

/// One CSV row. `answer` is YES, NO, timeout, budget or error; stats are empty unless the run
/// finished, and `verified` is empty unless the answer is YES.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub algo: String,
    pub answer: String,
    pub ms: u64,
    pub stat1: Option<u64>,
    pub stat2: Option<u64>,
    pub verified: Option<bool>,
}

#[derive(Debug)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub disagreements: Vec<String>,
    pub unverified: Vec<String>,
    pub repros: Vec<PathBuf>,
}

fn corpus(dir: &Path) -> Result<Vec<(String, InstanceFile)>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "lcp"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Input(format!("no .lcp files in {}", dir.display())));
    }
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            Ok((name, load_instance(&p)?))
        })
        .collect()
}

fn run_one(registry: &SolverRegistry, algo: &str, inst: &InstancePair, timeout: Duration) -> (BenchRecord, Option<Answer>) {
    let started = Instant::now();
    let solver = registry.get(algo).expect("algorithm names are checked before running");
    let outcome = solver.solve(inst, &Limits::with_timeout(timeout));
    let ms = started.elapsed().as_millis() as u64;
    let mut rec = BenchRecord {
        instance: String::new(),
        algo: algo.to_string(),
        answer: String::new(),
        ms,
        stat1: None,
        stat2: None,
        verified: None,
    };
    match outcome {
        Ok(r) => {
            rec.answer = r.answer.to_string();
            let (s1, s2) = r.stats.headline();
            rec.stat1 = Some(s1);
            rec.stat2 = Some(s2);
            if r.answer == Answer::Yes {
                let ok = r.certificate.as_ref().is_some_and(|w| check_witness(inst, w).is_ok_and(|rep| rep.is_valid()));
                rec.verified = Some(ok);
            }
            (rec, Some(r.answer))
        }
        Err(SolveError::Timeout) => {
            rec.answer = "timeout".into();
            (rec, None)
        }
        Err(SolveError::BudgetExceeded(_)) => {
            rec.answer = "budget".into();
            (rec, None)
        }
        Err(e) => {
            eprintln!("{algo}: {e}");
            rec.answer = "error".into();
            (rec, None)
        }
    }
}

/// Answers of `a` and `b` on `inst`, when both finish.
fn answers(registry: &SolverRegistry, a: &str, b: &str, inst: &InstancePair, timeout: Duration) -> Option<(Answer, Answer)> {
    let x = run_one(registry, a, inst, timeout).1?;
    let y = run_one(registry, b, inst, timeout).1?;
    Some((x, y))
}

/// Greedily deletes G edges, deletes G vertices outside H, and contracts G edges into a vertex
/// outside H, keeping each change while `a` and `b` still disagree.
pub fn minimize_disagreement(
    registry: &SolverRegistry,
    a: &str,
    b: &str,
    inst: &InstancePair,
    timeout: Duration,
) -> InstancePair {
    let disagree = |i: &InstancePair| answers(registry, a, b, i, timeout).is_some_and(|(x, y)| x != y);
    let mut cur = inst.clone();
    loop {
        let mut shrunk = false;
        for (u, v) in cur.g().edges() {
            let mut g = cur.g().clone();
            g.remove_edge(u, v);
            let cand = InstancePair::new(g, cur.h().clone()).expect("vertex sets unchanged");
            if disagree(&cand) {
                cur = cand;
                shrunk = true;
            }
        }
        let extra: Vec<Label> = cur.g().vertices().filter(|&v| !cur.h().has_vertex(v)).collect();
        for v in extra {
            let mut g: LabeledGraph = cur.g().clone();
            g.remove_vertex(v);
            let cand = InstancePair::new(g, cur.h().clone()).expect("H vertices kept");
            if disagree(&cand) {
                cur = cand;
                shrunk = true;
            }
        }
        for (u, v) in cur.g().edges() {
            for (keep, gone) in [(u, v), (v, u)] {
                if cur.h().has_vertex(gone) || !cur.g().has_edge(keep, gone) {
                    continue;
                }
                let g = cur.g().contract_edge(keep, gone).expect("edge of the current graph");
                let cand = InstancePair::new(g, cur.h().clone()).expect("H vertices kept");
                if disagree(&cand) {
                    cur = cand;
                    shrunk = true;
                    break;
                }
            }
        }
        if !shrunk {
            return cur;
        }
    }
}

/// Runs every algorithm on every instance. Repro files for disagreements go to `repro_dir`.
pub fn run_bench(
    registry: &SolverRegistry,
    instances: &[(String, InstanceFile)],
    algos: &[String],
    timeout: Duration,
    repro_dir: &Path,
) -> Result<BenchOutcome, CliError> {
    let jobs: Vec<(usize, &str)> =
        (0..instances.len()).flat_map(|i| algos.iter().map(move |a| (i, a.as_str()))).collect();
    let results: Vec<(usize, BenchRecord, Option<Answer>)> = jobs
        .par_iter()
        .map(|&(i, algo)| {
            let (mut rec, ans) = run_one(registry, algo, &instances[i].1.inst, timeout);
            rec.instance = instances[i].0.clone();
            (i, rec, ans)
        })
        .collect();

    let mut by_instance: BTreeMap<usize, Vec<(&str, Answer)>> = BTreeMap::new();
    let mut unverified = Vec::new();
    for (i, rec, ans) in &results {
        if let Some(x) = ans {
            by_instance.entry(*i).or_default().push((rec.algo.as_str(), *x));
        }
        if rec.verified == Some(false) {
            unverified.push(format!("{}: {} certificate does not verify", rec.instance, rec.algo));
        }
    }
    let mut disagreements = Vec::new();
    let mut repros = Vec::new();
    for (i, found) in by_instance {
        let Some(&(b, y)) = found.iter().find(|(_, x)| *x != found[0].1) else { continue };
        let (a, x) = found[0];
        let name = &instances[i].0;
        disagreements.push(format!("{name}: {a} says {x}, {b} says {y}"));
        let small = minimize_disagreement(registry, a, b, &instances[i].1.inst, timeout);
        let path = repro_dir.join(format!("{name}.repro.lcp"));
        let text = format!(
            "c {a} and {b} disagree on this instance (reduced from {name})\n{}",
            InstanceFile::from_instance(small).to_text()
        );
        fs::write(&path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        repros.push(path);
    }
    let mut records: Vec<BenchRecord> = results.into_iter().map(|(_, r, _)| r).collect();
    records.sort();
    Ok(BenchOutcome { records, disagreements, unverified, repros })
}

pub fn cmd_bench(a: &BenchArgs) -> Result<i32, CliError> {
    let registry = SolverRegistry::with_defaults();
    if a.algos.is_empty() {
        return Err(CliError::Input("--algos is empty".into()));
    }
    for algo in &a.algos {
        if registry.get(algo).is_none() {
            return Err(CliError::Input(format!(
                "unknown algorithm `{algo}`; expected one of {}",
                registry.names().join(", ")
            )));
        }
    }
    if !(a.timeout.is_finite() && a.timeout > 0.0) {
        return Err(CliError::Input(format!("bad timeout {}", a.timeout)));
    }
    let instances = corpus(&a.dir)?;
    let repro_dir = a.out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let outcome = run_bench(&registry, &instances, &a.algos, Duration::from_secs_f64(a.timeout), repro_dir)?;

    let mut w = csv::Writer::from_path(&a.out).map_err(|e| CliError::Input(format!("{}: {e}", a.out.display())))?;
    for r in &outcome.records {
        w.serialize(r).map_err(|e| CliError::Input(format!("{}: {e}", a.out.display())))?;
    }
    w.flush().map_err(|e| CliError::Input(format!("{}: {e}", a.out.display())))?;

    eprintln!("{} runs over {} instances", outcome.records.len(), instances.len());
    for d in &outcome.disagreements {
        eprintln!("DISAGREEMENT {d}");
    }
    for p in &outcome.repros {
        eprintln!("repro written to {}", p.display());
    }
    for u in &outcome.unverified {
        eprintln!("UNVERIFIED {u}");
    }
    if outcome.disagreements.is_empty() && outcome.unverified.is_empty() {
        Ok(EXIT_YES)
    } else {
        Ok(EXIT_FAILURE)
    }
}
