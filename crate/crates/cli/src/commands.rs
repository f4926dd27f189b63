//! `solve`, `check`, `generate` and `decompose`.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Duration;

use lcp_core::decomposition::{heuristic_decompose, parse_td, write_td, NiceKind, TreeDecomposition};
use lcp_core::reductions::{
    certificate_from_assignment, crossmatch_bruteforce, crossmatch_witness, gen_from_1in3sat, gen_from_crossmatching,
    gen_from_nae34sat, gen_from_pvc, gen_random, pvc_bruteforce, pvc_witness, sat_bruteforce, CertificateKind,
    CnfFormula, CrossMatchingInstance, PvcInstance, RandomMode, Semantics,
};
use lcp_core::solver::oracle::OracleConfig;
use lcp_core::solver::{BruteForceSolver, StatDetail, TwdpSolver};
use lcp_core::{
    apply_sequence, check_witness, union_graph, witness_to_sequence, Answer, InstancePair, Limits, SolveError,
    SolveResult, SolverRegistry,
};
use serde::Serialize;

use crate::args::{CheckArgs, DecomposeArgs, Family, GenerateArgs, ModeArg, SolveArgs};
use crate::formats::{Certificate, InstanceFile};
use crate::{CliError, EXIT_NO, EXIT_YES};

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    InstanceFile::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn limits(timeout: Option<f64>, budget: Option<u64>) -> Result<Limits, CliError> {
    let mut l = match timeout {
        Some(t) if !(t.is_finite() && t > 0.0) => return Err(CliError::Input(format!("bad timeout {t}"))),
        Some(t) => Limits::with_timeout(Duration::from_secs_f64(t)),
        None => Limits::default(),
    };
    l.budget = budget;
    Ok(l)
}

/// Algorithm used by `--algo auto`: twdp when a decomposition is supplied, the oracle for at most
/// four contractions, the branching solver otherwise.
pub fn auto_algo(inst: &InstancePair, has_td: bool) -> &'static str {
    if has_td {
        "twdp"
    } else if inst.k() <= 4 {
        "bruteforce"
    } else {
        "branch"
    }
}

#[derive(Serialize)]
struct StatsFile<'a> {
    algo: &'a str,
    answer: Answer,
    elapsed_ms: f64,
    g_vertices: usize,
    g_edges: usize,
    h_vertices: usize,
    h_edges: usize,
    k: usize,
    detail: &'a StatDetail,
}

pub fn cmd_solve(a: &SolveArgs) -> Result<i32, CliError> {
    let file = load_instance(&a.instance)?;
    let inst = &file.inst;
    let td = match &a.td {
        Some(p) => Some(
            parse_td(&read(p)?, &file.g_order).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    let algo = if a.algo == "auto" { auto_algo(inst, td.is_some()) } else { a.algo.as_str() };
    if td.is_some() && algo != "twdp" {
        return Err(CliError::Input(format!("--td applies only to twdp, not {algo}")));
    }
    if a.trace.is_some() && algo != "twdp" {
        return Err(CliError::Input(format!("--trace applies only to twdp, not {algo}")));
    }
    if a.paper_faithful && algo != "bruteforce" {
        return Err(CliError::Input(format!("--paper-faithful applies only to bruteforce, not {algo}")));
    }
    let limits = limits(a.timeout, a.budget)?;

    let mut registry = SolverRegistry::with_defaults();
    if a.paper_faithful {
        registry.register(Box::new(BruteForceSolver { config: OracleConfig { prune: false, ..Default::default() } }));
    }
    let result = if algo == "twdp" {
        let solver = TwdpSolver { decomposition: td };
        match &a.trace {
            Some(dest) => run_traced(&solver, inst, &limits, dest.as_deref())?,
            None => solver.solve_traced(inst, &limits, None).map_err(solve_error)?,
        }
    } else {
        let solver = registry.get(algo).ok_or_else(|| {
            CliError::Input(format!("unknown algorithm `{algo}`; expected one of auto, {}", registry.names().join(", ")))
        })?;
        solver.solve(inst, &limits).map_err(solve_error)?
    };

    if let Some(w) = &result.certificate {
        let report = check_witness(inst, w).map_err(|e| CliError::Failed(format!("{algo} certificate: {e}")))?;
        if !report.is_valid() {
            return Err(CliError::Failed(format!("{algo} produced a certificate that does not verify")));
        }
        if let Some(p) = &a.cert {
            let seq = witness_to_sequence(w, inst.g()).map_err(|e| CliError::Failed(e.to_string()))?;
            write(p, &Certificate::Sequence(seq).to_text())?;
        }
    }
    if let Some(p) = &a.stats {
        let (g, h) = (inst.g(), inst.h());
        let s = StatsFile {
            algo,
            answer: result.answer,
            elapsed_ms: result.stats.elapsed.as_secs_f64() * 1e3,
            g_vertices: g.vertex_count(),
            g_edges: g.edge_count(),
            h_vertices: h.vertex_count(),
            h_edges: h.edge_count(),
            k: inst.k(),
            detail: &result.stats.detail,
        };
        let json = serde_json::to_string_pretty(&s).map_err(|e| CliError::Failed(e.to_string()))?;
        write(p, &(json + "\n"))?;
    }
    println!("{}", result.answer);
    Ok(if result.answer == Answer::Yes { EXIT_YES } else { EXIT_NO })
}

fn solve_error(e: SolveError) -> CliError {
    match e {
        SolveError::BudgetExceeded(_) | SolveError::Timeout => CliError::Limit(e.to_string()),
        SolveError::InvalidDecomposition(_) | SolveError::Unsupported(_) => CliError::Input(e.to_string()),
        SolveError::Graph(_) | SolveError::Internal(_) => CliError::Failed(e.to_string()),
    }
}

/// Trace format: a `node <id> <kind> <entries>` line per decomposition node, then one signature
/// per line, indented by two spaces.
fn run_traced(
    solver: &TwdpSolver,
    inst: &InstancePair,
    limits: &Limits,
    dest: Option<&Path>,
) -> Result<SolveResult, CliError> {
    let mut out: Box<dyn std::io::Write> = match dest {
        Some(p) => Box::new(std::io::BufWriter::new(
            fs::File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(std::io::stderr().lock()),
    };
    let mut io_error = None;
    let mut sink = |id: usize, kind: &NiceKind, sigs: Vec<String>| {
        let mut text = format!("node {id} {kind} {}\n", sigs.len());
        for s in sigs {
            text.push_str("  ");
            text.push_str(&s);
            text.push('\n');
        }
        if let Err(e) = out.write_all(text.as_bytes()) {
            io_error.get_or_insert(e);
        }
    };
    let r = solver.solve_traced(inst, limits, Some(&mut sink)).map_err(solve_error)?;
    if let Some(e) = io_error {
        return Err(CliError::Input(format!("trace: {e}")));
    }
    out.flush().map_err(|e| CliError::Input(format!("trace: {e}")))?;
    Ok(r)
}

pub fn cmd_check(a: &CheckArgs) -> Result<i32, CliError> {
    let file = load_instance(&a.instance)?;
    let inst = &file.inst;
    let cert = Certificate::parse(&read(&a.certificate)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.certificate.display())))?;
    let problems: Vec<String> = match &cert {
        Certificate::Sequence(seq) => match apply_sequence(inst.g(), seq) {
            Err(e) => vec![format!("InvalidStep: {e}")],
            Ok(result) if &result != inst.h() => {
                let (rv, hv) = (result.vertex_set(), inst.h().vertex_set());
                let (re, he): (BTreeSet<_>, BTreeSet<_>) =
                    (result.edges().into_iter().collect(), inst.h().edges().into_iter().collect());
                let mut p = vec!["the sequence does not produce H".to_string()];
                p.extend(rv.difference(&hv).map(|v| format!("vertex {v} survives but is not in H")));
                p.extend(hv.difference(&rv).map(|v| format!("H vertex {v} was contracted away")));
                p.extend(re.difference(&he).map(|(u, v)| format!("extra edge ({u}, {v})")));
                p.extend(he.difference(&re).map(|(u, v)| format!("missing edge ({u}, {v})")));
                p
            }
            Ok(_) => Vec::new(),
        },
        Certificate::Witness(w) => match check_witness(inst, w) {
            Err(e) => vec![e.to_string()],
            Ok(report) => report.violations.iter().map(|v| v.to_string()).collect(),
        },
    };
    if problems.is_empty() {
        println!("VALID");
        Ok(EXIT_YES)
    } else {
        println!("INVALID");
        for p in problems {
            println!("{p}");
        }
        Ok(EXIT_NO)
    }
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, family: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::Input(format!("{family} needs --{flag}")))
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<i32, CliError> {
    let (inst, cert): (InstancePair, Option<Certificate>) = match a.family {
        Family::OneInThreeSat | Family::Nae34 => {
            let path = need(&a.cnf, "cnf", "this family")?;
            let f = CnfFormula::parse_dimacs(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let (sem, kind, inst) = if a.family == Family::OneInThreeSat {
                (Semantics::OneInThree, CertificateKind::OneInThree, gen_from_1in3sat(&f).map_err(input_err)?)
            } else {
                (Semantics::Nae, CertificateKind::Nae34, gen_from_nae34sat(&f).map_err(input_err)?)
            };
            let cert = match a.emit_cert {
                Some(_) => match sat_bruteforce(&f, sem).map_err(input_err)? {
                    Some(assignment) => Some(Certificate::Sequence(
                        certificate_from_assignment(&f, &assignment, kind).map_err(|e| CliError::Failed(e.to_string()))?,
                    )),
                    None => None,
                },
                None => None,
            };
            (inst, cert)
        }
        Family::Crossmatch => {
            let path = need(&a.input, "input", "crossmatch")?;
            let cm = CrossMatchingInstance::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let inst = gen_from_crossmatching(&cm).map_err(input_err)?;
            let cert = match a.emit_cert {
                Some(_) => crossmatch_bruteforce(&cm)
                    .and_then(|m| crossmatch_witness(&cm, &m))
                    .map(Certificate::Witness),
                None => None,
            };
            (inst, cert)
        }
        Family::Pvc => {
            let path = need(&a.input, "input", "pvc")?;
            let p = PvcInstance::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let inst = gen_from_pvc(&p).map_err(input_err)?;
            let cert = match a.emit_cert {
                Some(_) if p.graph.vertex_count() >= 32 => {
                    return Err(CliError::Input("--emit-cert for pvc searches covers exhaustively; at most 31 vertices".into()))
                }
                Some(_) => pvc_bruteforce(&p).and_then(|c| pvc_witness(&p, &c)).map(Certificate::Witness),
                None => None,
            };
            (inst, cert)
        }
        Family::Random => {
            let n = *need(&a.n, "n", "random")?;
            let k = *need(&a.k, "k", "random")?;
            let mode = match a.mode {
                ModeArg::Yes => RandomMode::Yes,
                ModeArg::Perturbed => RandomMode::Perturbed,
            };
            let r = gen_random(n, k, a.seed, mode).map_err(input_err)?;
            let cert = (mode == RandomMode::Yes).then(|| Certificate::Sequence(r.sequence.clone()));
            (r.inst, cert)
        }
    };
    write(&a.output, &InstanceFile::from_instance(inst).to_text())?;
    if let Some(p) = &a.emit_cert {
        match cert {
            Some(c) => write(p, &c.to_text())?,
            None => eprintln!("no certificate written: the source instance has no solution"),
        }
    }
    Ok(EXIT_YES)
}

pub fn cmd_decompose(a: &DecomposeArgs) -> Result<i32, CliError> {
    let file = load_instance(&a.instance)?;
    let union = union_graph(&file.inst);
    let td: TreeDecomposition = heuristic_decompose(&union);
    let text = write_td(&td, &file.g_order);
    // Re-read what will be written, so the file is known to be valid for this instance.
    let back = parse_td(&text, &file.g_order).map_err(|e| CliError::Failed(e.to_string()))?;
    let report = back.validate(&union);
    if !report.is_valid() {
        return Err(CliError::Failed(format!("heuristic decomposition failed validation: {}", report.summary())));
    }
    write(&a.output, &text)?;
    println!("width {}", td.width());
    Ok(EXIT_YES)
}
