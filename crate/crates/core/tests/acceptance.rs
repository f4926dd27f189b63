//! Acceptance sweep. Prints one line per criterion and exits non-zero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use lcp_core::decomposition::{heuristic_decompose, parse_td, write_td, TreeDecomposition};
use lcp_core::reductions::{
    certificate_from_assignment, crossmatch_bruteforce, gen_from_1in3sat, gen_from_crossmatching,
    gen_from_nae34sat, gen_from_pvc, gen_random, pvc_bruteforce, sat_bruteforce, CertificateKind, CnfFormula,
    CrossMatchingInstance, Literal, PvcInstance, RandomMode, Semantics,
};
use lcp_core::solver::twdp::TwdpStats;
use lcp_core::solver::{BranchSolver, BruteForceSolver, SolveError, StatDetail, TwdpSolver};
use lcp_core::{apply_sequence, check_witness, union_graph, Answer, InstancePair, Label, LabeledGraph, Limits, SolveResult, Solver};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn progress(id: &str, msg: &str) {
    if std::env::var_os("LCP_ACCEPTANCE_VERBOSE").is_some() {
        eprintln!("criterion {id}: {msg}");
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn verified(inst: &InstancePair, r: &SolveResult) -> bool {
    match (&r.certificate, r.answer) {
        (Some(w), Answer::Yes) => check_witness(inst, w).is_ok_and(|rep| rep.is_valid()),
        (None, Answer::No) => true,
        _ => false,
    }
}

/// Runs all three solvers; returns the common answer, or a description of the disagreement.
fn three_way(inst: &InstancePair) -> Result<Answer, String> {
    let limits = Limits::default();
    let solvers: [&dyn Solver; 3] = [&BruteForceSolver::default(), &BranchSolver::default(), &TwdpSolver::default()];
    let mut answers = Vec::new();
    for s in solvers {
        let r = s.solve(inst, &limits).map_err(|e| format!("{} failed: {e} on {inst:?}", s.name()))?;
        if !verified(inst, &r) {
            return Err(format!("{} certificate rejected on {inst:?}", s.name()));
        }
        answers.push(r.answer);
    }
    if answers.iter().all(|&a| a == answers[0]) {
        Ok(answers[0])
    } else {
        Err(format!("answers {answers:?} on {inst:?}"))
    }
}

fn connected_graphs(n: usize) -> Vec<LabeledGraph> {
    let pairs: Vec<(Label, Label)> =
        (1..=n as Label).flat_map(|a| (a + 1..=n as Label).map(move |b| (a, b))).collect();
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e);
            let g = LabeledGraph::from_edges(1..=n as Label, edges).unwrap();
            g.is_connected().then_some(g)
        })
        .collect()
}

/// Every graph reachable from `g` by at most `depth` labeled contractions, including `g`.
fn reachable(g: &LabeledGraph, depth: usize) -> Vec<LabeledGraph> {
    let mut seen: HashSet<LabeledGraph> = HashSet::from([g.clone()]);
    let mut frontier = vec![g.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &frontier {
            for (a, b) in x.edges() {
                for (keep, rem) in [(a, b), (b, a)] {
                    let y = x.contract_edge(keep, rem).unwrap();
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<LabeledGraph> = seen.into_iter().collect();
    out.sort_by_key(|h| (h.vertex_count(), h.edges()));
    out
}

fn criterion_1() -> Outcome {
    let mut family = Vec::new();
    for n in 1..=5 {
        for g in connected_graphs(n) {
            // Each reachable H, plus every graph one toggled pair away from it (mostly NO instances).
            let mut hs: HashSet<LabeledGraph> = HashSet::new();
            for h in reachable(&g, 2) {
                let hv: Vec<Label> = h.vertices().collect();
                for (i, &a) in hv.iter().enumerate() {
                    for &b in &hv[i + 1..] {
                        let mut t = h.clone();
                        if !t.remove_edge(a, b) {
                            t.add_edge(a, b).unwrap();
                        }
                        hs.insert(t);
                    }
                }
                hs.insert(h);
            }
            let mut hs: Vec<LabeledGraph> = hs.into_iter().collect();
            hs.sort_by_key(|h| (h.vertex_count(), h.edges()));
            family.extend(hs.into_iter().map(|h| InstancePair::new(g.clone(), h).unwrap()));
        }
    }
    let exhaustive = family.len();
    progress("1", &format!("{exhaustive} exhaustive instances"));
    let mut random = Vec::new();
    for seed in 0..500u64 {
        let n = 5 + (seed % 6) as usize;
        let k = 1 + (seed / 6 % 4) as usize;
        let mode = if seed % 2 == 0 { RandomMode::Yes } else { RandomMode::Perturbed };
        random.push(gen_random(n, k, seed, mode).unwrap().inst);
    }
    family.extend(random);
    let results: Vec<Result<Answer, String>> = family.par_iter().map(three_way).collect();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let yes = results.iter().filter(|r| matches!(r, Ok(Answer::Yes))).count();
    let no = results.iter().filter(|r| matches!(r, Ok(Answer::No))).count();
    let mut detail = format!(
        "{exhaustive} exhaustive (reachable H and one-pair toggles) + 500 random instances, {yes} YES / {no} NO, {} disagreements",
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    verdict(failures.is_empty(), detail)
}

fn onein3_corpus() -> Vec<CnfFormula> {
    let mut out = Vec::new();
    let sorted_triples = |n: i32| -> Vec<[Literal; 3]> {
        let mut v = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    v.push([a, b, c]);
                }
            }
        }
        v
    };
    for n in [3usize, 4] {
        let t = sorted_triples(n as i32);
        for m in 1..=3u32 {
            for idx in 0..t.len().pow(m) {
                let mut rest = idx;
                let clauses = (0..m)
                    .map(|_| {
                        let c = t[rest % t.len()];
                        rest /= t.len();
                        c
                    })
                    .collect();
                out.push(CnfFormula::new(n, clauses).unwrap());
            }
        }
    }
    // Literal order inside a clause changes the gadget's 6-cycle, so sample permuted clauses too.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..150 {
        let n = rng.gen_range(3..=4);
        let m = rng.gen_range(1..=3);
        let clauses = (0..m)
            .map(|_| {
                let mut vars: Vec<Literal> = (1..=n as Literal).collect();
                vars.shuffle(&mut rng);
                [vars[0], vars[1], vars[2]]
            })
            .collect();
        out.push(CnfFormula::new(n, clauses).unwrap());
    }
    out
}

fn nae_corpus() -> Vec<CnfFormula> {
    let mut out = vec![
        CnfFormula::new(1, vec![[1, 1, 1]]).unwrap(),
        CnfFormula::new(3, vec![[1, 1, 2], [2, 2, 3], [1, 1, 3]]).unwrap(),
        CnfFormula::new(3, vec![[1, 2, 3]]).unwrap(),
        CnfFormula::new(4, vec![[1, 2, 3], [2, 3, 4], [1, 3, 4]]).unwrap(),
        CnfFormula::new(2, vec![[1, 1, 2], [1, 2, 2]]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    while out.len() < 40 {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(1..=3);
        let clauses: Vec<[Literal; 3]> =
            (0..m).map(|_| [0; 3].map(|_| rng.gen_range(1..=n as Literal))).collect();
        out.push(CnfFormula::new(n, clauses).unwrap());
    }
    out
}

fn random_crossmatch(n: usize, rng: &mut ChaCha8Rng) -> CrossMatchingInstance {
    let verts: Vec<Label> = (1..=2 * n as Label).collect();
    let mut g = LabeledGraph::with_vertices(verts.iter().copied());
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            if rng.gen_bool(0.5) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    let a: BTreeSet<Label> = verts.iter().copied().filter(|v| v % 2 == 1).collect();
    let b: BTreeSet<Label> = verts.iter().copied().filter(|v| v % 2 == 0).collect();
    CrossMatchingInstance::new(g, a, b).unwrap()
}

fn random_pvc(rng: &mut ChaCha8Rng) -> Option<PvcInstance> {
    let n = rng.gen_range(2..=6);
    let t = rng.gen_range(2..=n.min(4));
    let mut owner: Vec<usize> = (0..n).map(|i| if i < t { i } else { rng.gen_range(0..t) }).collect();
    owner.shuffle(rng);
    let mut parts = vec![BTreeSet::new(); t];
    for (v, &p) in owner.iter().enumerate() {
        parts[p].insert(v as Label + 1);
    }
    let mut g = LabeledGraph::with_vertices(1..=n as Label);
    for a in 0..t {
        for b in a + 1..t {
            let u = *parts[a].iter().collect::<Vec<_>>().choose(rng).unwrap();
            let v = *parts[b].iter().collect::<Vec<_>>().choose(rng).unwrap();
            g.add_edge(*u, *v).unwrap();
        }
    }
    let budgets = parts.iter().map(|p| rng.gen_range(0..=p.len())).collect();
    PvcInstance::new(g, parts, budgets).ok()
}

fn criterion_2() -> Outcome {
    let mut problems: Vec<String> = Vec::new();
    let bf = BruteForceSolver::default();
    let limits = Limits::default();

    let mut onein3 = onein3_corpus();
    // The smallest positive formula with no 1-in-3 assignment needs four clauses; include it so the
    // NO side is exercised.
    onein3.push(CnfFormula::new(4, vec![[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap());
    let onein3_yes: usize = onein3
        .par_iter()
        .map(|f| {
            let sat = sat_bruteforce(f, Semantics::OneInThree).unwrap().is_some();
            let inst = gen_from_1in3sat(f).unwrap();
            let r = bf.solve(&inst, &limits).unwrap();
            let ok = (r.answer == Answer::Yes) == sat && verified(&inst, &r);
            (ok, sat)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, (ok, sat))| {
            if !ok {
                problems.push(format!("1-in-3 formula {:?}", onein3[i].clauses));
            }
            usize::from(sat)
        })
        .sum();

    // NAE instances have k around 30, beyond exhaustive partition search. The branching solver
    // (itself checked against the oracle in criterion 1) adjudicates; twdp cross-checks when its
    // tables fit in a few seconds.
    progress("2", "1-in-3 done");
    let nae = nae_corpus();
    let branch = BranchSolver::default();
    let twdp = TwdpSolver::default();
    let nae_results: Vec<(Option<String>, bool)> = nae
        .par_iter()
        .map(|f| {
            let sat = sat_bruteforce(f, Semantics::Nae).unwrap().is_some();
            let inst = gen_from_nae34sat(f).unwrap();
            let r = match branch.solve(&inst, &Limits::with_timeout(Duration::from_secs(60))) {
                Ok(r) => r,
                Err(e) => return (Some(format!("NAE formula {:?}: branch {e}", f.clauses)), false),
            };
            if (r.answer == Answer::Yes) != sat || !verified(&inst, &r) {
                return (Some(format!("NAE formula {:?}: sat={sat} branch={:?}", f.clauses, r.answer)), false);
            }
            match twdp.solve(&inst, &Limits::with_timeout(Duration::from_secs(3))) {
                Ok(t) if t.answer == r.answer && verified(&inst, &t) => (None, true),
                Ok(t) => (Some(format!("NAE formula {:?}: sat={sat} twdp={:?}", f.clauses, t.answer)), true),
                Err(SolveError::Timeout | SolveError::BudgetExceeded(_)) => (None, false),
                Err(e) => (Some(format!("NAE formula {:?}: twdp {e}", f.clauses)), false),
            }
        })
        .collect();
    let nae_cross = nae_results.iter().filter(|r| r.1).count();
    problems.extend(nae_results.into_iter().filter_map(|r| r.0));

    progress("2", "NAE done");
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let mut cms = Vec::new();
    for n in 1..=2 {
        let verts: Vec<Label> = (1..=2 * n as Label).collect();
        let pairs: Vec<(Label, Label)> =
            verts.iter().flat_map(|&a| verts.iter().filter(move |&&b| b > a).map(move |&b| (a, b))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e);
            let g = LabeledGraph::from_edges(verts.iter().copied(), edges).unwrap();
            let a = verts.iter().copied().filter(|v| v % 2 == 1).collect();
            let b = verts.iter().copied().filter(|v| v % 2 == 0).collect();
            cms.push(CrossMatchingInstance::new(g, a, b).unwrap());
        }
    }
    for _ in 0..200 {
        cms.push(random_crossmatch(3, &mut rng));
    }
    let cm_yes = cms.iter().filter(|c| crossmatch_bruteforce(c).is_some()).count();
    let cm_bad: Vec<String> = cms
        .par_iter()
        .filter_map(|c| {
            let inst = gen_from_crossmatching(c).unwrap();
            let r = bf.solve(&inst, &limits).unwrap();
            ((r.answer == Answer::Yes) != crossmatch_bruteforce(c).is_some() || !verified(&inst, &r))
                .then(|| format!("cross matching {}", c.to_text().replace('\n', ";")))
        })
        .collect();
    problems.extend(cm_bad);

    progress("2", "cross matching done");
    let mut pvcs = Vec::new();
    while pvcs.len() < 200 {
        if let Some(p) = random_pvc(&mut rng) {
            pvcs.push(p);
        }
    }
    let pvc_yes = pvcs.iter().filter(|p| pvc_bruteforce(p).is_some()).count();
    let pvc_bad: Vec<String> = pvcs
        .par_iter()
        .filter_map(|p| {
            let inst = gen_from_pvc(p).unwrap();
            let r = bf.solve(&inst, &limits).unwrap();
            ((r.answer == Answer::Yes) != pvc_bruteforce(p).is_some() || !verified(&inst, &r))
                .then(|| format!("pvc {}", p.to_text().replace('\n', ";")))
        })
        .collect();
    problems.extend(pvc_bad);

    let mut detail = format!(
        "1-in-3 {} formulas ({onein3_yes} sat), NAE {} formulas ({nae_cross} also by twdp), cross matching {} ({cm_yes} yes), PVC {} ({pvc_yes} yes), {} mismatches",
        onein3.len(),
        nae.len(),
        cms.len(),
        pvcs.len(),
        problems.len()
    );
    if let Some(p) = problems.first() {
        detail.push_str(&format!("; first: {p}"));
    }
    verdict(problems.is_empty(), detail)
}

fn all_assignments(f: &CnfFormula, sem: Semantics) -> Vec<Vec<bool>> {
    (0u32..1 << f.num_vars)
        .map(|m| (0..f.num_vars).map(|i| m & (1 << i) != 0).collect::<Vec<bool>>())
        .filter(|a| f.satisfies(a, sem))
        .collect()
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (corpus, sem, kind) in [
        (onein3_corpus(), Semantics::OneInThree, CertificateKind::OneInThree),
        (nae_corpus(), Semantics::Nae, CertificateKind::Nae34),
    ] {
        for f in &corpus {
            let inst = match kind {
                CertificateKind::OneInThree => gen_from_1in3sat(f).unwrap(),
                CertificateKind::Nae34 => gen_from_nae34sat(f).unwrap(),
            };
            for a in all_assignments(f, sem) {
                checked += 1;
                let seq = certificate_from_assignment(f, &a, kind).unwrap();
                if apply_sequence(inst.g(), &seq).ok().as_ref() != Some(inst.h()) {
                    bad.push(format!("{kind:?} {:?} with {a:?}", f.clauses));
                }
            }
        }
    }
    let pass = bad.is_empty() && checked >= 100;
    verdict(pass, format!("{checked} assignments replayed, {} failures{}", bad.len(), bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()))
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=30);
        let k = rng.gen_range(1..=10.min(n - 1));
        let r = gen_random(n, k, seed, RandomMode::Yes).unwrap();
        let dg = r.inst.g().degeneracy().0;
        let dh = r.inst.h().degeneracy().0;
        // dh <= dg * 2n / (n - k), kept in integers.
        if dh > dg + k || dh * (n - k) > dg * 2 * n {
            bad.push(format!("seed {seed}: n={n} k={k} dG={dg} dH={dh}"));
        }
    }
    verdict(bad.is_empty(), format!("1000 random (G, S), {} violations{}", bad.len(), bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()))
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let mut nae = nae_corpus();
    // Larger formulas where every variable occurs in four clauses.
    nae.push(CnfFormula::new(
        6,
        vec![[1, 2, 3], [4, 5, 6], [1, 4, 2], [5, 3, 6], [1, 5, 2], [4, 3, 6], [1, 6, 5]],
    ).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for _ in 0..20 {
        let n = 12;
        let mut pool: Vec<Literal> = (1..=n).flat_map(|v| [v; 4]).collect();
        pool.shuffle(&mut rng);
        let clauses: Vec<[Literal; 3]> = pool.chunks(3).take(15).map(|c| [c[0], c[1], c[2]]).collect();
        nae.push(CnfFormula::new(n as usize, clauses).unwrap());
    }
    let mut max_delta = 0;
    for f in &nae {
        let d = gen_from_nae34sat(f).unwrap().g().max_degree();
        max_delta = max_delta.max(d);
        if d > 16 {
            bad.push(format!("NAE {:?}: max degree {d}", f.clauses));
        }
    }
    let (mut dg_max, mut dh_max) = (0, 0);
    for f in onein3_corpus() {
        let inst = gen_from_1in3sat(&f).unwrap();
        let (dg, dh) = (inst.g().degeneracy().0, inst.h().degeneracy().0);
        dg_max = dg_max.max(dg);
        dh_max = dh_max.max(dh);
        if dg > 3 || dh > 2 {
            bad.push(format!("1-in-3 {:?}: degeneracy {dg}/{dh}", f.clauses));
        }
    }
    verdict(
        bad.is_empty(),
        format!("{} NAE instances max degree {max_delta}; 1-in-3 degeneracy G {dg_max}, H {dh_max}", nae.len()),
    )
}

fn criterion_6() -> Outcome {
    let mut corpus: Vec<InstancePair> = Vec::new();
    for seed in 0..400u64 {
        let n = 6 + (seed % 10) as usize;
        let k = 1 + (seed / 10 % 8) as usize;
        if k < n {
            let inst = gen_random(n, k, 1000 + seed, RandomMode::Yes).unwrap().inst;
            if inst.h().degeneracy().0 <= 3 {
                corpus.push(inst);
            }
        }
    }
    for f in onein3_corpus().into_iter().filter(|f| f.num_vars <= 4) {
        if sat_bruteforce(&f, Semantics::OneInThree).unwrap().is_some() {
            corpus.push(gen_from_1in3sat(&f).unwrap());
        }
    }
    let solver = BranchSolver::default();
    let results: Vec<Result<(usize, usize, u64), String>> = corpus
        .par_iter()
        .map(|inst| {
            let colors = lcp_core::graph::colors_used(&inst.h().greedy_coloring());
            let r = solver
                .solve(inst, &Limits::with_timeout(Duration::from_secs(60)))
                .map_err(|e| e.to_string())?;
            match r.stats.detail {
                StatDetail::Branch(b) if r.answer == Answer::Yes => Ok((b.max_branching, colors, b.nodes_explored)),
                _ => Err(format!("unexpected {:?} on a YES instance", r.answer)),
            }
        })
        .collect();
    let mut bad = Vec::new();
    let (mut worst_nodes, mut worst_ratio) = (0, 0.0f64);
    for r in &results {
        match r {
            Ok((b, c, nodes)) => {
                worst_nodes = worst_nodes.max(*nodes);
                worst_ratio = worst_ratio.max(*b as f64 / *c as f64);
                if b > c || *nodes >= 1_000_000 {
                    bad.push(format!("branching {b} vs {c} colours, {nodes} nodes"));
                }
            }
            Err(e) => bad.push(e.clone()),
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{} YES instances, max branching/colours {worst_ratio:.2}, max nodes {worst_nodes}{}",
            corpus.len(),
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
    )
}

fn twdp_with(inst: &InstancePair, td: TreeDecomposition) -> Result<SolveResult, String> {
    TwdpSolver::with_decomposition(td).solve(inst, &Limits::default()).map_err(|e| e.to_string())
}

fn criterion_7(telemetry: &mut Vec<TwdpStats>) -> Outcome {
    let mut corpus = Vec::new();
    let mut seed = 0u64;
    while corpus.len() < 100 {
        let n = 4 + (seed % 5) as usize;
        let k = 1 + (seed % 3) as usize;
        let mode = if seed.is_multiple_of(3) { RandomMode::Perturbed } else { RandomMode::Yes };
        let inst = gen_random(n, k, 5000 + seed, mode).unwrap().inst;
        if heuristic_decompose(&union_graph(&inst)).width() <= 4 {
            corpus.push(inst);
        }
        seed += 1;
    }
    let results: Vec<Result<TwdpStats, String>> = corpus
        .par_iter()
        .map(|inst| {
            let union = union_graph(inst);
            let heur = heuristic_decompose(&union);
            let order: Vec<Label> = union.vertices().collect();
            let external = parse_td(&write_td(&heur, &order), &order).map_err(|e| e.to_string())?;
            let decomps = [
                TreeDecomposition::single_bag(&union),
                heur.clone(),
                heur.with_duplicated_bags(),
                external,
            ];
            let runs: Vec<SolveResult> =
                decomps.into_iter().map(|td| twdp_with(inst, td)).collect::<Result<_, _>>()?;
            let oracle = BruteForceSolver::default().solve(inst, &Limits::default()).map_err(|e| e.to_string())?;
            if runs.iter().any(|r| r.answer != oracle.answer || !verified(inst, r)) {
                return Err(format!(
                    "answers {:?} vs oracle {:?} on {inst:?}",
                    runs.iter().map(|r| r.answer).collect::<Vec<_>>(),
                    oracle.answer
                ));
            }
            match &runs[1].stats.detail {
                StatDetail::Twdp(s) => Ok(s.clone()),
                _ => Err("missing twdp stats".into()),
            }
        })
        .collect();
    let mut bad = Vec::new();
    for r in results {
        match r {
            Ok(s) => telemetry.push(s),
            Err(e) => bad.push(e),
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "100 instances x (single bag, heuristic, duplicated bags, PACE round trip), {} mismatches{}",
            bad.len(),
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
    )
}

fn criterion_8(c7_pass: bool, telemetry: &[TwdpStats]) -> Outcome {
    let max_width = telemetry.iter().map(|s| s.width).max().unwrap_or(0);
    let max_table = telemetry.iter().map(|s| s.max_table).max().unwrap_or(0);
    let mean_total =
        telemetry.iter().map(|s| s.total_entries as f64).sum::<f64>() / telemetry.len().max(1) as f64;
    let by_width: Vec<String> = (1..=max_width)
        .map(|w| {
            let m = telemetry.iter().filter(|s| s.width == w).map(|s| s.max_table).max().unwrap_or(0);
            format!("w{w}:{m}")
        })
        .collect();
    verdict(
        c7_pass && !telemetry.is_empty(),
        format!(
            "asymptotic claims not measured; telemetry over {} runs: max table {max_table}, mean entries {mean_total:.0}, max table by width [{}]",
            telemetry.len(),
            by_width.join(" ")
        ),
    )
}

fn main() {
    let started = Instant::now();
    let mut all = true;
    // LCP_ACCEPTANCE_ONLY=1,3 restricts the run while debugging; a restricted run never passes.
    let only: Option<Vec<usize>> = std::env::var("LCP_ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    if only.is_some() {
        all = false;
    }
    let mut report = |id: usize, f: &mut dyn FnMut() -> Outcome| {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            println!("criterion {id}: SKIPPED");
            return;
        }
        let t = Instant::now();
        let o = f();
        all &= o.pass;
        println!(
            "criterion {id}: {} ({:.1}s) {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    };
    report(1, &mut criterion_1);
    report(2, &mut criterion_2);
    report(3, &mut criterion_3);
    report(4, &mut criterion_4);
    report(5, &mut criterion_5);
    report(6, &mut criterion_6);
    let mut telemetry = Vec::new();
    let mut c7 = false;
    report(7, &mut || {
        let o = criterion_7(&mut telemetry);
        c7 = o.pass;
        o
    });
    report(8, &mut || criterion_8(c7, &telemetry));
    println!("acceptance finished in {:.1}s", started.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
