use lcp_core::solver::{BranchConfig, BranchSolver, BruteForceSolver, ColoringMode, OrderStrategy, TwdpSolver};
use lcp_core::{check_witness, Answer, InstancePair, Label, LabeledGraph, Limits, Solver};
use proptest::prelude::*;

/// Arbitrary small instance: G on 2..=8 vertices, H on a non-empty subset with arbitrary edges.
fn instance() -> impl Strategy<Value = InstancePair> {
    (2usize..=8).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            Just(n),
            proptest::collection::vec(any::<bool>(), pairs),
            1u32..(1 << n),
            proptest::collection::vec(any::<bool>(), pairs),
        )
            .prop_map(|(n, ge, mask, he)| {
                let verts: Vec<Label> = (1..=n as Label).collect();
                let mut g = LabeledGraph::with_vertices(verts.iter().copied());
                let mut h = LabeledGraph::with_vertices(verts.iter().copied().filter(|v| mask & (1 << (v - 1)) != 0));
                let mut idx = 0;
                for a in 1..=n as Label {
                    for b in a + 1..=n as Label {
                        if ge[idx] {
                            g.add_edge(a, b).unwrap();
                        }
                        if he[idx] && h.has_vertex(a) && h.has_vertex(b) {
                            h.add_edge(a, b).unwrap();
                        }
                        idx += 1;
                    }
                }
                InstancePair::new(g, h).unwrap()
            })
    })
}

fn solvers() -> Vec<Box<dyn Solver>> {
    let mut v: Vec<Box<dyn Solver>> = vec![Box::new(TwdpSolver::default())];
    for coloring_mode in [ColoringMode::Greedy, ColoringMode::Exact] {
        for order_strategy in [OrderStrategy::Frontier, OrderStrategy::Label] {
            v.push(Box::new(BranchSolver {
                config: BranchConfig { coloring_mode, order_strategy, ..Default::default() },
            }));
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn all_solvers_match_bruteforce(inst in instance()) {
        let oracle = BruteForceSolver::default().solve(&inst, &Limits::default()).unwrap();
        for s in solvers() {
            let r = s.solve(&inst, &Limits::default()).unwrap();
            prop_assert_eq!(r.answer, oracle.answer, "{} on {:?}", s.name(), inst);
            match &r.certificate {
                Some(w) => prop_assert!(check_witness(&inst, w).unwrap().is_valid()),
                None => prop_assert_eq!(r.answer, Answer::No),
            }
        }
    }
}
