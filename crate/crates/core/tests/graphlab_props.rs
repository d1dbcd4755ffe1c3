use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::Rng;
use workbench_core::graphlab::*;
use workbench_core::rng::seeded;

fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = seeded(seed);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::new(n, edges).unwrap()
}

fn random_lambda(g: &Graph, seed: u64) -> Vec<usize> {
    let mut rng = seeded(seed);
    g.degrees().into_iter().map(|d| rng.gen_range(0..=d)).collect()
}

#[test]
fn hall_condition_matches_orientation_on_random_graphs() {
    let mut agree_yes = 0;
    for i in 0..1000u64 {
        let n = 2 + (i % 9) as usize;
        let g = random_graph(n, 0.5, i);
        let lambda = random_lambda(&g, i + 1_000_000);
        let hall = hall_condition(&g, &lambda).unwrap();
        let flow = orientation_exists(&g, &lambda).unwrap();
        assert_eq!(hall.holds, flow.exists, "instance {i}: {g} {lambda:?}");
        if let Some(arcs) = flow.orientation {
            agree_yes += 1;
            assert_eq!(arcs.len(), g.edge_count());
            for (&(u, v), &(t, h)) in g.edges().iter().zip(&arcs) {
                assert!((t, h) == (u, v) || (t, h) == (v, u));
            }
            let indeg = in_degrees(n, &arcs);
            assert!(indeg.iter().zip(&lambda).all(|(d, l)| d <= l));
        }
        if let Some(x) = hall.violating {
            let inside = g.edges().iter().filter(|(u, v)| x.contains(u) && x.contains(v)).count();
            assert!(inside > x.iter().map(|&v| lambda[v]).sum::<usize>());
        }
    }
    assert!(agree_yes > 50);
}

#[test]
fn colouring_is_monotone_under_supersets() {
    let mut rng = seeded(3);
    for _ in 0..60 {
        let size = rng.gen_range(1..=3);
        let mut base: Vec<u32> = (0..size).map(|_| rng.gen_range(1..=6)).collect();
        base.sort_unstable();
        base.dedup();
        let s = ColourBudget::new(base.clone()).unwrap();
        let extra = rng.gen_range(1..=7);
        if !base.contains(&extra) {
            base.push(extra);
        }
        let t = ColourBudget::new(base).unwrap();
        let (rs, rt) = (colours_z(&s).unwrap(), colours_z(&t).unwrap());
        if rs.colours {
            assert!(rt.colours, "{s:?} colours but {t:?} does not");
        }
        for (r, b) in [(&rs, &s), (&rt, &t)] {
            if let Some(c) = &r.certificate {
                assert!(certificate_is_valid(b, c));
            }
        }
        if partial_sum(&s) < BigRational::one() {
            assert!(!rs.colours);
        }
    }
}

/// Every window of the periodic extension of a certificate respects each
/// colour's cooldown: equal colours `c` sit at least `c + 1` apart.
#[test]
fn certificates_tile_the_integers() {
    for colours in [vec![1, 2, 3], vec![1, 2, 3, 4], vec![2, 3, 4, 5, 6, 7], vec![1, 3, 5, 7]] {
        let s = ColourBudget::new(colours.clone()).unwrap();
        let r = colours_z(&s).unwrap();
        let Some(word) = r.certificate else {
            assert!(!r.colours);
            continue;
        };
        let len = word.len();
        for i in 0..len {
            for gap in 1..=len * 2 {
                let (x, y) = (word[i], word[(i + gap) % len]);
                if x == y {
                    assert!(gap as u32 > x, "{colours:?}: colour {x} repeats after {gap}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flip_verdict_survives_relabelling(seed in any::<u64>(), perm in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle()) {
        let mut rng = seeded(seed);
        let g = random_regular_graph(8, 3, &mut rng).unwrap();
        let colours: Vec<u8> = (0..g.edge_count()).map(|_| rng.gen_range(1..=2)).collect();
        let fc = FlipColouring { graph: g.clone(), colours: colours.clone(), a: vec![1, 2] };
        let moved_graph = g.relabel(&perm).unwrap();
        let moved_colours: Vec<u8> = moved_graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                let i = g.edges().iter().position(|&(x, y)| {
                    let (a, b) = (perm[x], perm[y]);
                    (a.min(b), a.max(b)) == (u, v)
                }).unwrap();
                colours[i]
            })
            .collect();
        let moved = FlipColouring { graph: moved_graph, colours: moved_colours, a: vec![1, 2] };
        for mode in [NeighbourhoodMode::Induced, NeighbourhoodMode::Incident] {
            prop_assert_eq!(flip_verify(&fc, mode).unwrap().holds, flip_verify(&moved, mode).unwrap().holds);
        }
    }

    #[test]
    fn random_regular_graphs_are_regular(n in 4usize..=12, d in 1usize..=6, seed in any::<u64>()) {
        prop_assume!(d < n && n * d % 2 == 0);
        let g = random_regular_graph(n, d, &mut seeded(seed)).unwrap();
        prop_assert!(g.degrees().iter().all(|&x| x == d));
    }
}

#[test]
fn complete_bipartite_graphs_have_long_cycles() {
    for a in 2..=6 {
        let g = BipartiteGraph::complete(a, a + 1);
        match bipartite_cycle_check(&g).unwrap() {
            CycleVerdict::ConjectureHolds { cycle } => assert_eq!(cycle.len(), 2 * a),
            v => panic!("{v:?}"),
        }
    }
    assert!(matches!(
        bipartite_cycle_check(&BipartiteGraph::complete(13, 2)),
        Err(e) if e.is_refusal()
    ));
}
