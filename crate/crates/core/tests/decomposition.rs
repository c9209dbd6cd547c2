mod common;

use common::{chain_of_cliques, path, random_connected, weighted_ring};
use resdecomp::linsolve::exact_resistance_diameter;
use resdecomp::{
    partition_with, verify_partition, BoundConstants, DecompositionConfig, DecompositionReport,
    Partition, SketchConfig, SolverOptions, WeightedGraph,
};

fn run(
    g: &WeightedGraph,
    config: &DecompositionConfig,
    seed: u64,
) -> (Partition, DecompositionReport) {
    partition_with(
        g,
        config,
        &SketchConfig::default().with_seed(seed),
        &SolverOptions::default(),
    )
    .unwrap()
}

/// Checks shared by every decomposition: token conservation, the pruning
/// budget, exact block diameters against `3R`, and halving volumes along each
/// edge's standard charges.
fn check_invariants(g: &WeightedGraph, p: &Partition, rep: &DecompositionReport) {
    let weights: Vec<f64> = g.edges().map(|e| e.2).collect();
    let tokens: f64 = rep.psi.iter().zip(&weights).map(|(psi, w)| psi * w).sum();
    assert!((tokens - rep.type_ii_weight).abs() <= 1e-9 * rep.type_ii_weight.max(1.0));
    assert!(rep.type_i_weight <= rep.config.cut_budget / 2.0 + 1e-12);
    assert!((p.cut_weight - rep.cut_weight).abs() <= 1e-9 * g.total_weight());

    for (block, (&rdiam, &exact)) in p
        .blocks
        .iter()
        .zip(rep.per_block_rdiam.iter().zip(&rep.rdiam_exact))
    {
        assert!(exact);
        let (sub, _) = g.induced_subgraph(block).unwrap();
        let oracle = exact_resistance_diameter(&sub).unwrap().0;
        assert!((rdiam - oracle).abs() <= 1e-9 * oracle.max(1.0));
        assert!(
            rdiam <= 3.0 * rep.config.resistance_target,
            "block diameter {rdiam}"
        );
    }

    for charges in &rep.charges {
        let standard: Vec<f64> = charges
            .iter()
            .filter(|c| c.standard)
            .map(|c| c.volume)
            .collect();
        for pair in standard.windows(2) {
            assert!(
                pair[1] <= pair[0] / 2.0 + 1e-9,
                "volumes {pair:?} do not halve"
            );
        }
    }
    assert_eq!(
        rep.psi.iter().filter(|&&x| x > 0.0).count() > 0,
        rep.sparse_cuts > 0
    );
}

#[test]
fn path_splits_into_contiguous_runs() {
    let g = path(300);
    let config = DecompositionConfig::new(&g, 4.0, 1.0).unwrap();
    let (p, rep) = run(&g, &config, 0);
    check_invariants(&g, &p, &rep);
    assert!(p.blocks.len() > 1);
    for block in &p.blocks {
        assert_eq!(block.last().unwrap() - block[0] + 1, block.len());
    }
    assert_eq!(rep.cut_weight, (p.blocks.len() - 1) as f64);
    assert!(rep.loss_fraction <= 8.0 / config.delta);
}

#[test]
fn chain_of_cliques_cuts_only_bridges() {
    let g = chain_of_cliques(20, 5);
    let config = DecompositionConfig::new(&g, 2.0, 4.0).unwrap();
    let (p, rep) = run(&g, &config, 0);
    check_invariants(&g, &p, &rep);
    assert!(p.blocks.len() > 1);
    for block in &p.blocks {
        // Whole cliques only.
        assert_eq!(block[0] % 5, 0);
        assert_eq!(block.len() % 5, 0);
    }
}

#[test]
fn weighted_random_graphs() {
    let mut sparse_cuts = 0;
    let mut pruned = 0.0;
    for seed in 0..8 {
        let g = if seed % 2 == 0 {
            weighted_ring(200, 40, seed)
        } else {
            random_connected(120, 40 + seed)
        };
        let config = DecompositionConfig::new(&g, 2.0, 4.0).unwrap();
        let (p, rep) = run(&g, &config, seed);
        check_invariants(&g, &p, &rep);
        sparse_cuts += rep.sparse_cuts;
        pruned += rep.type_i_weight;
        let v = verify_partition(
            &g,
            &p.blocks,
            config.delta,
            BoundConstants::default(),
            &SketchConfig::default(),
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(v.blocks, p.blocks.len());
        assert!((v.cut_weight - p.cut_weight).abs() <= 1e-9 * g.total_weight());
        for (a, b) in v.block_rdiam.iter().zip(&rep.per_block_rdiam) {
            assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        }
    }
    assert!(sparse_cuts >= 8, "only {sparse_cuts} sparse cuts exercised");
    assert!(pruned > 0.0);
}

#[test]
fn relaxed_regime_still_partitions() {
    // c_R·δ² = 4 < 16: the token bound is not guaranteed but the output must
    // still be a partition with consistent accounting.
    for seed in 0..4 {
        let g = random_connected(80, 70 + seed);
        let config = DecompositionConfig::relaxed(&g, 2.0, 1.0).unwrap();
        assert!(config.precondition_binding);
        let (p, rep) = run(&g, &config, seed);
        check_invariants(&g, &p, &rep);
    }
}

#[test]
fn fixed_seed_is_deterministic() {
    let g = random_connected(150, 3);
    let config = DecompositionConfig::new(&g, 2.0, 4.0).unwrap();
    let a = run(&g, &config, 17);
    let b = run(&g, &config, 17);
    assert_eq!(a, b);
}

#[test]
fn disconnected_graph_blocks_respect_components() {
    let mut edges: Vec<(usize, usize, f64)> = (0..99).map(|v| (v, v + 1, 1.0)).collect();
    edges.extend((100..199).map(|v| (v, v + 1, 1.0)));
    let g = WeightedGraph::from_edges(200, &edges).unwrap();
    let config = DecompositionConfig::new(&g, 4.0, 1.0).unwrap();
    let (p, rep) = run(&g, &config, 0);
    check_invariants(&g, &p, &rep);
    for block in &p.blocks {
        assert!(block.iter().all(|&v| v < 100) || block.iter().all(|&v| v >= 100));
    }
}
