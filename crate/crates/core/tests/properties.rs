mod common;

use common::{random_connected, resistive_distances};
use proptest::prelude::*;
use resdecomp::edgelist::{parse_edge_list, write_edge_list};
use resdecomp::linsolve::{
    algebraic_connectivity, assemble_laplacian, exact_resistance_matrix, implied_additive_accuracy,
    lambda2_lower_bound, laplacian_pseudo_inverse, required_solver_accuracy, solve_laplacian,
};
use resdecomp::{st_potential, sweep_level_sets, Error, SolveMethod, SolverOptions, WeightedGraph};

fn graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..=10, any::<u64>()).prop_map(|(n, seed)| random_connected(n, seed))
}

/// Possibly disconnected graph with arbitrary positive weights.
fn loose_graph() -> impl Strategy<Value = WeightedGraph> {
    (1usize..=12).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 0.01f64..100.0), 0..3 * n)
            .prop_map(move |edges| WeightedGraph::from_edges(n, &edges).unwrap())
    })
}

fn subset_of(g: &WeightedGraph, mask: u64) -> Vec<usize> {
    (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_is_symmetric_and_volumes_add_up(g in loose_graph(), mask in any::<u64>()) {
        let s = subset_of(&g, mask);
        let rest: Vec<usize> = (0..g.n()).filter(|v| !s.contains(v)).collect();
        let a = g.cut_stats(&s).unwrap();
        let b = g.cut_stats(&rest).unwrap();
        prop_assert!(close(a.boundary_weight, b.boundary_weight, 1e-12));
        prop_assert!(close(a.volume + b.volume, 2.0 * g.total_weight(), 1e-12));
        let all: Vec<usize> = (0..g.n()).collect();
        prop_assert!(close(g.volume(&all).unwrap(), 2.0 * g.total_weight(), 1e-12));
    }

    #[test]
    fn conductance_is_scale_invariant(g in loose_graph(), mask in any::<u64>(), alpha in 0.01f64..100.0) {
        let s = subset_of(&g, mask);
        let scaled = g.scaled(alpha).unwrap();
        let a = g.cut_stats(&s).unwrap().conductance;
        let b = scaled.cut_stats(&s).unwrap().conductance;
        match (a, b) {
            (Some(x), Some(y)) => prop_assert!(close(x, y, 1e-12)),
            (None, None) => {}
            _ => prop_assert!(false, "conductance defined for only one scale"),
        }
    }

    #[test]
    fn components_partition_the_vertices(g in loose_graph()) {
        let comps = g.connected_components();
        let mut seen = vec![false; g.n()];
        for c in &comps {
            prop_assert!(!c.is_empty());
            for &v in c {
                prop_assert!(!seen[v]);
                seen[v] = true;
            }
            // No edge leaves a component.
            prop_assert_eq!(g.cut_stats(c).unwrap().boundary_weight, 0.0);
        }
        prop_assert!(seen.iter().all(|&s| s));
        prop_assert_eq!(g.is_connected(), comps.len() == 1);
    }

    #[test]
    fn edge_list_round_trips(g in loose_graph()) {
        let parsed = parse_edge_list(&write_edge_list(&g)).unwrap();
        prop_assert_eq!(parsed.n(), g.n());
        let a: Vec<_> = g.edges().collect();
        let b: Vec<_> = parsed.edges().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn resistance_is_a_metric_dominated_by_paths(g in graph()) {
        let r = exact_resistance_matrix(&g).unwrap();
        let d = resistive_distances(&g);
        let n = g.n();
        for u in 0..n {
            prop_assert!(r[(u, u)].abs() <= 1e-12);
            for v in 0..n {
                prop_assert!((r[(u, v)] - r[(v, u)]).abs() <= 1e-9);
                prop_assert!(r[(u, v)] <= d[u][v] + 1e-9);
                if u != v {
                    prop_assert!(r[(u, v)] > 0.0);
                }
                for w in 0..n {
                    prop_assert!(r[(u, w)] <= r[(u, v)] + r[(v, w)] + 1e-9);
                }
            }
        }
    }

    #[test]
    fn foster_sum(g in graph()) {
        let r = exact_resistance_matrix(&g).unwrap();
        let total: f64 = g.edges().map(|(u, v, w)| w * r[(u, v)]).sum();
        prop_assert!((total - (g.n() - 1) as f64).abs() <= 1e-6);
    }

    #[test]
    fn resistance_scales_inversely(g in graph(), alpha in 0.05f64..20.0) {
        let r = exact_resistance_matrix(&g).unwrap();
        let rs = exact_resistance_matrix(&g.scaled(alpha).unwrap()).unwrap();
        for (a, b) in r.iter().zip(rs.iter()) {
            prop_assert!((a / alpha - b).abs() <= 1e-9 * (1.0 + a / alpha));
        }
    }

    #[test]
    fn rayleigh_monotonicity(g in graph(), pick in any::<prop::sample::Index>(), factor in 1.0f64..10.0) {
        let edges: Vec<_> = g.edges().collect();
        let k = pick.index(edges.len());
        let heavier: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v, w))| (u, v, if i == k { w * factor } else { w }))
            .collect();
        let h = WeightedGraph::from_edges(g.n(), &heavier).unwrap();
        let r = exact_resistance_matrix(&g).unwrap();
        let rh = exact_resistance_matrix(&h).unwrap();
        for (a, b) in r.iter().zip(rh.iter()) {
            prop_assert!(*b <= a + 1e-9);
        }
    }

    /// The potential flow has energy Reff, and the unit flow along a shortest
    /// `1/w` path, whose energy is the path length, costs at least as much.
    #[test]
    fn thomson_principle(g in graph(), s_pick in any::<prop::sample::Index>(), t_pick in any::<prop::sample::Index>()) {
        let n = g.n();
        let s = s_pick.index(n);
        let t = t_pick.index(n);
        prop_assume!(s != t);
        let p = st_potential(&g, s, t, &SolverOptions::default().with_zeta(1e-12)).unwrap();
        let energy: f64 = g.edges().map(|(u, v, w)| w * (p.values[u] - p.values[v]).powi(2)).sum();
        prop_assert!(close(energy, p.drop(), 1e-8));
        let d = resistive_distances(&g);
        prop_assert!(p.drop() <= d[s][t] + 1e-9);
    }

    #[test]
    fn solver_meets_energy_norm_contract(
        g in graph(),
        zeta in 1e-10f64..1e-2,
        iterative in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let n = g.n();
        let mut b: Vec<f64> = (0..n).map(|i| ((seed >> (i % 64)) & 7) as f64 - 3.5).collect();
        let mean = b.iter().sum::<f64>() / n as f64;
        b.iter_mut().for_each(|x| *x -= mean);
        let method = if iterative { SolveMethod::Iterative } else { SolveMethod::Dense };
        let opts = SolverOptions::default().with_zeta(zeta).with_method(method);
        let lap = assemble_laplacian(&g);
        let x = solve_laplacian(&lap, &b, &opts).unwrap();
        let pinv = laplacian_pseudo_inverse(&g).unwrap();
        let exact: Vec<f64> = (0..n).map(|i| (0..n).map(|j| pinv[(i, j)] * b[j]).sum()).collect();
        let energy = |v: &[f64]| -> f64 { g.edges().map(|(a, c, w)| w * (v[a] - v[c]).powi(2)).sum::<f64>().sqrt() };
        let err: Vec<f64> = x.iter().zip(&exact).map(|(a, e)| a - e).collect();
        prop_assert!(energy(&err) <= zeta * energy(&exact) + 1e-12);
        prop_assert!(x.iter().sum::<f64>().abs() <= 1e-9);
    }

    #[test]
    fn sweep_entries_report_the_smaller_side(g in graph(), seed in any::<u64>()) {
        let n = g.n();
        let potentials: Vec<f64> = (0..n).map(|i| (seed.rotate_left(i as u32 * 7) % 5) as f64).collect();
        if potentials.iter().all(|&p| p == potentials[0]) {
            prop_assert_eq!(sweep_level_sets(&g, &potentials, 0.25).unwrap_err(), Error::DegeneratePotential);
            return Ok(());
        }
        let sweep = sweep_level_sets(&g, &potentials, 0.25).unwrap();
        prop_assert_eq!(sweep.entries.len(), n - 1);
        for (i, entry) in sweep.entries.iter().enumerate() {
            let set = sweep.subset(i);
            let direct = g.cut_stats(&set).unwrap();
            prop_assert!(close(entry.stats.boundary_weight, direct.boundary_weight, 1e-9));
            prop_assert!(close(entry.stats.volume, direct.volume, 1e-9));
            prop_assert!(entry.stats.volume <= g.total_weight() + 1e-9);
        }
        let best = sweep.best();
        let min = sweep.entries.iter().map(|e| e.score).fold(f64::INFINITY, f64::min);
        prop_assert!(sweep.entries[best].score <= min * (1.0 + 1e-9));
    }

    #[test]
    fn lambda2_bound_is_below_the_spectrum(g in graph()) {
        prop_assert!(lambda2_lower_bound(&g).unwrap() <= algebraic_connectivity(&g).unwrap() * (1.0 + 1e-9));
    }

    #[test]
    fn accuracy_selection_round_trips(g in graph(), log_eta in -12.0f64..0.0) {
        let eta = 10f64.powf(log_eta);
        let zeta = required_solver_accuracy(&g, eta).unwrap();
        prop_assert!((1e-14..=0.5).contains(&zeta));
        if zeta > 1e-14 && zeta < 0.5 {
            prop_assert!(close(implied_additive_accuracy(&g, zeta).unwrap(), eta, 1e-12));
        }
    }
}
