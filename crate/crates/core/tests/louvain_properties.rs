// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


use lognull::louvain::{louvain, louvain_levels, LouvainState};
use lognull::models::QualityModel;
use lognull::{compute_stats, Graph, Partition};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_graph() -> impl Strategy<Value = Graph> {
    (2usize..=12)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::bool::weighted(0.35), n * (n - 1) / 2)))
        .prop_filter_map("needs an edge", |(n, bits)| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e).collect();
            (!edges.is_empty()).then(|| Graph::from_simple_edges(n, &edges).unwrap())
        })
}

/// A graph that may have been contracted once, so vertices carry sizes and
/// loops.
fn level_graph() -> impl Strategy<Value = Graph> {
    (random_graph(), any::<bool>(), prop::collection::vec(0usize..5, 12)).prop_map(
        |(g, contract, labels)| {
            if contract {
                g.contract(&Partition::from_assignment(labels[..g.vertex_count()].iter().copied()))
            } else {
                g
            }
        },
    )
}

fn models(p_in: f64, p_out: f64, rate_in: f64, rate_out: f64, mu: f64, gamma: f64) -> [QualityModel; 6] {
    [
        QualityModel::SimpleModularity { resolution: gamma },
        QualityModel::Modularity { resolution: gamma },
        QualityModel::Ppm { p_in, p_out },
        QualityModel::Dcppm { p_in: rate_in, p_out: rate_out },
        QualityModel::Ilfr { mu },
        QualityModel::Ilfrs { mu },
    ]
}

fn all_models() -> impl Strategy<Value = [QualityModel; 6]> {
    (0.01f64..1.0, 0.01f64..1.0, 0.01f64..4.0, 0.01f64..4.0, 0.01f64..0.99, 0.1f64..10.0)
        .prop_map(|(a, b, c, d, e, f)| models(a, b, c, d, e, f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gains_match_recomputation(
        graph in level_graph(),
        models in all_models(),
        labels in prop::collection::vec(0usize..6, 12),
        vertex in 0usize..12,
        target in 0usize..12,
    ) {
        let n = graph.vertex_count();
        let start = Partition::from_assignment(labels[..n].iter().copied());
        let (vertex, target) = (vertex % n, target % n);
        for model in models {
            let state = LouvainState::with_partition(&graph, model, &start).unwrap();
            let gain = state.move_gain(vertex, target).unwrap();
            let before = state.quality();
            let mut moved = state.clone();
            prop_assert_eq!(moved.apply_move(vertex, target).unwrap(), gain);
            let diff = moved.quality() - before;
            let tol = 1e-8 * gain.abs().max(diff.abs()) + 1e-12 * before.abs().max(1.0);
            prop_assert!((gain - diff).abs() <= tol, "{:?}: gain {} vs {}", model, gain, diff);

            let stats = compute_stats(&graph, &moved.partition());
            let slot = moved.community_of(vertex);
            let id = moved.partition().community_of(vertex);
            prop_assert!((moved.community_degree(slot) - stats.community_degrees[id]).abs() < 1e-9);
            prop_assert!((moved.community_internal(slot) - stats.community_internal[id]).abs() < 1e-9);
            prop_assert_eq!(moved.community_size(slot), stats.community_sizes[id]);
            prop_assert!((moved.weight_in() - stats.weight_in).abs() < 1e-9);
            prop_assert!((moved.pairs_in() - stats.pairs_in).abs() < 1e-9);
            prop_assert!((moved.sum_sq_degree() - stats.sum_sq_degree()).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reported_gains_add_up(graph in level_graph(), models in all_models(), seed in any::<u64>()) {
        for model in models {
            let mut state = LouvainState::new(&graph, model).unwrap();
            let before = state.quality();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (_, total) = state.optimize(&mut rng);
            let after = state.quality();
            prop_assert!(total >= 0.0);
            prop_assert!((before + total - after).abs() <= 1e-6, "{:?}", model);
        }
    }

    #[test]
    fn levels_never_lose_quality(graph in random_graph(), models in all_models(), seed in any::<u64>()) {
        for model in models {
            let quality = |p: &Partition| model.evaluate(&compute_stats(&graph, p)).unwrap();
            let mut last = quality(&Partition::singletons(graph.vertex_count()));
            let levels = louvain_levels(&graph, &model, seed).unwrap();
            for p in &levels {
                let q = quality(p);
                prop_assert!(q >= last - 1e-9 * last.abs().max(1.0), "{:?}: {} < {}", model, q, last);
                last = q;
            }
        }
    }

    #[test]
    fn flat_partition_keeps_level_quality(graph in random_graph(), models in all_models(), seed in any::<u64>()) {
        for model in models {
            let flat = louvain(&graph, &model, seed).unwrap();
            let top = graph.contract(&flat);
            let on_top = model.evaluate(&compute_stats(&top, &Partition::singletons(top.vertex_count()))).unwrap();
            let on_base = model.evaluate(&compute_stats(&graph, &flat)).unwrap();
            prop_assert!((on_top - on_base).abs() <= 1e-6);
        }
    }

    #[test]
    fn seeds_determine_result(graph in random_graph(), models in all_models(), seed in any::<u64>()) {
        for model in models {
            prop_assert_eq!(louvain(&graph, &model, seed).unwrap(), louvain(&graph, &model, seed).unwrap());
        }
    }
}
