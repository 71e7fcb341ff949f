use rpig_core::game::{self, lazy, rng, Game, Node, Strategy, DEFAULT_NODE_BUDGET};
use rpig_core::model::{Block, CapacityLaw, OffspringLaw, Player, PrimitiveDistribution};
use rpig_core::presets::{self, PresetId};

fn ex1(l: f64, q: f64) -> PrimitiveDistribution {
    presets::preset(&PresetId::GeometricEscape { l, q }).unwrap()
}

/// Small trees with capacities on a finite grid.
fn grid_model(q: f64) -> PrimitiveDistribution {
    let cap = CapacityLaw::FiniteDiscrete(vec![
        (0.0, 0.2),
        (0.25, 0.2),
        (0.5, 0.2),
        (0.75, 0.2),
        (1.0, 0.2),
    ]);
    let off = OffspringLaw::FinitePmf(vec![0.25, 0.25, 0.3, 0.2]);
    PrimitiveDistribution::new(vec![
        Block::new(q, Player::I, off.clone(), cap.clone(), cap.clone()),
        Block::new(1.0 - q, Player::II, off, cap.clone(), cap),
    ])
    .unwrap()
}

fn node(player: Player, capacity: f64, first_child: u32, num_children: u32, depth: u32) -> Node {
    Node {
        player,
        capacity,
        offspring: num_children,
        first_child,
        num_children,
        depth,
    }
}

/// Every pure strategy of `owner`, enumerated as odometer states.
fn all_strategies(g: &Game, owner: Player) -> Vec<Strategy> {
    let nodes: Vec<usize> = g.decision_nodes(owner).collect();
    let mut out = Vec::new();
    let mut digits = vec![1u32; nodes.len()];
    loop {
        let mut s = Strategy::new(owner);
        for (n, d) in nodes.iter().zip(&digits) {
            s.choice.insert(*n, *d);
        }
        out.push(s);
        let mut pos = 0;
        loop {
            if pos == nodes.len() {
                return out;
            }
            if digits[pos] < g.node(nodes[pos]).num_children {
                digits[pos] += 1;
                break;
            }
            digits[pos] = 1;
            pos += 1;
        }
    }
}

fn brute_force_value(g: &Game) -> f64 {
    let s2 = all_strategies(g, Player::II);
    all_strategies(g, Player::I)
        .iter()
        .map(|a| {
            s2.iter()
                .map(|b| game::payoff(g, a, b).unwrap())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn strategy_count(g: &Game, owner: Player) -> u64 {
    g.decision_nodes(owner)
        .map(|i| u64::from(g.node(i).num_children))
        .product()
}

fn small_games(count: usize) -> Vec<Game> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count {
        let p = grid_model(0.3 + 0.4 * ((seed % 7) as f64 / 6.0));
        let g = game::sample_game(&p, seed, 4, 10_000).unwrap();
        seed += 1;
        let decisions = g.decision_nodes(Player::I).count() + g.decision_nodes(Player::II).count();
        if decisions <= 12
            && strategy_count(&g, Player::I) * strategy_count(&g, Player::II) <= 1 << 14
        {
            out.push(g);
        }
    }
    out
}

#[test]
fn one_step_minimax() {
    let single = Game::from_nodes(vec![node(Player::I, 0.4, 0, 0, 0)], 3, 0, 0).unwrap();
    assert_eq!(game::subgame_values(&single).root(), 0.4);
    assert!(
        game::simple_strategy(&single, &game::subgame_values(&single), Player::I, 0.1)
            .choice
            .is_empty()
    );
    for (player, want) in [(Player::II, 0.3), (Player::I, 0.7)] {
        let g = Game::from_nodes(
            vec![
                node(player, 1.0, 1, 2, 0),
                node(Player::I, 0.3, 0, 0, 1),
                node(Player::I, 0.7, 0, 0, 1),
            ],
            1,
            0,
            0,
        )
        .unwrap();
        assert_eq!(game::subgame_values(&g).root(), want);
    }
}

#[test]
fn backward_induction_equals_brute_force() {
    for g in small_games(1000) {
        assert_eq!(game::subgame_values(&g).root(), brute_force_value(&g));
    }
}

#[test]
fn payoff_bounded_by_root_and_greedy_secures_value() {
    for g in small_games(200) {
        let values = game::subgame_values(&g);
        let greedy = game::simple_strategy(&g, &values, Player::I, values.root());
        for b in all_strategies(&g, Player::II) {
            let u = game::payoff(&g, &greedy, &b).unwrap();
            assert!(u <= g.node(0).capacity);
            assert!(u >= values.root());
        }
    }
}

#[test]
fn incomplete_strategy_is_reported() {
    let g = Game::from_nodes(
        vec![
            node(Player::I, 1.0, 1, 2, 0),
            node(Player::I, 0.3, 0, 0, 1),
            node(Player::I, 0.7, 0, 0, 1),
        ],
        1,
        0,
        0,
    )
    .unwrap();
    let err = game::payoff(&g, &Strategy::new(Player::I), &Strategy::new(Player::II));
    assert_eq!(err, Err(rpig_core::Error::IncompleteStrategy(0)));
}

#[test]
fn truncation_is_monotone() {
    let p = ex1(0.6, 0.7);
    let q = grid_model(0.5);
    for seed in 0..300 {
        for model in [&p, &q] {
            let mut last = f64::INFINITY;
            for t in 0..8 {
                let v = game::subgame_values(
                    &game::sample_game(model, seed, t, DEFAULT_NODE_BUDGET).unwrap(),
                )
                .root();
                assert!(v <= last);
                last = v;
            }
        }
    }
}

#[test]
fn arena_fuzz() {
    for seed in 0..10_000u64 {
        let p = match seed % 3 {
            0 => ex1(
                0.5 + 0.4 * (seed % 11) as f64 / 10.0,
                (seed % 5) as f64 / 4.0,
            ),
            1 => presets::preset(&PresetId::NaryUniform {
                n: 2 + (seed % 3) as u32,
                q: 0.5,
            })
            .unwrap(),
            _ => grid_model(0.5),
        };
        let g = game::sample_game(&p, seed, 5, DEFAULT_NODE_BUDGET).unwrap();
        let again = Game::from_nodes(g.nodes().to_vec(), 5, seed, g.model_hash()).unwrap();
        assert_eq!(again, g);
    }
}

#[test]
fn nary_internal_nodes_have_n_children() {
    let p = presets::preset(&PresetId::NaryUniform { n: 3, q: 0.7 }).unwrap();
    let g = game::sample_game(&p, 9, 4, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(g.node(0).depth, 0);
    for n in g.nodes() {
        assert_eq!(n.num_children, if n.depth < 4 { 3 } else { 0 });
    }
}

#[test]
fn root_offspring_mean() {
    let p = ex1(0.6, 0.5);
    let n = 100_000;
    let (mut s, mut s2) = (0.0, 0.0);
    for seed in 0..n {
        let x = f64::from(
            game::sample_game(&p, seed, 0, 10)
                .unwrap()
                .node(0)
                .offspring,
        );
        s += x;
        s2 += x * x;
    }
    let mean = s / n as f64;
    let sd = (s2 / n as f64 - mean * mean).sqrt();
    assert!(
        (mean - 1.5).abs() < 3.0 * sd / (n as f64).sqrt(),
        "mean {mean}"
    );
}

#[test]
fn optimal_subtree_structure() {
    let p = ex1(0.75, 0.5);
    let mut checked = 0;
    for seed in 0..400 {
        let g = game::sample_game(&p, seed, 6, DEFAULT_NODE_BUDGET).unwrap();
        let values = game::subgame_values(&g);
        if values.root() < 1.0 {
            assert!(game::optimal_subtree(&g, &values, 1.0).is_err());
            continue;
        }
        checked += 1;
        let inside = game::optimal_subtree(&g, &values, 1.0).unwrap();
        for (i, n) in g.nodes().iter().enumerate().filter(|(i, _)| inside[*i]) {
            if n.depth < 6 {
                assert!(!n.is_end(), "end node {i} inside T*");
            }
            let kept = n.children().filter(|c| inside[*c]).count() as u32;
            match n.player {
                Player::I => assert!(n.is_end() || kept >= 1),
                Player::II => assert_eq!(kept, n.num_children),
            }
        }
    }
    assert!(checked > 50);

    let all_ii = presets::preset(&PresetId::NaryUniform { n: 2, q: 0.0 }).unwrap();
    let g = game::sample_game(&all_ii, 3, 3, DEFAULT_NODE_BUDGET).unwrap();
    let values = game::subgame_values(&g);
    let k = g
        .nodes()
        .iter()
        .map(|n| n.capacity)
        .fold(f64::INFINITY, f64::min);
    assert!(game::optimal_subtree(&g, &values, k)
        .unwrap()
        .iter()
        .all(|b| *b));
}

#[test]
fn k_optimal_iff_inside_subtree() {
    let mut seen = 0;
    for g in small_games(300) {
        let values = game::subgame_values(&g);
        let k = values.root();
        if k <= 0.0 {
            continue;
        }
        let inside = game::optimal_subtree(&g, &values, k).unwrap();
        let opponents = all_strategies(&g, Player::II);
        for a in all_strategies(&g, Player::I) {
            let k_optimal = opponents
                .iter()
                .all(|b| game::payoff(&g, &a, b).unwrap() >= k);
            // Leaves T* only if some reachable I node inside T* picks a child outside.
            let leaves = opponents.iter().any(|b| {
                let mut at = 0;
                loop {
                    let n = g.node(at);
                    if n.is_end() {
                        return false;
                    }
                    let s = if n.player == Player::I { &a } else { b };
                    let next = n.first_child as usize + s.choice[&at] as usize - 1;
                    if !inside[next] {
                        return true;
                    }
                    at = next;
                }
            });
            assert_eq!(k_optimal, !leaves);
            seen += 1;
        }
    }
    assert!(seen > 1000);
}

#[test]
fn conditional_game_preserves_value() {
    let p = ex1(0.6, 0.9);
    let mut accepted = 0;
    for seed in 0..20_000 {
        let g = game::sample_game(&p, seed, 12, DEFAULT_NODE_BUDGET).unwrap();
        let values = game::subgame_values(&g);
        if values.root() < 1.0 {
            continue;
        }
        accepted += 1;
        let star = game::conditional_game(&g, &values, 1.0).unwrap();
        Game::from_nodes(star.nodes().to_vec(), 12, seed, star.model_hash()).unwrap();
        assert_eq!(game::subgame_values(&star).root(), values.root());
        // Restricting again changes nothing.
        let again = game::conditional_game(&star, &game::subgame_values(&star), 1.0).unwrap();
        assert_eq!(again, star);
        if accepted == 1000 {
            break;
        }
    }
    assert_eq!(accepted, 1000);
}

#[test]
fn avoidance_game_rules() {
    let all_i = ex1(0.7, 1.0 - 1e-12);
    let p = ex1(0.7, 0.6);
    for seed in 0..300 {
        let g = game::sample_game(&p, seed, 6, DEFAULT_NODE_BUDGET).unwrap();
        let a = game::avoidance_game(&g);
        let (v, va) = (game::subgame_values(&g), game::subgame_values(&a));
        assert!(v.values.iter().zip(&va.values).all(|(x, y)| y <= x));
        let gi = game::sample_game(&all_i, seed, 6, DEFAULT_NODE_BUDGET).unwrap();
        if gi.nodes().iter().all(|n| n.player == Player::I) {
            assert_eq!(game::avoidance_game(&gi), gi);
        }
    }
}

#[test]
fn simple_strategy_of_player_one_is_k_optimal() {
    let p = ex1(0.75, 0.5);
    let mut state = 0x1234_5678u64;
    let mut checked = 0;
    for seed in 0..200 {
        let g = game::sample_game(&p, seed, 6, DEFAULT_NODE_BUDGET).unwrap();
        let values = game::subgame_values(&g);
        if values.root() < 1.0 {
            continue;
        }
        checked += 1;
        let s = game::simple_strategy(&g, &values, Player::I, 1.0);
        for _ in 0..1000 {
            let mut b = Strategy::new(Player::II);
            for i in g.decision_nodes(Player::II) {
                state = rng::mix64(state);
                b.choice
                    .insert(i, 1 + (state % u64::from(g.node(i).num_children)) as u32);
            }
            assert!(game::payoff(&g, &s, &b).unwrap() >= 1.0);
        }
    }
    assert!(checked > 20);
}

#[test]
fn simple_strategy_of_player_two_can_fail() {
    // II-only chain: each internal node has a leaf of capacity 1 first and the
    // next internal node second; the last node has capacity 0.
    for depth in 1..4u32 {
        let mut arena = Vec::new();
        for d in 0..depth {
            let idx = arena.len() as u32;
            arena.push(node(Player::II, 1.0, idx + 1, 2, d));
            arena.push(node(Player::II, 1.0, 0, 0, d + 1));
        }
        arena.push(node(Player::II, 0.0, 0, 0, depth));
        let g = Game::from_nodes(arena, depth, 0, 0).unwrap();
        let values = game::subgame_values(&g);
        assert_eq!(values.root(), 0.0);
        let zero = game::ValueAnnotation {
            values: vec![0.0; g.len()],
        };
        let s = game::simple_strategy(&g, &zero, Player::II, 0.0);
        let best = game::values_against(&g, &s).unwrap().root();
        assert_eq!(best, 1.0);
    }
}

#[test]
fn lazy_evaluator_matches_materialized_game() {
    for (p, k) in [
        (ex1(0.75, 0.3), 1.0),
        (grid_model(0.5), 0.5),
        (ex1(0.6, 0.8), 1.0),
    ] {
        for seed in 0..300 {
            for t in [0, 1, 4, 7] {
                let g = game::sample_game(&p, seed, t, DEFAULT_NODE_BUDGET).unwrap();
                let values = game::subgame_values(&g);
                let lazy_reach = lazy::root_value_at_least(&p, seed, t, k, usize::MAX).unwrap();
                assert_eq!(lazy_reach, values.root() >= k);

                let root = lazy::conditional_root(&p, seed, t, k, usize::MAX).unwrap();
                if values.root() >= k {
                    let star = game::conditional_game(&g, &values, k).unwrap();
                    assert_eq!(root, Some((star.node(0).player, star.node(0).offspring)));
                } else {
                    assert_eq!(root, None);
                }

                let zero = game::ValueAnnotation {
                    values: vec![0.0; g.len()],
                };
                let s = game::simple_strategy(&g, &zero, Player::II, 0.0);
                let wins = game::values_against(&g, &s).unwrap().root() >= k;
                assert_eq!(
                    wins,
                    lazy::wins_against_first_child(&p, seed, t, k, usize::MAX).unwrap()
                );
            }
        }
    }
}
