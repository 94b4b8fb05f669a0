//! Maze corpus checked against independent oracles: value iteration for
//! the optimum and a hand-rolled pair classifier for the taxonomy.

use std::collections::BTreeSet;

use xcsmd::corpus::{self, BENCHMARKS};
use xcsmd::maze::{AliasGroup, Cell, SquareInfo};
use xcsmd::{AliasKind, Direction, Maze, Pos};

fn bundled(key: &str) -> Maze {
    corpus::find(key)
        .expect("bundled maze")
        .maze()
        .expect("parses")
}

/// Steps-to-food by Bellman iteration over the simulator's own `step`.
fn value_iteration(maze: &Maze) -> Vec<(Pos, f64)> {
    let cells = maze.empty_cells();
    let index = |p: Pos| cells.iter().position(|&q| q == p);
    let mut v = vec![f64::INFINITY; cells.len()];
    loop {
        let mut changed = false;
        for (i, &p) in cells.iter().enumerate() {
            let mut best = f64::INFINITY;
            for dir in Direction::ALL {
                let out = maze.step(p, dir, 1.0);
                let cost = if out.at_food {
                    1.0
                } else if out.pos == p {
                    f64::INFINITY
                } else {
                    1.0 + index(out.pos).map_or(f64::INFINITY, |j| v[j])
                };
                best = best.min(cost);
            }
            if best < v[i] {
                v[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    cells.into_iter().zip(v).collect()
}

fn pair_kind(a: &SquareInfo, b: &SquareInfo) -> AliasKind {
    let shared = a
        .optimal_actions
        .iter()
        .any(|x| b.optimal_actions.contains(x));
    match (a.distance == b.distance, shared) {
        (true, true) => AliasKind::Pseudo,
        (false, true) => AliasKind::TypeI,
        (false, false) => AliasKind::TypeII,
        (true, false) => AliasKind::TypeIII,
    }
}

fn pair_kinds(g: &AliasGroup) -> Vec<AliasKind> {
    let mut out = Vec::new();
    for i in 0..g.squares.len() {
        for j in i + 1..g.squares.len() {
            out.push(pair_kind(&g.squares[i], &g.squares[j]));
        }
    }
    out.sort();
    out
}

fn group_shapes(maze: &Maze) -> Vec<(usize, Vec<AliasKind>)> {
    let report = maze.classify_aliasing().expect("reachable");
    let mut shapes: Vec<_> = report
        .shared()
        .map(|g| (g.squares.len(), pair_kinds(g)))
        .collect();
    shapes.sort();
    shapes
}

#[test]
fn value_iteration_agrees_with_bfs_optimum() {
    for b in &BENCHMARKS {
        let maze = b.maze().unwrap();
        let vi = value_iteration(&maze);
        let mean = vi.iter().map(|(_, d)| d).sum::<f64>() / vi.len() as f64;
        let bfs = maze.optimal_average_steps().unwrap();
        assert!((mean - bfs).abs() < 1e-12, "{}: {mean} vs {bfs}", b.key);
    }
}

#[test]
fn optima_round_to_published_values() {
    for b in &BENCHMARKS {
        let exact = b.maze().unwrap().optimal_average_steps().unwrap();
        assert!(
            corpus::matches_published(exact, b.optimum),
            "{}: {exact:.4} does not round to {}",
            b.key,
            b.optimum
        );
    }
}

#[test]
fn exact_fractions() {
    let cases = [
        ("woods1", 27, 16),
        ("littman57", 52, 14),
        ("woods101", 29, 10),
        ("woods102", 86, 26),
    ];
    for (key, sum, n) in cases {
        let maze = bundled(key);
        assert_eq!(maze.empty_cells().len(), n, "{key}");
        let got = maze.optimal_average_steps().unwrap();
        assert!((got - sum as f64 / n as f64).abs() < 1e-12, "{key}");
    }
}

#[test]
fn taxonomy_labels() {
    for b in &BENCHMARKS {
        let report = b.maze().unwrap().classify_aliasing().unwrap();
        assert_eq!(report.maze_kind, b.kind, "{}", b.key);
    }
}

#[test]
fn woods1_is_markov() {
    let report = bundled("woods1").classify_aliasing().unwrap();
    assert!(report.is_markov());
    assert_eq!(report.shared().count(), 0);
}

#[test]
fn woods101_pairs() {
    let shapes = group_shapes(&bundled("woods101"));
    assert_eq!(
        shapes,
        vec![(2, vec![AliasKind::Pseudo]), (2, vec![AliasKind::TypeIII]),]
    );
}

#[test]
fn woods101_type_iii_squares_share_distance() {
    let report = bundled("woods101").classify_aliasing().unwrap();
    let g = report
        .shared()
        .find(|g| g.kind == AliasKind::TypeIII)
        .unwrap();
    assert_eq!(g.squares[0].distance, g.squares[1].distance);
}

#[test]
fn littman57_has_three_type_i_states_and_six_plain_ones() {
    let maze = bundled("littman57");
    let report = maze.classify_aliasing().unwrap();
    let aliased: Vec<_> = report.shared().collect();
    assert_eq!(aliased.len(), 3);
    assert!(aliased.iter().all(|g| g.kind == AliasKind::TypeI));
    let plain: BTreeSet<_> = maze
        .empty_cells()
        .into_iter()
        .filter(|&p| report.group_of(p).is_none_or(|g| !g.is_aliasing()))
        .map(|p| maze.sense(p).unwrap())
        .collect();
    assert_eq!(plain.len(), 6);
}

#[test]
fn miyazaki_a_has_four_type_i_pairs() {
    let shapes = group_shapes(&bundled("miyazakiA"));
    assert_eq!(shapes, vec![(2, vec![AliasKind::TypeI]); 4]);
}

#[test]
fn type_ii_mazes_have_one_pair() {
    for key in ["maze7", "mazeF4"] {
        let shapes = group_shapes(&bundled(key));
        assert_eq!(shapes, vec![(2, vec![AliasKind::TypeII])], "{key}");
    }
}

#[test]
fn woods101half_has_one_four_square_state() {
    let report = bundled("woods101half").classify_aliasing().unwrap();
    let aliasing: Vec<_> = report.shared().filter(|g| g.is_aliasing()).collect();
    assert_eq!(aliasing.len(), 1);
    assert_eq!(aliasing[0].squares.len(), 4);
    assert_eq!(aliasing[0].kind, AliasKind::TypeIII);
}

#[test]
fn woods102_has_four_and_two_square_states() {
    let report = bundled("woods102").classify_aliasing().unwrap();
    let mut sizes: Vec<_> = report
        .shared()
        .filter(|g| g.kind == AliasKind::TypeIII)
        .map(|g| g.squares.len())
        .collect();
    sizes.sort();
    assert_eq!(sizes, vec![2, 4]);
}

#[test]
fn maze10_state_structure() {
    use AliasKind::*;
    let maze = bundled("maze10");
    let shapes = group_shapes(&maze);
    assert_eq!(
        shapes,
        vec![
            (2, vec![TypeII]),
            (2, vec![TypeII]),
            (3, vec![Pseudo, TypeI, TypeI]),
            (3, vec![Pseudo, TypeI, TypeI]),
            (3, vec![TypeI, TypeII, TypeIII]),
        ]
    );
    // one pseudo/type I state holds the square farthest from food
    let report = maze.classify_aliasing().unwrap();
    let far = report
        .groups
        .iter()
        .flat_map(|g| g.squares.iter())
        .map(|s| s.distance)
        .max()
        .unwrap();
    assert!(report
        .shared()
        .filter(|g| pair_kinds(g).contains(&Pseudo))
        .any(|g| g.squares.iter().any(|s| s.distance == far)));
}

#[test]
fn every_empty_cell_reaches_food() {
    for b in &BENCHMARKS {
        let maze = b.maze().unwrap();
        let vi = value_iteration(&maze);
        assert!(vi.iter().all(|(_, d)| d.is_finite()), "{}", b.key);
        assert_eq!(maze.count(Cell::Food), 1, "{}", b.key);
    }
}
