//! The nine bundled benchmark mazes and their published reference numbers.

use crate::maze::{AliasKind, Maze, MazeError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Benchmark {
    /// File stem and CLI name.
    pub key: &'static str,
    pub display: &'static str,
    pub text: &'static str,
    /// Published mean shortest path to food.
    pub optimum: f64,
    pub kind: AliasKind,
    /// Population cap used for both learners.
    pub population: usize,
    /// Published final performance of the memory learner.
    pub published: f64,
    /// Acceptance ceiling for the memory learner's final mean.
    pub ceiling: f64,
    /// Step cap used for the plain XCS baseline.
    pub baseline_mes: usize,
    /// Published final performance of plain XCS; `None` means it failed.
    pub baseline_published: Option<f64>,
}

impl Benchmark {
    pub fn maze(&self) -> Result<Maze, MazeError> {
        Maze::parse(self.key, self.text)
    }
}

// 3.14 below is a step count, not an approximation of pi
#[allow(clippy::approx_constant)]
pub const BENCHMARKS: [Benchmark; 9] = [
    Benchmark {
        key: "woods1",
        display: "Woods1",
        text: include_str!("../mazes/woods1.txt"),
        optimum: 1.6875,
        kind: AliasKind::NonAliasing,
        population: 800,
        published: 1.72,
        ceiling: 1.85,
        baseline_mes: 100,
        baseline_published: Some(1.72),
    },
    Benchmark {
        key: "miyazakiA",
        display: "MiyazakiA",
        text: include_str!("../mazes/miyazakiA.txt"),
        optimum: 3.05,
        kind: AliasKind::TypeI,
        population: 2400,
        published: 3.08,
        ceiling: 3.25,
        baseline_mes: 100,
        baseline_published: Some(3.16),
    },
    Benchmark {
        key: "littman57",
        display: "Littman57",
        text: include_str!("../mazes/littman57.txt"),
        optimum: 3.71,
        kind: AliasKind::TypeI,
        population: 1600,
        published: 3.95,
        ceiling: 4.20,
        baseline_mes: 100,
        baseline_published: Some(4.94),
    },
    Benchmark {
        key: "maze7",
        display: "Maze7",
        text: include_str!("../mazes/maze7.txt"),
        optimum: 4.33,
        kind: AliasKind::TypeII,
        population: 1600,
        published: 4.33,
        ceiling: 4.55,
        baseline_mes: 20,
        baseline_published: None,
    },
    Benchmark {
        key: "mazeF4",
        display: "MazeF4",
        text: include_str!("../mazes/mazeF4.txt"),
        optimum: 4.50,
        kind: AliasKind::TypeII,
        population: 1600,
        published: 4.55,
        ceiling: 4.80,
        baseline_mes: 20,
        baseline_published: None,
    },
    Benchmark {
        key: "woods101",
        display: "Woods101",
        text: include_str!("../mazes/woods101.txt"),
        optimum: 2.90,
        kind: AliasKind::TypeIII,
        population: 800,
        published: 3.00,
        ceiling: 3.15,
        baseline_mes: 20,
        baseline_published: None,
    },
    Benchmark {
        key: "woods101half",
        display: "Woods101.5",
        text: include_str!("../mazes/woods101half.txt"),
        optimum: 3.10,
        kind: AliasKind::TypeIII,
        population: 2400,
        published: 3.14,
        ceiling: 3.35,
        baseline_mes: 20,
        baseline_published: None,
    },
    Benchmark {
        key: "woods102",
        display: "Woods102",
        text: include_str!("../mazes/woods102.txt"),
        optimum: 3.308,
        kind: AliasKind::TypeIII,
        population: 2800,
        published: 3.28,
        ceiling: 3.55,
        baseline_mes: 20,
        baseline_published: None,
    },
    Benchmark {
        key: "maze10",
        display: "Maze10",
        text: include_str!("../mazes/maze10.txt"),
        optimum: 5.11,
        kind: AliasKind::TypeIII,
        population: 2800,
        published: 5.60,
        ceiling: 6.10,
        baseline_mes: 20,
        baseline_published: None,
    },
];

/// Looks up a bundled benchmark by key, ignoring ASCII case.
pub fn find(key: &str) -> Option<&'static Benchmark> {
    BENCHMARKS.iter().find(|b| b.key.eq_ignore_ascii_case(key))
}

/// Decimal places the published optimum is quoted with.
pub fn published_places(value: f64) -> usize {
    let s = format!("{value}");
    s.split_once('.').map_or(0, |(_, frac)| frac.len())
}

/// True when `exact` rounds to the published figure.
pub fn matches_published(exact: f64, published: f64) -> bool {
    let places = published_places(published).max(2) as i32;
    let scale = 10f64.powi(places);
    ((exact * scale).round() - (published * scale).round()).abs() < 0.5
}
