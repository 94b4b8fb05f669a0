//! Toroidal grid mazes: parsing, 16-bit sensing, movement, and ground-truth
//! oracles (shortest paths to food and the aliasing taxonomy).
//!
//! Neighbours and actions share one fixed order everywhere in the crate:
//! north first, then clockwise (N, NE, E, SE, S, SW, W, NW).

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MazeError {
    #[error("maze text is empty")]
    EmptyInput,
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedGrid {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown cell character {ch:?} at row {row}, column {col}")]
    UnknownCell { row: usize, col: usize, ch: char },
    #[error("maze has no food cell")]
    NoFood,
    #[error("maze has no empty cell")]
    NoEmpty,
    #[error("position {0} is not an empty cell")]
    PosNotEmpty(Pos),
    #[error("food is unreachable from {0}")]
    Unreachable(Pos),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Empty,
    Obstacle,
    Food,
}

impl Cell {
    /// Two-bit sensor code.
    fn code(self) -> u16 {
        match self {
            Cell::Empty => 0b00,
            Cell::Obstacle => 0b01,
            Cell::Food => 0b11,
        }
    }

    fn symbol(self) -> char {
        match self {
            Cell::Empty => '.',
            Cell::Obstacle => 'T',
            Cell::Food => 'F',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub row: usize,
    pub col: usize,
}

impl Pos {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// One of the eight compass moves. The discriminant is the action code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    N = 0,
    NE = 1,
    E = 2,
    SE = 3,
    S = 4,
    SW = 5,
    W = 6,
    NW = 7,
}

impl Direction {
    pub const COUNT: usize = 8;
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::NE,
        Direction::E,
        Direction::SE,
        Direction::S,
        Direction::SW,
        Direction::W,
        Direction::NW,
    ];

    pub fn from_index(index: usize) -> Option<Direction> {
        Self::ALL.get(index).copied()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// (row delta, column delta).
    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::N => (-1, 0),
            Direction::NE => (-1, 1),
            Direction::E => (0, 1),
            Direction::SE => (1, 1),
            Direction::S => (1, 0),
            Direction::SW => (1, -1),
            Direction::W => (0, -1),
            Direction::NW => (-1, -1),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// What the agent perceives: two bits per neighbour, 16 bits in total.
///
/// The string form reads left to right in neighbour order, so the first
/// two characters describe the northern cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sensation(u16);

impl Sensation {
    pub const LEN: usize = 16;

    pub const fn from_bits(bits: u16) -> Self {
        Self(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    /// Cell kind seen in direction `dir`.
    pub fn neighbor(self, dir: Direction) -> Option<Cell> {
        let shift = 14 - 2 * dir.index();
        match (self.0 >> shift) & 0b11 {
            0b00 => Some(Cell::Empty),
            0b01 => Some(Cell::Obstacle),
            0b11 => Some(Cell::Food),
            _ => None,
        }
    }
}

impl fmt::Display for Sensation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016b}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid sensation string {0:?}")]
pub struct ParseSensationError(pub String);

impl FromStr for Sensation {
    type Err = ParseSensationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != Self::LEN || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(ParseSensationError(s.to_string()));
        }
        let bits = u16::from_str_radix(s, 2).map_err(|_| ParseSensationError(s.to_string()))?;
        Ok(Self(bits))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub pos: Pos,
    pub reward: f64,
    pub at_food: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Maze {
    name: String,
    width: usize,
    height: usize,
    cells: Vec<Cell>,
}

impl Maze {
    /// Parses a rectangular block of `T` (obstacle), `F` (food) and `.` or
    /// space (empty). Trailing blank lines are ignored.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Maze, MazeError> {
        let rows: Vec<&str> = text
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .skip_while(|l| l.trim().is_empty())
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        if rows.is_empty() {
            return Err(MazeError::EmptyInput);
        }
        let width = rows[0].chars().count();
        let mut cells = Vec::with_capacity(width * rows.len());
        for (row, line) in rows.iter().enumerate() {
            let found = line.chars().count();
            if found != width {
                return Err(MazeError::RaggedGrid {
                    row,
                    expected: width,
                    found,
                });
            }
            for (col, ch) in line.chars().enumerate() {
                cells.push(match ch {
                    'T' => Cell::Obstacle,
                    'F' => Cell::Food,
                    '.' | ' ' => Cell::Empty,
                    _ => return Err(MazeError::UnknownCell { row, col, ch }),
                });
            }
        }
        if !cells.contains(&Cell::Food) {
            return Err(MazeError::NoFood);
        }
        if !cells.contains(&Cell::Empty) {
            return Err(MazeError::NoEmpty);
        }
        Ok(Maze {
            name: name.into(),
            width,
            height: rows.len(),
            cells,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell(&self, pos: Pos) -> Cell {
        self.cells[pos.row * self.width + pos.col]
    }

    /// Returns a copy with one cell replaced. Used by tests and tooling.
    pub fn with_cell(&self, pos: Pos, cell: Cell) -> Maze {
        let mut out = self.clone();
        out.cells[pos.row * self.width + pos.col] = cell;
        out
    }

    /// Neighbouring position with toroidal wrap.
    pub fn neighbor(&self, pos: Pos, dir: Direction) -> Pos {
        let (dr, dc) = dir.offset();
        let row = (pos.row as isize + dr).rem_euclid(self.height as isize) as usize;
        let col = (pos.col as isize + dc).rem_euclid(self.width as isize) as usize;
        Pos { row, col }
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        (0..self.height).flat_map(move |row| (0..self.width).map(move |col| Pos { row, col }))
    }

    pub fn empty_cells(&self) -> Vec<Pos> {
        self.positions()
            .filter(|&p| self.cell(p) == Cell::Empty)
            .collect()
    }

    pub fn count(&self, kind: Cell) -> usize {
        self.cells.iter().filter(|&&c| c == kind).count()
    }

    pub fn sense(&self, pos: Pos) -> Result<Sensation, MazeError> {
        if self.cell(pos) != Cell::Empty {
            return Err(MazeError::PosNotEmpty(pos));
        }
        Ok(self.sense_unchecked(pos))
    }

    fn sense_unchecked(&self, pos: Pos) -> Sensation {
        let bits = Direction::ALL.iter().fold(0u16, |acc, &dir| {
            (acc << 2) | self.cell(self.neighbor(pos, dir)).code()
        });
        Sensation(bits)
    }

    /// Moves the agent one step. Bumping into an obstacle leaves it in place;
    /// the time step still counts.
    pub fn step(&self, pos: Pos, dir: Direction, food_reward: f64) -> StepOutcome {
        let target = self.neighbor(pos, dir);
        match self.cell(target) {
            Cell::Obstacle => StepOutcome {
                pos,
                reward: 0.0,
                at_food: false,
            },
            Cell::Food => StepOutcome {
                pos: target,
                reward: food_reward,
                at_food: true,
            },
            Cell::Empty => StepOutcome {
                pos: target,
                reward: 0.0,
                at_food: false,
            },
        }
    }

    /// Uniformly random empty (non-food, non-obstacle) cell.
    pub fn random_empty_cell<R: Rng + ?Sized>(&self, rng: &mut R) -> Pos {
        let n = self.count(Cell::Empty);
        let k = rng.gen_range(0..n);
        self.positions()
            .filter(|&p| self.cell(p) == Cell::Empty)
            .nth(k)
            .expect("maze invariant: at least one empty cell")
    }

    /// Minimal number of steps from every cell to the nearest food, by a
    /// reverse breadth-first search. `None` for obstacles and unreachable cells.
    pub fn food_distances(&self) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.cells.len()];
        let mut queue = VecDeque::new();
        for p in self.positions().filter(|&p| self.cell(p) == Cell::Food) {
            dist[p.row * self.width + p.col] = Some(0);
            queue.push_back(p);
        }
        while let Some(p) = queue.pop_front() {
            let d = dist[p.row * self.width + p.col].unwrap_or(0);
            for dir in Direction::ALL {
                // predecessor: a cell whose move in `dir` lands on p
                let (dr, dc) = dir.offset();
                let row = (p.row as isize - dr).rem_euclid(self.height as isize) as usize;
                let col = (p.col as isize - dc).rem_euclid(self.width as isize) as usize;
                let idx = row * self.width + col;
                if self.cells[idx] == Cell::Empty && dist[idx].is_none() {
                    dist[idx] = Some(d + 1);
                    queue.push_back(Pos { row, col });
                }
            }
        }
        dist
    }

    fn checked_distances(&self) -> Result<Vec<Option<u32>>, MazeError> {
        let dist = self.food_distances();
        if let Some(p) = self
            .empty_cells()
            .into_iter()
            .find(|p| dist[p.row * self.width + p.col].is_none())
        {
            return Err(MazeError::Unreachable(p));
        }
        Ok(dist)
    }

    /// Mean shortest path length to food over all empty cells.
    pub fn optimal_average_steps(&self) -> Result<f64, MazeError> {
        let dist = self.checked_distances()?;
        let empty = self.empty_cells();
        let total: u32 = empty
            .iter()
            .map(|p| dist[p.row * self.width + p.col].unwrap_or(0))
            .sum();
        Ok(f64::from(total) / empty.len() as f64)
    }

    /// Actions that move from `pos` one step closer to food.
    fn optimal_actions(&self, pos: Pos, dist: &[Option<u32>]) -> Vec<Direction> {
        let here = dist[pos.row * self.width + pos.col];
        Direction::ALL
            .into_iter()
            .filter(|&dir| {
                let t = self.neighbor(pos, dir);
                self.cell(t) != Cell::Obstacle
                    && matches!((here, dist[t.row * self.width + t.col]), (Some(a), Some(b)) if b + 1 == a)
            })
            .collect()
    }

    /// Groups empty squares by sensation and labels each group with the
    /// (distance, optimal action) taxonomy.
    pub fn classify_aliasing(&self) -> Result<AliasingReport, MazeError> {
        let dist = self.checked_distances()?;
        let mut by_sensation: BTreeMap<Sensation, Vec<SquareInfo>> = BTreeMap::new();
        for pos in self.empty_cells() {
            let info = SquareInfo {
                pos,
                distance: dist[pos.row * self.width + pos.col].unwrap_or(0),
                optimal_actions: self.optimal_actions(pos, &dist),
            };
            by_sensation
                .entry(self.sense_unchecked(pos))
                .or_default()
                .push(info);
        }
        let groups: Vec<AliasGroup> = by_sensation
            .into_iter()
            .map(|(sensation, squares)| {
                let mut kind = AliasKind::NonAliasing;
                for (i, a) in squares.iter().enumerate() {
                    for b in &squares[i + 1..] {
                        kind = kind.max(AliasKind::of_pair(a, b));
                    }
                }
                AliasGroup {
                    sensation,
                    squares,
                    kind,
                }
            })
            .collect();
        let maze_kind = groups
            .iter()
            .map(|g| g.kind)
            .filter(|&k| k != AliasKind::Pseudo)
            .max()
            .unwrap_or(AliasKind::NonAliasing);
        let conglomerates = self.conglomerates(&groups);
        let clones = clone_pairs(&conglomerates);
        Ok(AliasingReport {
            groups,
            maze_kind,
            conglomerates,
            clones,
        })
    }

    /// Connected (8-neighbour) clusters of two or more true aliasing squares.
    fn conglomerates(&self, groups: &[AliasGroup]) -> Vec<Vec<(Pos, Sensation)>> {
        let aliased: BTreeMap<Pos, Sensation> = groups
            .iter()
            .filter(|g| g.is_aliasing())
            .flat_map(|g| g.squares.iter().map(move |s| (s.pos, g.sensation)))
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for &start in aliased.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![start];
            while let Some(p) = stack.pop() {
                comp.push((p, aliased[&p]));
                for dir in Direction::ALL {
                    let n = self.neighbor(p, dir);
                    if aliased.contains_key(&n) && seen.insert(n) {
                        stack.push(n);
                    }
                }
            }
            if comp.len() > 1 {
                comp.sort();
                out.push(comp);
            }
        }
        out
    }
}

/// Index pairs of conglomerates that contain the same multiset of
/// aliasing states.
fn clone_pairs(conglomerates: &[Vec<(Pos, Sensation)>]) -> Vec<(usize, usize)> {
    let keys: Vec<Vec<Sensation>> = conglomerates
        .iter()
        .map(|c| {
            let mut k: Vec<Sensation> = c.iter().map(|&(_, s)| s).collect();
            k.sort();
            k
        })
        .collect();
    let mut out = vec![];
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            if keys[i] == keys[j] {
                out.push((i, j));
            }
        }
    }
    out
}

impl fmt::Display for Maze {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.height {
            let line: String = (0..self.width)
                .map(|col| self.cell(Pos { row, col }).symbol())
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Aliasing category, ordered from harmless to hardest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AliasKind {
    NonAliasing,
    /// Same distance and a shared optimal action.
    Pseudo,
    /// Different distance, shared optimal action.
    TypeI,
    /// Different distance, no shared optimal action.
    TypeII,
    /// Same distance, no shared optimal action.
    TypeIII,
}

impl AliasKind {
    fn of_pair(a: &SquareInfo, b: &SquareInfo) -> AliasKind {
        let same_distance = a.distance == b.distance;
        let shared_action = a
            .optimal_actions
            .iter()
            .any(|x| b.optimal_actions.contains(x));
        match (same_distance, shared_action) {
            (true, true) => AliasKind::Pseudo,
            (false, true) => AliasKind::TypeI,
            (false, false) => AliasKind::TypeII,
            (true, false) => AliasKind::TypeIII,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AliasKind::NonAliasing => "non-aliasing",
            AliasKind::Pseudo => "pseudo-aliasing",
            AliasKind::TypeI => "type I",
            AliasKind::TypeII => "type II",
            AliasKind::TypeIII => "type III",
        }
    }
}

impl fmt::Display for AliasKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareInfo {
    pub pos: Pos,
    pub distance: u32,
    pub optimal_actions: Vec<Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasGroup {
    pub sensation: Sensation,
    pub squares: Vec<SquareInfo>,
    pub kind: AliasKind,
}

impl AliasGroup {
    /// True aliasing: more than one square and not merely pseudo-aliasing.
    pub fn is_aliasing(&self) -> bool {
        self.squares.len() > 1 && self.kind > AliasKind::Pseudo
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasingReport {
    /// One group per distinct sensation, in sensation order.
    pub groups: Vec<AliasGroup>,
    pub maze_kind: AliasKind,
    pub conglomerates: Vec<Vec<(Pos, Sensation)>>,
    pub clones: Vec<(usize, usize)>,
}

impl AliasingReport {
    /// Groups with at least two squares.
    pub fn shared(&self) -> impl Iterator<Item = &AliasGroup> {
        self.groups.iter().filter(|g| g.squares.len() > 1)
    }

    pub fn group_of(&self, pos: Pos) -> Option<&AliasGroup> {
        self.groups
            .iter()
            .find(|g| g.squares.iter().any(|s| s.pos == pos))
    }

    /// Every sensation maps to a single square or to squares that agree on an
    /// optimal action at equal distance.
    pub fn is_markov(&self) -> bool {
        self.maze_kind == AliasKind::NonAliasing
    }

    pub fn count(&self, kind: AliasKind) -> usize {
        self.groups
            .iter()
            .filter(|g| g.squares.len() > 1 && g.kind == kind)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const WOODS1: &str = ".....\n.TTF.\n.TTT.\n.TTT.\n.....\n";

    #[test]
    fn parse_counts_cells() {
        let m = Maze::parse("woods1", WOODS1).unwrap();
        assert_eq!((m.width(), m.height()), (5, 5));
        assert_eq!(m.count(Cell::Food), 1);
        assert_eq!(m.count(Cell::Obstacle), 8);
        assert_eq!(m.count(Cell::Empty), 16);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Maze::parse("f", "F"), Err(MazeError::NoEmpty));
        assert_eq!(Maze::parse("t", "T.\n.."), Err(MazeError::NoFood));
        assert_eq!(
            Maze::parse("r", "TF.\nT."),
            Err(MazeError::RaggedGrid {
                row: 1,
                expected: 3,
                found: 2
            })
        );
        assert!(matches!(
            Maze::parse("u", "T1F"),
            Err(MazeError::UnknownCell { ch: '1', .. })
        ));
        assert_eq!(Maze::parse("e", "\n\n"), Err(MazeError::EmptyInput));
    }

    #[test]
    fn space_is_empty() {
        let m = Maze::parse("s", "T F\n T ").unwrap();
        assert_eq!(m.cell(Pos::new(0, 1)), Cell::Empty);
        assert_eq!(m.count(Cell::Empty), 3);
    }

    #[test]
    fn sense_extremes() {
        let walled = Maze::parse("w", "TTTTT\nTTTTT\nTT.TT\nTTTTT\nTTTTF\n").unwrap();
        assert_eq!(
            walled.sense(Pos::new(2, 2)).unwrap().to_string(),
            "0101010101010101"
        );
        let open = Maze::parse("o", "....\n....\n....\n...F\n").unwrap();
        assert_eq!(
            open.sense(Pos::new(1, 1)).unwrap().to_string(),
            "0000000000000000"
        );
        assert_eq!(
            open.sense(Pos::new(3, 3)),
            Err(MazeError::PosNotEmpty(Pos::new(3, 3)))
        );
    }

    #[test]
    fn sense_order_is_north_clockwise() {
        // food to the east, obstacle to the south-west
        let m = Maze::parse("o", "...\n..F\nT..\n").unwrap();
        let s = m.sense(Pos::new(1, 1)).unwrap();
        assert_eq!(s.neighbor(Direction::E), Some(Cell::Food));
        assert_eq!(s.neighbor(Direction::SW), Some(Cell::Obstacle));
        assert_eq!(s.neighbor(Direction::N), Some(Cell::Empty));
        assert_eq!(s.to_string(), "0000110000010000");
        assert_eq!("0000110000010000".parse::<Sensation>().unwrap(), s);
    }

    #[test]
    fn step_cases() {
        let m = Maze::parse("m", "T..\n.F.\n...\n").unwrap();
        let here = Pos::new(0, 1);
        let out = m.step(here, Direction::S, 1000.0);
        assert_eq!(
            out,
            StepOutcome {
                pos: Pos::new(1, 1),
                reward: 1000.0,
                at_food: true
            }
        );
        let bump = m.step(here, Direction::W, 1000.0);
        assert_eq!(bump.pos, here);
        assert_eq!(bump.reward, 0.0);
        assert!(!bump.at_food);
        // north from the top row wraps to the bottom row
        let wrap = m.step(here, Direction::N, 1000.0);
        assert_eq!(wrap.pos, Pos::new(2, 1));
        assert!(!wrap.at_food);
    }

    #[test]
    fn random_empty_cell_single_choice_and_determinism() {
        let m = Maze::parse("one", "TTT\nT.F\nTTT\n").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(m.random_empty_cell(&mut rng), Pos::new(1, 1));
        }
        let w = Maze::parse("woods1", WOODS1).unwrap();
        let a = w.random_empty_cell(&mut ChaCha8Rng::seed_from_u64(9));
        let b = w.random_empty_cell(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn random_empty_cell_is_uniform() {
        let m = Maze::parse("woods1", WOODS1).unwrap();
        let cells = m.empty_cells();
        let mut counts: BTreeMap<Pos, u32> = BTreeMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let draws = 100_000;
        for _ in 0..draws {
            *counts.entry(m.random_empty_cell(&mut rng)).or_default() += 1;
        }
        assert_eq!(counts.len(), cells.len());
        let expected = draws as f64 / cells.len() as f64;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 15 degrees of freedom, p = 0.001 critical value
        assert!(chi2 < 37.7, "chi2 = {chi2}");
    }

    #[test]
    fn woods1_is_markov_with_known_optimum() {
        let m = Maze::parse("woods1", WOODS1).unwrap();
        assert_eq!(m.optimal_average_steps().unwrap(), 1.6875);
        let r = m.classify_aliasing().unwrap();
        assert!(r.is_markov());
        assert_eq!(r.shared().count(), 0);
    }

    #[test]
    fn unreachable_food() {
        let m = Maze::parse("u", "TTTTT\nT.TFT\nTTTTT\n").unwrap();
        assert_eq!(
            m.optimal_average_steps(),
            Err(MazeError::Unreachable(Pos::new(1, 1)))
        );
        assert!(m.classify_aliasing().is_err());
    }

    #[test]
    fn pair_table() {
        let sq = |d, acts: &[Direction]| SquareInfo {
            pos: Pos::new(0, 0),
            distance: d,
            optimal_actions: acts.to_vec(),
        };
        use Direction::*;
        assert_eq!(
            AliasKind::of_pair(&sq(2, &[N]), &sq(2, &[N, E])),
            AliasKind::Pseudo
        );
        assert_eq!(
            AliasKind::of_pair(&sq(2, &[N]), &sq(4, &[N])),
            AliasKind::TypeI
        );
        assert_eq!(
            AliasKind::of_pair(&sq(2, &[N]), &sq(4, &[S])),
            AliasKind::TypeII
        );
        assert_eq!(
            AliasKind::of_pair(&sq(3, &[SE]), &sq(3, &[SW])),
            AliasKind::TypeIII
        );
    }
}
