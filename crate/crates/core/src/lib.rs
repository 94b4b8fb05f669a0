//! XCS with a memory list, memory-condition classifiers and aliasing-state
//! detection, together with a toroidal maze simulator and an experiment
//! harness for non-Markov maze benchmarks.

pub mod classifier;
pub mod condition;
pub mod config;
pub mod corpus;
pub mod detector;
pub mod engine;
pub mod harness;
pub mod maze;
pub mod memory;
pub mod population;

pub use classifier::{Classifier, ClassifierId, MemoryPart};
pub use condition::{Condition, Message};
pub use config::{AliasingDecision, Config, ConfigError, MemoryFallback, Mode};
pub use detector::AliasingStateList;
pub use engine::{Engine, PredictionArray};
pub use harness::{aggregate_runs, run_experiment, run_many, Agent, PerfSeries, Summary};
pub use maze::{AliasKind, Direction, Maze, MazeError, Pos, Sensation};
pub use memory::MemoryList;
