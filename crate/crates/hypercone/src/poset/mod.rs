//! Partially ordered sets, closure operators and completions.

pub mod branch;
pub mod claim;
pub mod completion;
pub mod finite;
pub mod fixtures;
pub mod subset;

pub use branch::{Atom, BranchPoset, Code, Coord, Family, Generator, Op, Rule, Side, WindowConfig};
pub use finite::{compare_completions, dm_completion, ClosureReport, FinitePoset};
pub use subset::Subset;
