//! Hedonic coalition formation games: preference restrictions, stability
//! checking, constructive solvers and exhaustive oracles for small games.
//!
//! Players are numbered from 1. Coalitions are bitmasks over at most
//! [`MAX_PLAYERS`] players, and partitions print as `1,2|3,4`.

pub mod classes;
pub mod coalition;
pub mod error;
pub mod fixtures;
pub mod oracle;
pub mod partition;
pub mod profile;
pub mod restrictions;
pub mod solvers;
pub mod stability;

pub use classes::{AshgMatrix, BRanking, EnemiesGraph, FriendsGraph, GameKind, GameSpec, RegardGraph};
pub use coalition::{Coalition, Player, MAX_PLAYERS};
pub use error::{HedonicError, Result};
pub use oracle::{all_stable, exists_stable, search_counterexample, survey, OracleReport};
pub use partition::{enumerate_partitions, gdot_compare, Partition, SizeVector};
pub use profile::{ExplicitListing, Preference, PreferenceProfile};
pub use restrictions::{Property, RestrictionVerdict, Violation};
pub use solvers::{deviation_dynamics, find_gdot_maximal_ir, top_covering, DynamicsMode};
pub use stability::{check_hierarchy, Caps, Checker, Concept, DeviationWitness, Verdict};
