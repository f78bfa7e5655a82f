//! Constructive algorithms: the top covering algorithm, improving-deviation
//! dynamics from the singleton partition, and the exhaustive search for a
//! size-maximal individually rational partition.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::coalition::{Coalition, Player};
use crate::error::{HedonicError, Result};
use crate::partition::{enumerate_partitions_capped, gdot_compare, integer_partition_count, Partition, SizeVector};
use crate::profile::PreferenceProfile;
use crate::restrictions::{
    is_bottom_responsive, is_mutual_bottom, is_top_responsive, unique_avoid_set, unique_choice_set,
};
use crate::stability::{Caps, Checker, Concept};

/// `i ~_X j` iff `j` is in the choice set of `i` within `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborRelation {
    pub context: Coalition,
    /// `choice[k]` is `ch(i, X)` for the `k`-th member `i` of `X`.
    choice: Vec<(Player, Coalition)>,
}

impl NeighborRelation {
    pub fn new(profile: &PreferenceProfile, context: Coalition) -> Result<Self> {
        let choice = context
            .players()
            .map(|i| Ok((i, unique_choice_set(profile, i, context)?)))
            .collect::<Result<_>>()?;
        Ok(NeighborRelation { context, choice })
    }

    pub fn neighbors(&self, i: Player) -> Coalition {
        self.choice
            .iter()
            .find(|(p, _)| *p == i)
            .map_or(Coalition::EMPTY, |&(_, ch)| ch)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Player, Player)> + '_ {
        self.choice
            .iter()
            .flat_map(|&(i, ch)| ch.players().map(move |j| (i, j)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges().all(|(i, j)| self.neighbors(j).contains(i))
    }

    /// Players reachable from `i` along the relation.
    pub fn component(&self, i: Player) -> Coalition {
        let mut seen = Coalition::singleton(i);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = frontier
                .players()
                .fold(Coalition::EMPTY, |acc, p| acc.union(self.neighbors(p)));
            frontier = next.difference(seen);
            seen = seen.union(next);
        }
        seen
    }
}

pub fn connected_component(profile: &PreferenceProfile, i: Player, context: Coalition) -> Result<Coalition> {
    if !context.contains(i) {
        return Err(HedonicError::domain(format!("player {i} is not in {{{context}}}")));
    }
    Ok(NeighborRelation::new(profile, context)?.component(i))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TcaRound {
    pub k: usize,
    pub remaining: Coalition,
    pub selected: Player,
    pub component: Coalition,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TcaTrace {
    pub rounds: Vec<TcaRound>,
}

impl fmt::Display for TcaTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rounds {
            writeln!(
                f,
                "round {} R={} select={} S={}",
                r.k, r.remaining, r.selected, r.component
            )?;
        }
        Ok(())
    }
}

/// Repeatedly removes the smallest connected component of the remaining
/// players. Ties go to the lowest player index.
pub fn top_covering(profile: &PreferenceProfile) -> Result<(Partition, TcaTrace)> {
    is_top_responsive(profile)?.require("top responsiveness")?;
    let mut remaining = profile.grand();
    let mut trace = TcaTrace::default();
    let mut blocks = Vec::new();
    while !remaining.is_empty() {
        let relation = NeighborRelation::new(profile, remaining)?;
        let (selected, component) = remaining
            .players()
            .map(|i| (i, relation.component(i)))
            .min_by_key(|&(i, cc)| (cc.len(), i))
            .expect("remaining is non-empty");
        trace.rounds.push(TcaRound {
            k: trace.rounds.len() + 1,
            remaining,
            selected,
            component,
        });
        blocks.push(component);
        remaining = remaining.difference(component);
    }
    Ok((Partition::new(profile.n(), blocks)?, trace))
}

/// Whether `ch(i, N)` lies inside `π(i)` for every player.
pub fn covers_choice_sets(profile: &PreferenceProfile, pi: &Partition) -> Result<bool> {
    if pi.n() != profile.n() {
        return Err(HedonicError::domain("partition and game differ in size"));
    }
    for i in profile.players() {
        if !unique_choice_set(profile, i, profile.grand())?.is_subset(pi.block_of(i)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DynamicsMode {
    Is,
    Sis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynamicsStep {
    pub k: usize,
    pub partition: Partition,
    pub movers: Coalition,
    pub successor: Partition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynamicsTrace {
    pub steps: Vec<DynamicsStep>,
    /// Size vectors of the start partition and of every successor.
    pub potential_vectors: Vec<SizeVector>,
}

impl DynamicsTrace {
    /// Whether consecutive size vectors strictly increase.
    pub fn potential_increases(&self) -> bool {
        self.potential_vectors.windows(2).all(|w| w[0] < w[1])
    }
}

impl fmt::Display for DynamicsTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, v) in self.steps.iter().zip(&self.potential_vectors[1..]) {
            writeln!(
                f,
                "step {} H={} {} -> {} sizes={v}",
                s.k, s.movers, s.partition, s.successor
            )?;
        }
        Ok(())
    }
}

/// Applies admissible deviations from the singleton partition until none is
/// left. Single-player IS moves are tried first (players ascending, target
/// blocks in order, leaving alone last). In SIS mode, once no such move
/// exists, the canonical group deviation (smallest mover set) is applied.
pub fn deviation_dynamics(profile: &PreferenceProfile, mode: DynamicsMode) -> Result<(Partition, DynamicsTrace)> {
    deviation_dynamics_capped(profile, mode, Caps::default())
}

pub fn deviation_dynamics_capped(
    profile: &PreferenceProfile,
    mode: DynamicsMode,
    caps: Caps,
) -> Result<(Partition, DynamicsTrace)> {
    is_bottom_responsive(profile)?.require("bottom responsiveness")?;
    let n = profile.n();
    let checker = Checker::new(profile, caps);
    let guard = integer_partition_count(n) + 1;
    let mut pi = Partition::singletons(n);
    let mut trace = DynamicsTrace {
        steps: Vec::new(),
        potential_vectors: vec![pi.size_vector()],
    };
    loop {
        let deviation = match checker.first_move(&pi, true) {
            Some((i, target)) => Some((Coalition::singleton(i), pi.move_player(i, target))),
            None if mode == DynamicsMode::Sis => checker
                .verdict(&pi, Concept::Sis)?
                .witness
                .map(|w| (w.movers, w.successor)),
            None => None,
        };
        let Some((movers, next)) = deviation else {
            return Ok((pi, trace));
        };
        if trace.steps.len() >= guard {
            return Err(HedonicError::Internal(format!(
                "dynamics exceeded {guard} steps on a bottom responsive game"
            )));
        }
        if gdot_compare(&next, &pi)? != Ordering::Greater {
            return Err(HedonicError::Internal(format!(
                "deviation {pi} -> {next} does not increase the size vector"
            )));
        }
        trace.potential_vectors.push(next.size_vector());
        trace.steps.push(DynamicsStep {
            k: trace.steps.len() + 1,
            partition: pi,
            movers,
            successor: next.clone(),
        });
        pi = next;
    }
}

/// Among partitions in which every player is its own avoid set within its
/// block, the one with the largest size vector; ties go to the first in
/// enumeration order.
pub fn find_gdot_maximal_ir(profile: &PreferenceProfile) -> Result<Partition> {
    find_gdot_maximal_ir_capped(profile, Caps::default())
}

pub fn find_gdot_maximal_ir_capped(profile: &PreferenceProfile, caps: Caps) -> Result<Partition> {
    is_mutual_bottom(profile)?.require("mutuality for bottom responsiveness")?;
    let mut best: Option<(SizeVector, Partition)> = None;
    for pi in enumerate_partitions_capped(profile.n(), caps.enumeration)? {
        if !self_avoiding(profile, &pi)? {
            continue;
        }
        let v = pi.size_vector();
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, pi));
        }
    }
    best.map(|(_, pi)| pi)
        .ok_or_else(|| HedonicError::Internal("the singleton partition was not admissible".into()))
}

fn self_avoiding(profile: &PreferenceProfile, pi: &Partition) -> Result<bool> {
    for &block in pi.blocks() {
        for i in block.players() {
            if unique_avoid_set(profile, i, block)? != Coalition::singleton(i) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{EnemiesGraph, FriendsGraph};
    use crate::fixtures;
    use crate::stability::is_strict_strong_nash_stable;

    fn c(ix: &[usize]) -> Coalition {
        Coalition::of(ix)
    }

    fn part(n: usize, s: &str) -> Partition {
        Partition::parse(n, s).unwrap()
    }

    fn ex1() -> PreferenceProfile {
        fixtures::example1().profile().unwrap()
    }

    fn ex2() -> PreferenceProfile {
        fixtures::example2().profile().unwrap()
    }

    #[test]
    fn components() {
        let g = ex1();
        assert_eq!(
            connected_component(&g, Player::new(1), g.grand()).unwrap(),
            c(&[1, 2, 3])
        );
        assert_eq!(connected_component(&g, Player::new(2), c(&[2])).unwrap(), c(&[2]));
        let f = FriendsGraph::new(3, vec![c(&[2]), c(&[1]), c(&[])])
            .unwrap()
            .matrix()
            .profile()
            .unwrap();
        assert_eq!(connected_component(&f, Player::new(1), f.grand()).unwrap(), c(&[1, 2]));
        assert!(connected_component(&f, Player::new(3), c(&[1, 2])).is_err());
    }

    #[test]
    fn tca_examples() {
        let (pi, trace) = top_covering(&ex1()).unwrap();
        assert_eq!(pi, part(3, "1,2,3"));
        assert_eq!(trace.to_string(), "round 1 R=1,2,3 select=1 S=1,2,3\n");
        let one = FriendsGraph::new(1, vec![c(&[])]).unwrap().matrix().profile().unwrap();
        assert_eq!(top_covering(&one).unwrap().0, part(1, "1"));
        let f = FriendsGraph::new(5, vec![c(&[2]), c(&[1]), c(&[4]), c(&[3]), c(&[])])
            .unwrap()
            .matrix()
            .profile()
            .unwrap();
        let (pi, trace) = top_covering(&f).unwrap();
        assert_eq!(pi, part(5, "1,2|3,4|5"));
        assert_eq!(trace.rounds[0].selected, Player::new(5));
        assert!(covers_choice_sets(&f, &pi).unwrap());
        assert!(is_strict_strong_nash_stable(&f, &pi).unwrap().stable);
    }

    #[test]
    fn tca_refuses_non_top_responsive_games() {
        let err = top_covering(&fixtures::prop2().profile().unwrap()).unwrap_err();
        assert!(matches!(err, HedonicError::Precondition { .. }));
    }

    #[test]
    fn choice_set_cover_on_example1() {
        let g = ex1();
        assert!(covers_choice_sets(&g, &part(3, "1,2,3")).unwrap());
        assert!(!covers_choice_sets(&g, &part(3, "1|2|3")).unwrap());
    }

    #[test]
    fn dynamics_examples() {
        let (pi, trace) = deviation_dynamics(&ex2(), DynamicsMode::Is).unwrap();
        assert_eq!(pi, part(3, "1,3|2"));
        assert_eq!(trace.to_string(), "step 1 H=1 1|2|3 -> 1,3|2 sizes=[2,1]\n");
        let one = EnemiesGraph::new(1, vec![c(&[])]).unwrap().matrix().profile().unwrap();
        assert_eq!(deviation_dynamics(&one, DynamicsMode::Sis).unwrap().0, part(1, "1"));
        let triangle = EnemiesGraph::new(3, vec![c(&[2, 3]), c(&[1, 3]), c(&[1, 2])])
            .unwrap()
            .matrix()
            .profile()
            .unwrap();
        for mode in [DynamicsMode::Is, DynamicsMode::Sis] {
            let (pi, trace) = deviation_dynamics(&triangle, mode).unwrap();
            assert_eq!(pi, part(3, "1,2,3"));
            assert!(trace.potential_increases());
        }
    }

    #[test]
    fn dynamics_refuses_non_bottom_responsive_games() {
        let g = ex1();
        if !is_bottom_responsive(&g).unwrap().holds() {
            assert!(deviation_dynamics(&g, DynamicsMode::Is).is_err());
        }
    }

    #[test]
    fn maximal_ir_examples() {
        assert_eq!(find_gdot_maximal_ir(&ex2()).unwrap(), part(3, "1,3|2"));
        let triangle = EnemiesGraph::new(3, vec![c(&[2, 3]), c(&[1, 3]), c(&[1, 2])])
            .unwrap()
            .matrix()
            .profile()
            .unwrap();
        assert_eq!(find_gdot_maximal_ir(&triangle).unwrap(), part(3, "1,2,3"));
        let hostile = EnemiesGraph::new(3, vec![c(&[]); 3])
            .unwrap()
            .matrix()
            .profile()
            .unwrap();
        assert_eq!(find_gdot_maximal_ir(&hostile).unwrap(), part(3, "1|2|3"));
    }
}
