//! Stability concepts for partitions, decided with replayable witnesses.
//!
//! Single-player concepts (IR, NS, IS), coalition concepts (C, SC) and
//! perfection are checked directly. Pareto optimality and the group-deviation
//! concepts (SNS, SSNS, SIS) search every partition of the player set.
//!
//! For a fixed successor `π'`, the reachability condition only constrains
//! pairs of non-movers, so enlarging the mover set `H` never breaks it. Each
//! group concept restricts movers to an "allowed" set that does not depend on
//! `H` (strict improvers for SNS, weak improvers for SSNS, strict improvers in
//! consenting blocks for SIS). A blocking `H` thus exists for `π'` iff the
//! whole allowed set is one. The canonical witness is the smallest `H` by
//! bitmask, then the first `π'` in enumeration order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::coalition::{Coalition, Player, MAX_PLAYERS};
use crate::error::{HedonicError, Result};
use crate::partition::{enumerate_partitions_capped, Partition, ENUMERATION_CAP};
use crate::profile::PreferenceProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Concept {
    #[serde(rename = "IR")]
    Ir,
    #[serde(rename = "PERFECT")]
    Perfect,
    #[serde(rename = "NS")]
    Ns,
    #[serde(rename = "IS")]
    Is,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "SC")]
    Sc,
    #[serde(rename = "PO")]
    Po,
    #[serde(rename = "SNS")]
    Sns,
    #[serde(rename = "SSNS")]
    Ssns,
    #[serde(rename = "SIS")]
    Sis,
}

impl Concept {
    pub const ALL: [Concept; 10] = [
        Concept::Ir,
        Concept::Perfect,
        Concept::Ns,
        Concept::Is,
        Concept::C,
        Concept::Sc,
        Concept::Po,
        Concept::Sns,
        Concept::Ssns,
        Concept::Sis,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Concept::Ir => "IR",
            Concept::Perfect => "PERFECT",
            Concept::Ns => "NS",
            Concept::Is => "IS",
            Concept::C => "C",
            Concept::Sc => "SC",
            Concept::Po => "PO",
            Concept::Sns => "SNS",
            Concept::Ssns => "SSNS",
            Concept::Sis => "SIS",
        }
    }

    /// Whether deciding the concept enumerates all partitions.
    pub fn enumerates(self) -> bool {
        matches!(self, Concept::Po | Concept::Sns | Concept::Ssns | Concept::Sis)
    }

    fn index(self) -> usize {
        Concept::ALL.iter().position(|&c| c == self).unwrap()
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Concept {
    type Err = HedonicError;

    fn from_str(s: &str) -> Result<Self> {
        Concept::ALL
            .into_iter()
            .find(|c| c.tag().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| HedonicError::domain(format!("unknown stability concept `{s}`")))
    }
}

/// Edges of the inclusion lattice: every partition satisfying the first
/// concept satisfies the second.
pub const LATTICE_EDGES: [(Concept, Concept); 12] = [
    (Concept::Perfect, Concept::Ssns),
    (Concept::Ssns, Concept::Sns),
    (Concept::Ssns, Concept::Sc),
    (Concept::Sns, Concept::Ns),
    (Concept::Sns, Concept::Sis),
    (Concept::Sc, Concept::Sis),
    (Concept::Sc, Concept::Po),
    (Concept::Sis, Concept::Is),
    (Concept::Sis, Concept::C),
    (Concept::Ns, Concept::Is),
    (Concept::Is, Concept::Ir),
    (Concept::C, Concept::Ir),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// One player leaves its block for another block or for solitude.
    SingleMove,
    /// A set of players moves at once.
    GroupMove,
    /// The movers form a coalition of their own.
    BlockingCoalition,
    /// An entirely different partition that no one likes less.
    ParetoDominator,
    /// The single mover would rather be in its successor block.
    PreferredCoalition,
}

/// Evidence that a partition violates a concept: the players `movers` and the
/// partition `successor` they would bring about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeviationWitness {
    pub movers: Coalition,
    pub successor: Partition,
    pub kind: WitnessKind,
}

impl fmt::Display for DeviationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H={} -> {}", self.movers, self.successor)
    }
}

impl DeviationWitness {
    /// Re-derives the violation of `concept` by `partition` from the profile
    /// using only coalition comparisons and the reachability relation.
    pub fn confirms(&self, profile: &PreferenceProfile, partition: &Partition, concept: Concept) -> bool {
        let (pi, next) = (partition, &self.successor);
        if pi.n() != profile.n() || next.n() != profile.n() || next == pi || self.movers.is_empty() {
            return false;
        }
        let better = |i: Player| profile.prefers(i, next.block_of(i), pi.block_of(i));
        let weakly = |i: Player| profile.weakly_prefers(i, next.block_of(i), pi.block_of(i));
        let h = self.movers;
        let single = h.len() == 1;
        let reach = reachable(pi, next, h).unwrap_or(false);
        match concept {
            Concept::Ir => single && reach && h.players().all(|i| next.block_of(i) == h && better(i)),
            Concept::Perfect => single && h.players().all(better),
            Concept::Ns | Concept::Is => {
                single
                    && reach
                    && h.players().all(|i| {
                        let target = next.block_of(i).without(i);
                        (target.is_empty() || pi.contains_block(target))
                            && better(i)
                            && (concept == Concept::Ns
                                || target
                                    .players()
                                    .all(|j| profile.weakly_prefers(j, next.block_of(j), target)))
                    })
            }
            Concept::C => next.contains_block(h) && h.players().all(better),
            Concept::Sc => next.contains_block(h) && h.players().all(weakly) && h.players().any(better),
            Concept::Po => profile.players().all(weakly) && profile.players().any(better),
            Concept::Sns => reach && h.players().all(better),
            Concept::Ssns => reach && h.players().all(weakly) && h.players().any(better),
            Concept::Sis => {
                reach && h.players().all(better) && h.players().all(|i| next.block_of(i).players().all(weakly))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub concept: Concept,
    pub stable: bool,
    pub witness: Option<DeviationWitness>,
}

impl Verdict {
    fn stable(concept: Concept) -> Self {
        Verdict {
            concept,
            stable: true,
            witness: None,
        }
    }

    fn broken(concept: Concept, witness: DeviationWitness) -> Self {
        Verdict {
            concept,
            stable: false,
            witness: Some(witness),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.concept, self.stable)?;
        if let Some(w) = &self.witness {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// Size limits for exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n` for which a single check may enumerate all partitions.
    pub enumeration: usize,
    /// Largest `n` for which every partition is checked against an
    /// enumerating concept (partitions squared).
    pub double_enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: ENUMERATION_CAP,
            double_enumeration: 7,
        }
    }
}

impl Caps {
    pub fn unlimited() -> Self {
        Caps {
            enumeration: MAX_PLAYERS,
            double_enumeration: MAX_PLAYERS,
        }
    }
}

/// Whether `next` arises from `current` by moving exactly the players in
/// `movers`: any two other players share a block in `next` iff they did in
/// `current`.
pub fn reachable(current: &Partition, next: &Partition, movers: Coalition) -> Result<bool> {
    if current.n() != next.n() {
        return Err(HedonicError::domain("partitions of different player sets"));
    }
    if movers.is_empty() {
        return Err(HedonicError::domain("the set of movers is empty"));
    }
    if current == next {
        return Err(HedonicError::domain("a partition is not reachable from itself"));
    }
    if !movers.is_subset(Coalition::grand(current.n())) {
        return Err(HedonicError::domain(format!("movers {{{movers}}} are not players")));
    }
    let stay: Vec<Player> = Player::all(current.n()).filter(|&p| !movers.contains(p)).collect();
    for (k, &i) in stay.iter().enumerate() {
        for &j in &stay[k + 1..] {
            let before = current.block_of(i) == current.block_of(j);
            let after = next.block_of(i) == next.block_of(j);
            if before != after {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decides stability concepts for one profile. Holds the partition list when
/// the game is small enough to enumerate.
pub struct Checker<'a> {
    profile: &'a PreferenceProfile,
    partitions: Option<Vec<Partition>>,
    caps: Caps,
}

impl<'a> Checker<'a> {
    pub fn new(profile: &'a PreferenceProfile, caps: Caps) -> Self {
        let partitions = enumerate_partitions_capped(profile.n(), caps.enumeration)
            .ok()
            .map(Iterator::collect);
        Checker {
            profile,
            partitions,
            caps,
        }
    }

    pub fn profile(&self) -> &'a PreferenceProfile {
        self.profile
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    /// All partitions in enumeration order, or a capacity error.
    pub fn partitions(&self) -> Result<&[Partition]> {
        self.partitions
            .as_deref()
            .ok_or_else(|| HedonicError::capacity("partition enumeration", self.profile.n(), self.caps.enumeration))
    }

    fn check_partition(&self, pi: &Partition) -> Result<()> {
        if pi.n() != self.profile.n() {
            return Err(HedonicError::domain(format!(
                "partition of {} players for a game of {}",
                pi.n(),
                self.profile.n()
            )));
        }
        Ok(())
    }

    /// Full verdict, with the canonical witness on failure.
    pub fn verdict(&self, pi: &Partition, concept: Concept) -> Result<Verdict> {
        self.check_partition(pi)?;
        let witness = match concept {
            Concept::Ir => self.ir_witness(pi),
            Concept::Perfect => self.perfect_witness(pi),
            Concept::Ns => self.move_witness(pi, false),
            Concept::Is => self.move_witness(pi, true),
            Concept::C => self.blocking_witness(pi, false),
            Concept::Sc => self.blocking_witness(pi, true),
            Concept::Po => self.pareto_witness(pi)?,
            Concept::Sns | Concept::Ssns | Concept::Sis => self.group_witness(pi, concept)?,
        };
        Ok(match witness {
            None => Verdict::stable(concept),
            Some(w) => Verdict::broken(concept, w),
        })
    }

    /// Stability only; skips the canonical witness search.
    pub fn holds(&self, pi: &Partition, concept: Concept) -> Result<bool> {
        self.check_partition(pi)?;
        match concept {
            Concept::Sns | Concept::Ssns | Concept::Sis => {
                let partitions = self.partitions()?;
                Ok(!partitions
                    .iter()
                    .any(|next| self.blocking_movers(pi, next, concept).is_some()))
            }
            _ => Ok(self.verdict(pi, concept)?.stable),
        }
    }

    fn ir_witness(&self, pi: &Partition) -> Option<DeviationWitness> {
        let g = self.profile;
        g.players()
            .find(|&i| g.prefers(i, Coalition::singleton(i), pi.block_of(i)))
            .map(|i| DeviationWitness {
                movers: Coalition::singleton(i),
                successor: pi.move_player(i, None),
                kind: WitnessKind::SingleMove,
            })
    }

    fn perfect_witness(&self, pi: &Partition) -> Option<DeviationWitness> {
        let g = self.profile;
        g.players().find_map(|i| {
            let current = pi.block_of(i);
            g.grand()
                .subsets_containing(i)
                .find(|&s| g.prefers(i, s, current))
                .map(|s| DeviationWitness {
                    movers: Coalition::singleton(i),
                    successor: pi.carve(s),
                    kind: WitnessKind::PreferredCoalition,
                })
        })
    }

    /// First single-player move that improves the mover (and, with
    /// `consent`, leaves no member of the target block worse off). Players
    /// ascending, targets in block order, moving out alone last.
    pub fn first_move(&self, pi: &Partition, consent: bool) -> Option<(Player, Option<Coalition>)> {
        let g = self.profile;
        for i in g.players() {
            let current = pi.block_of(i);
            let targets = pi
                .blocks()
                .iter()
                .copied()
                .filter(|&t| t != current)
                .map(Some)
                .chain((current.len() > 1).then_some(None));
            for target in targets {
                let joined = target.unwrap_or(Coalition::EMPTY).with(i);
                if !g.prefers(i, joined, current) {
                    continue;
                }
                let accepted = !consent || target.is_none_or(|t| t.players().all(|j| g.weakly_prefers(j, joined, t)));
                if accepted {
                    return Some((i, target));
                }
            }
        }
        None
    }

    fn move_witness(&self, pi: &Partition, consent: bool) -> Option<DeviationWitness> {
        self.first_move(pi, consent).map(|(i, target)| DeviationWitness {
            movers: Coalition::singleton(i),
            successor: pi.move_player(i, target),
            kind: WitnessKind::SingleMove,
        })
    }

    fn blocking_witness(&self, pi: &Partition, weak: bool) -> Option<DeviationWitness> {
        let g = self.profile;
        g.grand()
            .nonempty_subsets()
            .find(|&s| {
                if weak {
                    s.players().all(|i| g.weakly_prefers(i, s, pi.block_of(i)))
                        && s.players().any(|i| g.prefers(i, s, pi.block_of(i)))
                } else {
                    s.players().all(|i| g.prefers(i, s, pi.block_of(i)))
                }
            })
            .map(|s| DeviationWitness {
                movers: s,
                successor: pi.carve(s),
                kind: WitnessKind::BlockingCoalition,
            })
    }

    fn pareto_witness(&self, pi: &Partition) -> Result<Option<DeviationWitness>> {
        let g = self.profile;
        Ok(self
            .partitions()?
            .iter()
            .find(|next| {
                g.players()
                    .all(|i| g.weakly_prefers(i, next.block_of(i), pi.block_of(i)))
                    && g.players().any(|i| g.prefers(i, next.block_of(i), pi.block_of(i)))
            })
            .map(|next| DeviationWitness {
                movers: g.players().filter(|&i| next.block_of(i) != pi.block_of(i)).collect(),
                successor: next.clone(),
                kind: WitnessKind::ParetoDominator,
            }))
    }

    /// For a candidate successor, the largest admissible mover set together
    /// with a predicate deciding whether a mover set makes the deviation
    /// valid. `None` when no mover set can work.
    fn blocking_movers(
        &self,
        pi: &Partition,
        next: &Partition,
        concept: Concept,
    ) -> Option<(u32, impl Fn(u32) -> bool)> {
        if next == pi {
            return None;
        }
        let g = self.profile;
        let n = g.n();
        let mut strict = 0u32;
        let mut weak = 0u32;
        for i in g.players() {
            let (a, b) = (g.tier(i, next.block_of(i)), g.tier(i, pi.block_of(i)));
            if a < b {
                strict |= 1 << i.bit();
            }
            if a <= b {
                weak |= 1 << i.bit();
            }
        }
        let allowed = match concept {
            Concept::Sns => strict,
            Concept::Ssns => weak,
            Concept::Sis => {
                let consenting = next
                    .blocks()
                    .iter()
                    .filter(|b| b.bits() & !weak == 0)
                    .fold(0u32, |acc, b| acc | b.bits());
                strict & consenting
            }
            _ => unreachable!("not a group concept"),
        };
        if allowed == 0 || (concept == Concept::Ssns && allowed & strict == 0) {
            return None;
        }
        // conflict[v]: players whose co-membership with v differs between
        // the two partitions. Non-movers must have no conflicts among
        // themselves.
        let mut conflict = [0u32; MAX_PLAYERS];
        for v in Player::all(n) {
            let changed = pi.block_of(v).bits() ^ next.block_of(v).bits();
            conflict[v.bit()] = changed;
        }
        let need_strict = concept == Concept::Ssns;
        let valid = move |h: u32| {
            h != 0
                && h & !allowed == 0
                && (!need_strict || h & strict != 0)
                && (0..n).all(|v| h >> v & 1 == 1 || conflict[v] & !h == 0)
        };
        valid(allowed).then_some((allowed, valid))
    }

    fn group_witness(&self, pi: &Partition, concept: Concept) -> Result<Option<DeviationWitness>> {
        let mut best: Option<(u32, &Partition)> = None;
        for next in self.partitions()? {
            let Some((allowed, valid)) = self.blocking_movers(pi, next, concept) else {
                continue;
            };
            let bound = best.map_or(u32::MAX, |(h, _)| h);
            // Ascending walk over non-empty submasks of `allowed`.
            let mut h = allowed & allowed.wrapping_neg();
            while h != 0 && h < bound {
                if valid(h) {
                    best = Some((h, next));
                    break;
                }
                h = (h | !allowed).wrapping_add(1) & allowed;
            }
        }
        Ok(best.map(|(h, next)| DeviationWitness {
            movers: Coalition::from_bits(h),
            successor: next.clone(),
            kind: if h.count_ones() == 1 {
                WitnessKind::SingleMove
            } else {
                WitnessKind::GroupMove
            },
        }))
    }

    /// Stability flags for every concept, indexed like [`Concept::ALL`].
    pub fn all_flags(&self, pi: &Partition) -> Result<[bool; 10]> {
        let mut flags = [false; 10];
        for c in Concept::ALL {
            flags[c.index()] = self.holds(pi, c)?;
        }
        Ok(flags)
    }
}

/// A partition at which an inclusion-lattice edge fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HierarchyViolation {
    pub partition: Partition,
    pub antecedent: Concept,
    pub consequent: Concept,
}

impl fmt::Display for HierarchyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} holds but {} fails",
            self.partition, self.antecedent, self.consequent
        )
    }
}

pub(crate) fn lattice_violations(pi: &Partition, flags: &[bool; 10]) -> Vec<HierarchyViolation> {
    LATTICE_EDGES
        .iter()
        .filter(|(a, b)| flags[a.index()] && !flags[b.index()])
        .map(|&(antecedent, consequent)| HierarchyViolation {
            partition: pi.clone(),
            antecedent,
            consequent,
        })
        .collect()
}

pub(crate) fn flag(flags: &[bool; 10], concept: Concept) -> bool {
    flags[concept.index()]
}

/// Checks every lattice edge on every partition. An empty result is the
/// expected outcome; anything else is a checker defect.
pub fn check_hierarchy(profile: &PreferenceProfile, caps: Caps) -> Result<Vec<HierarchyViolation>> {
    HedonicError::check_cap("hierarchy validation", profile.n(), caps.double_enumeration)?;
    let checker = Checker::new(profile, caps);
    let per_partition: Vec<Vec<HierarchyViolation>> = checker
        .partitions()?
        .par_iter()
        .map(|pi| Ok(lattice_violations(pi, &checker.all_flags(pi)?)))
        .collect::<Result<_>>()?;
    Ok(per_partition.into_iter().flatten().collect())
}

fn verdict_of(profile: &PreferenceProfile, pi: &Partition, concept: Concept) -> Result<Verdict> {
    Checker::new(profile, Caps::default()).verdict(pi, concept)
}

pub fn is_individually_rational(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::Ir)
}

pub fn is_perfect(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::Perfect)
}

pub fn is_nash_stable(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::Ns)
}

pub fn is_individually_stable(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::Is)
}

pub fn is_core_stable(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::C)
}

pub fn is_strict_core_stable(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::Sc)
}

pub fn is_pareto_optimal(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::Po)
}

pub fn is_strong_nash_stable(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::Sns)
}

pub fn is_strict_strong_nash_stable(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::Ssns)
}

pub fn is_strong_individually_stable(profile: &PreferenceProfile, pi: &Partition) -> Result<Verdict> {
    verdict_of(profile, pi, Concept::Sis)
}
