//! Choice sets, avoid sets, and the top/bottom responsiveness restrictions.
//!
//! Every check scans players in ascending order and contexts in ascending
//! bitmask order, so the reported violation is deterministic. Checks expand
//! the full profile and cost `O(n * 4^(n-1))` tier lookups; they refuse games
//! above [`RESTRICTION_CAP`] players.

use std::fmt;

use serde::Serialize;

use crate::coalition::{Coalition, Player};
use crate::error::{HedonicError, Result};
use crate::profile::PreferenceProfile;

pub const RESTRICTION_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoiceSetResult {
    pub player: Player,
    pub context: Coalition,
    pub maximizers: Vec<Coalition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvoidSetResult {
    pub player: Player,
    pub context: Coalition,
    pub minimizers: Vec<Coalition>,
}

/// Most preferred subsets of `context` containing `player`.
pub fn choice_sets(profile: &PreferenceProfile, player: Player, context: Coalition) -> Result<ChoiceSetResult> {
    profile.try_tier(player, context)?;
    Ok(ChoiceSetResult {
        player,
        context,
        maximizers: extremes(profile, player, context, Extreme::Best),
    })
}

/// Least preferred subsets of `context` containing `player`.
pub fn avoid_sets(profile: &PreferenceProfile, player: Player, context: Coalition) -> Result<AvoidSetResult> {
    profile.try_tier(player, context)?;
    Ok(AvoidSetResult {
        player,
        context,
        minimizers: extremes(profile, player, context, Extreme::Worst),
    })
}

/// The unique choice set `ch(player, context)`.
pub fn unique_choice_set(profile: &PreferenceProfile, player: Player, context: Coalition) -> Result<Coalition> {
    let ch = choice_sets(profile, player, context)?;
    match ch.maximizers.as_slice() {
        [only] => Ok(*only),
        _ => Err(HedonicError::Precondition {
            requirement: "unique choice sets (top responsiveness)",
            violation: Some(Box::new(Violation {
                property: Property::TopResponsive,
                condition: 1,
                players: vec![player],
                coalitions: vec![context],
            })),
        }),
    }
}

/// The unique avoid set `av(player, context)`.
pub fn unique_avoid_set(profile: &PreferenceProfile, player: Player, context: Coalition) -> Result<Coalition> {
    let av = avoid_sets(profile, player, context)?;
    match av.minimizers.as_slice() {
        [only] => Ok(*only),
        _ => Err(HedonicError::Precondition {
            requirement: "unique avoid sets (strong bottom responsiveness)",
            violation: Some(Box::new(Violation {
                property: Property::StrongBottomResponsive,
                condition: 1,
                players: vec![player],
                coalitions: vec![context],
            })),
        }),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Extreme {
    Best,
    Worst,
}

fn extremes(profile: &PreferenceProfile, p: Player, context: Coalition, which: Extreme) -> Vec<Coalition> {
    let mut found = Vec::new();
    let mut target = match which {
        Extreme::Best => u32::MAX,
        Extreme::Worst => 0,
    };
    for s in context.subsets_containing(p) {
        let t = profile.tier(p, s);
        let better = match which {
            Extreme::Best => t < target,
            Extreme::Worst => t > target,
        };
        if better || found.is_empty() {
            target = t;
            found.clear();
            found.push(s);
        } else if t == target {
            found.push(s);
        }
    }
    found
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    TopResponsive,
    TopMutual,
    BottomResponsive,
    StrongBottomResponsive,
    BottomMutual,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::TopResponsive => "top responsiveness",
            Property::TopMutual => "mutuality (top)",
            Property::BottomResponsive => "bottom responsiveness",
            Property::StrongBottomResponsive => "strong bottom responsiveness",
            Property::BottomMutual => "mutuality (bottom)",
        })
    }
}

/// A concrete counterexample to a restriction.
///
/// Condition numbers: top responsiveness 1 (unique choice set), 2 (choice
/// sets order coalitions), 3 (smaller wins on equal choice sets); bottom
/// responsiveness 1 (avoid sets order coalitions), 2 (larger weakly wins on
/// shared avoid sets); strong bottom responsiveness 1 (unique avoid set);
/// mutuality 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: Property,
    pub condition: u8,
    pub players: Vec<Player>,
    pub coalitions: Vec<Coalition>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} condition {} fails for player", self.property, self.condition)?;
        if self.players.len() > 1 {
            write!(f, "s")?;
        }
        for (k, p) in self.players.iter().enumerate() {
            write!(f, "{}{p}", if k == 0 { " " } else { "," })?;
        }
        write!(f, " on")?;
        for (k, c) in self.coalitions.iter().enumerate() {
            write!(f, "{}{{{c}}}", if k == 0 { " " } else { ", " })?;
        }
        Ok(())
    }
}

impl Violation {
    fn new(property: Property, condition: u8, players: Vec<Player>, coalitions: Vec<Coalition>) -> Self {
        Violation {
            property,
            condition,
            players,
            coalitions,
        }
    }

    /// Re-derives the violation from the profile. Returns `false` if the
    /// record does not actually demonstrate a failure.
    pub fn replay(&self, profile: &PreferenceProfile) -> bool {
        let valid = |p: Player, c: Coalition| profile.try_tier(p, c).is_ok();
        let ch = |p: Player, c: Coalition| extremes(profile, p, c, Extreme::Best);
        let av = |p: Player, c: Coalition| extremes(profile, p, c, Extreme::Worst);
        match (
            self.property,
            self.condition,
            self.players.as_slice(),
            self.coalitions.as_slice(),
        ) {
            (Property::TopResponsive, 1, &[i], &[x]) => valid(i, x) && ch(i, x).len() != 1,
            (Property::TopResponsive, 2, &[i], &[x, y]) => {
                valid(i, x) && valid(i, y) && {
                    let (cx, cy) = (ch(i, x), ch(i, y));
                    cx.len() == 1 && cy.len() == 1 && profile.prefers(i, cx[0], cy[0]) && !profile.prefers(i, x, y)
                }
            }
            (Property::TopResponsive, 3, &[i], &[x, y]) => {
                valid(i, x) && valid(i, y) && {
                    let (cx, cy) = (ch(i, x), ch(i, y));
                    cx.len() == 1 && cx == cy && x.is_proper_subset(y) && !profile.prefers(i, x, y)
                }
            }
            (Property::BottomResponsive, 1, &[i], &[x, y]) => {
                valid(i, x) && valid(i, y) && {
                    let (ax, ay) = (av(i, x), av(i, y));
                    ax.iter().all(|&a| ay.iter().all(|&b| profile.prefers(i, a, b))) && !profile.prefers(i, x, y)
                }
            }
            (Property::BottomResponsive, 2, &[i], &[x, y]) => {
                valid(i, x) && valid(i, y) && {
                    let ay = av(i, y);
                    av(i, x).iter().any(|a| ay.contains(a)) && x.len() >= y.len() && !profile.weakly_prefers(i, x, y)
                }
            }
            (Property::StrongBottomResponsive, 1, &[i], &[x]) => valid(i, x) && av(i, x).len() != 1,
            (Property::TopMutual, 1, &[i, j], &[x]) => {
                valid(i, x) && valid(j, x) && {
                    let (ci, cj) = (ch(i, x), ch(j, x));
                    ci.len() == 1 && cj.len() == 1 && ci[0].contains(j) != cj[0].contains(i)
                }
            }
            (Property::BottomMutual, 1, &[i, j], &[x]) => {
                valid(i, x) && valid(j, x) && {
                    let (ai, aj) = (av(i, x), av(j, x));
                    ai.len() == 1 && aj.len() == 1 && ai[0].contains(j) != aj[0].contains(i)
                }
            }
            _ => false,
        }
    }
}

/// Outcome of a restriction check; holds exactly when no witness exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionVerdict {
    pub property: Property,
    pub witness: Option<Violation>,
}

impl RestrictionVerdict {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    fn from(property: Property, witness: Option<Violation>) -> Self {
        RestrictionVerdict { property, witness }
    }

    /// Turns a failed verdict into a precondition error.
    pub fn require(self, requirement: &'static str) -> Result<()> {
        match self.witness {
            None => Ok(()),
            Some(v) => Err(HedonicError::Precondition {
                requirement,
                violation: Some(Box::new(v)),
            }),
        }
    }
}

/// Per-player table of extreme sets for every context, indexed in the
/// ascending order of `grand.subsets_containing(p)`.
struct ExtremeTable {
    contexts: Vec<Coalition>,
    sets: Vec<Vec<Coalition>>,
}

impl ExtremeTable {
    fn build(profile: &PreferenceProfile, p: Player, which: Extreme) -> Self {
        let contexts: Vec<Coalition> = profile.grand().subsets_containing(p).collect();
        let sets = contexts.iter().map(|&x| extremes(profile, p, x, which)).collect();
        ExtremeTable { contexts, sets }
    }

    fn iter(&self) -> impl Iterator<Item = (Coalition, &[Coalition])> {
        self.contexts.iter().copied().zip(self.sets.iter().map(Vec::as_slice))
    }

    fn unique(&self, x: Coalition) -> Option<Coalition> {
        let k = self.contexts.binary_search(&x).ok()?;
        match self.sets[k].as_slice() {
            [only] => Some(*only),
            _ => None,
        }
    }
}

fn check_cap(profile: &PreferenceProfile) -> Result<()> {
    HedonicError::check_cap("restriction check", profile.n(), RESTRICTION_CAP)
}

pub fn is_top_responsive(profile: &PreferenceProfile) -> Result<RestrictionVerdict> {
    check_cap(profile)?;
    let prop = Property::TopResponsive;
    for i in profile.players() {
        let table = ExtremeTable::build(profile, i, Extreme::Best);
        for (x, ch) in table.iter() {
            if ch.len() != 1 {
                return Ok(RestrictionVerdict::from(
                    prop,
                    Some(Violation::new(prop, 1, vec![i], vec![x])),
                ));
            }
        }
        for (x, chx) in table.iter() {
            for (y, chy) in table.iter() {
                let (cx, cy) = (chx[0], chy[0]);
                if profile.prefers(i, cx, cy) && !profile.prefers(i, x, y) {
                    return Ok(RestrictionVerdict::from(
                        prop,
                        Some(Violation::new(prop, 2, vec![i], vec![x, y])),
                    ));
                }
                if cx == cy && x.is_proper_subset(y) && !profile.prefers(i, x, y) {
                    return Ok(RestrictionVerdict::from(
                        prop,
                        Some(Violation::new(prop, 3, vec![i], vec![x, y])),
                    ));
                }
            }
        }
    }
    Ok(RestrictionVerdict::from(prop, None))
}

/// Mutuality with respect to top responsiveness. Errors unless the profile is
/// top responsive.
pub fn is_mutual_top(profile: &PreferenceProfile) -> Result<RestrictionVerdict> {
    is_top_responsive(profile)?.require("top responsiveness")?;
    let tables: Vec<ExtremeTable> = profile
        .players()
        .map(|p| ExtremeTable::build(profile, p, Extreme::Best))
        .collect();
    Ok(mutuality(profile, Property::TopMutual, &tables))
}

pub fn is_bottom_responsive(profile: &PreferenceProfile) -> Result<RestrictionVerdict> {
    check_cap(profile)?;
    let prop = Property::BottomResponsive;
    for i in profile.players() {
        let table = ExtremeTable::build(profile, i, Extreme::Worst);
        for (x, avx) in table.iter() {
            for (y, avy) in table.iter() {
                // Condition 1, quantified over every pair of representatives.
                let dominated = avx.iter().all(|&a| avy.iter().all(|&b| profile.prefers(i, a, b)));
                if dominated && !profile.prefers(i, x, y) {
                    return Ok(RestrictionVerdict::from(
                        prop,
                        Some(Violation::new(prop, 1, vec![i], vec![x, y])),
                    ));
                }
                let shared = avx.iter().any(|a| avy.contains(a));
                if shared && x.len() >= y.len() && !profile.weakly_prefers(i, x, y) {
                    return Ok(RestrictionVerdict::from(
                        prop,
                        Some(Violation::new(prop, 2, vec![i], vec![x, y])),
                    ));
                }
            }
        }
    }
    Ok(RestrictionVerdict::from(prop, None))
}

/// Bottom responsiveness plus unique avoid sets. A failure of plain bottom
/// responsiveness is reported with that property's witness.
pub fn is_strong_bottom_responsive(profile: &PreferenceProfile) -> Result<RestrictionVerdict> {
    let br = is_bottom_responsive(profile)?;
    if !br.holds() {
        return Ok(RestrictionVerdict::from(Property::StrongBottomResponsive, br.witness));
    }
    let prop = Property::StrongBottomResponsive;
    for i in profile.players() {
        for x in profile.grand().subsets_containing(i) {
            if extremes(profile, i, x, Extreme::Worst).len() != 1 {
                return Ok(RestrictionVerdict::from(
                    prop,
                    Some(Violation::new(prop, 1, vec![i], vec![x])),
                ));
            }
        }
    }
    Ok(RestrictionVerdict::from(prop, None))
}

/// Mutuality with respect to strong bottom responsiveness. Errors unless the
/// profile is strongly bottom responsive.
pub fn is_mutual_bottom(profile: &PreferenceProfile) -> Result<RestrictionVerdict> {
    is_strong_bottom_responsive(profile)?.require("strong bottom responsiveness")?;
    let tables: Vec<ExtremeTable> = profile
        .players()
        .map(|p| ExtremeTable::build(profile, p, Extreme::Worst))
        .collect();
    Ok(mutuality(profile, Property::BottomMutual, &tables))
}

fn mutuality(profile: &PreferenceProfile, prop: Property, tables: &[ExtremeTable]) -> RestrictionVerdict {
    let grand = profile.grand();
    for i in profile.players() {
        for j in profile.players().filter(|&j| j > i) {
            let pair = Coalition::singleton(i).with(j);
            for x in grand.subsets_containing(i).filter(|x| pair.is_subset(*x)) {
                let (Some(si), Some(sj)) = (tables[i.bit()].unique(x), tables[j.bit()].unique(x)) else {
                    unreachable!("uniqueness established by the precondition");
                };
                if si.contains(j) != sj.contains(i) {
                    return RestrictionVerdict::from(prop, Some(Violation::new(prop, 1, vec![i, j], vec![x])));
                }
            }
        }
    }
    RestrictionVerdict::from(prop, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{AshgMatrix, BRanking, EnemiesGraph};
    use crate::fixtures;

    fn p(i: usize) -> Player {
        Player::new(i)
    }

    fn c(ix: &[usize]) -> Coalition {
        Coalition::of(ix)
    }

    fn two_player(l1: Vec<Vec<Coalition>>, l2: Vec<Vec<Coalition>>) -> PreferenceProfile {
        PreferenceProfile::from_listing(2, &[l1, l2], false).unwrap()
    }

    #[test]
    fn choice_sets_first_example() {
        let g = fixtures::example1().profile().unwrap();
        assert_eq!(
            choice_sets(&g, p(1), c(&[1, 2, 3])).unwrap().maximizers,
            vec![c(&[1, 2])]
        );
        assert_eq!(
            choice_sets(&g, p(2), c(&[1, 2, 3])).unwrap().maximizers,
            vec![c(&[1, 2, 3])]
        );
        assert!(choice_sets(&g, p(3), c(&[1, 2])).is_err());
    }

    #[test]
    fn choice_sets_with_top_indifference() {
        let g = two_player(vec![vec![c(&[1]), c(&[1, 2])]], vec![vec![c(&[2])], vec![c(&[1, 2])]]);
        assert_eq!(
            choice_sets(&g, p(1), c(&[1, 2])).unwrap().maximizers,
            vec![c(&[1]), c(&[1, 2])]
        );
        let v = is_top_responsive(&g).unwrap();
        let w = v.witness.clone().unwrap();
        assert_eq!(
            (w.condition, w.players.clone(), w.coalitions.clone()),
            (1, vec![p(1)], vec![c(&[1, 2])])
        );
        assert!(w.replay(&g));
    }

    #[test]
    fn avoid_sets_second_example() {
        let g = fixtures::example2().profile().unwrap();
        assert_eq!(
            avoid_sets(&g, p(1), c(&[1, 2, 3])).unwrap().minimizers,
            vec![c(&[1, 2])]
        );
        assert_eq!(avoid_sets(&g, p(3), c(&[1, 2, 3])).unwrap().minimizers, vec![c(&[3])]);
        let single = PreferenceProfile::from_listing(1, &[vec![vec![c(&[1])]]], false).unwrap();
        assert_eq!(avoid_sets(&single, p(1), c(&[1])).unwrap().minimizers, vec![c(&[1])]);
    }

    #[test]
    fn first_example_is_top_responsive_and_mutual() {
        let g = fixtures::example1().profile().unwrap();
        assert!(is_top_responsive(&g).unwrap().holds());
        assert!(is_mutual_top(&g).unwrap().holds());
    }

    #[test]
    fn second_example_is_strong_bottom_responsive_and_mutual() {
        let g = fixtures::example2().profile().unwrap();
        assert!(is_bottom_responsive(&g).unwrap().holds());
        assert!(is_strong_bottom_responsive(&g).unwrap().holds());
        assert!(is_mutual_bottom(&g).unwrap().holds());
    }

    #[test]
    fn top_mutuality_failure() {
        // 1: {1,2} > {1};  2: {2} > {1,2}
        let g = two_player(
            vec![vec![c(&[1, 2])], vec![c(&[1])]],
            vec![vec![c(&[2])], vec![c(&[1, 2])]],
        );
        assert!(is_top_responsive(&g).unwrap().holds());
        let w = is_mutual_top(&g).unwrap().witness.unwrap();
        assert_eq!(
            (w.players.clone(), w.coalitions.clone()),
            (vec![p(1), p(2)], vec![c(&[1, 2])])
        );
        assert!(w.replay(&g));
    }

    #[test]
    fn mutuality_requires_its_base_property() {
        let g = two_player(vec![vec![c(&[1]), c(&[1, 2])]], vec![vec![c(&[2])], vec![c(&[1, 2])]]);
        assert!(matches!(is_mutual_top(&g), Err(HedonicError::Precondition { .. })));
        let tied = PreferenceProfile::from_key_fn(3, |_, x| x.len() == 2).unwrap();
        assert!(!is_strong_bottom_responsive(&tied).unwrap().holds());
        assert!(matches!(
            is_mutual_bottom(&tied),
            Err(HedonicError::Precondition { .. })
        ));
    }

    #[test]
    fn two_indifferent_bottom_subsets_break_strong_bottom_responsiveness() {
        // Everyone is indifferent between all coalitions: avoid sets are never unique.
        let flat = PreferenceProfile::from_key_fn(2, |_, _| 0).unwrap();
        let v = is_strong_bottom_responsive(&flat).unwrap();
        assert!(!v.holds());
        assert!(v.witness.unwrap().replay(&flat));
    }

    #[test]
    fn asymmetric_enemies_break_bottom_mutuality() {
        let g = AshgMatrix::from_rows(vec![vec![0, 1], vec![-2, 0]])
            .unwrap()
            .profile()
            .unwrap();
        assert!(is_bottom_responsive(&g).unwrap().holds());
        assert!(is_strong_bottom_responsive(&g).unwrap().holds());
        let w = is_mutual_bottom(&g).unwrap().witness.unwrap();
        assert_eq!(w.coalitions, vec![c(&[1, 2])]);
        assert!(w.replay(&g));
    }

    #[test]
    fn enemies_games_are_bottom_responsive() {
        let g = EnemiesGraph::new(4, vec![c(&[2, 3]), c(&[1]), c(&[1, 4]), c(&[3])])
            .unwrap()
            .matrix()
            .profile()
            .unwrap();
        assert!(is_strong_bottom_responsive(&g).unwrap().holds());
    }

    #[test]
    fn strict_b_hedonic_is_top_responsive() {
        // 1: 2 > 3 > 1, and so on, each player ranking itself last.
        let r = BRanking::new(3, vec![vec![2, 3, 1], vec![3, 1, 2], vec![1, 2, 3]]).unwrap();
        let g = r.profile().unwrap();
        assert!(is_top_responsive(&g).unwrap().holds());
    }

    #[test]
    fn b_hedonic_with_self_above_two_others_is_not_top_responsive() {
        // Player 1 ranks itself first: ch(1, X) = {1} everywhere, yet
        // {1,2,3} beats {1,3} because 2 beats 3.
        let r = BRanking::new(3, vec![vec![1, 2, 3], vec![3, 1, 2], vec![1, 2, 3]]).unwrap();
        let g = r.profile().unwrap();
        let w = is_top_responsive(&g).unwrap().witness.unwrap();
        assert_eq!(w.condition, 3);
        assert!(w.replay(&g));
    }

    #[test]
    fn restriction_cap() {
        let g = PreferenceProfile::from_key_fn(13, |_, x| x.len()).unwrap();
        assert!(matches!(is_top_responsive(&g), Err(HedonicError::Capacity { .. })));
    }
}
