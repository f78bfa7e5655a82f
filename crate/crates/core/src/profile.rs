//! Ordinal preference profiles.
//!
//! Every player holds a weak order over the coalitions containing it. The
//! order is stored as integer tiers: a lower tier is more preferred and equal
//! tiers are indifferent. Tiers are normalized to `0..k` per player, so two
//! profiles inducing the same orders compare equal.

use std::collections::BTreeMap;

use crate::coalition::{Coalition, Player, MAX_PLAYERS};
use crate::error::{HedonicError, Result};

/// Outcome of comparing two coalitions from one player's point of view.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Preference {
    Prefers,
    Indifferent,
    Dispreferred,
}

/// All `2^(n-1)` coalitions containing `player`, ascending by bitmask.
pub fn coalitions_containing(player: Player, n: usize) -> Result<Vec<Coalition>> {
    HedonicError::check_cap("coalitions_containing", n, MAX_PLAYERS)?;
    if player.index() > n {
        return Err(HedonicError::domain(format!("player {player} is not in 1..={n}")));
    }
    Ok(Coalition::grand(n).subsets_containing(player).collect())
}

/// Index of `c` in the list of coalitions containing `p`: drop bit `p` and
/// pack the remaining bits.
#[inline]
fn slot(p: Player, c: Coalition) -> usize {
    let b = p.bit();
    let bits = c.bits() as usize;
    (bits & ((1 << b) - 1)) | ((bits >> (b + 1)) << b)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreferenceProfile {
    n: usize,
    tiers: Vec<Vec<u32>>,
}

impl PreferenceProfile {
    /// Builds a profile by ranking each player's coalitions by a key, where
    /// a smaller key is more preferred and equal keys are indifferent.
    pub fn from_key_fn<K, F>(n: usize, mut key: F) -> Result<Self>
    where
        K: Ord,
        F: FnMut(Player, Coalition) -> K,
    {
        check_n(n)?;
        let tiers = Player::all(n)
            .map(|p| {
                let keys: Vec<K> = Coalition::grand(n).subsets_containing(p).map(|c| key(p, c)).collect();
                dense_ranks(&keys)
            })
            .collect();
        Ok(PreferenceProfile { n, tiers })
    }

    /// Builds a profile from listed indifference classes, best first.
    ///
    /// `lists[i]` holds the tiers of player `i + 1`. With `tail_bottom`, all
    /// coalitions not listed form one extra class below every listed one;
    /// without it every coalition must be listed exactly once.
    pub fn from_listing(n: usize, lists: &[Vec<Vec<Coalition>>], tail_bottom: bool) -> Result<Self> {
        check_n(n)?;
        if lists.len() != n {
            return Err(HedonicError::domain(format!(
                "expected preference lists for {n} players, got {}",
                lists.len()
            )));
        }
        let grand = Coalition::grand(n);
        let mut tiers = Vec::with_capacity(n);
        for (p, classes) in Player::all(n).zip(lists) {
            let size = 1usize << (n - 1);
            let mut row = vec![u32::MAX; size];
            for (t, class) in classes.iter().enumerate() {
                if class.is_empty() {
                    return Err(HedonicError::domain(format!(
                        "player {p}: indifference class {} is empty",
                        t + 1
                    )));
                }
                for &c in class {
                    if !c.contains(p) || !c.is_subset(grand) {
                        return Err(HedonicError::domain(format!(
                            "player {p}: coalition {{{c}}} is not a coalition of player {p} in 1..={n}"
                        )));
                    }
                    let s = slot(p, c);
                    if row[s] != u32::MAX {
                        return Err(HedonicError::domain(format!(
                            "player {p}: coalition {{{c}}} listed twice"
                        )));
                    }
                    row[s] = t as u32;
                }
            }
            let missing = row.iter().filter(|&&t| t == u32::MAX).count();
            if missing > 0 {
                if !tail_bottom {
                    return Err(HedonicError::domain(format!(
                        "player {p}: {missing} coalition(s) unranked and no bottom tail completion requested"
                    )));
                }
                let bottom = classes.len() as u32;
                row.iter_mut().filter(|t| **t == u32::MAX).for_each(|t| *t = bottom);
            }
            tiers.push(row);
        }
        Ok(PreferenceProfile { n, tiers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn players(&self) -> impl Iterator<Item = Player> {
        Player::all(self.n)
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    /// Rank tier of `c` for `p`; lower is better. `c` must contain `p`.
    #[inline]
    pub fn tier(&self, p: Player, c: Coalition) -> u32 {
        debug_assert!(c.contains(p) && c.is_subset(self.grand()));
        self.tiers[p.bit()][slot(p, c)]
    }

    pub fn try_tier(&self, p: Player, c: Coalition) -> Result<u32> {
        self.check_member(p, c)?;
        Ok(self.tier(p, c))
    }

    pub fn compare(&self, p: Player, s: Coalition, t: Coalition) -> Result<Preference> {
        self.check_member(p, s)?;
        self.check_member(p, t)?;
        Ok(self.cmp_unchecked(p, s, t))
    }

    #[inline]
    pub(crate) fn cmp_unchecked(&self, p: Player, s: Coalition, t: Coalition) -> Preference {
        use std::cmp::Ordering::*;
        match self.tier(p, s).cmp(&self.tier(p, t)) {
            Less => Preference::Prefers,
            Equal => Preference::Indifferent,
            Greater => Preference::Dispreferred,
        }
    }

    /// `s` strictly preferred to `t` by `p`.
    #[inline]
    pub fn prefers(&self, p: Player, s: Coalition, t: Coalition) -> bool {
        self.tier(p, s) < self.tier(p, t)
    }

    /// `s` weakly preferred to `t` by `p`.
    #[inline]
    pub fn weakly_prefers(&self, p: Player, s: Coalition, t: Coalition) -> bool {
        self.tier(p, s) <= self.tier(p, t)
    }

    /// Player `p`'s indifference classes, best first.
    pub fn classes(&self, p: Player) -> Vec<Vec<Coalition>> {
        let mut by_tier: BTreeMap<u32, Vec<Coalition>> = BTreeMap::new();
        for c in self.grand().subsets_containing(p) {
            by_tier.entry(self.tier(p, c)).or_default().push(c);
        }
        by_tier.into_values().collect()
    }

    fn check_member(&self, p: Player, c: Coalition) -> Result<()> {
        if p.index() > self.n {
            return Err(HedonicError::domain(format!("player {p} is not in 1..={}", self.n)));
        }
        if !c.contains(p) || !c.is_subset(self.grand()) {
            return Err(HedonicError::domain(format!(
                "{{{c}}} is not a coalition of player {p} in 1..={}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Preferences as written down: indifference classes per player, best
/// first, optionally completed by a single bottom class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExplicitListing {
    pub n: usize,
    pub lists: Vec<Vec<Vec<Coalition>>>,
    pub tail_bottom: bool,
}

impl ExplicitListing {
    pub fn profile(&self) -> Result<PreferenceProfile> {
        PreferenceProfile::from_listing(self.n, &self.lists, self.tail_bottom)
    }

    /// Complete listing of a profile, without tail completion.
    pub fn from_profile(profile: &PreferenceProfile) -> Self {
        ExplicitListing {
            n: profile.n(),
            lists: profile.players().map(|p| profile.classes(p)).collect(),
            tail_bottom: false,
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(HedonicError::domain("a game needs at least one player"));
    }
    HedonicError::check_cap("preference profile", n, MAX_PLAYERS)
}

fn dense_ranks<K: Ord>(keys: &[K]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0u32; keys.len()];
    let mut tier = 0u32;
    for w in 0..order.len() {
        if w > 0 && keys[order[w]] != keys[order[w - 1]] {
            tier += 1;
        }
        ranks[order[w]] = tier;
    }
    ranks
}
