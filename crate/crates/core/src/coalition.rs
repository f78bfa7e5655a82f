//! Players and coalitions.
//!
//! Players are numbered from 1, as in the literature. A [`Coalition`] is a
//! bitset over at most [`MAX_PLAYERS`] players, where player `i` occupies
//! bit `i - 1`. The canonical order of coalitions is ascending bitmask value.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{HedonicError, Result};

/// Upper bound on the number of players of any game.
///
/// Explicit profiles store `n * 2^(n-1)` tiers, so 16 players already means
/// half a million entries.
pub const MAX_PLAYERS: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Player(u8);

impl Player {
    /// Panics unless `1 <= index <= MAX_PLAYERS`.
    pub fn new(index: usize) -> Self {
        assert!(
            (1..=MAX_PLAYERS).contains(&index),
            "player index {index} out of range 1..={MAX_PLAYERS}"
        );
        Player(index as u8)
    }

    pub fn try_new(index: usize, n: usize) -> Result<Self> {
        if index == 0 || index > n || index > MAX_PLAYERS {
            return Err(HedonicError::domain(format!("player {index} is not in 1..={n}")));
        }
        Ok(Player(index as u8))
    }

    /// One-based index.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Zero-based bit position.
    pub(crate) fn bit(self) -> usize {
        self.0 as usize - 1
    }

    pub(crate) fn from_bit(bit: usize) -> Self {
        Player(bit as u8 + 1)
    }

    pub fn all(n: usize) -> impl Iterator<Item = Player> {
        (1..=n).map(Player::new)
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Player {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.0)
    }
}

/// A set of players.
///
/// Coalitions in games are non-empty; the empty set only shows up as the
/// "move out alone" target and as an intermediate value of set algebra.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u32) -> Self {
        Coalition(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(p: Player) -> Self {
        Coalition(1 << p.bit())
    }

    /// The set `{1, ..., n}`.
    pub fn grand(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    /// Builds a coalition from one-based player indices.
    ///
    /// Panics on an index outside `1..=MAX_PLAYERS`; use
    /// [`Coalition::try_from_indices`] for untrusted input.
    pub fn of(indices: &[usize]) -> Self {
        indices.iter().fold(Coalition::EMPTY, |c, &i| c.with(Player::new(i)))
    }

    pub fn try_from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut c = Coalition::EMPTY;
        for &i in indices {
            let p = Player::try_new(i, n)?;
            if c.contains(p) {
                return Err(HedonicError::domain(format!("player {i} listed twice")));
            }
            c = c.with(p);
        }
        Ok(c)
    }

    pub fn contains(self, p: Player) -> bool {
        self.0 >> p.bit() & 1 == 1
    }

    pub fn with(self, p: Player) -> Self {
        Coalition(self.0 | 1 << p.bit())
    }

    pub fn without(self, p: Player) -> Self {
        Coalition(self.0 & !(1 << p.bit()))
    }

    pub fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Coalition) -> Self {
        Coalition(self.0 & other.0)
    }

    pub fn difference(self, other: Coalition) -> Self {
        Coalition(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Coalition) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(self, other: Coalition) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Lowest-numbered member.
    pub fn min_player(self) -> Option<Player> {
        (self.0 != 0).then(|| Player::from_bit(self.0.trailing_zeros() as usize))
    }

    /// Members in ascending order.
    pub fn players(self) -> impl Iterator<Item = Player> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(Player::from_bit(bit))
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.players().map(Player::index).collect()
    }

    /// All subsets of `self` that contain `p`, ascending by bitmask.
    ///
    /// Yields nothing if `p` is not a member.
    pub fn subsets_containing(self, p: Player) -> impl Iterator<Item = Coalition> {
        let anchor = if self.contains(p) { 1u32 << p.bit() } else { 0 };
        let free = self.0 & !anchor;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            if anchor == 0 {
                return None;
            }
            let sub = next?;
            // Standard submask walk, ascending.
            let succ = (sub | !free).wrapping_add(1) & free;
            next = (succ != 0).then_some(succ);
            Some(Coalition(sub | anchor))
        })
    }

    /// All non-empty subsets of `self`, ascending by bitmask.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = Coalition> {
        let full = self.0;
        let mut next = Some(full & full.wrapping_neg());
        std::iter::from_fn(move || {
            let sub = next?;
            if sub == 0 {
                return None;
            }
            let succ = (sub | !full).wrapping_add(1) & full;
            next = (succ != 0).then_some(succ);
            Some(Coalition(sub))
        })
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let mut first = true;
        for p in self.players() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl Serialize for Coalition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.players().map(|p| p.0))
    }
}

impl FromIterator<Player> for Coalition {
    fn from_iter<I: IntoIterator<Item = Player>>(iter: I) -> Self {
        iter.into_iter().fold(Coalition::EMPTY, Coalition::with)
    }
}
