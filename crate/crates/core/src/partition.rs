//! Partitions of the player set, their text form, exhaustive enumeration and
//! the lexicographic order on coalition-size vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::coalition::{Coalition, Player, MAX_PLAYERS};
use crate::error::{HedonicError, Result};

/// Default largest `n` for which all partitions are enumerated.
pub const ENUMERATION_CAP: usize = 8;

/// A partition of `{1, ..., n}` in canonical form: blocks sorted by their
/// smallest member.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Coalition>,
    /// `owner[b]` is the block holding the player at bit `b`.
    owner: Vec<Coalition>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Coalition>) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(HedonicError::domain(format!(
                "partition size {n} outside 1..={MAX_PLAYERS}"
            )));
        }
        let grand = Coalition::grand(n);
        let mut seen = Coalition::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(HedonicError::domain("partition contains an empty block"));
            }
            if !b.is_subset(grand) {
                return Err(HedonicError::domain(format!(
                    "block {{{b}}} has players outside 1..={n}"
                )));
            }
            if !b.is_disjoint(seen) {
                return Err(HedonicError::domain(format!("block {{{b}}} overlaps another block")));
            }
            seen = seen.union(b);
        }
        if seen != grand {
            return Err(HedonicError::domain(format!(
                "blocks do not cover players {{{}}}",
                grand.difference(seen)
            )));
        }
        blocks.sort_by_key(|b| b.bits().trailing_zeros());
        Ok(Self::from_canonical(n, blocks))
    }

    /// `blocks` must already be a canonical partition of `{1..n}`.
    fn from_canonical(n: usize, blocks: Vec<Coalition>) -> Self {
        let mut owner = vec![Coalition::EMPTY; n];
        for &b in &blocks {
            for p in b.players() {
                owner[p.bit()] = b;
            }
        }
        Partition { n, blocks, owner }
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_canonical(n, Player::all(n).map(Coalition::singleton).collect())
    }

    pub fn grand(n: usize) -> Self {
        Self::from_canonical(n, vec![Coalition::grand(n)])
    }

    /// Parses the text form `1,2|3,4`. Block order is free; the result is
    /// canonical.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(HedonicError::domain("empty partition string"));
        }
        let mut blocks = Vec::new();
        for block in text.split('|') {
            let mut indices = Vec::new();
            for tok in block.split(',') {
                let tok = tok.trim();
                let i: usize = tok
                    .parse()
                    .map_err(|_| HedonicError::domain(format!("malformed player `{tok}` in partition `{text}`")))?;
                indices.push(i);
            }
            blocks.push(Coalition::try_from_indices(&indices, n)?);
        }
        Self::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The block containing `p`, written `π(p)`.
    #[inline]
    pub fn block_of(&self, p: Player) -> Coalition {
        self.owner[p.bit()]
    }

    pub fn contains_block(&self, c: Coalition) -> bool {
        self.blocks.contains(&c)
    }

    /// Moves `p` out of its block and into `target`, or into a new singleton
    /// block when `target` is `None`.
    pub fn move_player(&self, p: Player, target: Option<Coalition>) -> Partition {
        let new_block = target.unwrap_or(Coalition::EMPTY).with(p);
        let mut blocks: Vec<Coalition> = self
            .blocks
            .iter()
            .map(|&b| b.without(p))
            .filter(|b| !b.is_empty() && !b.is_subset(new_block))
            .collect();
        blocks.push(new_block);
        blocks.sort_by_key(|b| b.bits().trailing_zeros());
        Self::from_canonical(self.n, blocks)
    }

    /// Carves `s` out as a block of its own; the rest of every other block
    /// stays together.
    pub fn carve(&self, s: Coalition) -> Partition {
        let mut blocks: Vec<Coalition> = self
            .blocks
            .iter()
            .map(|&b| b.difference(s))
            .filter(|b| !b.is_empty())
            .collect();
        blocks.push(s);
        blocks.sort_by_key(|b| b.bits().trailing_zeros());
        Self::from_canonical(self.n, blocks)
    }

    pub fn size_vector(&self) -> SizeVector {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        SizeVector(sizes)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses with `n` inferred as the largest player mentioned.
impl FromStr for Partition {
    type Err = HedonicError;

    fn from_str(s: &str) -> Result<Self> {
        let n = s
            .split(['|', ','])
            .filter_map(|t| t.trim().parse::<usize>().ok())
            .max()
            .ok_or_else(|| HedonicError::domain(format!("no players in `{s}`")))?;
        Partition::parse(n, s)
    }
}

/// Coalition sizes in non-increasing order.
///
/// The derived `Ord` is lexicographic, which is exactly the partition order
/// used by the potential argument: a larger vector has a larger block at the
/// first position where the two differ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct SizeVector(pub Vec<usize>);

impl SizeVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for SizeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// Compares two partitions of the same player set by their size vectors.
/// `Greater` means the first partition is strictly above the second.
pub fn gdot_compare(a: &Partition, b: &Partition) -> Result<Ordering> {
    if a.n() != b.n() {
        return Err(HedonicError::domain(format!(
            "cannot compare partitions of {} and {} players",
            a.n(),
            b.n()
        )));
    }
    Ok(a.size_vector().cmp(&b.size_vector()))
}

/// Every partition of `{1..n}`, each exactly once, in restricted-growth-string
/// order. `cap` bounds `n`.
pub fn enumerate_partitions_capped(n: usize, cap: usize) -> Result<Partitions> {
    HedonicError::check_cap("partition enumeration", n, cap.min(MAX_PLAYERS))?;
    if n == 0 {
        return Err(HedonicError::domain("cannot enumerate partitions of zero players"));
    }
    Ok(Partitions {
        n,
        rgs: vec![0; n],
        max_prefix: vec![0; n],
        done: false,
    })
}

/// [`enumerate_partitions_capped`] with the default cap.
pub fn enumerate_partitions(n: usize) -> Result<Partitions> {
    enumerate_partitions_capped(n, ENUMERATION_CAP)
}

/// Streaming enumerator over restricted growth strings.
///
/// `rgs[k]` is the block label of player `k + 1`; labels satisfy
/// `rgs[0] = 0` and `rgs[k] <= 1 + max(rgs[..k])`.
#[derive(Clone, Debug)]
pub struct Partitions {
    n: usize,
    rgs: Vec<u8>,
    /// `max_prefix[k] = max(rgs[..=k])`
    max_prefix: Vec<u8>,
    done: bool,
}

impl Partitions {
    fn current(&self) -> Partition {
        let blocks_count = self.max_prefix[self.n - 1] as usize + 1;
        let mut blocks = vec![Coalition::EMPTY; blocks_count];
        for (bit, &label) in self.rgs.iter().enumerate() {
            blocks[label as usize] = blocks[label as usize].with(Player::from_bit(bit));
        }
        // Labels appear in order of first occurrence, so blocks are already
        // sorted by smallest member.
        Partition::from_canonical(self.n, blocks)
    }

    fn advance(&mut self) {
        let n = self.n;
        for k in (1..n).rev() {
            if self.rgs[k] <= self.max_prefix[k - 1] {
                self.rgs[k] += 1;
                self.max_prefix[k] = self.max_prefix[k - 1].max(self.rgs[k]);
                for j in k + 1..n {
                    self.rgs[j] = 0;
                    self.max_prefix[j] = self.max_prefix[k];
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let p = self.current();
        self.advance();
        Some(p)
    }
}

/// Number of partitions of the integer `n`, i.e. the number of distinct size
/// vectors of partitions of `n` players.
pub fn integer_partition_count(n: usize) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}
