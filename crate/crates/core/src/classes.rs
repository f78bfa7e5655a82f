//! Compact game representations and their expansion into explicit profiles.
//!
//! Additively separable games rank coalitions by the sum of pairwise values.
//! Friends and enemies games are the two classic special cases with values
//! `{-1, +n}` and `{-n, +1}`. B-hedonic games rank a coalition by its best
//! member, breaking ties toward smaller coalitions; two coalitions with the
//! same best member and the same size are indifferent.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalition::{Coalition, Player, MAX_PLAYERS};
use crate::error::{HedonicError, Result};
use crate::profile::{ExplicitListing, PreferenceProfile};

/// Pairwise values `v_i(j)`; the diagonal is ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AshgMatrix {
    n: usize,
    values: Vec<Vec<i64>>,
}

impl AshgMatrix {
    pub fn from_rows(values: Vec<Vec<i64>>) -> Result<Self> {
        let n = values.len();
        if n == 0 || n > MAX_PLAYERS {
            return Err(HedonicError::domain(format!(
                "value matrix size {n} outside 1..={MAX_PLAYERS}"
            )));
        }
        if let Some((i, row)) = values.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(HedonicError::domain(format!(
                "value matrix row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        Ok(AshgMatrix { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.values
    }

    pub fn value(&self, i: Player, j: Player) -> i64 {
        if i == j {
            0
        } else {
            self.values[i.bit()][j.bit()]
        }
    }

    /// `sum_{j in s \ {i}} v_i(j)`
    pub fn utility(&self, i: Player, s: Coalition) -> i64 {
        s.without(i).players().map(|j| self.value(i, j)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(i, j)| self.value(i, j) == self.value(j, i))
    }

    pub fn is_strict(&self) -> bool {
        self.pairs().all(|(i, j)| self.value(i, j) != 0)
    }

    fn pairs(&self) -> impl Iterator<Item = (Player, Player)> + '_ {
        Player::all(self.n).flat_map(move |i| Player::all(self.n).filter(move |&j| j != i).map(move |j| (i, j)))
    }

    pub fn profile(&self) -> Result<PreferenceProfile> {
        PreferenceProfile::from_key_fn(self.n, |i, s| Reverse(self.utility(i, s)))
    }
}

/// Per player, the set of players it regards positively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegardGraph {
    n: usize,
    adjacency: Vec<Coalition>,
}

impl RegardGraph {
    pub fn new(n: usize, adjacency: Vec<Coalition>) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(HedonicError::domain(format!(
                "graph size {n} outside 1..={MAX_PLAYERS}"
            )));
        }
        if adjacency.len() != n {
            return Err(HedonicError::domain(format!(
                "adjacency lists for {} players, expected {n}",
                adjacency.len()
            )));
        }
        for (i, &adj) in Player::all(n).zip(&adjacency) {
            if adj.contains(i) {
                return Err(HedonicError::domain(format!("player {i} lists itself")));
            }
            if !adj.is_subset(Coalition::grand(n)) {
                return Err(HedonicError::domain(format!(
                    "player {i} lists players outside 1..={n}"
                )));
            }
        }
        Ok(RegardGraph { n, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &[Coalition] {
        &self.adjacency
    }

    pub fn neighbors(&self, i: Player) -> Coalition {
        self.adjacency[i.bit()]
    }

    pub fn is_symmetric(&self) -> bool {
        Player::all(self.n).all(|i| self.neighbors(i).players().all(|j| self.neighbors(j).contains(i)))
    }

    fn matrix(&self, liked: i64, disliked: i64) -> AshgMatrix {
        let values = Player::all(self.n)
            .map(|i| {
                Player::all(self.n)
                    .map(|j| match () {
                        _ if i == j => 0,
                        _ if self.neighbors(i).contains(j) => liked,
                        _ => disliked,
                    })
                    .collect()
            })
            .collect();
        AshgMatrix { n: self.n, values }
    }
}

/// Appreciation of friends: `v_i(j) = +n` for friends, `-1` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FriendsGraph(pub RegardGraph);

/// Aversion to enemies: `v_i(j) = +1` for friends, `-n` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnemiesGraph(pub RegardGraph);

impl FriendsGraph {
    pub fn new(n: usize, friends: Vec<Coalition>) -> Result<Self> {
        RegardGraph::new(n, friends).map(FriendsGraph)
    }

    pub fn matrix(&self) -> AshgMatrix {
        self.0.matrix(self.0.n as i64, -1)
    }
}

impl EnemiesGraph {
    pub fn new(n: usize, friends: Vec<Coalition>) -> Result<Self> {
        RegardGraph::new(n, friends).map(EnemiesGraph)
    }

    pub fn matrix(&self) -> AshgMatrix {
        self.0.matrix(1, -(self.0.n as i64))
    }
}

pub fn friends_game(g: &FriendsGraph) -> AshgMatrix {
    g.matrix()
}

pub fn enemies_game(g: &EnemiesGraph) -> AshgMatrix {
    g.matrix()
}

pub fn ashg_to_profile(m: &AshgMatrix) -> Result<PreferenceProfile> {
    m.profile()
}

/// Strict rankings of players, one per player, each over all of `N`
/// including the ranking player itself. A player's own position is what an
/// otherwise empty coalition is worth to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BRanking {
    n: usize,
    /// `rank[i][j]`: position of player `j+1` in player `i+1`'s order, 0 best.
    rank: Vec<Vec<usize>>,
}

impl BRanking {
    /// `orders[i]` lists all players best first, from player `i + 1`'s view.
    pub fn new(n: usize, orders: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(HedonicError::domain(format!(
                "ranking size {n} outside 1..={MAX_PLAYERS}"
            )));
        }
        if orders.len() != n {
            return Err(HedonicError::domain(format!(
                "rankings for {} players, expected {n}",
                orders.len()
            )));
        }
        let mut rank = Vec::with_capacity(n);
        for (i, order) in orders.iter().enumerate() {
            let mut pos = vec![usize::MAX; n];
            for (k, &j) in order.iter().enumerate() {
                if j == 0 || j > n {
                    return Err(HedonicError::domain(format!(
                        "player {} ranks unknown player {j}",
                        i + 1
                    )));
                }
                if pos[j - 1] != usize::MAX {
                    return Err(HedonicError::domain(format!(
                        "player {} ranks player {j} twice; only strict rankings are supported",
                        i + 1
                    )));
                }
                pos[j - 1] = k;
            }
            if order.len() != n {
                return Err(HedonicError::domain(format!(
                    "player {} ranks {} players; a strict ranking must order all {n}",
                    i + 1,
                    order.len()
                )));
            }
            rank.push(pos);
        }
        Ok(BRanking { n, rank })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Orders best first, as given to [`BRanking::new`].
    pub fn orders(&self) -> Vec<Vec<usize>> {
        self.rank
            .iter()
            .map(|pos| {
                let mut order: Vec<usize> = (1..=self.n).collect();
                order.sort_by_key(|&j| pos[j - 1]);
                order
            })
            .collect()
    }

    pub fn rank(&self, i: Player, j: Player) -> usize {
        self.rank[i.bit()][j.bit()]
    }

    /// Best member of `s \ {i}` from `i`'s view, or `i` itself if `s = {i}`.
    pub fn best(&self, i: Player, s: Coalition) -> Player {
        s.without(i).players().min_by_key(|&j| self.rank(i, j)).unwrap_or(i)
    }

    pub fn profile(&self) -> Result<PreferenceProfile> {
        PreferenceProfile::from_key_fn(self.n, |i, s| (self.rank(i, self.best(i, s)), s.len()))
    }
}

pub fn bhedonic_to_profile(r: &BRanking) -> Result<PreferenceProfile> {
    r.profile()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameSpec {
    Explicit(ExplicitListing),
    Ashg(AshgMatrix),
    Friends(FriendsGraph),
    Enemies(EnemiesGraph),
    BHedonic(BRanking),
}

impl GameSpec {
    pub fn n(&self) -> usize {
        match self {
            GameSpec::Explicit(l) => l.n,
            GameSpec::Ashg(m) => m.n(),
            GameSpec::Friends(g) => g.0.n(),
            GameSpec::Enemies(g) => g.0.n(),
            GameSpec::BHedonic(r) => r.n(),
        }
    }

    pub fn kind_tag(&self) -> &'static str {
        match self {
            GameSpec::Explicit(_) => "explicit",
            GameSpec::Ashg(_) => "ashg",
            GameSpec::Friends(_) => "friends",
            GameSpec::Enemies(_) => "enemies",
            GameSpec::BHedonic(_) => "bhedonic",
        }
    }

    /// The value matrix behind additively separable representations.
    pub fn matrix(&self) -> Option<AshgMatrix> {
        match self {
            GameSpec::Ashg(m) => Some(m.clone()),
            GameSpec::Friends(g) => Some(g.matrix()),
            GameSpec::Enemies(g) => Some(g.matrix()),
            _ => None,
        }
    }

    pub fn profile(&self) -> Result<PreferenceProfile> {
        match self {
            GameSpec::Explicit(l) => l.profile(),
            GameSpec::BHedonic(r) => r.profile(),
            _ => self.matrix().expect("separable game").profile(),
        }
    }
}

/// Families of random games.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    Explicit,
    Ashg,
    SymmetricAshg,
    Friends,
    SymmetricFriends,
    Enemies,
    SymmetricEnemies,
    BHedonicStrict,
}

impl GameKind {
    pub const ALL: [GameKind; 8] = [
        GameKind::Explicit,
        GameKind::Ashg,
        GameKind::SymmetricAshg,
        GameKind::Friends,
        GameKind::SymmetricFriends,
        GameKind::Enemies,
        GameKind::SymmetricEnemies,
        GameKind::BHedonicStrict,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            GameKind::Explicit => "explicit",
            GameKind::Ashg => "ashg",
            GameKind::SymmetricAshg => "symmetric-ashg",
            GameKind::Friends => "friends",
            GameKind::SymmetricFriends => "symmetric-friends",
            GameKind::Enemies => "enemies",
            GameKind::SymmetricEnemies => "symmetric-enemies",
            GameKind::BHedonicStrict => "bhedonic-strict",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for GameKind {
    type Err = HedonicError;

    fn from_str(s: &str) -> Result<Self> {
        GameKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| HedonicError::domain(format!("unknown game kind `{s}`")))
    }
}

/// A deterministic random game of the given family.
///
/// Graph families draw each (ordered or, if symmetric, unordered) pair with
/// probability 1/2. Separable values are uniform in `-n..=n`. Strict
/// B-hedonic rankings shuffle the other players and put the ranking player
/// last, i.e. everyone is acceptable.
pub fn random_game(kind: GameKind, n: usize, seed: u64) -> Result<GameSpec> {
    if n == 0 || n > MAX_PLAYERS {
        return Err(HedonicError::capacity("random game", n, MAX_PLAYERS));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 48 ^ (kind as u64) << 56);
    let spec = match kind {
        GameKind::Explicit => {
            let levels = ((1u32 << (n - 1)) / 2).max(2);
            let tiers: Vec<Vec<u32>> = (0..n)
                .map(|_| (0..1usize << (n - 1)).map(|_| rng.gen_range(0..levels)).collect())
                .collect();
            let profile = PreferenceProfile::from_key_fn(n, |p, c| {
                let k = Coalition::grand(n)
                    .subsets_containing(p)
                    .position(|x| x == c)
                    .expect("coalition of p");
                tiers[p.bit()][k]
            })?;
            GameSpec::Explicit(ExplicitListing::from_profile(&profile))
        }
        GameKind::Ashg | GameKind::SymmetricAshg => {
            let bound = n as i64;
            let mut values = vec![vec![0i64; n]; n];
            for (i, j) in (0..n).flat_map(|i| (0..n).map(move |j| (i, j))) {
                if i == j || (kind == GameKind::SymmetricAshg && j < i) {
                    continue;
                }
                values[i][j] = rng.gen_range(-bound..=bound);
                if kind == GameKind::SymmetricAshg {
                    values[j][i] = values[i][j];
                }
            }
            GameSpec::Ashg(AshgMatrix { n, values })
        }
        GameKind::Friends | GameKind::SymmetricFriends | GameKind::Enemies | GameKind::SymmetricEnemies => {
            let symmetric = matches!(kind, GameKind::SymmetricFriends | GameKind::SymmetricEnemies);
            let mut adjacency = vec![Coalition::EMPTY; n];
            for i in Player::all(n) {
                for j in Player::all(n) {
                    if i == j || (symmetric && j < i) {
                        continue;
                    }
                    if rng.gen_bool(0.5) {
                        adjacency[i.bit()] = adjacency[i.bit()].with(j);
                        if symmetric {
                            adjacency[j.bit()] = adjacency[j.bit()].with(i);
                        }
                    }
                }
            }
            let graph = RegardGraph { n, adjacency };
            if matches!(kind, GameKind::Friends | GameKind::SymmetricFriends) {
                GameSpec::Friends(FriendsGraph(graph))
            } else {
                GameSpec::Enemies(EnemiesGraph(graph))
            }
        }
        GameKind::BHedonicStrict => {
            let orders = (1..=n)
                .map(|i| {
                    let mut others: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
                    others.shuffle(&mut rng);
                    others.push(i);
                    others
                })
                .collect();
            GameSpec::BHedonic(BRanking::new(n, orders)?)
        }
    };
    Ok(spec)
}
