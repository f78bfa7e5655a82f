//! JSON game files.
//!
//! ```json
//! { "version": 1, "kind": "explicit", "n": 2, "name": "tiny",
//!   "preferences": [[[[1, 2]], [[1]]], [[[2]], [[1, 2]]]] }
//! ```
//!
//! Kinds and payloads:
//! * `explicit`: `preferences[i]` lists player `i+1`'s indifference classes,
//!   best first, each coalition an ascending array. `"tail": "bottom"` puts
//!   every unlisted coalition into one bottom class.
//! * `ashg`: `values`, an `n x n` integer matrix; the diagonal is ignored.
//! * `friends`, `enemies`: `adjacency[i]`, the players `i+1` likes.
//! * `bhedonic`: `rankings[i]`, all players best first. Entries may be
//!   single-element arrays; larger arrays (ties) are rejected.

use std::fs;
use std::path::Path;

use hedonic::{AshgMatrix, BRanking, Coalition, EnemiesGraph, ExplicitListing, FriendsGraph, GameSpec};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameFile {
    pub name: Option<String>,
    pub source: Option<String>,
    pub game: GameSpec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGameFile {
    version: u32,
    kind: String,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preferences: Option<Vec<Vec<Vec<Vec<usize>>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adjacency: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rankings: Option<Vec<Vec<Value>>>,
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema {
        field: field.into(),
        message: message.into(),
    }
}

fn require<T>(field: &str, kind: &str, value: Option<T>) -> Result<T, CliError> {
    value.ok_or_else(|| schema(field, format!("required for kind `{kind}`")))
}

fn forbid<T>(field: &str, kind: &str, value: &Option<T>) -> Result<(), CliError> {
    match value {
        Some(_) => Err(schema(field, format!("not allowed for kind `{kind}`"))),
        None => Ok(()),
    }
}

fn coalition(field: &str, members: &[usize], n: usize) -> Result<Coalition, CliError> {
    if members.is_empty() {
        return Err(schema(field, "empty coalition"));
    }
    if members.windows(2).any(|w| w[0] >= w[1]) {
        return Err(schema(field, "coalition members must be strictly ascending"));
    }
    Coalition::try_from_indices(members, n).map_err(|e| schema(field, e.to_string()))
}

impl GameFile {
    pub fn new(game: GameSpec) -> Self {
        GameFile {
            name: None,
            source: None,
            game,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawGameFile = serde_json::from_str(text).map_err(|e| schema("<document>", e.to_string()))?;
        if raw.version != FORMAT_VERSION {
            return Err(schema(
                "version",
                format!("unsupported version {}, expected {FORMAT_VERSION}", raw.version),
            ));
        }
        let n = raw.n;
        if n == 0 || n > hedonic::MAX_PLAYERS {
            return Err(schema("n", format!("{n} outside 1..={}", hedonic::MAX_PLAYERS)));
        }
        let kind = raw.kind.as_str();
        if kind != "explicit" {
            forbid("preferences", kind, &raw.preferences)?;
            forbid("tail", kind, &raw.tail)?;
        }
        if kind != "ashg" {
            forbid("values", kind, &raw.values)?;
        }
        if kind != "friends" && kind != "enemies" {
            forbid("adjacency", kind, &raw.adjacency)?;
        }
        if kind != "bhedonic" {
            forbid("rankings", kind, &raw.rankings)?;
        }
        let game = match kind {
            "explicit" => GameSpec::Explicit(explicit(n, require("preferences", kind, raw.preferences)?, raw.tail)?),
            "ashg" => {
                let values = require("values", kind, raw.values)?;
                if values.len() != n {
                    return Err(schema("values", format!("{} rows, expected {n}", values.len())));
                }
                if let Some(i) = values.iter().position(|r| r.len() != n) {
                    return Err(schema(
                        format!("values[{i}]"),
                        format!("{} entries, expected {n}", values[i].len()),
                    ));
                }
                GameSpec::Ashg(AshgMatrix::from_rows(values).map_err(|e| schema("values", e.to_string()))?)
            }
            "friends" | "enemies" => {
                let lists = require("adjacency", kind, raw.adjacency)?;
                if lists.len() != n {
                    return Err(schema("adjacency", format!("{} lists, expected {n}", lists.len())));
                }
                let mut adjacency = Vec::with_capacity(n);
                for (i, list) in lists.iter().enumerate() {
                    let field = format!("adjacency[{i}]");
                    let mut sorted = list.clone();
                    sorted.sort_unstable();
                    adjacency.push(if sorted.is_empty() {
                        Coalition::EMPTY
                    } else {
                        coalition(&field, &sorted, n)?
                    });
                }
                let built = if kind == "friends" {
                    FriendsGraph::new(n, adjacency).map(GameSpec::Friends)
                } else {
                    EnemiesGraph::new(n, adjacency).map(GameSpec::Enemies)
                };
                built.map_err(|e| schema("adjacency", e.to_string()))?
            }
            "bhedonic" => {
                let rankings = require("rankings", kind, raw.rankings)?;
                let mut orders = Vec::with_capacity(rankings.len());
                for (i, ranking) in rankings.iter().enumerate() {
                    let mut order = Vec::with_capacity(ranking.len());
                    for (k, entry) in ranking.iter().enumerate() {
                        let field = format!("rankings[{i}][{k}]");
                        order.push(rank_entry(&field, entry)?);
                    }
                    orders.push(order);
                }
                GameSpec::BHedonic(BRanking::new(n, orders).map_err(|e| schema("rankings", e.to_string()))?)
            }
            other => return Err(schema("kind", format!("unknown kind `{other}`"))),
        };
        Ok(GameFile {
            name: raw.name,
            source: raw.source,
            game,
        })
    }

    pub fn to_json(&self) -> String {
        let n = self.game.n();
        let mut raw = RawGameFile {
            version: FORMAT_VERSION,
            kind: self.game.kind_tag().to_string(),
            n,
            name: self.name.clone(),
            source: self.source.clone(),
            preferences: None,
            tail: None,
            values: None,
            adjacency: None,
            rankings: None,
        };
        match &self.game {
            GameSpec::Explicit(l) => {
                raw.preferences = Some(
                    l.lists
                        .iter()
                        .map(|classes| {
                            classes
                                .iter()
                                .map(|cl| cl.iter().map(|c| c.indices()).collect())
                                .collect()
                        })
                        .collect(),
                );
                raw.tail = l.tail_bottom.then(|| "bottom".to_string());
            }
            GameSpec::Ashg(m) => raw.values = Some(m.rows().to_vec()),
            GameSpec::Friends(FriendsGraph(g)) | GameSpec::Enemies(EnemiesGraph(g)) => {
                raw.adjacency = Some(g.adjacency().iter().map(|c| c.indices()).collect());
            }
            GameSpec::BHedonic(r) => {
                raw.rankings = Some(
                    r.orders()
                        .into_iter()
                        .map(|o| o.into_iter().map(Value::from).collect())
                        .collect(),
                );
            }
        }
        let mut text = serde_json::to_string_pretty(&raw).expect("game files serialize");
        text.push('\n');
        text
    }
}

fn explicit(n: usize, prefs: Vec<Vec<Vec<Vec<usize>>>>, tail: Option<String>) -> Result<ExplicitListing, CliError> {
    let tail_bottom = match tail.as_deref() {
        None => false,
        Some("bottom") => true,
        Some(other) => return Err(schema("tail", format!("unknown marker `{other}`, expected `bottom`"))),
    };
    if prefs.len() != n {
        return Err(schema(
            "preferences",
            format!("{} players listed, expected {n}", prefs.len()),
        ));
    }
    let mut lists = Vec::with_capacity(n);
    for (i, classes) in prefs.iter().enumerate() {
        let mut player = Vec::with_capacity(classes.len());
        for (k, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(schema(format!("preferences[{i}][{k}]"), "empty indifference class"));
            }
            let mut cl = Vec::with_capacity(class.len());
            for (m, members) in class.iter().enumerate() {
                let field = format!("preferences[{i}][{k}][{m}]");
                let c = coalition(&field, members, n)?;
                if !members.contains(&(i + 1)) {
                    return Err(schema(field, format!("coalition does not contain its owner {}", i + 1)));
                }
                cl.push(c);
            }
            player.push(cl);
        }
        lists.push(player);
    }
    let listing = ExplicitListing { n, lists, tail_bottom };
    listing.profile().map_err(|e| schema("preferences", e.to_string()))?;
    Ok(listing)
}

fn rank_entry(field: &str, entry: &Value) -> Result<usize, CliError> {
    let single = match entry {
        Value::Array(items) if items.len() == 1 => &items[0],
        Value::Array(items) if items.len() > 1 => {
            return Err(schema(field, "tied players; only strict rankings are supported"));
        }
        other => other,
    };
    single
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| schema(field, "expected a player number"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hedonic::fixtures;

    #[test]
    fn fixtures_round_trip() {
        for name in fixtures::NAMES {
            let file = GameFile::new(GameSpec::Explicit(fixtures::by_name(name).unwrap()));
            let back = GameFile::parse(&file.to_json()).unwrap();
            assert_eq!(back, file, "{name}");
        }
    }

    #[test]
    fn compact_kinds_round_trip() {
        for kind in hedonic::GameKind::ALL {
            let file = GameFile::new(hedonic::classes::random_game(kind, 4, 3).unwrap());
            assert_eq!(GameFile::parse(&file.to_json()).unwrap(), file, "{kind}");
        }
    }

    fn field_of(text: &str) -> String {
        match GameFile::parse(text).unwrap_err() {
            CliError::Schema { field, .. } => field,
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn missing_owner_is_rejected() {
        let text = r#"{"version":1,"kind":"explicit","n":2,"preferences":[[[[2]],[[1]]],[[[2]],[[1,2]]]]}"#;
        assert_eq!(field_of(text), "preferences[0][0][0]");
    }

    #[test]
    fn incomplete_listing_needs_tail() {
        let text = r#"{"version":1,"kind":"explicit","n":2,"preferences":[[[[1,2]]],[[[2]],[[1,2]]]]}"#;
        assert_eq!(field_of(text), "preferences");
        let tailed = text.replace("\"n\":2,", "\"n\":2,\"tail\":\"bottom\",");
        assert!(GameFile::parse(&tailed).is_ok());
    }

    #[test]
    fn schema_errors_name_the_field() {
        assert_eq!(
            field_of(r#"{"version":2,"kind":"ashg","n":1,"values":[[0]]}"#),
            "version"
        );
        assert_eq!(
            field_of(r#"{"version":1,"kind":"ashg","n":2,"values":[[0,1],[1]]}"#),
            "values[1]"
        );
        assert_eq!(field_of(r#"{"version":1,"kind":"ashg","n":2}"#), "values");
        assert_eq!(field_of(r#"{"version":1,"kind":"dice","n":2}"#), "kind");
        assert_eq!(
            field_of(r#"{"version":1,"kind":"bhedonic","n":2,"rankings":[[[1,2]],[1,2]]}"#),
            "rankings[0][0]"
        );
        assert_eq!(
            field_of(r#"{"version":1,"kind":"explicit","n":2,"preferences":[[[[2,1]]],[[[2]]]],"tail":"bottom"}"#),
            "preferences[0][0][0]"
        );
    }
}
