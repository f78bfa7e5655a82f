//! Exhaustive ground truth over all partitions of small games.

use std::fmt;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{random_game, GameKind, GameSpec};
use crate::error::{HedonicError, Result};
use crate::partition::{enumerate_partitions_capped, Partition};
use crate::profile::PreferenceProfile;
use crate::stability::{flag, lattice_violations, Caps, Checker, Concept, HierarchyViolation};

fn cap_for(concept: Concept, caps: Caps) -> usize {
    if concept.enumerates() {
        caps.double_enumeration
    } else {
        caps.enumeration
    }
}

fn checker_for(profile: &PreferenceProfile, concept: Concept, caps: Caps) -> Result<Checker<'_>> {
    HedonicError::check_cap(concept.tag(), profile.n(), cap_for(concept, caps))?;
    let checker = Checker::new(profile, caps);
    checker.partitions()?;
    Ok(checker)
}

/// Every partition stable under `concept`, in enumeration order.
pub fn all_stable(profile: &PreferenceProfile, concept: Concept, caps: Caps) -> Result<Vec<Partition>> {
    let checker = checker_for(profile, concept, caps)?;
    let flags: Vec<bool> = checker
        .partitions()?
        .par_iter()
        .map(|pi| checker.holds(pi, concept))
        .collect::<Result<_>>()?;
    Ok(checker
        .partitions()?
        .iter()
        .zip(flags)
        .filter(|&(_, ok)| ok)
        .map(|(pi, _)| pi.clone())
        .collect())
}

/// Whether some partition is stable. Large blocks are tried first.
pub fn exists_stable(profile: &PreferenceProfile, concept: Concept, caps: Caps) -> Result<bool> {
    let checker = checker_for(profile, concept, caps)?;
    let mut order: Vec<&Partition> = checker.partitions()?.iter().collect();
    order.sort_by_cached_key(|pi| std::cmp::Reverse(pi.size_vector()));
    let found = order
        .par_iter()
        .map(|pi| checker.holds(pi, concept))
        .find_any(|r| !matches!(r, Ok(false)));
    found.transpose().map(|r| r.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub seed: u64,
    pub n: usize,
    pub game: GameSpec,
}

/// The first seed in `1..=budget` whose game satisfies `predicate`. Seed `s`
/// draws a game with `n = n_lo + (s - 1) % (n_hi - n_lo + 1)` players.
pub fn search_counterexample<F>(
    kind: GameKind,
    sizes: RangeInclusive<usize>,
    budget: u64,
    predicate: F,
) -> Result<Option<Counterexample>>
where
    F: Fn(&PreferenceProfile) -> Result<bool>,
{
    let (lo, hi) = (*sizes.start(), *sizes.end());
    if lo == 0 || hi < lo {
        return Err(HedonicError::domain(format!("empty size range {lo}..={hi}")));
    }
    let span = (hi - lo + 1) as u64;
    for seed in 1..=budget {
        let n = lo + ((seed - 1) % span) as usize;
        let game = random_game(kind, n, seed)?;
        if predicate(&game.profile()?)? {
            return Ok(Some(Counterexample { seed, n, game }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConceptReport {
    pub concept: Concept,
    pub count: usize,
    pub stable: Vec<Partition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub game: String,
    pub n: usize,
    pub partitions: usize,
    pub concepts: Vec<ConceptReport>,
    pub hierarchy_violations: Vec<HierarchyViolation>,
    #[serde(rename = "elapsed_ms", serialize_with = "millis")]
    pub elapsed: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

impl OracleReport {
    pub fn concept(&self, concept: Concept) -> &ConceptReport {
        self.concepts
            .iter()
            .find(|r| r.concept == concept)
            .expect("every concept is reported")
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "game {} n={} partitions={}", self.game, self.n, self.partitions)?;
        writeln!(f, "{:<8} {:>6}  stable partitions", "concept", "count")?;
        for r in &self.concepts {
            let list: Vec<String> = r.stable.iter().map(ToString::to_string).collect();
            writeln!(f, "{:<8} {:>6}  {}", r.concept.tag(), r.count, list.join(" "))?;
        }
        if self.hierarchy_violations.is_empty() {
            writeln!(f, "hierarchy violations: none")?;
        } else {
            writeln!(f, "hierarchy violations: {}", self.hierarchy_violations.len())?;
            for v in &self.hierarchy_violations {
                writeln!(f, "  {v}")?;
            }
        }
        writeln!(f, "elapsed {} ms", self.elapsed.as_millis())
    }
}

/// Stable sets for every concept plus the lattice check, from one pass over
/// the partitions.
pub fn survey(game: &str, profile: &PreferenceProfile, caps: Caps) -> Result<OracleReport> {
    let start = Instant::now();
    HedonicError::check_cap("survey", profile.n(), caps.double_enumeration)?;
    let checker = Checker::new(profile, caps);
    let partitions = checker.partitions()?;
    let flags: Vec<[bool; 10]> = partitions
        .par_iter()
        .map(|pi| checker.all_flags(pi))
        .collect::<Result<_>>()?;
    let concepts = Concept::ALL
        .into_iter()
        .map(|concept| {
            let stable: Vec<Partition> = partitions
                .iter()
                .zip(&flags)
                .filter(|(_, f)| flag(f, concept))
                .map(|(pi, _)| pi.clone())
                .collect();
            ConceptReport {
                concept,
                count: stable.len(),
                stable,
            }
        })
        .collect();
    let hierarchy_violations = partitions
        .iter()
        .zip(&flags)
        .flat_map(|(pi, f)| lattice_violations(pi, f))
        .collect();
    Ok(OracleReport {
        game: game.to_string(),
        n: profile.n(),
        partitions: partitions.len(),
        concepts,
        hierarchy_violations,
        elapsed: start.elapsed(),
    })
}

/// Rough number of elementary checks a survey performs, for cap overrides.
pub fn survey_cost(n: usize) -> Result<u128> {
    let bell = enumerate_partitions_capped(n, n)?.count() as u128;
    Ok(bell * bell * 4 + bell * (1u128 << n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn part(n: usize, s: &str) -> Partition {
        Partition::parse(n, s).unwrap()
    }

    fn game(name: &str) -> PreferenceProfile {
        fixtures::by_name(name).unwrap().profile().unwrap()
    }

    #[test]
    fn prop2_scans() {
        let g = game("prop2");
        assert_eq!(all_stable(&g, Concept::Sns, Caps::default()).unwrap(), vec![]);
        assert_eq!(
            all_stable(&g, Concept::Sc, Caps::default()).unwrap(),
            vec![part(4, "1,2|3,4"), part(4, "1,4|2,3")]
        );
        assert!(!exists_stable(&g, Concept::Sns, Caps::default()).unwrap());
    }

    #[test]
    fn example_scans() {
        assert_eq!(
            all_stable(&game("example1"), Concept::Perfect, Caps::default()).unwrap(),
            vec![]
        );
        assert!(exists_stable(&game("example2"), Concept::Sns, Caps::default()).unwrap());
        for name in fixtures::NAMES {
            assert!(exists_stable(&game(name), Concept::Ir, Caps::default()).unwrap());
        }
    }

    #[test]
    fn survey_matches_scans() {
        for name in fixtures::NAMES {
            let g = game(name);
            let report = survey(name, &g, Caps::default()).unwrap();
            assert!(report.hierarchy_violations.is_empty());
            for concept in Concept::ALL {
                let r = report.concept(concept);
                assert_eq!(r.stable, all_stable(&g, concept, Caps::default()).unwrap());
                assert_eq!(r.count, r.stable.len());
            }
        }
    }

    #[test]
    fn counterexample_search_is_deterministic() {
        let pred = |g: &PreferenceProfile| Ok(g.n() == 5);
        let a = search_counterexample(GameKind::Enemies, 4..=6, 10, pred)
            .unwrap()
            .unwrap();
        assert_eq!((a.seed, a.n), (2, 5));
        let none = search_counterexample(GameKind::Enemies, 4..=4, 5, |_| Ok(false)).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn caps_apply_per_concept() {
        let g = crate::classes::random_game(GameKind::Explicit, 8, 1)
            .unwrap()
            .profile()
            .unwrap();
        assert!(matches!(
            all_stable(&g, Concept::Sns, Caps::default()),
            Err(HedonicError::Capacity { .. })
        ));
        assert!(all_stable(&g, Concept::Ir, Caps::default()).is_ok());
    }
}
