//! Bundled example games, written exactly as their preference lists read.
//!
//! * `example1`: top responsive and mutual, yet no partition is perfect.
//! * `example2`: strongly bottom responsive and mutual.
//! * `prop2`: two strict-core and Nash stable partitions, no strong Nash
//!   stable one. Unlisted coalitions form a bottom class.
//! * `prop3`: a strong Nash stable partition that is Pareto dominated.
//!   Unlisted coalitions form a bottom class.

use crate::coalition::Coalition;
use crate::profile::ExplicitListing;

pub const NAMES: [&str; 4] = ["example1", "example2", "prop2", "prop3"];

fn listing(n: usize, tail_bottom: bool, lists: &[&[&[&[usize]]]]) -> ExplicitListing {
    ExplicitListing {
        n,
        lists: lists
            .iter()
            .map(|player| {
                player
                    .iter()
                    .map(|class| class.iter().map(|c| Coalition::of(c)).collect())
                    .collect()
            })
            .collect(),
        tail_bottom,
    }
}

pub fn example1() -> ExplicitListing {
    listing(
        3,
        false,
        &[
            &[&[&[1, 2]], &[&[1, 2, 3]], &[&[1]], &[&[1, 3]]],
            &[&[&[1, 2, 3]], &[&[1, 2], &[2, 3]], &[&[2]]],
            &[&[&[2, 3]], &[&[1, 2, 3]], &[&[3]], &[&[1, 3]]],
        ],
    )
}

pub fn example2() -> ExplicitListing {
    listing(
        3,
        false,
        &[
            &[&[&[1, 3]], &[&[1]], &[&[1, 2, 3]], &[&[1, 2]]],
            &[&[&[2, 3]], &[&[2]], &[&[1, 2, 3]], &[&[1, 2]]],
            &[&[&[1, 2, 3]], &[&[1, 3], &[2, 3]], &[&[3]]],
        ],
    )
}

pub fn prop2() -> ExplicitListing {
    listing(
        4,
        true,
        &[
            &[&[&[1, 2]], &[&[1, 4]], &[&[1]]],
            &[&[&[2, 3]], &[&[1, 2]], &[&[2]]],
            &[&[&[3, 4]], &[&[2, 3]], &[&[3]]],
            &[&[&[1, 4]], &[&[3, 4]], &[&[4]]],
        ],
    )
}

pub fn prop3() -> ExplicitListing {
    listing(
        4,
        true,
        &[
            &[&[&[1, 2], &[1, 3], &[1, 4]]],
            &[&[&[1, 2], &[2, 3], &[2, 4]]],
            &[&[&[2, 3], &[3, 4]]],
            &[&[&[1, 4], &[2, 4]], &[&[3, 4]]],
        ],
    )
}

pub fn by_name(name: &str) -> Option<ExplicitListing> {
    match name {
        "example1" => Some(example1()),
        "example2" => Some(example2()),
        "prop2" => Some(prop2()),
        "prop3" => Some(prop3()),
        _ => None,
    }
}

pub fn all() -> Vec<ExplicitListing> {
    NAMES.iter().filter_map(|n| by_name(n)).collect()
}
