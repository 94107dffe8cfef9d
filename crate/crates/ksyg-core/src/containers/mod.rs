//! Reusable kinetic primitives: sorted lists and tournament trees.
//!
//! Both order elements by polynomial keys evaluated at the queue's current
//! time. Momentary key ties at event instants are broken by the sign just
//! after now (the order that is valid on the upcoming interval); coincident
//! key polynomials are ordered by an explicit tie rank and their
//! certificates stay inert.

pub mod sorted_list;
pub mod tournament;

pub use sorted_list::KineticSortedList;
pub use tournament::KineticTournament;

use crate::num::{QPoly, SimTime};
use std::cmp::Ordering;

/// Orders element `a` before `b` at (and just after) time `now`.
pub(crate) fn cmp_keys(
    now: &SimTime,
    key_a: &QPoly,
    tie_a: u64,
    key_b: &QPoly,
    tie_b: u64,
) -> Ordering {
    let diff = key_b.sub(key_a);
    match now.sign_of_poly(&diff) {
        s if s > 0 => Ordering::Less,
        s if s < 0 => Ordering::Greater,
        _ => match now.sign_just_after(&diff) {
            s if s > 0 => Ordering::Less,
            s if s < 0 => Ordering::Greater,
            _ => tie_a.cmp(&tie_b),
        },
    }
}
