use serde::{Deserialize, Serialize};

use super::{Endpoint, Interval};

/// Which flavour of non-adjacency a set of intervals is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NonAdjacency {
    Plain,
    Positive,
    Negative,
}

// A shared boundary value `v` between two intervals is tolerated when `ok(v)`.
fn shared_boundaries_ok(a: &Interval, b: &Interval, ok: impl Fn(i64) -> bool) -> bool {
    let check = |x: Endpoint, y: Endpoint| match (x, y) {
        (Endpoint::Finite(v), Endpoint::Finite(w)) if v == w => ok(v),
        _ => true,
    };
    check(a.sup(), b.inf()) && check(a.inf(), b.sup())
}

/// `sup(a) = inf(b)` forces `sup(a) = 0`, and `inf(a) = sup(b)` forces `inf(a) = 0`.
pub fn is_nonadjacent(a: &Interval, b: &Interval) -> bool {
    shared_boundaries_ok(a, b, |v| v == 0)
}

pub fn is_adjacent(a: &Interval, b: &Interval) -> bool {
    !is_nonadjacent(a, b)
}

/// Shared boundaries may only be non-positive.
pub fn is_positively_nonadjacent(a: &Interval, b: &Interval) -> bool {
    shared_boundaries_ok(a, b, |v| v <= 0)
}

/// Shared boundaries may only be non-negative.
pub fn is_negatively_nonadjacent(a: &Interval, b: &Interval) -> bool {
    shared_boundaries_ok(a, b, |v| v >= 0)
}

/// Checks every ordered pair of `intervals`, each interval also against itself.
pub fn set_nonadjacency(kind: NonAdjacency, intervals: &[Interval]) -> bool {
    let pair_ok = match kind {
        NonAdjacency::Plain => is_nonadjacent,
        NonAdjacency::Positive => is_positively_nonadjacent,
        NonAdjacency::Negative => is_negatively_nonadjacent,
    };
    intervals
        .iter()
        .all(|a| intervals.iter().all(|b| pair_ok(a, b)))
}
