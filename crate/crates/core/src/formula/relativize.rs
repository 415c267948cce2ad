use std::collections::BTreeSet;

use super::{desugar, Formula as F, Formula};

/// `Rel(Σ, φ)`: guards every modality so that only action points (those
/// satisfying `act = ⋁Σ`) are consulted. U/S guard the left operand with
/// `act →` and the right with `act ∧`; □ guards its body with `act →`; ◊
/// conjoins `act`. Other derived operators are desugared first.
pub fn relativize(sigma: &BTreeSet<String>, f: &Formula) -> Formula {
    let act = F::or_all(sigma.iter().map(F::atom));
    rel(&act, f)
}

fn rel(act: &Formula, f: &Formula) -> Formula {
    let guard = |a: &Formula| F::implies(act.clone(), rel(act, a));
    let with = |a: &Formula| F::and(act.clone(), rel(act, a));
    match f {
        F::Until(i, a, b) => F::until(*i, guard(a), with(b)),
        F::Since(i, a, b) => F::since(*i, guard(a), with(b)),
        F::Always(i, a) => F::always(*i, guard(a)),
        F::AlwaysPast(i, a) => F::always_past(*i, guard(a)),
        F::Eventually(i, a) => F::eventually(*i, with(a)),
        F::EventuallyPast(i, a) => F::eventually_past(*i, with(a)),
        F::Next(..)
        | F::Prev(..)
        | F::UntilNs(..)
        | F::SinceNs(..)
        | F::EventuallyNs(..)
        | F::AlwaysNs(..) => rel(act, &desugar(f)),
        _ => f.map_children(|c| rel(act, c)),
    }
}
