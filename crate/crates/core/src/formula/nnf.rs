use super::{embed_mtl, Formula as F, Formula};
use crate::timedword::Interval;

/// Negation normal form over the grammar
/// `a | ¬a | ⊤ | ⊥ | x.φ | T−x∈I | x−T∈I | φ∧φ | φ∨φ | φUφ | φSφ | □φ | ⊟φ`.
///
/// Derived operators are desugared and timed modalities embedded into
/// 1-TPTL first. Automata modalities are left in place (negated whole).
pub fn to_nnf(f: &Formula) -> Formula {
    pos(&embed_mtl(f))
}

fn pos(f: &Formula) -> Formula {
    match f {
        F::Not(a) => neg(a),
        F::Implies(a, b) => F::or(neg(a), pos(b)),
        F::Iff(a, b) => F::and(F::or(neg(a), pos(b)), F::or(pos(a), neg(b))),
        _ => f.map_children(pos),
    }
}

fn complement(i: &Interval, mk: impl Fn(Interval) -> Formula) -> Formula {
    F::or_all(i.complement().into_iter().map(mk))
}

fn neg(f: &Formula) -> Formula {
    match f {
        F::True => F::False,
        F::False => F::True,
        F::Atom(_) => F::not(f.clone()),
        F::TMinusX(x, i) => complement(i, |j| F::t_minus_x(x.clone(), j)),
        F::XMinusT(x, i) => complement(i, |j| F::x_minus_t(x.clone(), j)),
        F::Not(a) => pos(a),
        F::And(a, b) => F::or(neg(a), neg(b)),
        F::Or(a, b) => F::and(neg(a), neg(b)),
        F::Implies(a, b) => F::and(pos(a), neg(b)),
        F::Iff(a, b) => F::or(F::and(pos(a), neg(b)), F::and(neg(a), pos(b))),
        F::Until(None, a, b) => {
            let (na, nb) = (neg(a), neg(b));
            let never = F::always(None, nb.clone());
            if na == F::False {
                never
            } else {
                F::or(never, F::until(None, nb.clone(), F::and(na, nb)))
            }
        }
        F::Since(None, a, b) => {
            let (na, nb) = (neg(a), neg(b));
            let never = F::always_past(None, nb.clone());
            if na == F::False {
                never
            } else {
                F::or(never, F::since(None, nb.clone(), F::and(na, nb)))
            }
        }
        F::Always(None, a) => F::until(None, F::True, neg(a)),
        F::AlwaysPast(None, a) => F::since(None, F::True, neg(a)),
        F::Freeze(x, a) => F::freeze(x.clone(), neg(a)),
        _ => F::not(pos(f)),
    }
}

/// Structural check that `f` is in the grammar produced by [`to_nnf`].
pub fn is_nnf(f: &Formula) -> bool {
    match f {
        F::True | F::False | F::Atom(_) | F::TMinusX(..) | F::XMinusT(..) => true,
        F::Not(a) => matches!(**a, F::Atom(_)),
        F::And(a, b) | F::Or(a, b) | F::Until(None, a, b) | F::Since(None, a, b) => {
            is_nnf(a) && is_nnf(b)
        }
        F::Always(None, a) | F::AlwaysPast(None, a) | F::Freeze(_, a) => is_nnf(a),
        _ => false,
    }
}
