use super::{Formula as F, Formula};
use crate::timedword::Interval;

fn contains_zero(i: &Option<Interval>) -> bool {
    i.is_none_or(|i| i.contains_zero())
}

/// Rewrites derived operators into strict U/S and booleans:
/// `◊_I a = ⊤ U_I a`, `□_I a = ¬◊_I ¬a`, `O_I a = ⊥ U_I a`, and the
/// non-strict variants `a U^ns_I b = (b ∧ 0∈I) ∨ (a ∧ a U_I b)`.
pub fn desugar(f: &Formula) -> Formula {
    let d = |a: &Formula| desugar(a);
    match f {
        F::Eventually(i, a) => F::until(*i, F::True, d(a)),
        F::EventuallyPast(i, a) => F::since(*i, F::True, d(a)),
        F::Always(i, a) => F::not(F::until(*i, F::True, F::not(d(a)))),
        F::AlwaysPast(i, a) => F::not(F::since(*i, F::True, F::not(d(a)))),
        F::Next(i, a) => F::until(*i, F::False, d(a)),
        F::Prev(i, a) => F::since(*i, F::False, d(a)),
        F::UntilNs(i, a, b) => {
            let (a, b) = (d(a), d(b));
            let strict = F::and(a.clone(), F::until(*i, a, b.clone()));
            if contains_zero(i) {
                F::or(b, strict)
            } else {
                strict
            }
        }
        F::SinceNs(i, a, b) => {
            let (a, b) = (d(a), d(b));
            let strict = F::and(a.clone(), F::since(*i, a, b.clone()));
            if contains_zero(i) {
                F::or(b, strict)
            } else {
                strict
            }
        }
        F::EventuallyNs(a) => {
            let a = d(a);
            F::or(a.clone(), F::until(None, F::True, a))
        }
        F::AlwaysNs(a) => {
            let a = d(a);
            F::and(a.clone(), F::not(F::until(None, F::True, F::not(a))))
        }
        _ => f.map_children(desugar),
    }
}

fn fresh_var(f: &Formula, base: &str) -> String {
    let used = f.variables();
    (1..)
        .map(|n| format!("{base}{n}"))
        .find(|v| !used.contains(v))
        .expect("unbounded supply of names")
}

/// The standard MTL-to-TPTL embedding, applied after [`desugar`]:
/// `a U_I b ↦ x.(a U (b ∧ T−x ∈ I))` and `a S_I b ↦ x.(a S (b ∧ x−T ∈ I))`.
/// The formula's own freeze variable is reused (default `x`) unless an
/// operand mentions it freely.
pub fn embed_mtl(f: &Formula) -> Formula {
    let g = desugar(f);
    let var = g
        .variables()
        .into_iter()
        .next()
        .unwrap_or_else(|| "x".into());
    embed(&g, &var, &g)
}

fn embed(f: &Formula, var: &str, root: &Formula) -> Formula {
    let timed = |i: &Option<Interval>| i.filter(|i| *i != Interval::nonnegative());
    match f {
        F::Until(i, a, b) | F::Since(i, a, b) => {
            let (a, b) = (embed(a, var, root), embed(b, var, root));
            let future = matches!(f, F::Until(..));
            let Some(i) = timed(i) else {
                return if future {
                    F::until(None, a, b)
                } else {
                    F::since(None, a, b)
                };
            };
            let x = if a.free_vars().contains(var) || b.free_vars().contains(var) {
                fresh_var(root, var)
            } else {
                var.to_string()
            };
            if future {
                F::freeze(x.clone(), F::until(None, a, F::and(b, F::t_minus_x(x, i))))
            } else {
                F::freeze(x.clone(), F::since(None, a, F::and(b, F::x_minus_t(x, i))))
            }
        }
        _ => f.map_children(|c| embed(c, var, root)),
    }
}
