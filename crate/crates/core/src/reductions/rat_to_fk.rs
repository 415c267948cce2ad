use std::sync::Arc;

use crate::automata::{compile_regex, Letter, SymbolicNfa};
use crate::formula::{FkArgs, Formula as F, Formula, RatArgs};
use crate::timedword::{Endpoint, Interval};

use super::{ReductionError, ReductionReport};

// Offsets strictly before the window (including 0), if any.
fn before(w: &Interval) -> Option<Interval> {
    let l = w.lo().finite().unwrap_or(0);
    match (l, w.lo_closed()) {
        (0, true) => None,
        (l, true) => Interval::left_closed(0, l).ok(),
        (l, false) => Interval::closed(0, l).ok(),
    }
}

// Offsets strictly after the window, if any.
fn after(w: &Interval) -> Option<Interval> {
    match w.hi() {
        Endpoint::Finite(u) => Some(Interval::unbounded_from(u, !w.hi_closed())),
        _ => None,
    }
}

fn fk(intervals: Vec<Interval>, automata: Vec<SymbolicNfa>, set: &Arc<Vec<Formula>>) -> Formula {
    F::Fk(FkArgs {
        intervals,
        automata: automata.into_iter().map(Arc::new).collect(),
        set: set.clone(),
    })
}

/// Translates a `Rat_W(L)` node into a disjunction of `F^k` modalities
/// without checking the shape of `W`.
pub fn rat_to_fk_any(f: &Formula) -> Result<ReductionReport, ReductionError> {
    let F::Rat(w, RatArgs { automaton, set }) = f else {
        return Err(ReductionError::WrongNode {
            expected: "Rat",
            found: crate::formula::print(f),
        });
    };
    let w = *w;
    let n = automaton.width();
    let any = SymbolicNfa::universal(n);
    let one = SymbolicNfa::any_letter(n);
    let plus = one.concat(&any).expect("same width");
    let eps = SymbolicNfa::epsilon_only(n);
    let b = before(&w);
    let a = after(&w);

    let mut disjuncts = Vec::new();
    if automaton.accepts_epsilon() {
        disjuncts.push(F::not(fk(vec![w], vec![plus, any.clone()], set)));
    }
    for c in (0..1u32 << n).map(Letter) {
        let quotient = automaton.left_quotient(c).expect("same width");
        if quotient.is_empty() {
            continue;
        }
        let first = SymbolicNfa::single_letter(n, c);
        let (ivs, mut autos) = match b {
            Some(b) => (vec![b, w, w], vec![any.clone(), first, quotient]),
            None => (vec![w, w], vec![first, quotient]),
        };
        if let Some(a) = a {
            let mut ivs = ivs.clone();
            ivs.push(a);
            let mut autos = autos.clone();
            autos.extend([one.clone(), any.clone()]);
            disjuncts.push(fk(ivs, autos, set));
        }
        autos.push(eps.clone());
        disjuncts.push(fk(ivs, autos, set));
    }
    let output = F::or_all(disjuncts);
    Ok(ReductionReport {
        input_size: f.size(),
        output_size: output.size(),
        input: f.clone(),
        output,
        witness_states: Vec::new(),
        windows: [b, Some(w), a]
            .into_iter()
            .flatten()
            .map(|i| (i.to_string(), Vec::new()))
            .collect(),
        tuples_before_pruning: 1 << n,
    })
}

/// `Rat_W(L)` as `F^k` modalities, for a closed window `W`.
pub fn rat_to_fk(f: &Formula) -> Result<ReductionReport, ReductionError> {
    if let F::Rat(w, _) = f {
        if !w.is_closed_set() {
            return Err(ReductionError::NotClosed {
                index: 1,
                interval: *w,
            });
        }
    }
    rat_to_fk_any(f)
}

/// Rewrites every `Rat` node of `f`, innermost first, accepting any window.
pub fn rat_to_fk_formula(f: &Formula) -> Result<Formula, ReductionError> {
    let mut err = None;
    let inner = f.map_children(|c| {
        rat_to_fk_formula(c).unwrap_or_else(|e| {
            err.get_or_insert(e);
            c.clone()
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    match inner {
        F::Rat(..) => Ok(rat_to_fk_any(&inner)?.output),
        other => Ok(other),
    }
}

/// `a U_I b` as `FRat_I((f1 + {f1,f2})* . (f2 + {f1,f2}))` over `(a; b)`,
/// and `a S_I b` as the mirrored `PRat`.
pub fn until_via_frat(f: &Formula) -> Result<Formula, ReductionError> {
    let (i, a, b, future) = match f {
        F::Until(i, a, b) => (i, a, b, true),
        F::Since(i, a, b) => (i, a, b, false),
        _ => {
            return Err(ReductionError::WrongNode {
                expected: "Until or Since",
                found: crate::formula::print(f),
            })
        }
    };
    let names = ["f1".to_string(), "f2".to_string()];
    let nfa = compile_regex("({f1} + {f1,f2})* . ({f2} + {f1,f2})", &names).expect("fixed regex");
    let args = RatArgs::new(nfa, vec![(**a).clone(), (**b).clone()])?;
    let iv = i.unwrap_or_else(Interval::nonnegative);
    Ok(if future {
        F::FRat(iv, args)
    } else {
        F::PRat(iv, args)
    })
}
