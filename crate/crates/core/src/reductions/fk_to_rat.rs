use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::automata::{RewireTarget, SymbolicNfa};
use crate::formula::{FkArgs, Formula as F, Formula, RatArgs};
use crate::timedword::{Endpoint, Interval};

use super::{ReductionError, ReductionReport};

/// Consecutive windows partitioning `[0, ∞)` such that each window lies
/// inside or outside every interval, paired with the covering intervals.
pub(crate) fn windows(intervals: &[Interval]) -> Vec<(Interval, BTreeSet<usize>)> {
    let mut points: BTreeSet<i64> = BTreeSet::from([0]);
    for i in intervals {
        for e in [i.lo(), i.hi()] {
            if let Endpoint::Finite(v) = e {
                if v >= 0 {
                    points.insert(v);
                }
            }
        }
    }
    let pts: Vec<i64> = points.into_iter().collect();
    let mut atoms = Vec::new();
    for (k, p) in pts.iter().enumerate() {
        atoms.push(Interval::closed(*p, *p).expect("point"));
        match pts.get(k + 1) {
            Some(q) => atoms.push(Interval::open(*p, *q).expect("gap")),
            None => atoms.push(Interval::unbounded_from(*p, false)),
        }
    }
    let cover = |a: &Interval| -> BTreeSet<usize> {
        intervals
            .iter()
            .enumerate()
            .filter(|(_, i)| contains_interval(i, a))
            .map(|(w, _)| w)
            .collect()
    };
    let mut out: Vec<(Interval, BTreeSet<usize>)> = Vec::new();
    for a in atoms {
        let c = cover(&a);
        match out.last_mut() {
            Some((r, rc)) if *rc == c => {
                *r = Interval::new(r.lo(), a.hi(), r.lo_closed(), a.hi_closed()).expect("merge");
            }
            _ => out.push((a, c)),
        }
    }
    out
}

// Atoms are either points or open gaps between consecutive points.
fn contains_interval(outer: &Interval, atom: &Interval) -> bool {
    let lo_ok = match outer.lo().cmp(&atom.lo()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => outer.lo_closed() || !atom.lo_closed(),
        std::cmp::Ordering::Greater => false,
    };
    let hi_ok = match outer.hi().cmp(&atom.hi()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => outer.hi_closed() || !atom.hi_closed(),
        std::cmp::Ordering::Less => false,
    };
    lo_ok && hi_ok
}

type State = (usize, usize);

struct Builder<'a> {
    k: &'a FkArgs,
    windows: Vec<(Interval, BTreeSet<usize>)>,
    cache: BTreeMap<(usize, State, State), Option<Arc<SymbolicNfa>>>,
}

impl Builder<'_> {
    fn states(&self) -> Vec<State> {
        self.k
            .automata
            .iter()
            .enumerate()
            .flat_map(|(a, nfa)| (0..nfa.num_states()).map(move |q| (a, q)))
            .collect()
    }

    // Words read inside window `m` moving from `s` to `t`, or None if empty.
    fn language(&mut self, m: usize, s: State, t: State) -> Option<Arc<SymbolicNfa>> {
        if let Some(hit) = self.cache.get(&(m, s, t)) {
            return hit.clone();
        }
        let lang = self.build_language(m, s, t);
        self.cache.insert((m, s, t), lang.clone());
        lang
    }

    fn build_language(&self, m: usize, (a, q): State, (b, q2): State) -> Option<Arc<SymbolicNfa>> {
        let au = &self.k.automata;
        if b < a || (a..b).any(|w| !self.windows[m].1.contains(&w)) {
            return None;
        }
        let lang = if a == b {
            au[a].rewire(q, RewireTarget::State(q2)).ok()?
        } else {
            let mut parts = vec![au[a]
                .rewire(q, RewireTarget::Accepting)
                .ok()?
                .without_epsilon()];
            for nfa in &au[a + 1..b] {
                parts.push(nfa.rewire(nfa.init(), RewireTarget::Accepting).ok()?);
            }
            parts.push(au[b].rewire(au[b].init(), RewireTarget::State(q2)).ok()?);
            SymbolicNfa::concat_all(au[a].width(), parts.iter()).ok()?
        };
        let lang = lang.trim().with_numbered_states();
        (!lang.is_empty()).then(|| Arc::new(lang))
    }
}

fn static_prefixes(k: &FkArgs) -> Vec<usize> {
    let mut out = vec![0];
    for (w, iv) in k.intervals.iter().enumerate() {
        if iv.contains_zero() && k.automata[w].accepts_epsilon() {
            out.push(w + 1);
        } else {
            break;
        }
    }
    out
}

/// Translates an `F^k` node without checking interval shapes.
pub fn fk_to_rat_unchecked(f: &Formula) -> Result<ReductionReport, ReductionError> {
    let F::Fk(k) = f else {
        return Err(ReductionError::WrongNode {
            expected: "Fk",
            found: crate::formula::print(f),
        });
    };
    let mut b = Builder {
        k,
        windows: windows(&k.intervals),
        cache: BTreeMap::new(),
    };
    let states = b.states();
    let m_count = b.windows.len();
    let last = k.automata.len() - 1;
    let finals: BTreeSet<State> = k.automata[last]
        .accepting()
        .iter()
        .map(|q| (last, *q))
        .collect();

    // alive[m]: boundary states before window m from which the end is reachable.
    let mut alive: Vec<BTreeSet<State>> = vec![BTreeSet::new(); m_count + 1];
    alive[m_count] = finals;
    for m in (0..m_count).rev() {
        let next = alive[m + 1].clone();
        for &s in &states {
            if next.iter().any(|&t| b.language(m, s, t).is_some()) {
                alive[m].insert(s);
            }
        }
    }

    let mut paths = Vec::new();
    let mut disjuncts = Vec::new();
    for c in static_prefixes(k) {
        let start = (c, k.automata[c].init());
        if alive[0].contains(&start) {
            let mut path = vec![start];
            disjuncts.push(expand(&mut b, &alive, 0, start, &mut path, &mut paths));
        }
    }
    let output = F::or_all(disjuncts);

    let sizes: Vec<usize> = k.automata.iter().map(|a| a.num_states()).collect();
    let tuples =
        sizes[..k.arity()].iter().product::<usize>() * sizes[1..].iter().product::<usize>();
    Ok(ReductionReport {
        input_size: f.size(),
        output_size: output.size(),
        input: f.clone(),
        output,
        witness_states: paths,
        windows: b
            .windows
            .iter()
            .map(|(i, c)| (i.to_string(), c.iter().copied().collect()))
            .collect(),
        tuples_before_pruning: tuples,
    })
}

fn expand(
    b: &mut Builder<'_>,
    alive: &[BTreeSet<State>],
    m: usize,
    s: State,
    path: &mut Vec<State>,
    paths: &mut Vec<Vec<State>>,
) -> Formula {
    if m == b.windows.len() {
        paths.push(path.clone());
        return F::True;
    }
    let window = b.windows[m].0;
    let set = b.k.set.clone();
    let mut options = Vec::new();
    for &t in &alive[m + 1] {
        let Some(lang) = b.language(m, s, t) else {
            continue;
        };
        path.push(t);
        let rest = expand(b, alive, m + 1, t, path, paths);
        path.pop();
        let here = F::Rat(
            window,
            RatArgs {
                automaton: lang,
                set: set.clone(),
            },
        );
        options.push(if rest == F::True {
            here
        } else {
            F::and(here, rest)
        });
    }
    F::or_all(options)
}

fn check_intervals(intervals: &[Interval]) -> Result<(), ReductionError> {
    for (index, iv) in intervals.iter().enumerate() {
        if !iv.is_closed_set() {
            return Err(ReductionError::NotClosed {
                index: index + 1,
                interval: *iv,
            });
        }
    }
    for pair in intervals.windows(2) {
        if pair[0].sup() > pair[1].inf() {
            return Err(ReductionError::Unsorted {
                a: pair[0],
                b: pair[1],
            });
        }
    }
    Ok(())
}

/// `ψ_f` for an `F^k` node whose intervals are closed and sorted
/// (`sup(I_j) ≤ inf(I_{j+1})`).
pub fn fk_to_rat(f: &Formula) -> Result<ReductionReport, ReductionError> {
    if let F::Fk(k) = f {
        check_intervals(&k.intervals)?;
    }
    fk_to_rat_unchecked(f)
}

/// [`fk_to_rat`] for arbitrary (open, half-open, unsorted) intervals.
#[cfg(feature = "general-intervals")]
pub fn fk_to_rat_general(f: &Formula) -> Result<ReductionReport, ReductionError> {
    fk_to_rat_unchecked(f)
}

/// Rewrites every `F^k` node of `f`, innermost first.
pub fn fk_to_rat_formula(f: &Formula) -> Result<Formula, ReductionError> {
    let mut err = None;
    let inner = f.map_children(|c| {
        fk_to_rat_formula(c).unwrap_or_else(|e| {
            err.get_or_insert(e);
            c.clone()
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    match inner {
        F::Fk(_) => Ok(fk_to_rat(&inner)?.output),
        other => Ok(other),
    }
}
