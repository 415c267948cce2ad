use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{desugar, to_nnf, Formula as F, Formula};
use crate::timedword::{set_nonadjacency, Interval, NonAdjacency};

/// Adjacency class of a PnEMTL formula, judged per automata modality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PnemtlAdjacency {
    /// Every F and P modality has non-adjacent intervals.
    Na,
    /// Only the F modalities are guaranteed non-adjacent.
    NaPlus,
    /// Only the P modalities are guaranteed non-adjacent.
    NaMinus,
    None,
    NotPnemtl,
}

impl fmt::Display for PnemtlAdjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PnemtlAdjacency::Na => "na",
            PnemtlAdjacency::NaPlus => "na_plus",
            PnemtlAdjacency::NaMinus => "na_minus",
            PnemtlAdjacency::None => "none",
            PnemtlAdjacency::NotPnemtl => "not_pnemtl",
        })
    }
}

/// Constraint intervals (as `T − x` sets) sharing one freeze quantifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScopeIntervals {
    /// `x#n` for the n-th freeze quantifier in pre-order, `x#free` for
    /// constraints on a free variable.
    pub scope: String,
    pub intervals: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FragmentReport {
    pub is_mtl: bool,
    pub is_mitl: bool,
    pub is_mtl_future_only: bool,
    pub is_pmtl: bool,
    pub is_tptl: bool,
    pub is_1tptl: bool,
    pub is_open_tptl: bool,
    pub is_na_1tptl: bool,
    pub is_na_plus: bool,
    pub is_na_minus: bool,
    pub is_pa_1tptl: bool,
    pub pnemtl_adjacency: PnemtlAdjacency,
    pub scopes: Vec<ScopeIntervals>,
}

impl fmt::Display for FragmentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in [
            ("is_mtl", self.is_mtl),
            ("is_mitl", self.is_mitl),
            ("is_mtl_future_only", self.is_mtl_future_only),
            ("is_pmtl", self.is_pmtl),
            ("is_tptl", self.is_tptl),
            ("is_1tptl", self.is_1tptl),
            ("is_open_tptl", self.is_open_tptl),
            ("is_na_1tptl", self.is_na_1tptl),
            ("is_na_plus", self.is_na_plus),
            ("is_na_minus", self.is_na_minus),
            ("is_pa_1tptl", self.is_pa_1tptl),
        ] {
            writeln!(f, "{name} = {v}")?;
        }
        writeln!(f, "pnemtl_adjacency = {}", self.pnemtl_adjacency)?;
        for s in &self.scopes {
            let list: Vec<String> = s.intervals.iter().map(|i| i.to_string()).collect();
            writeln!(f, "scope {} = {{{}}}", s.scope, list.join(", "))?;
        }
        Ok(())
    }
}

fn is_automata_node(f: &Formula) -> bool {
    matches!(
        f,
        F::Rat(..) | F::FRat(..) | F::PRat(..) | F::Fk(..) | F::Pk(..)
    )
}

fn is_freeze_node(f: &Formula) -> bool {
    matches!(f, F::Freeze(..) | F::TMinusX(..) | F::XMinusT(..))
}

// Modality intervals of the strict U/S nodes of a desugared formula.
fn modal_intervals(f: &Formula, future: bool) -> Vec<Option<Interval>> {
    let mut out = Vec::new();
    f.visit(&mut |g| match g {
        F::Until(i, ..) if future => out.push(*i),
        F::Since(i, ..) if !future => out.push(*i),
        _ => {}
    });
    out
}

fn punctual(i: &Option<Interval>) -> bool {
    i.is_some_and(|i| i.is_punctual())
}

fn untimed(i: &Option<Interval>) -> bool {
    i.is_none_or(|i| i == Interval::nonnegative())
}

// Even parity needs open constraint sets, odd parity closed ones.
fn open_ok(f: &Formula, odd: bool) -> bool {
    let ok = |i: &Interval| {
        if odd {
            i.is_closed_set()
        } else {
            i.is_open_set()
        }
    };
    match f {
        F::TMinusX(_, i) | F::XMinusT(_, i) => ok(i),
        F::Not(a) => open_ok(a, !odd),
        F::Implies(a, b) => open_ok(a, !odd) && open_ok(b, odd),
        F::Iff(a, b) => open_ok(a, odd) && open_ok(a, !odd) && open_ok(b, odd) && open_ok(b, !odd),
        _ => f.children().iter().all(|c| open_ok(c, odd)),
    }
}

fn collect_scopes(
    f: &Formula,
    stack: &mut Vec<(String, usize)>,
    counter: &mut usize,
    out: &mut BTreeMap<String, Vec<Interval>>,
) {
    let mut record = |x: &str, i: Interval, stack: &Vec<(String, usize)>| {
        let key = match stack.iter().rev().find(|(v, _)| v == x) {
            Some((v, n)) => format!("{v}#{n}"),
            None => format!("{x}#free"),
        };
        let list = out.entry(key).or_default();
        if !list.contains(&i) {
            list.push(i);
        }
    };
    match f {
        F::TMinusX(x, i) => record(x, *i, stack),
        F::XMinusT(x, i) => record(x, i.negated(), stack),
        F::Freeze(x, a) => {
            *counter += 1;
            stack.push((x.clone(), *counter));
            out.entry(format!("{x}#{counter}")).or_default();
            collect_scopes(a, stack, counter, out);
            stack.pop();
        }
        _ => {
            for c in f.children() {
                collect_scopes(c, stack, counter, out);
            }
        }
    }
}

fn pnemtl_adjacency(f: &Formula) -> PnemtlAdjacency {
    if f.contains(&|g| is_freeze_node(g) || matches!(g, F::Rat(..) | F::FRat(..) | F::PRat(..))) {
        return PnemtlAdjacency::NotPnemtl;
    }
    let mut future_ok = true;
    let mut past_ok = true;
    f.visit(&mut |g| match g {
        F::Fk(k) => future_ok &= set_nonadjacency(NonAdjacency::Plain, &k.intervals),
        F::Pk(k) => past_ok &= set_nonadjacency(NonAdjacency::Plain, &k.intervals),
        _ => {}
    });
    match (future_ok, past_ok) {
        (true, true) => PnemtlAdjacency::Na,
        (true, false) => PnemtlAdjacency::NaPlus,
        (false, true) => PnemtlAdjacency::NaMinus,
        (false, false) => PnemtlAdjacency::None,
    }
}

/// Syntactic fragment membership of `f`.
pub fn classify(f: &Formula) -> FragmentReport {
    let d = desugar(f);
    let has_automata = f.contains(&is_automata_node);
    let has_freeze = f.contains(&is_freeze_node);

    let is_mtl = !has_automata && !has_freeze;
    let fut = modal_intervals(&d, true);
    let past = modal_intervals(&d, false);
    let is_mitl = is_mtl && !fut.iter().chain(&past).any(punctual);
    let is_mtl_future_only = is_mtl && past.is_empty();
    let is_pmtl = is_mtl && !(fut.iter().any(punctual) && past.iter().any(punctual));
    let is_tptl = !has_automata && fut.iter().chain(&past).all(untimed);
    let is_1tptl = is_tptl && f.variables().len() <= 1;
    let is_open_tptl = is_1tptl && open_ok(&d, false);

    let (mut na, mut na_plus, mut na_minus) = (false, false, false);
    let mut scopes = Vec::new();
    if !has_automata {
        let nnf = to_nnf(f);
        let mut groups = BTreeMap::new();
        collect_scopes(&nnf, &mut Vec::new(), &mut 0, &mut groups);
        let one_var = nnf.variables().len() <= 1;
        let all = |kind| {
            one_var
                && groups
                    .values()
                    .all(|is: &Vec<Interval>| set_nonadjacency(kind, is))
        };
        na = all(NonAdjacency::Plain);
        na_plus = all(NonAdjacency::Positive);
        na_minus = all(NonAdjacency::Negative);
        scopes = groups
            .into_iter()
            .map(|(scope, intervals)| ScopeIntervals { scope, intervals })
            .collect();
        scopes.sort_by_key(|s| scope_order(&s.scope));
    }

    FragmentReport {
        is_mtl,
        is_mitl,
        is_mtl_future_only,
        is_pmtl,
        is_tptl,
        is_1tptl,
        is_open_tptl,
        is_na_1tptl: na,
        is_na_plus: na_plus,
        is_na_minus: na_minus,
        is_pa_1tptl: na_plus || na_minus,
        pnemtl_adjacency: pnemtl_adjacency(f),
        scopes,
    }
}

fn scope_order(scope: &str) -> (usize, String) {
    let (var, n) = scope.rsplit_once('#').unwrap_or((scope, ""));
    (n.parse().unwrap_or(usize::MAX), var.to_string())
}
