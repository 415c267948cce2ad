use std::collections::{BTreeSet, HashSet};

use num_rational::BigRational;
use serde::Serialize;

use crate::eval::satisfies;
use crate::formula::{flatten, relativize, Formula as F, Formula};
use crate::timedword::{project_oversampled, project_simple, Event, Time, TimedWord};

/// The bounded word space: lengths `1..=max_len`, timestamps from `grid`
/// (first timestamp 0, non-decreasing) and non-empty proposition sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    pub max_len: usize,
    pub grid: Vec<Time>,
}

impl Default for Universe {
    fn default() -> Self {
        Universe {
            max_len: 3,
            grid: (0..=4)
                .map(|n| BigRational::new(n.into(), 2.into()))
                .collect(),
        }
    }
}

fn nonempty_subsets(props: &BTreeSet<String>) -> Vec<BTreeSet<String>> {
    let items: Vec<&String> = props.iter().collect();
    (1u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| (*p).clone())
                .collect()
        })
        .collect()
}

/// Every word of the universe over `props`, shortest first.
pub fn enumerate_words(props: &BTreeSet<String>, u: &Universe) -> Vec<TimedWord> {
    let mut out = Vec::new();
    for_each_word(props, u, |w| out.push(w));
    out
}

/// Calls `visit` on every word of the universe over `props`, in the order
/// of [`enumerate_words`], without materializing the universe.
pub fn for_each_word(props: &BTreeSet<String>, u: &Universe, mut visit: impl FnMut(TimedWord)) {
    let subsets = nonempty_subsets(props);
    let mut prefix = Vec::with_capacity(u.max_len);
    for len in 1..=u.max_len {
        extend(&mut prefix, len, &subsets, &u.grid, &mut visit);
    }
}

fn extend(
    prefix: &mut Vec<Event>,
    len: usize,
    subsets: &[BTreeSet<String>],
    grid: &[Time],
    visit: &mut impl FnMut(TimedWord),
) {
    if prefix.len() == len {
        visit(TimedWord::new(prefix.clone()).expect("well-formed by construction"));
        return;
    }
    let zero = BigRational::from_integer(0.into());
    let times: Vec<Time> = match prefix.last() {
        None => vec![zero],
        Some(e) => grid.iter().filter(|t| **t >= e.time).cloned().collect(),
    };
    for t in times {
        for s in subsets {
            prefix.push(Event {
                props: s.clone(),
                time: t.clone(),
            });
            extend(prefix, len, subsets, grid, visit);
            prefix.pop();
        }
    }
}

/// Outcome of a bounded equisatisfiability check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquisatReport {
    pub extended_words: usize,
    pub psi_models: usize,
    pub phi_models: usize,
    /// ψ-models whose projection is not a behaviour of the right kind.
    pub inadmissible: usize,
    /// ψ-models whose projection violates φ.
    pub unsound: usize,
    /// φ-models that are no projection of a ψ-model.
    pub uncovered: usize,
    pub counterexample: Option<String>,
}

impl EquisatReport {
    pub fn holds(&self) -> bool {
        self.inadmissible == 0 && self.unsound == 0 && self.uncovered == 0
    }
}

fn verify(
    phi: &Formula,
    psi: &Formula,
    sigma: &BTreeSet<String>,
    extra: &BTreeSet<String>,
    u: &Universe,
    project: fn(
        &TimedWord,
        &BTreeSet<String>,
    ) -> Result<TimedWord, crate::timedword::TimedWordError>,
) -> EquisatReport {
    let all: BTreeSet<String> = sigma.union(extra).cloned().collect();
    let mut report = EquisatReport {
        extended_words: 0,
        psi_models: 0,
        phi_models: 0,
        inadmissible: 0,
        unsound: 0,
        uncovered: 0,
        counterexample: None,
    };
    let mut covered = HashSet::new();
    for_each_word(&all, u, |w| {
        report.extended_words += 1;
        if !satisfies(&w, psi).unwrap_or(false) {
            return;
        }
        report.psi_models += 1;
        let bad = match project(&w, extra) {
            Err(_) => {
                report.inadmissible += 1;
                true
            }
            Ok(p) if satisfies(&p, phi).unwrap_or(false) => {
                covered.insert(p);
                false
            }
            Ok(_) => {
                report.unsound += 1;
                true
            }
        };
        if bad && report.counterexample.is_none() {
            report.counterexample = Some(w.to_string());
        }
    });

    for_each_word(sigma, u, |w| {
        if !satisfies(&w, phi).unwrap_or(false) {
            return;
        }
        report.phi_models += 1;
        if !covered.contains(&w) {
            report.uncovered += 1;
            report.counterexample.get_or_insert_with(|| w.to_string());
        }
    });
    report
}

/// Checks over the universe that ψ (over Σ ∪ X) is equisatisfiable with φ
/// (over Σ) with respect to simple extensions: every ψ-model keeps a Σ
/// proposition at each point and projects to a φ-model, and every φ-model
/// is such a projection.
pub fn verify_simple_equisat(
    phi: &Formula,
    psi: &Formula,
    sigma: &BTreeSet<String>,
    extra: &BTreeSet<String>,
    u: &Universe,
) -> EquisatReport {
    verify(phi, psi, sigma, extra, u, project_simple)
}

/// As [`verify_simple_equisat`] for oversampled extensions: points carrying
/// only X propositions are deleted by the projection.
pub fn verify_oversampled_equisat(
    phi: &Formula,
    psi: &Formula,
    sigma: &BTreeSet<String>,
    extra: &BTreeSet<String>,
    u: &Universe,
) -> EquisatReport {
    verify(phi, psi, sigma, extra, u, project_oversampled)
}

/// `act ∧ Rel(Σ, φ)` with `act = ⋁Σ`.
pub fn relativized_formula(sigma: &BTreeSet<String>, f: &Formula) -> Formula {
    F::and(F::or_all(sigma.iter().map(F::atom)), relativize(sigma, f))
}

/// A reduction instance together with a deliberately broken output.
#[derive(Debug, Clone)]
pub struct MutationFixture {
    pub phi: Formula,
    pub sigma: BTreeSet<String>,
    pub extra: BTreeSet<String>,
    pub correct: Formula,
    pub mutated: Formula,
}

fn names(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// `G ¬F[0,1] a` flattened, and the same with the outermost definition
/// weakened from `↔` to `→`.
pub fn flatten_mutation_fixture() -> MutationFixture {
    let phi = crate::formula::parse("G !F[[0,1]] a").expect("fixture");
    let sigma = names(&["a", "b"]);
    let flat = flatten(&phi, &sigma);
    let mut definitions = flat.temporal_definitions();
    let root = definitions.len() - 1;
    let (w, beta) = flat.definitions[root].clone();
    definitions[root] = F::always_ns(F::implies(F::atom(w), beta));
    let mut parts = vec![flat.main.clone()];
    parts.extend(definitions);
    parts.push(F::always_ns(F::or_all(sigma.iter().map(F::atom))));
    MutationFixture {
        correct: flat.assembled(),
        mutated: F::and_all(parts),
        extra: flat.witnesses,
        phi,
        sigma,
    }
}

/// `F[0,1] ¬a` relativized, and the same with the `act` guard of the
/// eventuality dropped.
pub fn relativize_mutation_fixture() -> MutationFixture {
    let phi = crate::formula::parse("F[[0,1]] !a").expect("fixture");
    let sigma = names(&["a", "b"]);
    let act = F::or_all(sigma.iter().map(F::atom));
    MutationFixture {
        correct: relativized_formula(&sigma, &phi),
        mutated: F::and(act, phi.clone()),
        extra: names(&["o"]),
        phi,
        sigma,
    }
}
