use std::collections::BTreeSet;

use super::{Formula as F, Formula};

/// Output of [`flatten`]: `main` plus one temporal definition per witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatteningResult {
    pub main: Formula,
    /// `(b_i, β_i)` pairs, innermost first: each β only mentions Σ and
    /// witnesses defined before it.
    pub definitions: Vec<(String, Formula)>,
    pub witnesses: BTreeSet<String>,
    pub sigma: BTreeSet<String>,
}

impl FlatteningResult {
    /// `□ns(b_i ↔ β_i)` for each definition, in definition order.
    pub fn temporal_definitions(&self) -> Vec<Formula> {
        self.definitions
            .iter()
            .map(|(b, beta)| F::always_ns(F::iff(F::atom(b.clone()), beta.clone())))
            .collect()
    }

    /// `main ∧ T_1 ∧ … ∧ T_n ∧ □ns(⋁Σ)`.
    pub fn assembled(&self) -> Formula {
        let mut parts = vec![self.main.clone()];
        parts.extend(self.temporal_definitions());
        parts.push(F::always_ns(F::or_all(self.sigma.iter().map(F::atom))));
        F::and_all(parts)
    }
}

/// Witness names `w1, w2, …` skipping anything in `taken`.
pub fn witness_names(taken: &BTreeSet<String>) -> impl Iterator<Item = String> + '_ {
    (1..)
        .map(|n| format!("w{n}"))
        .filter(|w| !taken.contains(w))
}

struct Flattener<I: Iterator<Item = String>> {
    names: I,
    definitions: Vec<(String, Formula)>,
}

impl<I: Iterator<Item = String>> Flattener<I> {
    // Top level: booleans pass through, the first modality keeps its shape.
    fn top(&mut self, f: &Formula) -> Formula {
        if f.is_modal() {
            f.map_children(|c| self.inner(c))
        } else {
            f.map_children(|c| self.top(c))
        }
    }

    fn inner(&mut self, f: &Formula) -> Formula {
        if !f.is_modal() {
            return f.map_children(|c| self.inner(c));
        }
        let w = self.names.next().expect("unbounded supply of names");
        let body = f.map_children(|c| self.inner(c));
        self.definitions.push((w.clone(), body));
        F::atom(w)
    }
}

/// Replaces every modal subformula nested under another modality by a
/// fresh witness proposition with a temporal definition.
pub fn flatten(f: &Formula, sigma: &BTreeSet<String>) -> FlatteningResult {
    let mut taken = sigma.clone();
    taken.extend(f.atoms());
    let mut fl = Flattener {
        names: witness_names(&taken),
        definitions: Vec::new(),
    };
    let main = fl.top(f);
    let definitions = fl.definitions;
    FlatteningResult {
        main,
        witnesses: definitions.iter().map(|(w, _)| w.clone()).collect(),
        definitions,
        sigma: sigma.clone(),
    }
}
