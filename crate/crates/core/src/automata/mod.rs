//! Nondeterministic finite automata over exact-truth letters.
//!
//! A letter is the exact subset of a formula set `S` (of size `width`) that
//! holds at a position, stored as a bitmask. Automata never carry
//! ε-transitions once constructed.

mod regex;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use regex::{compile_regex, parse_regex, Regex};
pub use text::{parse_automaton, parse_automaton_with_names, ParsedAutomaton};

/// Largest supported formula set; letters range over `2^width`.
pub const MAX_WIDTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("alphabet mismatch: automaton is over {expected} formulas, got {found}")]
    AlphabetMismatch { expected: usize, found: usize },
    #[error("letter {letter} is not a subset of a {width}-element formula set")]
    LetterOutOfRange { letter: Letter, width: usize },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("formula set too large ({0} > {MAX_WIDTH})")]
    TooWide(usize),
    #[error("unknown letter element `{0}`")]
    UnknownName(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

/// An exact-truth letter: bit `i` is set iff the `i`-th formula of S holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Letter(pub u32);

impl Letter {
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Letter {
        Letter(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.contains(*i))
    }

    pub fn fits(self, width: usize) -> bool {
        width >= 32 || self.0 >> width == 0
    }

    /// Renders as `{f1,f3}` using 1-based formula indices, or with `names`.
    pub fn render(self, names: Option<&[String]>) -> String {
        let items: Vec<String> = self
            .indices()
            .map(|i| match names {
                Some(n) if i < n.len() => n[i].clone(),
                _ => format!("f{}", i + 1),
            })
            .collect();
        format!("{{{}}}", items.join(","))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

/// A set of automaton states.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(Vec<u64>);

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet(vec![0; n.div_ceil(64).max(1)])
    }

    pub fn insert(&mut self, q: usize) {
        self.0[q / 64] |= 1 << (q % 64);
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0[q / 64] & (1 << (q % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, w)| {
            (0..64)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| wi * 64 + b)
        })
    }
}

/// Where a rewired automaton accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewireTarget {
    State(usize),
    Accepting,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicNfa {
    width: usize,
    state_names: Vec<String>,
    init: usize,
    accepting: BTreeSet<usize>,
    transitions: BTreeSet<(usize, Letter, usize)>,
    out: Vec<BTreeMap<Letter, Vec<usize>>>,
}

impl SymbolicNfa {
    pub fn new(
        width: usize,
        state_names: Vec<String>,
        init: usize,
        accepting: BTreeSet<usize>,
        transitions: BTreeSet<(usize, Letter, usize)>,
    ) -> Result<Self, AutomataError> {
        if width > MAX_WIDTH {
            return Err(AutomataError::TooWide(width));
        }
        let n = state_names.len();
        let in_range = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(AutomataError::StateOutOfRange(q))
            }
        };
        in_range(init)?;
        for q in &accepting {
            in_range(*q)?;
        }
        let mut out = vec![BTreeMap::<Letter, Vec<usize>>::new(); n];
        for &(p, l, q) in &transitions {
            in_range(p)?;
            in_range(q)?;
            if !l.fits(width) {
                return Err(AutomataError::LetterOutOfRange { letter: l, width });
            }
            out[p].entry(l).or_default().push(q);
        }
        Ok(SymbolicNfa {
            width,
            state_names,
            init,
            accepting,
            transitions,
            out,
        })
    }

    // Internal constructor for operations whose output is valid by construction.
    fn build(
        width: usize,
        state_names: Vec<String>,
        init: usize,
        accepting: BTreeSet<usize>,
        transitions: BTreeSet<(usize, Letter, usize)>,
    ) -> Self {
        Self::new(width, state_names, init, accepting, transitions)
            .expect("automaton operation produced an invalid automaton")
    }

    fn numbered(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("q{i}")).collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_index(&self, name: &str) -> Result<usize, AutomataError> {
        self.state_names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| AutomataError::UnknownState(name.to_string()))
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn transitions(&self) -> &BTreeSet<(usize, Letter, usize)> {
        &self.transitions
    }

    /// All `2^width` letters in increasing order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..1u32 << self.width).map(Letter)
    }

    pub fn check_letter(&self, l: Letter) -> Result<(), AutomataError> {
        if l.fits(self.width) {
            Ok(())
        } else {
            Err(AutomataError::LetterOutOfRange {
                letter: l,
                width: self.width,
            })
        }
    }

    pub fn initial_set(&self) -> StateSet {
        let mut s = StateSet::empty(self.num_states());
        s.insert(self.init);
        s
    }

    pub fn successors(&self, q: usize, l: Letter) -> &[usize] {
        self.out[q].get(&l).map(Vec::as_slice).unwrap_or(&[])
    }

    /// One step of the subset construction.
    pub fn advance(&self, set: &StateSet, l: Letter) -> StateSet {
        let mut next = StateSet::empty(self.num_states());
        for q in set.iter() {
            for &r in self.successors(q, l) {
                next.insert(r);
            }
        }
        next
    }

    pub fn any_accepting(&self, set: &StateSet) -> bool {
        self.accepting.iter().any(|q| set.contains(*q))
    }

    pub fn accepts(&self, word: &[Letter]) -> Result<bool, AutomataError> {
        for l in word {
            self.check_letter(*l)?;
        }
        let mut cur = self.initial_set();
        for l in word {
            cur = self.advance(&cur, *l);
            if cur.is_empty() {
                return Ok(false);
            }
        }
        Ok(self.any_accepting(&cur))
    }

    pub fn accepts_epsilon(&self) -> bool {
        self.accepting.contains(&self.init)
    }

    /// Same transitions, initial state `q`, accepting set `{q'}` or the
    /// original one.
    pub fn rewire(&self, q: usize, target: RewireTarget) -> Result<Self, AutomataError> {
        if q >= self.num_states() {
            return Err(AutomataError::StateOutOfRange(q));
        }
        let accepting = match target {
            RewireTarget::Accepting => self.accepting.clone(),
            RewireTarget::State(t) if t < self.num_states() => BTreeSet::from([t]),
            RewireTarget::State(t) => return Err(AutomataError::StateOutOfRange(t)),
        };
        Ok(SymbolicNfa {
            init: q,
            accepting,
            ..self.clone()
        })
    }

    fn same_alphabet(&self, other: &Self) -> Result<(), AutomataError> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(AutomataError::AlphabetMismatch {
                expected: self.width,
                found: other.width,
            })
        }
    }

    /// Language concatenation, built without ε-transitions.
    pub fn concat(&self, other: &Self) -> Result<Self, AutomataError> {
        self.same_alphabet(other)?;
        let shift = self.num_states();
        let b_init = other.init + shift;
        let mut names: Vec<String> = self.state_names.iter().map(|s| format!("1.{s}")).collect();
        names.extend(other.state_names.iter().map(|s| format!("2.{s}")));
        let mut transitions = self.transitions.clone();
        for &(p, l, q) in &other.transitions {
            transitions.insert((p + shift, l, q + shift));
        }
        for &(p, l, q) in &self.transitions {
            if self.accepting.contains(&q) {
                transitions.insert((p, l, b_init));
            }
        }
        if self.accepts_epsilon() {
            for &(p, l, q) in &other.transitions {
                if p == other.init {
                    transitions.insert((self.init, l, q + shift));
                }
            }
        }
        let mut accepting: BTreeSet<usize> = other.accepting.iter().map(|q| q + shift).collect();
        if other.accepts_epsilon() {
            accepting.extend(self.accepting.iter().copied());
        }
        Ok(Self::build(self.width, names, self.init, accepting, transitions).trim())
    }

    pub fn concat_all<'a>(
        width: usize,
        parts: impl IntoIterator<Item = &'a SymbolicNfa>,
    ) -> Result<Self, AutomataError> {
        parts
            .into_iter()
            .try_fold(Self::epsilon_only(width), |acc, p| acc.concat(p))
    }

    /// Language union via a fresh initial state.
    pub fn union(&self, other: &Self) -> Result<Self, AutomataError> {
        self.same_alphabet(other)?;
        let shift = self.num_states();
        let fresh = shift + other.num_states();
        let mut names: Vec<String> = self.state_names.iter().map(|s| format!("1.{s}")).collect();
        names.extend(other.state_names.iter().map(|s| format!("2.{s}")));
        names.push("start".into());
        let mut transitions = self.transitions.clone();
        for &(p, l, q) in &other.transitions {
            transitions.insert((p + shift, l, q + shift));
        }
        for &(p, l, q) in &self.transitions {
            if p == self.init {
                transitions.insert((fresh, l, q));
            }
        }
        for &(p, l, q) in &other.transitions {
            if p == other.init {
                transitions.insert((fresh, l, q + shift));
            }
        }
        let mut accepting: BTreeSet<usize> = self.accepting.clone();
        accepting.extend(other.accepting.iter().map(|q| q + shift));
        if self.accepts_epsilon() || other.accepts_epsilon() {
            accepting.insert(fresh);
        }
        Ok(Self::build(self.width, names, fresh, accepting, transitions).trim())
    }

    /// `{w : c·w ∈ L}`.
    pub fn left_quotient(&self, c: Letter) -> Result<Self, AutomataError> {
        self.check_letter(c)?;
        let fresh = self.num_states();
        let mut names = self.state_names.clone();
        names.push("quot".into());
        let mut transitions = self.transitions.clone();
        let mut accepting = self.accepting.clone();
        for &r in self.successors(self.init, c) {
            if self.accepting.contains(&r) {
                accepting.insert(fresh);
            }
            for (l, targets) in &self.out[r] {
                for &s in targets {
                    transitions.insert((fresh, *l, s));
                }
            }
        }
        Ok(Self::build(self.width, names, fresh, accepting, transitions).trim())
    }

    /// `{w : w·c ∈ L}`.
    pub fn right_quotient(&self, c: Letter) -> Result<Self, AutomataError> {
        self.check_letter(c)?;
        let accepting = (0..self.num_states())
            .filter(|p| {
                self.successors(*p, c)
                    .iter()
                    .any(|r| self.accepting.contains(r))
            })
            .collect();
        Ok(SymbolicNfa {
            accepting,
            ..self.clone()
        }
        .trim())
    }

    /// Removes ε from the language, keeping every other word.
    pub fn without_epsilon(&self) -> Self {
        if !self.accepts_epsilon() {
            return self.clone();
        }
        let fresh = self.num_states();
        let mut names = self.state_names.clone();
        names.push("start".into());
        let mut transitions = self.transitions.clone();
        for (l, targets) in &self.out[self.init] {
            for &s in targets {
                transitions.insert((fresh, *l, s));
            }
        }
        Self::build(
            self.width,
            names,
            fresh,
            self.accepting.clone(),
            transitions,
        )
        .trim()
    }

    /// Kleene star, built without ε-transitions.
    pub fn star(&self) -> Self {
        let fresh = self.num_states();
        let mut names = self.state_names.clone();
        names.push("start".into());
        let mut transitions = self.transitions.clone();
        for (l, targets) in &self.out[self.init] {
            for &s in targets {
                transitions.insert((fresh, *l, s));
            }
        }
        let mut extra = BTreeSet::new();
        for &f in &self.accepting {
            for (l, targets) in &self.out[self.init] {
                for &s in targets {
                    extra.insert((f, *l, s));
                }
            }
        }
        transitions.extend(extra);
        let mut accepting = self.accepting.clone();
        accepting.insert(fresh);
        Self::build(self.width, names, fresh, accepting, transitions).trim()
    }

    /// Accepts every word over `2^S`, including ε.
    pub fn universal(width: usize) -> Self {
        let transitions = (0..1u32 << width).map(|l| (0, Letter(l), 0)).collect();
        Self::build(
            width,
            Self::numbered(1),
            0,
            BTreeSet::from([0]),
            transitions,
        )
    }

    pub fn epsilon_only(width: usize) -> Self {
        Self::build(
            width,
            Self::numbered(1),
            0,
            BTreeSet::from([0]),
            BTreeSet::new(),
        )
    }

    pub fn empty(width: usize) -> Self {
        Self::build(
            width,
            Self::numbered(1),
            0,
            BTreeSet::new(),
            BTreeSet::new(),
        )
    }

    /// Accepts exactly the one-letter words drawn from `letters`.
    pub fn letter_set(width: usize, letters: impl IntoIterator<Item = Letter>) -> Self {
        let transitions = letters.into_iter().map(|l| (0, l, 1)).collect();
        Self::build(
            width,
            Self::numbered(2),
            0,
            BTreeSet::from([1]),
            transitions,
        )
    }

    pub fn single_letter(width: usize, l: Letter) -> Self {
        Self::letter_set(width, [l])
    }

    /// Every one-letter word.
    pub fn any_letter(width: usize) -> Self {
        Self::letter_set(width, (0..1u32 << width).map(Letter))
    }

    fn forward_reachable(&self) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.init]);
        let mut stack = vec![self.init];
        while let Some(p) = stack.pop() {
            for targets in self.out[p].values() {
                for &q in targets {
                    if seen.insert(q) {
                        stack.push(q);
                    }
                }
            }
        }
        seen
    }

    fn backward_reachable(&self) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = self.accepting.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for &(p, _, q) in &self.transitions {
                if seen.contains(&q) && seen.insert(p) {
                    changed = true;
                }
            }
        }
        seen
    }

    pub fn is_empty(&self) -> bool {
        self.forward_reachable()
            .iter()
            .all(|q| !self.accepting.contains(q))
    }

    /// Drops states that are unreachable from the initial state or cannot
    /// reach an accepting state. The initial state always survives.
    pub fn trim(&self) -> Self {
        let fwd = self.forward_reachable();
        let bwd = self.backward_reachable();
        let keep: Vec<usize> = (0..self.num_states())
            .filter(|q| *q == self.init || (fwd.contains(q) && bwd.contains(q)))
            .collect();
        if keep.len() == self.num_states() {
            return self.clone();
        }
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, q)| (*q, i)).collect();
        let names = keep.iter().map(|q| self.state_names[*q].clone()).collect();
        let accepting = self
            .accepting
            .iter()
            .filter_map(|q| index.get(q).copied())
            .collect();
        let transitions = self
            .transitions
            .iter()
            .filter_map(|(p, l, q)| Some((*index.get(p)?, *l, *index.get(q)?)))
            .collect();
        Self::build(self.width, names, index[&self.init], accepting, transitions)
    }

    /// Renames states to `q0, q1, …` in index order.
    pub fn with_numbered_states(&self) -> Self {
        SymbolicNfa {
            state_names: Self::numbered(self.num_states()),
            ..self.clone()
        }
    }
}
