//! The formula AST shared by every logic in the toolkit, together with its
//! parser, printer and the syntactic transformations.

mod classify;
mod desugar;
mod flatten;
mod nnf;
mod parse;
mod print;
mod relativize;

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::automata::{AutomataError, SymbolicNfa};
use crate::timedword::{Interval, TimedWordError};

pub use classify::{classify, FragmentReport, PnemtlAdjacency, ScopeIntervals};
pub use desugar::{desugar, embed_mtl};
pub use flatten::{flatten, witness_names, FlatteningResult};
pub use nnf::{is_nnf, to_nnf};
pub use parse::{parse, parse_open};
pub use print::print;
pub use relativize::relativize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("freeze variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error(transparent)]
    Interval(#[from] TimedWordError),
    #[error(transparent)]
    Automaton(#[from] AutomataError),
    #[error("{0}")]
    Arity(String),
}

/// A regular-language argument of Rat/FRat/PRat, with the formula set its
/// letters range over.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatArgs {
    pub automaton: Arc<SymbolicNfa>,
    pub set: Arc<Vec<Formula>>,
}

/// Arguments of a k-ary Pnueli automata modality: k intervals, k+1 automata.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FkArgs {
    pub intervals: Vec<Interval>,
    pub automata: Vec<Arc<SymbolicNfa>>,
    pub set: Arc<Vec<Formula>>,
}

impl RatArgs {
    pub fn new(automaton: SymbolicNfa, set: Vec<Formula>) -> Result<Self, FormulaError> {
        check_width(&automaton, set.len())?;
        Ok(RatArgs {
            automaton: Arc::new(automaton),
            set: Arc::new(set),
        })
    }
}

impl FkArgs {
    pub fn new(
        intervals: Vec<Interval>,
        automata: Vec<SymbolicNfa>,
        set: Vec<Formula>,
    ) -> Result<Self, FormulaError> {
        if automata.len() != intervals.len() + 1 {
            return Err(FormulaError::Arity(format!(
                "{} intervals need {} automata, got {}",
                intervals.len(),
                intervals.len() + 1,
                automata.len()
            )));
        }
        for a in &automata {
            check_width(a, set.len())?;
        }
        Ok(FkArgs {
            intervals,
            automata: automata.into_iter().map(Arc::new).collect(),
            set: Arc::new(set),
        })
    }

    pub fn arity(&self) -> usize {
        self.intervals.len()
    }
}

fn check_width(a: &SymbolicNfa, n: usize) -> Result<(), FormulaError> {
    if a.width() == n {
        Ok(())
    } else {
        Err(AutomataError::AlphabetMismatch {
            expected: n,
            found: a.width(),
        }
        .into())
    }
}

/// `None` intervals denote the untimed modality (`[0,∞)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Until(Option<Interval>, Box<Formula>, Box<Formula>),
    Since(Option<Interval>, Box<Formula>, Box<Formula>),
    /// Non-strict until: `b ∨ (a ∧ a U b)`.
    UntilNs(Option<Interval>, Box<Formula>, Box<Formula>),
    SinceNs(Option<Interval>, Box<Formula>, Box<Formula>),
    Eventually(Option<Interval>, Box<Formula>),
    EventuallyPast(Option<Interval>, Box<Formula>),
    Always(Option<Interval>, Box<Formula>),
    AlwaysPast(Option<Interval>, Box<Formula>),
    Next(Option<Interval>, Box<Formula>),
    Prev(Option<Interval>, Box<Formula>),
    /// Non-strict untimed eventually: `φ ∨ ◊φ`.
    EventuallyNs(Box<Formula>),
    /// Non-strict untimed always: `φ ∧ □φ`.
    AlwaysNs(Box<Formula>),
    Freeze(String, Box<Formula>),
    /// `T − x ∈ I`.
    TMinusX(String, Interval),
    /// `x − T ∈ I`.
    XMinusT(String, Interval),
    Rat(Interval, RatArgs),
    FRat(Interval, RatArgs),
    PRat(Interval, RatArgs),
    Fk(FkArgs),
    Pk(FkArgs),
}

use Formula as F;

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn atom(p: impl Into<String>) -> Formula {
        F::Atom(p.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        F::Not(bx(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        F::And(bx(a), bx(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        F::Or(bx(a), bx(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        F::Implies(bx(a), bx(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        F::Iff(bx(a), bx(b))
    }

    pub fn until(i: Option<Interval>, a: Formula, b: Formula) -> Formula {
        F::Until(i, bx(a), bx(b))
    }

    pub fn since(i: Option<Interval>, a: Formula, b: Formula) -> Formula {
        F::Since(i, bx(a), bx(b))
    }

    pub fn until_ns(i: Option<Interval>, a: Formula, b: Formula) -> Formula {
        F::UntilNs(i, bx(a), bx(b))
    }

    pub fn since_ns(i: Option<Interval>, a: Formula, b: Formula) -> Formula {
        F::SinceNs(i, bx(a), bx(b))
    }

    pub fn eventually(i: Option<Interval>, f: Formula) -> Formula {
        F::Eventually(i, bx(f))
    }

    pub fn eventually_past(i: Option<Interval>, f: Formula) -> Formula {
        F::EventuallyPast(i, bx(f))
    }

    pub fn always(i: Option<Interval>, f: Formula) -> Formula {
        F::Always(i, bx(f))
    }

    pub fn always_past(i: Option<Interval>, f: Formula) -> Formula {
        F::AlwaysPast(i, bx(f))
    }

    pub fn next(i: Option<Interval>, f: Formula) -> Formula {
        F::Next(i, bx(f))
    }

    pub fn prev(i: Option<Interval>, f: Formula) -> Formula {
        F::Prev(i, bx(f))
    }

    pub fn eventually_ns(f: Formula) -> Formula {
        F::EventuallyNs(bx(f))
    }

    pub fn always_ns(f: Formula) -> Formula {
        F::AlwaysNs(bx(f))
    }

    pub fn freeze(x: impl Into<String>, f: Formula) -> Formula {
        F::Freeze(x.into(), bx(f))
    }

    pub fn t_minus_x(x: impl Into<String>, i: Interval) -> Formula {
        F::TMinusX(x.into(), i)
    }

    pub fn x_minus_t(x: impl Into<String>, i: Interval) -> Formula {
        F::XMinusT(x.into(), i)
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(F::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(F::False)
    }

    /// Direct subformulas, including the members of automata formula sets.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            F::True | F::False | F::Atom(_) | F::TMinusX(..) | F::XMinusT(..) => vec![],
            F::Not(a)
            | F::Eventually(_, a)
            | F::EventuallyPast(_, a)
            | F::Always(_, a)
            | F::AlwaysPast(_, a)
            | F::Next(_, a)
            | F::Prev(_, a)
            | F::EventuallyNs(a)
            | F::AlwaysNs(a)
            | F::Freeze(_, a) => vec![a],
            F::And(a, b)
            | F::Or(a, b)
            | F::Implies(a, b)
            | F::Iff(a, b)
            | F::Until(_, a, b)
            | F::Since(_, a, b)
            | F::UntilNs(_, a, b)
            | F::SinceNs(_, a, b) => vec![a, b],
            F::Rat(_, r) | F::FRat(_, r) | F::PRat(_, r) => r.set.iter().collect(),
            F::Fk(k) | F::Pk(k) => k.set.iter().collect(),
        }
    }

    /// Rebuilds the node with every direct subformula replaced by `f(child)`.
    pub fn map_children(&self, mut f: impl FnMut(&Formula) -> Formula) -> Formula {
        let mut g = |a: &Formula| bx(f(a));
        match self {
            F::True | F::False | F::Atom(_) | F::TMinusX(..) | F::XMinusT(..) => self.clone(),
            F::Not(a) => F::Not(g(a)),
            F::Eventually(i, a) => F::Eventually(*i, g(a)),
            F::EventuallyPast(i, a) => F::EventuallyPast(*i, g(a)),
            F::Always(i, a) => F::Always(*i, g(a)),
            F::AlwaysPast(i, a) => F::AlwaysPast(*i, g(a)),
            F::Next(i, a) => F::Next(*i, g(a)),
            F::Prev(i, a) => F::Prev(*i, g(a)),
            F::EventuallyNs(a) => F::EventuallyNs(g(a)),
            F::AlwaysNs(a) => F::AlwaysNs(g(a)),
            F::Freeze(x, a) => F::Freeze(x.clone(), g(a)),
            F::And(a, b) => F::And(g(a), g(b)),
            F::Or(a, b) => F::Or(g(a), g(b)),
            F::Implies(a, b) => F::Implies(g(a), g(b)),
            F::Iff(a, b) => F::Iff(g(a), g(b)),
            F::Until(i, a, b) => F::Until(*i, g(a), g(b)),
            F::Since(i, a, b) => F::Since(*i, g(a), g(b)),
            F::UntilNs(i, a, b) => F::UntilNs(*i, g(a), g(b)),
            F::SinceNs(i, a, b) => F::SinceNs(*i, g(a), g(b)),
            F::Rat(i, r) => F::Rat(*i, map_rat(r, &mut f)),
            F::FRat(i, r) => F::FRat(*i, map_rat(r, &mut f)),
            F::PRat(i, r) => F::PRat(*i, map_rat(r, &mut f)),
            F::Fk(k) => F::Fk(map_fk(k, &mut f)),
            F::Pk(k) => F::Pk(map_fk(k, &mut f)),
        }
    }

    /// Temporal operators, automata modalities and freeze quantifiers.
    pub fn is_modal(&self) -> bool {
        !matches!(
            self,
            F::True
                | F::False
                | F::Atom(_)
                | F::Not(_)
                | F::And(..)
                | F::Or(..)
                | F::Implies(..)
                | F::Iff(..)
                | F::TMinusX(..)
                | F::XMinusT(..)
        )
    }

    pub fn is_propositional(&self) -> bool {
        !self.is_modal()
            && !matches!(self, F::TMinusX(..) | F::XMinusT(..))
            && self.children().iter().all(|c| c.is_propositional())
    }

    /// Number of AST nodes, counting automata formula sets.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let F::Atom(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            F::TMinusX(x, _) | F::XMinusT(x, _) => BTreeSet::from([x.clone()]),
            F::Freeze(x, a) => {
                let mut v = a.free_vars();
                v.remove(x);
                v
            }
            _ => self.children().iter().flat_map(|c| c.free_vars()).collect(),
        }
    }

    /// All freeze variables, bound or free.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            F::Freeze(x, _) | F::TMinusX(x, _) | F::XMinusT(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    pub fn contains(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().iter().any(|c| c.contains(pred))
    }
}

fn map_rat(r: &RatArgs, f: &mut impl FnMut(&Formula) -> Formula) -> RatArgs {
    RatArgs {
        automaton: r.automaton.clone(),
        set: Arc::new(r.set.iter().map(f).collect()),
    }
}

fn map_fk(k: &FkArgs, f: &mut impl FnMut(&Formula) -> Formula) -> FkArgs {
    FkArgs {
        intervals: k.intervals.clone(),
        automata: k.automata.clone(),
        set: Arc::new(k.set.iter().map(f).collect()),
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
