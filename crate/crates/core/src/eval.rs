//! Pointwise semantics of [`Formula`] over finite timed words.
//!
//! Until and since are strict. Automata modalities read exact-truth letters
//! of their formula set. Results of modal subformulas are memoized per
//! (node, position, relevant valuation) for the lifetime of an [`Evaluator`].

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::automata::{AutomataError, Letter, StateSet, SymbolicNfa};
use crate::formula::{FkArgs, Formula as F, Formula, RatArgs};
use crate::timedword::{Interval, Time, TimedWord, TimedWordError};

/// Freeze-variable assignment.
pub type Valuation = BTreeMap<String, BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("freeze variable `{0}` has no value")]
    UnboundVariable(String),
    #[error(transparent)]
    Automaton(#[from] AutomataError),
    #[error(transparent)]
    Word(#[from] TimedWordError),
}

/// Truth of `Rat_I` when no position falls inside the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmptyWindowPolicy {
    /// Ask the automaton about the empty word.
    #[default]
    AcceptsEpsilon,
    /// Treat an empty window as a failed match.
    False,
}

/// The satisfaction triple `ρ, i, ν`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalContext<'a> {
    pub word: &'a TimedWord,
    pub pos: usize,
    pub valuation: Valuation,
}

/// Maps every free variable of `f` to 0.
pub fn zero_valuation(f: &Formula) -> Valuation {
    f.free_vars()
        .into_iter()
        .map(|x| (x, BigRational::zero()))
        .collect()
}

static TRUE: Formula = Formula::True;

type MemoKey = (usize, usize, Vec<BigRational>);

pub struct Evaluator<'a> {
    word: &'a TimedWord,
    policy: EmptyWindowPolicy,
    memo: HashMap<MemoKey, bool>,
    free: HashMap<usize, Rc<Vec<String>>>,
}

fn addr<T>(r: &T) -> usize {
    r as *const T as usize
}

impl<'a> Evaluator<'a> {
    pub fn new(word: &'a TimedWord) -> Self {
        Evaluator {
            word,
            policy: EmptyWindowPolicy::default(),
            memo: HashMap::new(),
            free: HashMap::new(),
        }
    }

    pub fn with_policy(mut self, policy: EmptyWindowPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn word(&self) -> &'a TimedWord {
        self.word
    }

    pub fn eval(&mut self, f: &'a Formula, pos: usize, val: &Valuation) -> Result<bool, EvalError> {
        self.word.check_position(pos)?;
        self.ev(f, pos, val)
    }

    /// Truth at every position under the zero valuation.
    pub fn eval_all(&mut self, f: &'a Formula) -> Result<Vec<bool>, EvalError> {
        let val = zero_valuation(f);
        (1..=self.word.len()).map(|i| self.ev(f, i, &val)).collect()
    }

    fn tau(&self, i: usize) -> &'a Time {
        self.word.time(i)
    }

    fn gap(&self, from: usize, to: usize) -> Time {
        self.tau(to) - self.tau(from)
    }

    fn memo_key(&mut self, f: &'a Formula, pos: usize, val: &Valuation) -> Option<MemoKey> {
        let a = addr(f);
        if val.is_empty() {
            return Some((a, pos, Vec::new()));
        }
        let vars = self
            .free
            .entry(a)
            .or_insert_with(|| Rc::new(f.free_vars().into_iter().collect()))
            .clone();
        let values = vars
            .iter()
            .map(|x| val.get(x).cloned())
            .collect::<Option<Vec<_>>>()?;
        Some((a, pos, values))
    }

    fn ev(&mut self, f: &'a Formula, i: usize, val: &Valuation) -> Result<bool, EvalError> {
        if !f.is_modal() {
            return self.ev_local(f, i, val);
        }
        let key = self.memo_key(f, i, val);
        if let Some(k) = &key {
            if let Some(v) = self.memo.get(k) {
                return Ok(*v);
            }
        }
        let v = self.ev_modal(f, i, val)?;
        if let Some(k) = key {
            self.memo.insert(k, v);
        }
        Ok(v)
    }

    fn lookup(&self, x: &str, val: &Valuation) -> Result<Time, EvalError> {
        val.get(x)
            .cloned()
            .ok_or_else(|| EvalError::UnboundVariable(x.to_string()))
    }

    fn ev_local(&mut self, f: &'a Formula, i: usize, val: &Valuation) -> Result<bool, EvalError> {
        Ok(match f {
            F::True => true,
            F::False => false,
            F::Atom(p) => self.word.holds(i, p),
            F::Not(a) => !self.ev(a, i, val)?,
            F::And(a, b) => self.ev(a, i, val)? && self.ev(b, i, val)?,
            F::Or(a, b) => self.ev(a, i, val)? || self.ev(b, i, val)?,
            F::Implies(a, b) => !self.ev(a, i, val)? || self.ev(b, i, val)?,
            F::Iff(a, b) => self.ev(a, i, val)? == self.ev(b, i, val)?,
            F::TMinusX(x, iv) => iv.contains(&(self.tau(i) - self.lookup(x, val)?)),
            F::XMinusT(x, iv) => iv.contains(&(self.lookup(x, val)? - self.tau(i))),
            _ => unreachable!("modal node evaluated locally"),
        })
    }

    fn in_window(&self, iv: &Option<Interval>, d: &Time) -> bool {
        iv.is_none_or(|iv| iv.contains(d))
    }

    fn past_window(&self, iv: &Option<Interval>, d: &Time) -> bool {
        iv.is_some_and(|iv| iv.lies_below(d))
    }

    fn ev_modal(&mut self, f: &'a Formula, i: usize, val: &Valuation) -> Result<bool, EvalError> {
        let n = self.word.len();
        match f {
            F::Until(iv, a, b) => self.until(iv, a, b, i, val),
            F::Since(iv, a, b) => self.since(iv, a, b, i, val),
            F::UntilNs(iv, a, b) => {
                let now = self.in_window(iv, &BigRational::zero()) && self.ev(b, i, val)?;
                Ok(now || (self.ev(a, i, val)? && self.until(iv, a, b, i, val)?))
            }
            F::SinceNs(iv, a, b) => {
                let now = self.in_window(iv, &BigRational::zero()) && self.ev(b, i, val)?;
                Ok(now || (self.ev(a, i, val)? && self.since(iv, a, b, i, val)?))
            }
            F::Eventually(iv, a) => self.until(iv, &TRUE, a, i, val),
            F::EventuallyPast(iv, a) => self.since(iv, &TRUE, a, i, val),
            F::Always(iv, a) => {
                for j in i + 1..=n {
                    let d = self.gap(i, j);
                    if self.past_window(iv, &d) {
                        break;
                    }
                    if self.in_window(iv, &d) && !self.ev(a, j, val)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            F::AlwaysPast(iv, a) => {
                for j in (1..i).rev() {
                    let d = self.gap(j, i);
                    if self.past_window(iv, &d) {
                        break;
                    }
                    if self.in_window(iv, &d) && !self.ev(a, j, val)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            F::Next(iv, a) => {
                Ok(i < n && self.in_window(iv, &self.gap(i, i + 1)) && self.ev(a, i + 1, val)?)
            }
            F::Prev(iv, a) => {
                Ok(i > 1 && self.in_window(iv, &self.gap(i - 1, i)) && self.ev(a, i - 1, val)?)
            }
            F::EventuallyNs(a) => {
                for j in i..=n {
                    if self.ev(a, j, val)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            F::AlwaysNs(a) => {
                for j in i..=n {
                    if !self.ev(a, j, val)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            F::Freeze(x, a) => {
                let mut inner = val.clone();
                inner.insert(x.clone(), self.tau(i).clone());
                self.ev(a, i, &inner)
            }
            F::Rat(iv, r) => self.rat(iv, r, i, val),
            F::FRat(iv, r) => self.frat(iv, r, i, val),
            F::PRat(iv, r) => self.prat(iv, r, i, val),
            F::Fk(k) => self.fk(k, i, val),
            F::Pk(k) => self.pk(k, i, val),
            _ => self.ev_local(f, i, val),
        }
    }

    fn until(
        &mut self,
        iv: &Option<Interval>,
        a: &'a Formula,
        b: &'a Formula,
        i: usize,
        val: &Valuation,
    ) -> Result<bool, EvalError> {
        for j in i + 1..=self.word.len() {
            let d = self.gap(i, j);
            if self.past_window(iv, &d) {
                break;
            }
            if self.in_window(iv, &d) && self.ev(b, j, val)? {
                return Ok(true);
            }
            if !self.ev(a, j, val)? {
                break;
            }
        }
        Ok(false)
    }

    fn since(
        &mut self,
        iv: &Option<Interval>,
        a: &'a Formula,
        b: &'a Formula,
        i: usize,
        val: &Valuation,
    ) -> Result<bool, EvalError> {
        for j in (1..i).rev() {
            let d = self.gap(j, i);
            if self.past_window(iv, &d) {
                break;
            }
            if self.in_window(iv, &d) && self.ev(b, j, val)? {
                return Ok(true);
            }
            if !self.ev(a, j, val)? {
                break;
            }
        }
        Ok(false)
    }

    /// The exact-truth letter of `set` at position `z`.
    pub fn letter(
        &mut self,
        set: &'a [Formula],
        z: usize,
        val: &Valuation,
    ) -> Result<Letter, EvalError> {
        let mut bits = 0u32;
        for (k, g) in set.iter().enumerate() {
            if self.ev(g, z, val)? {
                bits |= 1 << k;
            }
        }
        Ok(Letter(bits))
    }

    /// Letters of positions `x, x+1, …, y`; empty when `x > y`.
    pub fn seg_plus(
        &mut self,
        x: usize,
        y: usize,
        set: &'a [Formula],
        val: &Valuation,
    ) -> Result<Vec<Letter>, EvalError> {
        (x..=y).map(|z| self.letter(set, z, val)).collect()
    }

    /// Letters of positions `x, x−1, …, y`; empty when `x < y`.
    pub fn seg_minus(
        &mut self,
        x: usize,
        y: usize,
        set: &'a [Formula],
        val: &Valuation,
    ) -> Result<Vec<Letter>, EvalError> {
        (y..=x).rev().map(|z| self.letter(set, z, val)).collect()
    }

    /// Positions `j > i` with `τ_j − τ_i ∈ I`, as an inclusive range.
    pub fn window(&self, i: usize, iv: &Interval) -> Option<(usize, usize)> {
        let members: Vec<usize> = (i + 1..=self.word.len())
            .take_while(|j| !iv.lies_below(&self.gap(i, *j)))
            .filter(|j| iv.contains(&self.gap(i, *j)))
            .collect();
        Some((*members.first()?, *members.last()?))
    }

    pub fn tseg(
        &mut self,
        i: usize,
        iv: &Interval,
        set: &'a [Formula],
        val: &Valuation,
    ) -> Result<Vec<Letter>, EvalError> {
        match self.window(i, iv) {
            Some((x, y)) => self.seg_plus(x, y, set, val),
            None => Ok(Vec::new()),
        }
    }

    fn rat(
        &mut self,
        iv: &Interval,
        r: &'a RatArgs,
        i: usize,
        val: &Valuation,
    ) -> Result<bool, EvalError> {
        let seg = self.tseg(i, iv, &r.set, val)?;
        if seg.is_empty() && self.policy == EmptyWindowPolicy::False {
            return Ok(false);
        }
        Ok(r.automaton.accepts(&seg)?)
    }

    fn frat(
        &mut self,
        iv: &Interval,
        r: &'a RatArgs,
        i: usize,
        val: &Valuation,
    ) -> Result<bool, EvalError> {
        let nfa = &r.automaton;
        let mut cur = nfa.initial_set();
        for j in i..=self.word.len() {
            if j > i {
                let l = self.letter(&r.set, j, val)?;
                cur = nfa.advance(&cur, l);
            }
            let d = self.gap(i, j);
            if iv.lies_below(&d) || cur.is_empty() {
                break;
            }
            if iv.contains(&d) && nfa.any_accepting(&cur) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn prat(
        &mut self,
        iv: &Interval,
        r: &'a RatArgs,
        i: usize,
        val: &Valuation,
    ) -> Result<bool, EvalError> {
        let nfa = &r.automaton;
        let mut cur = nfa.initial_set();
        for j in (1..=i).rev() {
            if j < i {
                let l = self.letter(&r.set, j, val)?;
                cur = nfa.advance(&cur, l);
            }
            let d = self.gap(j, i);
            if iv.lies_below(&d) || cur.is_empty() {
                break;
            }
            if iv.contains(&d) && nfa.any_accepting(&cur) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    // Cut positions reachable for the next anchor, scanning forward (or
    // backward) from each current cut while the automaton stays alive.
    #[allow(clippy::too_many_arguments)]
    fn next_cuts(
        &mut self,
        nfa: &SymbolicNfa,
        iv: &Interval,
        set: &'a [Formula],
        i0: usize,
        cuts: &[usize],
        forward: bool,
        val: &Valuation,
    ) -> Result<Vec<usize>, EvalError> {
        let n = self.word.len();
        let mut reached = vec![false; n + 1];
        for &p in cuts {
            let mut cur: StateSet = nfa.initial_set();
            let mut q = p;
            loop {
                let d = if forward {
                    self.gap(i0, q)
                } else {
                    self.gap(q, i0)
                };
                if iv.lies_below(&d) {
                    break;
                }
                if iv.contains(&d) && nfa.any_accepting(&cur) {
                    reached[q] = true;
                }
                let next = if forward {
                    (q < n).then_some(q + 1)
                } else {
                    (q > 1).then_some(q - 1)
                };
                let Some(nq) = next else { break };
                cur = nfa.advance(&cur, self.letter(set, nq, val)?);
                if cur.is_empty() {
                    break;
                }
                q = nq;
            }
        }
        Ok((1..=n).filter(|q| reached[*q]).collect())
    }

    fn fk_generic(
        &mut self,
        k: &'a FkArgs,
        i0: usize,
        val: &Valuation,
        forward: bool,
    ) -> Result<bool, EvalError> {
        let mut cuts = vec![i0];
        for (w, iv) in k.intervals.iter().enumerate() {
            cuts = self.next_cuts(&k.automata[w], iv, &k.set, i0, &cuts, forward, val)?;
            if cuts.is_empty() {
                return Ok(false);
            }
        }
        let last = k.automata.last().expect("k+1 automata");
        let n = self.word.len();
        for p in cuts {
            let seg = if forward {
                self.seg_plus(p + 1, n, &k.set, val)?
            } else {
                self.seg_minus(p.saturating_sub(1), 1, &k.set, val)?
            };
            if last.accepts(&seg)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn fk(&mut self, k: &'a FkArgs, i0: usize, val: &Valuation) -> Result<bool, EvalError> {
        self.fk_generic(k, i0, val, true)
    }

    fn pk(&mut self, k: &'a FkArgs, i0: usize, val: &Valuation) -> Result<bool, EvalError> {
        self.fk_generic(k, i0, val, false)
    }
}

/// `ρ, pos, 0̄ ⊨ f`.
pub fn eval(word: &TimedWord, pos: usize, f: &Formula) -> Result<bool, EvalError> {
    Evaluator::new(word).eval(f, pos, &zero_valuation(f))
}

pub fn eval_with(
    word: &TimedWord,
    pos: usize,
    val: &Valuation,
    f: &Formula,
) -> Result<bool, EvalError> {
    Evaluator::new(word).eval(f, pos, val)
}

pub fn eval_ctx(ctx: &EvalContext<'_>, f: &Formula) -> Result<bool, EvalError> {
    eval_with(ctx.word, ctx.pos, &ctx.valuation, f)
}

/// Top-level satisfaction `ρ ⊨ f`: position 1, zero valuation.
pub fn satisfies(word: &TimedWord, f: &Formula) -> Result<bool, EvalError> {
    eval(word, 1, f)
}

pub fn seg_plus(
    word: &TimedWord,
    x: usize,
    y: usize,
    set: &[Formula],
) -> Result<Vec<Letter>, EvalError> {
    let val = set.iter().flat_map(zero_valuation).collect();
    Evaluator::new(word).seg_plus(x, y, set, &val)
}

pub fn seg_minus(
    word: &TimedWord,
    x: usize,
    y: usize,
    set: &[Formula],
) -> Result<Vec<Letter>, EvalError> {
    let val = set.iter().flat_map(zero_valuation).collect();
    Evaluator::new(word).seg_minus(x, y, set, &val)
}

pub fn tseg(
    word: &TimedWord,
    i: usize,
    iv: &Interval,
    set: &[Formula],
) -> Result<Vec<Letter>, EvalError> {
    let val = set.iter().flat_map(zero_valuation).collect();
    Evaluator::new(word).tseg(i, iv, set, &val)
}
