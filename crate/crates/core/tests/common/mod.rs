//! Test-side oracles: a definitional evaluator, interval membership, NFA
//! simulation and word enumeration, written without the library's helpers.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use timelogic::automata::{Letter, SymbolicNfa};
use timelogic::formula::{parse, FkArgs, Formula};
use timelogic::timedword::{Endpoint, Event, Interval, TimedWord};

pub mod cm;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(n.into(), d.into())
}

pub fn member(iv: &Interval, v: &Q) -> bool {
    let above_lo = match iv.lo() {
        Endpoint::NegInf => true,
        Endpoint::PosInf => false,
        Endpoint::Finite(l) => {
            let l = q(l, 1);
            if iv.lo_closed() {
                *v >= l
            } else {
                *v > l
            }
        }
    };
    let below_hi = match iv.hi() {
        Endpoint::PosInf => true,
        Endpoint::NegInf => false,
        Endpoint::Finite(h) => {
            let h = q(h, 1);
            if iv.hi_closed() {
                *v <= h
            } else {
                *v < h
            }
        }
    };
    above_lo && below_hi
}

fn member_opt(iv: &Option<Interval>, v: &Q) -> bool {
    iv.as_ref().map_or(*v >= q(0, 1), |i| member(i, v))
}

/// Subset simulation straight off the transition relation.
pub fn nfa_accepts(nfa: &SymbolicNfa, word: &[Letter]) -> bool {
    let mut cur: BTreeSet<usize> = [nfa.init()].into();
    for l in word {
        cur = nfa
            .transitions()
            .iter()
            .filter(|(p, lab, _)| cur.contains(p) && lab == l)
            .map(|(_, _, t)| *t)
            .collect();
    }
    cur.iter().any(|s| nfa.accepting().contains(s))
}

/// Every timed word of length `1..=max_len` over non-empty subsets of
/// `props`, timestamps non-decreasing from 0 along `grid`.
pub fn all_words(props: &[&str], max_len: usize, grid: &[Q]) -> Vec<TimedWord> {
    let mut sets: Vec<BTreeSet<String>> = Vec::new();
    for mask in 1..(1u32 << props.len()) {
        sets.push(
            props
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.to_string())
                .collect(),
        );
    }
    let mut out = Vec::new();
    let mut partial: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &partial {
            let min_t = w.last().map_or(0, |(_, t)| *t);
            let times: Vec<usize> = if w.is_empty() {
                vec![0]
            } else {
                (min_t..grid.len()).collect()
            };
            for t in times {
                for s in 0..sets.len() {
                    let mut v = w.clone();
                    v.push((s, t));
                    next.push(v);
                }
            }
        }
        for w in &next {
            let events = w
                .iter()
                .map(|(s, t)| Event {
                    props: sets[*s].clone(),
                    time: grid[*t].clone(),
                })
                .collect();
            out.push(TimedWord::new(events).unwrap());
        }
        partial = next;
    }
    out
}

pub fn half_grid() -> Vec<Q> {
    (0..=4).map(|n| q(n, 2)).collect()
}

/// The definitional semantics, with no memoization and tuple enumeration
/// for the Pnueli modalities.
pub struct Naive<'w> {
    pub word: &'w TimedWord,
}

type Val = BTreeMap<String, Q>;

impl Naive<'_> {
    fn n(&self) -> usize {
        self.word.len()
    }

    fn t(&self, i: usize) -> &Q {
        &self.word.events()[i - 1].time
    }

    pub fn holds(&self, f: &Formula, i: usize) -> bool {
        let mut val = Val::new();
        for x in f.variables() {
            val.insert(x, q(0, 1));
        }
        self.sat(f, i, &val)
    }

    fn letter(&self, set: &[Formula], z: usize, val: &Val) -> Letter {
        Letter::from_indices((0..set.len()).filter(|k| self.sat(&set[*k], z, val)))
    }

    fn seg(
        &self,
        set: &[Formula],
        positions: impl Iterator<Item = usize>,
        val: &Val,
    ) -> Vec<Letter> {
        positions.map(|z| self.letter(set, z, val)).collect()
    }

    fn until(&self, iv: &Option<Interval>, a: &Formula, b: &Formula, i: usize, val: &Val) -> bool {
        (i + 1..=self.n()).any(|j| {
            member_opt(iv, &(self.t(j) - self.t(i)))
                && self.sat(b, j, val)
                && (i + 1..j).all(|k| self.sat(a, k, val))
        })
    }

    fn since(&self, iv: &Option<Interval>, a: &Formula, b: &Formula, i: usize, val: &Val) -> bool {
        (1..i).any(|j| {
            member_opt(iv, &(self.t(i) - self.t(j)))
                && self.sat(b, j, val)
                && (j + 1..i).all(|k| self.sat(a, k, val))
        })
    }

    // All non-decreasing (future) or non-increasing (past) anchor tuples.
    fn tuples(&self, i0: usize, k: usize, future: bool) -> Vec<Vec<usize>> {
        let mut acc = vec![vec![i0]];
        for _ in 0..k {
            let mut next = Vec::new();
            for t in &acc {
                let last = *t.last().unwrap();
                let range: Vec<usize> = if future {
                    (last..=self.n()).collect()
                } else {
                    (1..=last).collect()
                };
                for p in range {
                    let mut u = t.clone();
                    u.push(p);
                    next.push(u);
                }
            }
            acc = next;
        }
        acc
    }

    fn pnueli(&self, args: &FkArgs, i0: usize, val: &Val, future: bool) -> bool {
        let k = args.arity();
        self.tuples(i0, k, future).into_iter().any(|anchors| {
            let timed = (1..=k).all(|w| {
                let d = if future {
                    self.t(anchors[w]) - self.t(i0)
                } else {
                    self.t(i0) - self.t(anchors[w])
                };
                member(&args.intervals[w - 1], &d)
            });
            timed
                && (0..=k).all(|w| {
                    let from = anchors[w];
                    let segment: Vec<usize> = if future {
                        let to = if w == k { self.n() } else { anchors[w + 1] };
                        (from + 1..=to).collect()
                    } else {
                        let to = if w == k { 1 } else { anchors[w + 1] };
                        (to..from).rev().collect()
                    };
                    nfa_accepts(
                        &args.automata[w],
                        &self.seg(&args.set, segment.into_iter(), val),
                    )
                })
        })
    }

    pub fn sat(&self, f: &Formula, i: usize, val: &Val) -> bool {
        use Formula as F;
        let n = self.n();
        let zero = q(0, 1);
        match f {
            F::True => true,
            F::False => false,
            F::Atom(p) => self.word.events()[i - 1].props.contains(p),
            F::Not(a) => !self.sat(a, i, val),
            F::And(a, b) => self.sat(a, i, val) && self.sat(b, i, val),
            F::Or(a, b) => self.sat(a, i, val) || self.sat(b, i, val),
            F::Implies(a, b) => !self.sat(a, i, val) || self.sat(b, i, val),
            F::Iff(a, b) => self.sat(a, i, val) == self.sat(b, i, val),
            F::Until(iv, a, b) => self.until(iv, a, b, i, val),
            F::Since(iv, a, b) => self.since(iv, a, b, i, val),
            F::UntilNs(iv, a, b) => {
                (member_opt(iv, &zero) && self.sat(b, i, val))
                    || (self.sat(a, i, val) && self.until(iv, a, b, i, val))
            }
            F::SinceNs(iv, a, b) => {
                (member_opt(iv, &zero) && self.sat(b, i, val))
                    || (self.sat(a, i, val) && self.since(iv, a, b, i, val))
            }
            F::Eventually(iv, a) => self.until(iv, &F::True, a, i, val),
            F::EventuallyPast(iv, a) => self.since(iv, &F::True, a, i, val),
            F::Always(iv, a) => (i + 1..=n)
                .all(|j| !member_opt(iv, &(self.t(j) - self.t(i))) || self.sat(a, j, val)),
            F::AlwaysPast(iv, a) => {
                (1..i).all(|j| !member_opt(iv, &(self.t(i) - self.t(j))) || self.sat(a, j, val))
            }
            F::Next(iv, a) => {
                i < n && member_opt(iv, &(self.t(i + 1) - self.t(i))) && self.sat(a, i + 1, val)
            }
            F::Prev(iv, a) => {
                i > 1 && member_opt(iv, &(self.t(i) - self.t(i - 1))) && self.sat(a, i - 1, val)
            }
            F::EventuallyNs(a) => (i..=n).any(|j| self.sat(a, j, val)),
            F::AlwaysNs(a) => (i..=n).all(|j| self.sat(a, j, val)),
            F::Freeze(x, a) => {
                let mut inner = val.clone();
                inner.insert(x.clone(), self.t(i).clone());
                self.sat(a, i, &inner)
            }
            F::TMinusX(x, iv) => member(iv, &(self.t(i) - &val[x])),
            F::XMinusT(x, iv) => member(iv, &(&val[x] - self.t(i))),
            F::Rat(iv, r) => {
                let window: Vec<usize> = (i + 1..=n)
                    .filter(|j| member(iv, &(self.t(*j) - self.t(i))))
                    .collect();
                nfa_accepts(&r.automaton, &self.seg(&r.set, window.into_iter(), val))
            }
            F::FRat(iv, r) => (i..=n).any(|j| {
                member(iv, &(self.t(j) - self.t(i)))
                    && nfa_accepts(&r.automaton, &self.seg(&r.set, i + 1..=j, val))
            }),
            F::PRat(iv, r) => (1..=i).any(|j| {
                member(iv, &(self.t(i) - self.t(j)))
                    && nfa_accepts(&r.automaton, &self.seg(&r.set, (j..i).rev(), val))
            }),
            F::Fk(k) => self.pnueli(k, i, val, true),
            F::Pk(k) => self.pnueli(k, i, val, false),
        }
    }
}

/// Twenty closed formulas that between them use every node kind.
pub const SUITE: [&str; 20] = [
    "a U[(0,1)] b",
    "a S[[1,2]] !b",
    "(a & b) | !(a -> b)",
    "(a <-> b) Uns[[0,1]] b",
    "a Sns b",
    "F[(1,2)] (a & !b)",
    "P<>[[0,1]] b",
    "G[[0,1]] a",
    "PG[(0,2)] (a | b)",
    "O[(0,1)] b & Obar a",
    "Fns (a & Gns b)",
    "x.(a U (b & T-x in (1,2)))",
    "x.P<> (a & x-T in [0,1])",
    "(true U[(0,inf)] false) | !false",
    "Rat[[0,1]](a; b){({a} + {a,b})*}",
    "FRat[(0,2)](a; b){{a}* . {b}}",
    "PRat[[0,1]](a; b){any* . {a}}",
    "Fk[[0,1];[1,2]](a; b){any* | {b}* | @{states: p q; init: p; final: q; p -{f1}-> q; q -{f2}-> q}}",
    "Pk[[0,1]](a; F b){any* | any*}",
    "x.F (a & y.P<> (b & T-x in [1,2] & y-T in (0,1)))",
];

pub fn suite() -> Vec<Formula> {
    SUITE
        .iter()
        .map(|s| parse(s).unwrap_or_else(|e| panic!("{s}: {e}")))
        .collect()
}

pub mod strategies {
    use super::*;
    use proptest::prelude::*;

    pub fn word(max_len: usize) -> impl Strategy<Value = TimedWord> {
        prop::collection::vec((1u32..4, 0i64..3), 1..=max_len).prop_map(|points| {
            let mut t = q(0, 1);
            let events = points
                .into_iter()
                .enumerate()
                .map(|(k, (mask, step))| {
                    if k > 0 {
                        t = &t + q(step, 2);
                    }
                    let props = ["a", "b"]
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, p)| p.to_string())
                        .collect();
                    Event {
                        props,
                        time: t.clone(),
                    }
                })
                .collect();
            TimedWord::new(events).unwrap()
        })
    }

    pub fn interval() -> BoxedStrategy<Option<Interval>> {
        prop_oneof![
            Just(None),
            (0i64..3, 0i64..3, any::<bool>(), any::<bool>()).prop_filter_map(
                "non-empty",
                |(lo, len, lc, hc)| {
                    let hi = lo + len;
                    if len == 0 {
                        Interval::closed(lo, lo).ok().map(Some)
                    } else {
                        Interval::new(Endpoint::Finite(lo), Endpoint::Finite(hi), lc, hc)
                            .ok()
                            .map(Some)
                    }
                }
            ),
            (0i64..3, any::<bool>()).prop_map(|(lo, c)| Some(Interval::unbounded_from(lo, c))),
        ]
        .boxed()
    }

    /// Closed MTL formulas over `a` and `b` using every MTL node kind.
    pub fn mtl(depth: u32) -> impl Strategy<Value = Formula> {
        use Formula as F;
        let leaf = prop_oneof![
            Just(F::atom("a")),
            Just(F::atom("b")),
            Just(F::True),
            Just(F::False),
        ];
        leaf.prop_recursive(depth, 24, 2, |inner| {
            let i = interval();
            prop_oneof![
                inner.clone().prop_map(F::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| F::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| F::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| F::implies(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| F::iff(a, b)),
                (i.clone(), inner.clone(), inner.clone()).prop_map(|(i, a, b)| F::until(i, a, b)),
                (i.clone(), inner.clone(), inner.clone()).prop_map(|(i, a, b)| F::since(i, a, b)),
                (i.clone(), inner.clone(), inner.clone())
                    .prop_map(|(i, a, b)| F::until_ns(i, a, b)),
                (i.clone(), inner.clone(), inner.clone())
                    .prop_map(|(i, a, b)| F::since_ns(i, a, b)),
                (i.clone(), inner.clone()).prop_map(|(i, a)| F::eventually(i, a)),
                (i.clone(), inner.clone()).prop_map(|(i, a)| F::eventually_past(i, a)),
                (i.clone(), inner.clone()).prop_map(|(i, a)| F::always(i, a)),
                (i.clone(), inner.clone()).prop_map(|(i, a)| F::always_past(i, a)),
                (i.clone(), inner.clone()).prop_map(|(i, a)| F::next(i, a)),
                (i, inner.clone()).prop_map(|(i, a)| F::prev(i, a)),
                inner.clone().prop_map(F::eventually_ns),
                inner.prop_map(F::always_ns),
            ]
        })
    }

    /// One-variable TPTL: MTL plus `x.` binders and constraints on `x`.
    pub fn tptl(depth: u32) -> impl Strategy<Value = Formula> {
        use Formula as F;
        let constraint = (interval(), any::<bool>()).prop_map(|(i, fut)| {
            let i = i.unwrap_or_else(Interval::nonnegative);
            if fut {
                F::t_minus_x("x", i)
            } else {
                F::x_minus_t("x", i.negated())
            }
        });
        let leaf = prop_oneof![
            3 => Just(F::atom("a")),
            3 => Just(F::atom("b")),
            1 => Just(F::True),
            2 => constraint,
        ];
        let body = leaf.prop_recursive(depth, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(F::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| F::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| F::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| F::until(None, a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| F::since(None, a, b)),
                inner.clone().prop_map(|a| F::always(None, a)),
                inner.clone().prop_map(|a| F::always_past(None, a)),
                inner.prop_map(|a| F::freeze("x", a)),
            ]
        });
        body.prop_map(|b| F::freeze("x", b))
    }
}

/// `count` MTL formulas of the given depth, drawn deterministically from `seed`.
pub fn seeded_mtl(seed: u8, count: usize, depth: u32) -> Vec<Formula> {
    use proptest::strategy::{Strategy, ValueTree};
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    let strategy = strategies::mtl(depth);
    (0..count)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}

/// A reduction output broken on purpose, with the harness it must fail.
pub struct Mutation {
    pub label: String,
    pub phi: Formula,
    pub sigma: BTreeSet<String>,
    pub extra: BTreeSet<String>,
    pub mutated: Formula,
    pub oversampled: bool,
}

fn ab_set() -> BTreeSet<String> {
    ["a", "b"].iter().map(|s| s.to_string()).collect()
}

/// Ten mutations drawn from `seed`: five flattenings whose outermost
/// definition is weakened from `<->` to `->`, and five relativizations with
/// their first `act` guard dropped. Every template uses its nested modality
/// negatively, so the weakened witness can be set false everywhere.
pub fn seeded_mutations(seed: u8) -> Vec<Mutation> {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use timelogic::formula::{flatten, relativize};
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(seed));
    let windows = ["[0,1]", "(0,1]", "[1,2]", "(0,2)", "[0,inf)"];
    let flat_templates = [
        "G !(F{I} $p)",
        "G !($p U{I} $q)",
        "G !(P<>{I} $p)",
        "G !($p S{I} $q)",
        "G ($p -> !F{I} $q)",
    ];
    let rel_templates = [
        "F{I} !$p",
        "$q U{I} !$p",
        "F{I} !($p | $q)",
        "$p -> F{I} !$q",
        "($p | $q) U{I} !$p",
    ];
    let sigma = ab_set();
    let act = Formula::or_all(sigma.iter().map(Formula::atom));
    let instantiate = |t: &str, rng: &mut ChaCha8Rng| {
        let (p, q) = if rng.gen::<bool>() {
            ("a", "b")
        } else {
            ("b", "a")
        };
        let i = windows[rng.gen_range(0..windows.len())];
        parse(
            &t.replace("{I}", &format!("[{i}]"))
                .replace("$p", p)
                .replace("$q", q),
        )
        .unwrap()
    };
    let mut out = Vec::new();
    for t in flat_templates {
        let phi = instantiate(t, &mut rng);
        let flat = flatten(&phi, &sigma);
        let mut definitions = flat.temporal_definitions();
        let root = definitions.len() - 1;
        let (w, beta) = flat.definitions[root].clone();
        definitions[root] = Formula::always_ns(Formula::implies(Formula::atom(w), beta));
        let mut parts = vec![flat.main.clone()];
        parts.extend(definitions);
        parts.push(Formula::always_ns(act.clone()));
        out.push(Mutation {
            label: format!("weakened definition in {phi}"),
            extra: flat.witnesses.clone(),
            mutated: Formula::and_all(parts),
            sigma: sigma.clone(),
            oversampled: false,
            phi,
        });
    }
    for t in rel_templates {
        let phi = instantiate(t, &mut rng);
        let (body, dropped) = drop_first_guard(&relativize(&sigma, &phi), &act);
        assert!(dropped, "{phi}");
        out.push(Mutation {
            label: format!("dropped guard in {phi}"),
            extra: ["o".to_string()].into(),
            mutated: Formula::and(act.clone(), body),
            sigma: sigma.clone(),
            oversampled: true,
            phi,
        });
    }
    out
}

/// Replaces the first `act & x` met in pre-order by `x`.
pub fn drop_first_guard(f: &Formula, act: &Formula) -> (Formula, bool) {
    if let Formula::And(l, r) = f {
        if **l == *act {
            return ((**r).clone(), true);
        }
    }
    let mut done = false;
    let g = f.map_children(|c| {
        if done {
            return c.clone();
        }
        let (h, d) = drop_first_guard(c, act);
        done = d;
        h
    });
    (g, done)
}
