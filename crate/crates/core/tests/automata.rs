mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::nfa_accepts;
use proptest::prelude::*;
use timelogic::automata::{
    compile_regex, parse_automaton, parse_regex, Letter, Regex, RewireTarget, SymbolicNfa,
};

fn names(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn ab() -> Vec<String> {
    names(&["a", "b"])
}

fn l(bits: u32) -> Letter {
    Letter(bits)
}

const A: Letter = Letter(1);
const B: Letter = Letter(2);

fn words(width: usize, max_len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..1u32 << width).map(Letter).collect();
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &c in &letters {
                let mut v: Vec<Letter> = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// Explicit subset construction: the whole reachable DFA is built up front.
struct Dfa {
    start: usize,
    accepting: BTreeSet<usize>,
    delta: BTreeMap<(usize, Letter), usize>,
}

fn determinize(nfa: &SymbolicNfa) -> Dfa {
    let letters: Vec<Letter> = (0..1u32 << nfa.width()).map(Letter).collect();
    let start: BTreeSet<usize> = [nfa.init()].into();
    let mut index: BTreeMap<BTreeSet<usize>, usize> = [(start.clone(), 0)].into();
    let mut todo = vec![start];
    let mut delta = BTreeMap::new();
    while let Some(set) = todo.pop() {
        let from = index[&set];
        for &c in &letters {
            let to: BTreeSet<usize> = nfa
                .transitions()
                .iter()
                .filter(|(p, lab, _)| set.contains(p) && *lab == c)
                .map(|(_, _, q)| *q)
                .collect();
            let n = index.len();
            let id = *index.entry(to.clone()).or_insert_with(|| {
                todo.push(to.clone());
                n
            });
            delta.insert((from, c), id);
        }
    }
    let accepting = index
        .iter()
        .filter(|(s, _)| s.iter().any(|q| nfa.accepting().contains(q)))
        .map(|(_, id)| *id)
        .collect();
    Dfa {
        start: 0,
        accepting,
        delta,
    }
}

impl Dfa {
    fn run(&self, w: &[Letter]) -> bool {
        let end = w.iter().fold(self.start, |s, c| self.delta[&(s, *c)]);
        self.accepting.contains(&end)
    }
}

fn reaches(nfa: &SymbolicNfa, from: usize, to: usize, w: &[Letter]) -> bool {
    let mut cur: BTreeSet<usize> = [from].into();
    for c in w {
        cur = nfa
            .transitions()
            .iter()
            .filter(|(p, lab, _)| cur.contains(p) && lab == c)
            .map(|(_, _, q)| *q)
            .collect();
    }
    cur.contains(&to)
}

// Direct matcher on the regex tree: tries every split for concatenation and star.
fn matches(r: &Regex, w: &[Letter], width: usize) -> bool {
    match r {
        Regex::Empty => false,
        Regex::Epsilon => w.is_empty(),
        Regex::Letter(c) => w == [*c],
        Regex::Any => w.len() == 1 && w[0].fits(width),
        Regex::Union(a, b) => matches(a, w, width) || matches(b, w, width),
        Regex::Concat(a, b) => {
            (0..=w.len()).any(|k| matches(a, &w[..k], width) && matches(b, &w[k..], width))
        }
        Regex::Star(a) => {
            w.is_empty()
                || (1..=w.len()).any(|k| matches(a, &w[..k], width) && matches(r, &w[k..], width))
        }
    }
}

fn nfa_strategy(width: usize) -> impl Strategy<Value = SymbolicNfa> {
    let letters = 1u32 << width;
    (1usize..4).prop_flat_map(move |n| {
        (
            Just(n),
            0..n,
            prop::collection::btree_set(0..n, 0..=n),
            prop::collection::btree_set((0..n, 0..letters, 0..n), 0..8),
        )
            .prop_map(move |(n, init, acc, tr)| {
                let tr = tr.into_iter().map(|(p, c, q)| (p, Letter(c), q)).collect();
                SymbolicNfa::new(
                    width,
                    (0..n).map(|i| format!("q{i}")).collect(),
                    init,
                    acc,
                    tr,
                )
                .unwrap()
            })
    })
}

fn regex_strategy(width: usize) -> impl Strategy<Value = Regex> {
    let letters = 1u32 << width;
    let leaf = prop_oneof![
        Just(Regex::Empty),
        Just(Regex::Epsilon),
        Just(Regex::Any),
        (0..letters).prop_map(|c| Regex::Letter(Letter(c))),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Regex::concat(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Regex::union(a, b)),
            inner.prop_map(Regex::star),
        ]
    })
}

fn count_by_length(nfa: &SymbolicNfa, all: &[Vec<Letter>], max_len: usize) -> Vec<usize> {
    let mut counts = vec![0; max_len + 1];
    for w in all {
        if nfa.accepts(w).unwrap() {
            counts[w.len()] += 1;
        }
    }
    counts
}

#[test]
fn even_as_then_b() {
    let re = compile_regex("({a}.{a})*.{b}", &ab()).unwrap();
    assert!(re.accepts(&[A, A, B]).unwrap());
    assert!(!re.accepts(&[A, B]).unwrap());
    assert!(re.accepts(&[B]).unwrap());
    assert!(re.accepts(&[A, A, A, A, B]).unwrap());
    assert!(!re.accepts(&[A, A, l(3)]).unwrap());
}

#[test]
fn epsilon_follows_the_initial_state() {
    let re = compile_regex("{a}*", &ab()).unwrap();
    assert!(re.accepts(&[]).unwrap());
    let empty = compile_regex("empty", &ab()).unwrap();
    assert!(empty.accepting().is_empty() || empty.is_empty());
    assert!(!empty.accepts(&[]).unwrap());
    assert!(re.accepts(&[Letter(4)]).is_err());
}

#[test]
fn concat_reassembles_the_even_count_language() {
    let even = compile_regex("({a}.{a})*", &ab()).unwrap();
    let b = compile_regex("{b}", &ab()).unwrap();
    let whole = compile_regex("({a}.{a})*.{b}", &ab()).unwrap();
    let joined = even.concat(&b).unwrap();
    for w in words(2, 6) {
        assert_eq!(
            joined.accepts(&w).unwrap(),
            whole.accepts(&w).unwrap(),
            "{w:?}"
        );
    }
    let eps = SymbolicNfa::epsilon_only(2);
    for w in words(2, 5) {
        assert_eq!(
            whole.concat(&eps).unwrap().accepts(&w).unwrap(),
            whole.accepts(&w).unwrap()
        );
    }
}

#[test]
fn quotients_of_alternation() {
    let ab_lang = compile_regex("{a}.{b}", &ab()).unwrap();
    let r = ab_lang.right_quotient(B).unwrap();
    for w in words(2, 4) {
        assert_eq!(r.accepts(&w).unwrap(), w == [A]);
    }
    let star = compile_regex("({a}.{b})*", &ab()).unwrap();
    let both = star.left_quotient(A).unwrap().right_quotient(B).unwrap();
    let ba = compile_regex("({b}.{a})*", &ab()).unwrap();
    for w in words(2, 6) {
        let expected = ba.accepts(&w).unwrap();
        assert_eq!(both.accepts(&w).unwrap(), expected, "{w:?}");
    }
    let absent = star.left_quotient(Letter(3)).unwrap();
    assert!(words(2, 5).iter().all(|w| !absent.accepts(w).unwrap()));
}

#[test]
fn universal_language() {
    let u = SymbolicNfa::universal(2);
    assert!(u.accepts(&[]).unwrap());
    assert!(words(2, 4).iter().all(|w| u.accepts(w).unwrap()));
    let b = compile_regex("{b}.{a}", &ab()).unwrap();
    let suffix = u.concat(&b).unwrap();
    for w in words(2, 5) {
        let expected = w.ends_with(&[B, A]);
        assert_eq!(suffix.accepts(&w).unwrap(), expected, "{w:?}");
    }
}

#[test]
fn text_format_round_trip() {
    let text = "S: a b\nstates: p q\ninit: p\nfinal: q\np -{a}-> p\np -{a,b}-> q\n";
    let parsed = parse_automaton(text).unwrap();
    assert_eq!(parsed.names, ab());
    assert!(parsed.nfa.accepts(&[A, l(3)]).unwrap());
    let again = parse_automaton(&parsed.nfa.to_text(&parsed.names)).unwrap();
    assert_eq!(again.nfa.transitions(), parsed.nfa.transitions());
    assert!(parse_automaton("S: a\nstates: p\ninit: r\nfinal: p\n").is_err());
}

#[test]
fn regex_text_round_trip() {
    let r = parse_regex("({a}.{a})*.{b} + eps", &ab()).unwrap();
    let printed = r.to_string();
    let back = parse_regex(&printed, &names(&["f1", "f2"])).unwrap();
    for w in words(2, 5) {
        assert_eq!(matches(&r, &w, 2), matches(&back, &w, 2), "{printed}");
    }
}

#[test]
fn concat_counts_are_bounded_by_the_convolution() {
    let max = 5;
    let all = words(1, max);
    let conv = |x: &[usize], y: &[usize]| -> Vec<usize> {
        (0..=max)
            .map(|n| (0..=n).map(|k| x[k] * y[n - k]).sum())
            .collect()
    };
    let a = compile_regex("{f1}*", &names(&["f1"])).unwrap();
    let b = compile_regex("{}.{f1}*", &names(&["f1"])).unwrap();
    let (ca, cb) = (
        count_by_length(&a, &all, max),
        count_by_length(&b, &all, max),
    );
    assert_eq!(
        count_by_length(&a.concat(&b).unwrap(), &all, max),
        conv(&ca, &cb)
    );
    let any = SymbolicNfa::universal(1);
    let cu = count_by_length(&any, &all, max);
    let cc = count_by_length(&any.concat(&any).unwrap(), &all, max);
    assert!(cc.iter().zip(conv(&cu, &cu)).all(|(x, y)| *x <= y));
    assert!(cc[2] < conv(&cu, &cu)[2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn acceptance_matches_the_determinized_automaton(a in nfa_strategy(2), w in prop::collection::vec(0u32..4, 0..=6)) {
        let w: Vec<Letter> = w.into_iter().map(Letter).collect();
        prop_assert_eq!(a.accepts(&w).unwrap(), determinize(&a).run(&w));
        prop_assert_eq!(a.accepts(&w).unwrap(), nfa_accepts(&a, &w));
    }

    #[test]
    fn rewiring_follows_reachability(a in nfa_strategy(1)) {
        let all = words(1, 4);
        for q in 0..a.num_states() {
            let same = a.rewire(q, RewireTarget::Accepting).unwrap();
            prop_assert_eq!(same.transitions(), a.transitions());
            prop_assert_eq!(same.accepting(), a.accepting());
            prop_assert!(a.rewire(q, RewireTarget::State(q)).unwrap().accepts(&[]).unwrap());
            for t in 0..a.num_states() {
                let r = a.rewire(q, RewireTarget::State(t)).unwrap();
                prop_assert_eq!(r.transitions(), a.transitions());
                for w in &all {
                    prop_assert_eq!(r.accepts(w).unwrap(), reaches(&a, q, t, w));
                }
            }
        }
        let back = a.rewire(a.init(), RewireTarget::Accepting).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert!(a.rewire(a.num_states(), RewireTarget::Accepting).is_err());
    }

    #[test]
    fn concat_matches_split_enumeration(a in nfa_strategy(1), b in nfa_strategy(1)) {
        let c = a.concat(&b).unwrap();
        for w in words(1, 5) {
            let split = (0..=w.len()).any(|k| nfa_accepts(&a, &w[..k]) && nfa_accepts(&b, &w[k..]));
            prop_assert_eq!(c.accepts(&w).unwrap(), split, "{:?}", w);
        }
    }

    #[test]
    fn universal_prefix_accepts_suffixes(a in nfa_strategy(1)) {
        let c = SymbolicNfa::universal(1).concat(&a).unwrap();
        for w in words(1, 5) {
            let suffix = (0..=w.len()).any(|k| nfa_accepts(&a, &w[k..]));
            prop_assert_eq!(c.accepts(&w).unwrap(), suffix);
        }
    }

    #[test]
    fn quotient_identity(a in nfa_strategy(2), c in 0u32..4) {
        let c = Letter(c);
        let left = a.left_quotient(c).unwrap();
        let right = a.right_quotient(c).unwrap();
        for w in words(2, 4) {
            let mut cw = vec![c];
            cw.extend(&w);
            let mut wc = w.clone();
            wc.push(c);
            prop_assert_eq!(left.accepts(&w).unwrap(), nfa_accepts(&a, &cw));
            prop_assert_eq!(right.accepts(&w).unwrap(), nfa_accepts(&a, &wc));
        }
    }

    #[test]
    fn compiled_regex_matches_the_direct_matcher(r in regex_strategy(1)) {
        let nfa = r.compile(1).unwrap();
        for w in words(1, 5) {
            prop_assert_eq!(nfa.accepts(&w).unwrap(), matches(&r, &w, 1), "{} on {:?}", r, w);
        }
    }

    #[test]
    fn concat_counts_never_exceed_the_convolution(a in nfa_strategy(1), b in nfa_strategy(1)) {
        let max = 4;
        let all = words(1, max);
        let (ca, cb) = (count_by_length(&a, &all, max), count_by_length(&b, &all, max));
        let cc = count_by_length(&a.concat(&b).unwrap(), &all, max);
        for n in 0..=max {
            let bound: usize = (0..=n).map(|k| ca[k] * cb[n - k]).sum();
            prop_assert!(cc[n] <= bound);
            prop_assert_eq!(cc[n] == 0, bound == 0);
        }
    }
}
