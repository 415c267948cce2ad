//! Golden counter machines and hand-made corruptions of their encodings.

use num_rational::BigRational;
use timelogic::countermachine::{
    encode_run, parse_machine_file, phi_iecm_conjuncts, run, CounterMachine, ErrorSchedule, Run,
};
use timelogic::eval::satisfies;
use timelogic::timedword::{Event, TimedWord};

pub fn load(name: &str) -> (CounterMachine, ErrorSchedule) {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_machine_file(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn golden(name: &str) -> (CounterMachine, Run, TimedWord) {
    let (m, s) = load(name);
    let r = run(&m, 200, &s).unwrap();
    let w = encode_run(&m, &r).unwrap();
    (m, r, w)
}

/// Names of the φ_IECM conjuncts that `w` violates.
pub fn failing(m: &CounterMachine, w: &TimedWord) -> Vec<String> {
    phi_iecm_conjuncts(m)
        .into_iter()
        .filter(|(_, f)| !satisfies(w, f).unwrap())
        .map(|(n, _)| n)
        .collect()
}

pub fn symbol(e: &Event) -> &str {
    e.props.iter().next().unwrap()
}

// Index of the first event of configuration `c` (configurations start at `s` markers).
pub fn config_start(w: &TimedWord, c: usize) -> usize {
    w.events()
        .iter()
        .enumerate()
        .filter(|(_, e)| symbol(e).starts_with("s."))
        .nth(c)
        .unwrap()
        .0
}

fn mid(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigRational::from_integer(2.into())
}

fn point(sym: &str, time: BigRational) -> Event {
    Event {
        props: [sym.to_string()].into_iter().collect(),
        time,
    }
}

fn first(w: &TimedWord, from: usize, sym: &str) -> usize {
    (from..w.len())
        .find(|i| symbol(&w.events()[*i]) == sym)
        .unwrap()
}

/// Removes the first `b.1` of configuration 2 of the loop golden.
pub fn delete_copied_b(w: &TimedWord) -> TimedWord {
    let mut events = w.events().to_vec();
    events.remove(first(w, config_start(w, 2), "b.1"));
    TimedWord::new(events).unwrap()
}

/// Inserts an extra `a.2 b.2` pair at the start of counter 2's block in
/// configuration 9 of the loop golden.
pub fn duplicate_pair(w: &TimedWord) -> TimedWord {
    let first_a = first(w, config_start(w, 9), "a.2");
    let (s_time, a_time) = (&w.events()[first_a - 1].time, &w.events()[first_a].time);
    let t1 = mid(s_time, a_time);
    let t2 = mid(&t1, a_time);
    let mut events = w.events().to_vec();
    events.insert(first_a, point("b.2", t2));
    events.insert(first_a, point("a.2", t1));
    TimedWord::new(events).unwrap()
}

/// Exchanges the `s` and `f` markers of configuration 1.
pub fn swap_markers(w: &TimedWord) -> TimedWord {
    let start = config_start(w, 1);
    let end = config_start(w, 2) - 1;
    let mut events = w.events().to_vec();
    let (s, f) = (events[start].props.clone(), events[end].props.clone());
    events[start].props = f;
    events[end].props = s;
    TimedWord::new(events).unwrap()
}

/// Puts a second `a.2` right after the first one of configuration 9.
pub fn consecutive_a(w: &TimedWord) -> TimedWord {
    let first_a = first(w, config_start(w, 9), "a.2");
    let t = mid(&w.events()[first_a].time, &w.events()[first_a + 1].time);
    let mut events = w.events().to_vec();
    events.insert(first_a + 1, point("a.2", t));
    TimedWord::new(events).unwrap()
}

/// Relabels configuration 1 of the branch golden as instruction 3.
pub fn wrong_successor(w: &TimedWord) -> TimedWord {
    let start = config_start(w, 1);
    let end = config_start(w, 2) - 1;
    let mut events = w.events().to_vec();
    events[start].props = ["s.p3".to_string()].into_iter().collect();
    events[end].props = ["f.p3".to_string()].into_iter().collect();
    TimedWord::new(events).unwrap()
}

/// Drops the first `a.1 b.1` pair of configuration 3 of the loop golden.
pub fn drop_pair(w: &TimedWord) -> TimedWord {
    let first_a = first(w, config_start(w, 3), "a.1");
    let mut events = w.events().to_vec();
    events.drain(first_a..first_a + 2);
    TimedWord::new(events).unwrap()
}
