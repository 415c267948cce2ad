use super::{FkArgs, Formula as F, Formula, RatArgs};
use crate::timedword::Interval;

fn sub(i: &Option<Interval>) -> String {
    i.map(|i| format!("[{i}]")).unwrap_or_default()
}

fn set_text(set: &[Formula]) -> String {
    set.iter().map(print).collect::<Vec<_>>().join("; ")
}

fn rat(name: &str, i: &Interval, r: &RatArgs) -> String {
    format!(
        "{name}[{i}]({}){{@{{{}}}}}",
        set_text(&r.set),
        r.automaton.to_inline()
    )
}

fn fk(name: &str, k: &FkArgs) -> String {
    let intervals: Vec<String> = k.intervals.iter().map(|i| i.to_string()).collect();
    let automata: Vec<String> = k
        .automata
        .iter()
        .map(|a| format!("@{{{}}}", a.to_inline()))
        .collect();
    format!(
        "{name}[{}]({}){{{}}}",
        intervals.join(";"),
        set_text(&k.set),
        automata.join(" | ")
    )
}

fn go(f: &Formula) -> String {
    let bin = |a: &Formula, op: &str, b: &Formula| format!("({} {op} {})", go(a), go(b));
    let un = |op: &str, a: &Formula| format!("{op} {}", go(a));
    match f {
        F::True => "true".into(),
        F::False => "false".into(),
        F::Atom(p) => p.clone(),
        F::Not(a) => format!("!{}", go(a)),
        F::And(a, b) => bin(a, "&", b),
        F::Or(a, b) => bin(a, "|", b),
        F::Implies(a, b) => bin(a, "->", b),
        F::Iff(a, b) => bin(a, "<->", b),
        F::Until(i, a, b) => bin(a, &format!("U{}", sub(i)), b),
        F::Since(i, a, b) => bin(a, &format!("S{}", sub(i)), b),
        F::UntilNs(i, a, b) => bin(a, &format!("Uns{}", sub(i)), b),
        F::SinceNs(i, a, b) => bin(a, &format!("Sns{}", sub(i)), b),
        F::Eventually(i, a) => un(&format!("F{}", sub(i)), a),
        F::EventuallyPast(i, a) => un(&format!("P<>{}", sub(i)), a),
        F::Always(i, a) => un(&format!("G{}", sub(i)), a),
        F::AlwaysPast(i, a) => un(&format!("PG{}", sub(i)), a),
        F::Next(i, a) => un(&format!("O{}", sub(i)), a),
        F::Prev(i, a) => un(&format!("Obar{}", sub(i)), a),
        F::EventuallyNs(a) => un("Fns", a),
        F::AlwaysNs(a) => un("Gns", a),
        F::Freeze(x, a) => format!("{x}.({})", print(a)),
        F::TMinusX(x, i) => format!("T-{x} in {i}"),
        F::XMinusT(x, i) => format!("{x}-T in {i}"),
        F::Rat(i, r) => rat("Rat", i, r),
        F::FRat(i, r) => rat("FRat", i, r),
        F::PRat(i, r) => rat("PRat", i, r),
        F::Fk(k) => fk("Fk", k),
        F::Pk(k) => fk("Pk", k),
    }
}

/// Canonical text form; `parse(print(f)) == f` for every formula.
pub fn print(f: &Formula) -> String {
    let s = go(f);
    let binary = matches!(
        f,
        F::And(..)
            | F::Or(..)
            | F::Implies(..)
            | F::Iff(..)
            | F::Until(..)
            | F::Since(..)
            | F::UntilNs(..)
            | F::SinceNs(..)
    );
    if binary {
        s[1..s.len() - 1].to_string()
    } else {
        s
    }
}
