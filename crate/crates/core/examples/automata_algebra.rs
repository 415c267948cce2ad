// Builds symbolic automata from text and regular expressions and combines
// them with concatenation, union, star, quotients and rewiring.

use std::error::Error;
use std::io::Write;

use timelogic::automata::{compile_regex, parse_automaton, Letter, RewireTarget, SymbolicNfa};

fn show(nfa: &SymbolicNfa, words: &[Vec<Letter>]) -> Result<String, Box<dyn Error>> {
    let mut marks = Vec::new();
    for w in words {
        marks.push(if nfa.accepts(w)? { "1" } else { "0" });
    }
    Ok(format!(
        "{} states, accepts {}",
        nfa.num_states(),
        marks.join("")
    ))
}

pub fn run_example(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let parsed = parse_automaton(
        "S: p q\nstates: even odd\ninit: even\nfinal: even\neven -{p}-> odd\nodd -{p}-> even\neven -{q}-> even\nodd -{q}-> odd\n",
    )?;
    let names = parsed.names.clone();
    let even_p = parsed.nfa;
    write!(out, "even number of p:\n{}", even_p.to_text(&names))?;

    let p = Letter::from_indices([0]);
    let q = Letter::from_indices([1]);
    let samples = vec![
        vec![],
        vec![p],
        vec![p, p],
        vec![q, p, q, p],
        vec![p, q],
        vec![q],
    ];
    writeln!(out, "samples: eps, p, pp, qpqp, pq, q")?;
    writeln!(out, "even_p          {}", show(&even_p, &samples)?)?;

    let ends_q = compile_regex("any* . {f2}", &names)?;
    writeln!(out, "any* . q        {}", show(&ends_q, &samples)?)?;
    writeln!(
        out,
        "concat          {}",
        show(&even_p.concat(&ends_q)?, &samples)?
    )?;
    writeln!(
        out,
        "union           {}",
        show(&even_p.union(&ends_q)?, &samples)?
    )?;
    writeln!(out, "star of q-end   {}", show(&ends_q.star(), &samples)?)?;
    writeln!(
        out,
        "p \\ even_p      {}",
        show(&even_p.left_quotient(p)?, &samples)?
    )?;
    writeln!(
        out,
        "even_p / q      {}",
        show(&even_p.right_quotient(q)?, &samples)?
    )?;
    let (even, odd) = (even_p.state_index("even")?, even_p.state_index("odd")?);
    writeln!(
        out,
        "odd p (rewired) {}",
        show(&even_p.rewire(even, RewireTarget::State(odd))?, &samples)?
    )?;
    writeln!(
        out,
        "universal       {}",
        show(&SymbolicNfa::universal(2), &samples)?
    )?;
    writeln!(out, "inline form: {}", even_p.to_inline())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&mut std::io::stdout())
}
