// Evaluates MTL, TPTL and automata-modality formulas on a small timed word.

use std::error::Error;
use std::io::Write;

use timelogic::eval::{seg_plus, tseg, Evaluator};
use timelogic::formula::parse;
use timelogic::timedword::{Interval, TimedWord};

pub fn run_example(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let word: TimedWord = "0 : a\n1/2 : b\n0.95 : b\n1.9 : b\n".parse()?;
    writeln!(out, "word:\n{word}")?;

    for src in [
        "F[(0,1)] b",
        "a U[[1,2]] b",
        "x.F (b & T-x in (1,2))",
        "Rat[(0,1)](b){{f1}*}",
        "Fk[[0,1];[1,2]](a; b){any* | {f2}* | any*}",
    ] {
        let f = parse(src)?;
        let truth = Evaluator::new(&word).eval_all(&f)?;
        let shown: Vec<&str> = truth.iter().map(|v| if *v { "T" } else { "." }).collect();
        writeln!(out, "{src:<45} {}", shown.join(" "))?;
    }

    let set = vec![parse("F[(0,1)] b")?, parse("F[(1,2)] b")?];
    let names: Vec<String> = set.iter().map(|f| f.to_string()).collect();
    let render = |letters: Vec<timelogic::automata::Letter>| {
        letters
            .iter()
            .map(|l| l.render(Some(&names)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "Seg+(1,3) = {}", render(seg_plus(&word, 1, 3, &set)?))?;
    writeln!(
        out,
        "TSeg(1,(0,1)) = {}",
        render(tseg(&word, 1, &Interval::open(0, 1)?, &set)?)
    )?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&mut std::io::stdout())
}
