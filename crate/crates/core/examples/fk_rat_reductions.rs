// Converts between the windowed Fk/Pk modalities and the single-window Rat
// modality, expresses Until through Rat, and fuzzes the conversions.

use std::error::Error;
use std::io::Write;

use timelogic::eval::Evaluator;
use timelogic::formula::parse;
use timelogic::reductions::fuzz::{run, Target};
use timelogic::reductions::{fk_to_rat, rat_to_fk, until_via_frat};
use timelogic::timedword::TimedWord;

pub fn run_example(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let word: TimedWord = "0 : a\n1/2 : b\n3/2 : a b\n2 : b\n".parse()?;
    let mut ev = Evaluator::new(&word);

    let fk = parse("Fk[[0,1];[1,2]](a; b){{f1}* | {f2} . any* | any*}")?;
    let report = fk_to_rat(&fk)?;
    writeln!(
        out,
        "Fk to Rat: size {} -> {}, {} state tuples before pruning, {} disjuncts",
        report.input_size,
        report.output_size,
        report.tuples_before_pruning,
        report.witness_states.len()
    )?;
    for (window, covering) in &report.windows {
        writeln!(out, "    window {window} covered by {covering:?}")?;
    }
    writeln!(
        out,
        "    agree on word: {}",
        ev.eval_all(&fk)? == ev.eval_all(&report.output)?
    )?;

    let rat = parse("Rat[[1,2]](a; b){({f1} . {f2})* + {f2}}")?;
    let report = rat_to_fk(&rat)?;
    writeln!(
        out,
        "Rat to Fk: size {} -> {}, agree on word: {}",
        report.input_size,
        report.output_size,
        ev.eval_all(&rat)? == ev.eval_all(&report.output)?
    )?;

    let until = parse("a U[(0,2)] b")?;
    let via = until_via_frat(&until)?;
    writeln!(
        out,
        "{until} as {via}\n    agree on word: {}",
        ev.eval_all(&until)? == ev.eval_all(&via)?
    )?;

    for target in Target::ALL {
        write!(out, "fuzz {}", run(target, 7, 25))?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&mut std::io::stdout())
}
