// Negation normal form, desugaring to the core operators, and the MTL to
// TPTL embedding, each checked on a word.

use std::error::Error;
use std::io::Write;

use timelogic::eval::Evaluator;
use timelogic::formula::{desugar, embed_mtl, is_nnf, parse, to_nnf};
use timelogic::timedword::TimedWord;

pub fn run_example(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let word: TimedWord = "0 : a\n1/2 : a b\n3/2 : b\n2 : a\n".parse()?;
    for src in [
        "!(a U[[0,1]] b)",
        "!G[(0,2)] (a -> F b)",
        "x.!(T-x in [1,2))",
        "a Uns b",
    ] {
        let f = parse(src)?;
        let nnf = to_nnf(&f);
        let core = desugar(&f);
        let mut ev = Evaluator::new(&word);
        let same =
            ev.eval_all(&f)? == ev.eval_all(&nnf)? && ev.eval_all(&f)? == ev.eval_all(&core)?;
        writeln!(
            out,
            "{f}\n    nnf:     {nnf} (nnf: {})\n    desugar: {core}\n    agree on word: {same}",
            is_nnf(&nnf)
        )?;
    }
    let mtl = parse("a U[(1,2)] b")?;
    writeln!(out, "embedding of {mtl}: {}", embed_mtl(&mtl))?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&mut std::io::stdout())
}
