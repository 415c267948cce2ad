// Places formulas in the syntactic fragments: MITL, PMTL, open TPTL and
// the non-adjacent classes.

use std::error::Error;
use std::io::Write;

use timelogic::formula::{classify, parse};

pub fn run_example(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    for src in [
        "a U[(0,1)] b & G[[1,3]] c",
        "a U[[1,1]] b & c S[[1,1]] d",
        "x.G (a -> !(T-x in [1,2]))",
        "x.(a U (b & T-x in (1,2) & T-x in (3,4)))",
        "x.(a U (b & T-x in [1,2] & (c U (d & T-x in [2,3]))))",
        "F (a & x.(F (b & T-x in (1,2) & F (c & T-x in (1,2)))))",
        "Fk[[0,1];[2,3]](a){any* | any* | any*}",
    ] {
        let report = classify(&parse(src)?);
        let flags: Vec<&str> = [
            ("mtl", report.is_mtl),
            ("mitl", report.is_mitl),
            ("pmtl", report.is_pmtl),
            ("1tptl", report.is_1tptl),
            ("open", report.is_open_tptl),
            ("na", report.is_na_1tptl),
            ("na+", report.is_na_plus),
            ("na-", report.is_na_minus),
        ]
        .into_iter()
        .filter(|(_, on)| *on)
        .map(|(name, _)| name)
        .collect();
        writeln!(
            out,
            "{src}\n    {} | pnemtl {}",
            flags.join(" "),
            report.pnemtl_adjacency
        )?;
    }
    let full = classify(&parse("x.(a U (b & T-x in [1,2] & T-x in [2,3]))")?);
    write!(out, "full report:\n{full}")?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&mut std::io::stdout())
}
