// Flattening with fresh witnesses and relativization to action points,
// checked for equisatisfiability over a bounded universe of words.

use std::collections::BTreeSet;
use std::error::Error;
use std::io::Write;

use timelogic::formula::{flatten, parse};
use timelogic::reductions::{
    flatten_mutation_fixture, relativized_formula, verify_oversampled_equisat,
    verify_simple_equisat, Universe,
};

fn names(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

pub fn run_example(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let sigma = names(&["a", "c", "d"]);
    let phi = parse("a U[[0,3]] (c S (P<>[[0,1]] d))")?;
    let flat = flatten(&phi, &sigma);
    writeln!(out, "flattening {phi}\n    main: {}", flat.main)?;
    for (w, beta) in &flat.definitions {
        writeln!(out, "    {w} <-> {beta}")?;
    }

    let sigma = names(&["a", "b"]);
    let u = Universe::default();
    let g = parse("G !F[[0,1]] a")?;
    let flat = flatten(&g, &sigma);
    let report = verify_simple_equisat(&g, &flat.assembled(), &sigma, &flat.witnesses, &u);
    writeln!(
        out,
        "{g}: {} extended words, {} models, equisatisfiable: {}",
        report.extended_words,
        report.psi_models,
        report.holds()
    )?;

    let h = parse("F[[0,1]] !a")?;
    let rel = relativized_formula(&sigma, &h);
    let report = verify_oversampled_equisat(&h, &rel, &sigma, &names(&["o"]), &u);
    writeln!(
        out,
        "relativized {h}: {rel}\n    equisatisfiable: {}",
        report.holds()
    )?;

    let broken = flatten_mutation_fixture();
    let report = verify_simple_equisat(
        &broken.phi,
        &broken.mutated,
        &broken.sigma,
        &broken.extra,
        &u,
    );
    writeln!(
        out,
        "weakened definition caught: {} (counterexample:\n{})",
        !report.holds(),
        report.counterexample.unwrap_or_default().trim_end()
    )?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&mut std::io::stdout())
}
