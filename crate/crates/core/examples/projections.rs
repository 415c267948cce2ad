// Simple and oversampled projections, and the action points that survive
// an oversampled projection.

use std::collections::BTreeSet;
use std::error::Error;
use std::io::Write;

use timelogic::timedword::{is_action_point, project_oversampled, project_simple, TimedWord};

pub fn run_example(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let erased: BTreeSet<String> = ["w".to_string(), "o".to_string()].into_iter().collect();

    let simple: TimedWord = "0 : a w\n3/10 : b\n11/10 : a w\n".parse()?;
    writeln!(out, "simple behaviour:\n{simple}")?;
    writeln!(out, "projected:\n{}", project_simple(&simple, &erased)?)?;

    let over: TimedWord = "0 : a\n1/2 : o\n4/5 : b\n1 : o\n11/10 : a\n".parse()?;
    writeln!(out, "oversampled behaviour:\n{over}")?;
    let actions: Vec<String> = (1..=over.len())
        .filter(|i| is_action_point(&over, *i, &erased))
        .map(|i| i.to_string())
        .collect();
    writeln!(out, "action points: {}", actions.join(" "))?;
    writeln!(out, "projected:\n{}", project_oversampled(&over, &erased)?)?;

    let bad: TimedWord = "0 : o\n1 : a\n".parse()?;
    writeln!(
        out,
        "leading oversampling point: {}",
        project_oversampled(&bad, &erased).unwrap_err()
    )?;
    let bad: TimedWord = "0 : w\n".parse()?;
    writeln!(
        out,
        "point left empty: {}",
        project_simple(&bad, &erased).unwrap_err()
    )?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&mut std::io::stdout())
}
