// Runs a two-counter machine, encodes the run as a timed word and checks
// it against the formulas describing (incrementally erroneous) runs.

use std::error::Error;
use std::io::Write;

use timelogic::countermachine::{
    build_phi_cm, encode_run, parse_machine_file, phi_9, phi_iecm_conjuncts, run, sigma_iecm,
};
use timelogic::eval::satisfies;
use timelogic::formula::classify;

const MACHINE: &str = "\
counters: 2
1: inc 1 goto 2
2: inc 1 goto 3
3: ifz 1 goto 6 else 4
4: dec 1 goto 5
5: inc 2 goto 3
6: halt
";

pub fn run_example(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let (m, schedule) = parse_machine_file(MACHINE)?;
    let r = run(&m, 100, &schedule)?;
    writeln!(
        out,
        "run of {} steps, halted: {}",
        r.configs.len() - 1,
        r.halted
    )?;
    for c in &r.configs {
        writeln!(out, "    {c}")?;
    }
    let w = encode_run(&m, &r)?;
    writeln!(out, "alphabet: {}", sigma_iecm(&m).join(" "))?;
    writeln!(out, "encoding has {} points; first configuration:", w.len())?;
    for e in w.events().iter().take_while(|e| !e.props.contains("s.p2")) {
        let props: Vec<&str> = e.props.iter().map(String::as_str).collect();
        writeln!(out, "    {} : {}", e.time, props.join(" "))?;
    }
    for (name, f) in phi_iecm_conjuncts(&m) {
        writeln!(out, "{name:<14} {}", satisfies(&w, &f)?)?;
    }
    writeln!(out, "phi9           {}", satisfies(&w, &phi_9(&m))?)?;
    let cm = build_phi_cm(&m);
    writeln!(
        out,
        "phi_CM         {} (open TPTL: {})",
        satisfies(&w, &cm)?,
        classify(&cm).is_open_tptl
    )?;

    let (m, schedule) = parse_machine_file(&format!("{MACHINE}step 3: +1 +0\n"))?;
    let r = run(&m, 100, &schedule)?;
    let w = encode_run(&m, &r)?;
    writeln!(
        out,
        "with an incremental error: final {}, phi_CM {}",
        r.last(),
        satisfies(&w, &build_phi_cm(&m))?
    )?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&mut std::io::stdout())
}
